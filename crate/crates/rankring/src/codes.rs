//! S-linear rank metric codes: rank, socle, injective envelope, residue
//! projection, minimum rank distance, instance generation, and the
//! reductions between field and ring instances.
//!
//! The envelope of a code C with generator Smith form left * G * right =
//! diag(d) is spanned by the first rank(C) rows b_i of right^{-1}; the code
//! itself is spanned by { d_i b_i } and its socle by { pi^{nu-1} b_i }.
//! Projecting the envelope to the residue field preserves both rank and
//! minimum distance, which is what makes distance computation over the
//! (much smaller) field code sound.

use num_bigint::BigUint;
use rand::RngCore;

use crate::error::{Error, Result};
use crate::ext::{ExtElem, Extension};
use crate::linalg::{self, Matrix, SmithForm};
use crate::ring::{ChainRing, Zpn};
use crate::shapes::Partition;

/// Default cap on distance enumerations.
pub const DEFAULT_DISTANCE_CAP: u64 = 1 << 24;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DistanceMethod {
    /// Enumerate the residue-field code of the envelope (q^{mk} words).
    SocleProjection,
    /// Enumerate all |C| ring codewords directly.
    Brute,
}

/// An S-linear code given by a generator matrix whose rows generate it.
#[derive(Clone)]
pub struct LinearCode {
    ext: Extension,
    gens: Matrix<Extension>,
    smith: SmithForm<Extension>,
}

impl std::fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "LinearCode(n={}, k={}, free={})",
            self.length(),
            self.rank(),
            self.is_free()
        )
    }
}

impl LinearCode {
    pub fn new(ext: Extension, gens: Matrix<Extension>) -> Result<LinearCode> {
        if gens.ring() != &ext {
            return Err(Error::MixedRings);
        }
        let smith = linalg::smith_normal_form(&gens);
        Ok(LinearCode { ext, gens, smith })
    }

    pub fn from_rows(ext: Extension, rows: Vec<Vec<ExtElem>>) -> Result<LinearCode> {
        let n = rows.first().map_or(0, |r| r.len());
        let gens = if rows.is_empty() {
            Matrix::zero(ext.clone(), 0, n)
        } else {
            Matrix::from_rows(ext.clone(), rows)?
        };
        LinearCode::new(ext, gens)
    }

    pub fn ext(&self) -> &Extension {
        &self.ext
    }

    pub fn gens(&self) -> &Matrix<Extension> {
        &self.gens
    }

    pub fn length(&self) -> usize {
        self.gens.cols()
    }

    /// k(C): the minimal number of generators.
    pub fn rank(&self) -> usize {
        self.smith.rank
    }

    pub fn is_zero(&self) -> bool {
        self.smith.rank == 0
    }

    pub fn is_free(&self) -> bool {
        self.smith.is_free()
    }

    /// Shape of C as a module over the chain ring S.
    pub fn shape(&self) -> Partition {
        let nu = self.ext.nu();
        let parts: Vec<u32> = (0..self.smith.rank)
            .map(|i| nu - self.smith.diag_valuation(i))
            .collect();
        Partition::new(parts).expect("diagonal valuations are weakly increasing")
    }

    /// |C| = q_S ^ (sum of the shape parts), exactly.
    pub fn cardinality(&self) -> BigUint {
        let exp: u32 = self.shape().sum().try_into().expect("desk-scale shape");
        self.ext.residue_size().pow(exp)
    }

    /// Ambient basis rows b_i spanning the chosen free hull.
    fn hull_rows(&self) -> Vec<Vec<ExtElem>> {
        (0..self.smith.rank)
            .map(|i| self.smith.right_inv.row(i).to_vec())
            .collect()
    }

    /// The injective envelope E(C): the free code spanned by the first
    /// rank(C) Smith basis rows of the ambient.
    pub fn envelope(&self) -> LinearCode {
        LinearCode::from_rows(self.ext.clone(), self.hull_rows())
            .expect("envelope rows share the code length")
    }

    /// soc(C) = pi^{nu-1} E(C), the unique minimal-submodule sum.
    pub fn socle(&self) -> LinearCode {
        let nu = self.ext.nu();
        let rows: Vec<Vec<ExtElem>> = self
            .hull_rows()
            .into_iter()
            .map(|row| {
                row.iter()
                    .map(|x| self.ext.mul_by_pi_power(x, nu - 1))
                    .collect()
            })
            .collect();
        LinearCode::from_rows(self.ext.clone(), rows).expect("socle rows share the code length")
    }

    /// Residue projection Psi(C) as a field code; `ZeroProjection` when the
    /// generators all project to zero (project the envelope instead).
    pub fn project(&self) -> Result<FieldCode> {
        let rf = self.ext.residue_field();
        let rows: Vec<Vec<ExtElem>> = self
            .gens
            .row_vecs()
            .into_iter()
            .map(|row| self.ext.psi_vec(&row))
            .collect();
        let code = FieldCode::from_spanning(rf, rows, self.length())?;
        if code.dim() == 0 {
            return Err(Error::ZeroProjection);
        }
        Ok(code)
    }

    /// Codeword membership, decided by solving over S.
    pub fn contains(&self, word: &[ExtElem]) -> Result<bool> {
        if word.len() != self.length() {
            return Err(Error::DimensionMismatch(format!(
                "word of length {} in a code of length {}",
                word.len(),
                self.length()
            )));
        }
        if self.gens.rows() == 0 {
            return Ok(word.iter().all(|x| self.ext.is_zero(x)));
        }
        linalg::in_row_module(&self.gens, word)
    }

    /// Visits every codeword exactly once (the zero word included),
    /// enumerated through the Smith parameterization of the module.
    pub fn enumerate_codewords(
        &self,
        cap: u64,
        visit: &mut dyn FnMut(&[ExtElem]),
    ) -> Result<()> {
        if self.cardinality() > cap.into() {
            return Err(Error::TooLarge(format!(
                "code has {} words (cap {cap}, override with RANKRING_MAX_ENUM)",
                self.cardinality()
            )));
        }
        let nu = self.ext.nu();
        let hull = self.hull_rows();
        let spans: Vec<Vec<ExtElem>> = (0..self.smith.rank)
            .map(|i| {
                let d = &self.smith.diag[i];
                hull[i].iter().map(|x| self.ext.mul(x, d)).collect()
            })
            .collect();
        let axes: Vec<Vec<ExtElem>> = (0..self.smith.rank)
            .map(|i| self.ext.residue_reps(nu - self.smith.diag_valuation(i)))
            .collect();
        let mut word = vec![self.ext.zero(); self.length()];
        self.enumerate_rec(&spans, &axes, 0, &mut word, visit);
        Ok(())
    }

    fn enumerate_rec(
        &self,
        spans: &[Vec<ExtElem>],
        axes: &[Vec<ExtElem>],
        i: usize,
        word: &mut Vec<ExtElem>,
        visit: &mut dyn FnMut(&[ExtElem]),
    ) {
        if i == spans.len() {
            visit(word);
            return;
        }
        for t in &axes[i] {
            if self.ext.is_zero(t) {
                self.enumerate_rec(spans, axes, i + 1, word, visit);
            } else {
                let mut next: Vec<ExtElem> = word
                    .iter()
                    .zip(&spans[i])
                    .map(|(w, s)| self.ext.add(w, &self.ext.mul(t, s)))
                    .collect();
                self.enumerate_rec(spans, axes, i + 1, &mut next, visit);
            }
        }
    }

    /// Minimum rank distance of the code.
    ///
    /// `SocleProjection` exhausts the residue-field code of the envelope,
    /// `Brute` exhausts the ring code itself; both agree.
    pub fn min_rank_distance(&self, method: DistanceMethod, cap: u64) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroCode);
        }
        match method {
            DistanceMethod::Brute => {
                let mut best: Option<usize> = None;
                self.enumerate_codewords(cap, &mut |word| {
                    if word.iter().all(|x| self.ext.is_zero(x)) {
                        return;
                    }
                    let r = self.ext.vector_rank(word);
                    if best.is_none_or(|b| r < b) {
                        best = Some(r);
                    }
                })?;
                best.ok_or(Error::ZeroCode)
            }
            DistanceMethod::SocleProjection => {
                let field_code = self.envelope().project()?;
                field_code.code().min_rank_distance(DistanceMethod::Brute, cap)
            }
        }
    }

    /// floor((d - 1) / 2).
    pub fn correction_capability(&self, d: usize) -> usize {
        (d - 1) / 2
    }

    /// Rank-metric Singleton bound
    /// log_|R| |C| <= max(m, n) (min(m, n) - d + 1), checked exactly.
    pub fn singleton_bound_holds(&self, d: usize) -> bool {
        let m = self.ext.degree() as u64;
        let n = self.length() as u64;
        let nu = self.ext.nu() as u64;
        // log_|R| |C| = m * sum(shape) / nu; compare cross-multiplied.
        let lhs = m * self.shape().sum();
        let rhs = nu * m.max(n) * (m.min(n) - (d as u64) + 1);
        lhs <= rhs
    }

    /// Parity-check matrix of a free code (NotFree otherwise).
    pub fn parity_check(&self) -> Result<Matrix<Extension>> {
        linalg::dual_code_matrix(&self.gens)
    }
}

/// Linear rank metric code over the residue field F_{q^m}, stored with its
/// generator rows reduced to a basis.
#[derive(Clone, Debug)]
pub struct FieldCode {
    inner: LinearCode,
}

impl FieldCode {
    /// Builds from rows required to already be independent.
    pub fn from_basis(field: Extension, rows: Vec<Vec<ExtElem>>) -> Result<FieldCode> {
        if field.nu() != 1 {
            return Err(Error::OutOfRange("field codes need nu = 1".into()));
        }
        let k = rows.len();
        let code = LinearCode::from_rows(field, rows)?;
        if code.rank() != k {
            return Err(Error::DependentRows);
        }
        Ok(FieldCode { inner: code })
    }

    /// Builds from spanning rows, reducing them to a basis of the row space.
    pub fn from_spanning(
        field: Extension,
        rows: Vec<Vec<ExtElem>>,
        length: usize,
    ) -> Result<FieldCode> {
        if field.nu() != 1 {
            return Err(Error::OutOfRange("field codes need nu = 1".into()));
        }
        let raw = LinearCode::from_rows(field.clone(), rows)?;
        if raw.length() != length {
            return Err(Error::DimensionMismatch(format!(
                "rows of length {} in a code of length {length}",
                raw.length()
            )));
        }
        // over a field the hull rows scaled by the (unit) diagonal are a
        // basis of the row space itself
        let basis = raw.hull_rows();
        let spans: Vec<Vec<ExtElem>> = (0..raw.rank())
            .map(|i| {
                basis[i]
                    .iter()
                    .map(|x| field.mul(x, &raw.smith.diag[i]))
                    .collect()
            })
            .collect();
        let code = LinearCode::from_rows(field, spans)?;
        Ok(FieldCode { inner: code })
    }

    pub fn code(&self) -> &LinearCode {
        &self.inner
    }

    pub fn field(&self) -> &Extension {
        self.inner.ext()
    }

    pub fn dim(&self) -> usize {
        self.inner.rank()
    }

    pub fn length(&self) -> usize {
        self.inner.length()
    }
}

/// Canonical lift of a field code into the chain ring S: a free code with
/// the same rank and the same minimum rank distance.
pub fn lift_field_code(ext: &Extension, cf: &FieldCode) -> Result<LinearCode> {
    if &ext.residue_field() != cf.field() {
        return Err(Error::MixedRings);
    }
    let rows: Vec<Vec<ExtElem>> = cf
        .code()
        .gens()
        .row_vecs()
        .into_iter()
        .map(|row| ext.lift_vec(&row))
        .collect();
    let lifted = LinearCode::from_rows(ext.clone(), rows)?;
    debug_assert!(lifted.is_free() && lifted.rank() == cf.dim());
    Ok(lifted)
}

/// A rank decoding instance over the field reduced to the chain ring:
/// C'' = soc(lift(C_f)) and y'' = pi^{nu-1} lift(y).
#[derive(Clone, Debug)]
pub struct ReducedRdInstance {
    /// The free lift C' of the field code.
    pub lifted: LinearCode,
    /// C'' = soc(C'), the code of the reduced instance.
    pub socle_code: LinearCode,
    /// y'' = pi^{nu-1} lift(y).
    pub y: Vec<ExtElem>,
    /// Decoding radius, unchanged by the reduction.
    pub t: usize,
}

/// Reduces a field RD instance (C_f, y, t) to a ring RD instance; answers
/// map back through [`socle_to_field`].
pub fn reduce_rd_instance(
    ext: &Extension,
    cf: &FieldCode,
    y: &[ExtElem],
    t: usize,
) -> Result<ReducedRdInstance> {
    if y.len() != cf.length() {
        return Err(Error::DimensionMismatch(format!(
            "received word of length {} for a code of length {}",
            y.len(),
            cf.length()
        )));
    }
    let lifted = lift_field_code(ext, cf)?;
    let socle_code = lifted.socle();
    let nu = ext.nu();
    let y_ring: Vec<ExtElem> = y
        .iter()
        .map(|x| ext.mul_by_pi_power(&ext.lift(x), nu - 1))
        .collect();
    Ok(ReducedRdInstance { lifted, socle_code, y: y_ring, t })
}

/// The isometry pi^{nu-1} S^n -> F_{q^m}^n: divides every coordinate by
/// pi^{nu-1} and projects. Fails when the vector is not in the socle.
pub fn socle_to_field(ext: &Extension, v: &[ExtElem]) -> Result<Vec<ExtElem>> {
    let nu = ext.nu();
    let rf = ext.residue_field();
    v.iter()
        .map(|x| {
            if ext.is_zero(x) {
                return Ok(rf.zero());
            }
            if ext.valuation(x) < nu - 1 {
                return Err(Error::OutOfRange(
                    "vector is not a pi^{nu-1} multiple".into(),
                ));
            }
            let divided: Vec<BigUint> = x
                .coeffs()
                .iter()
                .map(|c| c / ext.base().p().pow(nu - 1))
                .collect();
            Ok(ext.psi(&ext.elem_from_coords(&divided)))
        })
        .collect()
}

/// The reverse embedding F_{q^m}^n -> pi^{nu-1} S^n.
pub fn field_to_socle(ext: &Extension, v: &[ExtElem]) -> Vec<ExtElem> {
    let nu = ext.nu();
    v.iter()
        .map(|x| ext.mul_by_pi_power(&ext.lift(x), nu - 1))
        .collect()
}

/// Syndrome s = y H^T over S.
pub fn syndrome(ext: &Extension, y: &[ExtElem], h: &Matrix<Extension>) -> Result<Vec<ExtElem>> {
    if h.ring() != ext {
        return Err(Error::MixedRings);
    }
    if y.len() != h.cols() {
        return Err(Error::DimensionMismatch(format!(
            "word of length {} against H with {} columns",
            y.len(),
            h.cols()
        )));
    }
    Ok((0..h.rows())
        .map(|i| {
            let mut acc = ext.zero();
            for j in 0..h.cols() {
                acc = ext.add(&acc, &ext.mul(&y[j], h.get(i, j)));
            }
            acc
        })
        .collect())
}

/// Random free code of rank k: rejection-sample generator matrices until
/// the residue projection of the rows is independent.
pub fn random_free_code(
    ext: &Extension,
    n: usize,
    k: usize,
    rng: &mut dyn RngCore,
) -> Result<LinearCode> {
    if k > n {
        return Err(Error::OutOfRange(format!("rank {k} exceeds the length {n}")));
    }
    let rf = ext.residue_field();
    loop {
        let rows: Vec<Vec<ExtElem>> = (0..k)
            .map(|_| (0..n).map(|_| ext.random_element(rng)).collect())
            .collect();
        let projected: Vec<Vec<ExtElem>> = rows.iter().map(|r| ext.psi_vec(r)).collect();
        let flat: Vec<ExtElem> = projected.into_iter().flatten().collect();
        let proj = Matrix::new(rf.clone(), k, n, flat)?;
        if linalg::rank(&proj) == k {
            return LinearCode::from_rows(ext.clone(), rows);
        }
    }
}

/// Psi-independent elements of S spanning a free rank-r submodule.
pub fn sample_support_basis(
    ext: &Extension,
    r: usize,
    rng: &mut dyn RngCore,
) -> Result<Vec<ExtElem>> {
    if r > ext.degree() {
        return Err(Error::OutOfRange(format!(
            "support rank {r} exceeds the extension degree {}",
            ext.degree()
        )));
    }
    loop {
        let candidate: Vec<ExtElem> = (0..r).map(|_| ext.random_element(rng)).collect();
        if ext.residue_independent(&candidate) {
            return Ok(candidate);
        }
    }
}

/// r x n matrix over the base ring whose residue projection has full rank r.
pub fn sample_coordinate_matrix(
    base: &Zpn,
    r: usize,
    n: usize,
    rng: &mut dyn RngCore,
) -> Result<Matrix<Zpn>> {
    if r > n {
        return Err(Error::OutOfRange(format!("rank {r} exceeds {n} columns")));
    }
    let rf = base.residue_field();
    loop {
        let m = linalg::random_matrix(base, r, n, rng);
        let projected = m.map(rf.clone(), |e| base.residue_project(e));
        if linalg::rank(&projected) == r {
            return Ok(m);
        }
    }
}

/// Random error vector of rank exactly r: e = f X with f a free support
/// basis and X a full-residue-rank coordinate matrix. An optional shape
/// forces a non-free support of shape mu (mu must have r parts).
pub fn random_error(
    ext: &Extension,
    n: usize,
    r: usize,
    rng: &mut dyn RngCore,
    shape: Option<&Partition>,
) -> Result<Vec<ExtElem>> {
    if r > ext.degree() || r > n {
        return Err(Error::OutOfRange(format!(
            "error rank {r} exceeds min(m, n) = {}",
            ext.degree().min(n)
        )));
    }
    if r == 0 {
        return Ok(vec![ext.zero(); n]);
    }
    if let Some(mu) = shape {
        if mu.rank() != r {
            return Err(Error::OutOfRange(format!(
                "support shape must have exactly {r} parts"
            )));
        }
        if mu.part(1) > ext.nu() {
            return Err(Error::OutOfRange("shape parts cannot exceed nu".into()));
        }
    }
    let f = sample_support_basis(ext, r, rng)?;
    let x = sample_coordinate_matrix(ext.base(), r, n, rng)?;
    let nu = ext.nu();
    let scaled_f: Vec<ExtElem> = match shape {
        None => f,
        Some(mu) => f
            .iter()
            .enumerate()
            .map(|(i, fi)| ext.mul_by_pi_power(fi, nu - mu.part(i + 1)))
            .collect(),
    };
    Ok(error_from_support(ext, &scaled_f, &x))
}

/// e = f X: coordinate j is sum_i x_{i,j} f_i.
pub fn error_from_support(ext: &Extension, f: &[ExtElem], x: &Matrix<Zpn>) -> Vec<ExtElem> {
    debug_assert_eq!(f.len(), x.rows());
    (0..x.cols())
        .map(|j| {
            let mut acc = ext.zero();
            for (i, fi) in f.iter().enumerate() {
                let coeff = x.get(i, j);
                let mut scaled_coeffs: Vec<BigUint> = fi
                    .coeffs()
                    .iter()
                    .map(|c| ext.base().mul(c, coeff))
                    .collect();
                scaled_coeffs.truncate(ext.degree());
                acc = ext.add(&acc, &ext.elem_from_coords(&scaled_coeffs));
            }
            acc
        })
        .collect()
}
