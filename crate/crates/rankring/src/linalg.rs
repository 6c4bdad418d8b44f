//! Exact linear algebra over finite chain rings via the Smith normal form.
//!
//! Over a chain ring an entry of minimal valuation divides every other
//! entry, so Gaussian-style elimination never leaves the ring: pick such a
//! pivot, clear its row and column with exact divisions, recurse. The
//! resulting diagonal consists of powers of pi with weakly increasing
//! exponents, and the accumulated row/column transforms (together with their
//! inverses) carry all the module structure used elsewhere: rank, solution
//! modules, kernels, duals, envelopes and free completions.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::ring::ChainRing;

/// Dense row-major matrix over a chain ring.
#[derive(Clone)]
pub struct Matrix<R: ChainRing> {
    ring: R,
    rows: usize,
    cols: usize,
    entries: Vec<R::Elem>,
}

impl<R: ChainRing> PartialEq for Matrix<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.rows == other.rows
            && self.cols == other.cols
            && self.entries == other.entries
    }
}

impl<R: ChainRing> std::fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?} [", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl<R: ChainRing> Matrix<R> {
    pub fn new(ring: R, rows: usize, cols: usize, entries: Vec<R::Elem>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix { ring, rows, cols, entries })
    }

    pub fn zero(ring: R, rows: usize, cols: usize) -> Self {
        let entries = vec![ring.zero(); rows * cols];
        Matrix { ring, rows, cols, entries }
    }

    pub fn identity(ring: R, n: usize) -> Self {
        let mut m = Matrix::zero(ring, n, n);
        for i in 0..n {
            let one = m.ring.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_rows(ring: R, rows: Vec<Vec<R::Elem>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(ring, nrows, ncols, rows.into_iter().flatten().collect())
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R::Elem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: R::Elem) {
        self.entries[i * self.cols + j] = e;
    }

    pub fn row(&self, i: usize) -> &[R::Elem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<R::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<R::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix<R> {
        let mut t = Matrix::zero(self.ring.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.ring.is_zero(e))
    }

    pub fn mul_matrix(&self, other: &Matrix<R>) -> Result<Matrix<R>> {
        if self.ring != other.ring {
            return Err(Error::MixedRings);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zero(self.ring.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if self.ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let t = self.ring.mul(a, other.get(k, j));
                    let s = self.ring.add(out.get(i, j), &t);
                    out.set(i, j, s);
                }
            }
        }
        Ok(out)
    }

    /// A * v for a column vector v.
    pub fn mul_col_vec(&self, v: &[R::Elem]) -> Result<Vec<R::Elem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = self.ring.zero();
                for j in 0..self.cols {
                    let t = self.ring.mul(self.get(i, j), &v[j]);
                    acc = self.ring.add(&acc, &t);
                }
                acc
            })
            .collect())
    }

    /// v * A for a row vector v.
    pub fn mul_row_vec(&self, v: &[R::Elem]) -> Result<Vec<R::Elem>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        Ok((0..self.cols)
            .map(|j| {
                let mut acc = self.ring.zero();
                for i in 0..self.rows {
                    let t = self.ring.mul(&v[i], self.get(i, j));
                    acc = self.ring.add(&acc, &t);
                }
                acc
            })
            .collect())
    }

    pub fn map<S: ChainRing>(&self, ring: S, f: impl Fn(&R::Elem) -> S::Elem) -> Matrix<S> {
        Matrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &R::Elem) -> Matrix<R> {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = out.ring.mul(e, c);
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[i] += c * row[k]
    fn add_multiple_of_row(&mut self, i: usize, k: usize, c: &R::Elem) {
        for j in 0..self.cols {
            let t = self.ring.mul(c, self.get(k, j));
            let s = self.ring.add(self.get(i, j), &t);
            self.set(i, j, s);
        }
    }

    /// col[j] += c * col[k]
    fn add_multiple_of_col(&mut self, j: usize, k: usize, c: &R::Elem) {
        for i in 0..self.rows {
            let t = self.ring.mul(c, self.get(i, k));
            let s = self.ring.add(self.get(i, j), &t);
            self.set(i, j, s);
        }
    }

    fn scale_row(&mut self, i: usize, c: &R::Elem) {
        for j in 0..self.cols {
            let t = self.ring.mul(self.get(i, j), c);
            self.set(i, j, t);
        }
    }

    fn scale_col(&mut self, j: usize, c: &R::Elem) {
        for i in 0..self.rows {
            let t = self.ring.mul(self.get(i, j), c);
            self.set(i, j, t);
        }
    }
}

/// Smith normal form left * A * right = diag(d), with transform inverses.
///
/// Diagonal entries are exact powers of pi (or zero) with weakly increasing
/// valuations; `rank` counts the nonzero ones.
#[derive(Clone, Debug)]
pub struct SmithForm<R: ChainRing> {
    pub diag: Vec<R::Elem>,
    pub rank: usize,
    pub left: Matrix<R>,
    pub right: Matrix<R>,
    pub left_inv: Matrix<R>,
    pub right_inv: Matrix<R>,
}

impl<R: ChainRing> SmithForm<R> {
    /// Valuation of the i-th diagonal entry.
    pub fn diag_valuation(&self, i: usize) -> u32 {
        self.left.ring.valuation(&self.diag[i])
    }

    /// diag(d) as a matrix of the original shape.
    pub fn diag_matrix(&self) -> Matrix<R> {
        let ring = self.left.ring.clone();
        let mut d = Matrix::zero(ring, self.left.rows, self.right.cols);
        for (i, e) in self.diag.iter().enumerate() {
            d.set(i, i, e.clone());
        }
        d
    }

    /// True when every nonzero diagonal entry is a unit, i.e. the row module
    /// is free of rank `self.rank`.
    pub fn is_free(&self) -> bool {
        (0..self.rank).all(|i| self.diag_valuation(i) == 0)
    }
}

/// Computes the Smith normal form by minimal-valuation pivoting.
///
/// Ties are broken by the lexicographically smallest (row, col) so the
/// decomposition is reproducible bit for bit.
pub fn smith_normal_form<R: ChainRing>(a: &Matrix<R>) -> SmithForm<R> {
    let ring = a.ring().clone();
    let nu = ring.nu();
    let (rows, cols) = (a.rows(), a.cols());
    let mut work = a.clone();
    let mut left = Matrix::identity(ring.clone(), rows);
    let mut left_inv = Matrix::identity(ring.clone(), rows);
    let mut right = Matrix::identity(ring.clone(), cols);
    let mut right_inv = Matrix::identity(ring.clone(), cols);

    let steps = rows.min(cols);
    let mut rank = 0;
    for t in 0..steps {
        // Minimal-valuation pivot in the trailing submatrix.
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = ring.valuation(work.get(i, j));
                if v < nu && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };

        work.swap_rows(t, pi);
        left.swap_rows(t, pi);
        left_inv.swap_cols(t, pi);
        work.swap_cols(t, pj);
        right.swap_cols(t, pj);
        right_inv.swap_rows(t, pj);

        // Normalize the pivot to an exact power of pi.
        let u = ring.unit_part(work.get(t, t));
        if u != ring.one() {
            let u_inv = ring.invert_unit(&u).expect("unit part is a unit");
            work.scale_row(t, &u_inv);
            left.scale_row(t, &u_inv);
            left_inv.scale_col(t, &u);
        }
        let pivot = work.get(t, t).clone();

        // Clear the pivot column, then the pivot row.
        for i in t + 1..rows {
            if ring.is_zero(work.get(i, t)) {
                continue;
            }
            let f = ring.div_exact(work.get(i, t), &pivot);
            let neg_f = ring.neg(&f);
            work.add_multiple_of_row(i, t, &neg_f);
            left.add_multiple_of_row(i, t, &neg_f);
            left_inv.add_multiple_of_col(t, i, &f);
        }
        for j in t + 1..cols {
            if ring.is_zero(work.get(t, j)) {
                continue;
            }
            let f = ring.div_exact(work.get(t, j), &pivot);
            let neg_f = ring.neg(&f);
            work.add_multiple_of_col(j, t, &neg_f);
            right.add_multiple_of_col(j, t, &neg_f);
            right_inv.add_multiple_of_row(t, j, &f);
        }
        rank += 1;
    }

    let diag: Vec<R::Elem> = (0..steps).map(|i| work.get(i, i).clone()).collect();
    debug_assert!(
        diag.windows(2)
            .all(|w| ring.valuation(&w[0]) <= ring.valuation(&w[1])),
        "diagonal valuations must be weakly increasing"
    );
    SmithForm { diag, rank, left, right, left_inv, right_inv }
}

/// Rank of a matrix: the number of nonzero Smith diagonal entries.
///
/// Runs the same elimination as [`smith_normal_form`] without tracking the
/// transforms.
pub fn rank<R: ChainRing>(a: &Matrix<R>) -> usize {
    let ring = a.ring().clone();
    let nu = ring.nu();
    let (rows, cols) = (a.rows(), a.cols());
    let mut work = a.clone();
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = ring.valuation(work.get(i, j));
                if v < nu && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        work.swap_rows(t, pi);
        work.swap_cols(t, pj);
        let pivot = work.get(t, t).clone();
        for i in t + 1..rows {
            if ring.is_zero(work.get(i, t)) {
                continue;
            }
            let f = ring.neg(&ring.div_exact(work.get(i, t), &pivot));
            work.add_multiple_of_row(i, t, &f);
        }
        for j in t + 1..cols {
            if ring.is_zero(work.get(t, j)) {
                continue;
            }
            let f = ring.neg(&ring.div_exact(work.get(t, j), &pivot));
            work.add_multiple_of_col(j, t, &f);
        }
        rank += 1;
    }
    rank
}

/// Rank over Z_{p^nu}, taking a u64 fast lane when the modulus is small.
pub fn rank_over_zpn(a: &Matrix<crate::ring::Zpn>) -> usize {
    use num_traits::ToPrimitive;
    let ring = a.ring();
    let (Some(p), Some(modulus)) = (ring.p().to_u64(), ring.modulus().to_u64()) else {
        return rank(a);
    };
    let mut data: Vec<u64> = Vec::with_capacity(a.rows() * a.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            data.push(a.get(i, j).to_u64().expect("canonical residue fits"));
        }
    }
    rank_small_grid(p, modulus, ring.nu(), a.rows(), a.cols(), &mut data)
}

/// Smith-rank of a row-major u64 grid over Z_{p^nu} with modulus < 2^64.
/// Hot path for rank computations inside distance enumerations.
pub(crate) fn rank_small_grid(
    p: u64,
    modulus: u64,
    nu: u32,
    rows: usize,
    cols: usize,
    data: &mut [u64],
) -> usize {
    debug_assert_eq!(data.len(), rows * cols);
    let val = |mut x: u64| -> u32 {
        if x == 0 {
            return nu;
        }
        let mut v = 0;
        while v < nu && x % p == 0 {
            x /= p;
            v += 1;
        }
        v
    };
    let mulmod = |a: u64, b: u64| -> u64 { ((a as u128 * b as u128) % modulus as u128) as u64 };
    // inverse of a unit mod p^nu by extended Euclid
    let inv_unit = |a: u64| -> u64 {
        let (mut t, mut new_t): (i128, i128) = (0, 1);
        let (mut r, mut new_r): (i128, i128) = (modulus as i128, a as i128);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        debug_assert_eq!(r, 1);
        (t.rem_euclid(modulus as i128)) as u64
    };

    let mut rank = 0;
    for t in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = val(data[i * cols + j]);
                if v < nu && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((pv, pi, pj)) = best else { break };
        if pi != t {
            for j in 0..cols {
                data.swap(t * cols + j, pi * cols + j);
            }
        }
        if pj != t {
            for i in 0..rows {
                data.swap(i * cols + t, i * cols + pj);
            }
        }
        let pivot = data[t * cols + t];
        let p_unit_inv = inv_unit(pivot / p.pow(pv));
        for i in t + 1..rows {
            let e = data[i * cols + t];
            if e == 0 {
                continue;
            }
            let f = mulmod((e / p.pow(pv)) % modulus, p_unit_inv);
            for j in t..cols {
                let sub = mulmod(f, data[t * cols + j]);
                data[i * cols + j] =
                    ((data[i * cols + j] as u128 + modulus as u128 - sub as u128)
                        % modulus as u128) as u64;
            }
        }
        for j in t + 1..cols {
            let e = data[t * cols + j];
            if e == 0 {
                continue;
            }
            let f = mulmod((e / p.pow(pv)) % modulus, p_unit_inv);
            for i in t..rows {
                let sub = mulmod(f, data[i * cols + t]);
                data[i * cols + j] =
                    ((data[i * cols + j] as u128 + modulus as u128 - sub as u128)
                        % modulus as u128) as u64;
            }
        }
        rank += 1;
    }
    rank
}

/// Outcome of solving A x = b.
///
/// `free_valuations[i]` is the pi-exponent s_i such that, in the transformed
/// coordinates y = right^{-1} x, the homogeneous solutions are exactly the
/// vectors with y_i in (pi^{s_i}). The particular solution has every free
/// parameter set to zero.
#[derive(Clone, Debug)]
pub struct SolveOutcome<R: ChainRing> {
    pub particular: Option<Vec<R::Elem>>,
    pub free_valuations: Vec<u32>,
    smith: SmithForm<R>,
}

impl<R: ChainRing> SolveOutcome<R> {
    pub fn is_solvable(&self) -> bool {
        self.particular.is_some()
    }

    /// Number of solutions (zero when unsolvable).
    pub fn solution_count(&self) -> num_bigint::BigUint {
        use num_traits::{One, Zero};
        if self.particular.is_none() {
            return num_bigint::BigUint::zero();
        }
        let ring = self.smith.left.ring();
        let q = ring.residue_size();
        let mut count = num_bigint::BigUint::one();
        for &s in &self.free_valuations {
            count *= q.pow(ring.nu() - s);
        }
        count
    }

    /// Enumerates every solution of the system, failing with `TooLarge`
    /// beyond `cap`. Used as a bounded fallback by the decoder and as a
    /// tiny-size oracle in tests.
    pub fn enumerate_solutions(&self, cap: u64) -> Result<Vec<Vec<R::Elem>>> {
        let Some(particular) = &self.particular else {
            return Ok(Vec::new());
        };
        if self.solution_count() > cap.into() {
            return Err(Error::TooLarge(format!(
                "solution module has {} elements (cap {cap})",
                self.solution_count()
            )));
        }
        let ring = self.smith.left.ring().clone();
        let nu = ring.nu();
        let axes: Vec<Vec<R::Elem>> = self
            .free_valuations
            .iter()
            .map(|&s| {
                ring.residue_reps(nu - s)
                    .into_iter()
                    .map(|t| ring.mul(&ring.pi_pow(s), &t))
                    .collect()
            })
            .collect();
        let mut solutions = Vec::new();
        let mut y = vec![ring.zero(); axes.len()];
        enumerate_axes(&axes, 0, &mut y, &mut |y| {
            let delta = self.smith.right.mul_col_vec(y).expect("square transform");
            let x: Vec<R::Elem> = particular
                .iter()
                .zip(&delta)
                .map(|(p, d)| ring.add(p, d))
                .collect();
            solutions.push(x);
        });
        Ok(solutions)
    }
}

fn enumerate_axes<E: Clone>(
    axes: &[Vec<E>],
    i: usize,
    current: &mut Vec<E>,
    visit: &mut impl FnMut(&Vec<E>),
) {
    if i == axes.len() {
        visit(current);
        return;
    }
    for v in &axes[i] {
        current[i] = v.clone();
        enumerate_axes(axes, i + 1, current, visit);
    }
}

/// Solves A x = b exactly over the chain ring.
///
/// With left * A * right = diag(d) the system becomes diag(d) y = left * b,
/// solvable iff every transformed entry clears the valuation of its diagonal
/// (and vanishes where the diagonal does).
pub fn solve<R: ChainRing>(a: &Matrix<R>, b: &[R::Elem]) -> Result<SolveOutcome<R>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "rhs of length {} against {} rows",
            b.len(),
            a.rows()
        )));
    }
    let ring = a.ring().clone();
    let nu = ring.nu();
    let smith = smith_normal_form(a);
    let c = smith.left.mul_col_vec(b)?;

    let mut y = vec![ring.zero(); a.cols()];
    let mut solvable = true;
    for (i, ci) in c.iter().enumerate() {
        if i < smith.diag.len() && !ring.is_zero(&smith.diag[i]) {
            let dv = ring.valuation(&smith.diag[i]);
            if ring.valuation(ci) < dv {
                solvable = false;
                break;
            }
            y[i] = ring.div_exact(ci, &smith.diag[i]);
        } else if !ring.is_zero(ci) {
            solvable = false;
            break;
        }
    }

    let free_valuations: Vec<u32> = (0..a.cols())
        .map(|i| {
            if i < smith.rank {
                nu - smith.diag_valuation(i)
            } else {
                0
            }
        })
        .collect();

    let particular = if solvable {
        Some(smith.right.mul_col_vec(&y)?)
    } else {
        None
    };
    Ok(SolveOutcome { particular, free_valuations, smith })
}

/// Rows generating { x : A x^T = 0 }.
pub fn kernel_basis<R: ChainRing>(a: &Matrix<R>) -> Matrix<R> {
    let ring = a.ring().clone();
    let nu = ring.nu();
    let smith = smith_normal_form(a);
    let mut rows = Vec::new();
    for i in 0..a.cols() {
        if i < smith.rank {
            let dv = smith.diag_valuation(i);
            if dv > 0 {
                let scale = ring.pi_pow(nu - dv);
                let col = smith.right.col(i);
                rows.push(col.iter().map(|e| ring.mul(e, &scale)).collect());
            }
        } else {
            rows.push(smith.right.col(i));
        }
    }
    if rows.is_empty() {
        return Matrix::zero(ring, 0, a.cols());
    }
    Matrix::from_rows(ring, rows).expect("kernel rows share the ambient length")
}

/// Parity-check matrix of a free code: rows generate the dual of the row
/// module of `g`. Requires the rows of `g` to form a basis of a free module.
pub fn dual_code_matrix<R: ChainRing>(g: &Matrix<R>) -> Result<Matrix<R>> {
    let smith = smith_normal_form(g);
    if smith.rank < g.rows() || !smith.is_free() {
        return Err(Error::NotFree);
    }
    let ring = g.ring().clone();
    let rows: Vec<Vec<R::Elem>> = (g.rows()..g.cols()).map(|i| smith.right.col(i)).collect();
    if rows.is_empty() {
        return Ok(Matrix::zero(ring, 0, g.cols()));
    }
    Matrix::from_rows(ring, rows)
}

/// Extends the row module of `w` to a free module of rank `u` inside the
/// ambient free module, returning a basis.
///
/// The rows of right_inv are an ambient basis b_1..b_n with the row module
/// of `w` generated by { d_i b_i }; the first `u` of them therefore span a
/// free module containing it.
pub fn complete_to_free<R: ChainRing>(w: &Matrix<R>, u: usize) -> Result<Matrix<R>> {
    let smith = smith_normal_form(w);
    if u < smith.rank {
        return Err(Error::RankTooSmall { requested: u, actual: smith.rank });
    }
    if u > w.cols() {
        return Err(Error::OutOfRange(format!(
            "rank {u} exceeds the ambient rank {}",
            w.cols()
        )));
    }
    let ring = w.ring().clone();
    let rows: Vec<Vec<R::Elem>> = (0..u).map(|i| smith.right_inv.row(i).to_vec()).collect();
    if rows.is_empty() {
        return Ok(Matrix::zero(ring, 0, w.cols()));
    }
    Matrix::from_rows(ring, rows)
}

/// Membership of a row vector in the row module of `a`, decided by solving.
pub fn in_row_module<R: ChainRing>(a: &Matrix<R>, v: &[R::Elem]) -> Result<bool> {
    if v.len() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against {} columns",
            v.len(),
            a.cols()
        )));
    }
    Ok(solve(&a.transpose(), v)?.is_solvable())
}

/// Uniformly random matrix; sampling is coordinate-wise over the ring.
pub fn random_matrix<R: ChainRing>(
    ring: &R,
    rows: usize,
    cols: usize,
    rng: &mut dyn RngCore,
) -> Matrix<R> {
    let entries = (0..rows * cols).map(|_| ring.random_element(rng)).collect();
    Matrix::new(ring.clone(), rows, cols, entries).expect("consistent dimensions")
}

/// Random invertible matrix built from elementary operations; used by
/// property tests and samplers.
pub fn random_invertible<R: ChainRing>(ring: &R, n: usize, rng: &mut dyn RngCore) -> Matrix<R> {
    let mut m = Matrix::identity(ring.clone(), n);
    if n == 0 {
        return m;
    }
    let ops = 4 * n.max(2);
    for _ in 0..ops {
        let i = (rng.next_u64() as usize) % n;
        let j = (rng.next_u64() as usize) % n;
        match rng.next_u64() % 3 {
            0 => m.swap_rows(i, j),
            1 => {
                // unit row scaling
                let mut u = ring.random_element(rng);
                while !ring.is_unit(&u) {
                    u = ring.random_element(rng);
                }
                m.scale_row(i, &u);
            }
            _ => {
                if i != j {
                    let c = ring.random_element(rng);
                    m.add_multiple_of_row(i, j, &c);
                }
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Zpn;
    use num_bigint::BigUint;
    use proptest::prelude::*;
    use rand::{RngCore, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn z4() -> Zpn {
        Zpn::new(2u32, 2).unwrap()
    }

    fn mat(ring: &Zpn, rows: &[&[i64]]) -> Matrix<Zpn> {
        Matrix::from_rows(
            ring.clone(),
            rows.iter()
                .map(|r| r.iter().map(|&c| ring.from_int(c)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn snf_of_diag_2_2_over_z4() {
        let r = z4();
        let a = mat(&r, &[&[2, 0], &[0, 2]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.rank, 2);
        assert_eq!(s.diag, vec![r.from_int(2), r.from_int(2)]);

        let doubled = a.scale(&r.from_int(2));
        assert!(doubled.is_zero());
        assert_eq!(rank(&doubled), 0);
    }

    #[test]
    fn snf_of_identity() {
        for n in 0..5 {
            let r = Zpn::new(3u32, 3).unwrap();
            let id = Matrix::identity(r.clone(), n);
            let s = smith_normal_form(&id);
            assert_eq!(s.rank, n);
            assert!(s.diag.iter().all(|d| *d == BigUint::from(1u32)));
        }
    }

    #[test]
    fn snf_reconstruction_on_fixed_cases() {
        let r = Zpn::new(2u32, 3).unwrap();
        for a in [
            mat(&r, &[&[1, 2, 3], &[4, 5, 6]]),
            mat(&r, &[&[0, 0], &[0, 0]]),
            mat(&r, &[&[4, 2], &[6, 4], &[2, 0]]),
        ] {
            let s = smith_normal_form(&a);
            let lhs = s.left.mul_matrix(&a).unwrap().mul_matrix(&s.right).unwrap();
            assert_eq!(lhs, s.diag_matrix());
            // transform inverses really are inverses
            let n = a.rows();
            assert_eq!(
                s.left.mul_matrix(&s.left_inv).unwrap(),
                Matrix::identity(r.clone(), n)
            );
            let m = a.cols();
            assert_eq!(
                s.right_inv.mul_matrix(&s.right).unwrap(),
                Matrix::identity(r.clone(), m)
            );
        }
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let r = z4();
        let id = Matrix::identity(r.clone(), 3);
        let b = vec![r.from_int(1), r.from_int(2), r.from_int(3)];
        let out = solve(&id, &b).unwrap();
        assert_eq!(out.particular.unwrap(), b);
    }

    #[test]
    fn solve_valuation_obstruction() {
        let r = z4();
        let a = mat(&r, &[&[2]]);
        let out = solve(&a, &[r.from_int(1)]).unwrap();
        assert!(out.particular.is_none());
    }

    #[test]
    fn solve_2x_eq_2_over_z4() {
        let r = z4();
        let a = mat(&r, &[&[2]]);
        let out = solve(&a, &[r.from_int(2)]).unwrap();
        assert_eq!(out.particular.clone().unwrap(), vec![r.from_int(1)]);
        assert_eq!(out.free_valuations, vec![1]);
        // Exhaustive oracle: the solutions are exactly {1, 3}.
        let mut sols = out.enumerate_solutions(16).unwrap();
        sols.sort();
        assert_eq!(sols, vec![vec![r.from_int(1)], vec![r.from_int(3)]]);
        let mut brute = Vec::new();
        for x in 0..4i64 {
            if r.mul(&r.from_int(x), &r.from_int(2)) == r.from_int(2) {
                brute.push(vec![r.from_int(x)]);
            }
        }
        assert_eq!(sols, brute);
    }

    #[test]
    fn kernel_of_unit_row() {
        let r = z4();
        let g = mat(&r, &[&[1, 0]]);
        let h = dual_code_matrix(&g).unwrap();
        assert_eq!(h.rows(), 1);
        // up to unit scaling this is (0, 1)
        assert!(r.is_zero(h.get(0, 0)));
        assert!(r.is_unit(h.get(0, 1)));
        let prod = g.mul_matrix(&h.transpose()).unwrap();
        assert!(prod.is_zero());
    }

    #[test]
    fn dual_rejects_zero_row() {
        let r = z4();
        let g = mat(&r, &[&[1, 0], &[0, 0]]);
        assert!(matches!(dual_code_matrix(&g), Err(Error::NotFree)));
        let g2 = mat(&r, &[&[2, 0]]);
        assert!(matches!(dual_code_matrix(&g2), Err(Error::NotFree)));
    }

    #[test]
    fn kernel_basis_generates_all_solutions() {
        let r = z4();
        let a = mat(&r, &[&[2, 1], &[0, 2]]);
        let k = kernel_basis(&a);
        // every kernel row satisfies A x^T = 0
        for row in k.row_vecs() {
            let img = a.mul_col_vec(&row).unwrap();
            assert!(img.iter().all(|e| r.is_zero(e)));
        }
        // brute force count of kernel elements matches the generated module
        let mut brute = 0;
        for x in 0..4i64 {
            for y in 0..4i64 {
                let v = vec![r.from_int(x), r.from_int(y)];
                let img = a.mul_col_vec(&v).unwrap();
                if img.iter().all(|e| r.is_zero(e)) && in_row_module(&k, &v).unwrap() {
                    brute += 1;
                }
            }
        }
        let total: usize = {
            let mut c = 0;
            for x in 0..4i64 {
                for y in 0..4i64 {
                    let v = vec![r.from_int(x), r.from_int(y)];
                    let img = a.mul_col_vec(&v).unwrap();
                    if img.iter().all(|e| r.is_zero(e)) {
                        c += 1;
                    }
                }
            }
            c
        };
        assert_eq!(brute, total, "kernel basis must cover every solution");
    }

    #[test]
    fn complete_to_free_examples() {
        let r = z4();
        // W = (2, 0): dividing out pi gives the free module <(1,0)>.
        let w = mat(&r, &[&[2, 0]]);
        let f = complete_to_free(&w, 1).unwrap();
        assert_eq!(f.rows(), 1);
        let s = smith_normal_form(&f);
        assert!(s.is_free());
        assert!(in_row_module(&f, w.row(0)).unwrap());

        // W = 0 completes to the whole ambient.
        let z = Matrix::zero(r.clone(), 1, 2);
        let f = complete_to_free(&z, 2).unwrap();
        assert_eq!(rank(&f), 2);

        assert!(matches!(
            complete_to_free(&mat(&r, &[&[1, 0], &[0, 1]]), 1),
            Err(Error::RankTooSmall { .. })
        ));
    }

    #[test]
    fn complete_to_free_contains_w_over_z8() {
        let r = Zpn::new(2u32, 3).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..50 {
            let mut w = random_matrix(&r, 1, 3, &mut rng);
            // force non-unit rank-1 rows now and then
            if rng.next_u64() % 2 == 0 {
                w = w.scale(&r.from_int(2));
            }
            let rk = rank(&w);
            for u in rk..=3 {
                let f = complete_to_free(&w, u).unwrap();
                assert_eq!(rank(&f), u);
                let s = smith_normal_form(&f);
                assert!(s.is_free());
                for row in w.row_vecs() {
                    assert!(in_row_module(&f, &row).unwrap());
                }
            }
        }
    }

    /// Exhaustive oracle: the rank of a matrix equals the minimal number of
    /// generators of its row module. The row module is enumerated by
    /// closure; by Nakayama the minimal generator count is log_q of
    /// [M : pi M], which the oracle measures by counting both sets.
    fn oracle_min_generators(a: &Matrix<Zpn>) -> usize {
        use std::collections::HashSet;
        let r = a.ring().clone();
        let elems = r.all_elements();
        let mut module: HashSet<Vec<BigUint>> = HashSet::new();
        module.insert(vec![BigUint::from(0u32); a.cols()]);
        for row in a.row_vecs() {
            let mut next = HashSet::new();
            for base in &module {
                for c in &elems {
                    let cand: Vec<BigUint> = base
                        .iter()
                        .zip(&row)
                        .map(|(b, g)| r.add(b, &r.mul(c, g)))
                        .collect();
                    next.insert(cand);
                }
            }
            module = next;
        }
        let pi = r.pi_pow(1);
        let pi_module: HashSet<Vec<BigUint>> = module
            .iter()
            .map(|v| v.iter().map(|e| r.mul(e, &pi)).collect())
            .collect();
        let ratio = module.len() / pi_module.len();
        let q = r.residue_size().to_string().parse::<usize>().unwrap();
        let mut dim = 0;
        let mut x = 1;
        while x < ratio {
            x *= q;
            dim += 1;
        }
        assert_eq!(x, ratio, "index must be a power of q");
        dim
    }

    #[test]
    fn rank_matches_exhaustive_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        for (p, nu, rows, cols) in [(2u32, 2u32, 2usize, 3usize), (2, 3, 2, 2), (3, 2, 2, 2), (2, 1, 3, 4)] {
            let r = Zpn::new(p, nu).unwrap();
            for _ in 0..25 {
                let a = random_matrix(&r, rows, cols, &mut rng);
                assert_eq!(rank(&a), oracle_min_generators(&a), "matrix {a:?}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn snf_reconstruction_random(seed in 0u64..1000) {
            let r = Zpn::new(2u32, 3).unwrap();
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let rows = 1 + (seed as usize) % 4;
            let cols = 1 + ((seed as usize) / 4) % 4;
            let a = random_matrix(&r, rows, cols, &mut rng);
            let s = smith_normal_form(&a);
            let lhs = s.left.mul_matrix(&a).unwrap().mul_matrix(&s.right).unwrap();
            prop_assert_eq!(lhs, s.diag_matrix());
        }

        #[test]
        fn rank_invariant_under_invertible_transforms(seed in 0u64..500) {
            let r = Zpn::new(3u32, 2).unwrap();
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let a = random_matrix(&r, 3, 3, &mut rng);
            let u = random_invertible(&r, 3, &mut rng);
            let v = random_invertible(&r, 3, &mut rng);
            let b = u.mul_matrix(&a).unwrap().mul_matrix(&v).unwrap();
            prop_assert_eq!(rank(&a), rank(&b));
        }

        #[test]
        fn fast_rank_lane_matches_the_generic_path(seed in 0u64..400) {
            for (p, nu) in [(2u32, 3u32), (3, 2), (5, 1), (7, 2)] {
                let r = Zpn::new(p, nu).unwrap();
                let mut rng = ChaCha12Rng::seed_from_u64(seed);
                let rows = 1 + (seed as usize) % 4;
                let cols = 1 + ((seed as usize) / 3) % 4;
                let a = random_matrix(&r, rows, cols, &mut rng);
                prop_assert_eq!(rank_over_zpn(&a), rank(&a));
                prop_assert_eq!(rank(&a), smith_normal_form(&a).rank);
            }
        }

        #[test]
        fn solve_particular_is_exact(seed in 0u64..500) {
            let r = Zpn::new(2u32, 3).unwrap();
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let a = random_matrix(&r, 3, 4, &mut rng);
            let x: Vec<BigUint> = (0..4).map(|_| r.random_element(&mut rng)).collect();
            let b = a.mul_col_vec(&x).unwrap();
            let out = solve(&a, &b).unwrap();
            let sol = out.particular.expect("constructed solvable system");
            prop_assert_eq!(a.mul_col_vec(&sol).unwrap(), b);
        }
    }
}
