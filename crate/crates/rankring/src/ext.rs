//! Galois extensions S = R[X]/(h) of the base chain ring, their residue
//! fields, and matrix representations of vectors over S.
//!
//! S is itself a finite chain ring: its maximal ideal is pS and every
//! element factors as p^i * unit. The residue field F_{p^m} is realized as
//! the degree-m extension of F_p by the reduced polynomial Psi(h), so field
//! and ring arithmetic flow through the same code paths (a field is the
//! nu = 1 case everywhere in this crate).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::RngCore;

use crate::error::{Error, Result};
use crate::linalg::{smith_normal_form, Matrix, SmithForm};
use crate::poly;
use crate::ring::{ChainRing, Zpn};

/// Element of a Galois extension: exactly m canonical coordinates in the
/// power basis (1, a, ..., a^{m-1}).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtElem {
    coeffs: Vec<BigUint>,
}

impl ExtElem {
    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_power_basis(&self.coeffs))
    }
}

/// Renders coefficients as a polynomial in `a`, constant term last.
pub(crate) fn format_power_basis(coeffs: &[BigUint]) -> String {
    let mut parts = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let term = match i {
            0 => format!("{c}"),
            1 if c.is_one() => "a".to_string(),
            1 => format!("{c}a"),
            _ if c.is_one() => format!("a^{i}"),
            _ => format!("{c}a^{i}"),
        };
        parts.push(term);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

#[derive(PartialEq, Eq)]
struct ExtInner {
    base: Zpn,
    /// Monic defining polynomial, ascending degree, length m + 1.
    h: Vec<BigUint>,
    m: usize,
    /// The residue extension F_{p^m}; `None` when this already is a field.
    residue: Option<Extension>,
}

/// The Galois extension S = R[X]/(h) of degree m, shared immutably.
#[derive(Clone)]
pub struct Extension {
    inner: Arc<ExtInner>,
}

impl PartialEq for Extension {
    fn eq(&self, other: &Self) -> bool {
        self.inner.base == other.inner.base && self.inner.h == other.inner.h
    }
}

impl Eq for Extension {}

impl fmt::Debug for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?}[a]/(deg {} ext of Z_{}^{})",
            self.inner.base,
            self.inner.m,
            self.inner.base.p(),
            self.inner.base.nu()
        )
    }
}

impl Extension {
    /// Builds S = R[X]/(h), verifying that h is monic and that Psi(h) is
    /// irreducible over F_p (deterministic Rabin test).
    pub fn new(base: Zpn, h: Vec<BigUint>) -> Result<Extension> {
        let mut h: Vec<BigUint> = h.iter().map(|c| base.reduce(c)).collect();
        while h.last().is_some_and(|c| c.is_zero()) {
            h.pop();
        }
        if h.len() < 2 || !h.last().unwrap().is_one() {
            return Err(Error::NotMonic);
        }
        let field = base.residue_field();
        let h_bar: Vec<BigUint> = h.iter().map(|c| base.residue_project(c)).collect();
        check_irreducible(&field, &h_bar)?;

        let m = h.len() - 1;
        let residue = if base.nu() == 1 {
            None
        } else {
            Some(Extension {
                inner: Arc::new(ExtInner {
                    base: field,
                    h: h_bar,
                    m,
                    residue: None,
                }),
            })
        };
        Ok(Extension {
            inner: Arc::new(ExtInner { base, h, m, residue }),
        })
    }

    pub fn base(&self) -> &Zpn {
        &self.inner.base
    }

    pub fn degree(&self) -> usize {
        self.inner.m
    }

    pub fn h(&self) -> &[BigUint] {
        &self.inner.h
    }

    pub fn is_field(&self) -> bool {
        self.inner.base.nu() == 1
    }

    /// The residue field F_{p^m} as an extension with nu = 1.
    pub fn residue_field(&self) -> Extension {
        match &self.inner.residue {
            Some(r) => r.clone(),
            None => self.clone(),
        }
    }

    /// Canonical element from arbitrary polynomial coefficients (reduced
    /// modulo h, padded to length m).
    pub fn elem(&self, coeffs: &[BigUint]) -> ExtElem {
        let reduced = poly::reduce_coeffs(&self.inner.base, coeffs);
        let r = poly::rem(&self.inner.base, &reduced, &self.inner.h)
            .expect("h is monic, division always succeeds");
        self.pad(r)
    }

    pub fn elem_from_ints(&self, coeffs: &[i64]) -> ExtElem {
        let c: Vec<BigUint> = coeffs.iter().map(|&x| self.inner.base.from_int(x)).collect();
        self.elem(&c)
    }

    /// The power-basis generator a = X + (h).
    pub fn generator(&self) -> ExtElem {
        self.elem(&poly::x())
    }

    fn pad(&self, mut coeffs: Vec<BigUint>) -> ExtElem {
        coeffs.resize(self.inner.m, BigUint::zero());
        ExtElem { coeffs }
    }

    /// Reduction of every coordinate mod p: the projection Psi onto the
    /// residue field F_{p^m}.
    pub fn psi(&self, x: &ExtElem) -> ExtElem {
        ExtElem {
            coeffs: x
                .coeffs
                .iter()
                .map(|c| self.inner.base.residue_project(c))
                .collect(),
        }
    }

    /// Coordinate-wise Psi on a vector over S.
    pub fn psi_vec(&self, v: &[ExtElem]) -> Vec<ExtElem> {
        v.iter().map(|x| self.psi(x)).collect()
    }

    /// Canonical lift of a residue-field element back into S.
    pub fn lift(&self, y: &ExtElem) -> ExtElem {
        debug_assert_eq!(y.coeffs.len(), self.inner.m);
        ExtElem { coeffs: y.coeffs.clone() }
    }

    pub fn lift_vec(&self, v: &[ExtElem]) -> Vec<ExtElem> {
        v.iter().map(|x| self.lift(x)).collect()
    }

    /// Coordinate-wise multiplication by p^i.
    pub fn mul_by_pi_power(&self, x: &ExtElem, i: u32) -> ExtElem {
        let mul = self.inner.base.pi_pow(i);
        ExtElem {
            coeffs: x.coeffs.iter().map(|c| self.inner.base.mul(c, &mul)).collect(),
        }
    }

    /// m x n matrix over the base ring whose column j holds the power-basis
    /// coordinates of v[j].
    pub fn matrix_representation(&self, v: &[ExtElem]) -> Matrix<Zpn> {
        let m = self.inner.m;
        let mut out = Matrix::zero(self.inner.base.clone(), m, v.len());
        for (j, x) in v.iter().enumerate() {
            debug_assert_eq!(x.coeffs.len(), m);
            for (i, c) in x.coeffs.iter().enumerate() {
                out.set(i, j, c.clone());
            }
        }
        out
    }

    /// Element whose power-basis coordinates are the given column.
    pub fn elem_from_coords(&self, coords: &[BigUint]) -> ExtElem {
        debug_assert_eq!(coords.len(), self.inner.m);
        ExtElem {
            coeffs: coords.iter().map(|c| self.inner.base.reduce(c)).collect(),
        }
    }

    /// Rank of a vector over S: the rank of its matrix representation.
    pub fn vector_rank(&self, v: &[ExtElem]) -> usize {
        use num_traits::ToPrimitive;
        // distance enumerations hit this hard; use the u64 lane when the
        // modulus allows it
        let base = &self.inner.base;
        if let (Some(p), Some(modulus)) = (base.p().to_u64(), base.modulus().to_u64()) {
            let m = self.inner.m;
            let mut data = vec![0u64; m * v.len()];
            for (j, x) in v.iter().enumerate() {
                for (i, c) in x.coeffs.iter().enumerate() {
                    data[i * v.len() + j] = c.to_u64().expect("canonical residue fits");
                }
            }
            return crate::linalg::rank_small_grid(p, modulus, base.nu(), m, v.len(), &mut data);
        }
        crate::linalg::rank(&self.matrix_representation(v))
    }

    /// Minimal generating set { pi^{k_i} b_i } of supp(v), read off the
    /// Smith transforms of the matrix representation.
    pub fn support_basis(&self, v: &[ExtElem]) -> Vec<ExtElem> {
        let a = self.matrix_representation(v);
        let s = smith_normal_form(&a);
        (0..s.rank)
            .map(|i| {
                let col = s.left_inv.col(i);
                let scaled: Vec<BigUint> = col
                    .iter()
                    .map(|c| self.inner.base.mul(c, &s.diag[i]))
                    .collect();
                self.elem_from_coords(&scaled)
            })
            .collect()
    }

    /// R-linear independence of elements of S, decided over the residue
    /// field: x_1..x_t are independent iff Psi(x_1)..Psi(x_t) are.
    pub fn residue_independent(&self, v: &[ExtElem]) -> bool {
        let rf = self.residue_field();
        let imgs = self.psi_vec(v);
        rf.vector_rank(&imgs) == v.len()
    }

    /// Smith form of the matrix representation; shared by rank and support
    /// computations that need the transforms.
    pub fn representation_smith(&self, v: &[ExtElem]) -> SmithForm<Zpn> {
        smith_normal_form(&self.matrix_representation(v))
    }

    pub fn format_elem(&self, x: &ExtElem) -> String {
        format_power_basis(&x.coeffs)
    }
}

impl ChainRing for Extension {
    type Elem = ExtElem;

    fn nu(&self) -> u32 {
        self.inner.base.nu()
    }

    fn residue_size(&self) -> BigUint {
        self.inner.base.p().pow(self.inner.m as u32)
    }

    fn zero(&self) -> ExtElem {
        ExtElem {
            coeffs: vec![BigUint::zero(); self.inner.m],
        }
    }

    fn one(&self) -> ExtElem {
        let mut coeffs = vec![BigUint::zero(); self.inner.m];
        coeffs[0] = BigUint::one();
        ExtElem { coeffs }
    }

    fn is_zero(&self, a: &ExtElem) -> bool {
        a.coeffs.iter().all(|c| c.is_zero())
    }

    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| self.inner.base.add(x, y))
                .collect(),
        }
    }

    fn neg(&self, a: &ExtElem) -> ExtElem {
        ExtElem {
            coeffs: a.coeffs.iter().map(|x| self.inner.base.neg(x)).collect(),
        }
    }

    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let prod = poly::mul(&self.inner.base, &a.coeffs, &b.coeffs);
        let r = poly::rem(&self.inner.base, &prod, &self.inner.h)
            .expect("h is monic, division always succeeds");
        self.pad(r)
    }

    /// Minimum of the coordinate valuations; valid because the maximal
    /// ideal of S is pS and the power basis is free.
    fn valuation(&self, a: &ExtElem) -> u32 {
        a.coeffs
            .iter()
            .map(|c| self.inner.base.valuation(c))
            .min()
            .unwrap_or(self.nu())
    }

    fn unit_part(&self, a: &ExtElem) -> ExtElem {
        if self.is_zero(a) {
            return self.one();
        }
        let v = self.valuation(a);
        let divisor = self.inner.base.p().pow(v);
        ExtElem {
            coeffs: a.coeffs.iter().map(|c| c / &divisor).collect(),
        }
    }

    /// Inverts Psi(a) in F_{p^m}, then Newton-lifts
    /// x_{k+1} = x_k (2 - a x_k) for ceil(log2 nu) steps.
    fn invert_unit(&self, a: &ExtElem) -> Result<ExtElem> {
        let field = self.inner.base.residue_field();
        let a_bar = self.psi(a);
        let mut a_poly = a_bar.coeffs.clone();
        poly::trim(&mut a_poly);
        if poly::is_zero(&a_poly) {
            return Err(Error::NotAUnit);
        }
        let h_bar: Vec<BigUint> = self
            .inner
            .h
            .iter()
            .map(|c| self.inner.base.residue_project(c))
            .collect();
        let inv0 = poly::invert_mod(&field, &a_poly, &h_bar)?;
        let mut x = self.pad(inv0);

        let nu = self.nu();
        let steps = if nu <= 1 { 0 } else { 32 - (nu - 1).leading_zeros() };
        let two = self.add(&self.one(), &self.one());
        for _ in 0..steps {
            let ax = self.mul(a, &x);
            x = self.mul(&x, &self.sub(&two, &ax));
        }
        debug_assert!(self.mul(a, &x) == self.one());
        Ok(x)
    }

    fn pi_pow(&self, i: u32) -> ExtElem {
        let mut coeffs = vec![BigUint::zero(); self.inner.m];
        coeffs[0] = self.inner.base.pi_pow(i);
        ExtElem { coeffs }
    }

    fn residue_reps(&self, delta: u32) -> Vec<ExtElem> {
        let base_reps = self.inner.base.residue_reps(delta);
        let mut out = Vec::new();
        let mut current = vec![BigUint::zero(); self.inner.m];
        fill_reps(&base_reps, 0, &mut current, &mut out);
        out
    }

    fn random_element(&self, rng: &mut dyn RngCore) -> ExtElem {
        ExtElem {
            coeffs: (0..self.inner.m)
                .map(|_| self.inner.base.random_element(rng))
                .collect(),
        }
    }
}

fn fill_reps(
    base_reps: &[BigUint],
    i: usize,
    current: &mut Vec<BigUint>,
    out: &mut Vec<ExtElem>,
) {
    if i == current.len() {
        out.push(ExtElem { coeffs: current.clone() });
        return;
    }
    for r in base_reps {
        current[i] = r.clone();
        fill_reps(base_reps, i + 1, current, out);
    }
}

/// Deterministic Rabin irreducibility test for h_bar over F_p:
/// X^{p^m} = X mod h_bar and gcd(X^{p^{m/l}} - X, h_bar) = 1 for every
/// prime l dividing m.
fn check_irreducible(field: &Zpn, h_bar: &[BigUint]) -> Result<()> {
    let mut hb = h_bar.to_vec();
    poly::trim(&mut hb);
    let m = hb.len() - 1;
    if m == 1 {
        return Ok(());
    }
    let p = field.p().clone();
    let x = poly::x();

    for l in prime_divisors(m) {
        let e = p.pow((m / l) as u32);
        let xp = poly::powmod(field, &x, &e, &hb)?;
        let diff = poly::sub(field, &xp, &x);
        let g = poly::gcd(field, &diff, &hb)?;
        if let Some(d) = poly::degree(&g) {
            if d >= 1 {
                let factor = if d < m { Some(g) } else { find_witness(field, &hb) };
                return Err(Error::ReducibleResidue { factor });
            }
        }
    }

    let e = p.pow(m as u32);
    let xpm = poly::powmod(field, &x, &e, &hb)?;
    if xpm != poly::rem(field, &x, &hb)? {
        return Err(Error::ReducibleResidue { factor: find_witness(field, &hb) });
    }
    Ok(())
}

/// Scans gcd(X^{p^j} - X, h_bar) for j = 1..m/2 looking for a proper factor.
fn find_witness(field: &Zpn, hb: &[BigUint]) -> Option<Vec<BigUint>> {
    let m = hb.len() - 1;
    let p = field.p().clone();
    let x = poly::x();
    for j in 1..=m / 2 {
        let e = p.pow(j as u32);
        let xp = poly::powmod(field, &x, &e, &hb.to_vec()).ok()?;
        let diff = poly::sub(field, &xp, &x);
        let g = poly::gcd(field, &diff, &hb.to_vec()).ok()?;
        if let Some(d) = poly::degree(&g) {
            if d >= 1 && d < m {
                return Some(g);
            }
        }
    }
    None
}

fn prime_divisors(mut m: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}
