//! Module shapes, Gaussian binomials and exact submodule counting over
//! finite chain rings, plus the brute-force enumeration oracle.
//!
//! A finitely generated module over a chain ring is classified by a
//! partition lambda (its shape): M = R/m^{l1} x ... x R/m^{lr}. Counting
//! submodules of a given shape or rank reduces to products of Gaussian
//! binomials over chains of conjugate parts; beta(q, nu, k, n) is the
//! rank-k count inside a free rank-n module and drives the decoder's
//! trial estimates.
//!
//! The enumeration oracle walks canonical echelon generating matrices
//! (pivots are powers of pi at strictly increasing columns, entries above a
//! pivot reduced modulo it, and each row's pi^{nu-delta} multiple spanned by
//! the rows below it), which visits every submodule exactly once.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::ring::ChainRing;

/// Integer partition: weakly decreasing positive parts (empty = zero).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl std::fmt::Debug for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.parts)
    }
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Partition> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::OutOfRange("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::OutOfRange("partition parts must be weakly decreasing".into()));
        }
        Ok(Partition { parts })
    }

    pub fn zero() -> Partition {
        Partition { parts: Vec::new() }
    }

    /// The rectangular shape (nu, ..., nu) of a free rank-n module.
    pub fn rectangle(nu: u32, n: usize) -> Partition {
        Partition { parts: vec![nu; n] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// 1-based part access, zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 || i > self.parts.len() {
            0
        } else {
            self.parts[i - 1]
        }
    }

    /// lambda'_i = |{ j : lambda_j >= i }|, 1-based.
    pub fn conjugate(&self) -> Partition {
        let first = self.part(1) as usize;
        let parts = (1..=first)
            .map(|i| self.parts.iter().filter(|&&p| p >= i as u32).count() as u32)
            .collect();
        Partition { parts }
    }

    /// Componentwise domination: self_j <= other_j for all j.
    pub fn dominated_by(&self, other: &Partition) -> bool {
        (1..=self.parts.len()).all(|i| self.part(i) <= other.part(i))
    }

    /// Sum of the parts: log_q of the module cardinality.
    pub fn sum(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// Number of nonzero parts: the rank of a module of this shape.
    pub fn rank(&self) -> usize {
        self.parts.len()
    }
}

/// log_q |M| for a module of shape lambda.
pub fn cardinality_log_q(lambda: &Partition) -> u64 {
    lambda.sum()
}

/// Ordinary binomial coefficient, exact.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

/// Gaussian binomial [n k]_q: the number of k-dimensional subspaces of
/// F_q^n, computed as prod (q^n - q^i) / (q^k - q^i).
pub fn gaussian_binomial(n: usize, k: usize, q: &BigUint) -> Result<BigUint> {
    if k > n {
        return Err(Error::OutOfRange(format!("[{n} choose {k}]_q needs k <= n")));
    }
    if *q < BigUint::from(2u32) {
        return Err(Error::OutOfRange("q must be at least 2".into()));
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow(n as u32) - q.pow(i as u32);
        den *= q.pow(k as u32) - q.pow(i as u32);
    }
    let (quot, rem) = num_integer::Integer::div_rem(&num, &den);
    debug_assert!(rem.is_zero(), "Gaussian binomial division must be exact");
    Ok(quot)
}

/// Number of submodules of shape mu inside a module of shape lambda over a
/// chain ring with residue field size q:
/// prod_i q^{mu'_{i+1} (lambda'_i - mu'_i)} [lambda'_i - mu'_{i+1} choose mu'_i - mu'_{i+1}]_q.
pub fn count_submodules_of_shape(
    lambda: &Partition,
    mu: &Partition,
    q: &BigUint,
) -> Result<BigUint> {
    if !mu.dominated_by(lambda) {
        return Err(Error::ShapeNotDominated);
    }
    let lc = lambda.conjugate();
    let mc = mu.conjugate();
    let mut total = BigUint::one();
    for i in 1..=lambda.part(1) as usize {
        let l_i = lc.part(i) as usize;
        let m_i = mc.part(i) as usize;
        let m_next = mc.part(i + 1) as usize;
        total *= q.pow((m_next * (l_i - m_i)) as u32);
        total *= gaussian_binomial(l_i - m_next, m_i - m_next, q)?;
    }
    Ok(total)
}

/// Number of rank-k submodules of a module of shape lambda: the sum of the
/// shape counts over all conjugate chains k = l_1 >= ... >= l_nu >= 0 with
/// l_i <= lambda'_i.
pub fn count_submodules_of_rank(
    lambda: &Partition,
    k: usize,
    q: &BigUint,
    nu: u32,
) -> Result<BigUint> {
    let lc = lambda.conjugate();
    if k > lc.part(1) as usize {
        return Err(Error::OutOfRange(format!(
            "rank {k} exceeds the module rank {}",
            lc.part(1)
        )));
    }
    if *q < BigUint::from(2u32) {
        return Err(Error::OutOfRange("q must be at least 2".into()));
    }
    let nu = nu as usize;
    // chain[i] holds l_{i+1} (0-based); chain[0] = k, chain[nu] = 0.
    let mut chain = vec![0usize; nu + 1];
    chain[0] = k;
    let mut total = BigUint::zero();
    sum_over_chains(&lc, q, &mut chain, 1, &mut total)?;
    Ok(total)
}

fn sum_over_chains(
    lc: &Partition,
    q: &BigUint,
    chain: &mut Vec<usize>,
    pos: usize,
    total: &mut BigUint,
) -> Result<()> {
    let nu = chain.len() - 1;
    if pos == nu {
        let mut term = BigUint::one();
        for i in 1..=nu {
            let l_i = chain[i - 1];
            let l_next = chain[i];
            let lam_i = lc.part(i) as usize;
            if l_i > lam_i {
                return Ok(());
            }
            term *= q.pow((l_next * (lam_i - l_i)) as u32);
            term *= gaussian_binomial(lam_i - l_next, l_i - l_next, q)?;
        }
        *total += term;
        return Ok(());
    }
    let upper = chain[pos - 1].min(lc.part(pos + 1) as usize);
    for v in (0..=upper).rev() {
        chain[pos] = v;
        sum_over_chains(lc, q, chain, pos + 1, total)?;
    }
    chain[pos] = 0;
    Ok(())
}

/// beta(q, nu, k, n): the number of rank-k submodules of a free rank-n
/// module over a chain ring with nilpotency index nu and residue size q.
pub fn beta(q: &BigUint, nu: u32, k: usize, n: usize) -> Result<BigUint> {
    if k > n {
        return Err(Error::OutOfRange(format!("rank {k} exceeds the free rank {n}")));
    }
    count_submodules_of_rank(&Partition::rectangle(nu, n), k, q, nu)
}

/// Shape of the row module of a generating matrix, read off the Smith
/// diagonal: each nonzero d = pi^delta contributes a part nu - delta.
pub fn shape_of_module<R: ChainRing>(gens: &Matrix<R>) -> Partition {
    let ring = gens.ring();
    let nu = ring.nu();
    let smith = linalg::smith_normal_form(gens);
    let mut parts: Vec<u32> = (0..smith.rank)
        .map(|i| nu - smith.diag_valuation(i))
        .collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Partition { parts }
}

/// Caps for the enumeration oracle.
#[derive(Clone, Debug)]
pub struct EnumerationCaps {
    /// Upper bound on the ambient size |R|^n.
    pub max_ambient: BigUint,
    /// Upper bound on the number of submodules visited.
    pub max_results: u64,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        EnumerationCaps {
            max_ambient: BigUint::from(1u32) << 16,
            max_results: 500_000,
        }
    }
}

impl EnumerationCaps {
    /// Applies the `RANKRING_MAX_ENUM` override when set.
    pub fn from_env() -> Self {
        let mut caps = EnumerationCaps::default();
        if let Ok(v) = std::env::var("RANKRING_MAX_ENUM") {
            if let Ok(n) = v.trim().parse::<u64>() {
                caps.max_results = n;
            }
        }
        caps
    }
}

/// Visits every submodule of R^n exactly once as a canonical generating
/// matrix (the zero module appears as a 0 x n matrix). With a rank filter
/// only matching modules are passed to `visit`, though all modules still
/// count against the result cap. Returns the number of modules visited.
pub fn enumerate_submodules_with<R: ChainRing>(
    ring: &R,
    n: usize,
    rank_filter: Option<usize>,
    caps: &EnumerationCaps,
    visit: &mut dyn FnMut(Matrix<R>),
) -> Result<u64> {
    let ambient = ring.size().pow(n as u32);
    if ambient > caps.max_ambient {
        return Err(Error::TooLarge(format!(
            "ambient size {ambient} exceeds the cap {}",
            caps.max_ambient
        )));
    }
    let nu = ring.nu();
    let reps: Vec<Vec<R::Elem>> = (0..=nu).map(|d| ring.residue_reps(d)).collect();
    let mut state = Enumerator {
        ring,
        n,
        nu,
        reps,
        rank_filter,
        max_results: caps.max_results,
        seen: 0,
        visited: 0,
        visit,
    };
    let mut rows = Vec::new();
    let mut deltas = Vec::new();
    state.column(0, &mut rows, &mut deltas)?;
    Ok(state.visited)
}

/// Collecting variant of [`enumerate_submodules_with`] for small ambients.
pub fn enumerate_submodules<R: ChainRing>(
    ring: &R,
    n: usize,
    rank_filter: Option<usize>,
    caps: &EnumerationCaps,
) -> Result<Vec<Matrix<R>>> {
    let mut out = Vec::new();
    enumerate_submodules_with(ring, n, rank_filter, caps, &mut |m| out.push(m))?;
    Ok(out)
}

struct Enumerator<'a, R: ChainRing> {
    ring: &'a R,
    n: usize,
    nu: u32,
    /// reps[d] = canonical representatives of R/(pi^d); reps[nu] is all of R.
    reps: Vec<Vec<R::Elem>>,
    rank_filter: Option<usize>,
    max_results: u64,
    seen: u64,
    visited: u64,
    visit: &'a mut dyn FnMut(Matrix<R>),
}

impl<R: ChainRing> Enumerator<'_, R> {
    fn column(
        &mut self,
        c: usize,
        rows: &mut Vec<Vec<R::Elem>>,
        deltas: &mut Vec<u32>,
    ) -> Result<()> {
        if c == self.n {
            return self.finish(rows, deltas);
        }
        // column c carries no pivot
        self.fill(c, 0, rows, deltas, None)?;
        // column c is the pivot of a new row with valuation delta
        for delta in 0..self.nu {
            self.fill(c, 0, rows, deltas, Some(delta))?;
        }
        Ok(())
    }

    /// Chooses the column-c entry of row i; entries above a pivot pi^delta
    /// run over representatives of R/(pi^delta), entries in pivot-free
    /// columns over all of R.
    fn fill(
        &mut self,
        c: usize,
        i: usize,
        rows: &mut Vec<Vec<R::Elem>>,
        deltas: &mut Vec<u32>,
        pivot: Option<u32>,
    ) -> Result<()> {
        if i == rows.len() {
            return match pivot {
                None => self.column(c + 1, rows, deltas),
                Some(delta) => {
                    let mut new_row = vec![self.ring.zero(); c];
                    new_row.push(self.ring.pi_pow(delta));
                    rows.push(new_row);
                    deltas.push(delta);
                    let r = self.column(c + 1, rows, deltas);
                    rows.pop();
                    deltas.pop();
                    r
                }
            };
        }
        let d = pivot.unwrap_or(self.nu) as usize;
        let len = self.reps[d].len();
        for k in 0..len {
            let e = self.reps[d][k].clone();
            rows[i].push(e);
            self.fill(c, i + 1, rows, deltas, pivot)?;
            rows[i].pop();
        }
        Ok(())
    }

    fn finish(&mut self, rows: &[Vec<R::Elem>], deltas: &[u32]) -> Result<()> {
        if !self.closure_holds(rows, deltas) {
            return Ok(());
        }
        self.seen += 1;
        if self.seen > self.max_results {
            return Err(Error::TooLarge(format!(
                "more than {} submodules (override with RANKRING_MAX_ENUM)",
                self.max_results
            )));
        }
        let mat = if rows.is_empty() {
            Matrix::zero(self.ring.clone(), 0, self.n)
        } else {
            Matrix::from_rows(self.ring.clone(), rows.to_vec())?
        };
        if let Some(k) = self.rank_filter {
            let rank = if self.nu == 1 {
                rows.len()
            } else {
                linalg::rank(&mat)
            };
            if rank != k {
                return Ok(());
            }
        }
        self.visited += 1;
        (self.visit)(mat);
        Ok(())
    }

    /// The canonical-form closure property: pi^{nu - delta_i} times row i
    /// must lie in the span of the rows below it.
    fn closure_holds(&self, rows: &[Vec<R::Elem>], deltas: &[u32]) -> bool {
        if self.nu == 1 {
            return true;
        }
        for i in 0..rows.len() {
            let shift = self.ring.pi_pow(self.nu - deltas[i]);
            let scaled: Vec<R::Elem> =
                rows[i].iter().map(|e| self.ring.mul(e, &shift)).collect();
            if scaled.iter().all(|e| self.ring.is_zero(e)) {
                continue;
            }
            if i + 1 == rows.len() {
                return false;
            }
            let below = Matrix::from_rows(self.ring.clone(), rows[i + 1..].to_vec())
                .expect("rows share the ambient length");
            match linalg::in_row_module(&below, &scaled) {
                Ok(true) => {}
                _ => return false,
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Zpn;
    use std::collections::{BTreeSet, HashMap};

    fn q2() -> BigUint {
        BigUint::from(2u32)
    }

    #[test]
    fn conjugation_examples() {
        let free = Partition::rectangle(3, 4);
        assert_eq!(free.conjugate(), Partition::new(vec![4, 4, 4]).unwrap());
        let p = Partition::new(vec![3, 1]).unwrap();
        assert_eq!(p.conjugate(), Partition::new(vec![2, 1, 1]).unwrap());
        for parts in [vec![], vec![5], vec![4, 2, 2, 1], vec![3, 3, 3]] {
            let p = Partition { parts };
            assert_eq!(p.conjugate().conjugate(), p);
        }
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert!(Partition::new(vec![]).unwrap().is_zero());
    }

    #[test]
    fn gaussian_binomial_examples() {
        assert_eq!(gaussian_binomial(2, 1, &q2()).unwrap(), BigUint::from(3u32));
        for n in 0..6 {
            assert_eq!(gaussian_binomial(n, 0, &q2()).unwrap(), BigUint::one());
            assert_eq!(gaussian_binomial(n, n, &q2()).unwrap(), BigUint::one());
        }
        assert!(gaussian_binomial(2, 3, &q2()).is_err());
        // [4 2]_2 = 35, a classical value
        assert_eq!(gaussian_binomial(4, 2, &q2()).unwrap(), BigUint::from(35u32));
    }

    #[test]
    fn gaussian_binomial_bounds() {
        for q in [2u32, 3, 5] {
            let q = BigUint::from(q);
            for n in 0..=7usize {
                for k in 0..=n {
                    let g = gaussian_binomial(n, k, &q).unwrap();
                    let base = q.pow((k * (n - k)) as u32);
                    assert!(g >= base);
                    assert!(g <= BigUint::from(4u32) * &base);
                }
            }
        }
    }

    #[test]
    fn shape_count_examples() {
        let l22 = Partition::new(vec![2, 2]).unwrap();
        // the module itself
        assert_eq!(
            count_submodules_of_shape(&l22, &l22, &q2()).unwrap(),
            BigUint::one()
        );
        // cyclic submodules of Z_4^2 of order 4 and of order 2
        assert_eq!(
            count_submodules_of_shape(&l22, &Partition::new(vec![2]).unwrap(), &q2()).unwrap(),
            BigUint::from(6u32)
        );
        assert_eq!(
            count_submodules_of_shape(&l22, &Partition::new(vec![1]).unwrap(), &q2()).unwrap(),
            BigUint::from(3u32)
        );
        assert!(matches!(
            count_submodules_of_shape(&Partition::new(vec![2]).unwrap(), &l22, &q2()),
            Err(Error::ShapeNotDominated)
        ));
    }

    #[test]
    fn rank_count_examples() {
        let l22 = Partition::new(vec![2, 2]).unwrap();
        assert_eq!(
            count_submodules_of_rank(&l22, 0, &q2(), 2).unwrap(),
            BigUint::one()
        );
        // 6 + 3 submodules of rank 1 in Z_4^2
        assert_eq!(
            count_submodules_of_rank(&l22, 1, &q2(), 2).unwrap(),
            BigUint::from(9u32)
        );
        assert_eq!(beta(&q2(), 2, 1, 2).unwrap(), BigUint::from(9u32));
    }

    #[test]
    fn beta_collapses_to_gaussian_for_fields() {
        for q in [2u32, 3, 4, 5] {
            let q = BigUint::from(q);
            for n in 0..=6usize {
                for k in 0..=n {
                    assert_eq!(
                        beta(&q, 1, k, n).unwrap(),
                        gaussian_binomial(n, k, &q).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn beta_bounds_hold_on_a_sweep() {
        for q in [2u32, 3] {
            let qb = BigUint::from(q);
            for nu in 1..=3u32 {
                for n in 1..=8usize {
                    for k in 0..=n / 2 {
                        let b = beta(&qb, nu, k, n).unwrap();
                        let base = qb.pow((nu as usize * k * (n - k)) as u32);
                        let slack = BigUint::from(4u32).pow(nu)
                            * binomial((k as u64) + (nu as u64) - 1, (nu as u64) - 1);
                        assert!(b >= base, "beta({q},{nu},{k},{n}) below lower bound");
                        assert!(b <= &slack * &base, "beta({q},{nu},{k},{n}) above upper bound");
                    }
                }
            }
        }
    }

    #[test]
    fn shape_of_small_modules() {
        let z4 = Zpn::new(2u32, 2).unwrap();
        let gens = Matrix::from_rows(
            z4.clone(),
            vec![
                vec![z4.from_int(2), z4.from_int(0)],
                vec![z4.from_int(0), z4.from_int(2)],
            ],
        )
        .unwrap();
        assert_eq!(shape_of_module(&gens), Partition::new(vec![1, 1]).unwrap());
        assert_eq!(cardinality_log_q(&shape_of_module(&gens)), 2);

        let id = Matrix::identity(z4, 2);
        assert_eq!(shape_of_module(&id), Partition::rectangle(2, 2));
    }

    #[test]
    fn enumerate_rank_filtered_examples() {
        let caps = EnumerationCaps::default();
        // 9 rank-1 submodules of Z_4^2
        let z4 = Zpn::new(2u32, 2).unwrap();
        let mods = enumerate_submodules(&z4, 2, Some(1), &caps).unwrap();
        assert_eq!(mods.len(), 9);
        // exactly the zero module at rank 0
        let zero = enumerate_submodules(&z4, 2, Some(0), &caps).unwrap();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].rows(), 0);
        // 7 lines in F_2^3
        let f2 = Zpn::new(2u32, 1).unwrap();
        let lines = enumerate_submodules(&f2, 3, Some(1), &caps).unwrap();
        assert_eq!(lines.len(), 7);
    }

    #[test]
    fn enumerate_rejects_oversized_ambients() {
        let z4 = Zpn::new(2u32, 2).unwrap();
        let caps = EnumerationCaps {
            max_ambient: BigUint::from(8u32),
            max_results: 1000,
        };
        assert!(matches!(
            enumerate_submodules(&z4, 2, None, &caps),
            Err(Error::TooLarge(_))
        ));
    }

    /// Reference enumerator: breadth-first closure over element sets.
    /// Exponentially slower but obviously correct; used to validate the
    /// canonical-form enumeration at tiny sizes.
    fn submodules_by_closure(ring: &Zpn, n: usize) -> BTreeSet<Vec<Vec<BigUint>>> {
        let elems = ring.all_elements();
        let zero = vec![BigUint::zero(); n];
        let mut ambient: Vec<Vec<BigUint>> = Vec::new();
        fn build(ring: &Zpn, elems: &[BigUint], n: usize, cur: &mut Vec<BigUint>, out: &mut Vec<Vec<BigUint>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for e in elems {
                cur.push(e.clone());
                build(ring, elems, n, cur, out);
                cur.pop();
            }
        }
        build(ring, &elems, n, &mut Vec::new(), &mut ambient);

        let closure = |gens: &BTreeSet<Vec<BigUint>>, v: &Vec<BigUint>| -> BTreeSet<Vec<BigUint>> {
            let mut out = BTreeSet::new();
            for base in gens {
                for c in &elems {
                    let x: Vec<BigUint> = base
                        .iter()
                        .zip(v)
                        .map(|(b, g)| ring.add(b, &ring.mul(c, g)))
                        .collect();
                    out.insert(x);
                }
            }
            out
        };

        let mut zero_mod = BTreeSet::new();
        zero_mod.insert(zero);
        let mut found: BTreeSet<Vec<Vec<BigUint>>> = BTreeSet::new();
        found.insert(zero_mod.iter().cloned().collect());
        let mut frontier = vec![zero_mod];
        while let Some(module) = frontier.pop() {
            for v in &ambient {
                if module.contains(v) {
                    continue;
                }
                let bigger = closure(&module, v);
                let key: Vec<Vec<BigUint>> = bigger.iter().cloned().collect();
                if found.insert(key) {
                    frontier.push(bigger);
                }
            }
        }
        found
    }

    #[test]
    fn canonical_enumeration_matches_closure_enumeration() {
        let caps = EnumerationCaps::default();
        for (p, nu, n) in [(2u32, 2u32, 2usize), (2, 1, 3), (2, 3, 2), (3, 2, 1), (2, 2, 3)] {
            let ring = Zpn::new(p, nu).unwrap();
            let reference = submodules_by_closure(&ring, n);
            let mut canonical: BTreeSet<Vec<Vec<BigUint>>> = BTreeSet::new();
            let count = enumerate_submodules_with(&ring, n, None, &caps, &mut |m| {
                // expand the generating matrix to its element set
                let elems = ring.all_elements();
                let mut module: BTreeSet<Vec<BigUint>> = BTreeSet::new();
                module.insert(vec![BigUint::zero(); n]);
                for row in m.row_vecs() {
                    let mut next = BTreeSet::new();
                    for base in &module {
                        for c in &elems {
                            let x: Vec<BigUint> = base
                                .iter()
                                .zip(&row)
                                .map(|(b, g)| ring.add(b, &ring.mul(c, g)))
                                .collect();
                            next.insert(x);
                        }
                    }
                    module = next;
                }
                let key: Vec<Vec<BigUint>> = module.iter().cloned().collect();
                assert!(canonical.insert(key), "duplicate module for Z_{p}^{nu} n={n}");
            })
            .unwrap();
            assert_eq!(count as usize, reference.len(), "count for Z_{p}^{nu}, n={n}");
            assert_eq!(canonical, reference, "module sets for Z_{p}^{nu}, n={n}");
        }
    }

    #[test]
    fn enumeration_counts_match_beta_per_rank() {
        let caps = EnumerationCaps::default();
        for (p, nu, n) in [(2u32, 2u32, 2usize), (2, 2, 3), (3, 1, 3), (2, 3, 2), (5, 1, 2)] {
            let ring = Zpn::new(p, nu).unwrap();
            let mut by_rank: HashMap<usize, u64> = HashMap::new();
            enumerate_submodules_with(&ring, n, None, &caps, &mut |m| {
                let r = linalg::rank(&m);
                *by_rank.entry(r).or_insert(0) += 1;
            })
            .unwrap();
            let q = BigUint::from(p);
            for k in 0..=n {
                let expected = beta(&q, nu, k, n).unwrap();
                let got = BigUint::from(by_rank.get(&k).copied().unwrap_or(0));
                assert_eq!(got, expected, "rank {k} count for Z_{p}^{nu}, n={n}");
            }
        }
    }

    #[test]
    fn enumeration_counts_match_shape_formula() {
        let caps = EnumerationCaps::default();
        for (p, nu, n) in [(2u32, 2u32, 2usize), (2, 2, 3), (2, 3, 2), (3, 2, 2)] {
            let ring = Zpn::new(p, nu).unwrap();
            let lambda = Partition::rectangle(nu, n);
            let mut by_shape: HashMap<Partition, u64> = HashMap::new();
            enumerate_submodules_with(&ring, n, None, &caps, &mut |m| {
                *by_shape.entry(shape_of_module(&m)).or_insert(0) += 1;
            })
            .unwrap();
            let q = BigUint::from(p);
            for (mu, count) in &by_shape {
                let expected = count_submodules_of_shape(&lambda, mu, &q).unwrap();
                assert_eq!(
                    BigUint::from(*count),
                    expected,
                    "shape {mu:?} count for Z_{p}^{nu}, n={n}"
                );
            }
            // and the formula finds no shapes the enumeration missed
            let total: u64 = by_shape.values().sum();
            let mut formula_total = BigUint::zero();
            for k in 0..=n {
                formula_total += count_submodules_of_rank(&lambda, k, &q, nu).unwrap();
            }
            assert_eq!(BigUint::from(total), formula_total);
        }
    }
}
