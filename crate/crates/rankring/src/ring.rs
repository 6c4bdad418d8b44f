//! The base chain ring Z_{p^nu} and the chain-ring interface shared with its
//! Galois extensions.
//!
//! In a finite chain ring every ideal is a power of the maximal ideal (pi),
//! so every nonzero element decomposes uniquely as pi^i * u with u a unit.
//! All generic algorithms in this crate (Smith normal form, solvers, module
//! enumeration) are written against that decomposition: they only ever ask a
//! ring for valuations, unit parts, unit inverses and powers of pi.

use std::fmt;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;

use crate::error::{Error, Result};

/// Largest prime the constructor will certify by trial division.
const MAX_CERTIFIABLE_PRIME_BITS: u64 = 40;

/// Interface of a finite chain ring with maximal ideal (pi) of nilpotency
/// index `nu` and residue field of size `q`.
///
/// Elements are plain data; the ring value is the context that interprets
/// them. Every operation returns canonical representatives.
pub trait ChainRing: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug;

    /// Nilpotency index of pi, i.e. the smallest i with pi^i = 0.
    fn nu(&self) -> u32;

    /// Size q of the residue field R/(pi).
    fn residue_size(&self) -> BigUint;

    /// |R| = q^nu.
    fn size(&self) -> BigUint {
        self.residue_size().pow(self.nu())
    }

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// Largest i with pi^i dividing `a`; the valuation of zero is `nu`.
    fn valuation(&self, a: &Self::Elem) -> u32;

    /// The unit u in the decomposition a = pi^valuation(a) * u.
    ///
    /// Returns one for a = 0 so that the decomposition identity
    /// a = pi_pow(valuation(a)) * unit_part(a) holds for every element.
    fn unit_part(&self, a: &Self::Elem) -> Self::Elem;

    /// Inverse of a unit; `NotAUnit` when valuation(a) > 0.
    fn invert_unit(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// pi^i as a ring element (zero once i >= nu).
    fn pi_pow(&self, i: u32) -> Self::Elem;

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.valuation(a) == 0
    }

    /// Exact quotient a / b for b != 0 with valuation(a) >= valuation(b).
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if self.is_zero(a) {
            return self.zero();
        }
        let va = self.valuation(a);
        let vb = self.valuation(b);
        debug_assert!(va >= vb, "div_exact: valuation obstruction");
        let ub_inv = self
            .invert_unit(&self.unit_part(b))
            .expect("unit part is a unit");
        let u = self.mul(&self.unit_part(a), &ub_inv);
        self.mul(&self.pi_pow(va - vb), &u)
    }

    /// Canonical representatives of R/(pi^delta).
    ///
    /// Only intended for enumeration oracles; callers are responsible for
    /// keeping delta small enough that the list fits in memory.
    fn residue_reps(&self, delta: u32) -> Vec<Self::Elem>;

    fn all_elements(&self) -> Vec<Self::Elem> {
        self.residue_reps(self.nu())
    }

    fn random_element(&self, rng: &mut dyn RngCore) -> Self::Elem;
}

/// The ring Z_{p^nu} of integers modulo a prime power, the base ring of
/// every Galois extension in this crate.
///
/// Elements are canonical residues in [0, p^nu) stored as `BigUint`.
#[derive(Clone, PartialEq, Eq)]
pub struct Zpn {
    p: BigUint,
    nu: u32,
    modulus: BigUint,
}

impl fmt::Debug for Zpn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}^{}", self.p, self.nu)
    }
}

impl Zpn {
    /// Builds Z_{p^nu}, certifying that `p` is prime by trial division.
    pub fn new(p: impl Into<BigUint>, nu: u32) -> Result<Self> {
        let p: BigUint = p.into();
        if nu == 0 {
            return Err(Error::OutOfRange("nu must be >= 1".into()));
        }
        if !is_small_prime(&p)? {
            return Err(Error::NotPrime(p));
        }
        let modulus = p.pow(nu);
        Ok(Zpn { p, nu, modulus })
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// Canonicalizes an arbitrary integer into [0, p^nu).
    pub fn reduce(&self, x: &BigUint) -> BigUint {
        x % &self.modulus
    }

    /// Convenience constructor for signed literals, reducing mod p^nu.
    pub fn from_int(&self, x: i64) -> BigUint {
        let m = BigInt::from_biguint(num_bigint::Sign::Plus, self.modulus.clone());
        let r = BigInt::from(x).mod_floor(&m);
        r.to_biguint().expect("mod_floor of positive modulus")
    }

    /// The residue field F_p = Z_p, target of the projection Psi.
    pub fn residue_field(&self) -> Zpn {
        Zpn {
            p: self.p.clone(),
            nu: 1,
            modulus: self.p.clone(),
        }
    }

    /// Natural projection Z_{p^nu} -> F_p, i.e. reduction mod p.
    pub fn residue_project(&self, a: &BigUint) -> BigUint {
        a % &self.p
    }
}

impl ChainRing for Zpn {
    type Elem = BigUint;

    fn nu(&self) -> u32 {
        self.nu
    }

    fn residue_size(&self) -> BigUint {
        self.p.clone()
    }

    fn size(&self) -> BigUint {
        self.modulus.clone()
    }

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }

    fn one(&self) -> BigUint {
        BigUint::one()
    }

    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a + b) % &self.modulus
    }

    fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.modulus - a
        }
    }

    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.modulus
    }

    fn valuation(&self, a: &BigUint) -> u32 {
        if a.is_zero() {
            return self.nu;
        }
        let mut x = a.clone();
        let mut v = 0;
        while v < self.nu {
            let (q, r) = x.div_rem(&self.p);
            if !r.is_zero() {
                break;
            }
            x = q;
            v += 1;
        }
        v
    }

    fn unit_part(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            return BigUint::one();
        }
        let v = self.valuation(a);
        a / self.p.pow(v)
    }

    fn invert_unit(&self, a: &BigUint) -> Result<BigUint> {
        if self.valuation(a) != 0 {
            return Err(Error::NotAUnit);
        }
        let a = BigInt::from_biguint(num_bigint::Sign::Plus, a.clone());
        let m = BigInt::from_biguint(num_bigint::Sign::Plus, self.modulus.clone());
        let e = a.extended_gcd(&m);
        debug_assert!(e.gcd.is_one());
        let inv = e.x.mod_floor(&m);
        Ok(inv.to_biguint().expect("mod_floor of positive modulus"))
    }

    fn pi_pow(&self, i: u32) -> BigUint {
        if i >= self.nu {
            BigUint::zero()
        } else {
            self.p.pow(i)
        }
    }

    fn residue_reps(&self, delta: u32) -> Vec<BigUint> {
        let bound = self.p.pow(delta.min(self.nu));
        let mut reps = Vec::new();
        let mut x = BigUint::zero();
        while x < bound {
            reps.push(x.clone());
            x += 1u32;
        }
        reps
    }

    fn random_element(&self, rng: &mut dyn RngCore) -> BigUint {
        rng.gen_biguint_below(&self.modulus)
    }
}

/// Trial-division primality certificate for desk-scale primes.
fn is_small_prime(p: &BigUint) -> Result<bool> {
    if p.bits() > MAX_CERTIFIABLE_PRIME_BITS {
        return Err(Error::TooLarge(format!(
            "cannot certify primality of {p} by trial division"
        )));
    }
    let n = p.to_u64().expect("bounded above");
    if n < 2 {
        return Ok(false);
    }
    if n % 2 == 0 {
        return Ok(n == 2);
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return Ok(false);
        }
        d += 2;
    }
    Ok(true)
}
