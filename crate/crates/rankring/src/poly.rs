//! Dense polynomial arithmetic over Z_{p^nu}, ascending-degree coefficients.
//!
//! Just enough machinery for building Galois extensions: reduction modulo a
//! monic polynomial, modular exponentiation, and gcd / modular inverse over
//! the residue field F_p (Rabin irreducibility test, Psi-inverse lifting).

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{ChainRing, Zpn};

pub(crate) type Poly = Vec<BigUint>;

/// Drops trailing zero coefficients (the zero polynomial becomes empty).
pub(crate) fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn degree(p: &Poly) -> Option<usize> {
    let mut d = p.len();
    while d > 0 {
        if !p[d - 1].is_zero() {
            return Some(d - 1);
        }
        d -= 1;
    }
    None
}

pub(crate) fn is_zero(p: &Poly) -> bool {
    degree(p).is_none()
}

pub(crate) fn x() -> Poly {
    vec![BigUint::zero(), BigUint::one()]
}

pub(crate) fn reduce_coeffs(ring: &Zpn, p: &[BigUint]) -> Poly {
    let mut out: Poly = p.iter().map(|c| ring.reduce(c)).collect();
    trim(&mut out);
    out
}

#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn add(ring: &Zpn, a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let zero = BigUint::zero();
    let mut out: Poly = (0..n)
        .map(|i| ring.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn sub(ring: &Zpn, a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let zero = BigUint::zero();
    let mut out: Poly = (0..n)
        .map(|i| ring.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(ring: &Zpn, a: &Poly, b: &Poly) -> Poly {
    if is_zero(a) || is_zero(b) {
        return Vec::new();
    }
    let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            let t = ring.mul(ca, cb);
            out[i + j] = ring.add(&out[i + j], &t);
        }
    }
    trim(&mut out);
    out
}

/// Euclidean division by a polynomial with unit leading coefficient.
pub(crate) fn divrem(ring: &Zpn, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
    let db = degree(b).ok_or_else(|| Error::OutOfRange("division by zero polynomial".into()))?;
    let lc_inv = ring.invert_unit(&b[db])?;
    let mut rem = a.clone();
    trim(&mut rem);
    let mut quot = vec![BigUint::zero(); rem.len().saturating_sub(db)];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = ring.mul(&rem[dr], &lc_inv);
        let shift = dr - db;
        quot[shift] = ring.add(&quot[shift], &c);
        for (i, cb) in b.iter().enumerate().take(db + 1) {
            let t = ring.mul(&c, cb);
            rem[shift + i] = ring.sub(&rem[shift + i], &t);
        }
        trim(&mut rem);
    }
    trim(&mut quot);
    Ok((quot, rem))
}

pub(crate) fn rem(ring: &Zpn, a: &Poly, b: &Poly) -> Result<Poly> {
    Ok(divrem(ring, a, b)?.1)
}

/// base^exp modulo a monic polynomial, square-and-multiply.
pub(crate) fn powmod(ring: &Zpn, base: &Poly, exp: &BigUint, modulus: &Poly) -> Result<Poly> {
    let mut result = vec![BigUint::one()];
    let mut acc = rem(ring, base, modulus)?;
    for i in 0..exp.bits() {
        if exp.bit(i) {
            result = rem(ring, &mul(ring, &result, &acc), modulus)?;
        }
        acc = rem(ring, &mul(ring, &acc, &acc), modulus)?;
    }
    Ok(result)
}

/// Monic gcd over the residue field (requires nu = 1).
pub(crate) fn gcd(field: &Zpn, a: &Poly, b: &Poly) -> Result<Poly> {
    debug_assert_eq!(field.nu(), 1);
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    trim(&mut r0);
    trim(&mut r1);
    while !is_zero(&r1) {
        let r = rem(field, &r0, &r1)?;
        r0 = r1;
        r1 = r;
    }
    if let Some(d) = degree(&r0) {
        let inv = field.invert_unit(&r0[d])?;
        r0 = r0.iter().map(|c| field.mul(c, &inv)).collect();
    }
    Ok(r0)
}

/// Inverse of `a` modulo `m` over the residue field, by extended Euclid.
pub(crate) fn invert_mod(field: &Zpn, a: &Poly, m: &Poly) -> Result<Poly> {
    debug_assert_eq!(field.nu(), 1);
    let mut r0 = m.clone();
    let mut r1 = rem(field, a, m)?;
    let mut t0: Poly = Vec::new();
    let mut t1: Poly = vec![BigUint::one()];
    while !is_zero(&r1) {
        let (q, r) = divrem(field, &r0, &r1)?;
        let t = sub(field, &t0, &mul(field, &q, &t1));
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    if degree(&r0) != Some(0) {
        return Err(Error::NotAUnit);
    }
    let inv = field.invert_unit(&r0[0])?;
    let out: Poly = t0.iter().map(|c| field.mul(c, &inv)).collect();
    rem(field, &out, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Zpn {
        Zpn::new(2u32, 1).unwrap()
    }

    fn poly(field: &Zpn, coeffs: &[i64]) -> Poly {
        coeffs.iter().map(|&c| field.from_int(c)).collect()
    }

    #[test]
    fn divrem_reconstructs() {
        let f = f2();
        let a = poly(&f, &[1, 0, 1, 0, 0, 1]); // x^5 + x^2 + 1
        let b = poly(&f, &[1, 1, 1]); // x^2 + x + 1
        let (q, r) = divrem(&f, &a, &b).unwrap();
        let back = add(&f, &mul(&f, &q, &b), &r);
        assert_eq!(back, a);
        assert!(degree(&r).unwrap_or(0) < 2);
    }

    #[test]
    fn gcd_detects_square_factor() {
        let f = f2();
        // x^2 + 1 = (x + 1)^2 over F_2; gcd with x^2 + x is x + 1.
        let g = gcd(&f, &poly(&f, &[0, 1, 1]), &poly(&f, &[1, 0, 1])).unwrap();
        assert_eq!(g, poly(&f, &[1, 1]));
    }

    #[test]
    fn invert_mod_roundtrip() {
        let f = f2();
        let m = poly(&f, &[1, 1, 0, 0, 1]); // x^4 + x + 1, irreducible
        let a = poly(&f, &[0, 1, 1]); // x^2 + x
        let inv = invert_mod(&f, &a, &m).unwrap();
        let prod = rem(&f, &mul(&f, &a, &inv), &m).unwrap();
        assert_eq!(prod, vec![BigUint::one()]);
    }

    #[test]
    fn powmod_fermat() {
        let f = Zpn::new(3u32, 1).unwrap();
        let m = poly(&f, &[1, 2, 0, 1]); // x^3 + 2x + 1 over F_3
        // x^(3^3) = x mod m iff every irreducible factor has degree dividing 3.
        let lhs = powmod(&f, &x(), &BigUint::from(27u32), &m).unwrap();
        let rhs = rem(&f, &x(), &m).unwrap();
        assert_eq!(lhs, rhs);
    }
}
