//! Exact arithmetic in Q(ζ_m), elements stored in the power basis 1, ζ, …, ζ^{φ(m)−1}.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

type Poly = Vec<BigRational>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Poly {
    let mut out: Poly = (0..a.len().max(b.len()))
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
fn divrem(a: &[BigRational], b: &[BigRational]) -> (Poly, Poly) {
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (i, y) in b.iter().enumerate() {
            r[shift + i] -= &c * y;
        }
        q[shift] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Φ_m with integer coefficients, little-endian.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigInt> {
    let mut p: Poly = vec![BigRational::zero(); m as usize + 1];
    p[0] = -BigRational::one();
    p[m as usize] = BigRational::one();
    for d in (1..m).filter(|d| m % d == 0) {
        let phi_d: Poly = cyclotomic_polynomial(d).into_iter().map(BigRational::from_integer).collect();
        p = divrem(&p, &phi_d).0;
    }
    p.into_iter().map(|c| c.to_integer()).collect()
}

/// The field Q(ζ_m).
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    pub m: u32,
    modulus: Poly,
}

impl CyclotomicField {
    pub fn new(m: u32) -> Arc<CyclotomicField> {
        assert!(m >= 1);
        let modulus = cyclotomic_polynomial(m).into_iter().map(BigRational::from_integer).collect();
        Arc::new(CyclotomicField { m, modulus })
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, p: &[BigRational]) -> Poly {
        divrem(p, &self.modulus).1
    }
}

/// An element of Q(ζ_m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyc {
    pub field: Arc<CyclotomicField>,
    /// Power-basis coefficients, trailing zeros trimmed.
    pub coeffs: Vec<BigRational>,
}

impl Cyc {
    pub fn new(field: &Arc<CyclotomicField>, coeffs: Vec<BigRational>) -> Cyc {
        Cyc { coeffs: field.reduce(&coeffs), field: field.clone() }
    }

    pub fn zero(field: &Arc<CyclotomicField>) -> Cyc {
        Cyc { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn rational(field: &Arc<CyclotomicField>, r: BigRational) -> Cyc {
        Cyc::new(field, vec![r])
    }

    /// c·ζ^a.
    pub fn root(field: &Arc<CyclotomicField>, a: u32, c: BigRational) -> Cyc {
        let mut p = vec![BigRational::zero(); (a % field.m) as usize + 1];
        p[(a % field.m) as usize] = c;
        Cyc::new(field, p)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The value as a rational, if it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &Cyc) -> Cyc {
        let neg: Poly = other.coeffs.iter().map(|c| -c).collect();
        Cyc { field: self.field.clone(), coeffs: poly_sub(&self.coeffs, &neg) }
    }

    pub fn mul(&self, other: &Cyc) -> Cyc {
        Cyc { field: self.field.clone(), coeffs: self.field.reduce(&poly_mul(&self.coeffs, &other.coeffs)) }
    }

    pub fn pow(&self, mut e: u64) -> Cyc {
        let mut acc = Cyc::rational(&self.field, BigRational::one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Inverse by the extended Euclidean algorithm against Φ_m.
    pub fn inv(&self) -> Option<Cyc> {
        if self.is_zero() {
            return None;
        }
        let (mut r0, mut r1) = (self.field.modulus.clone(), self.coeffs.clone());
        let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since Φ_m is irreducible.
        let c = r0[0].clone();
        let coeffs: Poly = s0.iter().map(|x| x / &c).collect();
        Some(Cyc::new(&self.field, coeffs))
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*z")?,
                _ => write!(f, "({c})*z^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn root_has_exact_order() {
        for m in 1..=12 {
            let f = CyclotomicField::new(m);
            let z = Cyc::root(&f, 1, BigRational::one());
            let one = Cyc::rational(&f, BigRational::one());
            assert_eq!(z.pow(m as u64), one);
            for d in 1..m {
                assert_ne!(z.pow(d as u64), one, "m = {m}, d = {d}");
            }
        }
    }

    #[test]
    fn inverse() {
        let f = CyclotomicField::new(7);
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let a = Cyc::new(&f, vec![r(2, 3), r(-1, 1), r(0, 1), r(5, 2)]);
        assert_eq!(a.mul(&a.inv().unwrap()), Cyc::rational(&f, BigRational::one()));
        assert!(Cyc::zero(&f).inv().is_none());
    }
}
