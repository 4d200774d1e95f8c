use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fq::poly::{is_prime, prime_factors};
use crate::group::GroupTable;

/// Upper end of the prime search.
pub const ELL_SEARCH_CAP: u64 = 1 << 31;

/// A prime ℓ in which all character arithmetic of one group takes place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllContext {
    pub ell: u64,
    /// An element of order `exponent` in F_ℓ.
    pub zeta: u64,
    pub exponent: u64,
    /// Largest integer a lifted residue may represent.
    pub omega_max: u64,
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, m: u64) -> u64 {
    pow_mod(a, m - 2, m)
}

fn isqrt(n: u128) -> u128 {
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Smallest prime ℓ ≡ 1 (mod exponent) with ℓ > 2·max(omega_max, isqrt(order) + 1).
pub fn choose_ell_for(order: u128, exponent: u64, omega_max: u64) -> Result<EllContext> {
    let bound = 2 * (omega_max as u128).max(isqrt(order) + 1);
    let e = exponent.max(1) as u128;
    let mut ell = (bound / e) * e + 1;
    while ell <= bound {
        ell += e;
    }
    while ell < ELL_SEARCH_CAP as u128 {
        if is_prime(ell as u64) {
            let ell = ell as u64;
            return Ok(EllContext { ell, zeta: root_of_unity(ell, exponent.max(1)), exponent: exponent.max(1), omega_max });
        }
        ell += e;
    }
    Err(Error::NoPrime)
}

pub fn choose_ell(group: &GroupTable, omega_max: u64) -> Result<EllContext> {
    choose_ell_for(group.order() as u128, group.exponent(), omega_max)
}

/// Least element of exact order `n` in F_ℓ; requires n | ℓ − 1.
fn root_of_unity(ell: u64, n: u64) -> u64 {
    let primes = prime_factors(n);
    (1..ell)
        .map(|g| pow_mod(g, (ell - 1) / n, ell))
        .find(|&z| primes.iter().all(|&p| pow_mod(z, n / p, ell) != 1))
        .expect("F_ell^x is cyclic")
}

impl EllContext {
    /// A user-supplied ℓ, checked for admissibility.
    pub fn with_ell(ell: u64, order: u128, exponent: u64, omega_max: u64) -> Result<EllContext> {
        let exponent = exponent.max(1);
        if !is_prime(ell) || (ell - 1) % exponent != 0 {
            return Err(Error::ContextViolation { value: ell, bound: exponent, ell });
        }
        let ctx = EllContext { ell, zeta: root_of_unity(ell, exponent), exponent, omega_max };
        ctx.check_valid_for(order, exponent)?;
        Ok(ctx)
    }

    /// Same ℓ, a different group exponent dividing the original one.
    pub fn check_valid_for(&self, order: u128, exponent: u64) -> Result<()> {
        let lower = 2 * (self.omega_max as u128).max(isqrt(order) + 1);
        if (self.ell - 1) % exponent != 0 || (self.ell as u128) <= lower || !is_prime(self.ell) {
            return Err(Error::ContextViolation { value: self.ell, bound: lower as u64, ell: self.ell });
        }
        Ok(())
    }

    /// Least non-negative residue of an integer.
    pub fn reduce(&self, x: u128) -> u64 {
        (x % self.ell as u128) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, GroupDescriptor};

    #[test]
    fn gl2_f2_gives_31() {
        let g = build_group(&GroupDescriptor::gl(2), 2, 1).unwrap();
        assert_eq!(g.exponent(), 6);
        let ctx = choose_ell(&g, 10).unwrap();
        assert_eq!(ctx.ell, 31);
        assert_eq!(pow_mod(ctx.zeta, 6, 31), 1);
        assert!((1..6).all(|i| pow_mod(ctx.zeta, i, 31) != 1));
    }

    #[test]
    fn explicit_ell() {
        let g = build_group(&GroupDescriptor::gl(2), 2, 1).unwrap();
        let ctx = EllContext::with_ell(37, g.order() as u128, g.exponent(), 10).unwrap();
        assert_eq!(pow_mod(ctx.zeta, 6, 37), 1);
        assert!(EllContext::with_ell(29, g.order() as u128, g.exponent(), 10).is_err());
        assert!(EllContext::with_ell(7, g.order() as u128, g.exponent(), 10).is_err());
    }

    #[test]
    fn trivial_group_gives_5() {
        assert_eq!(choose_ell_for(1, 1, 1).unwrap().ell, 5);
    }

    #[test]
    fn direct_search_oracle() {
        for (order, exp, om) in [(48u128, 24u64, 4u64), (168, 84, 21), (5760, 240, 100)] {
            let ctx = choose_ell_for(order, exp, om).unwrap();
            let lower = 2 * (om as u128).max(((order as f64).sqrt() as u128) + 1);
            let expected = (2u64..).find(|&l| (l as u128) > lower && l % exp == 1 && is_prime(l)).unwrap();
            assert_eq!(ctx.ell, expected);
            assert_ne!(order % ctx.ell as u128, 0);
        }
    }
}
