//! Point counts of the incidence variety Y = (X × G/B)_G and the estimate ĉ
//! of its number of top-dimensional components.
//!
//! Only B(F_{q^k}), X(F_{q^k}) and closed-form group orders are ever
//! enumerated here; never G(F_{q^k}) itself.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational;
use crate::scenario::{borel_orbit_count, GroupSpace, Scenario, POINT_CAP};

/// Default convergence tolerance.
pub fn default_tol() -> BigRational {
    BigRational::new(1.into(), 8.into())
}

/// Default largest extension degree; correction factors decay slowly at q = 2.
pub fn default_max_ext(q: u64) -> u32 {
    if q == 2 {
        5
    } else {
        3
    }
}

/// Counts at one extension degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Level {
    pub k: u32,
    pub group_order: u128,
    pub flag_count: u128,
    pub borel_fix_sum: u128,
    /// #Y(F_{q^k}) = |G/B| · Σ_{b∈B} Fix(b).
    pub incidence: u128,
    #[serde(with = "rational")]
    pub ratio: BigRational,
}

pub fn level(s: &Scenario, k: u32) -> Result<Level> {
    let (law, space) = s.instantiate(k)?;
    let borel_fix_sum = space.borel_fix_sum();
    let flag_count = law.flag_count();
    let incidence = flag_count.checked_mul(borel_fix_sum).ok_or_else(|| Error::CapExceeded {
        what: format!("#Y over F_{}^{k}", s.q),
        predicted: u128::MAX,
        cap: u128::MAX,
    })?;
    let denom = BigInt::from(s.q).pow(k * s.group.dim());
    Ok(Level {
        k,
        group_order: law.order(),
        flag_count,
        borel_fix_sum,
        incidence,
        ratio: BigRational::new(BigInt::from(incidence), denom),
    })
}

pub fn incidence_count(s: &Scenario, k: u32) -> Result<u128> {
    Ok(level(s, k)?.incidence)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentEstimate {
    #[serde(with = "rational::vec")]
    pub r_k: Vec<BigRational>,
    pub levels: Vec<Level>,
    pub c_hat: u64,
    pub converged: bool,
    #[serde(with = "rational")]
    pub tol: BigRational,
    /// What ĉ counts.
    pub scope: &'static str,
}

fn nearest(r: &BigRational) -> BigInt {
    r.round().to_integer()
}

/// |r_K − round(r_K)| < tol and round(r_K) = round(r_{K−1}).
pub fn is_converged(r: &[BigRational], tol: &BigRational) -> bool {
    let [.., prev, last] = r else { return false };
    let c = nearest(last);
    (last - BigRational::from_integer(c.clone())).abs() < *tol && nearest(prev) == c
}

fn assemble(levels: Vec<Level>, tol: &BigRational) -> ComponentEstimate {
    let r_k: Vec<BigRational> = levels.iter().map(|l| l.ratio.clone()).collect();
    let last = r_k.last().cloned().unwrap_or_else(BigRational::zero);
    ComponentEstimate {
        converged: is_converged(&r_k, tol),
        c_hat: nearest(&last).to_u64().unwrap_or(0),
        r_k,
        levels,
        tol: tol.clone(),
        scope: "top-dimensional components of (X x G/B)_G",
    }
}

/// ĉ from the ratios r_1, …, r_K.
pub fn component_estimate(s: &Scenario, max_ext: u32, tol: &BigRational) -> Result<ComponentEstimate> {
    if max_ext < 2 {
        return Err(Error::Scenario("component estimate needs max_ext >= 2".into()));
    }
    let levels = (1..=max_ext).into_par_iter().map(|k| level(s, k)).collect::<Result<Vec<_>>>()?;
    Ok(assemble(levels, tol))
}

/// As `component_estimate`, stopping at the first K ≥ 2 that converges.
pub fn component_estimate_adaptive(s: &Scenario, max_ext: u32, tol: &BigRational) -> Result<ComponentEstimate> {
    if max_ext < 2 {
        return Err(Error::Scenario("component estimate needs max_ext >= 2".into()));
    }
    let mut levels = vec![level(s, 1)?];
    for k in 2..=max_ext {
        levels.push(level(s, k)?);
        let r: Vec<BigRational> = levels.iter().map(|l| l.ratio.clone()).collect();
        if is_converged(&r, tol) {
            break;
        }
    }
    Ok(assemble(levels, tol))
}

/// ĉ for a space given level by level, with #Y(F_{q^k}) = |G(F_{q^k})| · #B-orbits
/// computed by union-find over Borel generators. Used for spaces that are
/// not catalog kinds, such as pulled-back and induced spaces.
pub fn estimate_by_orbits<F>(dim: u32, q: u64, max_ext: u32, tol: &BigRational, space_at: F) -> Result<ComponentEstimate>
where
    F: Fn(u32) -> Result<std::sync::Arc<dyn GroupSpace>> + Sync,
{
    if max_ext < 2 {
        return Err(Error::Scenario("component estimate needs max_ext >= 2".into()));
    }
    let level_at = |k: u32| -> Result<Level> {
        let space = space_at(k)?;
        let law = space.law().clone();
        let orbits = borel_orbit_count(space.as_ref()) as u128;
        let incidence = law.order() * orbits;
        Ok(Level {
            k,
            group_order: law.order(),
            flag_count: law.flag_count(),
            borel_fix_sum: law.borel_order() * orbits,
            incidence,
            ratio: BigRational::new(BigInt::from(incidence), BigInt::from(q).pow(k * dim)),
        })
    };
    let mut levels = vec![level_at(1)?];
    for k in 2..=max_ext {
        levels.push(level_at(k)?);
        let r: Vec<BigRational> = levels.iter().map(|l| l.ratio.clone()).collect();
        if is_converged(&r, tol) {
            break;
        }
    }
    Ok(assemble(levels, tol))
}

/// Number of B(F_{q^k})-orbits on X(F_{q^k}) for k = 1..K, by union-find.
pub fn b_orbit_trace(s: &Scenario, max_ext: u32) -> Result<Vec<u64>> {
    (1..=max_ext)
        .into_par_iter()
        .map(|k| {
            let (_, space) = s.instantiate(k)?;
            if space.len() as u128 > POINT_CAP {
                return Err(Error::CapExceeded {
                    what: format!("{} points at k = {k}", s.space),
                    predicted: space.len() as u128,
                    cap: POINT_CAP,
                });
            }
            Ok(borel_orbit_count(space.as_ref()) as u64)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sphericity {
    pub spherical: bool,
    pub bounded_growth: bool,
    pub orbits_stable: bool,
    pub orbit_trace: Vec<u64>,
    #[serde(with = "rational::vec")]
    pub r_k: Vec<BigRational>,
}

/// Spherical iff r_K/r_{K−1} < q and the last two B-orbit counts agree.
/// Only the last step is tested: over small fields the early ratios still
/// carry the torus corrections and may grow by more than q.
pub fn sphericity_check(s: &Scenario, max_ext: u32) -> Result<Sphericity> {
    if max_ext < 2 {
        return Err(Error::Scenario("sphericity check needs max_ext >= 2".into()));
    }
    let orbit_trace = b_orbit_trace(s, max_ext)?;
    let r_k: Vec<BigRational> = (1..=max_ext)
        .into_par_iter()
        .map(|k| level(s, k).map(|l| l.ratio))
        .collect::<Result<_>>()?;
    let q = BigRational::from_integer(s.q.into());
    let n = r_k.len();
    let bounded_growth = r_k[n - 1] < &r_k[n - 2] * &q;
    let n = orbit_trace.len();
    let orbits_stable = orbit_trace[n - 1] == orbit_trace[n - 2];
    Ok(Sphericity { spherical: bounded_growth && orbits_stable, bounded_growth, orbits_stable, orbit_trace, r_k })
}

/// ∏_{i=1}^{n} (1 − q^{−ik}).
pub fn gl_correction(n: u32, q: u64, k: u32) -> BigRational {
    (1..=n).fold(BigRational::one(), |acc, i| {
        let qi = BigRational::from_integer(BigInt::from(q).pow(i * k));
        acc * (BigRational::one() - qi.recip())
    })
}
