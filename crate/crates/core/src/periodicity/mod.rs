//! Orbits n ↦ φ(v^n) of rational functions, eventual periodicity, and
//! multiplicity sequences over the extensions F_{q^k}.

pub mod cyclotomic;

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chars::{character_table, choose_ell};
use crate::error::{Error, Result};
use crate::group::build_group;
use crate::mult::multiplicity_vector;
use crate::rational;
use crate::scenario::{group_orbit_count, GroupSpace, Scenario, POINT_CAP};
pub use cyclotomic::{Cyc, CyclotomicField};

/// Largest group for which per-level character tables are computed.
pub const IRREP_TABLE_CAP: usize = 60_000;

/// Coefficients in the power basis of Q(ζ_m).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycValue(#[serde(with = "rational::vec")] pub Vec<BigRational>);

impl CycValue {
    pub fn int(c: i64) -> CycValue {
        CycValue(vec![BigRational::from_integer(c.into())])
    }

    pub fn ratio(n: i64, d: i64) -> CycValue {
        CycValue(vec![BigRational::new(n.into(), d.into())])
    }

    /// ζ^a.
    pub fn root(a: usize) -> CycValue {
        let mut v = vec![BigRational::zero(); a + 1];
        v[a] = BigRational::one();
        CycValue(v)
    }

    fn to_cyc(&self, f: &Arc<CyclotomicField>) -> Cyc {
        Cyc::new(f, self.0.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub exponents: Vec<u32>,
    pub coeff: CycValue,
}

impl Term {
    pub fn new(exponents: &[u32], c: i64) -> Term {
        Term { exponents: exponents.to_vec(), coeff: CycValue::int(c) }
    }
}

/// φ = numerator/denominator evaluated along n ↦ v^n, n = 1..horizon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalOrbitSpec {
    /// m, for coefficients in Q(ζ_m).
    #[serde(default = "one")]
    pub conductor: u32,
    pub numerator: Vec<Term>,
    pub denominator: Vec<Term>,
    pub v: Vec<CycValue>,
    pub horizon: usize,
}

fn one() -> u32 {
    1
}

fn eval_poly(f: &Arc<CyclotomicField>, terms: &[Term], point: &[Cyc]) -> Result<Cyc> {
    let mut acc = Cyc::zero(f);
    for t in terms {
        if t.exponents.len() != point.len() {
            return Err(Error::Dimension(format!(
                "term with {} exponents at a point with {} coordinates",
                t.exponents.len(),
                point.len()
            )));
        }
        let mut m = t.coeff.to_cyc(f);
        for (x, &e) in point.iter().zip(&t.exponents) {
            m = m.mul(&x.pow(e as u64));
        }
        acc = acc.add(&m);
    }
    Ok(acc)
}

/// φ(v), φ(v²), …, φ(v^N).
pub fn evaluate_orbit(spec: &RationalOrbitSpec) -> Result<Vec<Cyc>> {
    let f = CyclotomicField::new(spec.conductor.max(1));
    let v: Vec<Cyc> = spec.v.iter().map(|c| c.to_cyc(&f)).collect();
    if v.iter().any(Cyc::is_zero) {
        return Err(Error::Dimension("orbit point has a zero coordinate".into()));
    }
    (1..=spec.horizon)
        .into_par_iter()
        .map(|n| {
            let point: Vec<Cyc> = v.iter().map(|x| x.pow(n as u64)).collect();
            let den = eval_poly(&f, &spec.denominator, &point)?;
            let inv = den.inv().ok_or(Error::Irregular(n))?;
            Ok(eval_poly(&f, &spec.numerator, &point)?.mul(&inv))
        })
        .collect()
}

/// Smallest period p ≤ N/2 and, for it, the smallest preperiod t with
/// t + 2p ≤ N such that values[i] = values[i + p] for all i ≥ t.
pub fn detect_period<T: PartialEq>(values: &[T]) -> (Option<usize>, usize) {
    let n = values.len();
    for p in 1..=n / 2 {
        // The largest i with values[i] != values[i + p] bounds the preperiod.
        let t = (0..n - p).rev().find(|&i| values[i] != values[i + p]).map_or(0, |i| i + 1);
        if t + 2 * p <= n {
            return (Some(p), t);
        }
    }
    (None, 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceVerdict {
    pub values: Vec<String>,
    pub horizon: usize,
    pub is_integer_valued: bool,
    pub period: Option<usize>,
    pub preperiod: usize,
    /// Largest value of the periodic tail.
    pub limsup_witness: Option<String>,
    /// value(1) ≤ max(tail); absent when no period was found or values are not real.
    pub f1_le_limsup_ok: Option<bool>,
    /// max(tail) ≤ ĉ, when ĉ was supplied.
    pub tail_le_c_hat: Option<bool>,
    /// No period fits within the horizon.
    pub inconclusive: bool,
}

fn verdict_rational(values: &[BigRational], c_hat: Option<u64>) -> SequenceVerdict {
    let (period, preperiod) = detect_period(values);
    let tail_max = period.and_then(|_| values[preperiod..].iter().max().cloned());
    SequenceVerdict {
        values: values.iter().map(|v| v.to_string()).collect(),
        horizon: values.len(),
        is_integer_valued: values.iter().all(|v| v.is_integer()),
        period,
        preperiod,
        limsup_witness: tail_max.as_ref().map(|m| m.to_string()),
        f1_le_limsup_ok: tail_max.as_ref().map(|m| values[0] <= *m),
        tail_le_c_hat: tail_max.as_ref().zip(c_hat).map(|(m, c)| *m <= BigRational::from_integer(c.into())),
        inconclusive: period.is_none(),
    }
}

/// Evaluates the orbit and reports its periodicity.
pub fn orbit_verdict(spec: &RationalOrbitSpec) -> Result<SequenceVerdict> {
    let values = evaluate_orbit(spec)?;
    if let Some(rs) = values.iter().map(Cyc::as_rational).collect::<Option<Vec<_>>>() {
        return Ok(verdict_rational(&rs, None));
    }
    let (period, preperiod) = detect_period(&values);
    Ok(SequenceVerdict {
        values: values.iter().map(|v| v.to_string()).collect(),
        horizon: values.len(),
        is_integer_valued: false,
        period,
        preperiod,
        limsup_witness: None,
        f1_le_limsup_ok: None,
        tail_le_c_hat: None,
        inconclusive: period.is_none(),
    })
}

/// Which multiplicity is followed along the extensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selector {
    /// m_trivial, the number of G(F_{q^k})-orbits on X(F_{q^k}).
    Trivial,
    /// The row with this index in each level's sorted character table.
    Irrep(usize),
}

fn trivial_multiplicity(s: &Scenario, k: u32) -> Result<u64> {
    let (_, space) = s.instantiate(k)?;
    if space.len() as u128 > POINT_CAP {
        return Err(Error::CapExceeded {
            what: format!("{} points at k = {k}", s.space),
            predicted: space.len() as u128,
            cap: POINT_CAP,
        });
    }
    Ok(group_orbit_count(space.as_ref()) as u64)
}

fn irrep_multiplicity(s: &Scenario, k: u32, index: usize) -> Result<Option<u64>> {
    let order = s.group.order(s.q, k)?;
    if order > IRREP_TABLE_CAP as u128 {
        return Ok(None);
    }
    let g = build_group(&s.group, s.q, k)?;
    let (_, space) = s.instantiate(k)?;
    let ctx = choose_ell(&g, space.len() as u64)?;
    let table = character_table(&g, &ctx)?;
    let mv = multiplicity_vector(&g, space.as_ref(), &table, &ctx)?;
    Ok(mv.multiplicities.get(index).copied())
}

/// Multiplicities over F_{q^k}, k = 1..K, with their periodicity verdict.
/// For an irreducible selector the sequence stops at the first level whose
/// group is too large for a full table.
pub fn multiplicity_sequence(
    s: &Scenario,
    selector: Selector,
    max_ext: u32,
    c_hat: Option<u64>,
) -> Result<SequenceVerdict> {
    let values: Vec<u64> = match selector {
        Selector::Trivial => (1..=max_ext).into_par_iter().map(|k| trivial_multiplicity(s, k)).collect::<Result<_>>()?,
        Selector::Irrep(i) => {
            let mut out = Vec::new();
            for k in 1..=max_ext {
                match irrep_multiplicity(s, k, i)? {
                    Some(m) => out.push(m),
                    None => break,
                }
            }
            out
        }
    };
    let rs: Vec<BigRational> = values.iter().map(|&v| BigRational::from_integer(v.into())).collect();
    Ok(verdict_rational(&rs, c_hat))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::preset;
    use num_integer::Integer;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn rationals(values: &[Cyc]) -> Vec<BigRational> {
        values.iter().map(|v| v.as_rational().unwrap()).collect()
    }

    #[test]
    fn identity_orbit() {
        let spec = RationalOrbitSpec {
            conductor: 1,
            numerator: vec![Term::new(&[1], 1)],
            denominator: vec![Term::new(&[0], 1)],
            v: vec![CycValue::int(-1)],
            horizon: 4,
        };
        assert_eq!(rationals(&evaluate_orbit(&spec).unwrap()), vec![r(-1, 1), r(1, 1), r(-1, 1), r(1, 1)]);
    }

    #[test]
    fn period_two_orbit() {
        let spec = RationalOrbitSpec {
            conductor: 1,
            numerator: vec![Term::new(&[1], 1), Term::new(&[2], 1)],
            denominator: vec![Term::new(&[2], 1)],
            v: vec![CycValue::int(-1)],
            horizon: 6,
        };
        let vals = rationals(&evaluate_orbit(&spec).unwrap());
        assert_eq!(&vals[..4], &[r(0, 1), r(2, 1), r(0, 1), r(2, 1)]);
        let v = orbit_verdict(&spec).unwrap();
        assert_eq!((v.period, v.preperiod), (Some(2), 0));
        assert!(v.is_integer_valued);
    }

    #[test]
    fn two_variable_hand_values() {
        let spec = RationalOrbitSpec {
            conductor: 1,
            numerator: vec![Term::new(&[1, 0], 1), Term::new(&[0, 1], 1)],
            denominator: vec![Term::new(&[1, 1], 1)],
            v: vec![CycValue::int(2), CycValue::int(3)],
            horizon: 3,
        };
        // (2^n + 3^n) / 6^n
        let expected: Vec<BigRational> =
            (1..=3u32).map(|n| r(2i64.pow(n) + 3i64.pow(n), 6i64.pow(n))).collect();
        assert_eq!(expected, vec![r(5, 6), r(13, 36), r(35, 216)]);
        assert_eq!(rationals(&evaluate_orbit(&spec).unwrap()), expected);
        assert!(orbit_verdict(&spec).unwrap().period.is_none());
    }

    #[test]
    fn vanishing_denominator_names_n() {
        let spec = RationalOrbitSpec {
            conductor: 1,
            numerator: vec![Term::new(&[0], 1)],
            denominator: vec![Term::new(&[1], 1), Term::new(&[0], -1)],
            v: vec![CycValue::int(-1)],
            horizon: 4,
        };
        assert!(matches!(evaluate_orbit(&spec), Err(Error::Irregular(2))));
    }

    #[test]
    fn detect_period_cases() {
        assert_eq!(detect_period(&[3, 3, 3, 3]), (Some(1), 0));
        assert_eq!(detect_period(&[1, 2, 1, 2, 1, 2]), (Some(2), 0));
        assert_eq!(detect_period(&[5, 2, 2, 2]), (Some(1), 1));
        assert_eq!(detect_period(&[1, 2, 3, 4]), (None, 0));
        assert_eq!(detect_period::<u8>(&[]), (None, 0));
    }

    #[test]
    fn random_root_of_unity_orbits() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..24 {
            let m: u32 = rng.gen_range(1..=8);
            let vars = rng.gen_range(1..=2);
            let exps: Vec<u32> = (0..vars).map(|_| rng.gen_range(0..m)).collect();
            let lcm = exps.iter().fold(1u32, |acc, &a| acc.lcm(&(m / a.gcd(&m))));
            let term = |rng: &mut ChaCha8Rng| Term {
                exponents: (0..vars).map(|_| rng.gen_range(0..3)).collect(),
                coeff: CycValue(vec![r(rng.gen_range(-3..=3), 1), r(rng.gen_range(-2..=2), 2)]),
            };
            let numerator = (0..3).map(|_| term(&mut rng)).collect();
            let mono: Vec<u32> = (0..vars).map(|_| rng.gen_range(0..3)).collect();
            let spec = RationalOrbitSpec {
                conductor: m,
                numerator,
                denominator: vec![Term { exponents: mono, coeff: CycValue::int(1) }],
                v: exps.iter().map(|&a| CycValue::root(a as usize)).collect(),
                horizon: 2 * lcm as usize + 2,
            };
            let v = orbit_verdict(&spec).unwrap();
            let p = v.period.expect("periodic within horizon");
            assert_eq!(lcm as usize % p, 0, "period {p} vs lcm {lcm}");
        }
    }

    #[test]
    fn trivial_sequences() {
        let flag = multiplicity_sequence(&preset("gl2_flag").unwrap(), Selector::Trivial, 4, Some(2)).unwrap();
        assert_eq!(flag.values, vec!["1"; 4]);
        assert_eq!((flag.period, flag.preperiod), (Some(1), 0));
        assert_eq!(flag.f1_le_limsup_ok, Some(true));
        assert_eq!(flag.tail_le_c_hat, Some(true));
        let pair = multiplicity_sequence(&preset("gl2_p1xp1").unwrap(), Selector::Trivial, 4, Some(5)).unwrap();
        assert_eq!(pair.values, vec!["2"; 4]);
        let pt = multiplicity_sequence(&preset("gln_point").unwrap(), Selector::Trivial, 3, Some(1)).unwrap();
        assert_eq!(pt.values, vec!["1"; 3]);
    }

    #[test]
    fn irrep_sequence_stops_at_table_limit() {
        let s = preset("gl2_flag").unwrap().with_q(2);
        let v = multiplicity_sequence(&s, Selector::Irrep(0), 4, None).unwrap();
        // |GL_2(F_16)| = 61200 exceeds the table cap.
        assert_eq!(v.values, vec!["1", "1", "1"]);
        assert_eq!(v.period, Some(1));
    }
}
