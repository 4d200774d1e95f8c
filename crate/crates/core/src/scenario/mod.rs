//! Scenario files, the preset catalog, and instantiation of X(F_{q^k}).

pub mod linear;
mod regular;
mod space;

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupLaw, MorphismRule};

pub use regular::RegularSpace;
pub use space::{
    borel_fix_sum_enumerated, borel_orbit_count, group_orbit_count, orbit_count, GroupSpace, PulledBack,
    SpaceDescriptor, SpaceInstance, POINT_CAP,
};

/// Reduction data for groups that are not of type GL.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessSpec {
    pub g_prime: GroupDescriptor,
    pub g_double_prime: GroupDescriptor,
    pub i_rule: MorphismRule,
    pub scheme_kernel_order: u64,
    pub pi0_intersection: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub group: GroupDescriptor,
    pub space: SpaceDescriptor,
    pub q: u64,
    pub max_ext: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl Scenario {
    pub fn new(name: &str, group: GroupDescriptor, space: SpaceDescriptor, q: u64, max_ext: u32) -> Scenario {
        Scenario {
            name: name.to_string(),
            group,
            space,
            q,
            max_ext,
            witness: None,
            ell: None,
            tol: None,
            seed: None,
            notes: None,
        }
    }

    pub fn with_q(&self, q: u64) -> Scenario {
        Scenario { q, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        self.group.validate()?;
        crate::fq::prime_power(self.q).ok_or_else(|| Error::Scenario(format!("q = {} is not a prime power", self.q)))?;
        if self.max_ext == 0 {
            return Err(Error::Scenario("max_ext must be at least 1".into()));
        }
        if let SpaceDescriptor::GroupCase = self.space {
            let leaves = self.group.leaves();
            if leaves.len() != 2 || leaves[0] != leaves[1] {
                return Err(Error::Scenario("group_case pairs H × H with X = H".into()));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Scenario> {
        let s: Scenario = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
        Scenario::from_json(&text).map_err(|e| match e {
            Error::Json(j) => Error::Scenario(format!("{}: {j}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Realize G(F_{q^k}) and X(F_{q^k}).
    pub fn instantiate(&self, k: u32) -> Result<(Arc<GroupLaw>, Arc<SpaceInstance>)> {
        self.validate()?;
        let law = GroupLaw::realize(&self.group, self.q, k)?;
        let space = Arc::new(SpaceInstance::new(law.clone(), &self.space)?);
        Ok((law, space))
    }

    /// The preset with the same group and a single point for X.
    pub fn point_control(&self) -> Scenario {
        Scenario { name: format!("{}_point", self.name), space: SpaceDescriptor::Point, witness: None, ..self.clone() }
    }
}

/// Named presets.
pub fn catalog() -> Vec<Scenario> {
    let gl2 = GroupDescriptor::gl(2);
    let gl3 = GroupDescriptor::gl(3);
    let sl2 = GroupDescriptor::sl(2);
    let sl2_witness = WitnessSpec {
        g_prime: GroupDescriptor::product(vec![sl2.clone(), GroupDescriptor::Mu { n: 2 }]),
        g_double_prime: GroupDescriptor::product(vec![GroupDescriptor::Mu { n: 2 }, gl2.clone()]),
        i_rule: MorphismRule::Mult,
        scheme_kernel_order: 2,
        pi0_intersection: 2,
    };
    let trivial = |g: &GroupDescriptor| WitnessSpec {
        g_prime: g.clone(),
        g_double_prime: g.clone(),
        i_rule: MorphismRule::Identity,
        scheme_kernel_order: 1,
        pi0_intersection: 1,
    };
    let mut out = vec![
        Scenario::new("gln_point", gl2.clone(), SpaceDescriptor::Point, 3, 3),
        Scenario::new("gl2_flag", gl2.clone(), SpaceDescriptor::Flag, 3, 4),
        Scenario::new("gl2_p1xp1", gl2.clone(), SpaceDescriptor::ProjlinePair, 3, 4),
        Scenario::new("gl3_flag", gl3.clone(), SpaceDescriptor::Flag, 2, 4),
        Scenario::new("gl3_grassmann2", gl3.clone(), SpaceDescriptor::Grassmannian { d: 2 }, 2, 4),
        Scenario::new(
            "gl2_group_case",
            GroupDescriptor::product(vec![gl2.clone(), gl2.clone()]),
            SpaceDescriptor::GroupCase,
            2,
            4,
        ),
        Scenario::new("gl2_torus_coset", gl2.clone(), SpaceDescriptor::TorusCoset, 3, 4),
        Scenario::new("sl2_p1xp1", sl2.clone(), SpaceDescriptor::ProjlinePair, 3, 3),
        Scenario::new("sl2_flag", sl2, SpaceDescriptor::Flag, 3, 3),
    ];
    for s in out.iter_mut() {
        s.witness = Some(if s.name.starts_with("sl2") { sl2_witness.clone() } else { trivial(&s.group) });
    }
    out
}

pub fn preset(name: &str) -> Option<Scenario> {
    catalog().into_iter().find(|s| s.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;

    fn count(s: &Scenario, k: u32) -> usize {
        s.instantiate(k).unwrap().1.len()
    }

    #[test]
    fn point_counts() {
        let gl2 = GroupDescriptor::gl(2);
        let gl3 = GroupDescriptor::gl(3);
        assert_eq!(count(&Scenario::new("a", gl2.clone(), SpaceDescriptor::ProjectiveSpace, 3, 1), 1), 4);
        assert_eq!(count(&Scenario::new("b", gl3.clone(), SpaceDescriptor::Flag, 2, 1), 1), 21);
        assert_eq!(count(&Scenario::new("c", gl2.clone(), SpaceDescriptor::Grassmannian { d: 1 }, 5, 1), 1), 6);
        assert_eq!(count(&preset("gl2_torus_coset").unwrap(), 1), 12);
        assert_eq!(count(&preset("gl2_p1xp1").unwrap(), 1), 16);
        assert_eq!(count(&preset("gln_point").unwrap(), 2), 1);
        assert_eq!(count(&preset("gl3_grassmann2").unwrap(), 2), 21);
        assert_eq!(count(&preset("gl2_group_case").unwrap(), 1), 6);
        assert_eq!(count(&Scenario::new("d", gl3, SpaceDescriptor::Flag, 3, 1), 1), 13 * 4);
    }

    #[test]
    fn strategies_match_sweep_on_whole_group() {
        for s in catalog() {
            let q = if s.name.starts_with("gl3") { 2 } else { 3 };
            let s = s.with_q(q);
            let (law, space) = s.instantiate(1).unwrap();
            let g = build_group(&s.group, q, 1).unwrap();
            let mut buf = vec![0; law.width()];
            for i in 0..g.order() {
                g.element_into(i, &mut buf);
                assert_eq!(space.fixed_points(&buf), space.fixed_points_sweep(&buf), "{} at {:?}", s.name, buf);
            }
        }
    }

    #[test]
    fn action_axioms() {
        for s in catalog() {
            let q = if s.name.starts_with("gl3") { 2 } else { 3 };
            let s = s.with_q(q);
            let (law, space) = s.instantiate(1).unwrap();
            let g = build_group(&s.group, q, 1).unwrap();
            let id = law.identity();
            for x in 0..space.len() {
                assert_eq!(space.act(&id, x), x);
            }
            let gens = law.generators();
            for a in 0..g.order().min(40) {
                let ga = g.element(a);
                for h in &gens {
                    let gh = law.mul(&ga, h);
                    for x in 0..space.len() {
                        assert_eq!(space.act(&gh, x), space.act(&ga, space.act(h, x)));
                    }
                }
            }
        }
    }

    #[test]
    fn point_with_regular_and_unipotent_elements() {
        let s = Scenario::new("p1", GroupDescriptor::gl(2), SpaceDescriptor::ProjectiveSpace, 3, 1);
        let (_, space) = s.instantiate(1).unwrap();
        assert_eq!(space.fixed_points(&[1, 0, 0, 2]), 2);
        assert_eq!(space.fixed_points(&[1, 1, 0, 1]), 1);
        assert_eq!(space.fixed_points(&[1, 0, 0, 1]), 4);
    }

    #[test]
    fn group_case_borel_sum_matches_enumeration() {
        let s = preset("gl2_group_case").unwrap();
        for q in [2, 3] {
            let (_, space) = s.with_q(q).instantiate(1).unwrap();
            assert_eq!(space.borel_fix_sum(), borel_fix_sum_enumerated(space.as_ref()));
        }
    }

    #[test]
    fn center_normalized_sum_matches_full_sum() {
        let s = preset("gl2_p1xp1").unwrap();
        let (law, space) = s.instantiate(2).unwrap();
        let mut buf = vec![0; law.width()];
        let full: u128 = (0..law.borel_order())
            .map(|i| {
                law.borel_element(i, &mut buf);
                space.fixed_points(&buf) as u128
            })
            .sum();
        assert_eq!(space.borel_fix_sum(), full);
    }

    #[test]
    fn json_round_trip_and_schema_errors() {
        for s in catalog() {
            assert_eq!(Scenario::from_json(&s.to_json()).unwrap(), s);
        }
        let err = Scenario::from_json(r#"{"name":"x","group":{"kind":"GL","n":2},"space":{"kind":"flag"},"q":3,"max_ext":2,"bogus":1}"#)
            .unwrap_err();
        assert!(err.to_string().contains("bogus"));
    }
}
