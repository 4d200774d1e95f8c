use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::law::{FactorKind, GroupLaw};
use super::table::GroupTable;
use crate::error::{Error, Result};
use crate::fq::{matrix, Elem};

/// Named homomorphism rules between realized groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MorphismRule {
    Identity,
    /// Factorwise inclusion; each source factor goes to the first unused
    /// target factor over the same field that contains it.
    Inclusion,
    /// Product of the determinants of all factors, into GL_1 or μ_m.
    Det,
    /// (g, z) ↦ z·g for a matrix factor and a one-dimensional factor.
    Mult,
    Projection { factor: usize },
    Power { exponent: u32 },
}

impl std::fmt::Display for MorphismRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MorphismRule::Identity => write!(f, "identity"),
            MorphismRule::Inclusion => write!(f, "inclusion"),
            MorphismRule::Det => write!(f, "det"),
            MorphismRule::Mult => write!(f, "mult"),
            MorphismRule::Projection { factor } => write!(f, "projection[{factor}]"),
            MorphismRule::Power { exponent } => write!(f, "power[{exponent}]"),
        }
    }
}

fn bad(rule: MorphismRule, reason: impl Into<String>) -> Error {
    Error::BadMorphism { rule: rule.to_string(), reason: reason.into() }
}

fn contained(src: FactorKind, tgt: FactorKind, n_src: usize, n_tgt: usize) -> bool {
    if n_src != n_tgt {
        return false;
    }
    match (src, tgt) {
        (_, FactorKind::General) => true,
        (FactorKind::Special, FactorKind::Special) => true,
        (FactorKind::Roots(a), FactorKind::Roots(b)) => b % a == 0,
        _ => false,
    }
}

/// Target factor receiving each source factor under [`MorphismRule::Inclusion`].
pub fn inclusion_matching(source: &GroupLaw, target: &GroupLaw) -> Result<Vec<usize>> {
    let mut used = vec![false; target.factors().len()];
    let mut out = Vec::new();
    for (i, s) in source.factors().iter().enumerate() {
        let j = target
            .factors()
            .iter()
            .enumerate()
            .position(|(j, t)| {
                !used[j] && t.field.order() == s.field.order() && contained(s.kind, t.kind, s.n, t.n)
            })
            .ok_or_else(|| bad(MorphismRule::Inclusion, format!("no target factor contains source factor {i}")))?;
        used[j] = true;
        out.push(j);
    }
    Ok(out)
}

/// Apply `rule` to one element of `source`, producing an element of `target`.
pub fn apply_rule(rule: MorphismRule, source: &GroupLaw, target: &GroupLaw, a: &[Elem]) -> Result<Vec<Elem>> {
    source.check_width(a)?;
    let out = match rule {
        MorphismRule::Identity => {
            if source.width() != target.width() {
                return Err(bad(rule, "source and target have different shapes"));
            }
            a.to_vec()
        }
        MorphismRule::Inclusion => {
            let matching = inclusion_matching(source, target)?;
            let mut out = target.identity();
            for (i, &j) in matching.iter().enumerate() {
                let off = target.offset(j);
                let part = source.part(i, a);
                out[off..off + part.len()].copy_from_slice(part);
            }
            out
        }
        MorphismRule::Det => {
            if target.width() != 1 {
                return Err(bad(rule, "target must be one-dimensional"));
            }
            let field = &target.factors()[0].field;
            let mut d = 1;
            for (i, f) in source.factors().iter().enumerate() {
                if f.field.order() != field.order() {
                    return Err(bad(rule, "factors over different fields"));
                }
                d = field.mul(d, matrix::det(&f.field, f.n, source.part(i, a)));
            }
            vec![d]
        }
        MorphismRule::Mult => {
            let fs = source.factors();
            if fs.len() != 2 || fs[1].n != 1 || target.factors().len() != 1 || target.factors()[0].n != fs[0].n {
                return Err(bad(rule, "expects (n×n factor, 1-dimensional factor) into one n×n factor"));
            }
            let field = &fs[0].field;
            let z = source.part(1, a)[0];
            source.part(0, a).iter().map(|&x| field.mul(x, z)).collect()
        }
        MorphismRule::Projection { factor } => {
            if factor >= source.factors().len() {
                return Err(bad(rule, "factor out of range"));
            }
            source.part(factor, a).to_vec()
        }
        MorphismRule::Power { exponent } => {
            if source.width() != target.width() {
                return Err(bad(rule, "source and target have different shapes"));
            }
            let mut acc = source.identity();
            let mut base = a.to_vec();
            let mut e = exponent;
            while e > 0 {
                if e & 1 == 1 {
                    acc = source.mul(&acc, &base);
                }
                base = source.mul(&base, &base);
                e >>= 1;
            }
            acc
        }
    };
    if !target.contains(&out) {
        return Err(bad(rule, format!("image {out:?} leaves {}", target.descriptor())));
    }
    Ok(out)
}

/// A homomorphism between enumerated groups with its kernel and image data.
#[derive(Debug)]
pub struct GroupMorphism {
    pub source: Arc<GroupTable>,
    pub target: Arc<GroupTable>,
    pub rule: MorphismRule,
    /// Target index of the image of each source element.
    pub map: Vec<usize>,
    pub kernel_order: u64,
    pub image_order: u64,
    pub image_index: u64,
    /// Scheme-level |π₀(ker)|, supplied by the caller.
    pub declared_pi0_kernel: Option<u64>,
}

impl GroupMorphism {
    pub fn new(
        source: Arc<GroupTable>,
        target: Arc<GroupTable>,
        rule: MorphismRule,
        declared_pi0_kernel: Option<u64>,
    ) -> Result<GroupMorphism> {
        let mut map = Vec::with_capacity(source.order());
        let mut buf = vec![0; source.width()];
        for x in 0..source.order() {
            source.element_into(x, &mut buf);
            let y = apply_rule(rule, source.law(), target.law(), &buf)?;
            map.push(target.index_of(&y).ok_or_else(|| bad(rule, "image not found in target table"))?);
        }
        // Checking x·g for every x and every generator g is sufficient.
        for g in source.generators() {
            for x in 0..source.order() {
                if map[source.mul_idx(x, g)] != target.mul_idx(map[x], map[g]) {
                    return Err(bad(rule, format!("not multiplicative at ({x}, {g})")));
                }
            }
        }
        let id = target.identity_index();
        let kernel_order = map.iter().filter(|&&y| y == id).count() as u64;
        let image_order = map.iter().collect::<HashSet<_>>().len() as u64;
        debug_assert_eq!(kernel_order * image_order, source.order() as u64);
        Ok(GroupMorphism {
            image_index: target.order() as u64 / image_order,
            source,
            target,
            rule,
            map,
            kernel_order,
            image_order,
            declared_pi0_kernel,
        })
    }

    /// Target class of the image of each source class.
    pub fn class_map(&self) -> Vec<usize> {
        let tc = self.target.classes();
        self.source
            .classes()
            .representatives
            .iter()
            .map(|&r| tc.class_of[self.map[r]] as usize)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::descriptor::GroupDescriptor;
    use super::super::table::build_group;
    use super::*;

    #[test]
    fn inclusion_sl2_gl2() {
        let s = build_group(&GroupDescriptor::sl(2), 3, 1).unwrap();
        let g = build_group(&GroupDescriptor::gl(2), 3, 1).unwrap();
        let m = GroupMorphism::new(s, g, MorphismRule::Inclusion, None).unwrap();
        assert_eq!((m.kernel_order, m.image_index), (1, 2));
    }

    #[test]
    fn det_gl2_gl1() {
        let g = build_group(&GroupDescriptor::gl(2), 3, 1).unwrap();
        let t = build_group(&GroupDescriptor::gl(1), 3, 1).unwrap();
        let m = GroupMorphism::new(g, t, MorphismRule::Det, Some(1)).unwrap();
        assert_eq!((m.kernel_order, m.image_index), (24, 1));
    }

    #[test]
    fn identity_and_squaring() {
        let g = build_group(&GroupDescriptor::gl(1), 5, 1).unwrap();
        let id = GroupMorphism::new(g.clone(), g.clone(), MorphismRule::Identity, None).unwrap();
        assert_eq!((id.kernel_order, id.image_index), (1, 1));
        let sq = GroupMorphism::new(g.clone(), g, MorphismRule::Power { exponent: 2 }, Some(2)).unwrap();
        assert_eq!((sq.kernel_order, sq.image_index), (2, 2));
    }

    #[test]
    fn mult_has_kernel_two_in_odd_characteristic() {
        let src = build_group(&GroupDescriptor::product(vec![GroupDescriptor::sl(2), GroupDescriptor::Mu { n: 2 }]), 3, 1)
            .unwrap();
        let tgt = build_group(&GroupDescriptor::sl(2), 3, 1).unwrap();
        let m = GroupMorphism::new(src, tgt, MorphismRule::Mult, None).unwrap();
        assert_eq!(m.kernel_order, 2);
        assert_eq!(m.image_index, 1);
    }

    #[test]
    fn non_homomorphism_rejected() {
        let g = build_group(&GroupDescriptor::gl(2), 3, 1).unwrap();
        assert!(GroupMorphism::new(g.clone(), g, MorphismRule::Power { exponent: 2 }, None).is_err());
    }

    #[test]
    fn rule_json() {
        let r: MorphismRule = serde_json::from_str("\"mult\"").unwrap();
        assert_eq!(r, MorphismRule::Mult);
        let p: MorphismRule = serde_json::from_str(r#"{"power":{"exponent":2}}"#).unwrap();
        assert_eq!(p, MorphismRule::Power { exponent: 2 });
    }
}
