use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fq::{Elem, Field};
use crate::group::{apply_rule, inclusion_matching, FactorKind, GroupLaw, GroupTable, MorphismRule};
use crate::scenario::{GroupSpace, POINT_CAP};

/// How a coset of a sub-factor inside its super-factor is labelled.
#[derive(Clone, Debug)]
enum Labeler {
    Trivial,
    /// SL_n ⊂ GL_n: the determinant.
    Det,
    /// μ_m ⊂ GL_1 or μ_m ⊂ μ_m′: z ↦ z^m, with a chosen m-th root of each label.
    Power { m: u64, roots: HashMap<Elem, Elem> },
}

/// Ω ×_Γ Γ′ for Γ ⊂ Γ′ (factorwise inclusion), with Γ′ acting on the second
/// factor. Points are pairs (coset t_j, ω) with [(ω, t_j γ)] = [(γω, t_j)].
pub struct InducedSpace {
    sup: Arc<GroupLaw>,
    sub: Arc<GroupLaw>,
    omega: Arc<dyn GroupSpace>,
    /// Super-factor holding each sub-factor.
    matching: Vec<usize>,
    labelers: Vec<Labeler>,
    labels: HashMap<Vec<Elem>, usize>,
    reps: Vec<Vec<Elem>>,
    rep_invs: Vec<Vec<Elem>>,
}

fn labeler(field: &Field, sub: FactorKind, sup: FactorKind) -> Labeler {
    let all: Vec<Elem> = (1..field.order()).collect();
    let power = |m: u32, domain: Vec<Elem>| {
        let mut roots = HashMap::new();
        for z in domain {
            roots.entry(field.pow(z, m as u64)).or_insert(z);
        }
        Labeler::Power { m: m as u64, roots }
    };
    match (sub, sup) {
        (FactorKind::Special, FactorKind::General) => Labeler::Det,
        (FactorKind::Roots(m), FactorKind::General) => power(m, all),
        (FactorKind::Roots(a), FactorKind::Roots(b)) if a != b => {
            power(a, all.into_iter().filter(|&z| field.pow(z, b as u64) == 1).collect())
        }
        _ => Labeler::Trivial,
    }
}

impl InducedSpace {
    pub fn new(sub: Arc<GroupLaw>, sup: Arc<GroupLaw>, omega: Arc<dyn GroupSpace>) -> Result<InducedSpace> {
        if omega.law().descriptor() != sub.descriptor() || omega.law().field_order() != sub.field_order() {
            return Err(Error::Dimension(format!(
                "space is acted on by {}, not {}",
                omega.law().descriptor(),
                sub.descriptor()
            )));
        }
        let matching = inclusion_matching(&sub, &sup)?;
        if matching.len() != sup.factors().len() {
            return Err(Error::Unsupported("induction needs every factor of the larger group matched".into()));
        }
        let mut labelers = vec![Labeler::Trivial; sup.factors().len()];
        for (i, &j) in matching.iter().enumerate() {
            let f = &sup.factors()[j];
            labelers[j] = labeler(&f.field, sub.factors()[i].kind, f.kind);
        }
        // Cartesian product of the per-factor label sets.
        let mut tuples: Vec<(Vec<Elem>, Vec<Elem>)> = vec![(Vec::new(), sup.identity())];
        for (j, l) in labelers.iter().enumerate() {
            let f = &sup.factors()[j];
            let options: Vec<(Elem, Vec<Elem>)> = match l {
                Labeler::Trivial => vec![(1, crate::fq::matrix::identity(f.n))],
                Labeler::Det => (1..f.field.order())
                    .map(|lam| {
                        let mut t = crate::fq::matrix::identity(f.n);
                        t[0] = lam;
                        (lam, t)
                    })
                    .collect(),
                Labeler::Power { roots, .. } => {
                    let mut v: Vec<(Elem, Vec<Elem>)> = roots.iter().map(|(&lab, &z)| (lab, vec![z])).collect();
                    v.sort();
                    v
                }
            };
            let off = sup.offset(j);
            tuples = tuples
                .into_iter()
                .flat_map(|(lab, t)| {
                    options.iter().map(move |(x, part)| {
                        let mut lab = lab.clone();
                        lab.push(*x);
                        let mut t = t.clone();
                        t[off..off + part.len()].copy_from_slice(part);
                        (lab, t)
                    })
                })
                .collect();
        }
        let cosets = tuples.len() as u128;
        if sub.order() * cosets != sup.order() {
            return Err(Error::NotInGroup(format!(
                "{} has {} cosets of {} but the orders give {}",
                sup.descriptor(),
                cosets,
                sub.descriptor(),
                sup.order() / sub.order().max(1)
            )));
        }
        if cosets * omega.len() as u128 > POINT_CAP {
            return Err(Error::CapExceeded {
                what: "induced space points".into(),
                predicted: cosets * omega.len() as u128,
                cap: POINT_CAP,
            });
        }
        let labels = tuples.iter().enumerate().map(|(i, (l, _))| (l.clone(), i)).collect();
        let reps: Vec<Vec<Elem>> = tuples.into_iter().map(|(_, t)| t).collect();
        let rep_invs = reps.iter().map(|t| sup.inverse(t)).collect();
        Ok(InducedSpace { sup, sub, omega, matching, labelers, labels, reps, rep_invs })
    }

    pub fn coset_count(&self) -> usize {
        self.reps.len()
    }

    pub fn base(&self) -> &Arc<dyn GroupSpace> {
        &self.omega
    }

    fn label(&self, g: &[Elem]) -> Vec<Elem> {
        self.labelers
            .iter()
            .enumerate()
            .map(|(j, l)| {
                let f = &self.sup.factors()[j];
                let part = self.sup.part(j, g);
                match l {
                    Labeler::Trivial => 1,
                    Labeler::Det => f.det(part),
                    Labeler::Power { m, .. } => f.field.pow(part[0], *m),
                }
            })
            .collect()
    }

    /// The sub-group element with the given embedded image.
    fn restrict(&self, g: &[Elem]) -> Vec<Elem> {
        let mut out = self.sub.identity();
        for (i, &j) in self.matching.iter().enumerate() {
            let off = self.sub.offset(i);
            let part = self.sup.part(j, g);
            out[off..off + part.len()].copy_from_slice(part);
        }
        debug_assert!(self.sub.contains(&out));
        out
    }
}

impl GroupSpace for InducedSpace {
    fn law(&self) -> &Arc<GroupLaw> {
        &self.sup
    }

    fn len(&self) -> usize {
        self.reps.len() * self.omega.len()
    }

    fn act(&self, h: &[Elem], x: usize) -> usize {
        let m = self.omega.len();
        let (j, w) = (x / m, x % m);
        let u = self.sup.mul(h, &self.reps[j]);
        let j2 = self.labels[&self.label(&u)];
        let gamma = self.sup.mul(&self.rep_invs[j2], &u);
        j2 * m + self.omega.act(&self.restrict(&gamma), w)
    }

    fn describe(&self) -> String {
        format!("({}) induced from {} to {}", self.omega.describe(), self.sub.descriptor(), self.sup.descriptor())
    }
}

/// Ω ×_Γ Γ′ from enumerated groups, checking Γ ⊂ Γ′ element by element.
pub fn induced_space(gamma: &GroupTable, gamma_p: &GroupTable, omega: Arc<dyn GroupSpace>) -> Result<InducedSpace> {
    let mut buf = vec![0; gamma.width()];
    for i in 0..gamma.order() {
        gamma.element_into(i, &mut buf);
        let img = apply_rule(MorphismRule::Inclusion, gamma.law(), gamma_p.law(), &buf)?;
        if !gamma_p.contains(&img) {
            return Err(Error::NotInGroup(format!("{buf:?} of {} in {}", gamma.descriptor(), gamma_p.descriptor())));
        }
    }
    InducedSpace::new(gamma.law().clone(), gamma_p.law().clone(), omega)
}
