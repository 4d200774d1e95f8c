//! Permutation characters, multiplicity vectors and the bound μ ≤ ĉ.

use rayon::prelude::*;
use serde::Serialize;

use crate::chars::{inner_product, inner_product_residue, CharTableModEll, ClassFunction, EllContext};
use crate::error::{Error, Result};
use crate::estimator::ComponentEstimate;
use crate::group::GroupTable;
use crate::scenario::GroupSpace;

/// Fix(g) for one representative of each conjugacy class.
pub fn class_fixed_points(group: &GroupTable, space: &dyn GroupSpace) -> Vec<u64> {
    group
        .classes()
        .representatives
        .par_iter()
        .map(|&r| space.fixed_points(&group.element(r)))
        .collect()
}

pub fn permutation_character(group: &GroupTable, space: &dyn GroupSpace, ctx: &EllContext) -> ClassFunction {
    let fix: Vec<u128> = class_fixed_points(group, space).into_iter().map(u128::from).collect();
    ClassFunction::from_integers(ctx.ell, &fix)
}

/// (1/|H|) Σ_h Fix(h), with exact division enforced.
pub fn burnside_orbits(group: &GroupTable, space: &dyn GroupSpace) -> Result<u64> {
    let classes = group.classes();
    let fix = class_fixed_points(group, space);
    let sum: u128 = fix.iter().zip(&classes.sizes).map(|(&f, &s)| f as u128 * s as u128).sum();
    exact_average(sum, group.order() as u128)
}

/// (1/|G|) Σ_g Fix(g)², the number of G-orbits on Ω × Ω.
pub fn perm_norm(group: &GroupTable, fix: &[u64]) -> Result<u64> {
    let sum: u128 = fix
        .iter()
        .zip(&group.classes().sizes)
        .map(|(&f, &s)| (f as u128).pow(2) * s as u128)
        .sum();
    exact_average(sum, group.order() as u128)
}

fn exact_average(sum: u128, order: u128) -> Result<u64> {
    if sum % order != 0 {
        return Err(Error::NonIntegralAverage { sum, order });
    }
    Ok((sum / order) as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityVector {
    pub multiplicities: Vec<u64>,
    pub degrees: Vec<u64>,
    pub mu_max: u64,
    pub orbit_count: u64,
    pub space_size: u64,
    /// ⟨perm, perm⟩ from integer fixed-point counts.
    pub perm_norm: u64,
}

impl MultiplicityVector {
    /// Σ m_ρ deg ρ = |Ω|.
    pub fn degree_sum_holds(&self) -> bool {
        let s: u128 = self.multiplicities.iter().zip(&self.degrees).map(|(&m, &d)| m as u128 * d as u128).sum();
        s == self.space_size as u128
    }

    /// ⟨perm, perm⟩ = Σ m_ρ².
    pub fn rank_identity_holds(&self) -> bool {
        self.multiplicities.iter().map(|&m| (m as u128).pow(2)).sum::<u128>() == self.perm_norm as u128
    }
}

/// Decomposes C[Ω] against a full character table.
pub fn multiplicity_vector(
    group: &GroupTable,
    space: &dyn GroupSpace,
    table: &CharTableModEll,
    ctx: &EllContext,
) -> Result<MultiplicityVector> {
    let fix = class_fixed_points(group, space);
    let perm = ClassFunction::from_integers(ctx.ell, &fix.iter().map(|&f| f as u128).collect::<Vec<_>>());
    let classes = group.classes();
    let multiplicities = table
        .rows
        .iter()
        .map(|row| inner_product(ctx, classes, row, &perm))
        .collect::<Result<Vec<u64>>>()?;
    let sum: u128 = fix.iter().zip(&classes.sizes).map(|(&f, &s)| f as u128 * s as u128).sum();
    let orbit_count = exact_average(sum, group.order() as u128)?;
    Ok(MultiplicityVector {
        mu_max: multiplicities.iter().copied().max().unwrap_or(0),
        degrees: table.degrees.clone(),
        orbit_count,
        space_size: space.len() as u64,
        perm_norm: perm_norm(group, &fix)?,
        multiplicities,
    })
}

/// Σ_g f(g)·Fix(g) = |G|·⟨f, perm⟩ in F_ℓ.
pub fn frobenius_identity_check(group: &GroupTable, space: &dyn GroupSpace, f: &ClassFunction) -> bool {
    let ell = f.ell;
    let classes = group.classes();
    let fix = class_fixed_points(group, space);
    let perm = ClassFunction::from_integers(ell, &fix.iter().map(|&x| x as u128).collect::<Vec<_>>());
    // Fix(g) = Fix(g⁻¹), so f·Fix summed over G is |G|⟨f, perm⟩.
    let lhs = (0..classes.len()).fold(0u128, |acc, c| {
        (acc + classes.sizes[c] as u128 % ell as u128 * f.values[c] as u128 % ell as u128 * fix[c] as u128) % ell as u128
    }) as u64;
    let ip = inner_product_residue(classes, f, &perm) as u128;
    let rhs = ((group.order() as u128 % ell as u128) * ip % ell as u128) as u64;
    lhs == rhs
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundVerdict {
    #[serde(flatten)]
    pub vector: MultiplicityVector,
    pub c_hat: u64,
    pub converged: bool,
    pub bound_ok: bool,
}

/// μ ≤ ĉ. A non-converged estimate never passes.
pub fn verify_bound(vector: &MultiplicityVector, estimate: &ComponentEstimate) -> BoundVerdict {
    BoundVerdict {
        vector: vector.clone(),
        c_hat: estimate.c_hat,
        converged: estimate.converged,
        bound_ok: estimate.converged && vector.mu_max <= estimate.c_hat,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::{character_table, choose_ell};
    use crate::group::{build_group, Distinguished, GroupDescriptor};
    use crate::scenario::{preset, RegularSpace, Scenario, SpaceDescriptor};
    use std::sync::Arc;

    fn setup(s: &Scenario) -> (Arc<GroupTable>, Arc<crate::scenario::SpaceInstance>, EllContext, CharTableModEll) {
        let (_, space) = s.instantiate(1).unwrap();
        let g = build_group(&s.group, s.q, 1).unwrap();
        let ctx = choose_ell(&g, space.len() as u64).unwrap();
        let t = character_table(&g, &ctx).unwrap();
        (g, space, ctx, t)
    }

    fn p1(q: u64) -> Scenario {
        Scenario::new("p1", GroupDescriptor::gl(2), SpaceDescriptor::ProjectiveSpace, q, 1)
    }

    #[test]
    fn permutation_character_matches_sweep() {
        let (g, space, ctx, _) = setup(&p1(3));
        let perm = permutation_character(&g, space.as_ref(), &ctx);
        assert_eq!(perm.values[0], 4);
        for (c, &r) in g.classes().representatives.iter().enumerate() {
            assert_eq!(perm.values[c], space.fixed_points_sweep(&g.element(r)) % ctx.ell);
        }
    }

    #[test]
    fn regular_and_point_characters() {
        let g = build_group(&GroupDescriptor::gl(2), 2, 1).unwrap();
        let ctx = choose_ell(&g, 6).unwrap();
        let reg = RegularSpace::new(g.clone());
        let perm = permutation_character(&g, &reg, &ctx);
        assert_eq!(perm.values[0], 6);
        assert!(perm.values[1..].iter().all(|&v| v == 0));
        let t = character_table(&g, &ctx).unwrap();
        let mv = multiplicity_vector(&g, &reg, &t, &ctx).unwrap();
        assert_eq!(mv.multiplicities, mv.degrees);
        let (g, space, ctx, t) = setup(&preset("gln_point").unwrap());
        let mv = multiplicity_vector(&g, space.as_ref(), &t, &ctx).unwrap();
        let triv = t.trivial_index().unwrap();
        for (i, &m) in mv.multiplicities.iter().enumerate() {
            assert_eq!(m, (i == triv) as u64);
        }
    }

    #[test]
    fn p1_over_f3_is_trivial_plus_steinberg() {
        let (g, space, ctx, t) = setup(&p1(3));
        let mv = multiplicity_vector(&g, space.as_ref(), &t, &ctx).unwrap();
        assert_eq!(mv.perm_norm, 2);
        assert_eq!(mv.mu_max, 1);
        let nonzero: Vec<u64> = (0..t.len()).filter(|&i| mv.multiplicities[i] == 1).map(|i| t.degrees[i]).collect();
        assert_eq!(nonzero, vec![1, 3]);
        assert!(mv.degree_sum_holds() && mv.rank_identity_holds());
        for row in &t.rows {
            assert!(frobenius_identity_check(&g, space.as_ref(), row));
        }
    }

    #[test]
    fn group_case_multiplicities_are_self_dual_pairs() {
        let (g, space, ctx, t) = setup(&preset("gl2_group_case").unwrap());
        let mv = multiplicity_vector(&g, space.as_ref(), &t, &ctx).unwrap();
        // Oracle: for each ρ⊠σ of H×H, Schur orthogonality gives m = 1 iff σ = ρ*.
        let h = build_group(&GroupDescriptor::gl(2), 2, 1).unwrap();
        let hc = h.classes();
        let ht = character_table(&h, &ctx).unwrap();
        let mut expected = 0;
        for a in &ht.rows {
            for b in &ht.rows {
                let dual: Vec<u64> = (0..hc.len()).map(|c| a.values[hc.inverse[c]]).collect();
                expected += (dual == b.values) as usize;
            }
        }
        assert_eq!(mv.multiplicities.iter().filter(|&&m| m == 1).count(), expected);
        assert_eq!(mv.mu_max, 1);
        assert!(mv.degree_sum_holds() && mv.rank_identity_holds());
    }

    #[test]
    fn burnside_counts() {
        let (g, space, _, _) = setup(&p1(3));
        assert_eq!(burnside_orbits(&g, space.as_ref()).unwrap(), 1);
        let b = g.distinguished_subgroup(Distinguished::Borel).unwrap();
        assert_eq!(burnside_orbits(&b.table, space.as_ref()).unwrap(), 2);
        let s = preset("gl2_group_case").unwrap();
        let (_, space) = s.instantiate(1).unwrap();
        let gg = build_group(&s.group, 2, 1).unwrap();
        let bb = gg.distinguished_subgroup(Distinguished::Borel).unwrap();
        assert_eq!(burnside_orbits(&bb.table, space.as_ref()).unwrap(), 2);
    }

    #[test]
    fn frobenius_identity_for_trivial_and_perm() {
        let (g, space, ctx, _) = setup(&preset("gl2_p1xp1").unwrap());
        let perm = permutation_character(&g, space.as_ref(), &ctx);
        assert!(frobenius_identity_check(&g, space.as_ref(), &ClassFunction::trivial(ctx.ell, g.classes().len())));
        assert!(frobenius_identity_check(&g, space.as_ref(), &perm));
    }
}
