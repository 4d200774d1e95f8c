//! Numeric checks of the reduction from a general reductive group to type GL:
//! isogenies, passage to a larger group with the same derived part, the
//! index bound, the constant d(G) of a witness, and the full chain.

mod induced;

use std::sync::Arc;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

pub use induced::{induced_space, InducedSpace};

use crate::chars::{character_table, choose_ell_for, inner_product_residue, pullback, CharTableModEll, EllContext};
use crate::error::{Error, Result};
use crate::estimator::{component_estimate_adaptive, estimate_by_orbits, ComponentEstimate};
use crate::fq::{Elem, FieldTower};
use crate::group::{
    apply_rule, build_group, inclusion_matching, FactorKind, GroupDescriptor, GroupLaw, GroupMorphism, GroupTable,
    MorphismRule,
};
use crate::mult::{multiplicity_vector, MultiplicityVector};
use crate::scenario::{GroupSpace, PulledBack, Scenario, SpaceInstance, WitnessSpec};

/// Largest group enumerated for the rational kernel cross-check.
pub const KERNEL_TABLE_CAP: u128 = 200_000;

/// Largest extension tried in the G″ = G′·Rad(G″) factorization test.
pub const FACTORIZATION_MAX_EXT: u32 = 4;

/// lhs ≤ factor · value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inequality {
    pub lhs: u64,
    pub factor: u64,
    pub value: u64,
    pub rhs: u64,
    pub holds: bool,
    pub slack: u64,
    pub equality: bool,
}

impl Inequality {
    pub fn new(lhs: u64, factor: u64, value: u64) -> Inequality {
        let rhs = factor * value;
        Inequality { lhs, factor, value, rhs, holds: lhs <= rhs, slack: rhs.saturating_sub(lhs), equality: lhs == rhs }
    }
}

/// One ℓ valid for every group in a chain, with room for multiplicities up to `omega_max`.
pub fn shared_context(groups: &[&GroupTable], omega_max: u64) -> Result<EllContext> {
    let order = groups.iter().map(|g| g.order() as u128).max().unwrap_or(1);
    let exponent = groups.iter().fold(1u64, |acc, g| num_integer::lcm(acc, g.exponent()));
    choose_ell_for(order, exponent, omega_max)
}

pub fn mu(group: &GroupTable, table: &CharTableModEll, space: &dyn GroupSpace, ctx: &EllContext) -> Result<MultiplicityVector> {
    multiplicity_vector(group, space, table, ctx)
}

#[derive(Clone, Debug, Serialize)]
pub struct MultIsoVerdict {
    /// μ(Γ, Ω) ≤ [Γ : i(Γ′)] · μ(Γ′, Ω).
    pub inequality: Inequality,
    pub kernel_order: u64,
    /// ⟨Res ρ, Res ρ⟩ over Γ′ for each irreducible ρ of Γ.
    pub restriction_norms: Vec<u64>,
    /// Every restriction has at most [Γ : i(Γ′)] constituents, counted with multiplicity squared.
    pub constituents_ok: bool,
    pub holds: bool,
}

/// `m: Γ′ → Γ`, `omega` a Γ-space, tables of Γ (target) and Γ′ (source) in one context.
pub fn check_mult_iso(
    m: &GroupMorphism,
    omega: &Arc<dyn GroupSpace>,
    target_table: &CharTableModEll,
    source_table: &CharTableModEll,
    ctx: &EllContext,
) -> Result<MultIsoVerdict> {
    let mu_g = mu(&m.target, target_table, omega.as_ref(), ctx)?.mu_max;
    let pulled = PulledBack::new(omega.clone(), m.source.law().clone(), m.rule)?;
    let mu_gp = mu(&m.source, source_table, &pulled, ctx)?.mu_max;
    let restriction_norms: Vec<u64> = target_table
        .rows
        .iter()
        .map(|row| {
            let f = pullback(row, m);
            inner_product_residue(m.source.classes(), &f, &f)
        })
        .collect();
    let constituents_ok = restriction_norms.iter().all(|&n| n >= 1 && n <= m.image_index);
    let inequality = Inequality::new(mu_g, m.image_index, mu_gp);
    Ok(MultIsoVerdict {
        holds: inequality.holds && constituents_ok,
        inequality,
        kernel_order: m.kernel_order,
        restriction_norms,
        constituents_ok,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MultRadVerdict {
    /// μ(Γ, Ω) ≤ [Γ′ : Γ·Z(Γ′)] · μ(Γ′, Ω ×_Γ Γ′).
    pub inequality: Inequality,
    pub center_order: u64,
    pub intersection_order: u64,
    /// |Γ·Z(Γ′)| = |Γ||Z| / |Γ ∩ Z|.
    pub product_order: u64,
    pub induced_size: u64,
    /// |Ω ×_Γ Γ′| = |Ω| · [Γ′ : Γ].
    pub size_identity_ok: bool,
    pub holds: bool,
}

/// Elements of the abstract center of an enumerated group.
pub fn center(group: &GroupTable) -> Vec<usize> {
    let gens = group.generators();
    (0..group.order())
        .into_par_iter()
        .filter(|&x| gens.iter().all(|&g| group.mul_idx(x, g) == group.mul_idx(g, x)))
        .collect()
}

/// Position in `sup` of each element of `sub` under factorwise inclusion.
fn embedding(sub: &GroupTable, sup: &GroupTable) -> Result<Vec<usize>> {
    let mut buf = vec![0; sub.width()];
    (0..sub.order())
        .map(|i| {
            sub.element_into(i, &mut buf);
            let img = apply_rule(MorphismRule::Inclusion, sub.law(), sup.law(), &buf)?;
            sup.index_of(&img).ok_or_else(|| Error::NotInGroup(format!("{buf:?} in {}", sup.descriptor())))
        })
        .collect()
}

/// Γ = `sub` ⊂ Γ′ = `sup`, `omega` a Γ-space.
pub fn check_mult_rad(
    sub: &Arc<GroupTable>,
    sup: &Arc<GroupTable>,
    omega: &Arc<dyn GroupSpace>,
    sub_table: &CharTableModEll,
    sup_table: &CharTableModEll,
    ctx: &EllContext,
) -> Result<MultRadVerdict> {
    let emb = embedding(sub, sup)?;
    let z = center(sup);
    let mut in_z = vec![false; sup.order()];
    for &c in &z {
        in_z[c] = true;
    }
    let intersection_order = emb.iter().filter(|&&e| in_z[e]).count() as u64;
    let product_order = sub.order() as u64 * z.len() as u64 / intersection_order;
    let index = sup.order() as u64 / product_order;
    let induced = induced_space(sub, sup, omega.clone())?;
    let induced_size = induced.len() as u64;
    let size_identity_ok = induced_size == omega.len() as u64 * (sup.order() / sub.order()) as u64;
    let lhs = mu(sub, sub_table, omega.as_ref(), ctx)?.mu_max;
    let rhs_mu = mu(sup, sup_table, &induced, ctx)?.mu_max;
    let inequality = Inequality::new(lhs, index, rhs_mu);
    Ok(MultRadVerdict {
        holds: inequality.holds && size_identity_ok,
        inequality,
        center_order: z.len() as u64,
        intersection_order,
        product_order,
        induced_size,
        size_identity_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexVerdict {
    pub image_index: u64,
    pub declared_pi0_kernel: u64,
    pub holds: bool,
}

/// [Γ : φ(Γ′)] ≤ |π₀(ker φ)|.
pub fn check_index_bound(m: &GroupMorphism) -> Result<IndexVerdict> {
    let declared = m
        .declared_pi0_kernel
        .ok_or_else(|| Error::Witness(format!("morphism `{}` has no declared |pi0(ker)|", m.rule)))?;
    Ok(IndexVerdict { image_index: m.image_index, declared_pi0_kernel: declared, holds: m.image_index <= declared })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DBound {
    /// |ker i|² · |π₀(G′ ∩ Rad G″)|, from the declared scheme data.
    pub d: u64,
    pub scheme_kernel_order: u64,
    pub pi0_intersection: u64,
    /// |ker i| on rational points at `rational_kernel_ext`.
    pub rational_kernel_order: u64,
    pub rational_kernel_ext: u32,
    /// |G′(F_q) ∩ Rad(G″)(F_q)|.
    pub rational_intersection_order: u64,
    /// Extension over which every element of G″(F_q) factors as g′·r.
    pub factorization_ext: u32,
}

/// The radical of each factor: scalars in GL_n, trivial otherwise.
fn in_radical(law: &GroupLaw, a: &[Elem]) -> bool {
    law.factors().iter().enumerate().all(|(j, f)| {
        let part = law.part(j, a);
        let n = f.n;
        let scalar = (0..n).all(|r| (0..n).all(|c| part[r * n + c] == if r == c { part[0] } else { 0 }));
        match f.kind {
            FactorKind::General => scalar,
            _ => crate::fq::matrix::is_identity(n, part),
        }
    })
}

/// Smallest m such that every element of G″(F_q) is g′·r with g′ ∈ G′(F_{q^m}), r ∈ Rad(G″)(F_{q^m}).
fn factorization_ext(w: &WitnessSpec, q: u64) -> Result<Option<u32>> {
    let gpp = build_group(&w.g_double_prime, q, 1)?;
    let base = gpp.law().clone();
    for m in 1..=FACTORIZATION_MAX_EXT {
        let Ok(big) = GroupLaw::realize(&w.g_double_prime, q, m) else { break };
        let Ok(small) = GroupLaw::realize(&w.g_prime, q, m) else { break };
        let matching = inclusion_matching(&small, &big)?;
        let p = base.factors()[0].field.characteristic() as u64;
        let top = big.factors().iter().map(|f| f.field.degree()).max().unwrap_or(1);
        let tower = FieldTower::new(p, top)?;
        let embed = |a: &[Elem]| -> Result<Vec<Elem>> {
            let mut out = Vec::with_capacity(a.len());
            for (j, f) in base.factors().iter().enumerate() {
                for &x in base.part(j, a) {
                    out.push(tower.embed_between(x, &f.field, &big.factors()[j].field)?);
                }
            }
            Ok(out)
        };
        let gl_factors: Vec<usize> =
            (0..big.factors().len()).filter(|&j| big.factors()[j].kind == FactorKind::General).collect();
        let choices: Vec<u64> = gl_factors.iter().map(|&j| big.factors()[j].field.order() as u64 - 1).collect();
        let combos: u64 = choices.iter().product();
        let factors_through = |g: &[Elem]| -> bool {
            (0..combos).any(|mut code| {
                let mut h = g.to_vec();
                for (&j, &c) in gl_factors.iter().zip(&choices) {
                    let f = &big.factors()[j];
                    let lam_inv = f.field.inv((code % c) as Elem + 1).expect("nonzero");
                    code /= c;
                    let off = big.offset(j);
                    for x in &mut h[off..off + f.width()] {
                        *x = f.field.mul(*x, lam_inv);
                    }
                }
                let mut sub = small.identity();
                for (i, &j) in matching.iter().enumerate() {
                    let off = small.offset(i);
                    let part = big.part(j, &h);
                    sub[off..off + part.len()].copy_from_slice(part);
                }
                let unmatched_trivial = (0..big.factors().len())
                    .filter(|j| !matching.contains(j))
                    .all(|j| crate::fq::matrix::is_identity(big.factors()[j].n, big.part(j, &h)));
                unmatched_trivial && small.contains(&sub)
            })
        };
        let mut ok = true;
        let mut buf = vec![0; base.width()];
        for x in 0..gpp.order() {
            gpp.element_into(x, &mut buf);
            if !factors_through(&embed(&buf)?) {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// d(G) from a witness, with rational-point cross-checks.
pub fn d_upper_bound(w: &WitnessSpec, group: &GroupDescriptor, q: u64) -> Result<DBound> {
    let factorization_ext = factorization_ext(w, q)?
        .ok_or_else(|| Error::Witness(format!("{} is not {} times its radical", w.g_double_prime, w.g_prime)))?;
    let mut rational = None;
    for k in 1..=3 {
        if w.g_prime.order(q, k)? > KERNEL_TABLE_CAP || group.order(q, k)? > KERNEL_TABLE_CAP {
            break;
        }
        let m = GroupMorphism::new(build_group(&w.g_prime, q, k)?, build_group(group, q, k)?, w.i_rule, None)?;
        rational = Some((m.kernel_order, k));
    }
    let (rational_kernel_order, rational_kernel_ext) =
        rational.ok_or_else(|| Error::Witness("G' is too large to enumerate at k = 1".into()))?;
    let gp = build_group(&w.g_prime, q, 1)?;
    let gpp = build_group(&w.g_double_prime, q, 1)?;
    let emb = embedding(&gp, &gpp)?;
    let rational_intersection_order =
        emb.iter().filter(|&&e| in_radical(gpp.law(), &gpp.element(e))).count() as u64;
    Ok(DBound {
        d: w.scheme_kernel_order.pow(2) * w.pi0_intersection,
        scheme_kernel_order: w.scheme_kernel_order,
        pi0_intersection: w.pi0_intersection,
        rational_kernel_order,
        rational_kernel_ext,
        rational_intersection_order,
        factorization_ext,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainVerdict {
    pub mu: u64,
    pub d: DBound,
    pub mult_iso: MultIsoVerdict,
    pub iso_index: IndexVerdict,
    pub mult_rad: MultRadVerdict,
    /// [Γ″ : Γ′·Z(Γ″)] ≤ |π₀(G′ ∩ Rad G″)|.
    pub rad_index: Inequality,
    /// μ(Γ″, Ω″) ≤ ĉ(G″, X″), the type-GL bound for the larger group.
    pub gl_step: Inequality,
    /// ĉ(G″, X ×_{G′} G″) ≤ ĉ(G′, X).
    pub c_rad: Inequality,
    /// ĉ(G′, X) ≤ |ker i| · ĉ(G, X).
    pub c_iso: Inequality,
    /// μ(G(F_q), X(F_q)) ≤ d · ĉ(G, X).
    pub end_to_end: Inequality,
    pub estimate_g: ComponentEstimate,
    pub estimate_g_prime: ComponentEstimate,
    pub estimate_g_double_prime: ComponentEstimate,
    /// Reported alongside the inequalities; the torus factor of G″ makes its ratios converge like 1 − 1/q^k.
    pub estimates_converged: bool,
    pub holds: bool,
}

fn pulled_space(s: &Scenario, w: &WitnessSpec, k: u32) -> Result<Arc<dyn GroupSpace>> {
    let (_, space) = s.instantiate(k)?;
    let law = GroupLaw::realize(&w.g_prime, s.q, k)?;
    Ok(Arc::new(PulledBack::new(space as Arc<dyn GroupSpace>, law, w.i_rule)?))
}

fn induced_at(s: &Scenario, w: &WitnessSpec, k: u32) -> Result<Arc<dyn GroupSpace>> {
    let sub = GroupLaw::realize(&w.g_prime, s.q, k)?;
    let sup = GroupLaw::realize(&w.g_double_prime, s.q, k)?;
    Ok(Arc::new(InducedSpace::new(sub, sup, pulled_space(s, w, k)?)?))
}

/// Every link of μ ≤ d(G)·c(G,X) at one q, with ĉ estimated up to `max_ext`.
pub fn check_main_chain(s: &Scenario, max_ext: u32, tol: &BigRational) -> Result<ChainVerdict> {
    let w = s.witness.as_ref().ok_or_else(|| Error::Witness(format!("scenario {} has no witness", s.name)))?;
    let g = build_group(&s.group, s.q, 1)?;
    let gp = build_group(&w.g_prime, s.q, 1)?;
    let gpp = build_group(&w.g_double_prime, s.q, 1)?;
    let (_, space) = s.instantiate(1)?;
    let omega: Arc<dyn GroupSpace> = space as Arc<SpaceInstance>;
    let omega_p = pulled_space(s, w, 1)?;
    let induced = InducedSpace::new(gp.law().clone(), gpp.law().clone(), omega_p.clone())?;
    let ctx = shared_context(&[&g, &gp, &gpp], induced.len().max(omega.len()) as u64)?;
    let seed = s.seed.unwrap_or(0);
    let tg = CharTableModEll::compute(&g, &ctx, seed)?;
    let tgp = CharTableModEll::compute(&gp, &ctx, seed)?;
    let tgpp = CharTableModEll::compute(&gpp, &ctx, seed)?;

    let m = GroupMorphism::new(gp.clone(), g.clone(), w.i_rule, Some(w.scheme_kernel_order))?;
    let mult_iso = check_mult_iso(&m, &omega, &tg, &tgp, &ctx)?;
    let iso_index = check_index_bound(&m)?;
    let mult_rad = check_mult_rad(&gp, &gpp, &omega_p, &tgp, &tgpp, &ctx)?;
    let rad_index = Inequality::new(mult_rad.inequality.factor, 1, w.pi0_intersection);
    let mu_g = mult_iso.inequality.lhs;
    let mu_gpp = mult_rad.inequality.value;

    let estimate_g = component_estimate_adaptive(s, max_ext, tol)?;
    let estimate_g_prime = estimate_by_orbits(w.g_prime.dim(), s.q, max_ext, tol, |k| pulled_space(s, w, k))?;
    let estimate_g_double_prime =
        estimate_by_orbits(w.g_double_prime.dim(), s.q, max_ext, tol, |k| induced_at(s, w, k))?;

    let d = d_upper_bound(w, &s.group, s.q)?;
    let gl_step = Inequality::new(mu_gpp, 1, estimate_g_double_prime.c_hat);
    let c_rad = Inequality::new(estimate_g_double_prime.c_hat, 1, estimate_g_prime.c_hat);
    let c_iso = Inequality::new(estimate_g_prime.c_hat, w.scheme_kernel_order, estimate_g.c_hat);
    let end_to_end = Inequality::new(mu_g, d.d, estimate_g.c_hat);
    let estimates_converged =
        estimate_g.converged && estimate_g_prime.converged && estimate_g_double_prime.converged;
    let holds = mult_iso.holds
        && iso_index.holds
        && mult_rad.holds
        && rad_index.holds
        && gl_step.holds
        && c_rad.holds
        && c_iso.holds
        && end_to_end.holds;
    Ok(ChainVerdict {
        mu: mu_g,
        d,
        mult_iso,
        iso_index,
        mult_rad,
        rad_index,
        gl_step,
        c_rad,
        c_iso,
        end_to_end,
        estimate_g,
        estimate_g_prime,
        estimate_g_double_prime,
        estimates_converged,
        holds,
    })
}

/// Character table of `group` in a context built for it alone.
pub fn own_table(group: &GroupTable, omega_max: u64) -> Result<(EllContext, CharTableModEll)> {
    let ctx = shared_context(&[group], omega_max)?;
    let t = character_table(group, &ctx)?;
    Ok((ctx, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::default_tol;
    use crate::scenario::{preset, RegularSpace, SpaceDescriptor};
    use std::collections::HashSet;

    fn tables(groups: &[&Arc<GroupTable>], omega: u64) -> (EllContext, Vec<CharTableModEll>) {
        let refs: Vec<&GroupTable> = groups.iter().map(|g| g.as_ref()).collect();
        let ctx = shared_context(&refs, omega).unwrap();
        let ts = groups.iter().map(|g| CharTableModEll::compute(g, &ctx, 0).unwrap()).collect();
        (ctx, ts)
    }

    fn p1(d: GroupDescriptor, q: u64) -> Arc<dyn GroupSpace> {
        Scenario::new("p1", d, SpaceDescriptor::ProjectiveSpace, q, 1).instantiate(1).unwrap().1
    }

    #[test]
    fn induced_space_sizes_and_axioms() {
        let sl = build_group(&GroupDescriptor::sl(2), 3, 1).unwrap();
        let gl = build_group(&GroupDescriptor::gl(2), 3, 1).unwrap();
        let ind = induced_space(&sl, &gl, p1(GroupDescriptor::sl(2), 3)).unwrap();
        assert_eq!(ind.len(), 8);
        let gens = gl.law().generators();
        for a in 0..gl.order() {
            let ga = gl.element(a);
            for h in &gens {
                let gh = gl.law().mul(&ga, h);
                for x in 0..ind.len() {
                    assert_eq!(ind.act(&gh, x), ind.act(&ga, ind.act(h, x)));
                }
            }
        }
        let same = induced_space(&gl, &gl, p1(GroupDescriptor::gl(2), 3)).unwrap();
        assert_eq!(same.len(), 4);
    }

    #[test]
    fn induced_space_matches_direct_quotient() {
        // Oracle: orbits of Γ on Ω × Γ′ under γ·(ω, g′) = (γω, g′γ⁻¹), with Γ′ acting on the left of g′.
        let sl = build_group(&GroupDescriptor::sl(2), 3, 1).unwrap();
        let gl = build_group(&GroupDescriptor::gl(2), 3, 1).unwrap();
        let omega = p1(GroupDescriptor::sl(2), 3);
        let ind = induced_space(&sl, &gl, omega.clone()).unwrap();
        let emb = embedding(&sl, &gl).unwrap();
        let n = omega.len();
        let class_of = |w: usize, g: usize| -> Vec<(usize, usize)> {
            let mut c: Vec<(usize, usize)> = (0..sl.order())
                .map(|s| (omega.act(&sl.element(s), w), gl.mul_idx(g, gl.inv_idx(emb[s]))))
                .collect();
            c.sort();
            c
        };
        let classes: HashSet<Vec<(usize, usize)>> =
            (0..n).flat_map(|w| (0..gl.order()).map(move |g| (w, g))).map(|(w, g)| class_of(w, g)).collect();
        assert_eq!(classes.len(), ind.len());
        // Fixed-point counts agree element by element.
        for h in 0..gl.order() {
            let fixed = classes
                .iter()
                .filter(|c| {
                    let (w, g) = c[0];
                    class_of(w, gl.mul_idx(h, g)) == **c
                })
                .count() as u64;
            assert_eq!(fixed, ind.fixed_points_sweep(&gl.element(h)));
        }
    }

    #[test]
    fn mult_iso_cases() {
        let sl = build_group(&GroupDescriptor::sl(2), 3, 1).unwrap();
        let gl = build_group(&GroupDescriptor::gl(2), 3, 1).unwrap();
        let (ctx, ts) = tables(&[&gl, &sl], 8);
        let m = GroupMorphism::new(sl.clone(), gl.clone(), MorphismRule::Inclusion, Some(1)).unwrap();
        let v = check_mult_iso(&m, &p1(GroupDescriptor::gl(2), 3), &ts[0], &ts[1], &ctx).unwrap();
        assert!(v.holds);
        assert_eq!((v.inequality.lhs, v.inequality.factor), (1, 2));

        let id = GroupMorphism::new(gl.clone(), gl.clone(), MorphismRule::Identity, Some(1)).unwrap();
        let v = check_mult_iso(&id, &p1(GroupDescriptor::gl(2), 3), &ts[0], &ts[0], &ctx).unwrap();
        assert!(v.holds && v.inequality.equality);

        let g1 = build_group(&GroupDescriptor::gl(1), 5, 1).unwrap();
        let (ctx, ts) = tables(&[&g1], 4);
        let sq = GroupMorphism::new(g1.clone(), g1.clone(), MorphismRule::Power { exponent: 2 }, Some(2)).unwrap();
        let reg: Arc<dyn GroupSpace> = Arc::new(RegularSpace::new(g1.clone()));
        let v = check_mult_iso(&sq, &reg, &ts[0], &ts[0], &ctx).unwrap();
        // Abelian oracle: the regular module has every character once; through z ↦ z²
        // each character of the source appears |ker| = 2 times.
        assert_eq!((v.inequality.lhs, v.inequality.factor, v.inequality.value), (1, 2, 2));
        assert!(v.holds);
    }

    #[test]
    fn mult_rad_cases() {
        let sl = build_group(&GroupDescriptor::sl(2), 3, 1).unwrap();
        let gl = build_group(&GroupDescriptor::gl(2), 3, 1).unwrap();
        let (ctx, ts) = tables(&[&gl, &sl], 8);
        let v = check_mult_rad(&sl, &gl, &p1(GroupDescriptor::sl(2), 3), &ts[1], &ts[0], &ctx).unwrap();
        assert!(v.holds);
        // Oracle: SL_2(F_3)·{scalars} has determinants {λ²} = {1}, so index 2.
        assert_eq!((v.center_order, v.intersection_order, v.product_order), (2, 2, 24));
        assert_eq!(v.inequality.factor, 2);
        assert_eq!(v.induced_size, 8);

        let same = check_mult_rad(&gl, &gl, &p1(GroupDescriptor::gl(2), 3), &ts[0], &ts[0], &ctx).unwrap();
        assert!(same.holds && same.inequality.equality && same.inequality.factor == 1);

        let triv = build_group(&GroupDescriptor::Mu { n: 1 }, 3, 1).unwrap();
        let g1 = build_group(&GroupDescriptor::gl(1), 3, 1).unwrap();
        let (ctx, ts) = tables(&[&g1, &triv], 2);
        let point: Arc<dyn GroupSpace> =
            Scenario::new("pt", GroupDescriptor::Mu { n: 1 }, SpaceDescriptor::Point, 3, 1).instantiate(1).unwrap().1;
        let v = check_mult_rad(&triv, &g1, &point, &ts[1], &ts[0], &ctx).unwrap();
        assert_eq!((v.inequality.lhs, v.inequality.factor, v.inequality.value), (1, 1, 1));
        assert_eq!(v.induced_size, 2);
    }

    #[test]
    fn index_bounds() {
        let gl = build_group(&GroupDescriptor::gl(2), 3, 1).unwrap();
        let g1 = build_group(&GroupDescriptor::gl(1), 3, 1).unwrap();
        let det = GroupMorphism::new(gl.clone(), g1, MorphismRule::Det, Some(1)).unwrap();
        assert_eq!(check_index_bound(&det).unwrap(), IndexVerdict { image_index: 1, declared_pi0_kernel: 1, holds: true });
        let g5 = build_group(&GroupDescriptor::gl(1), 5, 1).unwrap();
        let sq = GroupMorphism::new(g5.clone(), g5, MorphismRule::Power { exponent: 2 }, Some(2)).unwrap();
        assert_eq!(check_index_bound(&sq).unwrap().image_index, 2);
        assert!(check_index_bound(&sq).unwrap().holds);
        let id = GroupMorphism::new(gl.clone(), gl, MorphismRule::Identity, None).unwrap();
        assert!(check_index_bound(&id).is_err());
    }

    #[test]
    fn d_values() {
        let sl2 = preset("sl2_flag").unwrap();
        let d = d_upper_bound(sl2.witness.as_ref().unwrap(), &sl2.group, 3).unwrap();
        assert_eq!(d.d, 8);
        assert_eq!(d.rational_kernel_order, 2);
        assert_eq!(d.rational_intersection_order, 2);
        assert_eq!(d.factorization_ext, 2);
        let gl = preset("gl2_flag").unwrap();
        assert_eq!(d_upper_bound(gl.witness.as_ref().unwrap(), &gl.group, 3).unwrap().d, 1);
        let prod = GroupDescriptor::product(vec![GroupDescriptor::gl(2), GroupDescriptor::gl(3)]);
        let w = WitnessSpec {
            g_prime: prod.clone(),
            g_double_prime: prod.clone(),
            i_rule: MorphismRule::Identity,
            scheme_kernel_order: 1,
            pi0_intersection: 1,
        };
        assert_eq!(d_upper_bound(&w, &prod, 2).unwrap().d, 1);
    }

    #[test]
    fn main_chain_sl2() {
        for name in ["sl2_flag", "sl2_p1xp1"] {
            let s = preset(name).unwrap();
            let v = check_main_chain(&s, 4, &default_tol()).unwrap();
            assert!(v.holds, "{name}: {v:#?}");
            assert_eq!(v.d.d, 8);
            assert!(v.estimate_g.converged && v.estimate_g_prime.converged);
            assert_eq!(v.estimate_g_double_prime.c_hat, v.estimate_g_prime.c_hat);
        }
    }

    #[test]
    fn main_chain_collapses_for_gl() {
        let s = preset("gl2_flag").unwrap();
        let v = check_main_chain(&s, 4, &default_tol()).unwrap();
        assert!(v.holds);
        assert!(v.mult_iso.inequality.equality && v.mult_rad.inequality.equality);
        assert_eq!(v.estimate_g.c_hat, v.estimate_g_double_prime.c_hat);
        assert_eq!((v.mu, v.estimate_g.c_hat), (1, 2));
    }
}
