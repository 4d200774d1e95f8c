use serde::Serialize;

use super::ell::{inv_mod, mul_mod, EllContext};
use crate::error::{Error, Result};
use crate::group::{ConjugacyClassSet, GroupMorphism, Subgroup};

/// A class function with values in F_ℓ, one value per conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ClassFunction {
    #[serde(skip)]
    pub ell: u64,
    pub values: Vec<u64>,
}

impl ClassFunction {
    pub fn new(ell: u64, values: Vec<u64>) -> ClassFunction {
        ClassFunction { ell, values: values.into_iter().map(|v| v % ell).collect() }
    }

    /// Class function with integer values, reduced mod ℓ.
    pub fn from_integers(ell: u64, values: &[u128]) -> ClassFunction {
        ClassFunction { ell, values: values.iter().map(|&v| (v % ell as u128) as u64).collect() }
    }

    pub fn trivial(ell: u64, classes: usize) -> ClassFunction {
        ClassFunction { ell, values: vec![1; classes] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scale(&self, c: u64) -> ClassFunction {
        ClassFunction::new(self.ell, self.values.iter().map(|&v| mul_mod(v, c % self.ell, self.ell)).collect())
    }

    pub fn add(&self, other: &ClassFunction) -> ClassFunction {
        ClassFunction::new(self.ell, self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect())
    }
}

/// (1/|G|) Σ_j |C_j| f(C_j) g(C_j^{-1}) computed in F_ℓ, without lifting.
pub fn inner_product_residue(classes: &ConjugacyClassSet, f: &ClassFunction, g: &ClassFunction) -> u64 {
    let ell = f.ell;
    let mut s = 0;
    for j in 0..classes.len() {
        let t = mul_mod(f.values[j], g.values[classes.inverse[j]], ell);
        s = (s + mul_mod(classes.sizes[j] % ell, t, ell)) % ell;
    }
    mul_mod(s, inv_mod(classes.group_order() % ell, ell), ell)
}

/// Inner product lifted to the least non-negative residue; a lift above the
/// context's `omega_max` is reported as a context violation.
pub fn inner_product(
    ctx: &EllContext,
    classes: &ConjugacyClassSet,
    f: &ClassFunction,
    g: &ClassFunction,
) -> Result<u64> {
    if f.len() != classes.len() || g.len() != classes.len() || f.ell != ctx.ell || g.ell != ctx.ell {
        return Err(Error::Dimension("class functions of different groups or contexts".into()));
    }
    let v = inner_product_residue(classes, f, g);
    if v > ctx.omega_max.max(1) {
        return Err(Error::ContextViolation { value: v, bound: ctx.omega_max, ell: ctx.ell });
    }
    Ok(v)
}

/// Restriction of `f` (on the parent) to the subgroup.
pub fn restrict(f: &ClassFunction, sub: &Subgroup) -> ClassFunction {
    let pc = sub.parent.classes();
    let hc = sub.table.classes();
    let values = hc
        .representatives
        .iter()
        .map(|&r| f.values[pc.class_of[sub.parent_index[r]] as usize])
        .collect();
    ClassFunction { ell: f.ell, values }
}

/// Pullback f ∘ φ of a class function on the target of `m`.
pub fn pullback(f: &ClassFunction, m: &GroupMorphism) -> ClassFunction {
    ClassFunction { ell: f.ell, values: m.class_map().into_iter().map(|c| f.values[c]).collect() }
}

/// Induction from the subgroup to the parent.
pub fn induce(f: &ClassFunction, sub: &Subgroup) -> ClassFunction {
    let ell = f.ell;
    let pc = sub.parent.classes();
    let hc = sub.table.classes();
    let mut sums = vec![0u64; pc.len()];
    for (d, &r) in hc.representatives.iter().enumerate() {
        let c = pc.class_of[sub.parent_index[r]] as usize;
        sums[c] = (sums[c] + mul_mod(hc.sizes[d] % ell, f.values[d], ell)) % ell;
    }
    let h_inv = inv_mod(sub.table.order() as u64 % ell, ell);
    let values = sums
        .iter()
        .enumerate()
        .map(|(c, &s)| mul_mod(mul_mod(pc.centralizer_orders[c] % ell, s, ell), h_inv, ell))
        .collect();
    ClassFunction { ell, values }
}
