//! A descriptor realized over a concrete finite field: element layout,
//! multiplication, generators and the standard Borel subgroup.
//!
//! Elements of a realized group are flat `u32` slices: the row-major entries
//! of each factor's matrix, concatenated in factor order. μ_m factors are
//! 1×1 matrices.

use std::sync::Arc;

use super::descriptor::GroupDescriptor;
use crate::error::{Error, Result};
use crate::fq::{field_for, matrix, Elem, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    General,
    Special,
    Roots(u32),
}

/// One matrix factor G_i(F) of a realized group.
#[derive(Clone, Debug)]
pub struct Factor {
    pub field: Arc<Field>,
    pub n: usize,
    pub kind: FactorKind,
}

fn big_q(f: &Field) -> u128 {
    f.order() as u128
}

impl Factor {
    pub fn width(&self) -> usize {
        self.n * self.n
    }

    pub fn order(&self) -> u128 {
        let q = big_q(&self.field);
        let gl = super::descriptor::gl_order(self.n, q).expect("factor order fits u128");
        match self.kind {
            FactorKind::General => gl,
            FactorKind::Special => gl / (q - 1),
            FactorKind::Roots(m) => num_integer::gcd(m as u128, q - 1),
        }
    }

    pub fn borel_order(&self) -> u128 {
        let q = big_q(&self.field);
        let n = self.n as u32;
        let unip = q.pow(n * (n - 1) / 2);
        match self.kind {
            FactorKind::General => (q - 1).pow(n) * unip,
            FactorKind::Special => (q - 1).pow(n - 1) * unip,
            FactorKind::Roots(_) => self.order(),
        }
    }

    #[inline]
    pub fn mul_into(&self, a: &[Elem], b: &[Elem], out: &mut [Elem]) {
        if self.n == 1 {
            out[0] = self.field.mul(a[0], b[0]);
        } else {
            matrix::mul_into(&self.field, self.n, a, b, out);
        }
    }

    pub fn inverse(&self, a: &[Elem]) -> Vec<Elem> {
        matrix::inverse(&self.field, self.n, a).expect("group elements are invertible")
    }

    pub fn det(&self, a: &[Elem]) -> Elem {
        matrix::det(&self.field, self.n, a)
    }

    pub fn contains(&self, a: &[Elem]) -> bool {
        if a.len() != self.width() || a.iter().any(|&x| x >= self.field.order()) {
            return false;
        }
        let d = self.det(a);
        match self.kind {
            FactorKind::General => d != 0,
            FactorKind::Special => d == 1,
            FactorKind::Roots(m) => d != 0 && self.field.pow(d, m as u64) == 1,
        }
    }

    fn root_generator(&self, m: u32) -> Elem {
        let q1 = (self.field.order() - 1) as u64;
        let g = num_integer::gcd(m as u64, q1);
        self.field.exp(q1 / g)
    }

    fn elementary(&self, i: usize, j: usize, c: Elem) -> Vec<Elem> {
        let mut e = matrix::identity(self.n);
        e[i * self.n + j] = c;
        e
    }

    fn diag_with(&self, entries: &[(usize, Elem)]) -> Vec<Elem> {
        let mut e = matrix::identity(self.n);
        for &(i, v) in entries {
            e[i * self.n + i] = v;
        }
        e
    }

    /// Generators of the whole factor group.
    pub fn generators(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let gamma = f.generator();
        match self.kind {
            FactorKind::Roots(m) => vec![vec![self.root_generator(m)]],
            kind => {
                let mut gens = Vec::new();
                if kind == FactorKind::General {
                    gens.push(self.diag_with(&[(0, gamma)]));
                }
                for i in 0..self.n {
                    for j in 0..self.n {
                        if i != j {
                            for &b in &f.additive_basis() {
                                gens.push(self.elementary(i, j, b));
                            }
                        }
                    }
                }
                gens
            }
        }
    }

    /// Generators of the upper-triangular Borel subgroup.
    pub fn borel_generators(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let gamma = f.generator();
        let gamma_inv = f.inv(gamma).unwrap();
        match self.kind {
            FactorKind::Roots(m) => vec![vec![self.root_generator(m)]],
            kind => {
                let mut gens = Vec::new();
                if kind == FactorKind::General {
                    for i in 0..self.n {
                        gens.push(self.diag_with(&[(i, gamma)]));
                    }
                } else {
                    for i in 0..self.n.saturating_sub(1) {
                        gens.push(self.diag_with(&[(i, gamma), (i + 1, gamma_inv)]));
                    }
                }
                for i in 0..self.n {
                    for j in i + 1..self.n {
                        for &b in &f.additive_basis() {
                            gens.push(self.elementary(i, j, b));
                        }
                    }
                }
                gens
            }
        }
    }

    /// The `idx`-th Borel element in a fixed mixed-radix order.
    pub fn borel_element(&self, mut idx: u128, out: &mut [Elem]) {
        let f = &self.field;
        let q = big_q(f);
        let q1 = q - 1;
        if let FactorKind::Roots(m) = self.kind {
            let z = self.root_generator(m);
            out[0] = f.pow(z, idx as u64);
            return;
        }
        let n = self.n;
        out.iter_mut().for_each(|x| *x = 0);
        let free_diag = if self.kind == FactorKind::General { n } else { n - 1 };
        let mut log_sum = 0u128;
        for i in 0..free_diag {
            let l = idx % q1;
            idx /= q1;
            log_sum += l;
            out[i * n + i] = f.exp(l as u64);
        }
        if self.kind == FactorKind::Special {
            let l = (q1 - log_sum % q1) % q1;
            out[(n - 1) * n + n - 1] = f.exp(l as u64);
        }
        for i in 0..n {
            for j in i + 1..n {
                out[i * n + j] = (idx % q) as Elem;
                idx /= q;
            }
        }
    }
}

/// A realized group: G(F_{q^k}) as a product of matrix factors.
#[derive(Debug)]
pub struct GroupLaw {
    descriptor: GroupDescriptor,
    q: u64,
    k: u32,
    factors: Vec<Factor>,
    offsets: Vec<usize>,
    width: usize,
}

impl GroupLaw {
    /// Realize `descriptor` over F_{q^k}.
    pub fn realize(descriptor: &GroupDescriptor, q: u64, k: u32) -> Result<Arc<GroupLaw>> {
        descriptor.validate()?;
        let base = field_for(q, k)?;
        let mut factors = Vec::new();
        for leaf in descriptor.leaves() {
            let factor = match leaf {
                GroupDescriptor::Gl { n } => Factor { field: base.clone(), n, kind: FactorKind::General },
                GroupDescriptor::Sl { n } => Factor { field: base.clone(), n, kind: FactorKind::Special },
                GroupDescriptor::Mu { n } => Factor { field: base.clone(), n: 1, kind: FactorKind::Roots(n) },
                GroupDescriptor::WeilRestriction { n, m } => Factor {
                    field: field_for(q, k * m)?,
                    n,
                    kind: FactorKind::General,
                },
                GroupDescriptor::Product { .. } => unreachable!("leaves are flattened"),
            };
            factors.push(factor);
        }
        Ok(Arc::new(GroupLaw::from_factors(descriptor.clone(), q, k, factors)))
    }

    pub fn from_factors(descriptor: GroupDescriptor, q: u64, k: u32, factors: Vec<Factor>) -> GroupLaw {
        let mut offsets = Vec::with_capacity(factors.len());
        let mut width = 0;
        for f in &factors {
            offsets.push(width);
            width += f.width();
        }
        GroupLaw { descriptor, q, k, factors, offsets, width }
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }
    pub fn base_q(&self) -> u64 {
        self.q
    }
    pub fn ext(&self) -> u32 {
        self.k
    }
    /// |F_{q^k}|.
    pub fn field_order(&self) -> u128 {
        (self.q as u128).pow(self.k)
    }
    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }
    pub fn width(&self) -> usize {
        self.width
    }
    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }
    pub fn part<'a>(&self, i: usize, a: &'a [Elem]) -> &'a [Elem] {
        &a[self.offsets[i]..self.offsets[i] + self.factors[i].width()]
    }

    pub fn identity(&self) -> Vec<Elem> {
        let mut out = Vec::with_capacity(self.width);
        for f in &self.factors {
            out.extend(matrix::identity(f.n));
        }
        out
    }

    #[inline]
    pub fn mul_into(&self, a: &[Elem], b: &[Elem], out: &mut [Elem]) {
        for (i, f) in self.factors.iter().enumerate() {
            let r = self.offsets[i]..self.offsets[i] + f.width();
            f.mul_into(&a[r.clone()], &b[r.clone()], &mut out[r]);
        }
    }

    pub fn mul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let mut out = vec![0; self.width];
        self.mul_into(a, b, &mut out);
        out
    }

    pub fn inverse(&self, a: &[Elem]) -> Vec<Elem> {
        let mut out = Vec::with_capacity(self.width);
        for (i, f) in self.factors.iter().enumerate() {
            out.extend(f.inverse(self.part(i, a)));
        }
        out
    }

    pub fn conjugate(&self, g: &[Elem], x: &[Elem]) -> Vec<Elem> {
        self.mul(&self.mul(g, x), &self.inverse(g))
    }

    pub fn contains(&self, a: &[Elem]) -> bool {
        a.len() == self.width && self.factors.iter().enumerate().all(|(i, f)| f.contains(self.part(i, a)))
    }

    pub fn is_identity(&self, a: &[Elem]) -> bool {
        self.factors.iter().enumerate().all(|(i, f)| matrix::is_identity(f.n, self.part(i, a)))
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(|f| f.order()).product()
    }

    pub fn borel_order(&self) -> u128 {
        self.factors.iter().map(|f| f.borel_order()).product()
    }

    /// Number of rational Borel subgroups, |G/B|.
    pub fn flag_count(&self) -> u128 {
        self.order() / self.borel_order()
    }

    fn embed_factor_elements(&self, i: usize, gens: Vec<Vec<Elem>>) -> Vec<Vec<Elem>> {
        gens.into_iter()
            .map(|g| {
                let mut e = self.identity();
                e[self.offsets[i]..self.offsets[i] + g.len()].copy_from_slice(&g);
                e
            })
            .collect()
    }

    pub fn generators(&self) -> Vec<Vec<Elem>> {
        (0..self.factors.len())
            .flat_map(|i| self.embed_factor_elements(i, self.factors[i].generators()))
            .collect()
    }

    pub fn borel_generators(&self) -> Vec<Vec<Elem>> {
        (0..self.factors.len())
            .flat_map(|i| self.embed_factor_elements(i, self.factors[i].borel_generators()))
            .collect()
    }

    /// The `idx`-th element of B(F), 0 ≤ idx < |B|.
    pub fn borel_element(&self, mut idx: u128, out: &mut [Elem]) {
        for (i, f) in self.factors.iter().enumerate() {
            let b = f.borel_order();
            let r = self.offsets[i]..self.offsets[i] + f.width();
            f.borel_element(idx % b, &mut out[r]);
            idx /= b;
        }
    }

    /// Order of an element by repeated multiplication.
    pub fn element_order(&self, a: &[Elem]) -> u64 {
        let mut cur = a.to_vec();
        let mut buf = vec![0; self.width];
        let mut n = 1;
        while !self.is_identity(&cur) {
            self.mul_into(&cur, a, &mut buf);
            std::mem::swap(&mut cur, &mut buf);
            n += 1;
        }
        n
    }

    pub fn check_width(&self, a: &[Elem]) -> Result<()> {
        if a.len() != self.width {
            return Err(Error::Dimension(format!("element of width {} in group of width {}", a.len(), self.width)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn borel_enumeration_is_exact() {
        for (desc, q) in [(GroupDescriptor::gl(2), 3), (GroupDescriptor::sl(2), 5), (GroupDescriptor::gl(3), 2)] {
            let law = GroupLaw::realize(&desc, q, 1).unwrap();
            let mut seen = HashSet::new();
            let mut buf = vec![0; law.width()];
            for i in 0..law.borel_order() {
                law.borel_element(i, &mut buf);
                assert!(law.contains(&buf));
                let n = law.factors()[0].n;
                for r in 0..n {
                    for c in 0..r {
                        assert_eq!(buf[r * n + c], 0);
                    }
                }
                seen.insert(buf.clone());
            }
            assert_eq!(seen.len() as u128, law.borel_order());
        }
    }

    #[test]
    fn borel_order_formula() {
        let law = GroupLaw::realize(&GroupDescriptor::gl(2), 3, 1).unwrap();
        assert_eq!(law.borel_order(), 12);
        assert_eq!(law.flag_count(), 4);
    }
}
