//! Fully enumerated finite groups.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use super::classes::{self, ConjugacyClassSet};
use super::descriptor::GroupDescriptor;
use super::law::GroupLaw;
use crate::error::{Error, Result};
use crate::fq::Elem;

/// Default refusal threshold for group enumeration.
pub const ENUMERATION_CAP: u128 = 2_000_000;

/// Packs a group element into a `u128` hash key.
#[derive(Clone, Copy, Debug)]
struct Keyer {
    bits: u32,
}

impl Keyer {
    fn for_law(law: &GroupLaw) -> Result<Keyer> {
        let max_order = law.factors().iter().map(|f| f.field.order()).max().unwrap_or(2);
        let bits = 32 - (max_order - 1).leading_zeros();
        let bits = bits.max(1);
        if bits as usize * law.width() > 128 {
            return Err(Error::Unsupported(format!(
                "elements of {} need {} key bits",
                law.descriptor(),
                bits as usize * law.width()
            )));
        }
        Ok(Keyer { bits })
    }

    #[inline]
    fn key(&self, a: &[Elem]) -> u128 {
        a.iter().fold(0u128, |acc, &x| (acc << self.bits) | x as u128)
    }
}

struct Explicit {
    elems: Vec<Elem>,
    index: HashMap<u128, u32>,
    keyer: Keyer,
    generators: Vec<usize>,
}

enum Repr {
    Explicit(Explicit),
    /// Direct product of single-factor tables; index is mixed radix with the
    /// first factor least significant.
    Product(Vec<Arc<GroupTable>>),
}

/// A finite group G(F_{q^k}) with every element enumerated.
pub struct GroupTable {
    law: Arc<GroupLaw>,
    repr: Repr,
    classes: OnceLock<ConjugacyClassSet>,
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupTable({} over F_{}^{}, order {})", self.law.descriptor(), self.law.base_q(), self.law.ext(), self.order())
    }
}

/// Enumerate G(F_{q^k}) with the default cap.
pub fn build_group(descriptor: &GroupDescriptor, q: u64, k: u32) -> Result<Arc<GroupTable>> {
    GroupTable::build(&GroupLaw::realize(descriptor, q, k)?, ENUMERATION_CAP)
}

impl GroupTable {
    pub fn build(law: &Arc<GroupLaw>, cap: u128) -> Result<Arc<GroupTable>> {
        let predicted = law.order();
        if predicted > cap {
            return Err(Error::CapExceeded { what: format!("{}", law.descriptor()), predicted, cap });
        }
        if law.factors().len() == 1 {
            let gens = law.generators();
            return Ok(Arc::new(GroupTable::closure(law.clone(), &gens)?));
        }
        let leaves = law.descriptor().leaves();
        let mut parts = Vec::new();
        for (i, f) in law.factors().iter().enumerate() {
            let sub = Arc::new(GroupLaw::from_factors(leaves[i].clone(), law.base_q(), law.ext(), vec![f.clone()]));
            parts.push(GroupTable::build(&sub, cap)?);
        }
        Ok(Arc::new(GroupTable::product_of(law.clone(), parts)))
    }

    fn product_of(law: Arc<GroupLaw>, parts: Vec<Arc<GroupTable>>) -> GroupTable {
        GroupTable { law, repr: Repr::Product(parts), classes: OnceLock::new() }
    }

    /// Breadth-first closure of `gens` inside the law's group.
    fn closure(law: Arc<GroupLaw>, gens: &[Vec<Elem>]) -> Result<GroupTable> {
        let keyer = Keyer::for_law(&law)?;
        let w = law.width();
        let id = law.identity();
        let mut elems = id.clone();
        let mut index = HashMap::new();
        index.insert(keyer.key(&id), 0u32);
        let mut buf = vec![0; w];
        let mut head = 0;
        while head < elems.len() / w {
            for g in gens {
                law.mul_into(&elems[head * w..(head + 1) * w], g, &mut buf);
                let key = keyer.key(&buf);
                if !index.contains_key(&key) {
                    index.insert(key, (elems.len() / w) as u32);
                    elems.extend_from_slice(&buf);
                }
            }
            head += 1;
        }
        let generators = gens.iter().map(|g| index[&keyer.key(g)] as usize).collect();
        Ok(GroupTable {
            law,
            repr: Repr::Explicit(Explicit { elems, index, keyer, generators }),
            classes: OnceLock::new(),
        })
    }

    /// Subgroup given by an explicit element list containing the identity
    /// first. A small generating set is found greedily.
    fn from_subset(law: Arc<GroupLaw>, members: Vec<Vec<Elem>>) -> Result<GroupTable> {
        let keyer = Keyer::for_law(&law)?;
        let w = law.width();
        let mut gens: Vec<Vec<Elem>> = Vec::new();
        let mut seen: HashMap<u128, u32> = HashMap::new();
        let mut elems: Vec<Elem> = law.identity();
        seen.insert(keyer.key(&elems), 0);
        let mut buf = vec![0; w];
        for m in &members {
            if seen.contains_key(&keyer.key(m)) {
                continue;
            }
            gens.push(m.clone());
            // re-close: old elements times the new generator, new elements times all
            let old = elems.len() / w;
            let mut queue: Vec<usize> = (0..old).collect();
            let mut qi = 0;
            while qi < queue.len() {
                let e = queue[qi];
                qi += 1;
                let gs: &[Vec<Elem>] = if e < old { &gens[gens.len() - 1..] } else { &gens };
                for g in gs {
                    law.mul_into(&elems[e * w..(e + 1) * w], g, &mut buf);
                    let key = keyer.key(&buf);
                    if !seen.contains_key(&key) {
                        let idx = elems.len() / w;
                        seen.insert(key, idx as u32);
                        elems.extend_from_slice(&buf);
                        queue.push(idx);
                    }
                }
            }
        }
        if elems.len() / w != members.len() {
            return Err(Error::NotInGroup(format!(
                "subset of size {} is not closed (generates {})",
                members.len(),
                elems.len() / w
            )));
        }
        let generators = gens.iter().map(|g| seen[&keyer.key(g)] as usize).collect();
        Ok(GroupTable {
            law,
            repr: Repr::Explicit(Explicit { elems, index: seen, keyer, generators }),
            classes: OnceLock::new(),
        })
    }

    pub fn law(&self) -> &Arc<GroupLaw> {
        &self.law
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        self.law.descriptor()
    }

    pub fn width(&self) -> usize {
        self.law.width()
    }

    pub fn order(&self) -> usize {
        match &self.repr {
            Repr::Explicit(e) => e.elems.len() / self.law.width(),
            Repr::Product(parts) => parts.iter().map(|p| p.order()).product(),
        }
    }

    pub fn factor_tables(&self) -> Option<&[Arc<GroupTable>]> {
        match &self.repr {
            Repr::Product(parts) => Some(parts),
            Repr::Explicit(_) => None,
        }
    }

    /// Split a product index into factor indices.
    pub fn split_index(&self, mut idx: usize) -> Vec<usize> {
        match &self.repr {
            Repr::Explicit(_) => vec![idx],
            Repr::Product(parts) => parts
                .iter()
                .map(|p| {
                    let r = idx % p.order();
                    idx /= p.order();
                    r
                })
                .collect(),
        }
    }

    pub fn join_index(&self, parts_idx: &[usize]) -> usize {
        match &self.repr {
            Repr::Explicit(_) => parts_idx[0],
            Repr::Product(parts) => {
                let mut idx = 0;
                for (p, &i) in parts.iter().zip(parts_idx).rev() {
                    idx = idx * p.order() + i;
                }
                idx
            }
        }
    }

    pub fn element_into(&self, idx: usize, out: &mut [Elem]) {
        match &self.repr {
            Repr::Explicit(e) => {
                let w = self.law.width();
                out.copy_from_slice(&e.elems[idx * w..(idx + 1) * w]);
            }
            Repr::Product(parts) => {
                let mut off = 0;
                for (p, i) in parts.iter().zip(self.split_index(idx)) {
                    let w = p.width();
                    p.element_into(i, &mut out[off..off + w]);
                    off += w;
                }
            }
        }
    }

    pub fn element(&self, idx: usize) -> Vec<Elem> {
        let mut out = vec![0; self.law.width()];
        self.element_into(idx, &mut out);
        out
    }

    pub fn index_of(&self, a: &[Elem]) -> Option<usize> {
        if a.len() != self.law.width() {
            return None;
        }
        match &self.repr {
            Repr::Explicit(e) => e.index.get(&e.keyer.key(a)).map(|&i| i as usize),
            Repr::Product(parts) => {
                let mut off = 0;
                let mut idxs = Vec::with_capacity(parts.len());
                for p in parts {
                    let w = p.width();
                    idxs.push(p.index_of(&a[off..off + w])?);
                    off += w;
                }
                Some(self.join_index(&idxs))
            }
        }
    }

    pub fn contains(&self, a: &[Elem]) -> bool {
        self.index_of(a).is_some()
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    pub fn mul_idx(&self, a: usize, b: usize) -> usize {
        match &self.repr {
            Repr::Explicit(_) => {
                let p = self.law.mul(&self.element(a), &self.element(b));
                self.index_of(&p).expect("closed under multiplication")
            }
            Repr::Product(parts) => {
                let (sa, sb) = (self.split_index(a), self.split_index(b));
                let idxs: Vec<usize> = parts.iter().enumerate().map(|(i, p)| p.mul_idx(sa[i], sb[i])).collect();
                self.join_index(&idxs)
            }
        }
    }

    pub fn inv_idx(&self, a: usize) -> usize {
        match &self.repr {
            Repr::Explicit(_) => self.index_of(&self.law.inverse(&self.element(a))).expect("closed under inverse"),
            Repr::Product(parts) => {
                let sa = self.split_index(a);
                let idxs: Vec<usize> = parts.iter().enumerate().map(|(i, p)| p.inv_idx(sa[i])).collect();
                self.join_index(&idxs)
            }
        }
    }

    /// Indices of a generating set.
    pub fn generators(&self) -> Vec<usize> {
        match &self.repr {
            Repr::Explicit(e) => e.generators.clone(),
            Repr::Product(parts) => {
                let mut out = Vec::new();
                for (i, p) in parts.iter().enumerate() {
                    for g in p.generators() {
                        let mut idxs = vec![0; parts.len()];
                        idxs[i] = g;
                        out.push(self.join_index(&idxs));
                    }
                }
                out
            }
        }
    }

    pub fn classes(&self) -> &ConjugacyClassSet {
        self.classes.get_or_init(|| match &self.repr {
            Repr::Explicit(_) => classes::orbit_partition(self),
            Repr::Product(parts) => {
                let sets: Vec<&ConjugacyClassSet> = parts.iter().map(|p| p.classes()).collect();
                classes::product_classes(self, &sets)
            }
        })
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> u64 {
        let c = self.classes();
        c.rep_orders.iter().fold(1u64, |acc, &o| num_integer::lcm(acc, o))
    }

    pub fn element_order(&self, idx: usize) -> u64 {
        self.law.element_order(&self.element(idx))
    }

    /// The subgroup of elements satisfying `pred`, which must be closed.
    pub fn subgroup_where(self: &Arc<Self>, pred: impl Fn(&[Elem]) -> bool) -> Result<Subgroup> {
        match &self.repr {
            Repr::Explicit(_) => {
                let members: Vec<usize> = (0..self.order()).filter(|&i| pred(&self.element(i))).collect();
                let elems: Vec<Vec<Elem>> = members.iter().map(|&i| self.element(i)).collect();
                let table = Arc::new(GroupTable::from_subset(self.law.clone(), elems)?);
                Subgroup::embed(table, self.clone())
            }
            Repr::Product(_) => Err(Error::Unsupported("predicate subgroups of product tables".into())),
        }
    }

    /// Subgroup given per factor for product tables.
    pub fn distinguished_subgroup(self: &Arc<Self>, which: Distinguished) -> Result<Subgroup> {
        match &self.repr {
            Repr::Product(parts) => {
                let subs: Vec<Subgroup> =
                    parts.iter().map(|p| p.distinguished_subgroup(which)).collect::<Result<_>>()?;
                let table = Arc::new(GroupTable::product_of(
                    self.law.clone(),
                    subs.iter().map(|s| s.table.clone()).collect(),
                ));
                Subgroup::embed(table, self.clone())
            }
            Repr::Explicit(_) => {
                let factor = &self.law.factors()[0];
                let (n, f) = (factor.n, factor.field.clone());
                let pred: Box<dyn Fn(&[Elem]) -> bool> = match which {
                    Distinguished::Borel => Box::new(move |a| (0..n).all(|i| (0..i).all(|j| a[i * n + j] == 0))),
                    Distinguished::Torus => Box::new(move |a| (0..n).all(|i| (0..n).all(|j| i == j || a[i * n + j] == 0))),
                    Distinguished::Unipotent => {
                        Box::new(move |a| (0..n).all(|i| a[i * n + i] == 1 && (0..i).all(|j| a[i * n + j] == 0)))
                    }
                    Distinguished::Center | Distinguished::Scalars => Box::new(move |a| {
                        (0..n).all(|i| (0..n).all(|j| if i == j { a[i * n + j] == a[0] } else { a[i * n + j] == 0 }))
                    }),
                    Distinguished::Det1 => Box::new(move |a| crate::fq::matrix::det(&f, n, a) == 1),
                };
                self.subgroup_where(pred)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distinguished {
    Borel,
    Torus,
    Unipotent,
    Center,
    Det1,
    Scalars,
}

/// A subgroup table together with the positions of its elements in the parent.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub table: Arc<GroupTable>,
    pub parent: Arc<GroupTable>,
    pub parent_index: Vec<usize>,
}

impl Subgroup {
    pub fn embed(table: Arc<GroupTable>, parent: Arc<GroupTable>) -> Result<Subgroup> {
        let mut parent_index = Vec::with_capacity(table.order());
        let mut buf = vec![0; table.width()];
        for i in 0..table.order() {
            table.element_into(i, &mut buf);
            let j = parent
                .index_of(&buf)
                .ok_or_else(|| Error::NotInGroup(format!("{:?} is not an element of {:?}", buf, parent)))?;
            parent_index.push(j);
        }
        Ok(Subgroup { table, parent, parent_index })
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.table.order()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_match_closed_forms() {
        for (d, q, k) in [
            (GroupDescriptor::gl(2), 2, 1),
            (GroupDescriptor::gl(2), 3, 1),
            (GroupDescriptor::sl(2), 3, 1),
            (GroupDescriptor::gl(1), 7, 1),
            (GroupDescriptor::gl(3), 2, 1),
            (GroupDescriptor::WeilRestriction { n: 1, m: 2 }, 3, 1),
            (GroupDescriptor::product(vec![GroupDescriptor::sl(2), GroupDescriptor::Mu { n: 2 }]), 3, 1),
        ] {
            let g = build_group(&d, q, k).unwrap();
            assert_eq!(g.order() as u128, d.order(q, k).unwrap(), "{d}");
        }
    }

    #[test]
    fn closure_and_inverses() {
        let g = build_group(&GroupDescriptor::gl(2), 3, 1).unwrap();
        for a in 0..g.order() {
            let ai = g.inv_idx(a);
            assert_eq!(g.mul_idx(a, ai), g.identity_index());
            assert!(g.law().contains(&g.element(a)));
        }
    }

    #[test]
    fn distinguished_orders() {
        let g = build_group(&GroupDescriptor::gl(2), 3, 1).unwrap();
        assert_eq!(g.distinguished_subgroup(Distinguished::Borel).unwrap().table.order(), 12);
        assert_eq!(g.distinguished_subgroup(Distinguished::Center).unwrap().table.order(), 2);
        assert_eq!(g.distinguished_subgroup(Distinguished::Det1).unwrap().table.order(), 24);
        assert_eq!(g.distinguished_subgroup(Distinguished::Torus).unwrap().table.order(), 4);
        assert_eq!(g.distinguished_subgroup(Distinguished::Unipotent).unwrap().table.order(), 3);
    }

    #[test]
    fn cap_refusal_names_order() {
        let law = GroupLaw::realize(&GroupDescriptor::gl(3), 5, 1).unwrap();
        match GroupTable::build(&law, 1000) {
            Err(Error::CapExceeded { predicted, .. }) => assert_eq!(predicted, 1_488_000),
            other => panic!("unexpected {other:?}"),
        }
    }
}
