use std::collections::HashMap;

use super::law::FactorKind;
use super::rcf::{self, SimilarityLabel};
use super::table::GroupTable;
use crate::error::{Error, Result};

/// Conjugacy classes of an enumerated group. Class 0 is the identity class.
#[derive(Clone, Debug)]
pub struct ConjugacyClassSet {
    pub representatives: Vec<usize>,
    pub sizes: Vec<u64>,
    pub class_of: Vec<u32>,
    pub centralizer_orders: Vec<u64>,
    /// Class of the inverses of class `i`.
    pub inverse: Vec<usize>,
    pub rep_orders: Vec<u64>,
}

impl ConjugacyClassSet {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn group_order(&self) -> u64 {
        self.sizes.iter().sum()
    }

    /// Members of each class, by element index.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.len()];
        for (x, &c) in self.class_of.iter().enumerate() {
            out[c as usize].push(x);
        }
        out
    }
}

fn finish(table: &GroupTable, orbits: Vec<Vec<usize>>) -> ConjugacyClassSet {
    let order = table.order() as u64;
    let mut classes: Vec<(usize, Vec<usize>)> = orbits
        .into_iter()
        .map(|members| {
            let rep = *members.iter().min_by_key(|&&i| table.element(i)).unwrap();
            (rep, members)
        })
        .collect();
    let id = table.identity_index();
    classes.sort_by(|(ra, ma), (rb, mb)| {
        let ia = *ra == id;
        let ib = *rb == id;
        ib.cmp(&ia).then(ma.len().cmp(&mb.len())).then_with(|| table.element(*ra).cmp(&table.element(*rb)))
    });
    let mut class_of = vec![0u32; table.order()];
    for (c, (_, members)) in classes.iter().enumerate() {
        for &m in members {
            class_of[m] = c as u32;
        }
    }
    let representatives: Vec<usize> = classes.iter().map(|(r, _)| *r).collect();
    let sizes: Vec<u64> = classes.iter().map(|(_, m)| m.len() as u64).collect();
    let inverse = representatives.iter().map(|&r| class_of[table.inv_idx(r)] as usize).collect();
    let rep_orders = representatives.iter().map(|&r| table.element_order(r)).collect();
    ConjugacyClassSet {
        centralizer_orders: sizes.iter().map(|s| order / s).collect(),
        representatives,
        sizes,
        class_of,
        inverse,
        rep_orders,
    }
}

/// Orbits of the conjugation action, explored by generator moves.
pub(crate) fn orbit_partition(table: &GroupTable) -> ConjugacyClassSet {
    let law = table.law();
    let gens: Vec<_> = table.generators().into_iter().map(|g| table.element(g)).collect();
    let gen_invs: Vec<_> = gens.iter().map(|g| law.inverse(g)).collect();
    let mut assigned = vec![false; table.order()];
    let mut orbits = Vec::new();
    let w = law.width();
    let mut tmp = vec![0; w];
    let mut out = vec![0; w];
    for start in 0..table.order() {
        if assigned[start] {
            continue;
        }
        assigned[start] = true;
        let mut orbit = vec![start];
        let mut head = 0;
        while head < orbit.len() {
            let x = table.element(orbit[head]);
            head += 1;
            for (g, gi) in gens.iter().zip(&gen_invs) {
                law.mul_into(g, &x, &mut tmp);
                law.mul_into(&tmp, gi, &mut out);
                let y = table.index_of(&out).expect("conjugate lies in the group");
                if !assigned[y] {
                    assigned[y] = true;
                    orbit.push(y);
                }
            }
        }
        orbits.push(orbit);
    }
    finish(table, orbits)
}

/// Classes of a direct product from the classes of its factors.
pub(crate) fn product_classes(table: &GroupTable, parts: &[&ConjugacyClassSet]) -> ConjugacyClassSet {
    let counts: Vec<usize> = parts.iter().map(|p| p.len()).collect();
    let total: usize = counts.iter().product();
    let split = |mut c: usize| -> Vec<usize> {
        counts
            .iter()
            .map(|&n| {
                let r = c % n;
                c /= n;
                r
            })
            .collect()
    };
    let join = |cs: &[usize]| -> usize { cs.iter().zip(&counts).rev().fold(0, |acc, (&c, &n)| acc * n + c) };
    let mut representatives = Vec::with_capacity(total);
    let mut sizes = Vec::with_capacity(total);
    let mut centralizer_orders = Vec::with_capacity(total);
    let mut inverse = Vec::with_capacity(total);
    let mut rep_orders = Vec::with_capacity(total);
    for c in 0..total {
        let cs = split(c);
        let reps: Vec<usize> = cs.iter().zip(parts).map(|(&i, p)| p.representatives[i]).collect();
        representatives.push(table.join_index(&reps));
        sizes.push(cs.iter().zip(parts).map(|(&i, p)| p.sizes[i]).product());
        centralizer_orders.push(cs.iter().zip(parts).map(|(&i, p)| p.centralizer_orders[i]).product());
        let inv: Vec<usize> = cs.iter().zip(parts).map(|(&i, p)| p.inverse[i]).collect();
        inverse.push(join(&inv));
        rep_orders.push(cs.iter().zip(parts).fold(1u64, |acc, (&i, p)| num_integer::lcm(acc, p.rep_orders[i])));
    }
    let class_of = (0..table.order())
        .map(|x| {
            let xs = table.split_index(x);
            let cs: Vec<usize> = xs.iter().zip(parts).map(|(&i, p)| p.class_of[i] as usize).collect();
            join(&cs) as u32
        })
        .collect();
    ConjugacyClassSet { representatives, sizes, class_of, centralizer_orders, inverse, rep_orders }
}

/// Similarity label of every element of a single-factor GL_n table.
pub fn rcf_labels(table: &GroupTable) -> Result<Vec<SimilarityLabel>> {
    let law = table.law();
    if law.factors().len() != 1 || law.factors()[0].kind != FactorKind::General {
        return Err(Error::Unsupported(format!("similarity labels for {}", law.descriptor())));
    }
    let f = &law.factors()[0];
    (0..table.order()).map(|i| rcf::similarity_label(&f.field, f.n, &table.element(i))).collect()
}

/// Whether similarity labels and the orbit partition induce the same
/// partition, and the centralizer formula matches the orbit sizes.
pub fn rcf_agrees_with_orbits(table: &GroupTable) -> Result<bool> {
    let labels = rcf_labels(table)?;
    let classes = table.classes();
    let mut by_label: HashMap<&SimilarityLabel, u32> = HashMap::new();
    for (x, l) in labels.iter().enumerate() {
        let c = classes.class_of[x];
        if *by_label.entry(l).or_insert(c) != c {
            return Ok(false);
        }
    }
    if by_label.len() != classes.len() {
        return Ok(false);
    }
    let big_q = table.law().factors()[0].field.order() as u128;
    Ok(classes.representatives.iter().enumerate().all(|(c, &r)| {
        rcf::centralizer_order(big_q, &labels[r]) == classes.centralizer_orders[c] as u128
    }))
}

#[cfg(test)]
mod tests {
    use super::super::descriptor::GroupDescriptor;
    use super::super::table::build_group;
    use super::*;

    #[test]
    fn gl2_f2_has_three_classes() {
        let g = build_group(&GroupDescriptor::gl(2), 2, 1).unwrap();
        let c = g.classes();
        let mut sizes = c.sizes.clone();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(c.representatives[0], g.identity_index());
    }

    #[test]
    fn gl2_f3_has_eight_classes() {
        let g = build_group(&GroupDescriptor::gl(2), 3, 1).unwrap();
        assert_eq!(g.classes().len(), 8);
        assert_eq!(g.classes().group_order(), 48);
    }

    #[test]
    fn brute_force_conjugation_matches() {
        let g = build_group(&GroupDescriptor::gl(2), 3, 1).unwrap();
        let c = g.classes();
        for x in 0..g.order() {
            for h in 0..g.order() {
                let y = g.mul_idx(g.mul_idx(h, x), g.inv_idx(h));
                assert_eq!(c.class_of[x], c.class_of[y]);
            }
        }
        for (i, &s) in c.sizes.iter().enumerate() {
            assert_eq!(s * c.centralizer_orders[i], 48);
        }
    }

    #[test]
    fn trivial_group_single_class() {
        let g = build_group(&GroupDescriptor::sl(1), 5, 1).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.classes().len(), 1);
    }

    #[test]
    fn rcf_matches_orbits() {
        for (n, q, k) in [(2, 2, 1), (2, 3, 1), (2, 4, 1), (3, 2, 1), (2, 5, 1)] {
            let g = build_group(&GroupDescriptor::gl(n), q, k).unwrap();
            assert!(rcf_agrees_with_orbits(&g).unwrap(), "GL{n}(F_{q}^{k})");
        }
    }

    #[test]
    fn product_classes_multiply() {
        let d = GroupDescriptor::product(vec![GroupDescriptor::gl(2), GroupDescriptor::gl(2)]);
        let g = build_group(&d, 2, 1).unwrap();
        assert_eq!(g.classes().len(), 9);
        assert_eq!(g.classes().group_order(), 36);
        let c = g.classes();
        for x in 0..g.order() {
            let h = g.generators()[x % g.generators().len()];
            let y = g.mul_idx(g.mul_idx(h, x), g.inv_idx(h));
            assert_eq!(c.class_of[x], c.class_of[y]);
        }
    }
}
