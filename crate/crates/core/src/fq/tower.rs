use std::collections::HashMap;
use std::sync::Arc;

use super::field::{make_field, Elem, Field};
use crate::error::{Error, Result};

/// All subfields F_{p^d}, d | top degree, with embeddings fixed once.
///
/// Each level is embedded into the top field by sending the class of `x` to
/// the least root (packed order) of that level's modulus. Maps between two
/// intermediate levels factor through the top field, so composites agree.
pub struct FieldTower {
    p: u64,
    top: Arc<Field>,
    levels: HashMap<u32, Level>,
}

struct Level {
    field: Arc<Field>,
    into_top: Vec<Elem>,
    from_top: HashMap<Elem, Elem>,
}

impl FieldTower {
    pub fn new(p: u64, top_degree: u32) -> Result<FieldTower> {
        let top = make_field(p, top_degree)?;
        let mut levels = HashMap::new();
        for d in 1..=top_degree {
            if top_degree % d != 0 {
                continue;
            }
            let field = make_field(p, d)?;
            let modulus: Vec<Elem> = field
                .descriptor()
                .modulus
                .iter()
                .map(|&c| top.from_int(c as i64))
                .collect();
            let root = if d == 1 {
                0
            } else if d == top_degree {
                p as Elem
            } else {
                *top.roots(&modulus).first().expect("subfield exists")
            };
            // x = sum c_i t^i  ->  sum c_i root^i
            let mut into_top = Vec::with_capacity(field.order() as usize);
            let powers: Vec<Elem> = (0..d as u64).map(|i| top.pow(root, i)).collect();
            for x in field.elements() {
                let coeffs = field.coefficients(x);
                let img = coeffs.iter().zip(&powers).fold(0, |acc, (&c, &r)| {
                    top.add(acc, top.mul(top.from_int(c as i64), r))
                });
                into_top.push(img);
            }
            let from_top = into_top.iter().enumerate().map(|(x, &y)| (y, x as Elem)).collect();
            levels.insert(d, Level { field, into_top, from_top });
        }
        Ok(FieldTower { p, top, levels })
    }

    pub fn top(&self) -> &Arc<Field> {
        &self.top
    }

    pub fn field(&self, degree: u32) -> Option<&Arc<Field>> {
        self.levels.get(&degree).map(|l| &l.field)
    }

    /// Embed `x ∈ F_{p^from}` into `F_{p^to}`.
    pub fn embed(&self, x: Elem, from: u32, to: u32) -> Result<Elem> {
        let bad = || Error::BadEmbedding { p: self.p, from, q: self.p, to };
        if to % from != 0 {
            return Err(bad());
        }
        let src = self.levels.get(&from).ok_or_else(bad)?;
        let dst = self.levels.get(&to).ok_or_else(bad)?;
        let y = *src.into_top.get(x as usize).ok_or_else(bad)?;
        dst.from_top.get(&y).copied().ok_or_else(bad)
    }

    /// Embed between two fields that both belong to this tower.
    pub fn embed_between(&self, x: Elem, from: &Field, to: &Field) -> Result<Elem> {
        if from.characteristic() as u64 != self.p || to.characteristic() as u64 != self.p {
            return Err(Error::BadEmbedding {
                p: from.characteristic() as u64,
                from: from.degree(),
                q: to.characteristic() as u64,
                to: to.degree(),
            });
        }
        self.embed(x, from.degree(), to.degree())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unital_and_order_preserving() {
        let t = FieldTower::new(3, 2).unwrap();
        let f9 = t.field(2).unwrap().clone();
        assert_eq!(t.embed(1, 1, 2).unwrap(), 1);
        let two = t.embed(2, 1, 2).unwrap();
        assert_eq!(f9.mult_order(two), Some(2));
    }

    #[test]
    fn generator_of_f4_lands_on_order_3() {
        let t = FieldTower::new(2, 4).unwrap();
        let f4 = t.field(2).unwrap().clone();
        let f16 = t.field(4).unwrap().clone();
        let g = t.embed(f4.generator(), 2, 4).unwrap();
        // order checked by exponentiation
        assert_ne!(g, 1);
        assert_ne!(f16.pow(g, 1), 1);
        assert_eq!(f16.pow(g, 3), 1);
    }

    #[test]
    fn embedding_is_ring_hom() {
        let t = FieldTower::new(2, 6).unwrap();
        for (a, b) in [(2u32, 6u32), (3, 6), (1, 3), (1, 2)] {
            let fa = t.field(a).unwrap().clone();
            let fb = t.field(b).unwrap().clone();
            for x in fa.elements() {
                for y in fa.elements() {
                    let ex = t.embed(x, a, b).unwrap();
                    let ey = t.embed(y, a, b).unwrap();
                    assert_eq!(t.embed(fa.add(x, y), a, b).unwrap(), fb.add(ex, ey));
                    assert_eq!(t.embed(fa.mul(x, y), a, b).unwrap(), fb.mul(ex, ey));
                }
            }
        }
    }

    #[test]
    fn composite_equals_direct() {
        let t = FieldTower::new(2, 8).unwrap();
        for x in t.field(2).unwrap().elements() {
            let via = t.embed(t.embed(x, 2, 4).unwrap(), 4, 8).unwrap();
            assert_eq!(via, t.embed(x, 2, 8).unwrap());
        }
        let t3 = FieldTower::new(3, 4).unwrap();
        for x in t3.field(1).unwrap().elements() {
            let via = t3.embed(t3.embed(x, 1, 2).unwrap(), 2, 4).unwrap();
            assert_eq!(via, t3.embed(x, 1, 4).unwrap());
        }
    }

    #[test]
    fn non_divisible_degrees_rejected() {
        let t = FieldTower::new(2, 6).unwrap();
        assert!(t.embed(1, 2, 3).is_err());
        assert!(t.embed(1, 4, 6).is_err());
    }
}
