//! Dixon–Schneider character tables over F_ℓ.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::classfn::ClassFunction;
use super::ell::{inv_mod, mul_mod, EllContext};
use crate::error::{Error, Result};
use crate::fq::{make_field, matrix, Field};
use crate::group::GroupTable;

/// a[i][j][k] = #{(x, y) ∈ C_i × C_j : xy = z_k}, stored flat as ((i·r)+j)·r+k.
pub fn class_mult_coefficients(group: &GroupTable) -> Vec<u64> {
    let classes = group.classes();
    let r = classes.len();
    let inverses: Vec<usize> = (0..group.order()).map(|x| group.inv_idx(x)).collect();
    let mut a = vec![0u64; r * r * r];
    for (k, &z) in classes.representatives.iter().enumerate() {
        for (x, &xi) in inverses.iter().enumerate() {
            let i = classes.class_of[x] as usize;
            let j = classes.class_of[group.mul_idx(xi, z)] as usize;
            a[(i * r + j) * r + k] += 1;
        }
    }
    a
}

/// Irreducible characters of one group, with values in F_ℓ.
#[derive(Clone, Debug, Serialize)]
pub struct CharTableModEll {
    pub ell: u64,
    pub zeta: u64,
    pub seed: u64,
    pub group_order: u64,
    pub class_sizes: Vec<u64>,
    #[serde(skip)]
    pub inverse: Vec<usize>,
    pub degrees: Vec<u64>,
    #[serde(rename = "values")]
    pub rows: Vec<ClassFunction>,
}

/// Subspace of F_ℓ^r in reduced row echelon form.
struct Space {
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

fn echelon(f: &Field, r: usize, vectors: &[Vec<u32>]) -> Space {
    let flat: Vec<u32> = vectors.iter().flatten().copied().collect();
    let red = matrix::rref(f, vectors.len(), r, &flat);
    let basis = (0..red.rank).map(|i| red.matrix[i * r..(i + 1) * r].to_vec()).collect();
    Space { basis, pivots: red.pivots }
}

fn apply(f: &Field, r: usize, m: &[u32], v: &[u32]) -> Vec<u32> {
    (0..r)
        .map(|j| (0..r).fold(0, |acc, k| f.add(acc, f.mul(m[j * r + k], v[k]))))
        .collect()
}

/// Split `space` into eigenspaces of the operator `m`.
fn split(f: &Field, r: usize, m: &[u32], space: &Space) -> Vec<Space> {
    let d = space.basis.len();
    let images: Vec<Vec<u32>> = space.basis.iter().map(|b| apply(f, r, m, b)).collect();
    // restricted matrix, column t = coordinates of m·b_t
    let mut a = vec![0; d * d];
    for (t, img) in images.iter().enumerate() {
        for (j, &p) in space.pivots.iter().enumerate() {
            a[j * d + t] = img[p];
        }
    }
    let cp = matrix::charpoly(f, d, &a);
    let roots = f.roots(&cp);
    if roots.len() == 1 {
        return vec![Space { basis: space.basis.clone(), pivots: space.pivots.clone() }];
    }
    let mut out = Vec::new();
    for lambda in roots {
        let shifted = matrix::shift(f, d, &a, lambda);
        let red = matrix::rref(f, d, d, &shifted);
        let free: Vec<usize> = (0..d).filter(|c| !red.pivots.contains(c)).collect();
        let mut vectors = Vec::new();
        for &fc in &free {
            let mut coords = vec![0; d];
            coords[fc] = 1;
            for (row, &pc) in red.pivots.iter().enumerate() {
                coords[pc] = f.neg(red.matrix[row * d + fc]);
            }
            let mut v = vec![0; r];
            for (t, &c) in coords.iter().enumerate() {
                if c != 0 {
                    for (x, &b) in v.iter_mut().zip(&space.basis[t]) {
                        *x = f.add(*x, f.mul(c, b));
                    }
                }
            }
            vectors.push(v);
        }
        out.push(echelon(f, r, &vectors));
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

impl CharTableModEll {
    /// Build the table of `group` in context `ctx`; `seed` drives the random
    /// class-matrix combinations used when single class matrices do not split.
    pub fn compute(group: &GroupTable, ctx: &EllContext, seed: u64) -> Result<CharTableModEll> {
        ctx.check_valid_for(group.order() as u128, group.exponent())?;
        if let Some(parts) = group.factor_tables() {
            let tables: Vec<CharTableModEll> =
                parts.iter().map(|p| CharTableModEll::compute(p, ctx, seed)).collect::<Result<_>>()?;
            return Ok(CharTableModEll::tensor(&tables, group, ctx, seed));
        }
        let classes = group.classes();
        let r = classes.len();
        let ell = ctx.ell;
        let f = make_field(ell, 1)
            .map_err(|_| Error::Unsupported(format!("character tables need ell <= 2^20, got {ell}")))?;
        let a = class_mult_coefficients(group);
        let class_matrix = |i: usize| -> Vec<u32> {
            let mut m = vec![0u32; r * r];
            for j in 0..r {
                for k in 0..r {
                    m[j * r + k] = (a[(i * r + j) * r + k] % ell) as u32;
                }
            }
            m
        };
        let mut order: Vec<usize> = (1..r).collect();
        order.sort_by_key(|&i| (classes.sizes[i], i));
        let full: Vec<Vec<u32>> = (0..r).map(|i| (0..r).map(|j| (i == j) as u32).collect()).collect();
        let mut spaces = vec![echelon(&f, r, &full)];
        let done = |s: &[Space]| s.iter().all(|x| x.basis.len() == 1);
        for &i in &order {
            if done(&spaces) {
                break;
            }
            let m = class_matrix(i);
            spaces = spaces
                .into_iter()
                .flat_map(|s| if s.basis.len() == 1 { vec![s] } else { split(&f, r, &m, &s) })
                .collect();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut attempts = 0;
        while !done(&spaces) {
            attempts += 1;
            if attempts > 64 {
                return Err(Error::SplittingFailed(spaces.iter().filter(|s| s.basis.len() > 1).count()));
            }
            let mut m = vec![0u32; r * r];
            for i in 1..r {
                let c: u32 = rng.gen_range(0..ell as u32);
                let mi = class_matrix(i);
                for (x, y) in m.iter_mut().zip(&mi) {
                    *x = f.add(*x, f.mul(c, *y));
                }
            }
            spaces = spaces
                .into_iter()
                .flat_map(|s| if s.basis.len() == 1 { vec![s] } else { split(&f, r, &m, &s) })
                .collect();
        }
        if spaces.len() != r {
            return Err(Error::SplittingFailed(r - spaces.len()));
        }
        let order_g = group.order() as u64;
        let sizes: Vec<u64> = classes.sizes.clone();
        let mut rows = Vec::with_capacity(r);
        let mut degrees = Vec::with_capacity(r);
        for s in spaces {
            let w = &s.basis[0];
            let w0 = w[0] as u64;
            if w0 == 0 {
                return Err(Error::SplittingFailed(0));
            }
            let w0i = inv_mod(w0, ell);
            let omega: Vec<u64> = w.iter().map(|&x| mul_mod(x as u64, w0i, ell)).collect();
            let mut sum = 0u64;
            for k in 0..r {
                let t = mul_mod(omega[k], omega[classes.inverse[k]], ell);
                sum = (sum + mul_mod(t, inv_mod(sizes[k] % ell, ell), ell)) % ell;
            }
            let d2 = mul_mod(order_g % ell, inv_mod(sum, ell), ell);
            let deg = (1..=isqrt(order_g))
                .find(|&d| mul_mod(d, d, ell) == d2)
                .ok_or(Error::SplittingFailed(0))?;
            let values = (0..r)
                .map(|k| mul_mod(mul_mod(deg, omega[k], ell), inv_mod(sizes[k] % ell, ell), ell))
                .collect();
            rows.push(ClassFunction::new(ell, values));
            degrees.push(deg);
        }
        let mut table = CharTableModEll {
            ell,
            zeta: ctx.zeta,
            seed,
            group_order: order_g,
            class_sizes: sizes,
            inverse: classes.inverse.clone(),
            degrees,
            rows,
        };
        table.sort_rows();
        if table.degrees.iter().map(|d| d * d).sum::<u64>() != order_g {
            return Err(Error::SplittingFailed(0));
        }
        Ok(table)
    }

    fn sort_rows(&mut self) {
        let mut pairs: Vec<(u64, ClassFunction)> =
            self.degrees.drain(..).zip(self.rows.drain(..)).collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.values.cmp(&b.1.values)));
        for (d, row) in pairs {
            self.degrees.push(d);
            self.rows.push(row);
        }
    }

    /// Table of a direct product from its factor tables; the class order is
    /// that of the product group (first factor least significant).
    pub fn tensor(parts: &[CharTableModEll], group: &GroupTable, ctx: &EllContext, seed: u64) -> CharTableModEll {
        let ell = ctx.ell;
        let class_counts: Vec<usize> = parts.iter().map(|p| p.class_sizes.len()).collect();
        let row_counts: Vec<usize> = parts.iter().map(|p| p.rows.len()).collect();
        let digits = |mut x: usize, radix: &[usize]| -> Vec<usize> {
            radix
                .iter()
                .map(|&n| {
                    let d = x % n;
                    x /= n;
                    d
                })
                .collect()
        };
        let total_classes: usize = class_counts.iter().product();
        let total_rows: usize = row_counts.iter().product();
        let class_digits: Vec<Vec<usize>> = (0..total_classes).map(|c| digits(c, &class_counts)).collect();
        let mut degrees = Vec::with_capacity(total_rows);
        let mut rows = Vec::with_capacity(total_rows);
        for combo in 0..total_rows {
            let ds = digits(combo, &row_counts);
            degrees.push(parts.iter().zip(&ds).map(|(p, &i)| p.degrees[i]).product());
            let values = class_digits
                .iter()
                .map(|cd| {
                    parts
                        .iter()
                        .zip(&ds)
                        .zip(cd)
                        .fold(1u64, |acc, ((p, &i), &c)| mul_mod(acc, p.rows[i].values[c], ell))
                })
                .collect();
            rows.push(ClassFunction::new(ell, values));
        }
        let classes = group.classes();
        let mut table = CharTableModEll {
            ell,
            zeta: ctx.zeta,
            seed,
            group_order: group.order() as u64,
            class_sizes: classes.sizes.clone(),
            inverse: classes.inverse.clone(),
            degrees,
            rows,
        };
        table.sort_rows();
        table
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn trivial_index(&self) -> Option<usize> {
        self.rows.iter().position(|r| r.values.iter().all(|&v| v == 1))
    }

    /// Row orthogonality ⟨χ_a, χ_b⟩ = δ_ab and column orthogonality, in F_ℓ.
    pub fn orthogonality_holds(&self) -> bool {
        let ell = self.ell;
        let r = self.class_sizes.len();
        let g_inv = inv_mod(self.group_order % ell, ell);
        for (a, ra) in self.rows.iter().enumerate() {
            for (b, rb) in self.rows.iter().enumerate() {
                let mut s = 0;
                for k in 0..r {
                    let t = mul_mod(ra.values[k], rb.values[self.inverse[k]], ell);
                    s = (s + mul_mod(self.class_sizes[k] % ell, t, ell)) % ell;
                }
                if mul_mod(s, g_inv, ell) != (a == b) as u64 {
                    return false;
                }
            }
        }
        for i in 0..r {
            for j in 0..r {
                let mut s = 0;
                for row in &self.rows {
                    s = (s + mul_mod(row.values[i], row.values[self.inverse[j]], ell)) % ell;
                }
                let expect = if i == j { (self.group_order / self.class_sizes[i]) % ell } else { 0 };
                if s != expect {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("table serializes")
    }
}

pub fn character_table(group: &GroupTable, ctx: &EllContext) -> Result<CharTableModEll> {
    CharTableModEll::compute(group, ctx, 0)
}
