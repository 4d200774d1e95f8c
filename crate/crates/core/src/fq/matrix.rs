//! Dense matrices over a finite field, stored row-major in flat slices.

use serde::{Deserialize, Serialize};

use super::field::{Elem, Field};
use crate::error::{Error, Result};

pub fn identity(n: usize) -> Vec<Elem> {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

pub fn is_identity(n: usize, a: &[Elem]) -> bool {
    (0..n).all(|i| (0..n).all(|j| a[i * n + j] == (i == j) as Elem))
}

#[inline]
pub fn mul_into(f: &Field, n: usize, a: &[Elem], b: &[Elem], out: &mut [Elem]) {
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0;
            for t in 0..n {
                acc = f.add(acc, f.mul(a[i * n + t], b[t * n + j]));
            }
            out[i * n + j] = acc;
        }
    }
}

pub fn mul(f: &Field, n: usize, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut out = vec![0; n * n];
    mul_into(f, n, a, b, &mut out);
    out
}

/// Rectangular product: (r × m) · (m × c).
pub fn mul_rect(f: &Field, r: usize, m: usize, c: usize, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut out = vec![0; r * c];
    for i in 0..r {
        for j in 0..c {
            let mut acc = 0;
            for t in 0..m {
                acc = f.add(acc, f.mul(a[i * m + t], b[t * c + j]));
            }
            out[i * c + j] = acc;
        }
    }
    out
}

pub fn transpose(rows: usize, cols: usize, a: &[Elem]) -> Vec<Elem> {
    let mut out = vec![0; rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            out[j * rows + i] = a[i * cols + j];
        }
    }
    out
}

pub fn det(f: &Field, n: usize, a: &[Elem]) -> Elem {
    match n {
        0 => 1,
        1 => a[0],
        2 => f.sub(f.mul(a[0], a[3]), f.mul(a[1], a[2])),
        _ => {
            let mut m = a.to_vec();
            let mut d = 1;
            for col in 0..n {
                let Some(piv) = (col..n).find(|&r| m[r * n + col] != 0) else {
                    return 0;
                };
                if piv != col {
                    for j in 0..n {
                        m.swap(piv * n + j, col * n + j);
                    }
                    d = f.neg(d);
                }
                let pv = m[col * n + col];
                d = f.mul(d, pv);
                let inv = f.inv(pv).unwrap();
                for r in col + 1..n {
                    let factor = f.mul(m[r * n + col], inv);
                    if factor == 0 {
                        continue;
                    }
                    for j in col..n {
                        let v = f.mul(factor, m[col * n + j]);
                        m[r * n + j] = f.sub(m[r * n + j], v);
                    }
                }
            }
            d
        }
    }
}

/// Reduced row echelon form of a `rows × cols` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Vec<Elem>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn rref(f: &Field, rows: usize, cols: usize, a: &[Elem]) -> Rref {
    let mut m = a.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                m.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(m[r * cols + c]).unwrap();
        for j in 0..cols {
            m[r * cols + j] = f.mul(m[r * cols + j], inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = m[i * cols + c];
            if factor == 0 {
                continue;
            }
            for j in 0..cols {
                let v = f.mul(factor, m[r * cols + j]);
                m[i * cols + j] = f.sub(m[i * cols + j], v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: m, rank: r, pivots }
}

pub fn rank(f: &Field, rows: usize, cols: usize, a: &[Elem]) -> usize {
    rref(f, rows, cols, a).rank
}

pub fn inverse(f: &Field, n: usize, a: &[Elem]) -> Option<Vec<Elem>> {
    if n == 2 {
        let d = det(f, 2, a);
        let di = f.inv(d)?;
        return Some(vec![
            f.mul(a[3], di),
            f.mul(f.neg(a[1]), di),
            f.mul(f.neg(a[2]), di),
            f.mul(a[0], di),
        ]);
    }
    let mut aug = vec![0; n * 2 * n];
    for i in 0..n {
        for j in 0..n {
            aug[i * 2 * n + j] = a[i * n + j];
        }
        aug[i * 2 * n + n + i] = 1;
    }
    let red = rref(f, n, 2 * n, &aug);
    if red.pivots.len() < n || red.pivots[n - 1] != n - 1 {
        return None;
    }
    let mut out = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = red.matrix[i * 2 * n + n + j];
        }
    }
    Some(out)
}

/// `a - λ·I`.
pub fn shift(f: &Field, n: usize, a: &[Elem], lambda: Elem) -> Vec<Elem> {
    let mut m = a.to_vec();
    for i in 0..n {
        m[i * n + i] = f.sub(m[i * n + i], lambda);
    }
    m
}

/// Characteristic polynomial det(x·I − a), monic, little-endian.
pub fn charpoly(f: &Field, n: usize, a: &[Elem]) -> Vec<Elem> {
    match n {
        1 => vec![f.neg(a[0]), 1],
        2 => {
            let tr = f.add(a[0], a[3]);
            vec![det(f, 2, a), f.neg(tr), 1]
        }
        _ => hessenberg_charpoly(f, n, a),
    }
}

fn hessenberg_charpoly(f: &Field, n: usize, a: &[Elem]) -> Vec<Elem> {
    // reduce to upper Hessenberg form by similarity
    let mut h = a.to_vec();
    for col in 0..n.saturating_sub(2) {
        let Some(piv) = (col + 1..n).find(|&r| h[r * n + col] != 0) else {
            continue;
        };
        if piv != col + 1 {
            let r = col + 1;
            for j in 0..n {
                h.swap(piv * n + j, r * n + j);
            }
            for i in 0..n {
                h.swap(i * n + piv, i * n + r);
            }
        }
        let pv = h[(col + 1) * n + col];
        let inv = f.inv(pv).unwrap();
        for r in col + 2..n {
            let factor = f.mul(h[r * n + col], inv);
            if factor == 0 {
                continue;
            }
            for j in 0..n {
                let v = f.mul(factor, h[(col + 1) * n + j]);
                h[r * n + j] = f.sub(h[r * n + j], v);
            }
            for i in 0..n {
                let v = f.mul(factor, h[i * n + r]);
                h[i * n + col + 1] = f.add(h[i * n + col + 1], v);
            }
        }
    }
    // p_0 = 1; p_{m} = (x - h_mm) p_{m-1} - sum_{i<m} h_{i,m} (prod_{j=i+1}^{m} h_{j,j-1}) p_{i-1}
    let mut polys: Vec<Vec<Elem>> = vec![vec![1]];
    for m in 0..n {
        let prev = &polys[m];
        let mut next = vec![0; m + 2];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = f.add(next[i + 1], c);
            next[i] = f.sub(next[i], f.mul(h[m * n + m], c));
        }
        let mut prod = 1;
        for i in (0..m).rev() {
            prod = f.mul(prod, h[(i + 1) * n + i]);
            let coef = f.mul(h[i * n + m], prod);
            if coef == 0 {
                continue;
            }
            for (t, &c) in polys[i].iter().enumerate() {
                next[t] = f.sub(next[t], f.mul(coef, c));
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// An n×n matrix over a field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatrixFq {
    pub n: usize,
    pub entries: Vec<Elem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatOp {
    Mul,
    Inv,
    Det,
    Rref,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatResult {
    Matrix(MatrixFq),
    Scalar(Elem),
}

impl MatrixFq {
    pub fn new(n: usize, entries: Vec<Elem>) -> Result<MatrixFq> {
        if entries.len() != n * n {
            return Err(Error::Dimension(format!("{} entries for a {n}x{n} matrix", entries.len())));
        }
        Ok(MatrixFq { n, entries })
    }

    pub fn identity(n: usize) -> MatrixFq {
        MatrixFq { n, entries: identity(n) }
    }

    pub fn diag(values: &[Elem]) -> MatrixFq {
        let n = values.len();
        let mut entries = vec![0; n * n];
        for (i, &v) in values.iter().enumerate() {
            entries[i * n + i] = v;
        }
        MatrixFq { n, entries }
    }

    pub fn mul(&self, f: &Field, other: &MatrixFq) -> Result<MatrixFq> {
        if self.n != other.n {
            return Err(Error::Dimension(format!("{} vs {}", self.n, other.n)));
        }
        Ok(MatrixFq { n: self.n, entries: mul(f, self.n, &self.entries, &other.entries) })
    }

    pub fn inv(&self, f: &Field) -> Result<MatrixFq> {
        inverse(f, self.n, &self.entries)
            .map(|entries| MatrixFq { n: self.n, entries })
            .ok_or(Error::Singular)
    }

    pub fn det(&self, f: &Field) -> Elem {
        det(f, self.n, &self.entries)
    }

    pub fn rref(&self, f: &Field) -> MatrixFq {
        MatrixFq { n: self.n, entries: rref(f, self.n, self.n, &self.entries).matrix }
    }
}

/// Dispatch for the four basic matrix operations; `b` is used only by `Mul`.
pub fn mat_ops(f: &Field, a: &MatrixFq, b: Option<&MatrixFq>, op: MatOp) -> Result<MatResult> {
    match op {
        MatOp::Mul => {
            let b = b.ok_or_else(|| Error::Dimension("mul needs a second operand".into()))?;
            a.mul(f, b).map(MatResult::Matrix)
        }
        MatOp::Inv => a.inv(f).map(MatResult::Matrix),
        MatOp::Det => Ok(MatResult::Scalar(a.det(f))),
        MatOp::Rref => Ok(MatResult::Matrix(a.rref(f))),
    }
}
