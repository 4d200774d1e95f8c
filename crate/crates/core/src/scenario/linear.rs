//! Lines, subspaces and invariant-line counting in F_Q^n.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fq::{matrix, Elem, Field};

/// Dense-index cap for the normalized-vector table.
const LINE_TABLE_CAP: u64 = 1 << 24;

/// Scale `v` so its first nonzero entry is 1. Returns false for v = 0.
pub fn normalize(f: &Field, v: &mut [Elem]) -> bool {
    let Some(&lead) = v.iter().find(|&&x| x != 0) else { return false };
    if lead != 1 {
        let inv = f.inv(lead).unwrap();
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
    }
    true
}

pub fn apply(f: &Field, n: usize, g: &[Elem], v: &[Elem], out: &mut [Elem]) {
    for i in 0..n {
        let mut acc = 0;
        for j in 0..n {
            acc = f.add(acc, f.mul(g[i * n + j], v[j]));
        }
        out[i] = acc;
    }
}

/// All lines of F_Q^n with a dense lookup from normalized vectors.
#[derive(Debug)]
pub struct LineSet {
    pub n: usize,
    pub reps: Vec<Vec<Elem>>,
    dense: Vec<u32>,
    big_q: u64,
}

impl LineSet {
    pub fn new(f: &Field, n: usize) -> Result<LineSet> {
        let big_q = f.order() as u64;
        let total = big_q.checked_pow(n as u32).filter(|&t| t <= LINE_TABLE_CAP).ok_or_else(|| {
            Error::CapExceeded { what: format!("vectors of F_{big_q}^{n}"), predicted: (big_q as u128).pow(n as u32), cap: LINE_TABLE_CAP as u128 }
        })?;
        let mut dense = vec![u32::MAX; total as usize];
        let mut reps = Vec::new();
        for code in 1..total {
            let v = Self::decode(code, n, big_q);
            if v.iter().find(|&&x| x != 0) == Some(&1) {
                dense[code as usize] = reps.len() as u32;
                reps.push(v);
            }
        }
        Ok(LineSet { n, reps, dense, big_q })
    }

    fn decode(mut code: u64, n: usize, big_q: u64) -> Vec<Elem> {
        (0..n)
            .map(|_| {
                let x = code % big_q;
                code /= big_q;
                x as Elem
            })
            .collect()
    }

    fn encode(&self, v: &[Elem]) -> usize {
        v.iter().rev().fold(0u64, |acc, &x| acc * self.big_q + x as u64) as usize
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Index of the line through a normalized nonzero vector.
    pub fn index_of(&self, v: &[Elem]) -> usize {
        self.dense[self.encode(v)] as usize
    }

    /// Index of g·L.
    pub fn act(&self, f: &Field, g: &[Elem], line: usize) -> usize {
        let mut w = vec![0; self.n];
        apply(f, self.n, g, &self.reps[line], &mut w);
        normalize(f, &mut w);
        self.index_of(&w)
    }
}

/// Reduced row echelon d×n matrices, one per d-dimensional subspace.
pub fn grassmannian(f: &Field, n: usize, d: usize) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    let big_q = f.order() as u64;
    let mut pivots = Vec::new();
    fn choose(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, all: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            all.push(cur.clone());
            return;
        }
        for c in start..n {
            cur.push(c);
            choose(c + 1, n, d, cur, all);
            cur.pop();
        }
    }
    choose(0, n, d, &mut Vec::new(), &mut pivots);
    for piv in pivots {
        let free: Vec<(usize, usize)> = (0..d)
            .flat_map(|i| ((piv[i] + 1)..n).filter(|c| !piv.contains(c)).map(move |c| (i, c)))
            .collect();
        let count = big_q.pow(free.len() as u32);
        for mut code in 0..count {
            let mut m = vec![0; d * n];
            for (i, &p) in piv.iter().enumerate() {
                m[i * n + p] = 1;
            }
            for &(i, c) in &free {
                m[i * n + c] = (code % big_q) as Elem;
                code /= big_q;
            }
            out.push(m);
        }
    }
    out
}

/// Canonical basis of g·W for W given by a d×n row basis.
pub fn act_subspace(f: &Field, n: usize, d: usize, g: &[Elem], w: &[Elem]) -> Vec<Elem> {
    let gt = matrix::transpose(n, n, g);
    let img = matrix::mul_rect(f, d, n, n, w, &gt);
    matrix::rref(f, d, n, &img).matrix
}

/// Whether the row space of `a` (da×n) lies in that of `b` (db×n).
pub fn contained_in(f: &Field, n: usize, a: &[Elem], da: usize, b: &[Elem], db: usize) -> bool {
    let mut stacked = b.to_vec();
    stacked.extend_from_slice(a);
    matrix::rank(f, da + db, n, &stacked) == db
}

fn is_upper_triangular(n: usize, g: &[Elem]) -> bool {
    (1..n).all(|i| (0..i).all(|j| g[i * n + j] == 0))
}

/// Distinct eigenvalues of g lying in the field.
pub fn eigenvalues(f: &Field, n: usize, g: &[Elem]) -> Vec<Elem> {
    if is_upper_triangular(n, g) {
        let mut d: Vec<Elem> = (0..n).map(|i| g[i * n + i]).collect();
        d.sort_unstable();
        d.dedup();
        d
    } else {
        f.roots(&matrix::charpoly(f, n, g))
    }
}

pub fn is_scalar(n: usize, g: &[Elem]) -> bool {
    (0..n).all(|i| (0..n).all(|j| if i == j { g[i * n + j] == g[0] } else { g[i * n + j] == 0 }))
}

/// Number of g-stable lines in F_Q^n.
pub fn stable_line_count(f: &Field, n: usize, g: &[Elem]) -> u64 {
    let big_q = f.order() as u64;
    if n == 1 {
        return 1;
    }
    if is_scalar(n, g) {
        return (big_q.pow(n as u32) - 1) / (big_q - 1);
    }
    if n == 2 {
        return eigenvalues(f, 2, g).len() as u64;
    }
    eigenvalues(f, n, g)
        .into_iter()
        .map(|l| {
            let null = n - matrix::rank(f, n, n, &matrix::shift(f, n, g, l));
            (big_q.pow(null as u32) - 1) / (big_q - 1)
        })
        .sum()
}

/// Kernel basis (as rows) of an n×n matrix.
fn kernel(f: &Field, n: usize, a: &[Elem]) -> Vec<Vec<Elem>> {
    let red = matrix::rref(f, n, n, a);
    (0..n)
        .filter(|c| !red.pivots.contains(c))
        .map(|fc| {
            let mut v = vec![0; n];
            v[fc] = 1;
            for (row, &pc) in red.pivots.iter().enumerate() {
                v[pc] = f.neg(red.matrix[row * n + fc]);
            }
            v
        })
        .collect()
}

/// Normalized representatives of every g-stable line.
pub fn stable_lines(f: &Field, n: usize, g: &[Elem]) -> Vec<Vec<Elem>> {
    let big_q = f.order() as u64;
    let mut out = Vec::new();
    for l in eigenvalues(f, n, g) {
        let basis = kernel(f, n, &matrix::shift(f, n, g, l));
        let m = basis.len();
        for code in 1..big_q.pow(m as u32) {
            let mut rest = code;
            let mut v = vec![0; n];
            for b in &basis {
                let c = (rest % big_q) as Elem;
                rest /= big_q;
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = f.add(*x, f.mul(c, y));
                }
            }
            if v.iter().find(|&&x| x != 0) == Some(&1) {
                out.push(v);
            }
        }
    }
    out
}

/// Matrix of the map induced by g on F^n / ⟨v⟩, for normalized v.
pub fn quotient_map(f: &Field, n: usize, g: &[Elem], v: &[Elem]) -> Vec<Elem> {
    let p = v.iter().position(|&x| x != 0).expect("nonzero");
    let others: Vec<usize> = (0..n).filter(|&i| i != p).collect();
    let m = n - 1;
    let mut out = vec![0; m * m];
    let mut w = vec![0; n];
    for (col, &i) in others.iter().enumerate() {
        let mut e = vec![0; n];
        e[i] = 1;
        apply(f, n, g, &e, &mut w);
        let c = w[p];
        for (row, &j) in others.iter().enumerate() {
            out[row * m + col] = f.sub(w[j], f.mul(c, v[j]));
        }
    }
    out
}

/// Number of complete flags stabilized by g.
pub fn stable_flag_count(f: &Field, n: usize, g: &[Elem]) -> u64 {
    match n {
        0 | 1 => 1,
        2 => stable_line_count(f, 2, g),
        _ => {
            if is_scalar(n, g) {
                let big_q = f.order() as u64;
                return (1..=n as u32).map(|i| (big_q.pow(i) - 1) / (big_q - 1)).product();
            }
            stable_lines(f, n, g)
                .iter()
                .map(|v| stable_flag_count(f, n - 1, &quotient_map(f, n, g, v)))
                .sum()
        }
    }
}

/// Number of ordered n-tuples of independent g-stable lines.
pub fn stable_frame_count(f: &Field, n: usize, g: &[Elem], total_frames: u64) -> u64 {
    if is_scalar(n, g) {
        return total_frames;
    }
    let lines = stable_lines(f, n, g);
    fn extend(f: &Field, n: usize, lines: &[Vec<Elem>], chosen: &[Elem], depth: usize) -> u64 {
        if depth == n {
            return 1;
        }
        lines
            .iter()
            .map(|l| {
                let mut trial = chosen.to_vec();
                trial.extend_from_slice(l);
                if matrix::rank(f, depth + 1, n, &trial) == depth + 1 {
                    extend(f, n, lines, &trial, depth + 1)
                } else {
                    0
                }
            })
            .sum()
    }
    extend(f, n, &lines, &[], 0)
}

/// Map from canonical keys to positions.
pub fn index_keys(keys: &[Vec<Elem>]) -> HashMap<Vec<Elem>, u32> {
    keys.iter().enumerate().map(|(i, k)| (k.clone(), i as u32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::make_field;

    #[test]
    fn grassmannian_counts() {
        let f = make_field(2, 1).unwrap();
        assert_eq!(grassmannian(&f, 3, 1).len(), 7);
        assert_eq!(grassmannian(&f, 3, 2).len(), 7);
        assert_eq!(grassmannian(&f, 4, 2).len(), 35);
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(grassmannian(&f5, 2, 1).len(), 6);
    }

    #[test]
    fn quotient_of_upper_triangular() {
        let f = make_field(3, 1).unwrap();
        let g = [1, 2, 0, 0, 2, 1, 0, 0, 1];
        let q = quotient_map(&f, 3, &g, &[1, 0, 0]);
        assert_eq!(q, vec![2, 1, 0, 1]);
    }

    #[test]
    fn stable_line_sweep_oracle() {
        let f = make_field(3, 1).unwrap();
        let lines = LineSet::new(&f, 3).unwrap();
        for g in [[1, 1, 0, 0, 1, 0, 0, 0, 2], [2, 0, 0, 0, 2, 0, 0, 0, 2], [0, 1, 0, 0, 0, 1, 1, 0, 0]] {
            let sweep = (0..lines.len()).filter(|&l| lines.act(&f, &g, l) == l).count() as u64;
            assert_eq!(stable_line_count(&f, 3, &g), sweep);
            assert_eq!(stable_lines(&f, 3, &g).len() as u64, sweep);
        }
    }
}
