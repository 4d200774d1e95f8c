//! Similarity classes of small matrices by their primary decomposition.
//!
//! A matrix over F is determined up to conjugacy by, for each monic
//! irreducible factor f of its characteristic polynomial, the partition
//! recording the sizes of the f-primary Jordan blocks. The label stores
//! exactly that data, so two invertible matrices are conjugate in GL_n(F)
//! iff their labels agree. Supported whenever the characteristic polynomial
//! has at most one irreducible factor of degree > 1 and that factor has
//! degree ≤ 3 (always true for n ≤ 3).

use crate::error::{Error, Result};
use crate::fq::{matrix, Elem, Field};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimilarityLabel {
    /// (irreducible factor, little-endian; partition in non-increasing order)
    pub parts: Vec<(Vec<Elem>, Vec<usize>)>,
}

fn poly_div_linear(f: &Field, p: &[Elem], root: Elem) -> Vec<Elem> {
    // synthetic division by (x - root); p is monic, root is a root
    let d = p.len() - 1;
    let mut out = vec![0; d];
    let mut carry = 0;
    for i in (0..d).rev() {
        carry = f.add(p[i + 1], f.mul(carry, root));
        out[i] = carry;
    }
    out
}

/// Evaluate the polynomial `p` at the matrix `a`.
fn poly_at(f: &Field, n: usize, p: &[Elem], a: &[Elem]) -> Vec<Elem> {
    let mut acc = vec![0; n * n];
    for &c in p.iter().rev() {
        acc = matrix::mul(f, n, &acc, a);
        for i in 0..n {
            acc[i * n + i] = f.add(acc[i * n + i], c);
        }
    }
    acc
}

/// Irreducible factorization of a monic polynomial of the supported shape.
fn factor(f: &Field, p: &[Elem]) -> Result<Vec<(Vec<Elem>, usize)>> {
    let mut rest = p.to_vec();
    let mut out: Vec<(Vec<Elem>, usize)> = Vec::new();
    loop {
        if rest.len() == 1 {
            break;
        }
        let roots = f.roots(&rest);
        let Some(&r) = roots.first() else { break };
        rest = poly_div_linear(f, &rest, r);
        let lin = vec![f.neg(r), 1];
        match out.iter_mut().find(|(g, _)| *g == lin) {
            Some(entry) => entry.1 += 1,
            None => out.push((lin, 1)),
        }
    }
    match rest.len() - 1 {
        0 => {}
        2 | 3 => out.push((rest, 1)),
        d => {
            return Err(Error::Unsupported(format!(
                "similarity labels need a root-free cofactor of degree <= 3, got degree {d}"
            )))
        }
    }
    out.sort();
    Ok(out)
}

pub fn similarity_label(f: &Field, n: usize, a: &[Elem]) -> Result<SimilarityLabel> {
    let cp = matrix::charpoly(f, n, a);
    let mut parts = Vec::new();
    for (g, mult) in factor(f, &cp)? {
        let deg = g.len() - 1;
        let ga = poly_at(f, n, &g, a);
        let mut power = matrix::identity(n);
        let mut prev_rank = n;
        // at_least[j] = number of blocks of size > j
        let mut at_least = Vec::new();
        for _ in 0..mult {
            power = matrix::mul(f, n, &power, &ga);
            let r = matrix::rank(f, n, n, &power);
            at_least.push((prev_rank - r) / deg);
            prev_rank = r;
        }
        let mut partition = Vec::new();
        for j in 0..at_least.len() {
            let next = at_least.get(j + 1).copied().unwrap_or(0);
            for _ in 0..at_least[j] - next {
                partition.push(j + 1);
            }
        }
        partition.sort_unstable_by(|x, y| y.cmp(x));
        parts.push((g, partition));
    }
    Ok(SimilarityLabel { parts })
}

/// Order of the centralizer in GL_n(F_Q) of a matrix with the given label.
pub fn centralizer_order(big_q: u128, label: &SimilarityLabel) -> u128 {
    let mut total: u128 = 1;
    for (g, partition) in &label.parts {
        let r = big_q.pow((g.len() - 1) as u32);
        let largest = partition.first().copied().unwrap_or(0);
        let conj: Vec<u32> = (1..=largest).map(|j| partition.iter().filter(|&&p| p >= j).count() as u32).collect();
        let mut exponent: u32 = conj.iter().map(|c| c * c).sum();
        let mut factor: u128 = 1;
        for size in 1..=largest {
            let m = partition.iter().filter(|&&p| p == size).count() as u32;
            for j in 1..=m {
                factor *= r.pow(j) - 1;
                exponent -= j;
            }
        }
        total *= factor * r.pow(exponent);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::make_field;

    #[test]
    fn gl2_centralizers() {
        let f = make_field(3, 1).unwrap();
        let q = 3u128;
        let scalar = similarity_label(&f, 2, &[2, 0, 0, 2]).unwrap();
        assert_eq!(centralizer_order(q, &scalar), 48);
        let jordan = similarity_label(&f, 2, &[1, 1, 0, 1]).unwrap();
        assert_eq!(centralizer_order(q, &jordan), 6);
        let split = similarity_label(&f, 2, &[1, 0, 0, 2]).unwrap();
        assert_eq!(centralizer_order(q, &split), 4);
        // x^2 + 1 is irreducible over F_3
        let elliptic = similarity_label(&f, 2, &[0, 2, 1, 0]).unwrap();
        assert_eq!(centralizer_order(q, &elliptic), 8);
        assert_ne!(scalar, jordan);
    }

    #[test]
    fn jordan_type_in_dimension_three() {
        let f = make_field(2, 1).unwrap();
        let j3 = similarity_label(&f, 3, &[1, 1, 0, 0, 1, 1, 0, 0, 1]).unwrap();
        assert_eq!(j3.parts, vec![(vec![1, 1], vec![3])]);
        let j21 = similarity_label(&f, 3, &[1, 1, 0, 0, 1, 0, 0, 0, 1]).unwrap();
        assert_eq!(j21.parts, vec![(vec![1, 1], vec![2, 1])]);
        // |GL_3(F_2)| / |C(J_3)| = 168 / 4 = 42 elements of order 4
        assert_eq!(centralizer_order(2, &j3), 4);
        assert_eq!(centralizer_order(2, &j21), 8);
    }
}
