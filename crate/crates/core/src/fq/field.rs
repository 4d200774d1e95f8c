use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::poly;
use crate::error::{Error, Result};

/// Largest supported field order.
pub const FIELD_CAP: u64 = 1 << 20;

/// Field orders up to this size get a full addition table.
const ADD_TABLE_CAP: u32 = 1024;

/// Serializable identity of a finite field F_{p^k}.
///
/// `modulus` is the monic irreducible defining polynomial, little-endian,
/// of length `k + 1`. It is the least such polynomial in lexicographic order
/// of its little-endian coefficient list (constant term compared first).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub k: u32,
    pub modulus: Vec<u32>,
}

/// Field elements are packed integers `sum c_i p^i` of their coefficient
/// vectors, so the packed value and the little-endian serialization agree.
pub type Elem = u32;

/// A finite field with precomputed log/exp tables.
///
/// The tables are derived from polynomial arithmetic on coefficient vectors;
/// [`Field::mul_poly`] is the portable reference path they must agree with.
pub struct Field {
    desc: FieldDescriptor,
    p: u32,
    order: u32,
    generator: Elem,
    pow_p: Vec<u32>,
    exp: Vec<Elem>,
    log: Vec<u32>,
    add: Option<Vec<u16>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.desc.p, self.desc.k)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.desc == other.desc
    }
}
impl Eq for Field {}

fn registry() -> &'static Mutex<HashMap<(u64, u32), Arc<Field>>> {
    static REG: OnceLock<Mutex<HashMap<(u64, u32), Arc<Field>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Canonical field of order `p^k`. Repeated calls share one instance.
pub fn make_field(p: u64, k: u32) -> Result<Arc<Field>> {
    if !poly::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::Unsupported("extension degree 0".into()));
    }
    let order = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
    if order > FIELD_CAP as u128 {
        return Err(Error::FieldTooLarge { p, k });
    }
    if let Some(f) = registry().lock().unwrap().get(&(p, k)) {
        return Ok(f.clone());
    }
    let field = Arc::new(Field::build(p as u32, k));
    let mut reg = registry().lock().unwrap();
    Ok(reg.entry((p, k)).or_insert(field).clone())
}

/// Field of order `q^k` where `q` is a prime power.
pub fn field_for(q: u64, k: u32) -> Result<Arc<Field>> {
    let (p, e) = prime_power(q).ok_or_else(|| Error::Unsupported(format!("{q} is not a prime power")))?;
    make_field(p, e * k)
}

/// Split `q = p^e`; `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let factors = poly::prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut e = 0;
    let mut m = q;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    Some((p, e))
}

fn canonical_modulus(p: u32, k: u32) -> Vec<u32> {
    if k == 1 {
        return vec![0, 1];
    }
    let total = (p as u64).pow(k);
    for t in 0..total {
        // digit 0 (most significant in t) is the constant term
        let mut coeffs = vec![0u32; k as usize + 1];
        let mut rest = t;
        for i in (0..k as usize).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[k as usize] = 1;
        if poly::is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    fn build(p: u32, k: u32) -> Field {
        let modulus = canonical_modulus(p, k);
        let order = p.pow(k);
        let pow_p: Vec<u32> = (0..=k).map(|i| p.pow(i)).collect();
        let mut field = Field {
            desc: FieldDescriptor { p: p as u64, k, modulus, },
            p,
            order,
            generator: 0,
            pow_p,
            exp: Vec::new(),
            log: Vec::new(),
            add: None,
        };
        let group_order = (order - 1) as u64;
        let factors = poly::prime_factors(group_order);
        let generator = (1..order)
            .find(|&g| {
                let gp = field.unpack(g);
                factors.iter().all(|&r| {
                    let h = poly::powmod(&gp, (group_order / r) as u128, &field.desc.modulus, p);
                    h != [1]
                })
            })
            .expect("multiplicative group is cyclic");
        field.generator = generator;

        let n = (order - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![u32::MAX; order as usize];
        let gp = field.unpack(generator);
        let mut cur = vec![1u32];
        for i in 0..n {
            let packed = field.pack(&cur);
            exp[i] = packed;
            log[packed as usize] = i as u32;
            cur = poly::mulmod(&cur, &gp, &field.desc.modulus, p);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        if n == 0 {
            exp[0] = 1;
        }
        field.exp = exp;
        field.log = log;

        if order <= ADD_TABLE_CAP && p != 2 && k > 1 {
            let q = order as usize;
            let mut table = vec![0u16; q * q];
            for a in 0..order {
                for b in 0..order {
                    table[a as usize * q + b as usize] = field.add_digits(a, b) as u16;
                }
            }
            field.add = Some(table);
        }
        field
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }
    pub fn characteristic(&self) -> u32 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.desc.k
    }
    pub fn order(&self) -> u32 {
        self.order
    }
    /// Canonical primitive element: the least packed value generating F^×.
    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order
    }

    pub fn unpack(&self, x: Elem) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.desc.k as usize);
        let mut rest = x;
        for _ in 0..self.desc.k {
            v.push(rest % self.p);
            rest /= self.p;
        }
        v
    }

    pub fn pack(&self, coeffs: &[u32]) -> Elem {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (c % self.p) * self.pow_p[i])
            .sum()
    }

    /// Little-endian coefficient list; this is the serialized form.
    pub fn coefficients(&self, x: Elem) -> Vec<u32> {
        self.unpack(x)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() > self.desc.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Dimension(format!(
                "coefficient list {coeffs:?} is not an element of {self:?}"
            )));
        }
        Ok(self.pack(coeffs))
    }

    /// The image of an integer under Z → F_p ⊂ F.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as u32
    }

    fn add_digits(&self, a: Elem, b: Elem) -> Elem {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for i in 0..self.desc.k as usize {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * self.pow_p[i];
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return a ^ b;
        }
        if self.desc.k == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        if let Some(t) = &self.add {
            return t[a as usize * self.order as usize + b as usize] as u32;
        }
        self.add_digits(a, b)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 || a == 0 {
            return a;
        }
        if self.desc.k == 1 {
            return self.p - a;
        }
        let mut rest = a;
        let mut out = 0;
        for i in 0..self.desc.k as usize {
            let d = rest % self.p;
            out += ((self.p - d) % self.p) * self.pow_p[i];
            rest /= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        let n = self.order - 1;
        let l = self.log[a as usize];
        Some(self.exp[((n - l) % n) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.order - 1) as u64;
        let l = self.log[a as usize] as u64;
        self.exp[((l * (e % n)) % n) as usize]
    }

    /// Discrete log to the canonical generator.
    pub fn log(&self, a: Elem) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.log[a as usize])
        }
    }

    pub fn exp(&self, i: u64) -> Elem {
        let n = (self.order - 1) as u64;
        self.exp[(i % n) as usize]
    }

    pub fn mult_order(&self, a: Elem) -> Option<u64> {
        let l = self.log(a)? as u64;
        let n = (self.order - 1) as u64;
        Some(n / num_integer::gcd(l, n))
    }

    /// Portable multiplication on coefficient vectors, independent of the
    /// log/exp tables.
    pub fn mul_poly(&self, a: Elem, b: Elem) -> Elem {
        let prod = poly::mulmod(&self.unpack(a), &self.unpack(b), &self.desc.modulus, self.p);
        self.pack(&prod)
    }

    /// `x^(|base|)` computed in this field; `base` must be a subfield.
    pub fn frobenius(&self, x: Elem, base: &Field) -> Result<Elem> {
        if base.p != self.p || self.desc.k % base.desc.k != 0 {
            return Err(Error::BadEmbedding {
                p: base.p as u64,
                from: base.desc.k,
                q: self.p as u64,
                to: self.desc.k,
            });
        }
        Ok(self.pow(x, base.order as u64))
    }

    /// Roots in this field of a polynomial with coefficients in this field.
    pub fn roots(&self, coeffs: &[Elem]) -> Vec<Elem> {
        self.elements().filter(|&x| self.eval(coeffs, x) == 0).collect()
    }

    pub fn eval(&self, coeffs: &[Elem], x: Elem) -> Elem {
        coeffs.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Elements a_0.. forming an F_p-basis of F (the powers of the class of x).
    pub fn additive_basis(&self) -> Vec<Elem> {
        (0..self.desc.k as usize).map(|i| self.pow_p[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_modulus_is_x() {
        let f = make_field(3, 1).unwrap();
        assert_eq!(f.order(), 3);
        assert_eq!(f.descriptor().modulus, vec![0, 1]);
    }

    #[test]
    fn f4_multiplicative_group_cyclic_of_order_3() {
        let f = make_field(2, 2).unwrap();
        assert_eq!(f.order(), 4);
        assert_eq!(f.mult_order(f.generator()), Some(3));
        for x in 1..4 {
            assert_eq!(f.pow(x, 3), 1);
        }
    }

    #[test]
    fn f27_enumeration_count() {
        let f = make_field(3, 3).unwrap();
        let all: std::collections::HashSet<_> = f.elements().collect();
        assert_eq!(all.len(), 27);
        // every element satisfies x^27 = x
        for x in f.elements() {
            assert_eq!(f.pow(x, 27), x);
        }
    }

    #[test]
    fn repeated_construction_is_identical() {
        let a = make_field(5, 2).unwrap();
        let b = make_field(5, 2).unwrap();
        assert_eq!(a.descriptor(), b.descriptor());
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn errors() {
        assert!(matches!(make_field(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(make_field(2, 21), Err(Error::FieldTooLarge { .. })));
        assert!(matches!(make_field(3, 13), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn tables_agree_with_polynomial_path() {
        for (p, k) in [(2, 3), (3, 2), (5, 2), (2, 4), (3, 3), (7, 2)] {
            let f = make_field(p, k).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul_poly(a, b), "{f:?} {a} {b}");
                }
            }
        }
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(5), Some((5, 1)));
        assert_eq!(prime_power(6), None);
    }
}
