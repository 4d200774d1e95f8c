use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fq::prime_power;

/// Algebraic group over the base field, as it appears in scenario files.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GroupDescriptor {
    #[serde(rename = "GL")]
    Gl { n: usize },
    #[serde(rename = "SL")]
    Sl { n: usize },
    /// The finite group scheme μ_n ⊂ GL_1.
    #[serde(rename = "mu")]
    Mu { n: u32 },
    #[serde(rename = "product")]
    Product { factors: Vec<GroupDescriptor> },
    /// Res_{F_{q^m}/F_q} GL_n, realized as GL_n over the degree-m extension.
    #[serde(rename = "weil_restriction")]
    WeilRestriction { n: usize, m: u32 },
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Gl { n } => write!(f, "GL{n}"),
            GroupDescriptor::Sl { n } => write!(f, "SL{n}"),
            GroupDescriptor::Mu { n } => write!(f, "mu{n}"),
            GroupDescriptor::WeilRestriction { n, m } => write!(f, "Res{m}(GL{n})"),
            GroupDescriptor::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(|d| d.to_string()).collect();
                write!(f, "{}", parts.join("x"))
            }
        }
    }
}

/// Order of GL_n over a field with `big_q` elements.
pub fn gl_order(n: usize, big_q: u128) -> Option<u128> {
    let qn = big_q.checked_pow(n as u32)?;
    let mut acc: u128 = 1;
    let mut qi: u128 = 1;
    for _ in 0..n {
        acc = acc.checked_mul(qn - qi)?;
        qi = qi.checked_mul(big_q)?;
    }
    Some(acc)
}

impl GroupDescriptor {
    pub fn gl(n: usize) -> Self {
        GroupDescriptor::Gl { n }
    }
    pub fn sl(n: usize) -> Self {
        GroupDescriptor::Sl { n }
    }
    pub fn product(factors: Vec<GroupDescriptor>) -> Self {
        GroupDescriptor::Product { factors }
    }

    /// Dimension as an algebraic group over the base field.
    pub fn dim(&self) -> u32 {
        match self {
            GroupDescriptor::Gl { n } => (n * n) as u32,
            GroupDescriptor::Sl { n } => (n * n - 1) as u32,
            GroupDescriptor::Mu { .. } => 0,
            GroupDescriptor::Product { factors } => factors.iter().map(|d| d.dim()).sum(),
            GroupDescriptor::WeilRestriction { n, m } => m * (n * n) as u32,
        }
    }

    /// Geometrically a product of general linear groups.
    pub fn is_type_gl(&self) -> bool {
        match self {
            GroupDescriptor::Gl { .. } | GroupDescriptor::WeilRestriction { .. } => true,
            GroupDescriptor::Product { factors } => factors.iter().all(|d| d.is_type_gl()),
            _ => false,
        }
    }

    /// Leaf descriptors in order, nested products flattened.
    pub fn leaves(&self) -> Vec<GroupDescriptor> {
        match self {
            GroupDescriptor::Product { factors } => factors.iter().flat_map(|d| d.leaves()).collect(),
            other => vec![other.clone()],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GroupDescriptor::Gl { n } | GroupDescriptor::Sl { n } if *n == 0 => {
                Err(Error::Scenario(format!("{self}: n must be at least 1")))
            }
            GroupDescriptor::Mu { n } if *n == 0 => Err(Error::Scenario("mu0 is not a group".into())),
            GroupDescriptor::WeilRestriction { n, m } if *n == 0 || *m == 0 => {
                Err(Error::Scenario(format!("{self}: n and m must be positive")))
            }
            GroupDescriptor::Product { factors } if factors.is_empty() => {
                Err(Error::Scenario("empty product".into()))
            }
            GroupDescriptor::Product { factors } => factors.iter().try_for_each(|d| d.validate()),
            _ => Ok(()),
        }
    }

    /// Exact order of G(F_{q^k}) from closed forms.
    pub fn order(&self, q: u64, k: u32) -> Result<u128> {
        prime_power(q).ok_or_else(|| Error::Unsupported(format!("q = {q} is not a prime power")))?;
        let overflow = || Error::Unsupported(format!("order of {self} over F_{q}^{k} overflows u128"));
        let big_q = (q as u128).checked_pow(k).ok_or_else(overflow)?;
        match self {
            GroupDescriptor::Gl { n } => gl_order(*n, big_q).ok_or_else(overflow),
            GroupDescriptor::Sl { n } => Ok(gl_order(*n, big_q).ok_or_else(overflow)? / (big_q - 1)),
            GroupDescriptor::Mu { n } => Ok(num_integer::gcd(*n as u128, big_q - 1)),
            GroupDescriptor::WeilRestriction { n, m } => {
                let qm = big_q.checked_pow(*m).ok_or_else(overflow)?;
                gl_order(*n, qm).ok_or_else(overflow)
            }
            GroupDescriptor::Product { factors } => factors.iter().try_fold(1u128, |acc, d| {
                acc.checked_mul(d.order(q, k)?).ok_or_else(overflow)
            }),
        }
    }
}

/// Closed-form |G(F_{q^k})|.
pub fn group_order(descriptor: &GroupDescriptor, q: u64, k: u32) -> Result<u128> {
    descriptor.order(q, k)
}
