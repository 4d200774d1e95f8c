use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::linear::{self, LineSet};
use crate::error::{Error, Result};
use crate::fq::{Elem, Field};
use crate::group::{apply_rule, rcf, FactorKind, GroupLaw, GroupTable, MorphismRule};

/// Largest point set a space instance will enumerate.
pub const POINT_CAP: u128 = 4_000_000;

/// The variety X, as it appears in scenario files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceDescriptor {
    Point,
    ProjectiveSpace,
    Grassmannian { d: usize },
    Flag,
    ProjlinePair,
    /// X = H with H × H acting by (g, h)·x = g x h⁻¹.
    GroupCase,
    /// G/T for the diagonal torus, realized as ordered frames of lines.
    TorusCoset,
    /// Affine space of the given dimension with trivial action.
    AffineTrivial { dim: u32 },
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceDescriptor::Point => write!(f, "point"),
            SpaceDescriptor::ProjectiveSpace => write!(f, "projective_space"),
            SpaceDescriptor::Grassmannian { d } => write!(f, "grassmannian({d})"),
            SpaceDescriptor::Flag => write!(f, "flag"),
            SpaceDescriptor::ProjlinePair => write!(f, "projline_pair"),
            SpaceDescriptor::GroupCase => write!(f, "group_case"),
            SpaceDescriptor::TorusCoset => write!(f, "torus_coset"),
            SpaceDescriptor::AffineTrivial { dim } => write!(f, "affine_trivial({dim})"),
        }
    }
}

/// A finite set with an action of G(F_{q^k}).
pub trait GroupSpace: Send + Sync {
    /// The acting group.
    fn law(&self) -> &Arc<GroupLaw>;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Index of g·x.
    fn act(&self, g: &[Elem], x: usize) -> usize;

    /// Number of points fixed by g.
    fn fixed_points(&self, g: &[Elem]) -> u64 {
        self.fixed_points_sweep(g)
    }

    /// Fixed points by testing every point; the reference oracle.
    fn fixed_points_sweep(&self, g: &[Elem]) -> u64 {
        (0..self.len()).filter(|&x| self.act(g, x) == x).count() as u64
    }

    /// Whether scalar matrices act trivially, so Borel sums may be taken
    /// over elements with leading diagonal entry 1.
    fn center_acts_trivially(&self) -> bool {
        false
    }

    /// Σ_{b ∈ B(F)} Fix(b) over the standard Borel subgroup.
    fn borel_fix_sum(&self) -> u128 {
        borel_fix_sum_enumerated(self)
    }

    fn describe(&self) -> String;
}

/// Σ_{b∈B} Fix(b) by enumerating Borel elements.
pub fn borel_fix_sum_enumerated<S: GroupSpace + ?Sized>(space: &S) -> u128 {
    let law = space.law();
    let total = law.borel_order();
    let normalize = space.center_acts_trivially()
        && law.factors().len() == 1
        && law.factors()[0].kind == FactorKind::General;
    let (step, weight) = if normalize {
        let q1 = law.factors()[0].field.order() as u128 - 1;
        (q1, q1)
    } else {
        (1, 1)
    };
    let count = total / step;
    let w = law.width();
    let sum: u128 = (0..count as u64)
        .into_par_iter()
        .map_init(
            || vec![0; w],
            |buf, i| {
                law.borel_element(i as u128 * step, buf);
                space.fixed_points(buf) as u128
            },
        )
        .sum();
    sum * weight
}

/// Number of orbits of the subgroup generated by `gens`, by union-find.
pub fn orbit_count(space: &dyn GroupSpace, gens: &[Vec<Elem>]) -> usize {
    let n = space.len();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(p: &mut [u32], mut x: u32) -> u32 {
        while p[x as usize] != x {
            p[x as usize] = p[p[x as usize] as usize];
            x = p[x as usize];
        }
        x
    }
    let mut components = n;
    for g in gens {
        for x in 0..n {
            let y = space.act(g, x);
            let (a, b) = (find(&mut parent, x as u32), find(&mut parent, y as u32));
            if a != b {
                parent[a.max(b) as usize] = a.min(b);
                components -= 1;
            }
        }
    }
    components
}

pub fn borel_orbit_count(space: &dyn GroupSpace) -> usize {
    orbit_count(space, &space.law().borel_generators())
}

pub fn group_orbit_count(space: &dyn GroupSpace) -> usize {
    orbit_count(space, &space.law().generators())
}

enum Points {
    Single,
    Affine(usize),
    Lines(LineSet),
    Subspaces { d: usize, keys: Vec<Vec<Elem>>, index: HashMap<Vec<Elem>, u32> },
    Flags { keys: Vec<Vec<Elem>>, index: HashMap<Vec<Elem>, u32> },
    LinePairs(LineSet),
    Frames { lines: LineSet, frames: Vec<Vec<u32>>, index: HashMap<Vec<u32>, u32> },
    /// H, enumerated on first use of the action.
    Group { h: Arc<GroupLaw>, table: OnceLock<Arc<GroupTable>> },
}

/// X(F_{q^k}) for one of the catalog kinds, with its G(F_{q^k})-action.
pub struct SpaceInstance {
    law: Arc<GroupLaw>,
    kind: SpaceDescriptor,
    field: Arc<Field>,
    n: usize,
    points: Points,
}

fn closed_form_frames(big_q: u128, n: usize) -> u128 {
    crate::group::gl_order(n, big_q).unwrap() / (big_q - 1).pow(n as u32)
}

impl SpaceInstance {
    pub fn new(law: Arc<GroupLaw>, kind: &SpaceDescriptor) -> Result<SpaceInstance> {
        let incompatible = |why: &str| Error::Scenario(format!("{} on {kind}: {why}", law.descriptor()));
        let factors = law.factors();
        let first = &factors[0];
        let field = first.field.clone();
        let big_q = field.order() as u128;
        let n = first.n;
        let needs_matrix_group = || -> Result<()> {
            if factors.len() != 1 || matches!(first.kind, FactorKind::Roots(_)) {
                return Err(incompatible("needs a single GL_n or SL_n factor"));
            }
            Ok(())
        };
        let check_cap = |predicted: u128| -> Result<()> {
            if predicted > POINT_CAP {
                return Err(Error::CapExceeded { what: format!("{kind} points"), predicted, cap: POINT_CAP });
            }
            Ok(())
        };
        let lines_count = |n: usize| (big_q.pow(n as u32) - 1) / (big_q - 1);
        let points = match kind {
            SpaceDescriptor::Point => Points::Single,
            SpaceDescriptor::AffineTrivial { dim } => {
                let c = big_q.checked_pow(*dim).unwrap_or(u128::MAX);
                check_cap(c)?;
                Points::Affine(c as usize)
            }
            SpaceDescriptor::ProjectiveSpace => {
                needs_matrix_group()?;
                check_cap(lines_count(n))?;
                Points::Lines(LineSet::new(&field, n)?)
            }
            SpaceDescriptor::Grassmannian { d } => {
                needs_matrix_group()?;
                if *d == 0 || *d >= n {
                    return Err(incompatible("need 0 < d < n"));
                }
                if *d == 1 {
                    check_cap(lines_count(n))?;
                    Points::Lines(LineSet::new(&field, n)?)
                } else {
                    let keys = linear::grassmannian(&field, n, *d);
                    check_cap(keys.len() as u128)?;
                    let index = linear::index_keys(&keys);
                    Points::Subspaces { d: *d, keys, index }
                }
            }
            SpaceDescriptor::Flag => {
                needs_matrix_group()?;
                let predicted: u128 = (1..=n).map(lines_count).product();
                check_cap(predicted)?;
                let mut chains: Vec<Vec<Elem>> = vec![Vec::new()];
                for d in 1..n {
                    let layer = linear::grassmannian(&field, n, d);
                    let mut next = Vec::new();
                    for c in &chains {
                        let prev = &c[c.len().saturating_sub((d - 1) * n)..];
                        for w in &layer {
                            if d == 1 || linear::contained_in(&field, n, prev, d - 1, w, d) {
                                let mut k = c.clone();
                                k.extend_from_slice(w);
                                next.push(k);
                            }
                        }
                    }
                    chains = next;
                }
                let index = linear::index_keys(&chains);
                Points::Flags { keys: chains, index }
            }
            SpaceDescriptor::ProjlinePair => {
                needs_matrix_group()?;
                if n != 2 {
                    return Err(incompatible("projline_pair needs n = 2"));
                }
                check_cap((big_q + 1).pow(2))?;
                Points::LinePairs(LineSet::new(&field, 2)?)
            }
            SpaceDescriptor::TorusCoset => {
                needs_matrix_group()?;
                check_cap(closed_form_frames(big_q, n))?;
                let lines = LineSet::new(&field, n)?;
                let mut frames: Vec<Vec<u32>> = vec![Vec::new()];
                for depth in 0..n {
                    let mut next = Vec::new();
                    for fr in &frames {
                        let mut basis: Vec<Elem> = fr.iter().flat_map(|&l| lines.reps[l as usize].clone()).collect();
                        for (l, rep) in lines.reps.iter().enumerate() {
                            basis.extend_from_slice(rep);
                            if crate::fq::matrix::rank(&field, depth + 1, n, &basis) == depth + 1 {
                                let mut f2 = fr.clone();
                                f2.push(l as u32);
                                next.push(f2);
                            }
                            basis.truncate(depth * n);
                        }
                    }
                    frames = next;
                }
                let index = frames.iter().enumerate().map(|(i, f)| (f.clone(), i as u32)).collect();
                Points::Frames { lines, frames, index }
            }
            SpaceDescriptor::GroupCase => {
                if factors.len() != 2
                    || factors[0].n != factors[1].n
                    || factors[0].kind != factors[1].kind
                    || factors[0].field.order() != factors[1].field.order()
                {
                    return Err(incompatible("group_case needs a product H × H"));
                }
                let leaf = law.descriptor().leaves()[0].clone();
                let h = Arc::new(GroupLaw::from_factors(leaf, law.base_q(), law.ext(), vec![first.clone()]));
                if h.order() > usize::MAX as u128 / 2 {
                    return Err(Error::CapExceeded { what: format!("{kind} points"), predicted: h.order(), cap: POINT_CAP });
                }
                Points::Group { h, table: OnceLock::new() }
            }
        };
        Ok(SpaceInstance { law, kind: kind.clone(), field, n, points })
    }

    pub fn kind(&self) -> &SpaceDescriptor {
        &self.kind
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// Canonical key of a point (row-echelon data, line indices, or matrix entries).
    pub fn point_key(&self, x: usize) -> Vec<Elem> {
        match &self.points {
            Points::Single => vec![],
            Points::Affine(_) => vec![x as Elem],
            Points::Lines(l) => l.reps[x].clone(),
            Points::Subspaces { keys, .. } | Points::Flags { keys, .. } => keys[x].clone(),
            Points::LinePairs(l) => {
                let mut k = l.reps[x / l.len()].clone();
                k.extend_from_slice(&l.reps[x % l.len()]);
                k
            }
            Points::Frames { lines, frames, .. } => {
                frames[x].iter().flat_map(|&l| lines.reps[l as usize].clone()).collect()
            }
            Points::Group { .. } => self.group_table().element(x),
        }
    }

    /// Index of the point with the given key.
    pub fn index_of_key(&self, key: &[Elem]) -> Option<usize> {
        (0..self.len()).find(|&x| self.point_key(x) == key)
    }

    /// The enumerated H of a group-case space. Panics past the point cap.
    fn group_table(&self) -> &Arc<GroupTable> {
        let Points::Group { h, table } = &self.points else { panic!("not a group-case space") };
        table.get_or_init(|| GroupTable::build(h, POINT_CAP).expect("group-case space exceeds the point cap"))
    }

    fn total_frames(&self) -> u64 {
        match &self.points {
            Points::Frames { frames, .. } => frames.len() as u64,
            _ => 0,
        }
    }

    fn group_case_label(&self, a: &[Elem]) -> Option<rcf::SimilarityLabel> {
        if self.law.factors()[0].kind != FactorKind::General {
            return None;
        }
        rcf::similarity_label(&self.field, self.n, a).ok()
    }

    fn group_case_fix(&self, g: &[Elem]) -> Option<u64> {
        let w = self.n * self.n;
        let la = self.group_case_label(&g[..w])?;
        let lb = self.group_case_label(&g[w..])?;
        if la != lb {
            return Some(0);
        }
        Some(rcf::centralizer_order(self.field.order() as u128, &la) as u64)
    }
}

impl GroupSpace for SpaceInstance {
    fn law(&self) -> &Arc<GroupLaw> {
        &self.law
    }

    fn len(&self) -> usize {
        match &self.points {
            Points::Single => 1,
            Points::Affine(c) => *c,
            Points::Lines(l) => l.len(),
            Points::Subspaces { keys, .. } | Points::Flags { keys, .. } => keys.len(),
            Points::LinePairs(l) => l.len() * l.len(),
            Points::Frames { frames, .. } => frames.len(),
            Points::Group { h, .. } => h.order() as usize,
        }
    }

    fn act(&self, g: &[Elem], x: usize) -> usize {
        let (f, n) = (&*self.field, self.n);
        match &self.points {
            Points::Single | Points::Affine(_) => x,
            Points::Lines(l) => l.act(f, g, x),
            Points::Subspaces { d, keys, index } => index[&linear::act_subspace(f, n, *d, g, &keys[x])] as usize,
            Points::Flags { keys, index } => {
                let mut img = Vec::with_capacity(keys[x].len());
                let mut off = 0;
                for d in 1..n {
                    img.extend(linear::act_subspace(f, n, d, g, &keys[x][off..off + d * n]));
                    off += d * n;
                }
                index[&img] as usize
            }
            Points::LinePairs(l) => {
                let m = l.len();
                l.act(f, g, x / m) * m + l.act(f, g, x % m)
            }
            Points::Frames { lines, frames, index } => {
                let img: Vec<u32> = frames[x].iter().map(|&li| lines.act(f, g, li as usize) as u32).collect();
                index[&img] as usize
            }
            Points::Group { .. } => {
                let t = self.group_table();
                let w = n * n;
                let h = &self.law.factors()[0];
                let left = h.inverse(&g[w..]);
                let mut tmp = vec![0; w];
                let mut out = vec![0; w];
                h.mul_into(&g[..w], &t.element(x), &mut tmp);
                h.mul_into(&tmp, &left, &mut out);
                t.index_of(&out).expect("H is closed")
            }
        }
    }

    fn fixed_points(&self, g: &[Elem]) -> u64 {
        let (f, n) = (&*self.field, self.n);
        match &self.points {
            Points::Single => 1,
            Points::Affine(c) => *c as u64,
            Points::Lines(_) => linear::stable_line_count(f, n, g),
            Points::Subspaces { d, .. } if *d == n - 1 => {
                linear::stable_line_count(f, n, &crate::fq::matrix::transpose(n, n, g))
            }
            Points::Subspaces { .. } => self.fixed_points_sweep(g),
            Points::Flags { .. } => linear::stable_flag_count(f, n, g),
            Points::LinePairs(_) => linear::stable_line_count(f, 2, g).pow(2),
            Points::Frames { .. } => linear::stable_frame_count(f, n, g, self.total_frames()),
            Points::Group { .. } => self.group_case_fix(g).unwrap_or_else(|| self.fixed_points_sweep(g)),
        }
    }

    fn center_acts_trivially(&self) -> bool {
        !matches!(self.points, Points::Group { .. })
    }

    fn borel_fix_sum(&self) -> u128 {
        if let Points::Group { .. } = &self.points {
            if self.law.factors()[0].kind == FactorKind::General {
                return group_case_borel_sum(self);
            }
        }
        borel_fix_sum_enumerated(self)
    }

    fn describe(&self) -> String {
        format!("{} on {} over F_{}", self.law.descriptor(), self.kind, self.field.order())
    }
}

/// Σ over B × B of Fix on H, aggregated by conjugacy class:
/// Σ_c N_c(B)² · |C_H(c)| where N_c(B) counts Borel elements in class c.
fn group_case_borel_sum(space: &SpaceInstance) -> u128 {
    let h = &space.law.factors()[0];
    let b = h.borel_order();
    let w = h.width();
    let labels: Vec<rcf::SimilarityLabel> = (0..b as u64)
        .into_par_iter()
        .map_init(
            || vec![0; w],
            |buf, i| {
                h.borel_element(i as u128, buf);
                rcf::similarity_label(&h.field, h.n, buf).expect("n <= 3")
            },
        )
        .collect();
    let mut counts: HashMap<rcf::SimilarityLabel, u128> = HashMap::new();
    for l in labels {
        *counts.entry(l).or_insert(0) += 1;
    }
    let big_q = h.field.order() as u128;
    counts.iter().map(|(l, &c)| c * c * rcf::centralizer_order(big_q, l)).sum()
}

/// A space viewed through a homomorphism from another group.
pub struct PulledBack {
    pub inner: Arc<dyn GroupSpace>,
    pub law: Arc<GroupLaw>,
    pub rule: MorphismRule,
}

impl PulledBack {
    pub fn new(inner: Arc<dyn GroupSpace>, law: Arc<GroupLaw>, rule: MorphismRule) -> Result<PulledBack> {
        apply_rule(rule, &law, inner.law(), &law.identity())?;
        Ok(PulledBack { inner, law, rule })
    }

    fn image(&self, g: &[Elem]) -> Vec<Elem> {
        apply_rule(self.rule, &self.law, self.inner.law(), g).expect("rule checked at construction")
    }
}

impl GroupSpace for PulledBack {
    fn law(&self) -> &Arc<GroupLaw> {
        &self.law
    }
    fn len(&self) -> usize {
        self.inner.len()
    }
    fn act(&self, g: &[Elem], x: usize) -> usize {
        self.inner.act(&self.image(g), x)
    }
    fn fixed_points(&self, g: &[Elem]) -> u64 {
        self.inner.fixed_points(&self.image(g))
    }
    fn describe(&self) -> String {
        format!("{} via {} from {}", self.inner.describe(), self.rule, self.law.descriptor())
    }
}
