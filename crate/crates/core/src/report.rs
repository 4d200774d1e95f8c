//! Verification reports: one pipeline per subcommand, JSON output, atomic writes.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_rational::BigRational;
use serde::Serialize;

use crate::chars::{choose_ell, CharTableModEll, EllContext};
use crate::error::{Error, Result};
use crate::estimator::{component_estimate_adaptive, default_max_ext, default_tol, sphericity_check, ComponentEstimate};
use crate::group::{build_group, GroupTable};
use crate::mult::{frobenius_identity_check, multiplicity_vector, MultiplicityVector};
use crate::periodicity::{multiplicity_sequence, SequenceVerdict, Selector};
use crate::rational;
use crate::reduction::{check_main_chain, d_upper_bound, ChainVerdict};
use crate::scenario::{GroupSpace, Scenario};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Chartab,
    Mult,
    Bound,
    Periodicity,
    Reduce,
    VerifyAll,
}

/// Command-line overrides of scenario fields.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub q: Option<u64>,
    pub max_ext: Option<u32>,
    /// `None` means choose ℓ automatically.
    pub ell: Option<u64>,
    pub tol: Option<BigRational>,
    pub seed: Option<u64>,
}

/// The inputs a report was computed from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inputs {
    pub q: u64,
    pub max_ext: u32,
    pub ell: Option<u64>,
    #[serde(with = "rational")]
    pub tol: BigRational,
    pub seed: u64,
}

/// The scenario with overrides applied, and the settings to run it with.
pub fn resolve(s: &Scenario, o: &Overrides) -> Result<(Scenario, Inputs)> {
    let mut s = match o.q {
        Some(q) => s.with_q(q),
        None => s.clone(),
    };
    if let Some(k) = o.max_ext {
        s.max_ext = k;
    }
    let tol = match (&o.tol, &s.tol) {
        (Some(t), _) => t.clone(),
        (None, Some(t)) => rational::parse(t)?,
        (None, None) => default_tol(),
    };
    if tol <= BigRational::from_integer(0.into()) {
        return Err(Error::Scenario("tol must be positive".into()));
    }
    let inputs = Inputs {
        q: s.q,
        max_ext: if s.max_ext >= 2 { s.max_ext } else { default_max_ext(s.q) },
        ell: o.ell.or(s.ell),
        tol,
        seed: o.seed.or(s.seed).unwrap_or(0),
    };
    s.max_ext = inputs.max_ext;
    s.validate()?;
    Ok((s, inputs))
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartabBlock {
    pub ell: u64,
    pub zeta: u64,
    pub class_sizes: Vec<u64>,
    pub degrees: Vec<u64>,
    pub degree_square_sum: u64,
    pub orthogonality: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultBlock {
    #[serde(flatten)]
    pub vector: MultiplicityVector,
    pub degree_sum_holds: bool,
    pub rank_identity_holds: bool,
    /// Σ χ(g)·Fix(g) = |G|·⟨χ, perm⟩ for every irreducible χ.
    pub frobenius_identity_holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimatorBlock {
    #[serde(with = "rational::vec")]
    pub r_k: Vec<BigRational>,
    pub c_hat: u64,
    pub converged: bool,
    pub spherical: bool,
    pub b_orbit_trace: Vec<u64>,
    #[serde(with = "rational")]
    pub tol: BigRational,
    pub levels: Vec<crate::estimator::Level>,
}

impl EstimatorBlock {
    fn new(e: ComponentEstimate, spherical: bool, trace: Vec<u64>) -> EstimatorBlock {
        EstimatorBlock {
            r_k: e.r_k,
            c_hat: e.c_hat,
            converged: e.converged,
            spherical,
            b_orbit_trace: trace,
            tol: e.tol,
            levels: e.levels,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundBlock {
    pub mu_max: u64,
    /// 1 for groups of type GL, d(G) of the witness otherwise.
    pub d: u64,
    pub c_hat: u64,
    pub converged: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Command,
    pub scenario: Scenario,
    pub inputs: Inputs,
    pub group_order: u128,
    pub class_count: usize,
    pub space_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chartab: Option<ChartabBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mult: Option<MultBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimator: Option<EstimatorBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub periodicity: Option<SequenceVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ChainVerdict>,
    pub verdicts: BTreeMap<String, bool>,
    pub pass: bool,
    pub engine_version: &'static str,
    pub timings_ms: BTreeMap<String, u64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Timer(BTreeMap<String, u64>);

impl Timer {
    fn run<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let t = Instant::now();
        let out = f();
        self.0.insert(name.into(), t.elapsed().as_millis() as u64);
        out
    }
}

fn context(g: &GroupTable, space: &dyn GroupSpace, ell: Option<u64>) -> Result<EllContext> {
    let omega = space.len() as u64;
    match ell {
        Some(l) => EllContext::with_ell(l, g.order() as u128, g.exponent(), omega),
        None => choose_ell(g, omega),
    }
}

fn wants(cmd: Command, parts: &[Command]) -> bool {
    cmd == Command::VerifyAll || parts.contains(&cmd)
}

/// Runs one subcommand (or the whole pipeline for `verify-all`) on a scenario.
pub fn run(cmd: Command, scenario: &Scenario, o: &Overrides) -> Result<Report> {
    use Command::*;
    let (s, inputs) = resolve(scenario, o)?;
    let mut timer = Timer(BTreeMap::new());
    let mut verdicts = BTreeMap::new();

    let (g, space) = timer.run("instantiate", || {
        let g = build_group(&s.group, s.q, 1)?;
        let (_, space) = s.instantiate(1)?;
        Ok((g, space))
    })?;
    let needs_table = wants(cmd, &[Chartab, Mult, Bound]);
    let table = if needs_table {
        let ctx = context(&g, space.as_ref(), inputs.ell)?;
        let t = timer.run("character_table", || CharTableModEll::compute(&g, &ctx, inputs.seed))?;
        Some((ctx, t))
    } else {
        None
    };

    let chartab = table.as_ref().filter(|_| wants(cmd, &[Chartab])).map(|(ctx, t)| {
        let block = ChartabBlock {
            ell: ctx.ell,
            zeta: ctx.zeta,
            class_sizes: t.class_sizes.clone(),
            degrees: t.degrees.clone(),
            degree_square_sum: t.degrees.iter().map(|d| d * d).sum(),
            orthogonality: t.orthogonality_holds(),
        };
        verdicts.insert("orthogonality".into(), block.orthogonality);
        verdicts.insert("degree_square_sum".into(), block.degree_square_sum as u128 == g.order() as u128);
        block
    });

    let mult = match &table {
        Some((ctx, t)) if wants(cmd, &[Mult, Bound]) => {
            let vector = timer.run("multiplicities", || multiplicity_vector(&g, space.as_ref(), t, ctx))?;
            let frob = t.rows.iter().all(|row| frobenius_identity_check(&g, space.as_ref(), row));
            let block = MultBlock {
                degree_sum_holds: vector.degree_sum_holds(),
                rank_identity_holds: vector.rank_identity_holds(),
                frobenius_identity_holds: frob,
                vector,
            };
            verdicts.insert("degree_sum".into(), block.degree_sum_holds);
            verdicts.insert("rank_identity".into(), block.rank_identity_holds);
            verdicts.insert("frobenius_identity".into(), block.frobenius_identity_holds);
            Some(block)
        }
        _ => None,
    };

    let estimator = if wants(cmd, &[Bound, Periodicity]) {
        let e = timer.run("estimator", || component_estimate_adaptive(&s, inputs.max_ext, &inputs.tol))?;
        let used = e.levels.len() as u32;
        let sph = timer.run("sphericity", || sphericity_check(&s, used))?;
        if wants(cmd, &[Bound]) {
            verdicts.insert("converged".into(), e.converged);
            verdicts.insert("spherical".into(), sph.spherical);
        }
        Some(EstimatorBlock::new(e, sph.spherical, sph.orbit_trace))
    } else {
        None
    };

    let bound = match (&mult, &estimator) {
        (Some(m), Some(e)) => {
            let d = if s.group.is_type_gl() {
                1
            } else {
                let w = s.witness.as_ref().ok_or_else(|| {
                    Error::Witness(format!("{} is not of type GL and the scenario has no witness", s.group))
                })?;
                timer.run("d_bound", || d_upper_bound(w, &s.group, s.q))?.d
            };
            let holds = e.converged && m.vector.mu_max <= d * e.c_hat;
            verdicts.insert("bound".into(), holds);
            Some(BoundBlock { mu_max: m.vector.mu_max, d, c_hat: e.c_hat, converged: e.converged, holds })
        }
        _ => None,
    };

    let periodicity = if wants(cmd, &[Periodicity]) {
        let c_hat = estimator.as_ref().map(|e| e.c_hat);
        let v = timer.run("periodicity", || multiplicity_sequence(&s, Selector::Trivial, inputs.max_ext, c_hat))?;
        verdicts.insert("f1_le_limsup".into(), v.f1_le_limsup_ok.unwrap_or(false));
        if let Some(ok) = v.tail_le_c_hat {
            verdicts.insert("tail_le_c_hat".into(), ok);
        }
        Some(v)
    } else {
        None
    };

    let reduction = if cmd == Reduce || (cmd == VerifyAll && s.witness.is_some()) {
        let v = timer.run("reduction", || check_main_chain(&s, inputs.max_ext, &inputs.tol))?;
        verdicts.insert("reduction_chain".into(), v.holds);
        Some(v)
    } else {
        None
    };

    let pass = verdicts.values().all(|&v| v);
    Ok(Report {
        command: cmd,
        group_order: g.order() as u128,
        class_count: g.classes().len(),
        space_size: space.len(),
        scenario: s,
        inputs,
        chartab,
        mult,
        estimator,
        bound,
        periodicity,
        reduction,
        verdicts,
        pass,
        engine_version: ENGINE_VERSION,
        timings_ms: timer.0,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteEntry {
    pub file: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<Report>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub entries: Vec<SuiteEntry>,
    pub pass: bool,
    /// Some scenario could not be run at all.
    pub operational_error: bool,
    pub engine_version: &'static str,
}

/// Scenario files in a directory, sorted by name.
pub fn suite_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let io = |e| Error::Io { path: dir.display().to_string(), source: e };
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

/// `verify-all` over every scenario file in a directory.
pub fn run_suite(dir: &Path, o: &Overrides) -> Result<SuiteReport> {
    let entries: Vec<SuiteEntry> = suite_files(dir)?
        .into_iter()
        .map(|path| {
            let file = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
            match Scenario::load(&path).and_then(|s| run(Command::VerifyAll, &s, o)) {
                Ok(r) => SuiteEntry { file, pass: r.pass, error: None, report: Some(r) },
                Err(e) => SuiteEntry { file, pass: false, error: Some(e.to_string()), report: None },
            }
        })
        .collect();
    Ok(SuiteReport {
        suite: dir.display().to_string(),
        pass: !entries.is_empty() && entries.iter().all(|e| e.pass),
        operational_error: entries.iter().any(|e| e.error.is_some()),
        entries,
        engine_version: ENGINE_VERSION,
    })
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |e| Error::Io { path: path.display().to_string(), source: e };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.write_all(b"\n").map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
