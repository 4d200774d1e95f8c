use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use multbound::report::{run, run_suite, write_atomic, Command, Overrides};
use multbound::scenario::{preset, Scenario};
use multbound::{rational, Error};

/// Exact verification of multiplicity bounds for spherical spaces over finite fields.
#[derive(Parser)]
#[command(name = "multbound", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Character table of G(F_q) modulo a prime ℓ.
    Chartab(Common),
    /// Multiplicities of every irreducible in C[X(F_q)].
    Mult(Common),
    /// mu_max against the estimated component count.
    Bound(Common),
    /// Periodicity of the orbit-count sequence over F_{q^k}.
    Periodicity(Common),
    /// Every link of the reduction chain for a scenario with a witness.
    Reduce(Common),
    /// The whole pipeline on every scenario file in a directory.
    VerifyAll(Suite),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Args)]
struct Settings {
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    max_ext: Option<u32>,
    /// A prime, or `auto`.
    #[arg(long, value_parser = parse_ell)]
    ell: Option<Ell>,
    /// Convergence tolerance as `num/den`.
    #[arg(long, value_parser = parse_tol)]
    tol: Option<BigRational>,
    #[arg(long)]
    seed: Option<u64>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct Common {
    /// Scenario JSON file, or the name of a catalog preset.
    #[arg(long)]
    scenario: String,
    #[command(flatten)]
    settings: Settings,
}

#[derive(Args)]
struct Suite {
    /// Directory of scenario JSON files.
    #[arg(long)]
    suite: PathBuf,
    #[command(flatten)]
    settings: Settings,
}

#[derive(Clone, Copy)]
enum Ell {
    Auto,
    Fixed(u64),
}

fn parse_ell(s: &str) -> Result<Ell, String> {
    if s == "auto" {
        return Ok(Ell::Auto);
    }
    s.parse().map(Ell::Fixed).map_err(|_| format!("expected a prime or `auto`, got `{s}`"))
}

fn parse_tol(s: &str) -> Result<BigRational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

impl Settings {
    fn overrides(&self) -> Overrides {
        Overrides {
            q: self.q,
            max_ext: self.max_ext,
            ell: match self.ell {
                Some(Ell::Fixed(l)) => Some(l),
                _ => None,
            },
            tol: self.tol.clone(),
            seed: self.seed,
        }
    }

    fn emit(&self, json: &str) -> Result<(), Error> {
        let Format::Json = self.format;
        match &self.out {
            Some(p) => write_atomic(p, json),
            None => {
                println!("{json}");
                Ok(())
            }
        }
    }
}

fn load(spec: &str) -> Result<Scenario, Error> {
    let path = PathBuf::from(spec);
    if path.exists() {
        return Scenario::load(&path);
    }
    preset(spec).ok_or_else(|| Error::Scenario(format!("no scenario file or preset named `{spec}`")))
}

fn execute(cli: Cli) -> Result<bool, Error> {
    let (cmd, common) = match cli.command {
        Cmd::VerifyAll(suite) => {
            let mut o = suite.settings.overrides();
            if matches!(suite.settings.ell, Some(Ell::Fixed(_))) {
                // One ℓ cannot fit every group in a suite.
                o.ell = None;
            }
            let r = run_suite(&suite.suite, &o)?;
            suite.settings.emit(&serde_json::to_string_pretty(&r)?)?;
            if r.operational_error {
                let first = r.entries.iter().find_map(|e| e.error.clone()).unwrap_or_default();
                return Err(Error::Scenario(first));
            }
            return Ok(r.pass);
        }
        Cmd::Chartab(c) => (Command::Chartab, c),
        Cmd::Mult(c) => (Command::Mult, c),
        Cmd::Bound(c) => (Command::Bound, c),
        Cmd::Periodicity(c) => (Command::Periodicity, c),
        Cmd::Reduce(c) => (Command::Reduce, c),
    };
    let s = load(&common.scenario)?;
    let r = run(cmd, &s, &common.settings.overrides())?;
    common.settings.emit(&r.to_json())?;
    Ok(r.pass)
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("MULTBOUND_THREADS").ok().and_then(|v| v.parse().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
