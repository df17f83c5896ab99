//! `mbqg`: batch verification of multi-braided quantum group bundles.
//!
//! Exit status 0 means every asserted check passed, 1 means at least one
//! verification failure, 2 means the input could not be used.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use mbqg_core::bundle::{canonical_json, Bundle};
use mbqg_core::calculus::check_calculus_into;
use mbqg_core::covariant::{close_ideal, reconstruct_left, reconstruct_right, IdealSide};
use mbqg_core::group::{check_braid_system_into, complete_braid_system, BraidSystem, MultiBraidedGroup};
use mbqg_core::report::sha256_hex;
use mbqg_core::suite::{self, Mode, SuiteOpts};
use mbqg_core::{Error, LinMap, Report};

#[derive(Parser)]
#[command(name = "mbqg", version, about = "Exact verifier for multi-braided quantum groups and their calculi")]
struct Cli {
    /// Recompute derived maps instead of caching them.
    #[arg(long, global = true)]
    paranoid: bool,
    /// Shift window K: identities indexed by σₙ are checked for n in [-K, K].
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(i64).range(0..=8))]
    range: i64,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify the group, its star structure, every calculus and every ideal.
    Check { bundle: PathBuf },
    /// Print a derived map as a matrix.
    Derive {
        bundle: PathBuf,
        #[arg(long, value_enum)]
        what: Derived,
        /// Shift for `sigma-n`.
        #[arg(short = 'n', default_value_t = 1, allow_negative_numbers = true)]
        n: i64,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct a covariant calculus from a named ideal and append it
    /// to the bundle.
    BuildCalculus {
        bundle: PathBuf,
        #[arg(long)]
        ideal: String,
        #[arg(long, value_enum, default_value_t = CalcSide::Left)]
        side: CalcSide,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Decide one kind of covariance for every calculus and ideal.
    Covariance {
        bundle: PathBuf,
        #[arg(long, value_enum)]
        mode: CovMode,
    },
    /// Close {σ, τ} under αβ⁻¹γ and check the resulting braid system.
    CompleteSystem {
        bundle: PathBuf,
        #[arg(long, default_value_t = 64)]
        max: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Derived {
    Tau,
    SigmaN,
    A0,
    Kappa0,
    Ad,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CalcSide {
    Left,
    Right,
}

#[derive(Clone, Copy, ValueEnum)]
enum CovMode {
    Left,
    Right,
    Bi,
    Kappa,
    Star,
    Braided,
}

impl From<CovMode> for Mode {
    fn from(m: CovMode) -> Mode {
        match m {
            CovMode::Left => Mode::Left,
            CovMode::Right => Mode::Right,
            CovMode::Bi => Mode::Bi,
            CovMode::Kappa => Mode::Kappa,
            CovMode::Star => Mode::Star,
            CovMode::Braided => Mode::Braided,
        }
    }
}

/// Why a command stopped without a report.
enum Stop {
    Input(String),
    Failed(String),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Stop {
        if e.is_input_error() {
            Stop::Input(e.to_string())
        } else {
            Stop::Failed(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(Stop::Input(msg)) => {
            eprintln!("mbqg: input error: {msg}");
            ExitCode::from(2)
        }
        Err(Stop::Failed(msg)) => {
            eprintln!("mbqg: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load(path: &Path) -> Result<(Bundle, String), Stop> {
    let text = std::fs::read_to_string(path).map_err(|e| Stop::Input(format!("{}: {e}", path.display())))?;
    let digest = sha256_hex(text.as_bytes());
    let b = Bundle::parse(&text).map_err(|e| Stop::Input(format!("{}: {e}", path.display())))?;
    Ok((b, digest))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Stop> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Stop::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish(cli: &Cli, what: &str, r: &Report, digest: &str) -> Result<ExitCode, Stop> {
    let doc = r.finish(digest);
    write_out(cli.report.as_deref(), &doc.to_json())?;
    let s = doc.summary;
    eprintln!("{what}: {} passed, {} failed, {} skipped", s.pass, s.fail, s.skipped);
    for e in r.failures() {
        eprintln!("  FAIL [{}] {} {}", e.scope, e.id, e.note);
    }
    Ok(if r.is_ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn opts(cli: &Cli) -> SuiteOpts {
    SuiteOpts { range: cli.range, paranoid: cli.paranoid }
}

fn group(b: &Bundle, cli: &Cli) -> Result<MultiBraidedGroup, Stop> {
    Ok(MultiBraidedGroup::new(b.group_data()?)?.with_paranoid(cli.paranoid))
}

fn matrix_json(m: &LinMap) -> serde_json::Value {
    let rows: Vec<Vec<String>> = m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    json!({ "cod": m.cod(), "dom": m.dom(), "matrix": rows })
}

fn run(cli: &Cli) -> Result<ExitCode, Stop> {
    match &cli.cmd {
        Cmd::Check { bundle } => {
            let (b, digest) = load(bundle)?;
            let r = suite::run(&b, None, opts(cli))?;
            finish(cli, "check", &r, &digest)
        }
        Cmd::Covariance { bundle, mode } => {
            let (b, digest) = load(bundle)?;
            let r = suite::run(&b, Some((*mode).into()), opts(cli))?;
            finish(cli, "covariance", &r, &digest)
        }
        Cmd::Derive { bundle, what, n, out } => {
            let (b, _) = load(bundle)?;
            let g = group(&b, cli)?;
            let (name, map) = match what {
                Derived::Tau => ("tau", g.tau.clone()),
                Derived::SigmaN => ("sigma_n", g.sigma_n(*n)),
                Derived::A0 => ("m0", g.m0()),
                Derived::Kappa0 => ("kappa0", g.kappa0()?),
                Derived::Ad => ("ad", g.ad()),
            };
            let mut v = matrix_json(&map);
            v["map"] = json!(name);
            if matches!(what, Derived::SigmaN) {
                v["n"] = json!(n);
            }
            write_out(out.as_deref(), &canonical_json(&v))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::BuildCalculus { bundle, ideal, side, out } => {
            let (mut b, digest) = load(bundle)?;
            let idx = b.find_ideal(ideal).ok_or_else(|| Stop::Input(format!("no ideal named {ideal:?}")))?;
            let g = group(&b, cli)?;
            let gens = b.ideal_generators(idx)?;
            let suffix = if *side == CalcSide::Left { "left" } else { "right" };
            let mut r = Report::new(format!("build:{ideal}:{suffix}"));
            let ideal_side = if *side == CalcSide::Left { IdealSide::Right } else { IdealSide::Left };
            let sub = close_ideal(&g, &gens, ideal_side);
            if r.outcome("IDEAL_INPUT", &sub) {
                let sub = sub.expect("checked");
                let c = if *side == CalcSide::Left { reconstruct_left(&g, &sub) } else { reconstruct_right(&g, &sub) };
                if r.outcome("RECONSTRUCT", &c) {
                    let c = c.expect("checked");
                    if check_calculus_into(&g.data.alg, &c, &mut r) {
                        r.pass("GAMMA_DIM", format!("gdim {}", c.gdim));
                        b.push_calculus(&format!("{ideal}_{suffix}"), &c);
                        write_out(Some(out), &b.to_canonical())?;
                    }
                }
            }
            finish(cli, "build-calculus", &r, &digest)
        }
        Cmd::CompleteSystem { bundle, max } => {
            let (b, digest) = load(bundle)?;
            let g = group(&b, cli)?;
            let mut elements = vec![g.sigma().clone()];
            if g.tau != *g.sigma() {
                elements.push(g.tau.clone());
            }
            let start = BraidSystem { dim: g.dim(), elements };
            let mut r = Report::new("complete-system");
            let done = complete_braid_system(&start, *max)?;
            let size = done.system.elements.len();
            if done.truncated {
                r.fail("COMPLETION_CLOSED", None, format!("stopped at {size} elements"));
            } else {
                r.pass("COMPLETION_CLOSED", format!("{size} elements"));
                check_braid_system_into(&done.system, &g.data.alg, "SYS_STAR_", &mut r);
            }
            finish(cli, "complete-system", &r, &digest)
        }
    }
}
