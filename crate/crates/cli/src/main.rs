use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use extroot::bounds::{eval_upper_threshold, eval_zero_threshold, sqrt_gap_threshold, EvalBoundInput};
use extroot::poly::SizeProfile;
use extroot::solver::{build_grid, FiberOracle, SystemSource, Timing, SCHEMA};
use extroot::subres::count_distinct_roots;
use extroot::{solve, verify_report, Error, Mode, ReportDocument, SolveOptions, SqrtSumInstance, SystemSpec};

#[derive(Parser)]
#[command(name = "extroot", version, about = "Certified root isolation over multiple algebraic extensions")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Precision ceiling in bits; larger instances are refused (exit 2).
    #[arg(long, global = true, env = "EXTROOT_PREC_CEILING", default_value_t = 1 << 20,
          value_parser = clap::value_parser!(u64).range(64..))]
    prec_ceiling: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Indented JSON.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Adaptive,
    Max,
}

#[derive(Subcommand)]
enum Cmd {
    /// Isolate every root of a system.
    Solve {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_enum, default_value = "adaptive")]
        mode: ModeArg,
        /// Add separation measurements of the fibers.
        #[arg(long)]
        diagnostics: bool,
        /// Record wall-clock time (output is then not reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Degree and number of distinct roots of F(x, Y) at every grid point.
    CountRoots {
        #[arg(long)]
        system: PathBuf,
    },
    /// Compare sum sqrt(a_i) with sum sqrt(b_i).
    Sqrtsum {
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        a: Vec<u64>,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        b: Vec<u64>,
    },
    /// Explicit evaluation and gap thresholds.
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long = "M")]
        m: u64,
        #[arg(long = "L")]
        lambda: u64,
        #[arg(long)]
        delta: u64,
        #[arg(long)]
        sigma: u64,
        /// Also report the sqrtsum gap threshold for this bitsize.
        #[arg(long)]
        tau: Option<u64>,
    },
    /// Coefficients of F(x, Y) at every grid point as balls.
    Eval {
        #[arg(long)]
        system: PathBuf,
        /// Radius target in bits.
        #[arg(long, default_value_t = 64)]
        target: u64,
    },
    /// Check a solve report against brute-force numerics.
    Verify {
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value_t = 512)]
        oracle_prec: u64,
    },
}

enum Failure {
    Input(String),
    Refusal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_refusal() {
            Failure::Refusal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_system(path: &PathBuf) -> Result<SystemSpec, Failure> {
    Ok(SystemSource::from_json(&read(path)?)?.to_spec()?)
}

fn render<T: Serialize>(v: &T, pretty: bool) -> String {
    let s = if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    };
    s.expect("json")
}

fn run(cli: Cli) -> Result<(String, bool), Failure> {
    let g = &cli.global;
    let out = |v: Value| Ok((render(&v, g.pretty), true));
    let opts = |mode, diagnostics| SolveOptions {
        mode,
        ceiling: g.prec_ceiling,
        seed: g.seed,
        threads: g.threads,
        diagnostics,
    };
    match cli.cmd {
        Cmd::Solve {
            system,
            mode,
            diagnostics,
            timing,
        } => {
            let spec = load_system(&system)?;
            let mode = match mode {
                ModeArg::Adaptive => Mode::Adaptive,
                ModeArg::Max => Mode::MaxPrecision,
            };
            let t0 = Instant::now();
            let report = solve(&spec, &opts(mode, diagnostics))?;
            let mut doc = ReportDocument::new(&spec, report);
            if timing {
                doc.timing = Some(Timing {
                    seconds: t0.elapsed().as_secs_f64(),
                });
            }
            Ok((doc.to_json(g.pretty), true))
        }
        Cmd::CountRoots { system } => {
            let spec = load_system(&system)?;
            let mut points = Vec::new();
            for mut p in build_grid(&spec)? {
                let (k, ell) = count_distinct_roots(&spec.f, &mut p, &spec.profile, g.prec_ceiling)?;
                points.push(json!({"point": p, "degree": ell, "distinct": k}));
            }
            out(json!({"schema": SCHEMA, "points": points}))
        }
        Cmd::Sqrtsum { a, b } => {
            let inst = SqrtSumInstance::from_u64(&a, &b);
            let c = extroot::sqrtsum::compare_with_ceiling(&inst, g.prec_ceiling)?;
            Ok((render(&c, g.pretty), true))
        }
        Cmd::Bounds {
            n,
            m,
            lambda,
            delta,
            sigma,
            tau,
        } => {
            if n == 0 || m == 0 {
                return Err(Failure::Input("--n and --M must be positive".into()));
            }
            let profile = SizeProfile {
                m,
                lambda,
                d: delta.max(1),
                tau: tau.unwrap_or(1),
                n,
            };
            let inp = EvalBoundInput::new(profile, delta, sigma);
            let mut doc = json!({
                "L_star": eval_zero_threshold(&inp, g.prec_ceiling)?,
                "U": eval_upper_threshold(&inp, g.prec_ceiling)?,
            });
            if let Some(t) = tau {
                doc["G"] = json!(sqrt_gap_threshold(n, t, g.prec_ceiling)?);
            }
            out(doc)
        }
        Cmd::Eval { system, target } => {
            let spec = load_system(&system)?;
            let ell = spec.f.degree_in(spec.n()) as usize;
            let mut points = Vec::new();
            for mut p in build_grid(&spec)? {
                let coeffs = {
                    let mut o = FiberOracle::raw(&spec.f, &mut p, ell);
                    o.raw_coefficients(target)?
                };
                points.push(json!({"point": p, "coefficients": coeffs.coeffs()}));
            }
            out(json!({"schema": SCHEMA, "target": target, "points": points}))
        }
        Cmd::Verify { report, oracle_prec } => {
            let doc = ReportDocument::from_json(&read(&report)?)?;
            let spec = doc.system.to_spec()?;
            match verify_report(&spec, &doc.report, oracle_prec) {
                Ok(()) => out(json!({"verdict": "pass"})),
                Err(Error::VerificationFailed(reason)) => {
                    Ok((render(&json!({"verdict": "fail", "reason": reason}), g.pretty), false))
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, ok)) => {
            // a closed pipe is not an error for a filter-style tool
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Refusal(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
