//! End-to-end solver for `F_1(X_1) = .. = F_n(X_n) = F(X_1, .., X_n, Y) = 0`.
//!
//! The grid `V(F_1) x .. x V(F_n)` is isolated first. For every grid point
//! `x` the degree `ell` of `F_x = F(x, Y)` is found by certified zero tests,
//! the number of distinct roots `k` comes from the principal subresultant
//! coefficients of the truncation `F_ell`, and `F_x` is then isolated by
//! [`cluster_isolate_with`] fed from a [`FiberOracle`].

mod oracle;
mod point;
mod report;
mod verify;

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{eval_zero_threshold, point_measures, EvalBoundInput, PointMeasures, SeparationDiagnostics};
use crate::error::{Error, Result};
use crate::isolate::{cluster_isolate_with, isolate_with_factors, ClusterReport, IsolateConfig, IsolatedRoot, Stopping};
use crate::poly::{parse_axis_poly, parse_system_poly, IntPolyMulti, IntPolyUni, SizeProfile};
use crate::subres::{count_with_sequence, degree_at, sres_in_y, SresCache};
use crate::arith::Dyadic;

pub use oracle::FiberOracle;
pub use point::AlgebraicPoint;
pub use report::{ReportDocument, SystemSource, Timing, SCHEMA};
pub use verify::verify_report;

/// A triangular system: `n` univariate polynomials `F_i(X_i)` and one
/// polynomial `F` in `X_1, .., X_n, Y`.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemSpec {
    pub axes: Vec<IntPolyUni>,
    pub f: IntPolyMulti,
    pub profile: SizeProfile,
}

impl SystemSpec {
    pub fn new(axes: Vec<IntPolyUni>, f: IntPolyMulti) -> Result<Self> {
        let n = axes.len();
        if n == 0 {
            return Err(Error::InvalidInput("a system needs at least one axis polynomial".into()));
        }
        if let Some(i) = axes.iter().position(|p| p.is_zero() || p.degree() == 0) {
            return Err(Error::InvalidInput(format!("F_{} is constant", i + 1)));
        }
        if f.nvars() != n + 1 {
            return Err(Error::InvalidInput(format!(
                "F has {} variables, expected {}",
                f.nvars(),
                n + 1
            )));
        }
        if f.degree_in(n) == 0 {
            return Err(Error::InvalidInput("F does not involve Y".into()));
        }
        let profile = SizeProfile::measure(&axes, &f);
        Ok(SystemSpec { axes, f, profile })
    }

    /// Parse from polynomial strings in `X1..Xn, Y`.
    pub fn parse(f: &str, axes: &[&str]) -> Result<Self> {
        let n = axes.len();
        let ax = axes
            .iter()
            .enumerate()
            .map(|(i, s)| parse_axis_poly(s, i + 1, n))
            .collect::<Result<Vec<_>>>()?;
        SystemSpec::new(ax, parse_system_poly(f, n)?)
    }

    pub fn n(&self) -> usize {
        self.axes.len()
    }
}

/// Solve mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Distinct-root counts drive adaptive precision doubling.
    Adaptive,
    /// One fixed worst-case precision budget; no root counting.
    MaxPrecision,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub mode: Mode,
    /// Refuse instances whose thresholds or precision exceed this.
    pub ceiling: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    pub diagnostics: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            mode: Mode::Adaptive,
            ceiling: 1 << 20,
            seed: 0,
            threads: None,
            diagnostics: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberStatus {
    Roots,
    /// `F_x` is a nonzero constant.
    NoRoots,
    /// `F_x` vanishes identically; the whole line above `x` solves the
    /// system.
    IdenticallyZero,
}

/// Root of the system above one grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberRoot {
    pub disc: crate::arith::ComplexBall,
    /// Multiplicity as a root of `F_x`.
    pub multiplicity: u32,
    /// `mult(x) * multiplicity`.
    pub system_multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub point: AlgebraicPoint,
    pub status: FiberStatus,
    /// Degree of `F_x`.
    pub degree: u32,
    /// Number of distinct roots of `F_x`.
    pub distinct: u32,
    pub roots: Vec<FiberRoot>,
    /// Working precision of the certifying round (0 without roots).
    pub precision: u64,
}

/// Parameters of the fixed precision budget in max-precision mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxBudget {
    /// Separation exponent: distinct roots of every `F_x` are more than
    /// `2^-separation` apart.
    pub separation: u64,
    /// Initial coefficient precision per fiber, in bits.
    pub precision: u64,
    /// Number of fibers that needed more than one round.
    pub escalations: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub mode: Mode,
    pub entries: Vec<Entry>,
    /// Sum of all system multiplicities.
    pub total_mult: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_budget: Option<MaxBudget>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<SeparationDiagnostics>,
}

impl SolveReport {
    /// `(point index, root index)` pairs with their system multiplicity.
    pub fn system_roots(&self) -> impl Iterator<Item = (usize, &FiberRoot)> {
        self.entries
            .iter()
            .enumerate()
            .flat_map(|(i, e)| e.roots.iter().map(move |r| (i, r)))
    }
}

/// Cartesian product of the isolated roots of the `F_i`, in lexicographic
/// order of per-axis root indices (each axis sorted by center).
pub fn build_grid(spec: &SystemSpec) -> Result<Vec<AlgebraicPoint>> {
    build_grid_with(spec, &IsolateConfig::default())
}

fn build_grid_with(spec: &SystemSpec, cfg: &IsolateConfig) -> Result<Vec<AlgebraicPoint>> {
    let per_axis = spec
        .axes
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let c = IsolateConfig {
                stream: i as u64,
                ..*cfg
            };
            Ok(isolate_with_factors(f, &c)?
                .into_iter()
                .map(|(r, fac)| (r, Arc::new(fac)))
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut points = vec![(Vec::new(), Vec::new())];
    for axis in &per_axis {
        let mut next = Vec::with_capacity(points.len() * axis.len());
        for (coords, facs) in &points {
            for (r, fac) in axis {
                let mut c: Vec<IsolatedRoot> = Vec::clone(coords);
                let mut f: Vec<Arc<IntPolyUni>> = Vec::clone(facs);
                c.push(r.clone());
                f.push(fac.clone());
                next.push((c, f));
            }
        }
        points = next;
    }
    Ok(points
        .into_iter()
        .map(|(c, f)| AlgebraicPoint::new(c, f))
        .collect())
}

fn refusal(e: Error) -> Error {
    match e {
        Error::Overflow { bits, ceiling } => {
            Error::InstanceTooLarge(format!("a threshold of {bits} bits exceeds the ceiling {ceiling}"))
        }
        other => other,
    }
}

/// Separation exponent for max-precision mode: the zero-test threshold for
/// principal subresultant coefficients of `(F, dF/dY)`.
pub fn max_precision_separation(spec: &SystemSpec, ceiling: u64) -> Result<u64> {
    let y = spec.n();
    let seq = sres_in_y(&spec.f, &spec.f.derivative(y))?;
    let sigma = seq.coeffs.iter().map(IntPolyMulti::bitsize).max().unwrap_or(1).max(1);
    let d = spec.profile.d;
    let inp = EvalBoundInput::new(spec.profile, 2 * d * d, sigma);
    eval_zero_threshold(&inp, ceiling).map_err(refusal)
}

struct Fiber {
    entry: Entry,
    rounds: u32,
}

fn empty_entry(point: AlgebraicPoint, status: FiberStatus, degree: u32) -> Entry {
    Entry {
        point,
        status,
        degree,
        distinct: 0,
        roots: Vec::new(),
        precision: 0,
    }
}

fn finish(point: AlgebraicPoint, ell: u32, rep: ClusterReport) -> Fiber {
    let roots: Vec<FiberRoot> = rep
        .roots
        .into_iter()
        .map(|r| FiberRoot {
            system_multiplicity: point.mult * r.multiplicity as u64,
            disc: r.disc,
            multiplicity: r.multiplicity,
        })
        .collect();
    Fiber {
        entry: Entry {
            point,
            status: FiberStatus::Roots,
            degree: ell,
            distinct: roots.len() as u32,
            roots,
            precision: rep.precision,
        },
        rounds: rep.rounds,
    }
}

fn solve_fiber(
    spec: &SystemSpec,
    mut point: AlgebraicPoint,
    ell: u32,
    stop: Stopping,
    cfg: IsolateConfig,
) -> Result<Fiber> {
    let rep = {
        let mut oracle = FiberOracle::new(&spec.f, &mut point, ell as usize)?;
        cluster_isolate_with(&mut oracle, ell as usize, stop, &cfg)?
    };
    Ok(finish(point, ell, rep))
}

/// Solve the system. Grid points are processed in parallel; the report is
/// identical to a sequential run.
pub fn solve(spec: &SystemSpec, opts: &SolveOptions) -> Result<SolveReport> {
    match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::InvalidInput(e.to_string()))?
            .install(|| solve_inner(spec, opts)),
        None => solve_inner(spec, opts),
    }
}

fn solve_inner(spec: &SystemSpec, opts: &SolveOptions) -> Result<SolveReport> {
    let base = IsolateConfig {
        ceiling: opts.ceiling,
        seed: opts.seed,
        ..IsolateConfig::default()
    };
    let profile = spec.profile;
    let grid = build_grid_with(spec, &base)?;

    let degrees: Vec<(AlgebraicPoint, Option<u32>)> = grid
        .into_par_iter()
        .map(|mut p| {
            let d = degree_at(&spec.f, &mut p, &profile, opts.ceiling).map_err(refusal)?;
            Ok((p, d))
        })
        .collect::<Result<_>>()?;

    let budget = match opts.mode {
        Mode::Adaptive => None,
        Mode::MaxPrecision => {
            let b = max_precision_separation(spec, opts.ceiling)?;
            let ell_max = degrees.iter().filter_map(|(_, d)| *d).max().unwrap_or(0) as u64;
            let p = ell_max.max(1) * (b + 8) + 64;
            if p > opts.ceiling {
                return Err(Error::InstanceTooLarge(format!(
                    "max-precision budget of {p} bits exceeds the ceiling {}",
                    opts.ceiling
                )));
            }
            Some(MaxBudget {
                separation: b,
                precision: p,
                escalations: 0,
            })
        }
    };

    let mut cache = SresCache::new();
    if opts.mode == Mode::Adaptive {
        let ells: Vec<u32> = degrees
            .iter()
            .filter_map(|(_, d)| d.filter(|&l| l >= 2))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let seqs: Vec<_> = ells
            .par_iter()
            .map(|&l| crate::subres::sres_of_truncation(&spec.f, l))
            .collect::<Result<_>>()?;
        for s in seqs {
            cache.insert(s);
        }
    }

    let fibers: Vec<Fiber> = degrees
        .into_par_iter()
        .enumerate()
        .map(|(idx, (mut point, d))| {
            let Some(ell) = d else {
                return Ok(Fiber {
                    entry: empty_entry(point, FiberStatus::IdenticallyZero, 0),
                    rounds: 0,
                });
            };
            if ell == 0 {
                return Ok(Fiber {
                    entry: empty_entry(point, FiberStatus::NoRoots, 0),
                    rounds: 0,
                });
            }
            let mut cfg = IsolateConfig {
                stream: 1000 + idx as u64,
                ..base
            };
            let stop = match budget {
                None => {
                    let k = if ell == 1 {
                        1
                    } else {
                        let seq = cache.get(ell).expect("sequence computed for every realized degree");
                        count_with_sequence(seq, &mut point, &profile, opts.ceiling).map_err(refusal)?
                    };
                    Stopping::DistinctRoots(k)
                }
                Some(b) => {
                    cfg.start_prec = ell as u64 * (b.separation + 8) + 64;
                    Stopping::Separation(b.separation)
                }
            };
            solve_fiber(spec, point, ell, stop, cfg)
        })
        .collect::<Result<_>>()?;

    let escalations = fibers.iter().filter(|f| f.rounds > 1).count() as u64;
    let entries: Vec<Entry> = fibers.into_iter().map(|f| f.entry).collect();
    let total_mult = entries
        .iter()
        .flat_map(|e| e.roots.iter().map(|r| r.system_multiplicity))
        .sum();
    let mut report = SolveReport {
        mode: opts.mode,
        entries,
        total_mult,
        max_budget: budget.map(|b| MaxBudget { escalations, ..b }),
        diagnostics: None,
    };
    if opts.diagnostics {
        report.diagnostics = Some(diagnostics(spec, &mut report, opts)?);
    }
    Ok(report)
}

/// Multiplicity-weighted `log M`, `lGDisc` and `lsep` of the fibers `F_x`,
/// base-2 logs. Roots are re-isolated at higher precision when their discs
/// are too wide for the measurement.
pub fn diagnostics(spec: &SystemSpec, report: &mut SolveReport, opts: &SolveOptions) -> Result<SeparationDiagnostics> {
    const PREC: u64 = 128;
    let per_point: Vec<PointMeasures> = report
        .entries
        .par_iter_mut()
        .enumerate()
        .filter(|(_, e)| e.status == FiberStatus::Roots)
        .map(|(idx, e)| {
            let ell = e.degree as usize;
            let mut point = e.point.clone();
            let mut roots: Vec<(crate::arith::ComplexBall, u32)> =
                e.roots.iter().map(|r| (r.disc.clone(), r.multiplicity)).collect();
            let mut start = PREC;
            for _ in 0..8 {
                let coeffs = FiberOracle::new(&spec.f, &mut point, ell)?.raw_coefficients(PREC + 64)?;
                match point_measures(&coeffs, &roots, PREC) {
                    Ok((lm, lg, ls)) => {
                        return Ok(PointMeasures {
                            point: idx,
                            mult: e.point.mult,
                            log_mahler: Dyadic::from_f64(lm),
                            lgdisc: Dyadic::from_f64(lg),
                            lsep: Dyadic::from_f64(ls),
                        })
                    }
                    Err(Error::InsufficientPrecision(_)) => {
                        start *= 2;
                        let cfg = IsolateConfig {
                            start_prec: start,
                            ceiling: opts.ceiling,
                            seed: opts.seed,
                            stream: 1000 + idx as u64,
                        };
                        let mut oracle = FiberOracle::new(&spec.f, &mut point, ell)?;
                        let rep = cluster_isolate_with(&mut oracle, ell, Stopping::DistinctRoots(e.distinct), &cfg)?;
                        roots = rep.roots.into_iter().map(|r| (r.disc, r.multiplicity)).collect();
                    }
                    Err(other) => return Err(other),
                }
            }
            Err(Error::InsufficientPrecision("diagnostic measurements did not resolve".into()))
        })
        .collect::<Result<_>>()?;
    Ok(SeparationDiagnostics::from_points(per_point))
}
