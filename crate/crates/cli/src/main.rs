//! `edes`: exponent tables, kernel checks, slicing traces, radial blow-up
//! simulations, lifespan sweeps and the full verification report.
//!
//! Exit status: 0 on success, 1 on invalid input or I/O failure, 2 when a
//! numerical routine fails or a check does not pass.

mod output;
mod report;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use edes_core::checks::{self, kernel_point_residuals, CheckOptions, Profile};
use edes_core::exponents::{classify_lifespan, exponent_report};
use edes_core::iteration::{
    iteration_frame_check, iteration_trace_p0, iteration_trace_p1, lifespan_threshold_crit_p0,
    lifespan_threshold_crit_p1, parse_rational, CritP0Constants, CritP1Constants, IterationCase,
};
use edes_core::kernels::{
    hypergeometric_wronskian, representation_disagreement, Kernel, KernelContext, KernelFault,
    SpacetimeParams,
};
use edes_core::pde_sim::{
    eps_grid, fit_lifespan, fitted_constants, run, sweep, SimConfig, SimResult,
};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use output::{to_json, to_json_with_echo, Cell, Csv, Sink};

/// Inputs within this distance of 2/3 are read as exactly 2/3, so `--k 0.6667`
/// selects the Einstein-de Sitter case.
const K_SNAP: f64 = 5e-4;

#[derive(Parser, Debug)]
#[command(
    name = "edes",
    version,
    about = "Blow-up and lifespan toolkit for u_tt - t^{-2k} Δu = t^{1-p}|u|^p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Directory for artifacts; without it results go to stdout only.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Format printed to stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ProfileArg {
    Quick,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GridArg {
    Default,
    Fine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    P0,
    P1,
}

#[derive(clap::Args, Debug, Clone)]
struct SpaceArgs {
    /// Spatial dimension.
    #[arg(long, default_value_t = 3)]
    n: u32,
    /// Metric exponent in [0, 1).
    #[arg(long, default_value_t = 2.0 / 3.0)]
    k: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Critical exponents, dimension thresholds and the lifespan regime.
    Exponents {
        #[command(flatten)]
        space: SpaceArgs,
        /// Real-valued dimension, overriding --n.
        #[arg(long)]
        real_n: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Kernel values and identity residuals on a grid.
    Kernels {
        #[command(flatten)]
        space: SpaceArgs,
        /// Fail with status 2 when any identity exceeds its tolerance.
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value_t = GridArg::Default)]
        grid: GridArg,
        /// Corrupt the Bessel K scaling to confirm the checks fail.
        #[arg(long)]
        inject_fault: bool,
    },
    /// Exact slicing sequences, constant recursions and lifespan thresholds.
    Iterate {
        #[command(flatten)]
        space: SpaceArgs,
        /// Exponent, decimal or rational such as 5/2.
        #[arg(long)]
        p: String,
        /// Amplitudes, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0.5,0.2,0.1")]
        eps: Vec<f64>,
        #[arg(long, value_enum, default_value_t = CaseArg::P0)]
        case: CaseArg,
        #[arg(long, default_value_t = 20)]
        j_max: usize,
        /// Frame constant C.
        #[arg(long, default_value_t = 1.0)]
        c_frame: f64,
        /// First-logarithmic-bound constant M (first critical case).
        #[arg(long, default_value_t = 1.0)]
        m_const: f64,
        /// Linear-growth constant K (second critical case).
        #[arg(long, default_value_t = 1.0)]
        k_const: f64,
        /// Support radius R (second critical case).
        #[arg(long, default_value_t = 1.0)]
        r_support: f64,
    },
    /// One radial simulation: time series CSV and a summary.
    Simulate {
        #[command(flatten)]
        space: SpaceArgs,
        /// JSON simulation config; overrides the other flags.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 0.3)]
        eps: f64,
        #[arg(long, default_value_t = 20_000.0)]
        t_max: f64,
        #[arg(long)]
        dr: Option<f64>,
    },
    /// ε sweep with the lifespan slope fit.
    Sweep {
        #[command(flatten)]
        space: SpaceArgs,
        /// JSON sweep config (`base` simulation config plus `eps`).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        #[arg(long, default_value_t = 20_000.0)]
        t_max: f64,
        #[arg(long)]
        dr: Option<f64>,
    },
    /// Every check, as a Markdown report.
    VerifyAll {
        #[arg(long, value_enum, default_value_t = ProfileArg::Quick)]
        profile: ProfileArg,
        #[arg(long)]
        inject_fault: bool,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

/// Raised when a check ran but did not pass.
#[derive(Debug)]
struct ChecksFailed(String);

impl std::fmt::Display for ChecksFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ChecksFailed {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<ChecksFailed>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<edes_core::Error>() {
            return match e {
                edes_core::Error::InvalidConfig(_) | edes_core::Error::Domain { .. } => 1,
                _ => 2,
            };
        }
    }
    1
}

fn snap_k(k: f64) -> f64 {
    if (k - 2.0 / 3.0).abs() <= K_SNAP {
        2.0 / 3.0
    } else {
        k
    }
}

fn params(space: &SpaceArgs) -> Result<SpacetimeParams<f64>> {
    Ok(SpacetimeParams::new(snap_k(space.k), space.n)?)
}

fn print(s: &str) {
    print!("{s}");
}

#[derive(Serialize)]
struct Input {
    n: f64,
    k_input: f64,
    k: f64,
    p: Option<f64>,
}

fn cmd_exponents(
    sink: &Sink,
    format: Format,
    space: &SpaceArgs,
    real_n: Option<f64>,
    p: Option<f64>,
) -> Result<()> {
    let n = real_n.unwrap_or(f64::from(space.n));
    let k = snap_k(space.k);
    let report = exponent_report(n, k, p)?;
    #[derive(Serialize)]
    struct Out<'a> {
        input: Input,
        report: &'a edes_core::ExponentReport64,
    }
    let json = to_json(&Out {
        input: Input {
            n,
            k_input: space.k,
            k,
            p,
        },
        report: &report,
    })?;
    sink.write("exponents.json", &json)?;
    match format {
        Format::Json => print(&json),
        _ => bail!(edes_core::Error::InvalidConfig(
            "exponents supports --format json only".into()
        )),
    }
    Ok(())
}

fn kernel_points(grid: GridArg) -> Vec<(f64, f64, f64)> {
    let (nt, nl) = match grid {
        GridArg::Default => (12, 8),
        GridArg::Fine => (24, 16),
    };
    let mut pts = Vec::new();
    for &s in &[1.0, 2.0, 5.0] {
        for i in 0..nt {
            let t = s * (50.0f64 / s).powf(f64::from(i) / f64::from(nt - 1));
            for j in 0..nl {
                let lambda = 0.05 * 100f64.powf(f64::from(j) / f64::from(nl - 1));
                pts.push((t, s, lambda));
            }
        }
    }
    pts
}

fn cmd_kernels(
    sink: &Sink,
    format: Format,
    space: &SpaceArgs,
    check: bool,
    grid: GridArg,
    fault: bool,
) -> Result<()> {
    let params = params(space)?;
    let ctx = KernelContext::with_fault(if fault {
        KernelFault::FlipKScaling
    } else {
        KernelFault::None
    });
    let mut csv = Csv::new(&[
        "k",
        "n",
        "t",
        "s",
        "lambda",
        "y0",
        "y1",
        "initial",
        "ode_y0",
        "ode_y1",
        "ds_identity",
        "adjoint",
        "rep_disagreement",
        "pass",
    ]);
    let (mut worst_initial, mut worst_diff, mut worst_rep) = (0.0f64, 0.0f64, 0.0f64);
    let mut errors = Vec::new();
    let mut points = 0u64;
    for (t, s, lambda) in kernel_points(grid) {
        points += 1;
        let res = kernel_point_residuals(&params, t, s, lambda, &ctx);
        let rep = if params.is_two_thirds() && t > s {
            let d = [Kernel::Y0, Kernel::Y1]
                .into_iter()
                .map(|kern| representation_disagreement(kern, t, s, lambda, &params, &ctx))
                .collect::<edes_core::Result<Vec<f64>>>();
            Some(d.map(|v| v.into_iter().fold(0.0, f64::max)))
        } else {
            None
        };
        match (res, rep.transpose()) {
            (Ok(r), Ok(rep)) => {
                worst_initial = worst_initial.max(r.initial);
                worst_diff = worst_diff.max(r.worst_differential());
                if let Some(d) = rep {
                    worst_rep = worst_rep.max(d);
                }
                let pass = r.passes() && rep.map_or(true, |d| d <= 1e-9);
                csv.row(&[
                    Cell::F(params.k),
                    Cell::U(u64::from(params.n)),
                    Cell::F(t),
                    Cell::F(s),
                    Cell::F(lambda),
                    Cell::F(r.y0),
                    Cell::F(r.y1),
                    Cell::F(r.initial),
                    Cell::F(r.ode_y0),
                    Cell::F(r.ode_y1),
                    Cell::F(r.ds_identity),
                    Cell::F(r.adjoint),
                    Cell::OptF(rep),
                    Cell::B(pass),
                ]);
            }
            (Err(e), _) | (_, Err(e)) => errors.push(format!("t={t} s={s} lambda={lambda}: {e}")),
        }
    }
    let mut worst_wronskian = 0.0f64;
    for &nu in &[0.5, 0.75, 1.0, 1.5, 2.5, params.nu()] {
        for i in 0..=200 {
            let z = 0.1 + 19.9 * f64::from(i) / 200.0;
            match ctx.scaled_with_derivatives(nu, z) {
                Ok((ii, ip, kk, kp)) => {
                    worst_wronskian = worst_wronskian.max(((ii * kp - ip * kk) + 1.0 / z).abs() * z)
                }
                Err(e) => errors.push(format!("wronskian nu={nu} z={z}: {e}")),
            }
        }
    }
    let hyper = if params.is_two_thirds() {
        let mut w = 0.0f64;
        for &(t, _, lambda) in &kernel_points(grid) {
            let exact = 18.0 * lambda.powi(3);
            w = w.max((hypergeometric_wronskian(t, lambda) - exact).abs() / exact);
        }
        Some(w)
    } else {
        None
    };
    let passed = errors.is_empty()
        && worst_initial <= 1e-10
        && worst_diff <= 1e-5
        && worst_rep <= 1e-9
        && worst_wronskian <= 1e-10
        && hyper.map_or(true, |w| w <= 1e-10);
    #[derive(Serialize)]
    struct Summary {
        k_input: f64,
        k: f64,
        n: u32,
        fault_injected: bool,
        points: u64,
        worst_initial: f64,
        worst_differential: f64,
        worst_rep_disagreement: Option<f64>,
        worst_bessel_wronskian: f64,
        worst_hypergeometric_wronskian: Option<f64>,
        errors: Vec<String>,
        passed: bool,
    }
    let summary = Summary {
        k_input: space.k,
        k: params.k,
        n: params.n,
        fault_injected: fault,
        points,
        worst_initial,
        worst_differential: worst_diff,
        worst_rep_disagreement: params.is_two_thirds().then_some(worst_rep),
        worst_bessel_wronskian: worst_wronskian,
        worst_hypergeometric_wronskian: hyper,
        errors,
        passed,
    };
    let json = to_json(&summary)?;
    let csv = csv.finish();
    sink.write("kernels.csv", &csv)?;
    sink.write("kernels.json", &json)?;
    match format {
        Format::Csv => print(&csv),
        Format::Json => print(&json),
        Format::Svg => bail!(edes_core::Error::InvalidConfig(
            "kernels has no plot".into()
        )),
    }
    if check && !passed {
        return Err(ChecksFailed("kernel identity checks failed".into()).into());
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_iterate(
    sink: &Sink,
    format: Format,
    space: &SpaceArgs,
    p_text: &str,
    eps: &[f64],
    case: CaseArg,
    j_max: usize,
    consts: (f64, f64, f64, f64),
) -> Result<()> {
    let params = params(space)?;
    let p_exact = parse_rational(p_text)?;
    let p = p_exact
        .to_f64()
        .ok_or_else(|| anyhow!("p = {p_text} is not representable"))?;
    let (c_frame, m_const, k_const, r_support) = consts;
    if eps.is_empty() || eps.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
        bail!(edes_core::Error::InvalidConfig(
            "--eps must list positive amplitudes".into()
        ));
    }
    #[derive(Serialize)]
    struct Entry {
        eps: f64,
        log_time: f64,
        /// `null` when the time exceeds the floating-point range.
        time: f64,
        trace: edes_core::IterationTrace64,
    }
    let mut entries = Vec::new();
    for &e in eps {
        let entry = match case {
            CaseArg::P0 => {
                let c = CritP0Constants {
                    c_frame,
                    gamma_k: params.gamma_k(),
                    m_const,
                };
                let th = lifespan_threshold_crit_p0(e, p, c.log_e(p))?;
                Entry {
                    eps: e,
                    log_time: th.log_time,
                    time: th.time,
                    trace: iteration_trace_p0(&c, p, e, j_max)?,
                }
            }
            CaseArg::P1 => {
                let c = CritP1Constants {
                    c_frame,
                    k_const,
                    r_support,
                };
                let th = lifespan_threshold_crit_p1(e, p, c.log_n(p))?;
                Entry {
                    eps: e,
                    log_time: th.log_time,
                    time: th.time,
                    trace: iteration_trace_p1(&c, p, e, j_max)?,
                }
            }
        };
        entries.push(entry);
    }
    #[derive(Serialize)]
    struct Out {
        n: u32,
        k_input: f64,
        k: f64,
        p_input: String,
        p: f64,
        case: IterationCase,
        c_frame: f64,
        m_const: f64,
        k_const: f64,
        r_support: f64,
        entries: Vec<Entry>,
    }
    let out = Out {
        n: params.n,
        k_input: space.k,
        k: params.k,
        p_input: p_text.to_string(),
        p,
        case: match case {
            CaseArg::P0 => IterationCase::CritP0,
            CaseArg::P1 => IterationCase::CritP1,
        },
        c_frame,
        m_const,
        k_const,
        r_support,
        entries,
    };
    let json = to_json(&out)?;
    let mut csv = Csv::new(&["eps", "log_time", "time"]);
    for e in &out.entries {
        csv.row(&[Cell::F(e.eps), Cell::F(e.log_time), Cell::F(e.time)]);
    }
    let csv = csv.finish();
    sink.write("iterate.json", &json)?;
    sink.write("iterate.csv", &csv)?;
    match format {
        Format::Json => print(&json),
        Format::Csv => print(&csv),
        Format::Svg => bail!(edes_core::Error::InvalidConfig(
            "iterate has no plot".into()
        )),
    }
    Ok(())
}

/// Reads a JSON file, returning the parsed document (for the echo) and the typed value.
fn read_config<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<(Value, T)> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let doc: Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing config {}", path.display()))?;
    let typed = serde_json::from_value(doc.clone())
        .map_err(|e| edes_core::Error::InvalidConfig(format!("{}: {e}", path.display())))?;
    Ok((doc, typed))
}

fn flag_config(
    space: &SpaceArgs,
    p: f64,
    eps: f64,
    t_max: f64,
    dr: Option<f64>,
) -> Result<SimConfig<f64>> {
    let mut cfg = SimConfig::new(params(space)?, p, eps, t_max)?;
    if let Some(dr) = dr {
        cfg = cfg.with_dr(dr);
    }
    Ok(cfg.with_frame_aux()?)
}

fn simulation_csv(sim: &SimResult<f64>) -> String {
    let mut csv = Csv::new(&["t", "max_u", "U", "curlyU", "support_radius"]);
    for d in &sim.diagnostics {
        csv.row(&[
            Cell::F(d.t),
            Cell::F(d.max_u),
            Cell::F(d.u_integral),
            Cell::OptF(d.curly_u),
            Cell::F(d.support_radius),
        ]);
    }
    csv.finish()
}

#[derive(Serialize)]
struct SimSummary {
    blew_up: bool,
    #[serde(rename = "T_num")]
    t_num: Option<f64>,
    uncertainty: Option<f64>,
    refinement_agreement: Option<f64>,
    threshold_times: Vec<edes_core::pde_sim::ThresholdCrossing<f64>>,
    fitted_constants: edes_core::FittedConstants64,
    frame_case: Option<IterationCase>,
    max_cone_excess: f64,
    weak_residual: f64,
    t_end: f64,
    steps: u64,
}

fn summarize(sim: &SimResult<f64>) -> SimSummary {
    let case = if sim.config.aux.is_some() {
        IterationCase::CritP0
    } else {
        IterationCase::CritP1
    };
    let frame = iteration_frame_check(sim, case).ok();
    SimSummary {
        blew_up: sim.blew_up,
        t_num: sim.t_num,
        uncertainty: sim.uncertainty,
        refinement_agreement: sim.refinement_agreement,
        threshold_times: sim.threshold_times.clone(),
        fitted_constants: fitted_constants(sim, frame.as_ref()),
        frame_case: frame.map(|_| case),
        max_cone_excess: sim.max_cone_excess,
        weak_residual: sim.weak_residual,
        t_end: sim.t_end,
        steps: sim.steps as u64,
    }
}

fn cmd_simulate(sink: &Sink, format: Format, cfg: SimConfig<f64>, echo: Value) -> Result<()> {
    cfg.validate()?;
    let sim = run(&cfg)?;
    let csv = simulation_csv(&sim);
    let json = to_json_with_echo(&summarize(&sim), Some(&echo))?;
    let plot = svg::plot(
        "max |u| against t",
        "t",
        "log10 max|u|",
        &[svg::Series {
            label: "max |u|",
            points: sim
                .diagnostics
                .iter()
                .filter(|d| d.max_u > 0.0)
                .map(|d| (d.t, d.max_u.log10()))
                .collect(),
            dashed: false,
        }],
    );
    sink.write("simulate.csv", &csv)?;
    sink.write("summary.json", &json)?;
    if format == Format::Svg {
        sink.write("simulate.svg", &plot)?;
    }
    match format {
        Format::Csv => print(&csv),
        Format::Json => print(&json),
        Format::Svg => print(&plot),
    }
    Ok(())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    base: SimConfig<f64>,
    #[serde(default)]
    eps: Option<Vec<f64>>,
}

fn cmd_sweep(
    sink: &Sink,
    format: Format,
    base: SimConfig<f64>,
    eps: Vec<f64>,
    echo: Value,
) -> Result<()> {
    base.validate()?;
    let params = base.params;
    let class = classify_lifespan(params.n_real(), params.k, base.p)?;
    let law = class.law.ok_or_else(|| {
        edes_core::Error::InvalidConfig(format!(
            "no lifespan prediction for p = {} in regime {:?}",
            base.p, class.regime
        ))
    })?;
    let cfgs: Vec<SimConfig<f64>> = eps
        .iter()
        .map(|&e| SimConfig {
            eps: e,
            ..base.clone()
        })
        .collect();
    let mut sims = Vec::new();
    for r in sweep(&cfgs) {
        sims.push(r?);
    }
    let samples: Vec<(f64, Option<f64>)> = sims
        .iter()
        .map(|s| (s.config.eps, if s.blew_up { s.t_num } else { None }))
        .collect();
    let fit = fit_lifespan(law, &samples)?;
    #[derive(Serialize)]
    struct Run {
        eps: f64,
        blew_up: bool,
        #[serde(rename = "T_num")]
        t_num: Option<f64>,
        uncertainty: Option<f64>,
    }
    #[derive(Serialize)]
    struct Out {
        fitted_slope: f64,
        predicted_exponent: f64,
        relative_error: f64,
        tolerance: f64,
        consistent: bool,
        monotone: bool,
        fit: edes_core::pde_sim::FitReport<f64>,
        runs: Vec<Run>,
    }
    let runs: Vec<Run> = sims
        .iter()
        .map(|s| Run {
            eps: s.config.eps,
            blew_up: s.blew_up,
            t_num: s.t_num,
            uncertainty: s.uncertainty,
        })
        .collect();
    let mut csv = Csv::new(&["eps", "blew_up", "T_num", "uncertainty"]);
    for r in &runs {
        csv.row(&[
            Cell::F(r.eps),
            Cell::B(r.blew_up),
            Cell::OptF(r.t_num),
            Cell::OptF(r.uncertainty),
        ]);
    }
    let out = Out {
        fitted_slope: fit.fitted_slope,
        predicted_exponent: fit.predicted_exponent,
        relative_error: fit.relative_error,
        tolerance: fit.tolerance,
        consistent: fit.consistent,
        monotone: fit.monotone,
        fit: fit.clone(),
        runs,
    };
    let json = to_json_with_echo(&out, Some(&echo))?;
    let csv = csv.finish();
    let measured: Vec<(f64, f64)> = fit.points.iter().map(|&(e, t)| (-e.ln(), t.ln())).collect();
    let predicted: Vec<(f64, f64)> = measured
        .iter()
        .map(|&(x, _)| (x, fit.intercept + fit.predicted_exponent * x))
        .collect();
    let plot = svg::plot(
        "lifespan sweep",
        "log(1/eps)",
        "log T_num",
        &[
            svg::Series {
                label: "measured",
                points: measured,
                dashed: false,
            },
            svg::Series {
                label: "predicted slope",
                points: predicted,
                dashed: true,
            },
        ],
    );
    sink.write("sweep.csv", &csv)?;
    sink.write("sweep.json", &json)?;
    if format == Format::Svg {
        sink.write("sweep.svg", &plot)?;
    }
    match format {
        Format::Csv => print(&csv),
        Format::Json => print(&json),
        Format::Svg => print(&plot),
    }
    Ok(())
}

fn cmd_verify_all(sink: &Sink, profile: ProfileArg, fault: bool, seed: u64) -> Result<()> {
    let opts = CheckOptions {
        profile: match profile {
            ProfileArg::Quick => Profile::Quick,
            ProfileArg::Full => Profile::Full,
        },
        fault: if fault {
            KernelFault::FlipKScaling
        } else {
            KernelFault::None
        },
        seed,
    };
    let outcomes = checks::run_all(&opts);
    let md = report::markdown(&opts, &outcomes);
    sink.write("report.md", &md)?;
    print(&md);
    let failed: Vec<String> = outcomes
        .iter()
        .flat_map(|o| {
            o.unexpected_failures()
                .map(move |s| format!("{}:{}", o.criterion, s.name))
        })
        .collect();
    if !failed.is_empty() {
        return Err(ChecksFailed(format!("failed checks: {}", failed.join(", "))).into());
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    let sink = Sink::new(cli.out.as_deref())?;
    let format = cli.format;
    match cli.command {
        Command::Exponents { space, real_n, p } => cmd_exponents(&sink, format, &space, real_n, p),
        Command::Kernels {
            space,
            check,
            grid,
            inject_fault,
        } => cmd_kernels(&sink, format, &space, check, grid, inject_fault),
        Command::Iterate {
            space,
            p,
            eps,
            case,
            j_max,
            c_frame,
            m_const,
            k_const,
            r_support,
        } => cmd_iterate(
            &sink,
            format,
            &space,
            &p,
            &eps,
            case,
            j_max,
            (c_frame, m_const, k_const, r_support),
        ),
        Command::Simulate {
            space,
            config,
            p,
            eps,
            t_max,
            dr,
        } => {
            let (echo, cfg) = match config {
                Some(path) => read_config::<SimConfig<f64>>(&path)?,
                None => {
                    let cfg = flag_config(&space, p, eps, t_max, dr)?;
                    (serde_json::to_value(&cfg)?, cfg)
                }
            };
            cmd_simulate(&sink, format, cfg, echo)
        }
        Command::Sweep {
            space,
            config,
            p,
            eps,
            t_max,
            dr,
        } => {
            let default_eps = || eps_grid(0.5, 0.05, 5);
            let (echo, base, list) = match config {
                Some(path) => {
                    let (doc, f) = read_config::<SweepFile>(&path)?;
                    let list = f.eps.clone().unwrap_or_else(default_eps);
                    (doc, f.base, list)
                }
                None => {
                    let mut base = SimConfig::new(params(&space)?, p, 0.5, t_max)?;
                    if let Some(dr) = dr {
                        base = base.with_dr(dr);
                    }
                    let list = eps.unwrap_or_else(default_eps);
                    let echo =
                        serde_json::json!({ "base": serde_json::to_value(&base)?, "eps": list });
                    (echo, base, list)
                }
            };
            cmd_sweep(&sink, format, base, list, echo)
        }
        Command::VerifyAll {
            profile,
            inject_fault,
            seed,
        } => cmd_verify_all(&sink, profile, inject_fault, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
