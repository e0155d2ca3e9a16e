//! The `hca` command-line front end.
//!
//! Payloads go to stdout (JSON lines for discrete data, CSV for continuum
//! tables). A one-line JSON run report with the echoed configuration, the
//! exit status and the wall-clock time goes to stderr, so stdout stays
//! byte-identical across runs.
//!
//! Exit codes: 0 success, 1 validation failure, 2 resource cap,
//! 3 internal invariant violation.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::action::{action_value, stationarity_check, TrajectoryWindow};
use crate::automaton::{hamiltonian_matrix, AutomatonSpec};
use crate::continuum::{
    dispersion_energy, dispersion_series, eigen_decompose, modified_schrodinger_residual, reconstruct,
    SampledWavefunction,
};
use crate::dynamics::{detect_period, evolve, invariant_series, EvolveConfig, StatePair, DEFAULT_BITCAP};
use crate::error::{Error, Result};
use crate::hermitian::HermitianIntMatrix;
use crate::io::{
    observable_to_json, parse_model, parse_observable, parse_operand, parse_records, polynomial_to_json,
    tick_record, BracketOperand, Model,
};
use crate::observables::{bracket_closed_form, poisson_bracket_variational, VariationChoice};
use crate::spectra::{enumerate_bounded_spectrum, Mode, ScanConfig, Witness};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Environment variable overriding the default component bit-length cap.
pub const BITCAP_ENV: &str = "HCA_BITCAP";

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BitCapExceeded { .. } | Error::SearchSpaceOverflow { .. } => EXIT_RESOURCE,
        Error::Internal(_) | Error::NonUnique(_) => EXIT_INTERNAL,
        _ => EXIT_VALIDATION,
    }
}

#[derive(Parser, Debug)]
#[command(name = "hca", version, about = "Exact integer Hamiltonian cellular automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve the initial pair and stream one record per tick.
    Evolve(EvolveArgs),
    /// Track the two-point invariant of an observable along a trajectory.
    Conserve(ConserveArgs),
    /// Poisson bracket of two observables or polynomials.
    Bracket(BracketArgs),
    /// Doubled action and stationarity report of a trajectory window.
    ActionCheck(ActionArgs),
    /// Band-limited reconstruction and modified Schrödinger residual.
    Reconstruct(ReconstructArgs),
    /// Stationary energies from sin(E l) = ε/2.
    Dispersion(DispersionArgs),
    /// Enumerate small integer matrices with spectrum in [-2, 2].
    Scan(ScanArgs),
    /// Smallest recurrence time of the initial pair.
    Period(PeriodArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Evolve(_) => "evolve",
            Command::Conserve(_) => "conserve",
            Command::Bracket(_) => "bracket",
            Command::ActionCheck(_) => "action-check",
            Command::Reconstruct(_) => "reconstruct",
            Command::Dispersion(_) => "dispersion",
            Command::Scan(_) => "scan",
            Command::Period(_) => "period",
        }
    }

    fn config(&self) -> Value {
        let v = match self {
            Command::Evolve(a) => serde_json::to_value(a),
            Command::Conserve(a) => serde_json::to_value(a),
            Command::Bracket(a) => serde_json::to_value(a),
            Command::ActionCheck(a) => serde_json::to_value(a),
            Command::Reconstruct(a) => serde_json::to_value(a),
            Command::Dispersion(a) => serde_json::to_value(a),
            Command::Scan(a) => serde_json::to_value(a),
            Command::Period(a) => serde_json::to_value(a),
        };
        v.unwrap_or(Value::Null)
    }
}

#[derive(Args, Debug, Serialize)]
struct BitcapArg {
    /// Maximum component bit length (overrides HCA_BITCAP).
    #[arg(long)]
    bitcap: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
struct EvolveArgs {
    #[arg(long)]
    model: PathBuf,
    /// Number of steps; negative runs backward.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
    steps: i64,
    /// Continue from the last two ticks of a record stream.
    #[arg(long)]
    init: Option<PathBuf>,
    #[command(flatten)]
    cap: BitcapArg,
    /// Emit `n,alpha,re,im` CSV instead of records.
    #[arg(long)]
    plot_data: bool,
}

#[derive(Args, Debug, Serialize)]
struct ConserveArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1000)]
    steps: i64,
    /// `identity`, `H`, `H2`, or a path to an observable file.
    #[arg(long, default_value = "identity")]
    observable: String,
    #[command(flatten)]
    cap: BitcapArg,
}

#[derive(Args, Debug, Serialize)]
struct BracketArgs {
    /// First operand: observable `{re, im, tick}` or term list `{terms}`.
    a: PathBuf,
    b: PathBuf,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [1, 2, 3])]
    delta: Vec<i64>,
}

#[derive(Args, Debug, Serialize)]
struct ActionArgs {
    #[arg(long)]
    model: PathBuf,
    /// Record stream to check; without it the window is generated from the
    /// model's initial pair.
    #[arg(long)]
    trajectory: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    steps: i64,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [1, 2, 3])]
    delta: Vec<i64>,
    /// Add 1 to x^0 at this tick before checking.
    #[arg(long, allow_negative_numbers = true)]
    perturb: Option<i64>,
    #[command(flatten)]
    cap: BitcapArg,
}

#[derive(Args, Debug, Serialize)]
struct ReconstructArgs {
    #[arg(long)]
    model: PathBuf,
    /// Number of forward steps sampled from the initial pair.
    #[arg(long, default_value_t = 24)]
    steps: i64,
    /// Query times in physical units.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [0.5])]
    t: Vec<f64>,
    /// Nodes used on each side of the query time.
    #[arg(long, default_value_t = 64)]
    window: usize,
    /// Treat the first P samples as one period of an infinite orbit.
    #[arg(long)]
    periodic: Option<usize>,
    /// Emit the samples as `n,alpha,re,im` CSV instead.
    #[arg(long)]
    plot_data: bool,
    #[command(flatten)]
    cap: BitcapArg,
}

#[derive(Args, Debug, Serialize)]
struct DispersionArgs {
    /// Eigenvalues ε to convert; defaults to the spectrum of the model.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    epsilon: Vec<f64>,
    #[arg(long)]
    model: Option<PathBuf>,
    /// Time scale; defaults to the model's, else 1.
    #[arg(long)]
    l: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
struct ScanArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 2)]
    bound: i64,
    /// One representative per permutation/switching class.
    #[arg(long)]
    dedup: bool,
    #[arg(long, default_value = "numeric", value_parser = ["numeric", "exact"])]
    mode: String,
    #[arg(long)]
    jobs: Option<usize>,
    /// Vary the antisymmetric imaginary part as well (dim <= 3).
    #[arg(long)]
    hermitian: bool,
}

#[derive(Args, Debug, Serialize)]
struct PeriodArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, default_value_t = 1_000_000)]
    max_steps: u64,
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = if shown {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return if shown { EXIT_OK } else { EXIT_VALIDATION };
        }
    };
    let started = Instant::now();
    let result = dispatch(&cli.command, out);
    let code = match &result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "hca: error: {e}");
            exit_code(e)
        }
    };
    let report = json!({
        "command": cli.command.name(),
        "config": cli.command.config(),
        "status": code,
        "error": result.as_ref().err().map(ToString::to_string),
        "elapsed_ms": started.elapsed().as_secs_f64() * 1e3,
    });
    let _ = writeln!(err, "{report}");
    code
}

fn dispatch(cmd: &Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Evolve(a) => cmd_evolve(a, out),
        Command::Conserve(a) => cmd_conserve(a, out),
        Command::Bracket(a) => cmd_bracket(a, out),
        Command::ActionCheck(a) => cmd_action(a, out),
        Command::Reconstruct(a) => cmd_reconstruct(a, out),
        Command::Dispersion(a) => cmd_dispersion(a, out),
        Command::Scan(a) => cmd_scan(a, out),
        Command::Period(a) => cmd_period(a, out),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<Model> {
    parse_model(&read(path)?).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn emit(out: &mut dyn Write, line: impl std::fmt::Display) -> Result<()> {
    writeln!(out, "{line}").map_err(|e| Error::Internal(format!("write failed: {e}")))
}

fn evolve_config(cap: &BitcapArg) -> Result<EvolveConfig> {
    let bitcap = match cap.bitcap {
        Some(b) => b,
        None => match std::env::var(BITCAP_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("{BITCAP_ENV}={v:?} is not a bit count")))?,
            Err(_) => DEFAULT_BITCAP,
        },
    };
    Ok(EvolveConfig { bitcap })
}

fn initial_pair(model: &Model, init: Option<&Path>) -> Result<StatePair> {
    match init {
        Some(p) => {
            let t = parse_records(&read(p)?)?;
            let pair = t.last_pair()?;
            pair.check_dim(model.spec.dim())?;
            Ok(pair)
        }
        None => model.initial().cloned(),
    }
}

fn csv_psi_rows(out: &mut dyn Write, n: i64, x: &[BigInt], p: &[BigInt]) -> Result<()> {
    for (alpha, (re, im)) in x.iter().zip(p).enumerate() {
        emit(out, format_args!("{n},{alpha},{re},{im}"))?;
    }
    Ok(())
}

fn cmd_evolve(a: &EvolveArgs, out: &mut dyn Write) -> Result<()> {
    let model = load_model(&a.model)?;
    let s = initial_pair(&model, a.init.as_deref())?;
    let t = evolve(&model.spec, &s, a.steps, &evolve_config(&a.cap)?)?;
    if a.plot_data {
        emit(out, "n,alpha,re,im")?;
        for st in t.sorted() {
            csv_psi_rows(out, st.tick, &st.x, &st.p)?;
        }
        return Ok(());
    }
    for st in &t.states {
        emit(out, tick_record(st))?;
    }
    Ok(())
}

fn observable_matrix(spec: &AutomatonSpec, which: &str) -> Result<HermitianIntMatrix> {
    let h = hamiltonian_matrix(spec);
    match which {
        "identity" | "I" => Ok(HermitianIntMatrix::identity(spec.dim())),
        "H" => Ok(h),
        "H2" => Ok(h.square()),
        path => Ok(parse_observable(&read(Path::new(path))?)?.g),
    }
}

fn cmd_conserve(a: &ConserveArgs, out: &mut dyn Write) -> Result<()> {
    let model = load_model(&a.model)?;
    let s = model.initial()?;
    let g = observable_matrix(&model.spec, &a.observable)?;
    let commutes = g.commutes_with(&hamiltonian_matrix(&model.spec))?;
    let series = invariant_series(&model.spec, &g, s, a.steps, &evolve_config(&a.cap)?)?;
    for (n, q) in &series.values {
        emit(out, json!({ "n": n, "q": q.to_string() }))?;
    }
    emit(
        out,
        json!({
            "verdict": if series.is_constant() { "constant" } else { "not-constant" },
            "first_violation": series.first_violation,
            "commutes_with_h": commutes,
            "constant_c": model.spec.has_constant_c(),
        }),
    )
}

fn cmd_bracket(a: &BracketArgs, out: &mut dyn Write) -> Result<()> {
    let lhs = parse_operand(&read(&a.a)?)?;
    let rhs = parse_operand(&read(&a.b)?)?;
    let (pa, pb) = (lhs.polynomial(), rhs.polynomial());
    let mut results = Vec::new();
    let mut values = Vec::new();
    let mut flagged = false;
    for &d in &a.delta {
        let r = poisson_bracket_variational(&pa, &pb, &VariationChoice::uniform(d)?)?;
        flagged |= r.delta_dependent;
        results.push(json!({ "delta": d, "bracket": polynomial_to_json(&r.value) }));
        values.push(r.value);
    }
    let differs = values.windows(2).any(|w| w[0] != w[1]);
    let mut report = json!({
        "results": results,
        "delta_dependent": flagged || differs,
    });
    if let (BracketOperand::Observable(g1), BracketOperand::Observable(g2)) = (&lhs, &rhs) {
        let k = bracket_closed_form(g1, g2)?;
        let closed = k.to_polynomial();
        let agrees = values.iter().all(|v| polynomial_to_json(v) == polynomial_to_json(&closed));
        report["closed_form"] = json!({
            "observable": observable_to_json(&k),
            "bracket": polynomial_to_json(&closed),
            "agrees": agrees,
        });
    }
    emit(out, report)
}

fn cmd_action(a: &ActionArgs, out: &mut dyn Write) -> Result<()> {
    let model = load_model(&a.model)?;
    let t = match &a.trajectory {
        Some(p) => parse_records(&read(p)?)?,
        None => evolve(&model.spec, model.initial()?, a.steps, &evolve_config(&a.cap)?)?,
    };
    let mut w = TrajectoryWindow::from_trajectory(&t)?;
    if w.dim() != model.spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.spec.dim(),
            got: w.dim(),
        });
    }
    if let Some(n) = a.perturb {
        let first = w.first_tick();
        let tick = w
            .ticks_mut()
            .get_mut(usize::try_from(n - first).unwrap_or(usize::MAX))
            .ok_or_else(|| Error::InvalidArgument(format!("tick {n} is outside the window")))?;
        tick.x[0] += 1;
    }
    let value = action_value(&model.spec, &w);
    let report = stationarity_check(&model.spec, &w, &a.delta)?;
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| json!({ "var": v.var.to_string(), "delta": v.delta, "derivative": v.derivative.to_string() }))
        .collect();
    emit(
        out,
        json!({
            "first_tick": w.first_tick(),
            "last_tick": w.last_tick(),
            "action2": value.0.to_string(),
            "action": value.action().to_string(),
            "stationary": report.is_stationary(),
            "violation_ticks": report.ticks(),
            "violations": violations,
        }),
    )
}

fn fmt_f(v: f64) -> String {
    format!("{v}")
}

fn cmd_reconstruct(a: &ReconstructArgs, out: &mut dyn Write) -> Result<()> {
    let model = load_model(&a.model)?;
    let s = model.initial()?;
    let mut t = evolve(&model.spec, s, a.steps, &evolve_config(&a.cap)?)?;
    t.states = t.sorted();
    if a.plot_data {
        emit(out, "n,alpha,re,im")?;
        for st in &t.states {
            csv_psi_rows(out, st.tick, &st.x, &st.p)?;
        }
        return Ok(());
    }
    let mut w = SampledWavefunction::from_trajectory(&t, model.spec.scale_l())?;
    if let Some(p) = a.periodic {
        w = w.periodic(p)?;
    }
    let with_residual = model.spec.c().iter().all(|&c| c == 1);
    emit(out, "t,alpha,re,im,tail_bound,residual,residual_tail_bound")?;
    for &time in &a.t {
        let r = reconstruct(&w, time, a.window)?;
        let res = if with_residual {
            let rr = modified_schrodinger_residual(&model.spec, &w, time, a.window)?;
            (fmt_f(rr.residual), fmt_f(rr.tail_bound))
        } else {
            (String::new(), String::new())
        };
        for (alpha, z) in r.value.iter().enumerate() {
            emit(
                out,
                format_args!(
                    "{},{alpha},{},{},{},{},{}",
                    fmt_f(time),
                    fmt_f(z.re),
                    fmt_f(z.im),
                    fmt_f(r.tail_bound),
                    res.0,
                    res.1
                ),
            )?;
        }
    }
    Ok(())
}

fn cmd_dispersion(a: &DispersionArgs, out: &mut dyn Write) -> Result<()> {
    let model = a.model.as_deref().map(load_model).transpose()?;
    let l = a.l.or(model.as_ref().map(|m| m.spec.scale_l())).unwrap_or(1.0);
    let eps = match (&model, a.epsilon.is_empty()) {
        (_, false) => a.epsilon.clone(),
        (Some(m), true) => eigen_decompose(&hamiltonian_matrix(&m.spec)).values,
        (None, true) => {
            return Err(Error::InvalidArgument("give --epsilon or --model".into()));
        }
    };
    emit(out, "epsilon,epsbar,energy,series1,series3,error")?;
    for e in eps {
        match dispersion_energy(e, l) {
            Ok(d) => {
                let s1 = dispersion_series(e, l, 1)?;
                let s3 = dispersion_series(e, l, 3)?;
                emit(
                    out,
                    format_args!(
                        "{},{},{},{},{},",
                        fmt_f(e),
                        fmt_f(d.epsbar),
                        fmt_f(d.energy),
                        fmt_f(s1),
                        fmt_f(s3)
                    ),
                )?;
            }
            Err(err @ Error::NoRealEnergy { .. }) => {
                emit(out, format_args!("{},,,,,{err}", fmt_f(e)))?;
            }
            Err(other) => return Err(other),
        }
    }
    Ok(())
}

fn matrix_json(re: Vec<Vec<i64>>, im: Vec<Vec<i64>>, real: bool) -> Value {
    if real {
        json!(re)
    } else {
        json!({ "re": re, "im": im })
    }
}

fn cmd_scan(a: &ScanArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = ScanConfig {
        dim: a.dim,
        entry_bound: a.bound,
        dedup: a.dedup,
        mode: a.mode.parse::<Mode>()?,
        jobs: a.jobs,
        hermitian: a.hermitian,
    };
    let report = enumerate_bounded_spectrum(&cfg)?;
    let real = !a.hermitian;
    for s in &report.survivors {
        let mut rec = json!({
            "matrix": matrix_json(s.matrix.re_rows(), s.matrix.im_rows(), real),
            "verdict": s.verdict.as_str(),
            "canonical_form": matrix_json(s.canonical.matrix().re_rows(), s.canonical.matrix().im_rows(), real),
        });
        match &s.witness {
            Witness::Eigenvalues(v) => rec["eigenvalues"] = json!(v),
            Witness::Sturm(c) => {
                rec["sturm_counts"] = json!({
                    "below": c.below,
                    "at_minus_two": c.at_minus_two,
                    "inside": c.inside,
                    "at_plus_two": c.at_plus_two,
                    "above": c.above,
                })
            }
        }
        if a.dedup {
            rec["class_size"] = json!(s.class_size);
        }
        emit(out, rec)?;
    }
    emit(
        out,
        json!({
            "summary": {
                "dim": a.dim,
                "entry_bound": a.bound,
                "mode": cfg.mode.as_str(),
                "hermitian": a.hermitian,
                "search_space": report.search_space.to_string(),
                "prefilter_rejected": report.prefilter_rejected.to_string(),
                "spectral_rejected": report.spectral_rejected.to_string(),
                "raw_count": report.raw_count,
                "dedup_count": report.dedup_count,
            }
        }),
    )
}

fn cmd_period(a: &PeriodArgs, out: &mut dyn Write) -> Result<()> {
    if a.max_steps == 0 {
        return Err(Error::InvalidArgument("max-steps must be at least 1".into()));
    }
    let model = load_model(&a.model)?;
    let period = detect_period(&model.spec, model.initial()?, a.max_steps);
    emit(out, json!({ "period": period, "max_steps": a.max_steps }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(args.iter().copied(), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::BitCapExceeded { bits: 1, cap: 0, tick: 0 }), EXIT_RESOURCE);
        assert_eq!(exit_code(&Error::SearchSpaceOverflow { size: 2, limit: 1 }), EXIT_RESOURCE);
        assert_eq!(exit_code(&Error::Internal(String::new())), EXIT_INTERNAL);
        assert_eq!(exit_code(&Error::InvalidSpec(String::new())), EXIT_VALIDATION);
    }

    #[test]
    fn bad_arguments_are_validation_failures() {
        assert_eq!(run_str(&["hca", "frobnicate"]).0, EXIT_VALIDATION);
        assert_eq!(run_str(&["hca", "scan"]).0, EXIT_VALIDATION);
        assert_eq!(run_str(&["hca", "--help"]).0, EXIT_OK);
    }

    #[test]
    fn scan_overflow_is_a_resource_error() {
        let (code, _, err) = run_str(&["hca", "scan", "--dim", "5", "--bound", "3"]);
        assert_eq!(code, EXIT_RESOURCE);
        assert!(err.contains("\"status\":2"));
    }

    #[test]
    fn dispersion_table() {
        let (code, out, _) = run_str(&["hca", "dispersion", "--epsilon", "0,1,2,3"]);
        assert_eq!(code, EXIT_OK);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 5);
        let energy = |k: usize| lines[k].split(',').nth(2).unwrap().parse::<f64>().unwrap();
        assert!(energy(1).abs() < 1e-12);
        assert!((energy(2) - std::f64::consts::PI / 6.0).abs() < 1e-12);
        assert!((energy(3) - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!(lines[4].contains("no real stationary energy"));
        assert!(run_str(&["hca", "dispersion"]).0 == EXIT_VALIDATION);
    }
}
