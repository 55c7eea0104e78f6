//! The `spinlab` command line.
//!
//! ```text
//! spinlab [--config FILE] [--out DIR] [--seed N] [--threads N] [chain flags] <command>
//! ```
//!
//! Commands: `evolve`, `sweep`, `scan-field`, `optimize-field`, `effective`,
//! `validate`. Config files are TOML with `[chain]`, `[evolve]`, `[sweep]`,
//! `[effective]` and `[output]` sections; flags override file keys. Every
//! command that writes files keeps them in memory until the run succeeds and
//! then moves them into place, finishing with `manifest.json`.
//!
//! Exit codes: 0 success, 1 runtime failure (or a failed `validate`), 2
//! configuration error.

mod config;
mod output;
mod validate;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::chain::{ChainSpec, Protocol};
use crate::effective::{
    chi, entangling_time, exchange_chi, gamma_eff, mean_bulk_excitation, trimer_eta,
    validity_margin, DispersiveParams,
};
use crate::measures::ChainObserver;
use crate::dynamics::Observer;
use crate::qcore::Spin;
use crate::sweeps::{
    clean_peak, clean_run, evolve_to, optimize_boundary_field, run_dephasing_sweep, run_disorder_sweep,
    scan_boundary_field, SweepAxis, SweepConfig, SweepResult,
};
use crate::{Error, Result};

pub use config::{
    ChainOverrides, ChainSection, EffectiveSection, EffectiveSettings, EvolveSection, EvolveSettings, FileConfig,
    GridSpec, OutputSection, SweepSection, SweepSettings,
};
pub use output::{fmt_num, Csv, OutputEntry, OutputSet, RunManifest};
pub use validate::{validation_suite, CheckResult, FaultInjection};

/// Window, in units of the predicted entangling time, searched for the
/// first full-chain peak in dispersive comparisons.
pub const DISPERSIVE_WINDOW: f64 = 1.6;

const DEFAULT_OUT: &str = "spinlab-out";

/// `println!` that ignores a closed stdout.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

fn parse_protocol(s: &str) -> std::result::Result<Protocol, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_spin(s: &str) -> std::result::Result<Spin, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "spinlab", version, about = "Entanglement generation in spin-s XX chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed for disorder sweeps.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "SPINLAB_THREADS", default_value_t = 0)]
    threads: usize,
    /// P1 or P2
    #[arg(long, global = true, value_parser = parse_protocol)]
    protocol: Option<Protocol>,
    /// Spin magnitude, e.g. 1/2, 1, 3/2
    #[arg(long, global = true, value_parser = parse_spin)]
    spin: Option<Spin>,
    /// Number of sites.
    #[arg(long = "n", global = true)]
    n: Option<usize>,
    /// Weak coupling.
    #[arg(long = "delta", global = true, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Strong coupling.
    #[arg(long = "Delta", global = true, allow_negative_numbers = true)]
    big_delta: Option<f64>,
    /// Boundary field.
    #[arg(long = "B", global = true, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Dephasing rate.
    #[arg(long, global = true, allow_negative_numbers = true)]
    gamma: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Single run: trajectory CSV and peak summary.
    Evolve,
    /// Disorder or dephasing sweep.
    Sweep,
    /// Negativity over time and boundary field (P2).
    ScanField,
    /// Coarse scan plus golden-section search for the best boundary field.
    OptimizeField,
    /// Dispersive and trimer effective-model report.
    Effective,
    /// Analytic oracle suite.
    Validate {
        /// Negative control: `dissipator-sign`.
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

impl Cli {
    fn overrides(&self) -> ChainOverrides {
        ChainOverrides {
            protocol: self.protocol,
            n: self.n,
            spin: self.spin,
            delta: self.delta,
            big_delta: self.big_delta,
            boundary_field: self.b,
            gamma: self.gamma,
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start {} worker threads: {e}", cli.threads);
            return 1;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(code) => code,
        Err(e) => {
            report_error(&e);
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => 2,
        _ => 1,
    }
}

fn report_error(e: &Error) {
    match e {
        Error::Resonance { mode, detuning } => {
            let body = json!({ "error": "resonance", "mode": mode, "detuning": detuning, "message": e.to_string() });
            eprintln!("{body}");
        }
        Error::Config(msg) => eprintln!("config error: {msg}"),
        other => eprintln!("error: {other}"),
    }
}

struct Context {
    file: FileConfig,
    out: PathBuf,
    started: String,
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

fn execute(cli: &Cli) -> Result<i32> {
    let started = now();
    if let Command::Validate { inject_fault } = &cli.command {
        return cmd_validate(inject_fault.as_deref());
    }
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let out = cli
        .out
        .clone()
        .or_else(|| file.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let ctx = Context { file, out, started };
    let o = cli.overrides();
    match &cli.command {
        Command::Evolve => cmd_evolve(&ctx, &o),
        Command::Sweep => cmd_sweep(&ctx, &o, cli.seed),
        Command::ScanField => cmd_scan_field(&ctx, &o, cli.seed),
        Command::OptimizeField => cmd_optimize_field(&ctx, &o, cli.seed),
        Command::Effective => cmd_effective(&ctx, &o),
        Command::Validate { .. } => unreachable!("handled above"),
    }
}

fn finish<T: Serialize>(
    ctx: &Context,
    command: &str,
    config: &T,
    seed: Option<u64>,
    mut files: OutputSet,
) -> Result<Vec<PathBuf>> {
    let manifest = RunManifest {
        command: command.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        master_seed: seed,
        config_hash: output::config_hash(config),
        config: serde_json::to_value(config)?,
        started_at: ctx.started.clone(),
        finished_at: now(),
        outputs: files.entries(),
    };
    files.add_json("manifest.json", &manifest)?;
    files.commit(&ctx.out)
}

fn print_written(paths: &[PathBuf]) {
    for p in paths {
        say!("wrote {}", p.display());
    }
}

fn cmd_evolve(ctx: &Context, o: &ChainOverrides) -> Result<i32> {
    let settings = EvolveSettings::resolve(&ctx.file, o)?;
    let hash = output::config_hash(&settings);
    let spec = &settings.chain;
    let run = clean_run(spec, settings.t_max, settings.dt)?;
    let with_fidelity = spec.spin == Spin::HALF;

    let mut header = vec!["t".to_string(), "negativity".to_string()];
    if with_fidelity {
        header.push("fidelity_psi_plus".into());
    }
    header.extend((1..=spec.n).map(|i| format!("n_site_{i}")));
    header.push("bulk_population".into());
    let mut csv = Csv::new(&hash, &header);
    for (t, rec) in run.trajectory.times.iter().zip(&run.trajectory.records) {
        let mut row = vec![*t, rec.negativity];
        if with_fidelity {
            row.push(rec.fidelity.unwrap_or(f64::NAN));
        }
        let pops = rec.populations.as_ref().expect("observer records populations");
        row.extend(&pops.per_site);
        row.push(pops.bulk);
        csv.numeric_row(&row);
    }

    let at_peak = ChainObserver::for_spec(spec)?.observe(&evolve_to(spec, None, run.peak.time)?)?;
    let summary = json!({
        "command": "evolve",
        "config_hash": hash,
        "protocol": spec.protocol,
        "spin": spec.spin,
        "N": spec.n,
        "peak": run.peak,
        "fidelity_psi_plus_at_peak": at_peak.fidelity,
        "max_bulk_population": run.trajectory.max_bulk_population(),
    });
    let mut files = OutputSet::default();
    files.add("trajectory.csv", csv.into_bytes());
    files.add_json("summary.json", &summary)?;
    let paths = finish(ctx, "evolve", &settings, None, files)?;
    say!(
        "{} s={} N={}: peak negativity {:.6} at t = {:.4}",
        spec.protocol, spec.spin, spec.n, run.peak.value, run.peak.time
    );
    print_written(&paths);
    Ok(0)
}

fn sweep_file_name(settings: &SweepSettings, big_delta: f64, stem: &str) -> String {
    if settings.big_delta_values.len() > 1 {
        format!("{stem}_Delta{}.csv", fmt_num(big_delta))
    } else {
        format!("{stem}.csv")
    }
}

fn cmd_sweep(ctx: &Context, o: &ChainOverrides, seed: Option<u64>) -> Result<i32> {
    let settings = SweepSettings::resolve(&ctx.file, o, seed, None)?;
    let axis = settings.runs[0].axis;
    if axis == SweepAxis::BoundaryField {
        return cmd_scan_field(ctx, o, seed);
    }
    let hash = output::config_hash(&settings);
    let results: Vec<(SweepConfig, SweepResult)> = settings
        .runs
        .iter()
        .map(|cfg| {
            let r = if axis.is_disorder() {
                run_disorder_sweep(cfg)?
            } else {
                run_dephasing_sweep(cfg)?
            };
            Ok((cfg.clone(), r))
        })
        .collect::<Result<_>>()?;

    let record_bulk = settings.runs.iter().any(|c| c.record_bulk);
    let mut header: Vec<String> = [
        "protocol",
        "Delta",
        "axis_value",
        "mean_peak_negativity",
        "std",
        "mean_peak_time",
        "count",
        "excluded",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    if record_bulk {
        header.push("max_bulk_population".into());
    }
    let mut files = OutputSet::default();
    for &big in &settings.big_delta_values {
        let mut csv = Csv::new(&hash, &header);
        for (cfg, res) in results.iter().filter(|(c, _)| c.base.strong == big) {
            for p in &res.points {
                let mut row = vec![
                    cfg.base.protocol.to_string(),
                    fmt_num(cfg.base.strong),
                    fmt_num(p.axis_value),
                    fmt_num(p.mean_peak),
                    fmt_num(p.std_peak),
                    fmt_num(p.mean_peak_time),
                    p.count.to_string(),
                    p.excluded.to_string(),
                ];
                if record_bulk {
                    row.push(fmt_num(p.max_bulk.unwrap_or(f64::NAN)));
                }
                csv.row(&row);
            }
        }
        files.add(sweep_file_name(&settings, big, "sweep"), csv.into_bytes());
    }
    let runs: Vec<_> = results
        .iter()
        .map(|(cfg, res)| json!({ "protocol": cfg.base.protocol, "Delta": cfg.base.strong, "result": res }))
        .collect();
    files.add_json("summary.json", &json!({ "command": "sweep", "config_hash": hash, "axis": axis, "runs": runs }))?;
    let master = settings.runs[0].master_seed;
    let paths = finish(ctx, "sweep", &settings, Some(master), files)?;
    for (cfg, res) in &results {
        let means: Vec<String> = res.points.iter().map(|p| format!("{:.4}", p.mean_peak)).collect();
        say!("{} Delta={}: {}", cfg.base.protocol, cfg.base.strong, means.join(" "));
    }
    print_written(&paths);
    Ok(0)
}

fn field_runs(settings: &SweepSettings) -> Result<Vec<SweepConfig>> {
    let runs: Vec<SweepConfig> = settings
        .runs
        .iter()
        .filter(|c| c.base.protocol == Protocol::P2)
        .cloned()
        .collect();
    if runs.is_empty() {
        return Err(Error::Config("boundary-field commands need protocol P2".into()));
    }
    Ok(runs)
}

fn cmd_scan_field(ctx: &Context, o: &ChainOverrides, seed: Option<u64>) -> Result<i32> {
    let settings = SweepSettings::resolve(&ctx.file, o, seed, Some(SweepAxis::BoundaryField))?;
    if settings.runs[0].axis != SweepAxis::BoundaryField {
        return Err(Error::Config("scan-field needs sweep.axis = \"boundary_field\"".into()));
    }
    let hash = output::config_hash(&settings);
    let mut files = OutputSet::default();
    let mut maxima = Vec::new();
    for cfg in field_runs(&settings)? {
        let scan = scan_boundary_field(&cfg)?;
        let mut header = vec!["t".to_string()];
        header.extend(scan.fields.iter().map(|&b| fmt_num(b)));
        let mut csv = Csv::new(&hash, &header);
        for (t, row) in scan.times.iter().zip(&scan.values) {
            let mut cells = vec![*t];
            cells.extend(row);
            csv.numeric_row(&cells);
        }
        let (value, time, field) = scan.max();
        say!(
            "Delta={}: {}x{} grid, max negativity {:.6} at t = {:.3}, B = {:.3}",
            cfg.base.strong,
            scan.times.len(),
            scan.fields.len(),
            value,
            time,
            field
        );
        maxima.push(json!({ "Delta": cfg.base.strong, "shape": scan.shape(), "max": { "value": value, "time": time, "B": field } }));
        files.add(sweep_file_name(&settings, cfg.base.strong, "field_scan"), csv.into_bytes());
    }
    files.add_json("summary.json", &json!({ "command": "scan-field", "config_hash": hash, "scans": maxima }))?;
    let paths = finish(ctx, "scan-field", &settings, None, files)?;
    print_written(&paths);
    Ok(0)
}

fn cmd_optimize_field(ctx: &Context, o: &ChainOverrides, seed: Option<u64>) -> Result<i32> {
    let mut file = ctx.file.clone();
    file.sweep.axis = Some(SweepAxis::BoundaryField);
    if file.sweep.grid.is_none() {
        file.sweep.grid = Some(GridSpec::List(vec![0.0]));
    }
    let settings = SweepSettings::resolve(&file, o, seed, None)?;
    let hash = output::config_hash(&settings);
    let mut reports = Vec::new();
    for cfg in field_runs(&settings)? {
        let best = optimize_boundary_field(&cfg, settings.b_range, settings.tol)?;
        say!(
            "Delta={}: B* = {:.4}, peak {:.6} at t = {:.4}{}",
            cfg.base.strong,
            best.field,
            best.peak.value,
            best.peak.time,
            if best.flat { " (flat objective)" } else { "" }
        );
        reports.push(json!({ "Delta": cfg.base.strong, "spin": cfg.base.spin, "optimum": best }));
    }
    let mut files = OutputSet::default();
    files.add_json(
        "summary.json",
        &json!({ "command": "optimize-field", "config_hash": hash, "b_range": settings.b_range, "results": reports }),
    )?;
    let paths = finish(ctx, "optimize-field", &settings, None, files)?;
    print_written(&paths);
    Ok(0)
}

fn resonance_json(e: &Error) -> serde_json::Value {
    match e {
        Error::Resonance { mode, detuning } => {
            json!({ "error": "resonance", "mode": mode, "detuning": detuning, "message": e.to_string() })
        }
        other => json!({ "error": "other", "message": other.to_string() }),
    }
}

fn dispersive_section(settings: &EffectiveSettings) -> Result<(serde_json::Value, f64)> {
    let params = DispersiveParams::new(
        settings.n_chain,
        settings.convention_factor * settings.chain.strong,
        settings.lambda_hop,
        settings.omega,
        settings.big_omega,
    )?;
    let chi_sum = chi(&params);
    let exchange = exchange_chi(&params);
    let section = json!({
        "params": params,
        "chi": chi_sum.value,
        "chi_contributions": chi_sum.contributions,
        "exchange_chi": exchange.value,
        "exchange_chi_contributions": exchange.contributions,
        "entangling_time": entangling_time(chi_sum.value).ok(),
        "exchange_entangling_time": entangling_time(exchange.value).ok(),
        "gamma": settings.gamma,
        "gamma_eff": gamma_eff(&params, settings.gamma)?,
        "validity_margin": validity_margin(&params, settings.n_chain),
    });
    Ok((section, exchange.value))
}

/// Effective-model report for `settings`. A resonant dispersive
/// configuration is reported as a structured error inside the
/// `dispersive` section; the full-chain comparison then fails.
pub fn effective_report(settings: &EffectiveSettings) -> Result<serde_json::Value> {
    let chain = &settings.chain;
    let trimer = trimer_eta(chain.strong, chain.weak, settings.convention_factor)?;
    let dispersive = match dispersive_section(settings) {
        Ok(ok) => Ok(ok),
        Err(e @ Error::Resonance { .. }) => Err(e),
        Err(e) => return Err(e),
    };
    let mut report = json!({
        "dispersive": match &dispersive {
            Ok((section, _)) => section.clone(),
            Err(e) => resonance_json(e),
        },
        "mean_bulk_excitation": mean_bulk_excitation(settings.n_chain, chain.weak, chain.strong)?,
        "trimer": {
            "eta": trimer.eta,
            "t_E": if trimer.t_e.is_finite() { json!(trimer.t_e) } else { json!(null) },
            "t_F": if trimer.t_f.is_finite() { json!(trimer.t_f) } else { json!(null) },
            "degenerate": trimer.is_degenerate(),
        },
    });
    if settings.compare_full {
        let exchange = match dispersive {
            Ok((_, x)) => x,
            Err(e) => return Err(e),
        };
        let tau = entangling_time(exchange)?;
        let spec = ChainSpec {
            protocol: Protocol::P2,
            n: settings.n_chain + 2,
            boundary_field: settings.omega,
            gamma: 0.0,
            ..chain.clone()
        };
        let window = settings.t_max.unwrap_or(DISPERSIVE_WINDOW * tau);
        let peak = clean_peak(&spec, window, settings.dt)?;
        let unsigned = report["dispersive"]["entangling_time"].as_f64();
        report["comparison"] = json!({
            "full_peak": peak,
            "window": window,
            "predicted_time": tau,
            "relative_error": peak.time / tau - 1.0,
            "unsigned_predicted_time": unsigned,
            "unsigned_relative_error": unsigned.map(|u| peak.time / u - 1.0),
        });
    }
    Ok(report)
}

fn cmd_effective(ctx: &Context, o: &ChainOverrides) -> Result<i32> {
    let settings = EffectiveSettings::resolve(&ctx.file, o)?;
    let hash = output::config_hash(&settings);
    let mut report = effective_report(&settings)?;
    report["config_hash"] = json!(hash);
    report["command"] = json!("effective");
    if report["dispersive"].get("error").is_some() {
        eprintln!("{}", report["dispersive"]);
    } else {
        say!(
            "chi = {:.6e}, exchange chi = {:.6e}",
            report["dispersive"]["chi"].as_f64().unwrap_or(f64::NAN),
            report["dispersive"]["exchange_chi"].as_f64().unwrap_or(f64::NAN)
        );
    }
    say!("trimer eta = {}, t_E = {}, t_F = {}", report["trimer"]["eta"], report["trimer"]["t_E"], report["trimer"]["t_F"]);
    if let Some(c) = report.get("comparison") {
        say!(
            "full peak t = {}, predicted {} (relative error {})",
            c["full_peak"]["time"], c["predicted_time"], c["relative_error"]
        );
    }
    let mut files = OutputSet::default();
    files.add_json("summary.json", &report)?;
    let paths = finish(ctx, "effective", &settings, None, files)?;
    print_written(&paths);
    Ok(0)
}

fn cmd_validate(fault: Option<&str>) -> Result<i32> {
    let fault = match fault {
        None => FaultInjection::default(),
        Some("dissipator-sign") => FaultInjection { flip_dissipator: true },
        Some(other) => return Err(Error::Config(format!("unknown fault {other:?}"))),
    };
    let checks = validation_suite(fault);
    say!("{:<42} {:>12} {:>10} {:>8}  result", "check", "error", "tol", "secs");
    for c in &checks {
        say!(
            "{:<42} {:>12.3e} {:>10.0e} {:>8.3}  {}{}",
            c.name,
            c.error,
            c.tolerance,
            c.seconds,
            if c.passed { "PASS" } else { "FAIL" },
            c.note.as_ref().map(|n| format!(" ({n})")).unwrap_or_default()
        );
    }
    Ok(if checks.iter().all(|c| c.passed) { 0 } else { 1 })
}
