//! Command-line front end: analysis, tabulation, tracing, classification and
//! brute-force verification with machine-readable output.
//!
//! Exit codes: 0 ok, 1 internal/numeric error, 2 hypothesis failure,
//! 3 property violation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cutcyl::config::{parse_param, OutputFormat, RunConfig};
use cutcyl::cutlocus::classify;
use cutcyl::error::Error;
use cutcyl::geodesics::{clairaut_constant, integrate};
use cutcyl::oracle::{build_fan, compare, empirical_cut_points, CutDetectParams, FanParams};
use cutcyl::profile::analyze;
use cutcyl::quadrature::build_phi_table;

#[derive(Parser)]
#[command(
    name = "cutcyl",
    about = "Geodesics, half-period tables and exact cut loci of symmetric cylinders of revolution"
)]
struct Cli {
    /// Plain-text key=value config file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Profile name: gauss, sech, hourglass, catenoid, flat.
    #[arg(long, global = true)]
    profile: Option<String>,
    /// Profile parameter, k=v; repeatable.
    #[arg(long = "param", global = true)]
    params: Vec<String>,
    /// Absolute quadrature tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Integrator step (arclength).
    #[arg(long, global = true)]
    step: Option<f64>,
    /// Integration horizon.
    #[arg(long, global = true)]
    smax: Option<f64>,
    /// Fan size for verify.
    #[arg(long, global = true)]
    fan: Option<usize>,
    /// Analysis window for t0 / inf-m / hypothesis grids.
    #[arg(long, global = true)]
    tmax: Option<f64>,
    /// Hypothesis grid resolution.
    #[arg(long, global = true)]
    grid_n: Option<usize>,
    /// Output format: csv or json.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Profile analysis: t0, t1, inf m, curvature hypotheses (JSON).
    Analyze,
    /// Tabulate phi(nu) and l(nu) on a uniform grid (CSV or JSON).
    PhiTable {
        #[arg(long)]
        nu_min: f64,
        #[arg(long)]
        nu_max: f64,
        #[arg(short, long)]
        n: usize,
    },
    /// Integrate one geodesic and emit the trace (CSV: s, t, theta, dt_ds).
    #[command(allow_negative_numbers = true)]
    Trace {
        /// Starting height t.
        #[arg(long)]
        t_start: f64,
        /// Starting angle theta.
        #[arg(long, default_value_t = 0.0)]
        theta_start: f64,
        /// Initial angle to the parallel direction, radians.
        #[arg(long)]
        eta: f64,
    },
    /// Classify the cut locus of the base point (t_q, 0) (JSON).
    #[command(allow_negative_numbers = true)]
    Cutlocus {
        #[arg(long)]
        tq: f64,
    },
    /// Shoot a fan, detect empirical cut points, compare with the classifier
    /// (JSON report). Exit 0 iff no violations.
    #[command(allow_negative_numbers = true)]
    Verify {
        #[arg(long)]
        tq: f64,
        /// Spatial tolerance of the comparison.
        #[arg(long, default_value_t = 2e-2)]
        tol_space: f64,
    },
}

fn build_config(cli: &Cli) -> Result<RunConfig, Error> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.load_file(path)?;
    }
    if let Some(p) = &cli.profile {
        cfg.profile = Some(p.clone());
    }
    for p in &cli.params {
        cfg.params.push(parse_param(p)?);
    }
    if let Some(v) = cli.tol {
        cfg.apply("tol", &v.to_string())?;
    }
    if let Some(v) = cli.step {
        cfg.apply("step", &v.to_string())?;
    }
    if let Some(v) = cli.smax {
        cfg.apply("smax", &v.to_string())?;
    }
    if let Some(v) = cli.fan {
        cfg.apply("fan", &v.to_string())?;
    }
    if let Some(v) = cli.tmax {
        cfg.apply("tmax", &v.to_string())?;
    }
    if let Some(v) = cli.grid_n {
        cfg.apply("grid_n", &v.to_string())?;
    }
    if let Some(v) = &cli.format {
        cfg.format = OutputFormat::parse(v)?;
    }
    if let Some(v) = &cli.out {
        cfg.out = Some(v.clone());
    }
    Ok(cfg)
}

fn emit(cfg: &RunConfig, payload: &str) -> Result<(), Error> {
    match &cfg.out {
        Some(path) => std::fs::write(path, payload)?,
        None => print!("{payload}"),
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let cfg = build_config(cli)?;
    let profile = cfg.build_profile()?;
    match &cli.cmd {
        Cmd::Analyze => {
            let a = analyze(&profile, cfg.t_max, cfg.grid_n)?;
            emit(&cfg, &(a.to_json() + "\n"))?;
            Ok(if a.hypotheses.main_case() { 0 } else { 2 })
        }
        Cmd::PhiTable { nu_min, nu_max, n } => {
            let table = build_phi_table(&profile, *nu_min, *nu_max, *n, cfg.tol)?;
            let payload = match cfg.format {
                OutputFormat::Csv => table.to_csv(),
                OutputFormat::Json => table.to_json() + "\n",
            };
            emit(&cfg, &payload)?;
            if !table.phi_nonincreasing || !table.l_consistent {
                Ok(3)
            } else if table.partial {
                Ok(1)
            } else {
                Ok(0)
            }
        }
        Cmd::Trace {
            t_start,
            theta_start,
            eta,
        } => {
            let nu = clairaut_constant(&profile, *t_start, *eta);
            let sign0 = if eta.sin() >= 0.0 { 1.0 } else { -1.0 };
            let trace = integrate(
                &profile,
                (*t_start, *theta_start),
                nu,
                sign0,
                cfg.s_max,
                cfg.step,
            )?;
            emit(&cfg, &trace.to_csv())?;
            Ok(0)
        }
        Cmd::Cutlocus { tq } => {
            let a = analyze(&profile, cfg.t_max, cfg.grid_n)?;
            match classify(&profile, &a, *tq, cfg.tol) {
                Ok(desc) => {
                    emit(&cfg, &(desc.to_json() + "\n"))?;
                    Ok(0)
                }
                Err(Error::AmbiguousClassification {
                    phi,
                    err,
                    candidates,
                }) => {
                    let payload = format!(
                        "{{\"error\":\"ambiguous_classification\",\"phi\":{phi},\"est_error\":{err},\"candidates\":[{},{}]}}\n",
                        candidates.0.to_json(),
                        candidates.1.to_json()
                    );
                    emit(&cfg, &payload)?;
                    Ok(1)
                }
                Err(e) => Err(e),
            }
        }
        Cmd::Verify { tq, tol_space } => {
            let a = analyze(&profile, cfg.t_max, cfg.grid_n)?;
            let prediction = classify(&profile, &a, *tq, cfg.tol)?;
            let fan_params = FanParams {
                n_geodesics: cfg.fan_n,
                s_max: cfg.s_max,
                step: cfg.step,
                decimate: 1e-2,
            };
            let fan = build_fan(&profile, (*tq, 0.0), &fan_params)?;
            let det = CutDetectParams::default();
            let points = empirical_cut_points(&profile, &fan, &det)?;
            let report = compare(&profile, &prediction, &fan, &points, *tol_space);
            emit(&cfg, &(report.to_json() + "\n"))?;
            Ok(if report.ok() { 0 } else { 3 })
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::UnsupportedProfile | Error::OutsideProfileClass { .. } | Error::ProfileInvariant(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    // usage errors are exit 1; code 2 is reserved for hypothesis failures
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
