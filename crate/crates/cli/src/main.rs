//! `trap-lab`: run scenario pipelines and write CSV/JSON artifacts.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;
use serde::Serialize;

use trap_lab::channels::Variant;
use trap_lab::classical::{beta_sweep, integrate_trajectory};
use trap_lab::output::{write_csv, write_json, Meta};
use trap_lab::pipeline;
use trap_lab::scenario::Scenario;
use trap_lab::spectra::{airy_bound_state, continuum_state_with_energy, default_z_w};
use trap_lab::specfun::airy_ai_zero;
use trap_lab::Error;

mod reproduce;

#[derive(Parser, Debug)]
#[command(name = "trap-lab", version, about = "Bound states, tunneling and classical orbits of a magnetic moment in a vortex wave")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario JSON file, or `preset:<name>` for an embedded one.
    #[arg(long, global = true)]
    scenario: Option<String>,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Override the radial grid step.
    #[arg(long, global = true)]
    grid_step: Option<f64>,

    /// Override the potential variant.
    #[arg(long, global = true)]
    variant: Option<Variant>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Channel potentials and couplings on the grid.
    Potentials,
    /// Lowest bound states of the binding channel.
    Boundstate,
    /// Barrier and spin-flip rates.
    Tunneling,
    /// Classical trajectory and beta sweep.
    Classical,
    /// Run the embedded presets and compare with published values.
    Reproduce,
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_config() { 2 } else { 1 };
        Failure { code, message: e.to_string() }
    }
}

fn config_failure(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("TRAP_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| config_failure(format!("TRAP_LAB_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure { code: 1, message: format!("thread pool: {e}") })
}

fn load(cli: &Cli) -> Result<Scenario, Failure> {
    let path = cli.scenario.as_deref().ok_or_else(|| config_failure("--scenario is required for this command"))?;
    let mut s = Scenario::load(path).map_err(|e| match e {
        Error::Io { .. } => config_failure(e.to_string()),
        e => Failure::from(e),
    })?;
    if let Some(step) = cli.grid_step {
        if !(step > 0.0 && step.is_finite()) {
            return Err(config_failure("--grid-step must be a positive number"));
        }
        s.grid.step = step;
    }
    if let Some(v) = cli.variant {
        s.variant = v;
    }
    Ok(s)
}

fn meta(s: &Scenario) -> Meta {
    Meta { scenario: s.id.clone(), config_sha256: s.config_sha256.clone() }
}

fn out_file(dir: &Path, s: &Scenario, suffix: &str) -> PathBuf {
    dir.join(format!("{}.{suffix}", s.id))
}

fn run_potentials(s: &Scenario, dir: &Path) -> Result<(), Failure> {
    let dec = pipeline::potentials(&s.params, s.variant, &s.grid)?;
    let rows = (0..dec.grid.len()).map(|i| {
        vec![
            dec.grid[i],
            dec.theta[i],
            dec.lambda[i],
            dec.v_plus[i],
            dec.v_minus[i],
            dec.v_tilde_plus[i],
            dec.v_tilde_minus[i],
            dec.w0_mult[i],
            dec.w0_deriv[i],
        ]
    });
    let path = out_file(dir, s, "potentials.csv");
    write_csv(
        &path,
        &meta(s),
        &["xi", "theta", "lambda", "v_plus", "v_minus", "v_tilde_plus", "v_tilde_minus", "w0_mult", "w0_deriv"],
        rows,
    )?;
    info!("wrote {}", path.display());
    Ok(())
}

#[derive(Serialize)]
struct BoundReport {
    energy: f64,
    nodes: usize,
    grid_step: f64,
    variant: Variant,
}

#[derive(Serialize)]
struct BoundReports {
    states: Vec<BoundReport>,
}

fn run_boundstate(s: &Scenario, dir: &Path) -> Result<(), Failure> {
    let (_, states) = pipeline::bound_states(&s.params, s.variant, &s.grid, s.bound_states)?;
    if states.is_empty() {
        return Err(Error::NoBarrier("binding channel has no bound state below the barrier top".into()).into());
    }
    for (k, st) in states.iter().enumerate() {
        let path = out_file(dir, s, &format!("u{k}.csv"));
        write_csv(&path, &meta(s), &["xi", "u"], st.grid.iter().zip(&st.u).map(|(x, u)| vec![*x, *u]))?;
    }
    let report = BoundReports {
        states: states
            .iter()
            .map(|st| BoundReport { energy: st.energy, nodes: st.nodes, grid_step: st.grid_step, variant: s.variant })
            .collect(),
    };
    write_json(&out_file(dir, s, "boundstates.json"), &meta(s), &report)?;
    info!("{}: {} bound states, ground energy {}", s.id, states.len(), states[0].energy);
    Ok(())
}

fn run_tunneling(s: &Scenario, dir: &Path) -> Result<(), Failure> {
    let report = pipeline::tunneling(&s.id, &s.params, s.variant, &s.grid, s.z_w)?;
    write_json(&out_file(dir, s, "tunneling.json"), &meta(s), &report)?;

    // the ejected-channel state used in the rate, on [0, 2 z_w]
    let z_w = s.z_w.unwrap_or_else(|| default_z_w(&s.params));
    let cont = continuum_state_with_energy(airy_ai_zero(1)?, z_w, &s.params, report.energy)?;
    let n = 4000;
    let rows = (0..=n)
        .map(|i| {
            let z = 2.0 * z_w * i as f64 / n as f64;
            cont.v(z).map(|(v, _)| vec![z, v])
        })
        .collect::<Result<Vec<_>, _>>()?;
    write_csv(&out_file(dir, s, "continuum.csv"), &meta(s), &["z", "v"], rows)?;
    let airy = airy_bound_state(&s.params)?;
    let rows = (0..=n)
        .map(|i| {
            let z = 20.0 * i as f64 / n as f64;
            airy.u(z).map(|u| vec![z, u])
        })
        .collect::<Result<Vec<_>, _>>()?;
    write_csv(&out_file(dir, s, "airy.csv"), &meta(s), &["z", "u"], rows)?;
    info!("{}: channel rate {:e}, barrier rate {:e}", s.id, report.channel_rate, report.barrier_rate);
    Ok(())
}

fn run_classical(s: &Scenario, dir: &Path) -> Result<(), Failure> {
    let spec = s
        .classical
        .as_ref()
        .ok_or_else(|| config_failure(format!("invalid configuration field `classical`: scenario `{}` has no classical block", s.id)))?;
    let model = s.classical_model()?;
    let init = spec.initial_state(&model)?;
    let traj = integrate_trajectory(&init, &model, spec.dt, spec.steps)?;
    let rows = traj.iter().map(|st| {
        let (x, v, n) = (st.position, st.velocity, st.spin_dir);
        vec![st.time, x[0], x[1], x[2], v[0], v[1], v[2], n[0], n[1], n[2]]
    });
    write_csv(
        &out_file(dir, s, "trajectory.csv"),
        &meta(s),
        &["tau", "x", "y", "z", "vx", "vy", "vz", "sx", "sy", "sz"],
        rows,
    )?;
    let sweep = beta_sweep(&spec.betas, &init, &model, spec.dt, spec.steps, spec.escape_radius)?;
    write_json(&out_file(dir, s, "sweep.json"), &meta(s), &sweep)?;
    info!("{}: {} steps, {} sweep runs", s.id, spec.steps, sweep.len());
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    configure_threads()?;
    if cli.command == Command::Reproduce {
        return reproduce::run(cli.scenario.as_deref(), &cli.out, cli.grid_step, cli.variant);
    }
    let s = load(cli)?;
    match cli.command {
        Command::Potentials => run_potentials(&s, &cli.out),
        Command::Boundstate => run_boundstate(&s, &cli.out),
        Command::Tunneling => run_tunneling(&s, &cli.out),
        Command::Classical => run_classical(&s, &cli.out),
        Command::Reproduce => unreachable!(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
