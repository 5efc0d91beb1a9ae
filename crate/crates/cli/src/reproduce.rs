//! Runs the embedded presets and tabulates them against published values.

use std::path::Path;

use log::info;
use rayon::prelude::*;

use trap_lab::channels::Variant;
use trap_lab::classical::beta_sweep;
use trap_lab::output::{fmt_num, write_atomic};
use trap_lab::pipeline;
use trap_lab::scenario::{preset_text, sha256_hex, Scenario};
use trap_lab::tunneling::TunnelingReport;

use crate::{config_failure, Failure};

#[derive(Debug, Clone, Copy)]
enum Band {
    /// `|x − ref| ≤ tol`
    Abs(f64),
    /// `ref/f ≤ x ≤ ref·f`
    Factor(f64),
    /// `|log10 x − log10 ref| ≤ decades`
    Decades(f64),
    /// `x ≤ ref`
    AtMost,
    /// `lo ≤ x ≤ hi`
    Range(f64, f64),
}

impl Band {
    fn check(&self, x: f64, r: f64) -> bool {
        match *self {
            Band::Abs(t) => (x - r).abs() <= t,
            Band::Factor(f) => x >= r / f && x <= r * f,
            Band::Decades(d) => (x.log10() - r.log10()).abs() <= d,
            Band::AtMost => x <= r,
            Band::Range(lo, hi) => x >= lo && x <= hi,
        }
    }

    fn describe(&self) -> String {
        match *self {
            Band::Abs(t) => format!("abs {}", fmt_num(t)),
            Band::Factor(f) => format!("factor {}", fmt_num(f)),
            Band::Decades(d) => format!("decades {}", fmt_num(d)),
            Band::AtMost => "at most".into(),
            Band::Range(lo, hi) => format!("range [{} {}]", fmt_num(lo), fmt_num(hi)),
        }
    }
}

struct Row {
    scenario: &'static str,
    quantity: &'static str,
    computed: f64,
    reference: f64,
    band: Band,
}

const PRESETS: [&str; 3] = ["set1", "set2", "set1b"];

fn load_preset(name: &str, grid_step: Option<f64>, variant: Option<Variant>) -> Result<Scenario, Failure> {
    let mut s = Scenario::preset(name)?;
    if let Some(h) = grid_step {
        s.grid.step = h;
    }
    if let Some(v) = variant {
        s.variant = v;
    }
    Ok(s)
}

fn rows_for(name: &'static str, r: &TunnelingReport) -> Vec<Row> {
    let row = |quantity, computed, reference, band| Row { scenario: name, quantity, computed, reference, band };
    match name {
        "set1" => vec![
            row("ground_energy", r.energy, 0.67, Band::Range(0.5, 0.9)),
            row("airy_energy", r.airy_energy, 0.3632, Band::Abs(1e-4)),
            row("v_max", r.v_max, 1.79, Band::Abs(0.05)),
            row("xi_d", r.xi_d, 3.12, Band::Abs(0.15)),
            row("log10_theta_bound", r.log10_theta_bound, -35.2, Band::Abs(1.0)),
            row("barrier_rate", r.barrier_rate, 1e-38, Band::AtMost),
            row("channel_rate", r.channel_rate, 5.1e-7, Band::Factor(3.0)),
        ],
        "set2" => vec![
            row("ground_energy", r.energy, 1.28, Band::Range(1.0, 1.5)),
            row("v_max", r.v_max, 1.55, Band::Abs(0.05)),
            row("xi_d", r.xi_d, 2.21, Band::Abs(0.15)),
            row("log10_theta_bound", r.log10_theta_bound, -7.08, Band::Abs(0.5)),
            row("barrier_rate", r.barrier_rate, 6.6e-11, Band::Decades(1.0)),
            row("channel_rate", r.channel_rate, 7.2e-6, Band::Factor(3.0)),
        ],
        _ => vec![row("channel_rate", r.channel_rate, 1.5e-9, Band::Factor(3.0))],
    }
}

pub fn run(scenario: Option<&str>, dir: &Path, grid_step: Option<f64>, variant: Option<Variant>) -> Result<(), Failure> {
    if scenario.is_some() {
        return Err(config_failure("reproduce runs the embedded presets and takes no --scenario"));
    }
    if let Some(h) = grid_step {
        if !(h > 0.0 && h.is_finite()) {
            return Err(config_failure("--grid-step must be a positive number"));
        }
    }
    let scenarios = PRESETS.iter().map(|n| load_preset(n, grid_step, variant)).collect::<Result<Vec<_>, _>>()?;
    let reports = scenarios
        .par_iter()
        .map(|s| pipeline::tunneling(&s.id, &s.params, s.variant, &s.grid, s.z_w))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows: Vec<Row> = PRESETS.iter().zip(&reports).flat_map(|(n, r)| rows_for(n, r)).collect();

    let sweep = Scenario::preset("sweep")?;
    let spec = sweep.classical.clone().ok_or_else(|| config_failure("sweep preset lacks a classical block"))?;
    let model = sweep.classical_model()?;
    let init = spec.initial_state(&model)?;
    let metrics = beta_sweep(&spec.betas, &init, &model, spec.dt, spec.steps, spec.escape_radius)?;
    let monotone = metrics.windows(2).all(|w| w[1].radial_spread <= w[0].radial_spread);
    rows.push(Row {
        scenario: "sweep",
        quantity: "radial_spread_non_increasing",
        computed: if monotone { 1.0 } else { 0.0 },
        reference: 1.0,
        band: Band::Abs(0.0),
    });

    // provenance: every embedded input plus the overrides
    let mut inputs = String::new();
    for n in PRESETS.iter().chain(["sweep"].iter()) {
        inputs.push_str(preset_text(n).unwrap_or_default());
    }
    inputs.push_str(&format!("grid_step={grid_step:?} variant={variant:?}"));
    let mut text = format!("# scenario=reproduce config_sha256={}\n", sha256_hex(inputs.as_bytes()));
    text.push_str("scenario,quantity,computed,reference,band,status\n");
    let mut passed = 0;
    for r in &rows {
        let ok = r.band.check(r.computed, r.reference);
        passed += ok as usize;
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.scenario,
            r.quantity,
            fmt_num(r.computed),
            fmt_num(r.reference),
            r.band.describe(),
            if ok { "PASS" } else { "FAIL" }
        ));
    }
    let path = dir.join("reproduction.csv");
    write_atomic(&path, text.as_bytes())?;
    info!("wrote {}", path.display());
    println!("{passed} of {} reproduction checks pass; table in {}", rows.len(), path.display());
    Ok(())
}
