//! End-to-end computations shared by the CLI, the bindings and the tests.

use serde::{Deserialize, Serialize};

use crate::channels::{corrected_potentials, decompose, uniform_grid, ChannelDecomposition, Variant};
use crate::error::{Error, Result};
use crate::fields::DimensionlessParams;
use crate::specfun::airy_ai_zero;
use crate::spectra::{
    airy_bound_state, binding_curve, continuum_state_with_energy, default_z_w, solve_bound_states, BoundState, RadialCurve,
};
use crate::tunneling::{barrier_geometry, barrier_rate, channel_rate, TunnelingReport};

/// Radial grid specification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default = "GridSpec::default_min")]
    pub xi_min: f64,
    #[serde(default = "GridSpec::default_max")]
    pub xi_max: f64,
    #[serde(default = "GridSpec::default_step")]
    pub step: f64,
}

impl GridSpec {
    fn default_min() -> f64 {
        1e-3
    }
    fn default_max() -> f64 {
        60.0
    }
    fn default_step() -> f64 {
        1e-3
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        uniform_grid(self.xi_min, self.xi_max, self.step)
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { xi_min: 1e-3, xi_max: 60.0, step: 1e-3 }
    }
}

/// Corrected channel decomposition on the grid.
pub fn potentials(params: &DimensionlessParams, variant: Variant, grid: &GridSpec) -> Result<ChannelDecomposition> {
    params.validate()?;
    corrected_potentials(decompose(&grid.points()?, params, variant)?)
}

/// Bound states of the binding channel together with the decomposition they came from.
pub fn bound_states(
    params: &DimensionlessParams,
    variant: Variant,
    grid: &GridSpec,
    count: usize,
) -> Result<(ChannelDecomposition, Vec<BoundState>)> {
    let dec = potentials(params, variant, grid)?;
    let states = solve_bound_states(&binding_curve(&dec)?, params, count)?;
    Ok((dec, states))
}

/// Ground-state energy and the full tunneling report for one scenario.
pub fn tunneling(
    scenario: &str,
    params: &DimensionlessParams,
    variant: Variant,
    grid: &GridSpec,
    z_w: Option<f64>,
) -> Result<TunnelingReport> {
    let (dec, states) = bound_states(params, variant, grid, 1)?;
    let ground = states
        .first()
        .ok_or_else(|| Error::NoBarrier("binding channel has no bound state below the barrier top".into()))?;
    let energy = ground.energy;
    let raw = RadialCurve::new(dec.grid.clone(), dec.v_tilde_plus.clone())?;
    let geom = barrier_geometry(&raw, energy)?;
    let br = barrier_rate(&geom, params)?;

    let airy = airy_bound_state(params)?;
    let z_w = z_w.unwrap_or_else(|| default_z_w(params));
    // u and v carry the Airy-zero label; D takes the grid energy.
    let cont = continuum_state_with_energy(airy_ai_zero(1)?, z_w, params, energy)?;
    let cr = channel_rate(&airy, &cont, params)?;
    Ok(TunnelingReport {
        scenario: scenario.to_string(),
        energy,
        v_max: geom.v_max,
        v_min: geom.v_min,
        xi_d: geom.xi_d,
        theta_bound: br.theta_bound,
        hits_per_omega: br.hits_per_omega,
        barrier_rate: br.rate,
        channel_rate: cr.rate,
        z_w,
        log10_theta_bound: br.log10_theta,
        log10_barrier_rate: br.log10_rate,
        airy_energy: airy.energy,
        xi_left: geom.xi_left,
        xi_right: geom.xi_right,
    })
}
