//! Classical point particle with a precessing magnetic moment in the
//! paraxial field.
//!
//! With `F = ∇(μ·B)`, `dμ/dt = g μ×B` and the dimensionless variables of
//! the quantum problem, the motion reads
//!
//! ```text
//! ξ″ = (γ/2)·∇_ξ (n·b),   n′ = n × Ω,   Ω = α R_z(ζ)(ξ_y, ξ_x, 0) + (β − α/γ) ẑ
//! ```
//!
//! with `ζ = (α/γ)τ − ξ_z`. The fast rotation is removed by integrating the
//! spin in the frame turned by `ζ`, `n = R_z(ζ) n′`, where
//!
//! ```text
//! ξ″  = (γ/2)(n′_y, n′_x, n′_x ξ_x − n′_y ξ_y)
//! n′′ = n′ × (α ξ_y, α ξ_x, β − ξ_z′)
//! ```
//!
//! Both `K` and `J` below are exact invariants of this system.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::DimensionlessParams;

/// A lab-frame snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalState {
    pub position: [f64; 3],
    pub velocity: [f64; 3],
    /// Unit magnetic-moment direction.
    pub spin_dir: [f64; 3],
    #[serde(default)]
    pub time: f64,
}

/// Coefficients of the equations of motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalModel {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `α/γ`, the rate at which `ζ` advances.
    pub frame_rate: f64,
}

impl ClassicalModel {
    pub fn new(params: &DimensionlessParams) -> Result<Self> {
        params.validate()?;
        Ok(ClassicalModel { alpha: params.alpha, beta: params.beta, gamma: params.gamma, frame_rate: params.alpha / params.gamma })
    }

    /// Only the axial field: no vortex wave.
    pub fn uniform_field(beta: f64, frame_rate: f64) -> Self {
        ClassicalModel { alpha: 0.0, beta, gamma: 0.0, frame_rate }
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    fn zeta(&self, tau: f64, z: f64) -> f64 {
        self.frame_rate * tau - z
    }

    fn deriv(&self, y: &[f64; 9]) -> [f64; 9] {
        let (x, yy) = (y[0], y[1]);
        let (vz, n) = (y[5], [y[6], y[7], y[8]]);
        let g = 0.5 * self.gamma;
        let w = [self.alpha * yy, self.alpha * x, self.beta - vz];
        [
            y[3],
            y[4],
            y[5],
            g * n[1],
            g * n[0],
            g * (n[0] * x - n[1] * yy),
            n[1] * w[2] - n[2] * w[1],
            n[2] * w[0] - n[0] * w[2],
            n[0] * w[1] - n[1] * w[0],
        ]
    }

    fn to_internal(&self, s: &ClassicalState) -> [f64; 9] {
        let (sn, cs) = self.zeta(s.time, s.position[2]).sin_cos();
        let n = s.spin_dir;
        [
            s.position[0],
            s.position[1],
            s.position[2],
            s.velocity[0],
            s.velocity[1],
            s.velocity[2],
            cs * n[0] + sn * n[1],
            -sn * n[0] + cs * n[1],
            n[2],
        ]
    }

    fn to_lab(&self, y: &[f64; 9], tau: f64) -> ClassicalState {
        let (sn, cs) = self.zeta(tau, y[2]).sin_cos();
        ClassicalState {
            position: [y[0], y[1], y[2]],
            velocity: [y[3], y[4], y[5]],
            spin_dir: [cs * y[6] - sn * y[7], sn * y[6] + cs * y[7], y[8]],
            time: tau,
        }
    }

    /// `K = v²/2 − (γ/2)(n′_x ξ_y + n′_y ξ_x) + (1/2 − γβ/2α) n′_z − (α/γ) v_z`.
    pub fn energy_invariant(&self, s: &ClassicalState) -> f64 {
        let y = self.to_internal(s);
        let v2 = y[3] * y[3] + y[4] * y[4] + y[5] * y[5];
        let spin_term = if self.frame_rate == 0.0 { 0.0 } else { 0.5 * self.beta / self.frame_rate };
        0.5 * v2 - 0.5 * self.gamma * (y[6] * y[1] + y[7] * y[0]) + (0.5 - spin_term) * y[8] - self.frame_rate * y[5]
    }

    /// `J = ξ_x v_y − ξ_y v_x − (γ/2α) n′_z`.
    pub fn angular_invariant(&self, s: &ClassicalState) -> f64 {
        let y = self.to_internal(s);
        let spin = if self.frame_rate == 0.0 { 0.0 } else { 0.5 / self.frame_rate };
        y[0] * y[4] - y[1] * y[3] - spin * y[8]
    }
}

fn rk4(model: &ClassicalModel, y: &[f64; 9], dt: f64) -> [f64; 9] {
    let add = |a: &[f64; 9], k: &[f64; 9], s: f64| {
        let mut o = *a;
        o.iter_mut().zip(k).for_each(|(o, k)| *o += s * k);
        o
    };
    let k1 = model.deriv(y);
    let k2 = model.deriv(&add(y, &k1, 0.5 * dt));
    let k3 = model.deriv(&add(y, &k2, 0.5 * dt));
    let k4 = model.deriv(&add(y, &k3, dt));
    let mut out = *y;
    for j in 0..9 {
        out[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    let norm = (out[6] * out[6] + out[7] * out[7] + out[8] * out[8]).sqrt();
    out[6] /= norm;
    out[7] /= norm;
    out[8] /= norm;
    out
}

fn check_run(dt: f64, initial: &ClassicalState) -> Result<()> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::config("classical.dt", "must be a positive number"));
    }
    let n = initial.spin_dir;
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if !((norm - 1.0).abs() < 1e-9) {
        return Err(Error::config("classical.initial.spin_dir", format!("must be a unit vector, |n| = {norm}")));
    }
    Ok(())
}

/// Visits every state of a fixed-step RK4 run (including the initial one).
pub fn run_trajectory<F: FnMut(usize, &ClassicalState)>(
    initial: &ClassicalState,
    model: &ClassicalModel,
    dt: f64,
    steps: usize,
    mut visit: F,
) -> Result<ClassicalState> {
    check_run(dt, initial)?;
    let mut y = model.to_internal(initial);
    visit(0, initial);
    let mut last = *initial;
    for i in 1..=steps {
        let next = rk4(model, &y, dt);
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "classical trajectory", last_valid: i - 1 });
        }
        y = next;
        last = model.to_lab(&y, initial.time + i as f64 * dt);
        visit(i, &last);
    }
    Ok(last)
}

/// All `steps + 1` states of a run.
pub fn integrate_trajectory(initial: &ClassicalState, model: &ClassicalModel, dt: f64, steps: usize) -> Result<Vec<ClassicalState>> {
    let mut out = Vec::with_capacity(steps + 1);
    run_trajectory(initial, model, dt, steps, |_, s| out.push(*s))?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityMetrics {
    pub beta: f64,
    pub radial_spread: f64,
    pub circularity: f64,
    pub escaped: bool,
}

/// Default escape radius: the beam edge `ξ_w = 4π`.
pub const ESCAPE_RADIUS: f64 = 4.0 * std::f64::consts::PI;

/// Radial spread over the whole run and `1 − σ_ρ/⟨ρ⟩` over its trailing half.
/// An escaped orbit has circularity 0.
pub fn stability_metrics(
    initial: &ClassicalState,
    model: &ClassicalModel,
    dt: f64,
    steps: usize,
    escape_radius: f64,
) -> Result<StabilityMetrics> {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut sum, mut sum2, mut count) = (0.0, 0.0, 0usize);
    let mut escaped = false;
    let half = steps / 2;
    run_trajectory(initial, model, dt, steps, |i, s| {
        let rho = s.position[0].hypot(s.position[1]);
        lo = lo.min(rho);
        hi = hi.max(rho);
        escaped |= rho > escape_radius;
        if i >= half {
            sum += rho;
            sum2 += rho * rho;
            count += 1;
        }
    })?;
    let mean = sum / count as f64;
    let var = (sum2 / count as f64 - mean * mean).max(0.0);
    let circularity = if escaped || mean <= 0.0 { 0.0 } else { (1.0 - var.sqrt() / mean).clamp(0.0, 1.0) };
    Ok(StabilityMetrics { beta: model.beta, radial_spread: hi - lo, circularity, escaped })
}

/// One metric per β, all runs from the same initial state, in parallel.
pub fn beta_sweep(
    betas: &[f64],
    initial: &ClassicalState,
    model: &ClassicalModel,
    dt: f64,
    steps: usize,
    escape_radius: f64,
) -> Result<Vec<StabilityMetrics>> {
    if betas.is_empty() {
        return Err(Error::config("classical.betas", "must not be empty"));
    }
    betas
        .par_iter()
        .map(|&b| stability_metrics(initial, &model.with_beta(b), dt, steps, escape_radius))
        .collect()
}

/// Initial state on a circular orbit of radius `r0` with the moment
/// anti-aligned to the effective field seen in the frame co-rotating with
/// the orbit, solved self-consistently at the given β.
pub fn tuned_initial_state(model: &ClassicalModel, r0: f64) -> Result<ClassicalState> {
    if !(r0 > 0.0) {
        return Err(Error::config("classical.tuned_radius", "must be positive"));
    }
    let mut rate = 0.0; // orbital angular velocity
    let mut state = None;
    for _ in 0..200 {
        let omega = [0.0, model.alpha * r0, model.beta - rate];
        let mag = (omega[1] * omega[1] + omega[2] * omega[2]).sqrt();
        let force = 0.5 * model.gamma.abs() * model.alpha.abs() * r0 / mag;
        let v = (r0 * force).sqrt();
        let new_rate = v / r0;
        let n = [0.0, -omega[1] / mag, -omega[2] / mag];
        state = Some(ClassicalState { position: [r0, 0.0, 0.0], velocity: [0.0, v, 0.0], spin_dir: n, time: 0.0 });
        if (new_rate - rate).abs() < 1e-15 * new_rate.abs().max(1.0) {
            break;
        }
        rate = new_rate;
    }
    state.ok_or_else(|| Error::NoConvergence { what: "tuned initial state", detail: "fixed point not reached".into() })
}
