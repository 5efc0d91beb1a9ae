//! Through-barrier (WKB bound) and spin-flip (golden rule) escape rates.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::DimensionlessParams;
use crate::quad::{fixed_panels, integrate, QuadOptions};
use crate::specfun::airy_ai;
use crate::spectra::{AiryBoundState, ContinuumState, RadialCurve};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarrierGeometry {
    pub energy: f64,
    pub v_max: f64,
    pub v_min: f64,
    /// Left turning point ξ₀ of the well.
    pub xi_left: f64,
    /// Right turning point ξ₁ of the well, where the barrier starts.
    pub xi_right: f64,
    /// Where the barrier ends at this energy.
    pub xi_outer: f64,
    pub xi_d: f64,
    pub xi_at_max: f64,
}

fn crossing(xi: &[f64], v: &[f64], i: usize, e: f64) -> f64 {
    // linear interpolation of v − e between i−1 and i
    let (x0, x1) = (xi[i - 1], xi[i]);
    let (f0, f1) = (v[i - 1] - e, v[i] - e);
    x0 + (x1 - x0) * f0 / (f0 - f1)
}

/// Turning points and barrier extrema at `energy`.
///
/// The well is the first classically allowed interval from the left; the
/// barrier runs from its right turning point to the next crossing.
pub fn barrier_geometry(curve: &RadialCurve, energy: f64) -> Result<BarrierGeometry> {
    let (xi, v) = (&curve.xi, &curve.v);
    let n = v.len();
    let below = |i: usize| v[i] < energy;
    let i0 = (1..n).find(|&i| below(i) && !below(i - 1)).ok_or_else(|| {
        Error::NoBarrier(format!("curve never drops below E = {energy} from a classically forbidden start"))
    })?;
    let i1 = (i0 + 1..n).find(|&i| !below(i)).ok_or_else(|| {
        Error::NoBarrier(format!("no wall to the right of the well at E = {energy} (monotone curve?)"))
    })?;
    let i2 = (i1 + 1..n).find(|&i| below(i)).ok_or_else(|| {
        Error::NoBarrier(format!("E = {energy} is above the barrier top or the barrier never ends"))
    })?;
    let xi_left = crossing(xi, v, i0, energy);
    let xi_right = crossing(xi, v, i1, energy);
    let xi_outer = crossing(xi, v, i2, energy);
    let v_min = v[i0..i1].iter().copied().fold(f64::INFINITY, f64::min);
    let imax = (i1..i2).max_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap_or(i1);
    let (xi_at_max, v_max) = if imax > 0 && imax + 1 < n {
        // parabola through the three points around the grid maximum
        let (ym, y0, yp) = (v[imax - 1], v[imax], v[imax + 1]);
        let h = xi[imax + 1] - xi[imax];
        let den = ym - 2.0 * y0 + yp;
        if den < 0.0 {
            let t = 0.5 * (ym - yp) / den;
            (xi[imax] + t * h, y0 - 0.25 * (ym - yp) * t)
        } else {
            (xi[imax], y0)
        }
    } else {
        (xi[imax], v[imax])
    };
    Ok(BarrierGeometry { energy, v_max, v_min, xi_left, xi_right, xi_outer, xi_d: xi_outer - xi_right, xi_at_max })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarrierRate {
    pub theta_bound: f64,
    pub log10_theta: f64,
    pub hits_per_omega: f64,
    pub rate: f64,
    pub log10_rate: f64,
}

/// `θ < exp(−√2 ξ_d √((α/γ)(V_max − E)))`, `n/ω = √(2(γ/α)³(E − V_min))/|ξ₀ − ξ₁|`.
pub fn barrier_rate(geom: &BarrierGeometry, params: &DimensionlessParams) -> Result<BarrierRate> {
    let r = params.alpha / params.gamma;
    if !(r > 0.0) {
        return Err(Error::config("gamma", "alpha/gamma must be positive"));
    }
    let exponent = -2f64.sqrt() * geom.xi_d * (r * (geom.v_max - geom.energy).max(0.0)).sqrt();
    let hits = (2.0 * r.powi(-3) * (geom.energy - geom.v_min).max(0.0)).sqrt() / (geom.xi_left - geom.xi_right).abs();
    let log10_theta = exponent / std::f64::consts::LN_10;
    Ok(BarrierRate {
        theta_bound: exponent.exp(),
        log10_theta,
        hits_per_omega: hits,
        rate: exponent.exp() * hits,
        log10_rate: log10_theta + hits.log10(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelRate {
    pub rate: f64,
    pub integral: f64,
    pub prefactor: f64,
    pub upper_limit: f64,
    pub abs_error: f64,
}

struct Integrand<'a> {
    u: &'a AiryBoundState,
    v: &'a ContinuumState,
    c: f64,
}

impl Integrand<'_> {
    /// `∂𝔷(u/S)` with `S = √(1 + c𝔷²)`.
    fn du_over_s(&self, z: f64) -> Result<f64> {
        let s = (1.0 + self.c * z * z).sqrt();
        let (u, up) = (self.u.u(z)?, self.u.u_prime(z)?);
        Ok(up / s - u * self.c * z / (s * s * s))
    }

    fn eval(&self, z: f64) -> Result<f64> {
        let s = (1.0 + self.c * z * z).sqrt();
        Ok(self.du_over_s(z)? * self.v.v(z)?.0 / s)
    }
}

/// Relative level below which the bound-state factor is treated as zero.
pub const CUTOFF_LEVEL: f64 = 1e-12;

fn cutoff(u: &AiryBoundState) -> Result<f64> {
    let mut peak: f64 = 0.0;
    let mut z: f64 = 0.0;
    loop {
        let (a, ap) = airy_ai(z + u.z0)?;
        let mag = (u.c * a).abs().max((u.c * ap).abs());
        peak = peak.max(mag);
        if z > -u.z0 && mag < CUTOFF_LEVEL * peak {
            return Ok(z);
        }
        z += 0.25;
        if z > 150.0 {
            return Err(Error::NoConvergence { what: "channel-rate cutoff", detail: "bound state did not decay by z = 150".into() });
        }
    }
}

fn setup<'a>(u: &'a AiryBoundState, v: &'a ContinuumState, params: &DimensionlessParams) -> Result<(Integrand<'a>, f64, f64)> {
    if params.beta == 0.0 {
        return Err(Error::config("beta", "the spin-flip rate formula divides by beta"));
    }
    let c = (params.gamma * params.alpha).abs().powf(2.0 / 3.0) / (params.beta * params.beta);
    let prefactor = PI / 2.0 * params.ratio() * (params.gamma / params.beta).powi(2);
    Ok((Integrand { u, v, c }, prefactor, cutoff(u)?))
}

/// Golden-rule spin-flip rate
/// `Γ/ω = (π/2)(γ/α)(γ/β)² |∫₀^∞ ∂𝔷(u/S)·v/S d𝔷|²`.
pub fn channel_rate(u: &AiryBoundState, v: &ContinuumState, params: &DimensionlessParams) -> Result<ChannelRate> {
    let (f, prefactor, upper) = setup(u, v, params)?;
    let mut failure = None;
    let opts = QuadOptions { abs_tol: 1e-300, rel_tol: 1e-10, max_intervals: 50_000, initial_panels: upper.ceil() as usize * 2 };
    let r = integrate(
        |z| match f.eval(z) {
            Ok(x) => x,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        upper,
        opts,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let r = r?;
    Ok(ChannelRate { rate: prefactor * r.value * r.value, integral: r.value, prefactor, upper_limit: upper, abs_error: r.abs_error })
}

/// The same rate with a fixed, non-adaptive rule of `panels` panels.
pub fn channel_rate_fixed(u: &AiryBoundState, v: &ContinuumState, params: &DimensionlessParams, panels: usize) -> Result<f64> {
    let (f, prefactor, upper) = setup(u, v, params)?;
    let i = fixed_panels(|z| f.eval(z).unwrap_or(f64::NAN), 0.0, upper, panels);
    if !i.is_finite() {
        return Err(Error::NoConvergence { what: "channel rate", detail: "non-finite integrand".into() });
    }
    Ok(prefactor * i * i)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TunnelingReport {
    pub scenario: String,
    pub energy: f64,
    pub v_max: f64,
    pub v_min: f64,
    pub xi_d: f64,
    pub theta_bound: f64,
    pub hits_per_omega: f64,
    pub barrier_rate: f64,
    pub channel_rate: f64,
    pub z_w: f64,
    pub log10_theta_bound: f64,
    pub log10_barrier_rate: f64,
    pub airy_energy: f64,
    pub xi_left: f64,
    pub xi_right: f64,
}
