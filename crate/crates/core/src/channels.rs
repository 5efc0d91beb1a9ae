//! The 2x2 matrix potential and its pointwise adiabatic decomposition.
//!
//! Eigenvectors are handled through the mixing angle `φ = ½·atan2(V12, Θ)`:
//! `χ₊ = (cos φ, sin φ)` coincides with the printed `(Θ+Λ, V12)·σ₊`, and the
//! printed `χ₋ = (Θ−Λ, V12)·σ₋` equals `sign(V12)·(−sin φ, cos φ)`. The printed
//! vectors flip sign wherever `V12` crosses zero (at every zero of `J₁` in
//! the full variant), so `φ` is unwrapped modulo π along the grid instead.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::DimensionlessParams;
use crate::specfun::{bessel_j, bessel_j_prime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Off-diagonal `−αξ/2`.
    Paraxial,
    /// Off-diagonal `−α J₁(κ_z ξ)`.
    #[default]
    Full,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Paraxial => "paraxial",
            Variant::Full => "full",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paraxial" => Ok(Variant::Paraxial),
            "full" => Ok(Variant::Full),
            other => Err(Error::config("variant", format!("expected `paraxial` or `full`, got `{other}`"))),
        }
    }
}

/// One sample of the symmetric matrix potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialMatrixSample {
    pub xi: f64,
    pub v11: f64,
    pub v12: f64,
    pub v22: f64,
}

impl PotentialMatrixSample {
    pub fn trace(&self) -> f64 {
        self.v11 + self.v22
    }

    pub fn det(&self) -> f64 {
        self.v11 * self.v22 - self.v12 * self.v12
    }
}

fn check_xi(xi: f64) -> Result<()> {
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(Error::Domain { what: "radial coordinate", reason: format!("xi must be finite and > 0, got {xi}") });
    }
    Ok(())
}

fn offdiag(xi: f64, p: &DimensionlessParams, variant: Variant) -> Result<f64> {
    Ok(match variant {
        Variant::Paraxial => -0.5 * p.alpha * xi,
        Variant::Full => -p.alpha * bessel_j(1, p.kappa_z * xi)?,
    })
}

fn offdiag_prime(xi: f64, p: &DimensionlessParams, variant: Variant) -> Result<f64> {
    Ok(match variant {
        Variant::Paraxial => -0.5 * p.alpha,
        Variant::Full => -p.alpha * p.kappa_z * bessel_j_prime(1, p.kappa_z * xi)?,
    })
}

pub fn potential_matrix(xi: f64, p: &DimensionlessParams, variant: Variant) -> Result<PotentialMatrixSample> {
    check_xi(xi)?;
    let mu = p.mu();
    let m = p.m as f64;
    let x2 = xi * xi;
    Ok(PotentialMatrixSample {
        xi,
        v11: mu * (p.kappa_z + 0.25) - 0.5 * p.beta + mu * (m + 1.5) * (m + 0.5) / x2,
        v12: offdiag(xi, p, variant)?,
        v22: mu * (-p.kappa_z + 0.25) + 0.5 * p.beta + mu * (m + 0.5) * (m - 0.5) / x2,
    })
}

/// `Θ(ξ) = (γ/2α)((m+½)/ξ² − αβ/γ + κ_z)`.
pub fn theta(xi: f64, p: &DimensionlessParams) -> f64 {
    p.mu() * ((p.m as f64 + 0.5) / (xi * xi) + p.kappa_z) - 0.5 * p.beta
}

fn theta_prime(xi: f64, p: &DimensionlessParams) -> f64 {
    -2.0 * p.mu() * (p.m as f64 + 0.5) / (xi * xi * xi)
}

/// Pointwise eigen-data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointEigen {
    pub theta: f64,
    pub lambda: f64,
    pub v_plus: f64,
    pub v_minus: f64,
    pub offdiag: f64,
    /// Mixing angle `½·atan2(V12, Θ)` in `(−π/2, π/2]`.
    pub angle: f64,
}

pub fn eigen_at(xi: f64, p: &DimensionlessParams, variant: Variant) -> Result<PointEigen> {
    check_xi(xi)?;
    let th = theta(xi, p);
    let c = offdiag(xi, p, variant)?;
    // full variant: squared J₁ (the printed form drops the square)
    let lambda = th.hypot(c);
    if !(lambda > 0.0) {
        return Err(Error::Degenerate { xi });
    }
    let centre = p.mu() * ((p.m as f64 + 0.5).powi(2) / (xi * xi) + 0.25);
    Ok(PointEigen {
        theta: th,
        lambda,
        v_plus: centre + lambda,
        v_minus: centre - lambda,
        offdiag: c,
        angle: 0.5 * c.atan2(th),
    })
}

/// Exact `φ′(ξ) = (Θ c′ − c Θ′)/(2Λ²)`. Used as an oracle and for the general coupling.
pub fn angle_derivative(xi: f64, p: &DimensionlessParams, variant: Variant) -> Result<f64> {
    let e = eigen_at(xi, p, variant)?;
    let cp = offdiag_prime(xi, p, variant)?;
    Ok((e.theta * cp - e.offdiag * theta_prime(xi, p)) / (2.0 * e.lambda * e.lambda))
}

/// Printed `σ± = [2Λ(Λ ± Θ)]^{-1/2}`.
pub fn sigma(e: &PointEigen) -> (f64, f64) {
    (
        (2.0 * e.lambda * (e.lambda + e.theta)).powf(-0.5),
        (2.0 * e.lambda * (e.lambda - e.theta)).powf(-0.5),
    )
}

fn align(angle: f64, reference: f64) -> f64 {
    angle + ((reference - angle) / std::f64::consts::PI).round() * std::f64::consts::PI
}

/// Decomposition of the matrix potential sampled on a radial grid.
#[derive(Debug, Clone)]
pub struct ChannelDecomposition {
    pub params: DimensionlessParams,
    pub variant: Variant,
    pub grid: Vec<f64>,
    pub theta: Vec<f64>,
    pub lambda: Vec<f64>,
    pub v_plus: Vec<f64>,
    pub v_minus: Vec<f64>,
    /// Equal to `v_plus`/`v_minus` until [`corrected_potentials`] has run.
    pub v_tilde_plus: Vec<f64>,
    pub v_tilde_minus: Vec<f64>,
    pub chi_plus: Vec<[f64; 2]>,
    pub chi_minus: Vec<[f64; 2]>,
    pub w0_mult: Vec<f64>,
    pub w0_deriv: Vec<f64>,
    /// Unwrapped mixing angle.
    pub angle: Vec<f64>,
    /// Overall sign of `χ₋` fixed at the first grid point.
    pub minus_sign: f64,
    pub corrected: bool,
}

/// Uniform grid `start, start+step, …` up to and including `end` (within rounding).
pub fn uniform_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(end > start) || !(start > 0.0) {
        return Err(Error::Domain {
            what: "radial grid",
            reason: format!("need 0 < start < end and step > 0, got start {start}, end {end}, step {step}"),
        });
    }
    let n = ((end - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| start + i as f64 * step).collect())
}

pub fn decompose(grid: &[f64], p: &DimensionlessParams, variant: Variant) -> Result<ChannelDecomposition> {
    if grid.is_empty() || grid[0] <= 0.0 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain { what: "decompose", reason: "grid must be non-empty, positive and strictly increasing".into() });
    }
    let n = grid.len();
    let mut dec = ChannelDecomposition {
        params: *p,
        variant,
        grid: grid.to_vec(),
        theta: Vec::with_capacity(n),
        lambda: Vec::with_capacity(n),
        v_plus: Vec::with_capacity(n),
        v_minus: Vec::with_capacity(n),
        v_tilde_plus: Vec::new(),
        v_tilde_minus: Vec::new(),
        chi_plus: Vec::with_capacity(n),
        chi_minus: Vec::with_capacity(n),
        w0_mult: Vec::with_capacity(n),
        w0_deriv: Vec::with_capacity(n),
        angle: Vec::with_capacity(n),
        minus_sign: 1.0,
        corrected: false,
    };
    let mut prev = f64::NAN;
    for (i, &xi) in grid.iter().enumerate() {
        let e = eigen_at(xi, p, variant)?;
        let phi = if i == 0 {
            dec.minus_sign = if e.offdiag < 0.0 { -1.0 } else { 1.0 };
            e.angle
        } else {
            align(e.angle, prev)
        };
        prev = phi;
        let (s, c) = phi.sin_cos();
        dec.theta.push(e.theta);
        dec.lambda.push(e.lambda);
        dec.v_plus.push(e.v_plus);
        dec.v_minus.push(e.v_minus);
        dec.chi_plus.push([c, s]);
        dec.chi_minus.push([-dec.minus_sign * s, dec.minus_sign * c]);
        dec.angle.push(phi);
        let (wm, wd) = coupling_w0(xi, p);
        dec.w0_mult.push(wm);
        dec.w0_deriv.push(wd);
    }
    dec.v_tilde_plus = dec.v_plus.clone();
    dec.v_tilde_minus = dec.v_minus.clone();
    Ok(dec)
}

/// Largest finite-difference step for `χ″`; independent of the grid spacing.
pub const CHI_FD_STEP: f64 = 1e-4;

/// Difference step at `xi`: at most [`CHI_FD_STEP`], an eighth of `xi`, and
/// 1/400 of the scale `Λ/(|Θ′| + |c′|)` over which the mixing angle
/// turns (narrow avoided crossings at small β).
pub fn chi_fd_step(xi: f64, p: &DimensionlessParams, variant: Variant) -> Result<f64> {
    let e = eigen_at(xi, p, variant)?;
    let rate = theta_prime(xi, p).abs() + offdiag_prime(xi, p, variant)?.abs();
    let width = if rate > 0.0 { e.lambda / rate } else { f64::INFINITY };
    Ok(CHI_FD_STEP.min(xi / 8.0).min(width / 400.0))
}
/// Tolerance of the step-halving check on the correction term.
pub const CHI_FD_TOL: f64 = 1e-6;

/// `(χ₊ᵀχ₊″, χ₋ᵀχ₋″)` at `xi` by a centred 4th-order stencil of step `h`.
pub fn chi_second_projection(xi: f64, p: &DimensionlessParams, variant: Variant, h: f64) -> Result<(f64, f64)> {
    let centre = eigen_at(xi, p, variant)?.angle;
    let mut plus = [[0.0; 2]; 5];
    let mut minus = [[0.0; 2]; 5];
    for (k, j) in (-2i32..=2).enumerate() {
        let phi = align(eigen_at(xi + j as f64 * h, p, variant)?.angle, centre);
        let (s, c) = phi.sin_cos();
        plus[k] = [c, s];
        minus[k] = [-s, c];
    }
    let d2 = |f: &[[f64; 2]; 5], r: usize| (-f[0][r] + 16.0 * f[1][r] - 30.0 * f[2][r] + 16.0 * f[3][r] - f[4][r]) / (12.0 * h * h);
    let proj = |f: &[[f64; 2]; 5]| f[2][0] * d2(f, 0) + f[2][1] * d2(f, 1);
    Ok((proj(&plus), proj(&minus)))
}

/// Populates `Ṽ± = V± − (γ/2α)·χ±ᵀχ±″`.
///
/// Fails if halving the difference step changes the correction by more
/// than `1e-6·max(1, |correction|)`.
pub fn corrected_potentials(mut dec: ChannelDecomposition) -> Result<ChannelDecomposition> {
    let p = dec.params;
    let mu = p.mu();
    for i in 0..dec.grid.len() {
        let xi = dec.grid[i];
        let h = chi_fd_step(xi, &p, dec.variant)?;
        let (fp, fm) = chi_second_projection(xi, &p, dec.variant, h)?;
        let (cp, cm) = chi_second_projection(xi, &p, dec.variant, 2.0 * h)?;
        for (fine, coarse) in [(fp, cp), (fm, cm)] {
            let (a, b) = (mu * fine, mu * coarse);
            if !a.is_finite() || (a - b).abs() > CHI_FD_TOL * a.abs().max(1.0) {
                return Err(Error::NoConvergence {
                    what: "eigenvector second derivative",
                    detail: format!("step-halving check failed at xi = {xi}: {a} vs {b}"),
                });
            }
        }
        dec.v_tilde_plus[i] = dec.v_plus[i] - mu * fp;
        dec.v_tilde_minus[i] = dec.v_minus[i] - mu * fm;
    }
    dec.corrected = true;
    Ok(dec)
}

/// Approximate coupling `W̃₀ = mult + deriv·∂_ξ` for small γ/α:
/// `mult = (|γ|β/2)·α²ξ/s⁴`, `deriv = −(|γ|β/2)/s²`, `s² = β² + α²ξ²`.
pub fn coupling_w0(xi: f64, p: &DimensionlessParams) -> (f64, f64) {
    let s2 = p.beta * p.beta + p.alpha * p.alpha * xi * xi;
    if p.beta == 0.0 {
        return (0.0, 0.0);
    }
    let k = 0.5 * p.gamma.abs() * p.beta;
    (k * p.alpha * p.alpha * xi / (s2 * s2), -k / s2)
}

/// The general off-diagonal coupling built from the eigenvectors, returned
/// as `(mult, deriv)` for the upper-right entry:
/// `W̃₁₂ = s·(γ/2α)(φ″ + 2φ′∂_ξ)` with `s` the sign of `χ₋`, and `W̃₂₁ = −W̃₁₂`.
/// `φ″` is a centred difference of the exact `φ′`.
pub fn coupling_general(xi: f64, p: &DimensionlessParams, variant: Variant, minus_sign: f64) -> Result<(f64, f64)> {
    let d1 = angle_derivative(xi, p, variant)?;
    let h = chi_fd_step(xi, p, variant)?;
    let d2 = (angle_derivative(xi + h, p, variant)? - angle_derivative(xi - h, p, variant)?) / (2.0 * h);
    let mu = p.mu();
    Ok((minus_sign * mu * d2, minus_sign * 2.0 * mu * d1))
}

/// γ/α → 0 forms of Θ, Λ, σ±, χ± (paraxial).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallRatioForms {
    pub theta: f64,
    pub lambda: f64,
    pub sigma_plus: f64,
    pub sigma_minus: f64,
    pub chi_plus: [f64; 2],
    pub chi_minus: [f64; 2],
}

pub fn small_ratio_forms(xi: f64, p: &DimensionlessParams) -> SmallRatioForms {
    let s = (p.beta * p.beta + p.alpha * p.alpha * xi * xi).sqrt();
    let b = p.beta;
    let ax = p.alpha * xi;
    let sig = |sgn: f64| 2f64.sqrt() * (s * (s - sgn * b)).powf(-0.5);
    let chi = |sgn: f64| {
        let n = sgn * (2.0 * s * (s - sgn * b)).powf(-0.5);
        [n * (s - sgn * b), n * (-sgn * ax)]
    };
    SmallRatioForms {
        theta: -0.5 * b,
        lambda: 0.5 * s,
        sigma_plus: sig(1.0),
        sigma_minus: sig(-1.0),
        chi_plus: chi(1.0),
        chi_minus: chi(-1.0),
    }
}

/// Printed (unnormalised-sign) eigenvectors `(Θ ± Λ, V12)·σ±` at a point.
pub fn printed_eigenvectors(e: &PointEigen) -> ([f64; 2], [f64; 2]) {
    let (sp, sm) = sigma(e);
    ([(e.theta + e.lambda) * sp, e.offdiag * sp], [(e.theta - e.lambda) * sm, e.offdiag * sm])
}
