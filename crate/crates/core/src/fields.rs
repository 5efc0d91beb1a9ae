//! Field configurations, the dimensionless parameter set, and the three
//! printed forms of the magnetic field (full Bessel, paraxial, guiding).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::bessel_j;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light, m/s.
pub const C_LIGHT: f64 = 299_792_458.0;

/// A physical scenario in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldConfig {
    /// Vortex strength B⊥, tesla.
    pub b_perp: f64,
    /// Uniform axial field, tesla.
    pub b_z: f64,
    /// Wave angular frequency, rad/s.
    pub omega: f64,
    pub k_z: f64,
    pub k_perp: f64,
    /// Signed gyromagnetic ratio, rad/(s·T).
    pub g: f64,
    /// Particle mass, kg.
    pub mass: f64,
}

impl FieldConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("b_perp", self.b_perp),
            ("b_z", self.b_z),
            ("omega", self.omega),
            ("k_z", self.k_z),
            ("k_perp", self.k_perp),
            ("g", self.g),
            ("mass", self.mass),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::config(format!("physical.{name}"), "must be a finite number"));
            }
        }
        if self.mass <= 0.0 {
            return Err(Error::config("physical.mass", "must be positive"));
        }
        if self.omega <= 0.0 {
            return Err(Error::config("physical.omega", "must be positive"));
        }
        if self.k_perp <= 0.0 {
            return Err(Error::config("physical.k_perp", "must be positive"));
        }
        let k2 = (self.omega / C_LIGHT).powi(2);
        let rel = (self.k_z * self.k_z + self.k_perp * self.k_perp - k2).abs() / k2;
        if rel > 1e-12 {
            return Err(Error::config(
                "physical.k_z",
                format!("k_z^2 + k_perp^2 must equal (omega/c)^2; relative mismatch {rel:e}"),
            ));
        }
        Ok(())
    }

    /// Wave number k = ω/c.
    pub fn k(&self) -> f64 {
        self.omega / C_LIGHT
    }

    /// `(a₊, a₋) = ((ω/c ± k_z) / 2k⊥)`.
    pub fn a_coeffs(&self) -> (f64, f64) {
        let k = self.k();
        ((k + self.k_z) / (2.0 * self.k_perp), (k - self.k_z) / (2.0 * self.k_perp))
    }

    /// Builds a configuration with `k_perp` chosen so the dispersion relation holds.
    pub fn from_kappa(b_perp: f64, b_z: f64, omega: f64, kappa_z: f64, g: f64, mass: f64) -> Self {
        let k = omega / C_LIGHT;
        FieldConfig {
            b_perp,
            b_z,
            omega,
            k_z: kappa_z * k,
            k_perp: k * (1.0 - kappa_z * kappa_z).sqrt(),
            g,
            mass,
        }
    }
}

/// The complete dimensionless description of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub kappa_z: f64,
    pub m: i32,
}

impl DimensionlessParams {
    pub const fn new(alpha: f64, beta: f64, gamma: f64, kappa_z: f64, m: i32) -> Self {
        DimensionlessParams { alpha, beta, gamma, kappa_z, m }
    }

    /// Named parameter sets: `set1`, `set2` and `set1b` (set1 with β = 0.01).
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "set1" => Some(Self::new(3.0, 0.8, 0.01, 0.9, 2)),
            "set2" => Some(Self::new(-2.0, -2.0, -0.02, 0.9, 2)),
            "set1b" => Some(Self::new(3.0, 0.01, 0.01, 0.9, 2)),
            _ => None,
        }
    }

    pub const PRESETS: [&'static str; 3] = ["set1", "set2", "set1b"];

    /// Checks finiteness, κ_z ∈ (0, 1] and a positive mass factor γ/α.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma), ("kappa_z", self.kappa_z)] {
            if !v.is_finite() {
                return Err(Error::config(name, "must be a finite number"));
            }
        }
        if !(self.kappa_z > 0.0 && self.kappa_z <= 1.0) {
            return Err(Error::config("kappa_z", "must lie in (0, 1]"));
        }
        if self.alpha == 0.0 {
            return Err(Error::config("alpha", "must be nonzero"));
        }
        if self.gamma / self.alpha <= 0.0 {
            return Err(Error::config(
                "gamma",
                "gamma/alpha must be positive (it equals sqrt(hbar omega / M c^2)); opposite signs of alpha and gamma are rejected",
            ));
        }
        if self.m < 0 {
            return Err(Error::config("m", "must be a non-negative integer"));
        }
        Ok(())
    }

    /// γ/α.
    pub fn ratio(&self) -> f64 {
        self.gamma / self.alpha
    }

    /// The kinetic prefactor γ/(2α).
    pub fn mu(&self) -> f64 {
        0.5 * self.gamma / self.alpha
    }

    /// ħω/Mc² implied by the parameters, `(γ/α)²`.
    pub fn implied_energy_ratio(&self) -> f64 {
        self.ratio().powi(2)
    }

    /// g·B_z/ω implied by the parameters, `βγ/α − 1`.
    pub fn implied_gbz_over_omega(&self) -> f64 {
        self.beta * self.ratio() - 1.0
    }

    /// `δ± = (α/γ)(2𝓔 ± β) − 1/4 ∓ κ_z`.
    pub fn deltas(&self, energy: f64) -> (f64, f64) {
        let r = self.alpha / self.gamma;
        (
            r * (2.0 * energy + self.beta) - 0.25 - self.kappa_z,
            r * (2.0 * energy - self.beta) - 0.25 + self.kappa_z,
        )
    }

    /// Rescaling factor `|α²/γ|^{1/3}` between ξ and the Airy variable 𝔷.
    pub fn airy_scale(&self) -> f64 {
        (self.alpha * self.alpha / self.gamma).abs().cbrt()
    }
}

/// α, β, γ, κ_z from a physical configuration, exactly as defined.
pub fn derive_params(config: &FieldConfig, m: i32) -> Result<DimensionlessParams> {
    config.validate()?;
    let root = (config.mass * C_LIGHT * C_LIGHT / (HBAR * config.omega)).sqrt();
    let gamma = config.g * config.b_perp / config.omega;
    let p = DimensionlessParams {
        alpha: gamma * root,
        beta: (1.0 + config.g * config.b_z / config.omega) * root,
        gamma,
        kappa_z: config.k_z / config.k(),
        m,
    };
    if [p.alpha, p.beta, p.gamma, p.kappa_z].iter().any(|v| !v.is_finite()) {
        return Err(Error::config("physical", "derived dimensionless parameters are not finite"));
    }
    Ok(p)
}

/// Full Bessel-beam field at cylindrical point `(rho, phi)` with `rho` in
/// units of 1/k, Cartesian components in tesla.
pub fn field_full(rho: f64, phi: f64, zeta_z: f64, config: &FieldConfig) -> Result<[f64; 3]> {
    if !(rho >= 0.0) {
        return Err(Error::Domain { what: "field_full", reason: format!("rho must be >= 0, got {rho}") });
    }
    let (ap, am) = config.a_coeffs();
    let x = config.k_perp / config.k() * rho;
    let (j1, j2, j3) = (bessel_j(1, x)?, bessel_j(2, x)?, bessel_j(3, x)?);
    let b = config.b_perp;
    Ok([
        -2.0 * b * (ap * (zeta_z - phi).sin() * j1 + am * (zeta_z - 3.0 * phi).sin() * j3),
        2.0 * b * (ap * (zeta_z - phi).cos() * j1 - am * (zeta_z - 3.0 * phi).cos() * j3),
        -4.0 * b * (zeta_z - 2.0 * phi).cos() * j2 + config.b_z,
    ])
}

/// Paraxial field at Cartesian `(x, y)` in units of 1/k.
pub fn field_paraxial(x: f64, y: f64, zeta: f64, config: &FieldConfig) -> [f64; 3] {
    let (s, c) = zeta.sin_cos();
    let b = config.b_perp;
    [b * (y * c - x * s), b * (x * c + y * s), config.b_z]
}

/// Guiding-regime field: the `a₋` and `J₂` terms dropped, `a₊ = 1`.
pub fn field_guiding(rho: f64, phi: f64, zeta_z: f64, config: &FieldConfig) -> Result<[f64; 3]> {
    if !(rho >= 0.0) {
        return Err(Error::Domain { what: "field_guiding", reason: format!("rho must be >= 0, got {rho}") });
    }
    let j1 = bessel_j(1, config.k_perp / config.k() * rho)?;
    let b = config.b_perp;
    Ok([-2.0 * b * (zeta_z - phi).sin() * j1, 2.0 * b * (zeta_z - phi).cos() * j1, config.b_z])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport {
    /// `|2α/(β − α/γ)|`, the bound on the wave's axial field relative to B_z.
    pub axial_measure: f64,
    /// `1 − κ_z`, the paraxial smallness.
    pub paraxial_measure: f64,
    pub flagged: bool,
}

pub const REGIME_THRESHOLD: f64 = 0.1;

pub fn regime_check(params: &DimensionlessParams) -> RegimeReport {
    let axial_measure = if params.gamma == 0.0 {
        0.0
    } else {
        (2.0 * params.alpha / (params.beta - params.alpha / params.gamma)).abs()
    };
    let paraxial_measure = 1.0 - params.kappa_z;
    RegimeReport {
        axial_measure,
        paraxial_measure,
        flagged: axial_measure > REGIME_THRESHOLD || paraxial_measure > REGIME_THRESHOLD,
    }
}
