//! Bound states of the binding channel, the small-ξ Bessel modes, the
//! rescaled Airy-channel states and spinor reassembly.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::channels::{ChannelDecomposition, Variant};
use crate::error::{Error, Result};
use crate::fields::DimensionlessParams;
use crate::quad::trapezoid;
use crate::specfun::{airy_ai, airy_ai_zero, airy_eval, bessel_j, bessel_j_prime};
use crate::tridiag::SymTridiag;

/// A potential curve on a uniform radial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialCurve {
    pub xi: Vec<f64>,
    pub v: Vec<f64>,
}

impl RadialCurve {
    pub fn new(xi: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if xi.len() < 3 || xi.len() != v.len() {
            return Err(Error::Domain { what: "radial curve", reason: "need at least 3 points and matching lengths".into() });
        }
        Ok(RadialCurve { xi, v })
    }

    pub fn step(&self) -> f64 {
        (self.xi[self.xi.len() - 1] - self.xi[0]) / (self.xi.len() - 1) as f64
    }

    fn is_uniform(&self) -> bool {
        let h = self.step();
        self.xi.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-6 * h)
    }
}

/// Index of the local maximum of `v` nearest to `target` (interior points only).
pub fn local_max_near(xi: &[f64], v: &[f64], target: f64) -> Option<usize> {
    (1..v.len() - 1)
        .filter(|&i| v[i] >= v[i - 1] && v[i] > v[i + 1])
        .min_by(|&a, &b| (xi[a] - target).abs().total_cmp(&(xi[b] - target).abs()))
}

/// `j′₁,₁`, the first maximum of `J₁`.
pub const J1_PEAK: f64 = 1.841_183_781_340_659_3;

/// The binding-channel curve used by the bound-state solver.
///
/// For the full variant `Ṽ₊` falls again beyond the first hump, and the
/// pockets there lie below the central well, so the lowest eigenstates of
/// the raw curve live outside. The curve is therefore held at the barrier
/// top from the hump (the local maximum nearest the `J₁` peak) outwards.
/// The paraxial curve grows without bound and is returned as is.
pub fn binding_curve(dec: &ChannelDecomposition) -> Result<RadialCurve> {
    if !dec.corrected {
        return Err(Error::Domain { what: "binding curve", reason: "corrected potentials have not been computed".into() });
    }
    let mut v = dec.v_tilde_plus.clone();
    if dec.variant == Variant::Full {
        let top = local_max_near(&dec.grid, &v, J1_PEAK / dec.params.kappa_z)
            .ok_or_else(|| Error::NoBarrier("binding curve has no interior maximum".into()))?;
        let vmax = v[top];
        v[top..].iter_mut().for_each(|x| *x = vmax);
    }
    RadialCurve::new(dec.grid.clone(), v)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundState {
    pub energy: f64,
    #[serde(skip)]
    pub grid: Vec<f64>,
    #[serde(skip)]
    pub u: Vec<f64>,
    pub nodes: usize,
    pub grid_step: f64,
}

impl BoundState {
    pub fn norm(&self) -> f64 {
        let sq: Vec<f64> = self.u.iter().map(|x| x * x).collect();
        trapezoid(&sq, self.grid_step)
    }
}

fn count_nodes(u: &[f64]) -> usize {
    let peak = u.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let mut last = 0.0;
    let mut nodes = 0;
    for &x in u {
        if x.abs() < 1e-8 * peak {
            continue;
        }
        if last != 0.0 && x.signum() != last {
            nodes += 1;
        }
        last = x.signum();
    }
    nodes
}

/// The `count` lowest bound states of `−(γ/2α)u″ + V u = E u` with
/// Dirichlet ends at the first and last grid points.
///
/// Only states below the top of the curve beyond its minimum are kept; an
/// empty vector means the curve binds nothing.
pub fn solve_bound_states(curve: &RadialCurve, params: &DimensionlessParams, count: usize) -> Result<Vec<BoundState>> {
    let mu = params.mu();
    if !(mu > 0.0) {
        return Err(Error::config("gamma", "gamma/alpha must be positive for a bound-state problem"));
    }
    if !curve.is_uniform() {
        return Err(Error::Domain { what: "bound-state solver", reason: "grid must be uniform".into() });
    }
    let h = curve.step();
    let n = curve.xi.len();
    let inner = &curve.v[1..n - 1];
    let k = mu / (h * h);
    let t = SymTridiag::new(inner.iter().map(|v| 2.0 * k + v).collect(), vec![-k; inner.len() - 1])?;
    let imin = (0..n).min_by(|&a, &b| curve.v[a].total_cmp(&curve.v[b])).unwrap_or(0);
    let top = curve.v[imin..].iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let mut states = Vec::new();
    for (e, vec) in t.lowest(count)? {
        if e >= top {
            break;
        }
        let mut u = Vec::with_capacity(n);
        u.push(0.0);
        u.extend(vec);
        u.push(0.0);
        let sq: Vec<f64> = u.iter().map(|x| x * x).collect();
        let norm = trapezoid(&sq, h).sqrt();
        // sign: positive first lobe
        let first = u.iter().copied().find(|x| x.abs() > 1e-6).unwrap_or(1.0);
        let s = first.signum() / norm;
        u.iter_mut().for_each(|x| *x *= s);
        let nodes = count_nodes(&u);
        states.push(BoundState { energy: e, grid: curve.xi.clone(), u, nodes, grid_step: h });
    }
    if states.is_empty() {
        log::warn!("no bound state below the barrier top {top}");
    }
    Ok(states)
}

/// Regular small-ξ solutions `f₊ = J_{m+1}(√δ₊ ξ)`, `f₋ = J_m(√δ₋ ξ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmallXiModes {
    pub delta_plus: f64,
    pub delta_minus: f64,
    pub m: i32,
}

impl SmallXiModes {
    pub fn f_plus(&self, xi: f64) -> Result<f64> {
        bessel_j(self.m + 1, self.delta_plus.sqrt() * xi)
    }

    pub fn f_plus_prime(&self, xi: f64) -> Result<f64> {
        let k = self.delta_plus.sqrt();
        Ok(k * bessel_j_prime(self.m + 1, k * xi)?)
    }

    pub fn f_minus(&self, xi: f64) -> Result<f64> {
        bessel_j(self.m, self.delta_minus.sqrt() * xi)
    }

    pub fn f_minus_prime(&self, xi: f64) -> Result<f64> {
        let k = self.delta_minus.sqrt();
        Ok(k * bessel_j_prime(self.m, k * xi)?)
    }
}

pub fn small_xi_modes(params: &DimensionlessParams, energy: f64) -> Result<SmallXiModes> {
    let (dp, dm) = params.deltas(energy);
    if !(dp > 0.0 && dm > 0.0) {
        return Err(Error::Domain {
            what: "small-xi modes",
            reason: format!("delta+ = {dp}, delta- = {dm}; both must be positive (scenario outside the considered regime)"),
        });
    }
    Ok(SmallXiModes { delta_plus: dp, delta_minus: dm, m: params.m })
}

/// `u(𝔷) = C·Ai(𝔷 + 𝔷₀)` in the rescaled variable `𝔷 = |α²/γ|^{1/3} ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AiryBoundState {
    pub energy: f64,
    pub z0: f64,
    pub c: f64,
    /// `|α²/γ|^{1/3}`.
    pub scale: f64,
}

impl AiryBoundState {
    pub fn u(&self, z: f64) -> Result<f64> {
        Ok(self.c * airy_ai(z + self.z0)?.0)
    }

    pub fn u_prime(&self, z: f64) -> Result<f64> {
        Ok(self.c * airy_ai(z + self.z0)?.1)
    }

    /// Samples on a uniform ξ grid, renormalised in ξ.
    pub fn to_grid(&self, xi_max: f64, step: f64) -> Result<BoundState> {
        let n = (xi_max / step).round() as usize + 1;
        let grid: Vec<f64> = (0..n).map(|i| i as f64 * step).collect();
        let mut u = grid.iter().map(|&x| self.u(self.scale * x)).collect::<Result<Vec<_>>>()?;
        let sq: Vec<f64> = u.iter().map(|x| x * x).collect();
        let norm = trapezoid(&sq, step).sqrt();
        u.iter_mut().for_each(|x| *x /= norm);
        Ok(BoundState { energy: self.energy, nodes: count_nodes(&u), grid, u, grid_step: step })
    }
}

pub fn airy_bound_state(params: &DimensionlessParams) -> Result<AiryBoundState> {
    let ga = params.gamma * params.alpha;
    if !(ga > 0.0) {
        return Err(Error::config("gamma", "gamma*alpha must be positive for the Airy channel"));
    }
    let z0 = airy_ai_zero(1)?;
    let aip = airy_eval(z0)?.ai_prime;
    Ok(AiryBoundState { energy: -z0 * ga.cbrt() / 2.0, z0, c: 1.0 / aip, scale: params.airy_scale() })
}

/// Default beam edge in rescaled units, `4π|α²/γ|^{1/3}`.
pub fn default_z_w(params: &DimensionlessParams) -> f64 {
    4.0 * PI * params.airy_scale()
}

/// Piecewise Airy-plus-trigonometric continuum state of the ejecting channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuumState {
    pub energy_label: f64,
    pub z_w: f64,
    pub d_const: f64,
    pub g_coeffs: (f64, f64),
    pub q: f64,
    /// The energy entering the printed normalisation of `D`.
    pub d_energy: f64,
    /// `G(z_w)` and `G′(z_w)`, cached for the outer region.
    pub g_edge: (f64, f64),
}

impl ContinuumState {
    /// `G_a(𝔷)` and `dG_a/d𝔷`.
    pub fn g(&self, z: f64) -> Result<(f64, f64)> {
        let q = airy_eval(self.energy_label - z)?;
        let (d1, d2) = self.g_coeffs;
        Ok((d1 * q.ai + d2 * q.bi, -(d1 * q.ai_prime + d2 * q.bi_prime)))
    }

    /// `v(𝔷)` and `v′(𝔷)`.
    pub fn v(&self, z: f64) -> Result<(f64, f64)> {
        if z <= self.z_w {
            return self.g(z);
        }
        let (g, gp) = self.g_edge;
        let (s, c) = (self.q * (z - self.z_w)).sin_cos();
        Ok((gp / self.q * s + g * c, gp * c - g * self.q * s))
    }

    /// `π√(−a)(G(z_w)² + G′(z_w)²/q²)`, the coefficient of `δ(a − b)` in `∫v_a v_b d𝔷`.
    pub fn delta_coefficient(&self) -> f64 {
        let (g, gp) = self.g_edge;
        PI * self.q * (g * g + gp * gp / (self.q * self.q))
    }
}

/// Continuum state with the printed normalisation constant evaluated at the
/// self-consistent energy `−a(γα)^{1/3}/2`.
pub fn continuum_state(a: f64, z_w: f64, params: &DimensionlessParams) -> Result<ContinuumState> {
    let e = -a * (params.gamma * params.alpha).cbrt() / 2.0;
    continuum_state_with_energy(a, z_w, params, e)
}

/// As [`continuum_state`], with an explicit energy in the normalisation of `D`.
pub fn continuum_state_with_energy(a: f64, z_w: f64, params: &DimensionlessParams, energy: f64) -> Result<ContinuumState> {
    if !(z_w > 0.0) {
        return Err(Error::Domain { what: "continuum state", reason: format!("z_w must be > 0, got {z_w}") });
    }
    if !(a < 0.0) {
        return Err(Error::Domain { what: "continuum state", reason: format!("energy label a must be < 0, got {a}") });
    }
    if !(energy > 0.0) {
        return Err(Error::Domain { what: "continuum state", reason: format!("energy must be > 0, got {energy}") });
    }
    let ga = params.gamma * params.alpha;
    if !(ga > 0.0) {
        return Err(Error::config("gamma", "gamma*alpha must be positive for the Airy channel"));
    }
    let at_a = airy_eval(a)?;
    let edge = airy_eval(a - z_w)?;
    let d = (2.0 / PI).sqrt() * (params.alpha / params.gamma).powf(0.25) / at_a.bi.abs()
        / (edge.ai * edge.ai + ga.cbrt() / (2.0 * energy) * edge.ai_prime * edge.ai_prime).sqrt();
    let mut st = ContinuumState {
        energy_label: a,
        z_w,
        d_const: d,
        g_coeffs: (d * at_a.bi, -d * at_a.ai),
        q: (-a).sqrt(),
        d_energy: energy,
        g_edge: (0.0, 0.0),
    };
    st.g_edge = st.g(z_w)?;
    Ok(st)
}

/// The coefficient `∫v_a v_b dξ = K δ(𝓔′ − 𝓔)` would need for a true energy
/// normalisation, expressed as the matching `δ(a − b)` coefficient in 𝔷:
/// `2|α²/γ|^{1/3}/(γα)^{1/3}`.
pub fn energy_measure_coefficient(params: &DimensionlessParams) -> f64 {
    2.0 * params.airy_scale() / (params.gamma * params.alpha).cbrt()
}

/// Solution of the coupled radial equations for `f±(ξ)` at a fixed energy,
/// started from the regular small-ξ modes at `xi0`. Each evaluation runs a
/// fixed number of uniform RK4 steps from `xi0`, so `f±` is a smooth
/// function of `ξ` and may be differenced.
#[derive(Debug, Clone, Copy)]
pub struct CoupledRadial {
    pub params: DimensionlessParams,
    pub energy: f64,
    pub xi0: f64,
    pub steps: usize,
    start: [f64; 4],
}

impl CoupledRadial {
    pub fn new(params: &DimensionlessParams, energy: f64) -> Result<Self> {
        let modes = small_xi_modes(params, energy)?;
        let xi0 = 1e-3;
        Ok(CoupledRadial {
            params: *params,
            energy,
            xi0,
            steps: 4000,
            start: [modes.f_plus(xi0)?, modes.f_plus_prime(xi0)?, 0.0, 0.0],
        })
    }

    fn rhs(&self, xi: f64, y: &[f64; 4]) -> [f64; 4] {
        let p = &self.params;
        let inv_mu = 1.0 / p.mu();
        let m = p.m as f64;
        let x2 = xi * xi;
        let (fp, dfp, fm, dfm) = (y[0], y[1], y[2], y[3]);
        let ddp = -dfp / xi + ((m + 1.0).powi(2) / x2 + p.kappa_z + 0.25) * fp
            - inv_mu * ((self.energy + 0.5 * p.beta) * fp + 0.5 * p.alpha * xi * fm);
        let ddm = -dfm / xi + (m * m / x2 - p.kappa_z + 0.25) * fm
            - inv_mu * ((self.energy - 0.5 * p.beta) * fm + 0.5 * p.alpha * xi * fp);
        [dfp, ddp, dfm, ddm]
    }

    /// `(f₊, f₋)` at `xi > xi0`. Steps are uniform in `ln ξ`, which keeps
    /// the centrifugal region near `xi0` resolved.
    pub fn eval(&self, xi: f64) -> Result<(f64, f64)> {
        if !(xi > self.xi0) {
            return Err(Error::Domain { what: "coupled radial solution", reason: format!("xi must exceed {}", self.xi0) });
        }
        let t0 = self.xi0.ln();
        let h = (xi.ln() - t0) / self.steps as f64;
        // d/dt = ξ d/dξ
        let f = |t: f64, y: &[f64; 4]| {
            let x = t.exp();
            let d = self.rhs(x, y);
            [x * d[0], x * d[1], x * d[2], x * d[3]]
        };
        let mut y = self.start;
        let add = |a: &[f64; 4], k: &[f64; 4], s: f64| [a[0] + s * k[0], a[1] + s * k[1], a[2] + s * k[2], a[3] + s * k[3]];
        for i in 0..self.steps {
            let t = t0 + i as f64 * h;
            let k1 = f(t, &y);
            let k2 = f(t + 0.5 * h, &add(&y, &k1, 0.5 * h));
            let k3 = f(t + 0.5 * h, &add(&y, &k2, 0.5 * h));
            let k4 = f(t + h, &add(&y, &k3, h));
            for j in 0..4 {
                y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            }
        }
        Ok((y[0], y[2]))
    }
}

/// Two-component wavefunction at one space-time point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorSample {
    pub position: [f64; 3],
    pub time: f64,
    pub upper: Complex64,
    pub lower: Complex64,
}

impl SpinorSample {
    /// `Ψ = e^{−iζσ_z/2} Ψ̃` with `ζ = (α/γ)τ − ξ_z`.
    pub fn lab_frame(&self, params: &DimensionlessParams) -> (Complex64, Complex64) {
        let zeta = params.alpha / params.gamma * self.time - self.position[2];
        let ph = Complex64::from_polar(1.0, -0.5 * zeta);
        (ph * self.upper, ph.conj() * self.lower)
    }
}

/// `Ψ̃ = e^{−i𝓔τ} e^{−iγκ_z²τ/2α} e^{iκ_zξ_z} (e^{i(m+1)φ} f₊, i e^{imφ} f₋)`.
pub fn assemble_spinor(f_plus: f64, f_minus: f64, params: &DimensionlessParams, energy: f64, point: [f64; 3], time: f64) -> SpinorSample {
    let phi = point[1].atan2(point[0]);
    let k = params.kappa_z;
    let global = -energy * time - params.mu() * k * k * time + k * point[2];
    let m = params.m as f64;
    SpinorSample {
        position: point,
        time,
        upper: Complex64::from_polar(f_plus, global + (m + 1.0) * phi),
        lower: Complex64::i() * Complex64::from_polar(f_minus, global + m * phi),
    }
}

/// Evaluates `Ψ̃` from a coupled radial solution at a Cartesian point.
pub fn spinor_at(radial: &CoupledRadial, point: [f64; 3], time: f64) -> Result<SpinorSample> {
    let (fp, fm) = radial.eval(point[0].hypot(point[1]))?;
    Ok(assemble_spinor(fp, fm, &radial.params, radial.energy, point, time))
}

/// Maximum over a patch of `|i∂_τΨ̃ − 𝓗Ψ̃|`, relative to the largest `|𝓗Ψ̃|`,
/// with fourth-order differences of step `d` in x, y, ξ_z and τ.
pub fn schrodinger_residual(radial: &CoupledRadial, points: &[[f64; 3]], d: f64) -> Result<f64> {
    let p = radial.params;
    let mu = p.mu();
    let d2 = |f: [Complex64; 5]| (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * d * d);
    let d1 = |f: [Complex64; 5]| (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * d);
    let i = Complex64::i();
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &pt in points {
        let sample = |dx: f64, dy: f64, dz: f64, dt: f64| spinor_at(radial, [pt[0] + dx, pt[1] + dy, pt[2] + dz], dt);
        let mut sx = [[Complex64::default(); 5]; 2];
        let mut sy = sx;
        let mut sz = sx;
        let mut st = sx;
        for (k, j) in (-2i32..=2).enumerate() {
            let o = j as f64 * d;
            for (arr, s) in [
                (&mut sx, sample(o, 0.0, 0.0, 0.0)?),
                (&mut sy, sample(0.0, o, 0.0, 0.0)?),
                (&mut sz, sample(0.0, 0.0, o, 0.0)?),
                (&mut st, sample(0.0, 0.0, 0.0, o)?),
            ] {
                arr[0][k] = s.upper;
                arr[1][k] = s.lower;
            }
        }
        let c = [sx[0][2], sx[1][2]];
        let (xx, yy) = (pt[0], pt[1]);
        for comp in 0..2 {
            let sz_sign = if comp == 0 { 1.0 } else { -1.0 };
            let lap = d2(sx[comp]) + d2(sy[comp]);
            // (∂_z + iσ_z/2)² = ∂_z² + iσ_z ∂_z − 1/4
            let axial = d2(sz[comp]) + i * sz_sign * d1(sz[comp]) - 0.25 * c[comp];
            let other = c[1 - comp];
            // (ξ_xσ_y + ξ_yσ_x): upper row (−iξ_x + ξ_y), lower row (iξ_x + ξ_y)
            let coupling = if comp == 0 { (-i * xx + yy) * other } else { (i * xx + yy) * other };
            let h = -mu * lap - mu * axial - 0.5 * p.beta * sz_sign * c[comp] - 0.5 * p.alpha * coupling;
            let lhs = i * d1(st[comp]);
            worst = worst.max((lhs - h).norm());
            scale = scale.max(h.norm());
        }
    }
    Ok(worst / scale)
}

/// `H₂ = −i∂_φ − σ_z/2` applied by a fourth-order difference in φ at a
/// point, returning the two components of `H₂Ψ̃`.
pub fn apply_h2(radial: &CoupledRadial, rho: f64, phi: f64, z: f64, time: f64, d: f64) -> Result<(SpinorSample, [Complex64; 2])> {
    let at = |ang: f64| spinor_at(radial, [rho * ang.cos(), rho * ang.sin(), z], time);
    let s: Vec<SpinorSample> = (-2i32..=2).map(|j| at(phi + j as f64 * d)).collect::<Result<_>>()?;
    let der = |f: [Complex64; 5]| (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * d);
    let up = der([s[0].upper, s[1].upper, s[2].upper, s[3].upper, s[4].upper]);
    let lo = der([s[0].lower, s[1].lower, s[2].lower, s[3].lower, s[4].lower]);
    let i = Complex64::i();
    Ok((s[2], [-i * up - 0.5 * s[2].upper, -i * lo + 0.5 * s[2].lower]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, QuadOptions};

    fn set1() -> DimensionlessParams {
        DimensionlessParams::preset("set1").unwrap()
    }

    #[test]
    fn harmonic_levels_equally_spaced() {
        let p = set1();
        let mu = p.mu();
        let kk = 0.8;
        let step = 1e-3;
        let xi: Vec<f64> = (0..10_000).map(|i| 1e-3 + i as f64 * step).collect();
        let v = xi.iter().map(|x| 0.5 * kk * (x - 5.0) * (x - 5.0)).collect();
        let curve = RadialCurve::new(xi, v).unwrap();
        let s = solve_bound_states(&curve, &p, 4).unwrap();
        let w = (2.0 * mu * kk).sqrt();
        for (n, st) in s.iter().enumerate() {
            assert!((st.energy - w * (n as f64 + 0.5)).abs() < 1e-6, "level {n}: {}", st.energy);
            assert_eq!(st.nodes, n);
            assert!((st.norm() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn no_binding_gives_empty() {
        let xi: Vec<f64> = (0..1000).map(|i| 0.01 + i as f64 * 0.01).collect();
        let v = xi.iter().map(|x| -x).collect();
        let s = solve_bound_states(&RadialCurve::new(xi, v).unwrap(), &set1(), 2).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn small_xi_delta_example() {
        let m = small_xi_modes(&set1(), 0.67).unwrap();
        assert!((m.delta_plus - 640.85).abs() < 1e-9);
        assert_eq!(m.f_plus(0.0).unwrap(), 0.0);
        assert!(small_xi_modes(&set1(), -5.0).is_err());
    }

    #[test]
    fn small_xi_simplified_ode_residual() {
        let md = small_xi_modes(&set1(), 0.67).unwrap();
        let m = set1().m as f64;
        let f = |t: f64| md.f_plus(t).unwrap();
        let mut peak: f64 = 0.0;
        let mut worst: f64 = 0.0;
        for i in 1..=500 {
            let x = i as f64 * 1e-4;
            let h = x / 200.0;
            let v = [f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h)];
            let d2 = (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h);
            let d1 = (v[0] - 8.0 * v[1] + 8.0 * v[3] - v[4]) / (12.0 * h);
            let r = d2 + d1 / x + (md.delta_plus - (m + 1.0).powi(2) / (x * x)) * v[2];
            peak = peak.max(v[2].abs());
            worst = worst.max(r.abs());
        }
        assert!(worst < 1e-6 * peak, "{worst:e} vs {peak:e}");
    }

    #[test]
    fn airy_bound_energy_and_norm() {
        let a = airy_bound_state(&set1()).unwrap();
        assert!((a.energy - 0.3632).abs() < 1e-4);
        assert!(a.u(0.0).unwrap().abs() < 1e-14);
        let r = integrate(|z| a.u(z).unwrap().powi(2), 0.0, 40.0, QuadOptions { initial_panels: 8, ..Default::default() }).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8);
        let s2 = airy_bound_state(&DimensionlessParams::preset("set2").unwrap()).unwrap();
        assert!((s2.energy - 0.3998).abs() < 1e-4);
    }

    #[test]
    fn continuum_construction() {
        let p = set1();
        let z0 = airy_ai_zero(1).unwrap();
        let zw = default_z_w(&p);
        assert!((zw - 121.33).abs() < 0.01);
        let c = continuum_state(z0, zw, &p).unwrap();
        assert_eq!(c.v(0.0).unwrap().0, c.g(0.0).unwrap().0);
        assert!(c.v(0.0).unwrap().0.abs() < 1e-10 * c.d_const.abs());
        let (gl, gpl) = c.v(zw).unwrap();
        let (gr, gpr) = c.v(zw * (1.0 + 1e-15) + 1e-13).unwrap();
        assert!((gl - gr).abs() < 1e-10 && (gpl - gpr).abs() < 1e-10);
        assert!(continuum_state(z0, 0.0, &p).is_err());
    }

    #[test]
    fn printed_d_reduces_analytically() {
        // with Ai(a) = 0 and a self-consistent energy, the coefficient is 2√(−a)√(α/γ)
        let p = set1();
        let z0 = airy_ai_zero(1).unwrap();
        let c = continuum_state(z0, default_z_w(&p), &p).unwrap();
        let want = 2.0 * (-z0).sqrt() * (p.alpha / p.gamma).sqrt();
        assert!((c.delta_coefficient() / want - 1.0).abs() < 1e-8);
    }

    #[test]
    fn spinor_periodic_in_phi() {
        let p = set1();
        let a = assemble_spinor(0.3, -0.2, &p, 0.7, [0.2, 0.1, 0.05], 0.4);
        let (r, ph) = (0.2f64.hypot(0.1), 0.1f64.atan2(0.2) + 2.0 * PI);
        let b = assemble_spinor(0.3, -0.2, &p, 0.7, [r * ph.cos(), r * ph.sin(), 0.05], 0.4);
        assert!((a.upper - b.upper).norm() < 1e-14 && (a.lower - b.lower).norm() < 1e-14);
    }
}
