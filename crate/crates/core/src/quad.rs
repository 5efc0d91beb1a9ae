//! Adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Deterministic: intervals are always bisected in the same order for the
//! same integrand, so results are bit-reproducible.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
    /// Number of equal panels the range is split into before adapting.
    pub initial_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-14, rel_tol: 1e-11, max_intervals: 20_000, initial_panels: 1 }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    let value = rk * h;
    let err = ((rk - rg) * h).abs();
    Segment { a, b, value, err }
}

/// Integrates `f` over `[a, b]`.
///
/// Fails with [`Error::NoConvergence`] (carrying the residual estimate) if
/// the interval budget runs out before the tolerance is met.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult { value: 0.0, abs_error: 0.0, intervals: 0 });
    }
    let panels = opts.initial_panels.max(1);
    let width = (b - a) / panels as f64;
    let mut segs: Vec<Segment> = (0..panels)
        .map(|i| {
            let lo = a + i as f64 * width;
            let hi = if i + 1 == panels { b } else { lo + width };
            kronrod(&mut f, lo, hi)
        })
        .collect();
    loop {
        let total: f64 = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.err).sum();
        let tol = opts.abs_tol.max(opts.rel_tol * total.abs());
        if !total.is_finite() {
            return Err(Error::NoConvergence {
                what: "adaptive quadrature",
                detail: "integrand produced a non-finite value".into(),
            });
        }
        if err <= tol {
            return Ok(QuadResult { value: total, abs_error: err, intervals: segs.len() });
        }
        if segs.len() >= opts.max_intervals {
            return Err(Error::NoConvergence {
                what: "adaptive quadrature",
                detail: format!("residual estimate {err:e} above tolerance {tol:e} after {} intervals", segs.len()),
            });
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, s)| if s.err > acc.1 { (i, s.err) } else { acc });
        let s = segs[worst];
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            // cannot split further; accept what we have
            return Ok(QuadResult { value: total, abs_error: err, intervals: segs.len() });
        }
        segs[worst] = kronrod(&mut f, s.a, mid);
        segs.push(kronrod(&mut f, mid, s.b));
    }
}

/// Non-adaptive composite 15-point Kronrod rule on `panels` equal panels.
pub fn fixed_panels<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels.max(1);
    let w = (b - a) / n as f64;
    (0..n).map(|i| kronrod(&mut f, a + i as f64 * w, a + (i + 1) as f64 * w).value).sum()
}

/// Composite trapezoid rule on a uniform grid.
pub fn trapezoid(values: &[f64], step: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => step * (values[1..n - 1].iter().sum::<f64>() + 0.5 * (values[0] + values[n - 1])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_exact_for_polynomials() {
        // A single 15-point Kronrod panel integrates degree <= 22 exactly.
        for deg in 0..=22 {
            let seg = kronrod(&mut |x: f64| x.powi(deg), 0.0, 1.0);
            let want = 1.0 / (deg as f64 + 1.0);
            assert!((seg.value - want).abs() < 1e-15, "degree {deg}");
        }
        // The embedded 7-point Gauss rule is exact to degree 13.
        let seg = kronrod(&mut |x: f64| x.powi(13) + x.powi(12), -1.0, 1.0);
        assert!(seg.err < 1e-15);
    }

    #[test]
    fn smooth_and_peaked() {
        let r = integrate(|x| x.sin(), 0.0, std::f64::consts::PI, QuadOptions::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-13);
        let r = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, QuadOptions::default()).unwrap();
        let want = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((r.value - want).abs() < 1e-9 * want);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let opts = QuadOptions { max_intervals: 3, ..Default::default() };
        let e = integrate(|x| (1.0 / (x + 1e-9)).sin(), 0.0, 1.0, opts).unwrap_err();
        assert!(matches!(e, Error::NoConvergence { .. }));
    }

    #[test]
    fn trapezoid_linear() {
        let v: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        assert!((trapezoid(&v, 0.1) - 0.5).abs() < 1e-15);
    }
}
