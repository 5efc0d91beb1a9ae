//! Airy functions of the first and second kind.
//!
//! Three regimes are used:
//!
//! * `|x| <= 2`: Maclaurin series about the origin, seeded with the exact
//!   values `Ai(0) = 3^(-2/3)/Γ(2/3)` etc.
//! * `2 < |x| < 9`: power series re-expanded about the nearest node of a
//!   half-unit lattice. The node values are produced once by chaining the
//!   same series along the lattice, in the direction in which each solution
//!   is dominant (Bi outwards from the origin, Ai inwards from `x = 9`).
//! * `|x| >= 9`: the standard large-argument asymptotic expansions, which are
//!   accurate to roughly `exp(-2ζ) < 1e-15` there.
//!
//! A pure Maclaurin/asymptotic split cannot reach ten significant digits in
//! the intermediate region: the asymptotic series stalls near `1e-7` at
//! `|x| = 5` while the Maclaurin series loses digits to cancellation.

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest `|x|` accepted by [`airy_eval`] and [`airy_ai`].
pub const AIRY_MAX_ARG: f64 = 200.0;

/// Beyond this argument `Bi` and `Bi'` overflow an `f64`.
pub const BI_OVERFLOW_ARG: f64 = 104.0;

const AI0: f64 = 0.355_028_053_887_817_239_3;
const AIP0: f64 = -0.258_819_403_792_806_798_4;
const BI0: f64 = 0.614_926_627_446_000_735_2;
const BIP0: f64 = 0.448_288_357_353_826_357_9;

const MACLAURIN_LIMIT: f64 = 2.0;
const ASYMPTOTIC_LIMIT: f64 = 9.0;
const NODE_SPACING: f64 = 0.5;

/// `Ai`, `Bi` and their first derivatives at a single argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryQuad {
    pub ai: f64,
    pub bi: f64,
    pub ai_prime: f64,
    pub bi_prime: f64,
}

impl AiryQuad {
    /// `Ai·Bi' − Ai'·Bi`, identically `1/π`.
    pub fn wronskian(&self) -> f64 {
        self.ai * self.bi_prime - self.ai_prime * self.bi
    }
}

/// Evaluates `Ai`, `Bi`, `Ai'`, `Bi'` at `x`.
///
/// Fails with [`Error::OutOfRange`] for non-finite `x`, for `|x| > 200`, and
/// for `x >= 104` where `Bi` would overflow.
pub fn airy_eval(x: f64) -> Result<AiryQuad> {
    check_arg(x)?;
    if x >= BI_OVERFLOW_ARG {
        return Err(Error::OutOfRange {
            what: "Airy Bi",
            value: x,
            reason: "Bi overflows f64 for x >= 104",
        });
    }
    Ok(eval_unchecked(x))
}

/// `(Ai(x), Ai'(x))` without touching `Bi`, valid on the whole of `|x| <= 200`.
pub fn airy_ai(x: f64) -> Result<(f64, f64)> {
    check_arg(x)?;
    if x >= ASYMPTOTIC_LIMIT {
        let (ai, aip) = asymptotic_ai_positive(x);
        return Ok((ai, aip));
    }
    let q = eval_unchecked(x);
    Ok((q.ai, q.ai_prime))
}

fn check_arg(x: f64) -> Result<()> {
    if !x.is_finite() || x.abs() > AIRY_MAX_ARG {
        return Err(Error::OutOfRange {
            what: "Airy argument",
            value: x,
            reason: "expected a finite value with |x| <= 200",
        });
    }
    Ok(())
}

fn eval_unchecked(x: f64) -> AiryQuad {
    if x.abs() <= MACLAURIN_LIMIT {
        let (ai, ai_prime) = taylor_step(0.0, AI0, AIP0, x);
        let (bi, bi_prime) = taylor_step(0.0, BI0, BIP0, x);
        return AiryQuad { ai, bi, ai_prime, bi_prime };
    }
    if x >= ASYMPTOTIC_LIMIT {
        return asymptotic_positive(x);
    }
    if x <= -ASYMPTOTIC_LIMIT {
        return asymptotic_negative(-x);
    }
    let table = node_table();
    let idx = ((x + ASYMPTOTIC_LIMIT) / NODE_SPACING).round() as usize;
    let node = &table[idx];
    let h = x - node.x;
    let (ai, ai_prime) = taylor_step(node.x, node.ai, node.ai_prime, h);
    let (bi, bi_prime) = taylor_step(node.x, node.bi, node.bi_prime, h);
    AiryQuad { ai, bi, ai_prime, bi_prime }
}

/// Advances a solution of `y'' = x·y` from `x0` to `x0 + h` by summing its
/// power series about `x0`.
fn taylor_step(x0: f64, y: f64, dy: f64, h: f64) -> (f64, f64) {
    if h == 0.0 {
        return (y, dy);
    }
    let scale = y.abs().max(dy.abs()).max(f64::MIN_POSITIVE);
    // a[n-1], a[n], a[n+1] rolling window
    let mut a_prev = 0.0;
    let mut a_n = y;
    let mut a_next = dy;
    let mut hp = 1.0; // h^n
    let mut val = 0.0;
    let mut der = 0.0;
    let mut small = 0;
    for n in 0..200usize {
        let term = a_n * hp;
        val += term;
        if n >= 1 {
            der += n as f64 * a_n * hp / h;
        }
        let a_new = (x0 * a_n + a_prev) / (((n + 2) * (n + 1)) as f64);
        a_prev = a_n;
        a_n = a_next;
        a_next = a_new;
        hp *= h;
        if term.abs() < 1e-18 * scale && n > 2 {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    (val, der)
}

#[derive(Debug, Clone, Copy)]
struct Node {
    x: f64,
    ai: f64,
    ai_prime: f64,
    bi: f64,
    bi_prime: f64,
}

fn node_table() -> &'static [Node] {
    static TABLE: OnceLock<Vec<Node>> = OnceLock::new();
    TABLE.get_or_init(build_node_table)
}

fn build_node_table() -> Vec<Node> {
    let n = (2.0 * ASYMPTOTIC_LIMIT / NODE_SPACING).round() as usize + 1;
    let zero = (ASYMPTOTIC_LIMIT / NODE_SPACING).round() as usize;
    let mut nodes = vec![
        Node { x: 0.0, ai: AI0, ai_prime: AIP0, bi: BI0, bi_prime: BIP0 };
        n
    ];
    for (i, node) in nodes.iter_mut().enumerate() {
        node.x = -ASYMPTOTIC_LIMIT + i as f64 * NODE_SPACING;
    }
    // Negative side: both solutions oscillate, march outwards from the origin.
    for i in (0..zero).rev() {
        let from = nodes[i + 1];
        let (ai, aip) = taylor_step(from.x, from.ai, from.ai_prime, -NODE_SPACING);
        let (bi, bip) = taylor_step(from.x, from.bi, from.bi_prime, -NODE_SPACING);
        nodes[i] = Node { x: from.x - NODE_SPACING, ai, ai_prime: aip, bi, bi_prime: bip };
    }
    // Positive side: Bi grows, march outwards.
    for i in zero + 1..n {
        let from = nodes[i - 1];
        let (bi, bip) = taylor_step(from.x, from.bi, from.bi_prime, NODE_SPACING);
        nodes[i].bi = bi;
        nodes[i].bi_prime = bip;
    }
    // Ai decays, so march inwards from the asymptotic value at the far end.
    let (ai, aip) = asymptotic_ai_positive(ASYMPTOTIC_LIMIT);
    nodes[n - 1].ai = ai;
    nodes[n - 1].ai_prime = aip;
    for i in (zero + 1..n - 1).rev() {
        let from = nodes[i + 1];
        let (ai, aip) = taylor_step(from.x, from.ai, from.ai_prime, -NODE_SPACING);
        nodes[i].ai = ai;
        nodes[i].ai_prime = aip;
    }
    nodes
}

/// Partial sums of the asymptotic series in `1/ζ`, truncated before the
/// terms start growing or once they drop below machine precision.
/// Returns `(Σ s^k u_k ζ^-k, Σ s^k v_k ζ^-k)` and the even/odd split used
/// on the negative axis.
struct AsymptoticSums {
    u_even: f64,
    u_odd: f64,
    v_even: f64,
    v_odd: f64,
}

fn asymptotic_sums(zeta: f64, alternate: bool) -> AsymptoticSums {
    // u_k, v_k coefficients; terms t_k = u_k / zeta^k
    let mut u = 1.0_f64;
    let mut sums = AsymptoticSums { u_even: 1.0, u_odd: 0.0, v_even: 1.0, v_odd: 0.0 };
    let mut zpow = 1.0_f64;
    let mut last = f64::INFINITY;
    for k in 1..60usize {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        zpow /= zeta;
        let tu = u * zpow;
        let tv = v * zpow;
        let mag = tu.abs().max(tv.abs());
        if mag > last {
            break;
        }
        last = mag;
        let sign = if alternate {
            // (-1)^(k/2) within each parity class
            if (k / 2) % 2 == 0 { 1.0 } else { -1.0 }
        } else if k % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        if alternate {
            if k % 2 == 0 {
                sums.u_even += sign * tu;
                sums.v_even += sign * tv;
            } else {
                sums.u_odd += sign * tu;
                sums.v_odd += sign * tv;
            }
        } else {
            // positive axis: even part collects (+), odd part (-) for Ai;
            // Bi uses the plain sum even + |odd|
            if k % 2 == 0 {
                sums.u_even += tu;
                sums.v_even += tv;
            } else {
                sums.u_odd += tu;
                sums.v_odd += tv;
            }
            let _ = sign;
        }
        if mag < 1e-17 {
            break;
        }
    }
    sums
}

fn asymptotic_ai_positive(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let s = asymptotic_sums(zeta, false);
    let x14 = x.sqrt().sqrt();
    let e = (-zeta).exp();
    let norm = 2.0 * PI.sqrt();
    let ai = e / (norm * x14) * (s.u_even - s.u_odd);
    let aip = -x14 * e / norm * (s.v_even - s.v_odd);
    (ai, aip)
}

fn asymptotic_positive(x: f64) -> AiryQuad {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let s = asymptotic_sums(zeta, false);
    let x14 = x.sqrt().sqrt();
    let rp = PI.sqrt();
    let (ai, ai_prime) = asymptotic_ai_positive(x);
    let e = zeta.exp();
    AiryQuad {
        ai,
        ai_prime,
        bi: e / (rp * x14) * (s.u_even + s.u_odd),
        bi_prime: x14 * e / rp * (s.v_even + s.v_odd),
    }
}

fn asymptotic_negative(t: f64) -> AiryQuad {
    let zeta = 2.0 / 3.0 * t * t.sqrt();
    let s = asymptotic_sums(zeta, true);
    let t14 = t.sqrt().sqrt();
    let rp = PI.sqrt();
    let (sn, cs) = (zeta - FRAC_PI_4).sin_cos();
    AiryQuad {
        ai: (cs * s.u_even + sn * s.u_odd) / (rp * t14),
        bi: (-sn * s.u_even + cs * s.u_odd) / (rp * t14),
        // d/dx = -d/dt
        ai_prime: t14 / rp * (sn * s.v_even - cs * s.v_odd),
        bi_prime: t14 / rp * (cs * s.v_even + sn * s.v_odd),
    }
}

/// The `n`-th zero of `Ai` on the negative axis (`n = 1` gives `-2.338107…`).
///
/// Seeded from the asymptotic zero formula and refined by bisection on a
/// sign-change bracket.
pub fn airy_ai_zero(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain { what: "Airy zero index", reason: "n must be >= 1".into() });
    }
    let t = 3.0 * PI * (4.0 * n as f64 - 1.0) / 8.0;
    let t2 = t.powi(-2);
    let guess = -t.powf(2.0 / 3.0) * (1.0 + t2 * (5.0 / 48.0 + t2 * (-5.0 / 36.0 + t2 * 77125.0 / 82944.0)));
    let ai = |x: f64| airy_ai(x).map(|v| v.0);
    let mut width = 0.05;
    let (mut lo, mut hi) = loop {
        let lo = guess - width;
        let hi = guess + width;
        if ai(lo)? * ai(hi)? <= 0.0 {
            break (lo, hi);
        }
        width *= 1.5;
        if width > 1.0 {
            return Err(Error::NoConvergence {
                what: "Airy zero bracket",
                detail: format!("no sign change around {guess} for n = {n}"),
            });
        }
    };
    let mut f_lo = ai(lo)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = ai(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from an arbitrary-precision evaluation (mpmath, 30 digits).
    const REFERENCE: &[(f64, f64, f64, f64, f64)] = &[
        // x, Ai, Ai', Bi, Bi'
        (-120.0, -0.10139729484759988, 1.5008353315366543, -0.13702616584712457, -1.1110372846213217),
        (-10.0, 0.04024123848644319, 0.99626504413279, -0.3146798296438386, 0.11941411339990923),
        (-5.0, 0.35076100902411433, 0.32719281855444315, -0.13836913490160058, 0.7784117730018992),
        (-2.5, -0.11232506769296609, 0.6788527342647943, -0.4324224718407053, -0.2204201548746296),
        (1.0, 0.13529241631288141, -0.1591474412967932, 1.2074235949528713, 0.9324359333927756),
        (3.0, 0.006591139357460719, -0.011912976705951319, 14.037328963730232, 22.92221496638217),
        (7.0, 7.492128863997167e-07, -2.008150894738792e-06, 80327.79070943025, 209552.6708739713),
        (12.0, 1.3931846888753607e-13, -4.854736554985309e-13, 329807225829.07416, 1135507502443.3708),
        (-6.3, -0.33734764921613514, -0.2989916089847392, 0.11373700900819783, -0.8427610968089704),
        (4.7, 0.00021286092135859743, -0.00047218363998626406, 345.4256307572337, 729.1406685533456),
        (-0.7, 0.5110003975750101, -0.14464128564332104, 0.2752680119878797, 0.5449991200691819),
    ];

    #[test]
    fn origin_closed_forms() {
        let q = airy_eval(0.0).unwrap();
        assert!((q.ai - 0.355_028_053_9).abs() < 1e-10);
        assert!((q.bi - 0.614_926_627_4).abs() < 1e-10);
    }

    #[test]
    fn matches_reference_values() {
        for &(x, ai, aip, bi, bip) in REFERENCE {
            let q = airy_eval(x).unwrap();
            for (got, want, name) in [(q.ai, ai, "Ai"), (q.ai_prime, aip, "Ai'"), (q.bi, bi, "Bi"), (q.bi_prime, bip, "Bi'")] {
                let rel = (got - want).abs() / want.abs();
                assert!(rel < 1e-11, "{name}({x}) = {got}, want {want}, rel {rel:e}");
            }
        }
    }

    #[test]
    fn wronskian_over_domain() {
        let mut x = -150.0;
        while x < 100.0 {
            let q = airy_eval(x).unwrap();
            let w = q.wronskian() * PI;
            assert!((w - 1.0).abs() < 1e-10, "x = {x}: pi*W = {w}");
            x += 0.0731;
        }
    }

    #[test]
    fn ai_decays_on_positive_axis() {
        let a = |x| airy_eval(x).unwrap().ai;
        assert!(a(3.0) > a(4.0) && a(4.0) > a(5.0) && a(5.0) > 0.0);
        let mut prev = a(1.0);
        for i in 1..400 {
            let cur = airy_ai(1.0 + i as f64 * 0.1).unwrap().0;
            assert!(cur < prev);
            prev = cur;
        }
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(airy_eval(150.0), Err(Error::OutOfRange { .. })));
        assert!(matches!(airy_eval(f64::NAN), Err(Error::OutOfRange { .. })));
        assert!(matches!(airy_eval(-250.0), Err(Error::OutOfRange { .. })));
        // Ai alone is fine up to the domain edge
        let (ai, _) = airy_ai(150.0).unwrap();
        assert!(ai >= 0.0 && ai < 1e-300);
    }

    #[test]
    fn first_zero_is_small() {
        let q = airy_eval(-2.33811).unwrap();
        assert!(q.ai.abs() < 1e-5);
    }

    #[test]
    fn zeros() {
        let z1 = airy_ai_zero(1).unwrap();
        assert!((z1 + 2.338_107_410_459_767).abs() < 1e-10, "{z1}");
        let z2 = airy_ai_zero(2).unwrap();
        assert!((z2 + 4.087_949_444_130_97).abs() < 1e-10, "{z2}");
        for n in 1..=10 {
            let z = airy_ai_zero(n).unwrap();
            assert!(airy_eval(z).unwrap().ai.abs() <= 1e-10);
            assert!(airy_ai_zero(n + 1).unwrap() < z);
        }
        assert!(airy_ai_zero(0).is_err());
    }

    #[test]
    fn regime_boundaries_are_continuous() {
        let eps = 1e-12;
        for &b in &[-9.0, -2.0, 2.0, 9.0] {
            let lo = airy_eval(b - eps).unwrap();
            let hi = airy_eval(b + eps).unwrap();
            // first-order change across the gap, using y'' = x y for the derivatives
            let pairs = [
                (lo.ai, hi.ai, lo.ai_prime),
                (lo.bi, hi.bi, lo.bi_prime),
                (lo.ai_prime, hi.ai_prime, b * lo.ai),
                (lo.bi_prime, hi.bi_prime, b * lo.bi),
            ];
            for (l, h, slope) in pairs {
                let rel = (h - l - 2.0 * eps * slope).abs() / h.abs();
                assert!(rel < 1e-12, "jump {rel:e} at {b}");
            }
        }
    }
}
