//! Bessel functions of the first kind, integer order.

use crate::error::{Error, Result};

/// Largest order accepted by [`bessel_j`].
pub const BESSEL_MAX_ORDER: i32 = 500;

const MAX_ARG: f64 = 1.0e4;
const SERIES_LIMIT: f64 = 2.0;

/// `J_n(x)` for integer `n` and `x >= 0`; negative orders use
/// `J_{-n} = (-1)^n J_n`.
pub fn bessel_j(n: i32, x: f64) -> Result<f64> {
    if !x.is_finite() || !(0.0..=MAX_ARG).contains(&x) {
        return Err(Error::OutOfRange {
            what: "Bessel argument",
            value: x,
            reason: "expected a finite value in [0, 1e4]",
        });
    }
    if n.abs() > BESSEL_MAX_ORDER {
        return Err(Error::OutOfRange {
            what: "Bessel order",
            value: n as f64,
            reason: "order magnitude above 500",
        });
    }
    let order = n.unsigned_abs() as usize;
    let sign = if n < 0 && order % 2 == 1 { -1.0 } else { 1.0 };
    let v = if x <= SERIES_LIMIT { series(order, x) } else { miller(order, x) };
    Ok(sign * v)
}

/// `J_n'(x) = (J_{n-1}(x) - J_{n+1}(x)) / 2`.
pub fn bessel_j_prime(n: i32, x: f64) -> Result<f64> {
    Ok(0.5 * (bessel_j(n - 1, x)? - bessel_j(n + 1, x)?))
}

fn series(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    if term == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut sum = term;
    for k in 1..60usize {
        term *= q / (k * (k + n)) as f64;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

// Downward recurrence from well above max(n, x), normalized with
// J_0 + 2 Σ J_{2k} = 1.
fn miller(n: usize, x: f64) -> f64 {
    let top = n.max(x as usize) as f64;
    let mut start = (top + 15.0 + (40.0 * top).sqrt()) as usize;
    start += start % 2; // even start keeps the normalization sum aligned
    let mut j_next = 0.0_f64; // J_{k+1}
    let mut j_cur = 1e-300_f64; // J_k
    let mut norm = 0.0;
    let mut wanted = 0.0;
    let two_over_x = 2.0 / x;
    for k in (0..=start).rev() {
        if k == n {
            wanted = j_cur;
        }
        if k % 2 == 0 {
            norm += if k == 0 { j_cur } else { 2.0 * j_cur };
        }
        if k == 0 {
            break;
        }
        let j_prev = k as f64 * two_over_x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        if j_cur.abs() > 1e250 {
            j_cur *= 1e-250;
            j_next *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
    }
    wanted / norm
}

#[cfg(test)]
mod tests {
    use super::*;

    // (n, x, J_n(x)) from an arbitrary-precision evaluation.
    const REFERENCE: &[(i32, f64, f64)] = &[
        (0, 0.5, 0.9384698072408129),
        (1, 1.8412, 0.5818652242276431),
        (1, 1.0, 0.4400505857449335),
        (0, 2.5, -0.048383776468198),
        (1, 7.3, 0.08257043049325784),
        (2, 3.0, 0.4860912605858911),
        (3, 10.0, 0.058379379305186815),
        (5, 1.0, 0.00024975773021123444),
        (0, 30.0, -0.08636798358104021),
        (1, 45.5, 0.07981379965306677),
        (4, 0.01, 2.6041536458604602e-11),
    ];

    #[test]
    fn reference_values() {
        for &(n, x, want) in REFERENCE {
            let got = bessel_j(n, x).unwrap();
            assert!((got - want).abs() <= 1e-13 * want.abs().max(1e-3), "J_{n}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn zeros_are_zeros() {
        assert!(bessel_j(0, 2.404825557695773).unwrap().abs() < 1e-14);
        assert!(bessel_j(1, 3.8317059702075125).unwrap().abs() < 1e-14);
    }

    #[test]
    fn origin() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        for n in 1..=3 {
            assert_eq!(bessel_j(n, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn negative_order() {
        for &x in &[0.3, 2.7, 11.0] {
            assert_eq!(bessel_j(-3, x).unwrap(), -bessel_j(3, x).unwrap());
        }
    }

    #[test]
    fn j1_peak_and_j2_bound() {
        let mut best = (0.0, 0.0);
        let mut j2max: f64 = 0.0;
        for i in 0..=50_000 {
            let x = i as f64 * 1e-3;
            let j1 = bessel_j(1, x).unwrap();
            if j1 > best.1 {
                best = (x, j1);
            }
            j2max = j2max.max(bessel_j(2, x).unwrap().abs());
        }
        assert!((best.1 - 0.5819).abs() < 1e-4);
        assert!((best.0 - 1.8412).abs() < 2e-3);
        assert!(j2max < 0.5);
    }

    #[test]
    fn recurrence() {
        for n in 1..=5 {
            let mut x = 0.1;
            while x <= 50.0 {
                let lhs = bessel_j(n - 1, x).unwrap() + bessel_j(n + 1, x).unwrap();
                let rhs = 2.0 * n as f64 / x * bessel_j(n, x).unwrap();
                let scale = lhs.abs().max(rhs.abs()).max(1e-3);
                assert!((lhs - rhs).abs() < 1e-9 * scale, "n={n} x={x}");
                x += 0.173;
            }
        }
    }

    #[test]
    fn derivative_identity() {
        // J0' = -J1
        for &x in &[0.4, 1.9, 2.1, 8.0] {
            let d = bessel_j_prime(0, x).unwrap();
            assert!((d + bessel_j(1, x).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(bessel_j(1, f64::INFINITY).is_err());
        assert!(bessel_j(1000, 1.0).is_err());
        assert!(bessel_j(1, -0.5).is_err());
    }
}
