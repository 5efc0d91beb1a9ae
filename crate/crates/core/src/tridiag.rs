//! Lowest eigenpairs of a real symmetric tridiagonal matrix by Sturm-count
//! bisection followed by inverse iteration.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::Domain {
                what: "tridiagonal matrix",
                reason: format!("need n >= 1 diagonal and n-1 off-diagonal entries, got {} and {}", diag.len(), off.len()),
            });
        }
        if diag.iter().chain(off.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Domain { what: "tridiagonal matrix", reason: "non-finite entry".into() });
        }
        Ok(SymTridiag { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            let denom = if q == 0.0 { f64::EPSILON * (self.off[i - 1].abs() + 1.0) } else { q };
            q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / denom;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based), bisected to full precision.
    pub fn eigenvalue(&self, k: usize) -> Result<f64> {
        if k >= self.len() {
            return Err(Error::Domain { what: "eigenvalue index", reason: format!("{k} >= dimension {}", self.len()) });
        }
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Unit eigenvector for an eigenvalue `lambda` by inverse iteration.
    pub fn eigenvector(&self, lambda: f64) -> Result<Vec<f64>> {
        let n = self.len();
        let (lo, hi) = self.gershgorin();
        let shift = lambda + 1e-10 * (hi - lo).max(1.0) * f64::EPSILON.sqrt();
        // Deterministic, non-degenerate start vector.
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
        for _ in 0..6 {
            x = self.solve_shifted(shift, &x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                return Err(Error::NoConvergence { what: "inverse iteration", detail: format!("breakdown at lambda = {lambda}") });
            }
            x.iter_mut().for_each(|v| *v /= norm);
        }
        Ok(x)
    }

    // Thomas algorithm for (T - s I) y = b with tiny-pivot protection.
    fn solve_shifted(&self, s: f64, b: &[f64]) -> Vec<f64> {
        let n = self.len();
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut piv = self.diag[0] - s;
        if piv.abs() < tiny {
            piv = tiny;
        }
        if n > 1 {
            c[0] = self.off[0] / piv;
        }
        d[0] = b[0] / piv;
        for i in 1..n {
            piv = self.diag[i] - s - self.off[i - 1] * c[i - 1];
            if piv.abs() < tiny {
                piv = tiny;
            }
            if i + 1 < n {
                c[i] = self.off[i] / piv;
            }
            d[i] = (b[i] - self.off[i - 1] * d[i - 1]) / piv;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        d
    }

    /// The `count` lowest eigenpairs, ascending.
    pub fn lowest(&self, count: usize) -> Result<Vec<(f64, Vec<f64>)>> {
        (0..count.min(self.len()))
            .map(|k| {
                let e = self.eigenvalue(k)?;
                Ok((e, self.eigenvector(e)?))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_laplacian_spectrum() {
        // eigenvalues of tridiag(-1, 2, -1) are 2 - 2cos(k pi/(n+1))
        let n = 200;
        let t = SymTridiag::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap();
        for (k, (e, v)) in t.lowest(4).unwrap().into_iter().enumerate() {
            let want = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((e - want).abs() < 1e-13);
            // residual
            let mut r: f64 = 0.0;
            for i in 0..n {
                let mut tv = 2.0 * v[i];
                if i > 0 {
                    tv -= v[i - 1];
                }
                if i + 1 < n {
                    tv -= v[i + 1];
                }
                r = r.max((tv - e * v[i]).abs());
            }
            assert!(r < 1e-10);
        }
    }

    #[test]
    fn sturm_count_is_monotone() {
        let t = SymTridiag::new(vec![1.0, 3.0, 5.0], vec![0.5, 0.5]).unwrap();
        assert_eq!(t.sturm_count(-10.0), 0);
        assert_eq!(t.sturm_count(10.0), 3);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(SymTridiag::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(SymTridiag::new(vec![f64::NAN], vec![]).is_err());
    }
}
