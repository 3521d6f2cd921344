//! Least-squares tooling for the empirical validation pipelines: power-law
//! slope estimation on log-log data and degree-d fits of x^{2/3} P_d(log x)
//! main terms, solved on a shifted/scaled Chebyshev basis via Householder QR.

use serde::Serialize;

use crate::error::{Error, Result};

/// x^{num/den} * sum_j coeffs[j] * (log x)^j.
#[derive(Debug, Clone, Serialize)]
pub struct LogPolynomial {
    pub coeffs: Vec<f64>,
    pub exponent: (u32, u32),
}

impl LogPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let l = x.ln();
        let mut poly = 0.0;
        for &c in self.coeffs.iter().rev() {
            poly = poly * l + c;
        }
        x.powf(self.exponent.0 as f64 / self.exponent.1 as f64) * poly
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SlopeReport {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points_used: usize,
}

/// Ordinary least squares of log|err| against log x.
/// Points need x > 1 and err != 0; at least 3 distinct x are required.
pub fn estimate_slope(points: &[(f64, f64)]) -> Result<SlopeReport> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "slope estimation needs >= 3 points, got {}",
            points.len()
        )));
    }
    for &(x, err) in points {
        if !(x > 1.0) || err == 0.0 || !err.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "slope estimation needs x > 1 and err != 0, got ({x}, {err})"
            )));
        }
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, e)| (x.ln(), e.abs().ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("slope estimation needs distinct x".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = logs
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).powi(2))
        .sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok(SlopeReport { slope, intercept, r_squared, points_used: points.len() })
}

#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub fitted: LogPolynomial,
    pub residual_rms: f64,
    pub condition_diag: f64,
    pub checkpoints_used: usize,
    pub ill_conditioned: bool,
}

/// Least squares of y x^{-2/3} against {1, L, ..., L^degree}, L = log x,
/// solved in a Chebyshev basis on the L-range to keep the normal problem
/// well conditioned, then converted back to monomial coefficients.
pub fn fit_log_polynomial(points: &[(f64, f64)], degree: usize) -> Result<FitReport> {
    fit_log_polynomial_with_exponent(points, degree, (2, 3))
}

pub fn fit_log_polynomial_with_exponent(
    points: &[(f64, f64)],
    degree: usize,
    exponent: (u32, u32),
) -> Result<FitReport> {
    let cols = degree + 1;
    if points.len() < degree + 2 {
        return Err(Error::InvalidArgument(format!(
            "degree-{degree} fit needs at least {} points, got {}",
            degree + 2,
            points.len()
        )));
    }
    for &(x, _) in points {
        if !(x > 1.0) {
            return Err(Error::InvalidArgument(format!("fit needs x > 1, got {x}")));
        }
    }
    let expf = exponent.0 as f64 / exponent.1 as f64;
    let ls: Vec<f64> = points.iter().map(|&(x, _)| x.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(x, y)| y / x.powf(expf)).collect();
    let (lmin, lmax) = ls
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &l| (a.min(l), b.max(l)));
    if lmax - lmin < 1e-9 {
        return Err(Error::InvalidArgument("fit needs distinct x".into()));
    }
    // u in [-1, 1]
    let alpha = 2.0 / (lmax - lmin);
    let beta = -(lmax + lmin) / (lmax - lmin);

    // Design matrix in Chebyshev basis T_j(u).
    let rows = points.len();
    let mut a = vec![0.0f64; rows * cols];
    for (r, &l) in ls.iter().enumerate() {
        let u = alpha * l + beta;
        let mut t0 = 1.0;
        let mut t1 = u;
        for c in 0..cols {
            let t = match c {
                0 => 1.0,
                1 => u,
                _ => {
                    let t2 = 2.0 * u * t1 - t0;
                    t0 = t1;
                    t1 = t2;
                    t2
                }
            };
            a[r * cols + c] = t;
        }
    }
    let mut rhs = ys.clone();
    let rdiag = householder_qr_solve(&mut a, rows, cols, &mut rhs)?;
    let cheb_coeffs = &rhs[..cols];

    let condition_diag = {
        let max = rdiag.iter().cloned().fold(0.0f64, |m, v| m.max(v.abs()));
        let min = rdiag.iter().cloned().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        if min > 0.0 {
            max / min
        } else {
            f64::INFINITY
        }
    };

    // Chebyshev -> monomial in u -> monomial in L (u = alpha L + beta).
    let poly_u = chebyshev_to_monomial(cheb_coeffs);
    let coeffs = substitute_affine(&poly_u, alpha, beta);

    let fitted = LogPolynomial { coeffs, exponent };
    let mut ss = 0.0;
    for (&(x, _), &y) in points.iter().zip(ys.iter()) {
        let l = x.ln();
        let mut p = 0.0;
        for &c in fitted.coeffs.iter().rev() {
            p = p * l + c;
        }
        ss += (y - p).powi(2);
    }
    let residual_rms = (ss / rows as f64).sqrt();
    let decades = (lmax - lmin) / std::f64::consts::LN_10;
    let ill_conditioned = condition_diag > 1e10 || points.len() < 10 || decades < 4.0;
    Ok(FitReport {
        fitted,
        residual_rms,
        condition_diag,
        checkpoints_used: rows,
        ill_conditioned,
    })
}

/// In-place Householder QR least squares. `a` is row-major rows x cols,
/// `rhs` has length rows; the solution lands in rhs[..cols]. Returns the
/// diagonal of R for conditioning diagnostics.
fn householder_qr_solve(a: &mut [f64], rows: usize, cols: usize, rhs: &mut [f64]) -> Result<Vec<f64>> {
    assert!(rows >= cols);
    let mut rdiag = vec![0.0f64; cols];
    for c in 0..cols {
        let mut norm = 0.0f64;
        for r in c..rows {
            norm += a[r * cols + c] * a[r * cols + c];
        }
        let norm = norm.sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidArgument("rank-deficient design matrix".into()));
        }
        let sign = if a[c * cols + c] >= 0.0 { 1.0 } else { -1.0 };
        let alpha = -sign * norm;
        rdiag[c] = alpha;
        // v = x - alpha e1 (stored in column c, rows c..)
        a[c * cols + c] -= alpha;
        let vnorm2: f64 = (c..rows).map(|r| a[r * cols + c] * a[r * cols + c]).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for col in c + 1..cols {
            let dot: f64 = (c..rows).map(|r| a[r * cols + c] * a[r * cols + col]).sum();
            let f = 2.0 * dot / vnorm2;
            for r in c..rows {
                a[r * cols + col] -= f * a[r * cols + c];
            }
        }
        let dot: f64 = (c..rows).map(|r| a[r * cols + c] * rhs[r]).sum();
        let f = 2.0 * dot / vnorm2;
        for r in c..rows {
            rhs[r] -= f * a[r * cols + c];
        }
    }
    // Back substitution with R (upper triangle, diagonal in rdiag).
    for c in (0..cols).rev() {
        let mut v = rhs[c];
        for j in c + 1..cols {
            v -= a[c * cols + j] * rhs[j];
        }
        rhs[c] = v / rdiag[c];
    }
    Ok(rdiag)
}

fn chebyshev_to_monomial(cheb: &[f64]) -> Vec<f64> {
    let n = cheb.len();
    // T polynomials as monomial coefficient rows.
    let mut t_prev = vec![0.0; n];
    let mut t_cur = vec![0.0; n];
    t_prev[0] = 1.0;
    if n > 1 {
        t_cur[1] = 1.0;
    }
    let mut out = vec![0.0; n];
    for (j, &c) in cheb.iter().enumerate() {
        let t = match j {
            0 => &t_prev,
            1 => &t_cur,
            _ => {
                let mut t_next = vec![0.0; n];
                for i in 0..n - 1 {
                    t_next[i + 1] += 2.0 * t_cur[i];
                }
                for i in 0..n {
                    t_next[i] -= t_prev[i];
                }
                t_prev = std::mem::take(&mut t_cur);
                t_cur = t_next;
                &t_cur
            }
        };
        for i in 0..n {
            out[i] += c * t[i];
        }
    }
    out
}

/// p(u) with u = alpha L + beta -> coefficients in L.
fn substitute_affine(poly_u: &[f64], alpha: f64, beta: f64) -> Vec<f64> {
    let n = poly_u.len();
    let mut out = vec![0.0; n];
    // Horner in u: accumulate polynomial in L.
    let mut acc = vec![0.0; n];
    for &c in poly_u.iter().rev() {
        // acc = acc * (alpha L + beta) + c
        let mut next = vec![0.0; n];
        for i in 0..n - 1 {
            next[i + 1] += acc[i] * alpha;
        }
        for i in 0..n {
            next[i] += acc[i] * beta;
        }
        next[0] += c;
        acc = next;
    }
    out.copy_from_slice(&acc);
    out
}
