//! Main-term constants by residue extraction.
//!
//! k = 2: F(s;2) = zeta(2s-1) H(s;2) has a simple pole at s = 1 with
//! zeta(2s-1) ~ 1/(2(s-1)), so Res_{s=1} F(s;2) x^s / s = (H(1;2)/2) x and the
//! main-term constant is c2 = H(1;2)/2.
//!
//! k = 3: F(s;3) = zeta^4(3s-1) zeta(6s-3) H(s;3) has an order-5 pole at
//! s = 2/3. With u = s - 2/3, L = log x and W(u) = u^5 zeta^4(1+3u) zeta(1+6u)
//! (analytic, W(0) = 1/486),
//!
//!   Res = x^{2/3} [u^4] ( W(u) H(2/3+u;3) e^{uL} / (2/3+u) )
//!       = x^{2/3} sum_j a_j L^j,   a_j = q_{4-j} / j!,
//!
//! where q_m is the u^m coefficient of W(u) H(2/3+u;3) / (2/3+u). Taylor data
//! for H comes from Chebyshev interpolation of Euler-product values on a small
//! interval around 2/3 (direct finite differences lose too many digits in the
//! 4th derivative).

use rug::Float;

use crate::error::{Error, Result};
use crate::euler::{euler_product_h, EulerProductValue};
use crate::fit::LogPolynomial;
use crate::mp::{real, zero, PREC};
use crate::series::TruncatedSeries;
use crate::zeta::zeta_laurent;

/// A constant with a propagated (heuristic-plus-safety) error bound.
#[derive(Debug, Clone)]
pub struct ConstantEstimate {
    pub value: Float,
    pub error_bound: Float,
}

/// c2 = H(1;2) / 2 from an Euler product evaluated at s = 1, k = 2.
pub fn residue_c2(h: &EulerProductValue) -> Result<ConstantEstimate> {
    if h.k != 2 {
        return Err(Error::InvalidArgument(format!("residue_c2 needs k = 2, got k = {}", h.k)));
    }
    if (h.s - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "residue_c2 needs H evaluated at s = 1, got s = {}",
            h.s
        )));
    }
    let value = Float::with_val(PREC, &h.value / &real(2));
    let error_bound = Float::with_val(
        PREC,
        Float::with_val(PREC, &h.alpha_tail_bound + &h.prime_tail_bound) / &real(2),
    );
    Ok(ConstantEstimate { value, error_bound })
}

/// Taylor series of H(s;3) around s = 2/3 through order `degree`, by
/// degree-`degree` Chebyshev interpolation of Euler-product values at
/// `degree + 1` nodes on [2/3 - radius, 2/3 + radius].
pub fn h_taylor_k3(prime_limit: u64, tol: f64, degree: usize, radius: f64) -> Result<TruncatedSeries> {
    if degree < 4 {
        return Err(Error::InvalidArgument(format!(
            "taylor extraction needs degree >= 4, got {degree}"
        )));
    }
    if !(radius > 0.0) || radius > 0.16 {
        return Err(Error::InvalidArgument(format!(
            "node radius must stay inside the convergence region, got {radius}"
        )));
    }
    let n = degree + 1;
    let center = Float::with_val(PREC, 2u32) / 3u32;
    let r = real(radius);
    let pi = Float::with_val(PREC, rug::float::Constant::Pi);

    // Chebyshev nodes t_i = cos((2i+1) pi / (2n)) and H values there.
    let mut thetas = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let theta = Float::with_val(PREC, &pi * &real((2 * i + 1) as u64)) / real(2 * n as u64);
        let t = theta.clone().cos();
        let s = Float::with_val(PREC, &center + &Float::with_val(PREC, &r * &t));
        let ev = euler_product_h(&s, 3, prime_limit, tol)?;
        thetas.push(theta);
        values.push(ev.value);
    }

    // Discrete orthogonality: c_j = (2 - [j=0]) / n * sum_i f_i cos(j theta_i).
    let mut cheb = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = zero();
        for (theta, f) in thetas.iter().zip(values.iter()) {
            let c = Float::with_val(PREC, theta * &real(j as u64)).cos();
            acc += Float::with_val(PREC, f * &c);
        }
        let scale = if j == 0 { 1.0 } else { 2.0 };
        cheb.push(acc * real(scale) / real(n as u64));
    }

    // Chebyshev -> monomial in t, then u = r t: divide by r^m.
    let mut mono = vec![zero(); n];
    let mut t_prev = vec![zero(); n];
    let mut t_cur = vec![zero(); n];
    t_prev[0] = real(1);
    t_cur[1] = real(1);
    for (j, c) in cheb.iter().enumerate() {
        let t: &Vec<Float> = match j {
            0 => &t_prev,
            1 => &t_cur,
            _ => {
                let mut t_next = vec![zero(); n];
                for i in 0..n - 1 {
                    t_next[i + 1] += Float::with_val(PREC, &real(2) * &t_cur[i]);
                }
                for i in 0..n {
                    t_next[i] -= &t_prev[i];
                }
                t_prev = std::mem::replace(&mut t_cur, t_next);
                &t_cur
            }
        };
        for i in 0..n {
            mono[i] += Float::with_val(PREC, c * &t[i]);
        }
    }
    let mut rm = real(1);
    let coeffs: Vec<Float> = mono
        .into_iter()
        .map(|c| {
            let out = Float::with_val(PREC, &c / &rm);
            rm *= &r;
            out
        })
        .collect();
    Ok(TruncatedSeries::new(2.0 / 3.0, 0, coeffs))
}

/// 1/s = 1/(2/3 + u) = (3/2) sum_j (-3u/2)^j as a series in u.
pub fn inverse_s_series(order: usize) -> TruncatedSeries {
    let three_half = real(3) / real(2);
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut c = three_half.clone();
    for _ in 0..=order {
        coeffs.push(c.clone());
        c *= &three_half;
        c = -c;
    }
    TruncatedSeries::new(2.0 / 3.0, 0, coeffs)
}

/// Assembles the degree-4 log polynomial of the order-5 pole residue from its
/// three series ingredients. Exposed so degenerate inputs (pure-pole zeta,
/// constant H, truncated 1/s) can exercise the leading-coefficient algebra.
pub fn residue_polynomial_k3_from_parts(
    zeta_pole: &TruncatedSeries,
    h_taylor: &TruncatedSeries,
    inv_s: &TruncatedSeries,
) -> Result<LogPolynomial> {
    if h_taylor.valid_through() < 4 {
        return Err(Error::InvalidArgument(format!(
            "residue needs H Taylor data through order 4, have {}",
            h_taylor.valid_through()
        )));
    }
    if zeta_pole.lowest_order() != -1 {
        return Err(Error::InvalidArgument("zeta series must start at the simple pole".into()));
    }
    // W(u) = u^5 zeta(1+3u)^4 zeta(1+6u)
    let z3 = zeta_pole.scale_variable(&real(3)).with_center(2.0 / 3.0);
    let z6 = zeta_pole.scale_variable(&real(6)).with_center(2.0 / 3.0);
    let w = z3.powi(4).mul(&z6).shift(5);
    let prod = w.mul(h_taylor).mul(inv_s);
    if prod.valid_through() < 4 {
        return Err(Error::InvalidArgument(format!(
            "series carry only {} orders; residue needs u^4",
            prod.valid_through()
        )));
    }
    let mut coeffs = Vec::with_capacity(5);
    let mut fact = 1.0f64;
    for j in 0..=4u32 {
        if j > 0 {
            fact *= j as f64;
        }
        coeffs.push(prod.coeff(4 - j as i32).to_f64() / fact);
    }
    Ok(LogPolynomial { coeffs, exponent: (2, 3) })
}

/// The residue log polynomial x^{2/3} sum a_j log^j x from H Taylor data,
/// using the real zeta Laurent expansion and the full 1/s series.
pub fn residue_polynomial_k3(h_taylor: &TruncatedSeries) -> Result<LogPolynomial> {
    let zl = zeta_laurent(8)?;
    let inv_s = inverse_s_series(9);
    residue_polynomial_k3_from_parts(&zl, h_taylor, &inv_s)
}
