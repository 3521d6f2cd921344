//! Riemann zeta at real arguments, Stieltjes constants, and the Laurent
//! expansion of zeta at its pole, all at working precision.
//!
//! Evaluation is Euler-Maclaurin throughout: for zeta(s) the classical tail
//! correction with Bernoulli numbers, for the Stieltjes constants the limit
//! formula gamma_n = lim (sum_{k<=N} log^n k / k - log^{n+1} N / (n+1))
//! with explicit Euler-Maclaurin corrections so N stays tiny. Every constant
//! is computed from first principles at startup; nothing is hard-coded.

use std::sync::OnceLock;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::mp::{real, zero, PREC};
use crate::series::TruncatedSeries;

/// Highest Stieltjes constant exposed (zeta_laurent order cap).
pub const MAX_LAURENT_ORDER: usize = 12;

const EM_N: u32 = 64; // summation cutoff
const EM_M: u32 = 32; // Bernoulli correction terms for zeta
const EM_M_STIELTJES: u32 = 40;

/// Bernoulli numbers as exact rationals, by the Pascal-row recurrence
/// sum_{j<=m} C(m+1, j) B_j = 0. Sized to cover doubled-order reruns.
fn bernoulli() -> &'static Vec<Rational> {
    static CACHE: OnceLock<Vec<Rational>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let top = (4 * EM_M_STIELTJES) as usize;
        let mut b: Vec<Rational> = Vec::with_capacity(top + 1);
        b.push(Rational::from(1));
        for m in 1..=top {
            // C(m+1, j) running binomial
            let mut binom = Integer::from(1); // C(m+1, 0)
            let mut acc = Rational::new();
            for (j, bj) in b.iter().enumerate() {
                acc += bj.clone() * &binom;
                binom = binom * (m as u32 + 1 - j as u32) / (j as u32 + 1);
            }
            acc /= -Rational::from((m as u32 + 1, 1u32));
            b.push(acc);
        }
        b
    })
}

pub fn bernoulli_number(n: usize) -> Rational {
    bernoulli()[n].clone()
}

/// zeta(s) for real s > 0, |s - 1| >= 1e-3, by Euler-Maclaurin with the
/// remainder controlled by the first omitted Bernoulli term (for real s the
/// remainder does not exceed it). Relative error is far below 1e-20 at
/// working precision.
pub fn zeta_real(s: &Float) -> Result<Float> {
    let sf = s.to_f64();
    if !(sf > 0.0) {
        return Err(Error::InvalidArgument(format!("zeta_real needs s > 0, got {sf}")));
    }
    if (sf - 1.0).abs() < 1e-3 {
        return Err(Error::InvalidArgument(format!(
            "zeta_real needs |s - 1| >= 1e-3 (got s = {sf}); use zeta_laurent near the pole"
        )));
    }
    Ok(zeta_euler_maclaurin(s, EM_N, EM_M))
}

/// The raw Euler-Maclaurin evaluation with explicit parameters; exposed so
/// tests can rerun it at doubled order as an independent check.
pub fn zeta_euler_maclaurin(s: &Float, big_n: u32, order: u32) -> Float {
    let nf = real(big_n);
    let mut acc = zero();
    for n in 1..big_n {
        acc += real(n).pow(&-s.clone());
    }
    let n_pow_ms = nf.clone().pow(&-s.clone()); // N^{-s}
    acc += n_pow_ms.clone() / 2u32;
    // N^{1-s} / (s-1)
    let s_minus_1 = Float::with_val(PREC, s - &real(1));
    acc += Float::with_val(PREC, &n_pow_ms * &nf) / &s_minus_1;

    let bern = bernoulli();
    let n_sq = Float::with_val(PREC, &nf * &nf);
    let mut n_fac = Float::with_val(PREC, &n_pow_ms * &nf); // N^{-s+1-2r}, starts at r=0
    let mut rising = real(1); // (s)_{2r-1}
    let mut fact = real(1); // (2r)!
    for r in 1..=order {
        n_fac /= &n_sq;
        if r == 1 {
            rising = s.clone(); // (s)_1
        } else {
            // extend (s)_{2r-3} -> (s)_{2r-1}
            let a = Float::with_val(PREC, s + &real(2 * r - 3));
            let b = Float::with_val(PREC, s + &real(2 * r - 2));
            rising *= Float::with_val(PREC, &a * &b);
        }
        fact *= real((2 * r - 1) * 2 * r);
        let b2r = real(&bern[(2 * r) as usize]);
        acc += b2r / &fact * &rising * &n_fac;
    }
    acc
}

/// All Stieltjes constants gamma_0 .. gamma_MAX at working precision.
fn stieltjes_table() -> &'static Vec<Float> {
    static CACHE: OnceLock<Vec<Float>> = OnceLock::new();
    CACHE.get_or_init(|| {
        (0..=MAX_LAURENT_ORDER)
            .map(|n| stieltjes_euler_maclaurin(n, EM_N, EM_M_STIELTJES))
            .collect()
    })
}

/// gamma_n for n <= MAX_LAURENT_ORDER.
pub fn stieltjes(n: usize) -> Result<Float> {
    if n > MAX_LAURENT_ORDER {
        return Err(Error::InvalidArgument(format!(
            "stieltjes constants computed up to gamma_{MAX_LAURENT_ORDER}, got {n}"
        )));
    }
    Ok(stieltjes_table()[n].clone())
}

/// The Euler-Mascheroni constant gamma = gamma_0.
pub fn euler_mascheroni() -> Float {
    stieltjes_table()[0].clone()
}

/// Limit-formula evaluation of gamma_n with Euler-Maclaurin corrections:
/// exposed with explicit parameters for independent-rerun tests.
///
/// With f(t) = log^n(t)/t, derivatives follow the polynomial recurrence
/// f^(m)(t) = P_m(log t)/t^{m+1}, P_0 = L^n, P_{m+1} = P_m' - (m+1) P_m,
/// whose coefficients stay exact integers.
pub fn stieltjes_euler_maclaurin(n: usize, big_n: u32, order: u32) -> Float {
    let nf = real(big_n);
    let ln_n = nf.clone().ln();
    // partial sum of log^n k / k
    let mut acc = zero();
    for k in 1..=big_n {
        if n == 0 {
            acc += real(k).recip();
        } else if k >= 2 {
            acc += real(k).ln().pow(n as u32) / real(k);
        }
    }
    // - log^{n+1} N / (n+1)  - log^n N / (2N)
    acc -= ln_n.clone().pow(n as u32 + 1) / real(n as u32 + 1);
    acc -= ln_n.clone().pow(n as u32) / (real(2) * &nf);

    // polynomial P_m in L = log t, exact integer coefficients
    let mut p: Vec<Integer> = vec![Integer::from(0); n + 1];
    p[n] = Integer::from(1);
    let mut m = 0u32;
    let bern = bernoulli();
    let mut fact = real(1); // (2r)!
    for r in 1..=order {
        while m < 2 * r - 1 {
            // P_{m+1} = P_m' - (m+1) P_m
            let mut next = vec![Integer::from(0); p.len()];
            for i in 1..p.len() {
                next[i - 1] = Integer::from(i as u32) * &p[i];
            }
            for i in 0..p.len() {
                next[i] -= Integer::from(m + 1) * &p[i];
            }
            p = next;
            m += 1;
        }
        fact *= real((2 * r - 1) * 2 * r);
        // f^(2r-1)(N) = P(ln N) / N^{2r}
        let mut poly = zero();
        let mut lpow = real(1);
        for c in &p {
            poly += real(c) * &lpow;
            lpow *= &ln_n;
        }
        let fm = poly / nf.clone().pow(2 * r);
        acc -= real(&bern[(2 * r) as usize]) / &fact * fm;
    }
    acc
}

/// Laurent series of zeta around its pole, in the local variable u:
/// zeta(1 + u) = 1/u + sum_{m >= 0} (-1)^m gamma_m u^m / m!.
/// `order` is the highest power of u kept (at most [`MAX_LAURENT_ORDER`]).
pub fn zeta_laurent(order: usize) -> Result<TruncatedSeries> {
    if order > MAX_LAURENT_ORDER {
        return Err(Error::InvalidArgument(format!(
            "zeta_laurent order capped at {MAX_LAURENT_ORDER}, got {order}"
        )));
    }
    let mut coeffs = Vec::with_capacity(order + 2);
    coeffs.push(real(1)); // u^{-1}
    let mut fact = real(1);
    for m in 0..=order {
        if m > 0 {
            fact *= real(m as u32);
        }
        let mut c = stieltjes(m)? / &fact;
        if m % 2 == 1 {
            c = -c;
        }
        coeffs.push(c);
    }
    Ok(TruncatedSeries::new(1.0, -1, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    #[test]
    fn bernoulli_spot_values() {
        let b = |n: usize| bernoulli_number(n);
        assert_eq!(b(0), Rational::from(1));
        assert_eq!(b(1), Rational::from((-1, 2)));
        assert_eq!(b(2), Rational::from((1, 6)));
        assert_eq!(b(3), Rational::from(0));
        assert_eq!(b(4), Rational::from((-1, 30)));
        assert_eq!(b(6), Rational::from((1, 42)));
        assert_eq!(b(12), Rational::from((-691, 2730)));
    }

    #[test]
    fn zeta_classical_identities() {
        let pi = Float::with_val(PREC, Constant::Pi);
        let z2 = zeta_real(&real(2)).unwrap();
        let t2 = pi.clone().square() / 6u32;
        assert!(Float::with_val(PREC, &z2 - &t2).abs().to_f64() < 1e-70);
        let z4 = zeta_real(&real(4)).unwrap();
        let t4 = pi.pow(4) / 90u32;
        assert!(Float::with_val(PREC, &z4 - &t4).abs().to_f64() < 1e-70);
    }

    #[test]
    fn zeta_three_against_doubled_order() {
        // Independent rerun at doubled cutoff and order.
        let s = real(3);
        let a = zeta_real(&s).unwrap();
        let b = zeta_euler_maclaurin(&s, 128, 48);
        assert!(Float::with_val(PREC, &a - &b).abs().to_f64() < 1e-70);
        assert!((a.to_f64() - 1.2020569032).abs() < 1e-9);
    }

    #[test]
    fn zeta_rejects_bad_arguments() {
        assert!(zeta_real(&real(0)).is_err());
        assert!(zeta_real(&real(-2)).is_err());
        assert!(zeta_real(&real(1.0005)).is_err());
        assert!(zeta_real(&real(0.9995)).is_err());
        assert!(zeta_real(&real(1.002)).is_ok());
    }

    #[test]
    fn zeta_continues_left_of_one() {
        // Consistency of the continuation: doubled parameters agree.
        for s in [0.55f64, 0.66, 0.9] {
            let a = zeta_real(&real(s)).unwrap();
            let b = zeta_euler_maclaurin(&real(s), 160, 40);
            assert!(Float::with_val(PREC, &a - &b).abs().to_f64() < 1e-65, "s={s}");
        }
    }

    /// Richardson-style oracle: fit a(N) = c + c10 L/N + c11/N + c20 L^2/N^2
    /// + c21 L/N^2 + c22/N^2 at six doubling N and read off the constant.
    fn richardson_limit(values: &[(u32, Float)]) -> Float {
        let n = 6;
        assert_eq!(values.len(), n);
        let mut m: Vec<Vec<Float>> = values
            .iter()
            .map(|(big_n, a)| {
                let nf = real(*big_n);
                let l = nf.clone().ln();
                vec![
                    real(1),
                    Float::with_val(PREC, &l / &nf),
                    nf.clone().recip(),
                    Float::with_val(PREC, &l * &l) / Float::with_val(PREC, &nf * &nf),
                    Float::with_val(PREC, &l / &nf) / &nf,
                    Float::with_val(PREC, &nf * &nf).recip(),
                    a.clone(),
                ]
            })
            .collect();
        for c in 0..n {
            let piv = (c..n)
                .max_by(|&a, &b| {
                    m[a][c].clone().abs().partial_cmp(&m[b][c].clone().abs()).unwrap()
                })
                .unwrap();
            m.swap(c, piv);
            for r in 0..n {
                if r != c {
                    let f = Float::with_val(PREC, &m[r][c] / &m[c][c]);
                    for j in c..=n {
                        let t = Float::with_val(PREC, &f * &m[c][j]);
                        m[r][j] -= t;
                    }
                }
            }
        }
        Float::with_val(PREC, &m[0][n] / &m[0][0])
    }

    #[test]
    fn gamma_matches_independent_limit_formula() {
        // a(N) = H_N - ln N -> gamma
        let vals: Vec<(u32, Float)> = (13..19)
            .map(|j| {
                let big_n = 1u32 << j;
                let mut s = zero();
                for k in 1..=big_n {
                    s += real(k).recip();
                }
                s -= real(big_n).ln();
                (big_n, s)
            })
            .collect();
        let oracle = richardson_limit(&vals);
        let gamma = euler_mascheroni();
        assert!((gamma.to_f64() - 0.5772156649).abs() < 1e-9);
        assert!(Float::with_val(PREC, &gamma - &oracle).abs().to_f64() < 1e-10);
    }

    #[test]
    fn gamma_one_matches_independent_limit_formula() {
        // a(N) = sum ln k / k - ln^2 N / 2 -> gamma_1
        let vals: Vec<(u32, Float)> = (13..19)
            .map(|j| {
                let big_n = 1u32 << j;
                let mut s = zero();
                for k in 2..=big_n {
                    s += real(k).ln() / real(k);
                }
                s -= real(big_n).ln().square() / 2u32;
                (big_n, s)
            })
            .collect();
        let oracle = richardson_limit(&vals);
        let g1 = stieltjes(1).unwrap();
        assert!(Float::with_val(PREC, &g1 - &oracle).abs().to_f64() < 1e-12);
        assert!((g1.to_f64() + 0.0728158454).abs() < 1e-9);
    }

    #[test]
    fn stieltjes_consistent_under_doubling() {
        for n in [0usize, 1, 5, 12] {
            let a = stieltjes(n).unwrap();
            let b = stieltjes_euler_maclaurin(n, 96, 44);
            assert!(Float::with_val(PREC, &a - &b).abs().to_f64() < 1e-60, "gamma_{n}");
        }
    }

    #[test]
    fn laurent_series_shape() {
        let z = zeta_laurent(4).unwrap();
        assert_eq!(z.lowest_order(), -1);
        assert_eq!(z.valid_through(), 4);
        assert!((z.coeff(-1).to_f64() - 1.0).abs() < 1e-75);
        assert!((z.coeff(0).to_f64() - 0.5772156649).abs() < 1e-9);
        // coefficient of u^1 is -gamma_1 = +0.0728158454...
        assert!((z.coeff(1).to_f64() - 0.0728158454).abs() < 1e-9);
        assert!(zeta_laurent(13).is_err());
    }

    #[test]
    fn laurent_times_reciprocal_is_one() {
        let z = zeta_laurent(8).unwrap();
        let inv = z.reciprocal().unwrap();
        let prod = z.mul(&inv);
        for o in prod.lowest_order()..=prod.valid_through() {
            let expect = if o == 0 { 1.0 } else { 0.0 };
            assert!((prod.coeff(o).to_f64() - expect).abs() < 1e-60, "order {o}");
        }
    }
}
