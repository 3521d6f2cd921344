//! Local factors and Euler products for the census Dirichlet series.
//!
//! Writing F(s;k) = sum_n g_k(n) n^{-ks}, each local factor is the alpha-series
//! F_p(s;k) = sum_{a >= 0} g_k(p^a) p^{-kas}. Removing the divergent zeta
//! factors leaves h(p,s;k):
//!
//!   k = 2:  h = (1 - p^{-(2s-1)}) F_p(s;2)
//!   k = 3:  h = (1 - p^{-(6s-3)}) (1 - p^{-(3s-1)})^4 F_p(s;3)
//!
//! and H(s;k) = prod_p h(p,s;k) converges for s > 1/2. The series terms use
//! the exact coefficient identity g_k(p^a) = sum_{2j <= ka} (ka - 2j + 1)^2 p^j
//! (equivalent to the block sums of `census::local_block_sum`, and tested
//! against them); truncation is governed by the proven bound
//! g_k(p^a) <= (ka + 1)^3 p^{floor(ka/2)}.
//!
//! Everything here is evaluated at 256-bit precision. Products parallelize
//! over fixed-size prime chunks reduced strictly in order, so results do not
//! depend on the worker count.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;

use crate::census::{census_sieve, CensusWeightTable};
use crate::error::{Error, Result};
use crate::mp::{one, real, real_u128, zero, PREC};

/// Value of a truncated Euler product together with its truncation bounds.
///
/// `value` is the finite product over p <= prime_limit, with each local
/// alpha-series truncated once its rigorous tail bound drops below
/// tol * (current partial sum). `alpha_tail_bound` aggregates those series
/// tails; `prime_tail_bound` bounds the missing p > prime_limit factors via
/// the fitted-and-doubled local decay |h - 1| <= C p^{-decay}.
#[derive(Debug, Clone)]
pub struct EulerProductValue {
    pub value: Float,
    pub prime_limit: u64,
    pub alpha_tail_bound: Float,
    pub prime_tail_bound: Float,
    pub s: f64,
    pub k: u8,
}

fn check_k(k: u8) -> Result<()> {
    if k == 2 || k == 3 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("k must be 2 or 3, got {k}")))
    }
}

fn check_s(s: &Float, k: u8) -> Result<f64> {
    let sf = s.to_f64();
    if sf <= 0.5 {
        return Err(Error::InvalidArgument(format!(
            "local series for k={k} converges only for s > 1/2, got {sf}"
        )));
    }
    Ok(sf)
}

/// g_k(p^alpha) evaluated exactly in working precision via
/// sum_{2j <= k alpha} (k alpha - 2j + 1)^2 p^j. Terms are exact integers well
/// below 2^PREC for every (p, alpha) this crate reaches.
pub fn block_weight_mp(p: u64, alpha: u32, k: u8) -> Float {
    let n = k as u32 * alpha;
    let pf = real(p);
    let mut acc = zero();
    let mut pj = one();
    let mut j = 0u32;
    while 2 * j <= n {
        let w = (n - 2 * j + 1) as u64;
        acc += real(w * w) * &pj;
        pj *= &pf;
        j += 1;
    }
    acc
}

/// The alpha-series F_p(s;k) with rigorous truncation: stops once
/// tail <= tol * partial_sum. Returns (value, absolute tail bound).
pub fn local_factor_sum_with_tail(p: u64, s: &Float, k: u8, tol: f64) -> Result<(Float, Float)> {
    check_k(k)?;
    check_s(s, k)?;
    if tol <= 0.0 {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    let pf = real(p);
    // rho = p^{-ks}; q = p^{k(1/2 - s)} is the geometric tail ratio.
    let rho = pf.clone().pow(&-(Float::with_val(PREC, s * &real(k))));
    let q = Float::with_val(PREC, pf.clone().pow(&-(Float::with_val(PREC, s - &real(0.5)))).pow(k as u32));
    debug_assert!(q.to_f64() < 1.0);

    let mut partial = one(); // alpha = 0 term
    let mut rho_pow = one();
    let mut alpha = 0u32;
    loop {
        alpha += 1;
        if alpha > 100_000 {
            return Err(Error::NonConvergent(format!(
                "local factor sum at p={p}, s={}, k={k}",
                s.to_f64()
            )));
        }
        rho_pow *= &rho;
        partial += block_weight_mp(p, alpha, k) * &rho_pow;

        // Tail bound: sum_{b > alpha} (kb+1)^3 q^b <= t(alpha+1) / (1 - q r^3),
        // r the worst-case growth of the cubic factor.
        let t_next = {
            let kb = k as u32 * (alpha + 1);
            real((kb + 1) as u64).pow(3) * q.clone().pow(alpha + 1)
        };
        let r = (k as f64 * (alpha as f64 + 2.0) + 1.0) / (k as f64 * (alpha as f64 + 1.0) + 1.0);
        let qr3 = q.to_f64() * r.powi(3);
        if qr3 < 1.0 {
            let tail = t_next / real(1.0 - qr3);
            let thresh = Float::with_val(PREC, &partial * &real(tol));
            if tail < thresh {
                return Ok((partial, tail));
            }
        }
    }
}

/// The alpha-series value alone (see `local_factor_sum_with_tail`).
pub fn local_factor_sum(p: u64, s: &Float, k: u8, tol: f64) -> Result<Float> {
    local_factor_sum_with_tail(p, s, k, tol).map(|(v, _)| v)
}

/// Closed-form evaluation of the same local series, used as an independent
/// cross-check: with y = p^{-ks} and the partial-fraction data of the
/// generating function (1+x)/((1-px^2)(1-x)^3),
///
///   F_p(s;k) = k^2 a2 y(1+y)/(1-y)^3 + k a1 y/(1-y)^2 + a0/(1-y) + power part,
///
/// where the power part is d/(1-py) for k=2 and
/// d/(1-p^3 y^2) + e p y/(1-p^3 y^2) for k=3.
pub fn local_factor_sum_closed_form(p: u64, s: &Float, k: u8) -> Result<Float> {
    check_k(k)?;
    check_s(s, k)?;
    let pf = real(p);
    let pm1 = Float::with_val(PREC, &pf - &one());
    let pm1_2 = pm1.clone().square();
    let pm1_3 = Float::with_val(PREC, &pm1_2 * &pm1);
    let p2 = pf.clone().square();

    let a2 = -pm1.clone().recip();
    let a1 = -real(2) * (Float::with_val(PREC, real(3) * &pf) - real(1)) / &pm1_2;
    let a0 = -(real(9) * &p2 - real(2) * &pf + real(1)) / &pm1_3;
    let d = pf.clone() * (p2.clone() + real(6) * &pf + real(1)) / &pm1_3;
    let e = real(4) * &p2 * Float::with_val(PREC, &pf + &one()) / &pm1_3;

    let y = pf.clone().pow(&-(Float::with_val(PREC, s * &real(k))));
    let omy = Float::with_val(PREC, &one() - &y);
    let kf = real(k);
    let quad = Float::with_val(PREC, &kf * &kf) * &a2 * &y * Float::with_val(PREC, &one() + &y)
        / omy.clone().pow(3)
        + kf.clone() * &a1 * &y / omy.clone().square()
        + a0.clone() / &omy;
    let power_part = if k == 2 {
        let den = Float::with_val(PREC, &one() - &Float::with_val(PREC, &pf * &y));
        d / den
    } else {
        let w2 = pf.clone().pow(3) * y.clone().square();
        let den = Float::with_val(PREC, &one() - &w2);
        d / &den + e * &pf * &y / &den
    };
    Ok(quad + power_part)
}

/// Local Euler factor h(p, s; k): the alpha-series with its zeta pieces removed.
pub fn h_local(p: u64, s: &Float, k: u8, tol: f64) -> Result<Float> {
    let (sum, _) = local_factor_sum_with_tail(p, s, k, tol)?;
    Ok(removal_factor(p, s, k) * sum)
}

fn removal_factor(p: u64, s: &Float, k: u8) -> Float {
    let pf = real(p);
    let rho = pf.clone().pow(&-(Float::with_val(PREC, s * &real(k)))); // p^{-ks}
    if k == 2 {
        // 1 - p^{-(2s-1)} = 1 - p * rho
        Float::with_val(PREC, &one() - &Float::with_val(PREC, &pf * &rho))
    } else {
        // (1 - p^{-(6s-3)}) (1 - p^{-(3s-1)})^4 = (1 - p^3 rho^2)(1 - p rho)^4
        let f1 = Float::with_val(
            PREC,
            &one() - &Float::with_val(PREC, pf.clone().pow(3) * rho.clone().square()),
        );
        let f2 = Float::with_val(PREC, &one() - &Float::with_val(PREC, &pf * &rho));
        f1 * f2.pow(4)
    }
}

fn primes_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2usize;
    while p * p <= n {
        if sieve[p] {
            let mut m = p * p;
            while m <= n {
                sieve[m] = false;
                m += p;
            }
        }
        p += 1;
    }
    (2..=n as u64).filter(|&i| sieve[i as usize]).collect()
}

/// H(s;k) as a truncated Euler product over p <= prime_limit.
///
/// The per-prime decay exponent used for the prime tail is 2s for k=2 and
/// min(3s, 6s-2) for k=3; C is fitted on p <= 10^4 and doubled.
pub fn euler_product_h(s: &Float, k: u8, prime_limit: u64, tol: f64) -> Result<EulerProductValue> {
    check_k(k)?;
    let sf = check_s(s, k)?;
    let primes = primes_to(prime_limit);

    struct ChunkOut {
        prod: Float,
        alpha_rel: Float, // sum of per-prime relative series tails
        fit_max: f64,     // max |h-1| p^decay over fit range
    }
    let decay = if k == 2 {
        2.0 * sf
    } else {
        (3.0 * sf).min(6.0 * sf - 2.0)
    };
    // Fit |h-1| p^decay on the upper decade of small primes, where the
    // asymptotic local shape already holds (tiny p would dominate the fit
    // and make the extrapolated bound uselessly loose).
    let fit_lo = if prime_limit >= 2_000 { 1_000 } else { 0 };

    let chunks: Vec<Result<ChunkOut>> = primes
        .par_chunks(4096)
        .map(|chunk| {
            let mut prod = one();
            let mut alpha_rel = zero();
            let mut fit_max = 0f64;
            for &p in chunk {
                let (sum, tail) = local_factor_sum_with_tail(p, s, k, tol)?;
                let h = removal_factor(p, s, k) * &sum;
                alpha_rel += tail / &sum;
                if p > fit_lo && p <= 10_000 {
                    let dev = Float::with_val(PREC, &h - &one()).abs().to_f64();
                    fit_max = fit_max.max(dev * (p as f64).powf(decay));
                }
                prod *= h;
            }
            Ok(ChunkOut { prod, alpha_rel, fit_max })
        })
        .collect();

    let mut value = one();
    let mut alpha_rel = zero();
    let mut fit_max = 0f64;
    for c in chunks {
        let c = c?;
        value *= c.prod;
        alpha_rel += c.alpha_rel;
        fit_max = fit_max.max(c.fit_max);
    }

    let alpha_tail_bound = Float::with_val(
        PREC,
        value.clone().abs() * (alpha_rel.exp() - one()),
    );
    let prime_tail_bound = if primes.is_empty() {
        zero()
    } else {
        // sum_{n > P} C n^{-decay} <= C P^{1-decay} / (decay - 1), C doubled.
        let c_fit = 2.0 * fit_max;
        let rel = c_fit * (prime_limit as f64).powf(1.0 - decay) / (decay - 1.0);
        Float::with_val(PREC, value.clone().abs() * (real(rel).exp() - one()))
    };
    Ok(EulerProductValue {
        value,
        prime_limit,
        alpha_tail_bound,
        prime_tail_bound,
        s: sf,
        k,
    })
}

/// Dirichlet coefficients h(n) of H(s;2) in the substituted variable w = 2s:
/// since F(s;2) = zeta(2s-1) H(s;2) and zeta(w-1) has coefficients id(n),
/// dividing out gives h = g_2 * (mu . id), i.e.
/// h(n) = sum_{d | n} mu(d) d g_2(n/d).
pub fn dirichlet_coeff_h(n_max: u64, table: &crate::arith::SpfTable) -> Result<Vec<i64>> {
    let weights = census_sieve(2, n_max, table)?;
    dirichlet_coeff_h_from_weights(&weights, table)
}

pub fn dirichlet_coeff_h_from_weights(
    weights: &CensusWeightTable,
    table: &crate::arith::SpfTable,
) -> Result<Vec<i64>> {
    if weights.k() != 2 {
        return Err(Error::InvalidArgument("dirichlet division is defined for k = 2".into()));
    }
    let n_max = weights.n_max() as usize;
    // mobius via spf factorization
    let mut mu = vec![0i8; n_max + 1];
    mu[1] = 1;
    for d in 2..=n_max {
        let f = table.factorize(d as u64)?;
        if f.factors().iter().all(|&(_, e)| e == 1) {
            mu[d] = if f.factors().len() % 2 == 0 { 1 } else { -1 };
        }
    }
    let mut h = vec![0i128; n_max + 1];
    for d in 1..=n_max {
        if mu[d] == 0 {
            continue;
        }
        let signed_d = mu[d] as i128 * d as i128;
        for m in 1..=n_max / d {
            h[d * m] += signed_d * weights.weight(m as u64)? as i128;
        }
    }
    h.into_iter()
        .map(|v| i64::try_from(v).map_err(|_| Error::Overflow("dirichlet_coeff_h")))
        .collect()
}

/// Partial sum of H(1;2) = sum_n h(n)/n^2 plus an octave-ratio tail estimate
/// (the measured ratio of the last two octave sums, continued geometrically;
/// a heuristic with the safety factor applied by callers).
pub fn dirichlet_h_sum(h: &[i64]) -> (Float, Float) {
    let n_max = h.len() - 1;
    let mut partial = zero();
    for (n, &hn) in h.iter().enumerate().skip(1) {
        partial += real(hn) / real_u128((n as u128) * (n as u128));
    }
    let octave = |lo: usize, hi: usize| -> Float {
        let mut s = zero();
        for n in lo.max(1)..=hi {
            s += real(h[n]) / real_u128((n as u128) * (n as u128));
        }
        s
    };
    let s_last = octave(n_max / 2 + 1, n_max);
    let s_prev = octave(n_max / 4 + 1, n_max / 2);
    let mut r = if s_prev.to_f64().abs() > 0.0 {
        (s_last.to_f64() / s_prev.to_f64()).abs()
    } else {
        0.8
    };
    // The ratio drifts slowly toward 1/2 from above; clamp defensively.
    if !(0.05..=0.92).contains(&r) {
        r = 0.8;
    }
    let tail = Float::with_val(PREC, s_last.abs() * real(r / (1.0 - r)));
    (partial, tail)
}
