//! Exact integer kernel: smallest-prime-factor sieve, factorizations, the divisor
//! and totient functions, and the subgroup-count function s(m1, m2) of
//! Z_m1 x Z_m2 in three independent realizations:
//!
//! * `subgroup_count` — the totient/divisor form sum_{d | gcd(m1,m2)} phi(d) tau(m1/d) tau(m2/d)
//! * `subgroup_count_gcd_form` — the double divisor sum sum_{d|m1, e|m2} gcd(d, e)
//! * `subgroup_enumeration_oracle` — literal enumeration of subgroups by closing
//!   generator pairs (small orders only)
//!
//! All counts use exact 128-bit accumulators; overflow is an error, never a wrap.

use crate::error::{Error, Result};

/// Smallest-prime-factor table for every n in `2..=limit`.
///
/// Memory is 4 bytes per entry; the practical ceiling is around 1e8
/// (400 MB). All lookups after construction are read-only and thread-safe.
pub struct SpfTable {
    limit: u64,
    spf: Vec<u32>,
}

impl SpfTable {
    /// Builds the table with a classic sieve.
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidArgument(format!(
                "spf table limit must be >= 2, got {limit}"
            )));
        }
        if limit >= u32::MAX as u64 {
            return Err(Error::InvalidArgument(format!(
                "spf table limit {limit} exceeds the u32 entry range"
            )));
        }
        let n = limit as usize;
        let mut spf: Vec<u32> = (0..=n as u64).map(|i| i as u32).collect();
        let mut p = 2usize;
        while p * p <= n {
            if spf[p] == p as u32 {
                let mut m = p * p;
                while m <= n {
                    if spf[m] == m as u32 {
                        spf[m] = p as u32;
                    }
                    m += p;
                }
            }
            p += 1;
        }
        Ok(Self { limit, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `n` (2 <= n <= limit).
    pub fn smallest_prime_factor(&self, n: u64) -> Result<u64> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("spf({n}) is undefined")));
        }
        if n > self.limit {
            return Err(Error::OutOfRange(format!("{n} > table limit {}", self.limit)));
        }
        Ok(self.spf[n as usize] as u64)
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.spf[n as usize] as u64 == n
    }

    /// Factorizes `1 <= n <= limit` into ascending (prime, exponent) pairs.
    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 {
            return Err(Error::InvalidArgument("cannot factorize 0".into()));
        }
        if n > self.limit {
            return Err(Error::OutOfRange(format!("{n} > table limit {}", self.limit)));
        }
        let mut factors = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p as u64, e));
        }
        Ok(Factorization { factors })
    }
}

/// A factorization n = prod p_i^{e_i} with primes strictly ascending and every
/// exponent >= 1. The empty list represents 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Self { factors: Vec::new() }
    }

    /// Wraps a prepared factor list, checking the ordering/exponent invariants.
    /// Primality of the bases is the caller's responsibility.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        for w in factors.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidArgument(
                    "factor primes must be strictly increasing".into(),
                ));
            }
        }
        if factors.iter().any(|&(p, e)| p < 2 || e == 0) {
            return Err(Error::InvalidArgument(
                "factors need prime >= 2 and exponent >= 1".into(),
            ));
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// The represented integer.
    pub fn value(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, &(p, e)| acc * (p as u128).pow(e))
    }
}

/// Number of divisors tau(n) = prod (e_i + 1).
pub fn tau(f: &Factorization) -> u64 {
    f.factors.iter().map(|&(_, e)| e as u64 + 1).product()
}

/// Euler's totient phi(n) = prod p^{e-1} (p - 1).
pub fn phi(f: &Factorization) -> u64 {
    f.factors
        .iter()
        .map(|&(p, e)| p.pow(e - 1) * (p - 1))
        .product()
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// All divisors of the factorized integer, in mixed-radix order.
pub fn divisors(f: &Factorization) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, e) in &f.factors {
        let prior = out.len();
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            for i in 0..prior {
                out.push(out[i] * pe);
            }
        }
    }
    out
}

/// Number of subgroups of Z_m1 x Z_m2 via the totient/divisor-function form
/// sum over d | gcd(m1, m2) of phi(d) tau(m1/d) tau(m2/d).
pub fn subgroup_count(m1: u64, m2: u64, table: &SpfTable) -> Result<u128> {
    if m1 == 0 || m2 == 0 {
        return Err(Error::InvalidArgument("moduli must be >= 1".into()));
    }
    if m1 > table.limit() || m2 > table.limit() {
        return Err(Error::OutOfRange(format!(
            "({m1}, {m2}) exceeds table limit {}",
            table.limit()
        )));
    }
    let g = gcd(m1, m2);
    let fg = table.factorize(g)?;
    // Walk divisors d of g together with phi(d).
    let mut stack = vec![(0usize, 1u64, 1u64)]; // (factor index, d, phi(d))
    let mut acc: u128 = 0;
    while let Some((i, d, phi_d)) = stack.pop() {
        if i == fg.factors().len() {
            let t1 = tau(&table.factorize(m1 / d)?) as u128;
            let t2 = tau(&table.factorize(m2 / d)?) as u128;
            let term = (phi_d as u128)
                .checked_mul(t1)
                .and_then(|v| v.checked_mul(t2))
                .ok_or(Error::Overflow("subgroup_count"))?;
            acc = acc.checked_add(term).ok_or(Error::Overflow("subgroup_count"))?;
            continue;
        }
        let (p, e) = fg.factors()[i];
        stack.push((i + 1, d, phi_d)); // exponent 0
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            let phi_pe = pe / p * (p - 1);
            stack.push((i + 1, d * pe, phi_d * phi_pe));
        }
    }
    Ok(acc)
}

/// The same count via the double divisor sum sum_{d|m1, e|m2} gcd(d, e);
/// retained as an independent cross-check of `subgroup_count`.
pub fn subgroup_count_gcd_form(m1: u64, m2: u64, table: &SpfTable) -> Result<u128> {
    if m1 == 0 || m2 == 0 {
        return Err(Error::InvalidArgument("moduli must be >= 1".into()));
    }
    if m1 > table.limit() || m2 > table.limit() {
        return Err(Error::OutOfRange(format!(
            "({m1}, {m2}) exceeds table limit {}",
            table.limit()
        )));
    }
    let d1 = divisors(&table.factorize(m1)?);
    let d2 = divisors(&table.factorize(m2)?);
    let mut acc: u128 = 0;
    for &a in &d1 {
        for &b in &d2 {
            acc = acc
                .checked_add(gcd(a, b) as u128)
                .ok_or(Error::Overflow("subgroup_count_gcd_form"))?;
        }
    }
    Ok(acc)
}

/// s(p^u, p^v) exactly, via the closed form (for u <= v)
///
///   s(p^u, p^v) = (v - u + 1) p^u + sum_{j < u} (u + v + 1 - 2j) p^j,
///
/// which is the O(u)-term evaluation of sum_{u1 <= u, u2 <= v} p^{min(u1, u2)}.
/// Symmetric in (u, v); overflow of the 128-bit accumulator is an error.
pub fn subgroup_count_prime_power(p: u64, u: u32, v: u32) -> Result<u128> {
    let (u, v) = if u <= v { (u, v) } else { (v, u) };
    let p = p as u128;
    let mut acc: u128 = 0;
    let mut pj: u128 = 1;
    for j in 0..u {
        let w = (u + v + 1 - 2 * j) as u128;
        acc = w
            .checked_mul(pj)
            .and_then(|t| acc.checked_add(t))
            .ok_or(Error::Overflow("subgroup_count_prime_power"))?;
        pj = pj.checked_mul(p).ok_or(Error::Overflow("subgroup_count_prime_power"))?;
    }
    let top = ((v - u + 1) as u128)
        .checked_mul(pj)
        .ok_or(Error::Overflow("subgroup_count_prime_power"))?;
    acc.checked_add(top).ok_or(Error::Overflow("subgroup_count_prime_power"))
}

/// Counts subgroups of Z_m1 x Z_m2 by brute enumeration: every subgroup of a
/// rank-2 abelian group is generated by at most two elements, so the closures
/// of all generator pairs, deduplicated, are exactly the subgroups.
///
/// Cost grows as (m1 m2)^2 closures; refuses m1 * m2 > 200.
pub fn subgroup_enumeration_oracle(m1: u64, m2: u64) -> Result<u64> {
    if m1 == 0 || m2 == 0 {
        return Err(Error::InvalidArgument("moduli must be >= 1".into()));
    }
    let order = m1.checked_mul(m2).ok_or(Error::Overflow("enumeration order"))?;
    if order > 200 {
        return Err(Error::Refused(format!(
            "enumeration over Z_{m1} x Z_{m2} has order {order} > 200"
        )));
    }
    let (m1, m2, order) = (m1 as usize, m2 as usize, order as usize);
    let words = order.div_ceil(64);
    let elem_order = |a: usize, b: usize| -> usize {
        let oa = m1 / gcd(a as u64, m1 as u64) as usize;
        let ob = m2 / gcd(b as u64, m2 as u64) as usize;
        oa / gcd(oa as u64, ob as u64) as usize * ob
    };

    let mut seen = std::collections::HashSet::new();
    for g1 in 0..order {
        let (a1, b1) = (g1 / m2, g1 % m2);
        let o1 = elem_order(a1, b1);
        for g2 in g1..order {
            let (a2, b2) = (g2 / m2, g2 % m2);
            let o2 = elem_order(a2, b2);
            // The subgroup <g1, g2> is the sumset of the two cyclic subgroups.
            let mut bits = vec![0u64; words];
            let (mut x1, mut y1) = (0usize, 0usize);
            for _ in 0..o1 {
                let (mut x, mut y) = (x1, y1);
                for _ in 0..o2 {
                    let idx = x * m2 + y;
                    bits[idx / 64] |= 1u64 << (idx % 64);
                    x = (x + a2) % m1;
                    y = (y + b2) % m2;
                }
                x1 = (x1 + a1) % m1;
                y1 = (y1 + b1) % m2;
            }
            seen.insert(bits);
        }
    }
    Ok(seen.len() as u64)
}
