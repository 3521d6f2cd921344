//! Census of s(m1, m2) over pairs whose product is a perfect k-th power.
//!
//! The census weight of n is g_k(n) = sum_{m1 m2 = n^k} s(m1, m2); it is
//! multiplicative in n with prime-power values given by the local block sums
//! g_k(p^a) = sum_{u+v = k a} s(p^u, p^v). The restricted summatory function is
//! then T_k(x) = sum_{n <= floor(x^{1/k})} g_k(n).
//!
//! Weights are sieved linearly through the smallest-prime-factor table, or in
//! fixed-size segments with a worker pool for large ranges; either way every
//! accumulator is an exact integer and reductions happen in a fixed order, so
//! results are identical across reruns and worker counts.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{subgroup_count, subgroup_count_prime_power, Factorization, SpfTable};
use crate::error::{Error, Result};

/// Default segment length for the segmented sieve.
pub const DEFAULT_BLOCK_SIZE: usize = 1 << 22;

fn check_k(k: u8) -> Result<()> {
    if k == 2 || k == 3 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("k must be 2 or 3, got {k}")))
    }
}

/// g_k(p^alpha) = sum_{u+v = k*alpha} s(p^u, p^v), exactly.
pub fn local_block_sum(p: u64, alpha: u32, k: u8) -> Result<u128> {
    check_k(k)?;
    let n = k as u32 * alpha;
    let mut acc: u128 = 0;
    for u in 0..=n {
        acc = acc
            .checked_add(subgroup_count_prime_power(p, u, n - u)?)
            .ok_or(Error::Overflow("local_block_sum"))?;
    }
    Ok(acc)
}

/// g_k(n) from a factorization, by multiplicativity over prime powers.
pub fn census_weight(f: &Factorization, k: u8) -> Result<u128> {
    check_k(k)?;
    let mut acc: u128 = 1;
    for &(p, e) in f.factors() {
        acc = acc
            .checked_mul(local_block_sum(p, e, k)?)
            .ok_or(Error::Overflow("census_weight"))?;
    }
    Ok(acc)
}

/// Table of census weights g_k(n) for 1 <= n <= n_max.
#[derive(Debug)]
pub struct CensusWeightTable {
    k: u8,
    n_max: u64,
    weights: Vec<u64>, // index n; entry 0 unused
}

impl CensusWeightTable {
    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn weight(&self, n: u64) -> Result<u64> {
        if n == 0 || n > self.n_max {
            return Err(Error::OutOfRange(format!("weight index {n} not in 1..={}", self.n_max)));
        }
        Ok(self.weights[n as usize])
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }
}

fn weight_to_u64(w: u128, what: &'static str) -> Result<u64> {
    u64::try_from(w).map_err(|_| Error::Overflow(what))
}

/// Sieves g_k(n) for all n <= n_max with the smallest-prime-factor recursion
/// g(n) = g(n / p^e) * g(p^e); prime-power values come from `local_block_sum`.
pub fn census_sieve(k: u8, n_max: u64, table: &SpfTable) -> Result<CensusWeightTable> {
    check_k(k)?;
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be >= 1".into()));
    }
    if n_max > table.limit() {
        return Err(Error::OutOfRange(format!(
            "n_max {n_max} > spf table limit {}",
            table.limit()
        )));
    }
    let n = n_max as usize;
    let mut w = vec![0u64; n + 1];
    w[1] = 1;
    for m in 2..=n {
        let p = table.smallest_prime_factor(m as u64)? as usize;
        let mut rest = m;
        let mut e = 0u32;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        w[m] = if rest == 1 {
            weight_to_u64(local_block_sum(p as u64, e, k)?, "census_sieve")?
        } else {
            // rest < m and p^e < m are both already sieved.
            let pe = m / rest;
            w[rest]
                .checked_mul(w[pe])
                .ok_or(Error::Overflow("census_sieve"))?
        };
    }
    Ok(CensusWeightTable { k, n_max, weights: w })
}

/// Largest n with n^k <= x. Exact integer arithmetic at the boundaries.
pub fn integer_kth_root(x: u64, k: u8) -> u64 {
    debug_assert!(k == 2 || k == 3);
    if x == 0 {
        return 0;
    }
    let pow = |r: u64| -> u128 { (r as u128).pow(k as u32) };
    let mut r = (x as f64).powf(1.0 / k as f64) as u64;
    r = r.saturating_sub(2);
    while pow(r + 1) <= x as u128 {
        r += 1;
    }
    r
}

/// T_k(x) = sum_{n <= floor(x^{1/k})} g_k(n) from a sieved weight table.
pub fn t_k(x: u64, weights: &CensusWeightTable) -> Result<u128> {
    let r = integer_kth_root(x, weights.k);
    if r > weights.n_max {
        return Err(Error::OutOfRange(format!(
            "x^(1/{}) = {r} exceeds sieved range {}",
            weights.k, weights.n_max
        )));
    }
    let mut acc: u128 = 0;
    for n in 1..=r as usize {
        acc += weights.weights[n] as u128;
    }
    Ok(acc)
}

/// T_k at many points in one pass over the weight table. `xs` need not be sorted.
pub fn t_k_many(xs: &[u64], weights: &CensusWeightTable) -> Result<Vec<u128>> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by_key(|&i| xs[i]);
    let mut out = vec![0u128; xs.len()];
    let mut acc: u128 = 0;
    let mut n: u64 = 0;
    for &i in &order {
        let r = integer_kth_root(xs[i], weights.k);
        if r > weights.n_max {
            return Err(Error::OutOfRange(format!(
                "x^(1/{}) = {r} exceeds sieved range {}",
                weights.k, weights.n_max
            )));
        }
        while n < r {
            n += 1;
            acc += weights.weights[n as usize] as u128;
        }
        out[i] = acc;
    }
    Ok(out)
}

/// Brute-force oracle: double loop over all (m1, m2) with m1 m2 <= x summing
/// s(m1, m2) whenever m1 m2 is a perfect k-th power. Refuses x > 10^6.
pub fn t_k_bruteforce(x: u64, k: u8, table: &SpfTable) -> Result<u128> {
    check_k(k)?;
    if x > 1_000_000 {
        return Err(Error::Refused(format!("brute force capped at x <= 1e6, got {x}")));
    }
    let is_pow = kth_power_marks(x, k);
    let mut acc: u128 = 0;
    for m1 in 1..=x {
        for m2 in 1..=x / m1 {
            let n = m1 * m2;
            if is_pow[n as usize] {
                acc = acc
                    .checked_add(subgroup_count(m1, m2, table)?)
                    .ok_or(Error::Overflow("t_k_bruteforce"))?;
            }
        }
    }
    Ok(acc)
}

/// Brute-force census as a step function: the same double loop as
/// `t_k_bruteforce`, bucketed by the product N = m1 m2. Returns (N, jump)
/// pairs in ascending N; the prefix sums equal t_k_bruteforce at every x.
pub fn t_k_bruteforce_steps(x_max: u64, k: u8, table: &SpfTable) -> Result<Vec<(u64, u128)>> {
    check_k(k)?;
    if x_max > 1_000_000 {
        return Err(Error::Refused(format!("brute force capped at x <= 1e6, got {x_max}")));
    }
    let is_pow = kth_power_marks(x_max, k);
    let m1s: Vec<u64> = (1..=x_max).collect();
    let buckets = m1s
        .par_chunks(4096)
        .map(|chunk| {
            let mut local: HashMap<u64, u128> = HashMap::new();
            for &m1 in chunk {
                for m2 in 1..=x_max / m1 {
                    let n = m1 * m2;
                    if is_pow[n as usize] {
                        *local.entry(n).or_insert(0) += subgroup_count(m1, m2, table)?;
                    }
                }
            }
            Ok(local)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut merged: HashMap<u64, u128> = HashMap::new();
    for b in buckets {
        for (n, v) in b {
            *merged.entry(n).or_insert(0) += v;
        }
    }
    let mut steps: Vec<(u64, u128)> = merged.into_iter().collect();
    steps.sort_unstable();
    Ok(steps)
}

fn kth_power_marks(x: u64, k: u8) -> Vec<bool> {
    let mut marks = vec![false; x as usize + 1];
    let mut n = 1u64;
    loop {
        let nk = (n as u128).pow(k as u32);
        if nk > x as u128 {
            break;
        }
        marks[nk as usize] = true;
        n += 1;
    }
    marks
}

/// One census checkpoint: exact T_k(x) plus main-term prediction and residual
/// (populated by the validation pipelines; zero when no constants are known).
#[derive(Debug, Clone, Serialize)]
pub struct CensusCheckpoint {
    pub x: u64,
    pub t_value: u128,
    pub main_term: f64,
    pub residual: f64,
}

/// T_k at each checkpoint via a segmented sieve: segments of `block` integers
/// are factor-sieved in parallel, then reduced strictly in segment order.
pub fn t_k_streamed(k: u8, xs: &[u64], block: usize, table_hint: Option<&SpfTable>) -> Result<Vec<u128>> {
    check_k(k)?;
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    let block = block.max(1 << 12);
    let n_limit = xs.iter().map(|&x| integer_kth_root(x, k)).max().unwrap().max(1);

    // Primes up to sqrt(n_limit) drive the segment factorization.
    let sqrt_limit = integer_kth_root(n_limit, 2).max(2);
    let own_table;
    let small = match table_hint {
        Some(t) if t.limit() >= sqrt_limit => t,
        _ => {
            own_table = SpfTable::new(sqrt_limit)?;
            &own_table
        }
    };
    let primes: Vec<u64> = (2..=sqrt_limit).filter(|&p| small.is_prime(p)).collect();

    // Memoize g_k(p^e) for every sieving prime power p^e <= n_limit.
    let mut memo: HashMap<(u64, u32), u128> = HashMap::new();
    for &p in &primes {
        let mut pe = p as u128;
        let mut e = 1u32;
        while pe <= n_limit as u128 {
            memo.insert((p, e), local_block_sum(p, e, k)?);
            pe *= p as u128;
            e += 1;
        }
    }
    // Large residual primes q > sqrt(n_limit) contribute g_k(q) =
    // sum_{2j <= k} (k - 2j + 1)^2 q^j (see the per-prime coefficient identity).
    let g_large_prime = |q: u64| -> u128 {
        let q = q as u128;
        match k {
            2 => q + 9,
            _ => 4 * q + 16,
        }
    };

    // Sorted thresholds r_i = floor(x_i^{1/k}) with their output slots.
    let mut thresholds: Vec<(u64, usize)> = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| (integer_kth_root(x, k), i))
        .collect();
    thresholds.sort_unstable();

    let n_segments = (n_limit as usize).div_ceil(block);
    struct SegmentOut {
        total: u128,
        // (threshold position in `thresholds`, prefix sum within segment up to it)
        crossings: Vec<(usize, u128)>,
    }

    let segments: Vec<Result<SegmentOut>> = (0..n_segments)
        .into_par_iter()
        .map(|si| {
            let lo = (si * block + 1) as u64; // segment covers lo..=hi
            let hi = (((si + 1) * block) as u64).min(n_limit);
            let len = (hi - lo + 1) as usize;
            let mut residual: Vec<u64> = (lo..=hi).collect();
            let mut weight: Vec<u128> = vec![1; len];
            for &p in &primes {
                if p * p > hi {
                    break;
                }
                let mut m = lo.div_ceil(p) * p;
                while m <= hi {
                    let idx = (m - lo) as usize;
                    let mut e = 0u32;
                    while residual[idx] % p == 0 {
                        residual[idx] /= p;
                        e += 1;
                    }
                    weight[idx] = weight[idx]
                        .checked_mul(memo[&(p, e)])
                        .ok_or(Error::Overflow("t_k_streamed"))?;
                    m += p;
                }
            }
            for i in 0..len {
                let q = residual[i];
                if q > 1 {
                    weight[i] = weight[i]
                        .checked_mul(g_large_prime(q))
                        .ok_or(Error::Overflow("t_k_streamed"))?;
                }
            }
            if lo == 1 {
                weight[0] = 1; // g_k(1) = 1
            }
            // Prefix sums at thresholds inside this segment.
            let mut crossings = Vec::new();
            let lo_idx = thresholds.partition_point(|&(r, _)| r < lo);
            let hi_idx = thresholds.partition_point(|&(r, _)| r <= hi);
            let mut acc: u128 = 0;
            let mut pos = lo;
            for t in lo_idx..hi_idx {
                let (r, slot) = thresholds[t];
                while pos <= r {
                    acc = acc
                        .checked_add(weight[(pos - lo) as usize])
                        .ok_or(Error::Overflow("t_k_streamed"))?;
                    pos += 1;
                }
                crossings.push((slot, acc));
            }
            while pos <= hi {
                acc = acc
                    .checked_add(weight[(pos - lo) as usize])
                    .ok_or(Error::Overflow("t_k_streamed"))?;
                pos += 1;
            }
            Ok(SegmentOut { total: acc, crossings })
        })
        .collect();

    // Deterministic sequential reduction in segment order.
    let mut out = vec![0u128; xs.len()];
    let mut running: u128 = 0;
    for seg in segments {
        let seg = seg?;
        for (slot, prefix) in seg.crossings {
            out[slot] = running
                .checked_add(prefix)
                .ok_or(Error::Overflow("t_k_streamed"))?;
        }
        running = running.checked_add(seg.total).ok_or(Error::Overflow("t_k_streamed"))?;
    }
    // Thresholds of 0 (x < 1) would be missed above; they cannot occur since x >= 1.
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(limit: u64) -> SpfTable {
        SpfTable::new(limit).unwrap()
    }

    /// Term-by-term oracle straight from the arith kernel.
    fn block_sum_oracle(p: u64, alpha: u32, k: u8) -> u128 {
        let n = k as u32 * alpha;
        (0..=n)
            .map(|u| subgroup_count_prime_power(p, u, n - u).unwrap())
            .sum()
    }

    #[test]
    fn local_block_sum_examples() {
        for p in [2u64, 3, 101] {
            for k in [2u8, 3] {
                assert_eq!(local_block_sum(p, 0, k).unwrap(), 1);
            }
        }
        // s(1,4) + s(2,2) + s(4,1) = 3 + 5 + 3
        assert_eq!(local_block_sum(2, 1, 2).unwrap(), 11);
        // s(1,8) + s(2,4) + s(4,2) + s(8,1) = 4 + 8 + 8 + 4
        assert_eq!(local_block_sum(2, 1, 3).unwrap(), 24);
        assert!(local_block_sum(2, 1, 4).is_err());
    }

    #[test]
    fn local_block_sum_matches_term_oracle() {
        for p in [2u64, 3, 5, 7] {
            for k in [2u8, 3] {
                for alpha in 0..=8 {
                    assert_eq!(
                        local_block_sum(p, alpha, k).unwrap(),
                        block_sum_oracle(p, alpha, k),
                        "p={p} alpha={alpha} k={k}"
                    );
                }
            }
        }
    }

    /// The rigorous truncation bound used by the Euler-product evaluation:
    /// g_k(p^alpha) <= (k alpha + 1)^3 p^{floor(k alpha / 2)}, checked on all
    /// p <= 7, alpha <= 10 (and both k) before any series code trusts it.
    #[test]
    fn local_block_sum_tail_bound_holds() {
        for p in [2u64, 3, 5, 7] {
            for k in [2u8, 3] {
                for alpha in 0..=10u32 {
                    let n = k as u32 * alpha;
                    let bound = ((n + 1) as u128).pow(3) * (p as u128).pow(n / 2);
                    let value = local_block_sum(p, alpha, k).unwrap();
                    assert!(value <= bound, "bound fails at p={p} k={k} alpha={alpha}");
                }
            }
        }
    }

    /// Odd/even split of the k=3 block sums around the central terms.
    #[test]
    fn k3_block_sum_decomposition() {
        let s = |p, u, v| subgroup_count_prime_power(p, u, v).unwrap();
        for p in [2u64, 3, 5] {
            for alpha in 1..=7u32 {
                let n = 3 * alpha;
                let total = local_block_sum(p, alpha, 3).unwrap();
                if alpha % 2 == 1 {
                    // 2 s(p^{(3a-1)/2}, p^{(3a+1)/2}) + 2 sum_{u < (3a-1)/2} s(p^u, p^{3a-u})
                    let mid = 2 * s(p, (n - 1) / 2, (n + 1) / 2);
                    let rest: u128 = (0..(n - 1) / 2).map(|u| 2 * s(p, u, n - u)).sum();
                    assert_eq!(total, mid + rest, "odd split p={p} alpha={alpha}");
                } else {
                    let mid = s(p, n / 2, n / 2);
                    let rest: u128 = (0..n / 2).map(|u| 2 * s(p, u, n - u)).sum();
                    assert_eq!(total, mid + rest, "even split p={p} alpha={alpha}");
                }
            }
        }
    }

    /// Leading terms: g_3(p^a) / p^{floor(3a/2)} -> 4 (odd a) and -> 1 (even a)
    /// as p grows at fixed a.
    #[test]
    fn k3_block_sum_leading_terms() {
        for alpha in [1u32, 3, 5] {
            for p in [101u64, 1009, 10007] {
                let v = local_block_sum(p, alpha, 3).unwrap() as f64;
                let scale = (p as f64).powi((3 * alpha / 2) as i32);
                assert!(
                    (v / scale - 4.0).abs() < 40.0 / p as f64,
                    "odd alpha={alpha} p={p}: {}",
                    v / scale
                );
            }
        }
        for alpha in [2u32, 4] {
            for p in [101u64, 1009, 10007] {
                let v = local_block_sum(p, alpha, 3).unwrap() as f64;
                let scale = (p as f64).powi((3 * alpha / 2) as i32);
                assert!(
                    (v / scale - 1.0).abs() < 40.0 / p as f64,
                    "even alpha={alpha} p={p}: {}",
                    v / scale
                );
            }
        }
    }

    #[test]
    fn census_weight_examples() {
        let t = table(100);
        assert_eq!(census_weight(&t.factorize(1).unwrap(), 2).unwrap(), 1);
        assert_eq!(census_weight(&t.factorize(2).unwrap(), 2).unwrap(), 11);
        // g_2(6) = g_2(2) g_2(3) = 11 * 12
        assert_eq!(census_weight(&t.factorize(6).unwrap(), 2).unwrap(), 132);
        assert_eq!(local_block_sum(3, 1, 2).unwrap(), 12);
    }

    #[test]
    fn census_sieve_examples_and_consistency() {
        let t = table(4000);
        let w2 = census_sieve(2, 4, &t).unwrap();
        assert_eq!(
            (1..=4).map(|n| w2.weight(n).unwrap()).collect::<Vec<_>>(),
            vec![1, 11, 12, 47]
        );
        let w3 = census_sieve(3, 2, &t).unwrap();
        assert_eq!(
            (1..=2).map(|n| w3.weight(n).unwrap()).collect::<Vec<_>>(),
            vec![1, 24]
        );
        for k in [2u8, 3] {
            let w = census_sieve(k, 4000, &t).unwrap();
            assert_eq!(w.weight(1).unwrap(), 1);
            for n in 1..=4000u64 {
                assert!(w.weight(n).unwrap() >= 1, "weights are >= 1");
            }
            // Spot-check against direct multiplicative evaluation.
            for n in (1..=4000u64).step_by(37) {
                let direct = census_weight(&t.factorize(n).unwrap(), k).unwrap();
                assert_eq!(w.weight(n).unwrap() as u128, direct, "n={n} k={k}");
            }
        }
    }

    /// Trial-division factorizer, independent of the spf table machinery.
    fn factorize_trial(mut n: u64) -> Factorization {
        let mut fs = Vec::new();
        let mut p = 2u64;
        while p * p <= n {
            if n % p == 0 {
                let mut e = 0;
                while n % p == 0 {
                    n /= p;
                    e += 1;
                }
                fs.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            fs.push((n, 1));
        }
        Factorization::from_factors(fs).unwrap()
    }

    #[test]
    fn census_weight_multiplicative_random_pairs() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let t = table(10_000);
        let tables: Vec<CensusWeightTable> =
            [2u8, 3].iter().map(|&k| census_sieve(k, 10_000, &t).unwrap()).collect();
        let mut rng = StdRng::seed_from_u64(0x5eed);
        let mut tested = 0;
        while tested < 1000 {
            let m = rng.gen_range(1..=10_000u64);
            let n = rng.gen_range(1..=10_000u64);
            if crate::arith::gcd(m, n) != 1 {
                continue;
            }
            for w in &tables {
                let gm = w.weight(m).unwrap() as u128;
                let gn = w.weight(n).unwrap() as u128;
                let gmn = census_weight(&factorize_trial(m * n), w.k()).unwrap();
                assert_eq!(gmn, gm * gn, "m={m} n={n} k={}", w.k());
            }
            tested += 1;
        }
    }

    #[test]
    fn kth_root_examples_and_boundaries() {
        assert_eq!(integer_kth_root(8, 3), 2);
        assert_eq!(integer_kth_root(7, 3), 1);
        assert_eq!(integer_kth_root(1_000_000_000_000_000_000, 3), 1_000_000);
        assert_eq!(integer_kth_root(1, 2), 1);
        for n in 1..2000u64 {
            for k in [2u8, 3] {
                let nk = (n as u128).pow(k as u32);
                if nk <= u64::MAX as u128 {
                    assert_eq!(integer_kth_root(nk as u64, k), n);
                    assert_eq!(integer_kth_root(nk as u64 - 1, k), n - 1);
                }
            }
        }
    }

    #[test]
    fn t_k_examples() {
        let t = table(1000);
        let w2 = census_sieve(2, 1000, &t).unwrap();
        let w3 = census_sieve(3, 100, &t).unwrap();
        assert_eq!(t_k(1, &w2).unwrap(), 1);
        assert_eq!(t_k(4, &w2).unwrap(), 12);
        assert_eq!(t_k(16, &w2).unwrap(), 71);
        assert_eq!(t_k(8, &w3).unwrap(), 25);
        assert!(t_k(u64::MAX, &w2).is_err());
    }

    #[test]
    fn t_k_bruteforce_examples() {
        let t = table(1000);
        assert_eq!(t_k_bruteforce(16, 2, &t).unwrap(), 71);
        assert_eq!(t_k_bruteforce(3, 2, &t).unwrap(), 1);
        assert_eq!(t_k_bruteforce(8, 3, &t).unwrap(), 25);
        assert!(t_k_bruteforce(2_000_000, 2, &t).is_err());
    }

    #[test]
    fn fast_route_matches_bruteforce_small() {
        let t = table(3000);
        let w2 = census_sieve(2, 60, &t).unwrap();
        let w3 = census_sieve(3, 15, &t).unwrap();
        for x in 1..=3000u64 {
            assert_eq!(t_k(x, &w2).unwrap(), t_k_bruteforce(x, 2, &t).unwrap(), "k=2 x={x}");
            assert_eq!(t_k(x, &w3).unwrap(), t_k_bruteforce(x, 3, &t).unwrap(), "k=3 x={x}");
        }
    }

    #[test]
    fn bruteforce_steps_match_pointwise() {
        let t = table(2000);
        let steps = t_k_bruteforce_steps(2000, 2, &t).unwrap();
        for x in [1u64, 3, 4, 100, 1999, 2000] {
            let from_steps: u128 = steps.iter().take_while(|&&(n, _)| n <= x).map(|&(_, j)| j).sum();
            assert_eq!(from_steps, t_k_bruteforce(x, 2, &t).unwrap(), "x={x}");
        }
    }

    #[test]
    fn t_k_jumps_only_at_kth_powers() {
        let t = table(50_000);
        for k in [2u8, 3] {
            let w = census_sieve(k, 40, &t).unwrap();
            for n in 1..=39u64 {
                let nk = n.pow(k as u32);
                let next = (n + 1).pow(k as u32);
                if n > 1 {
                    assert!(t_k(nk, &w).unwrap() > t_k(nk - 1, &w).unwrap());
                }
                assert_eq!(t_k(nk, &w).unwrap(), t_k(next - 1, &w).unwrap());
            }
        }
    }

    #[test]
    fn t_k_many_matches_single() {
        let t = table(2000);
        let w = census_sieve(2, 2000, &t).unwrap();
        let xs = [4u64, 1, 3_999_999, 16, 4_000_000, 123_456];
        let many = t_k_many(&xs, &w).unwrap();
        for (i, &x) in xs.iter().enumerate() {
            assert_eq!(many[i], t_k(x, &w).unwrap(), "x={x}");
        }
    }

    #[test]
    fn streamed_matches_table_route() {
        let t = table(200_000);
        for k in [2u8, 3] {
            let w = census_sieve(k, 200_000, &t).unwrap();
            let xs: Vec<u64> = match k {
                2 => vec![1, 4, 100, 10_000, 123_456_789, 40_000_000_000],
                _ => vec![1, 8, 1000, 999_999, 8_000_000_000_000_000],
            };
            let fast = t_k_many(&xs, &w).unwrap();
            // Odd block size to exercise segment boundaries.
            let streamed = t_k_streamed(k, &xs, 4097, Some(&t)).unwrap();
            assert_eq!(fast, streamed, "k={k}");
        }
    }

    #[test]
    fn streamed_is_worker_count_invariant() {
        let xs = vec![10_000u64, 81_000_000, 144_000_000, 400_000_000];
        let one = {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
            pool.install(|| t_k_streamed(2, &xs, 1 << 13, None).unwrap())
        };
        let four = {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
            pool.install(|| t_k_streamed(2, &xs, 1 << 13, None).unwrap())
        };
        assert_eq!(one, four);
    }
}
