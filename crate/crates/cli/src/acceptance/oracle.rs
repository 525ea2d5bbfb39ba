//! Slow, obviously correct reference computations.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;

/// The five digit systems every suite runs on.
pub const SYSTEMS: [(u32, &[u32]); 5] =
    [(3, &[0, 2]), (3, &[0, 1]), (5, &[0, 2, 3]), (7, &[0, 1, 3]), (10, &[0, 5])];

/// `k_n` from the base-`|D|` digits of `n`, for sorted `digits` with 0 first.
pub fn element(n: u64, base: u32, digits: &[u32]) -> u128 {
    let m = digits.len() as u64;
    let (mut n, mut place, mut k) = (n, 1u128, 0u128);
    while n > 0 {
        k += u128::from(digits[(n % m) as usize]) * place;
        place *= u128::from(base);
        n /= m;
    }
    k
}

pub fn digit_sum(mut k: u128, base: u32) -> u64 {
    let mut s = 0;
    while k > 0 {
        s += (k % u128::from(base)) as u64;
        k /= u128::from(base);
    }
    s
}

pub fn is_member(mut k: u64, base: u32, digits: &[u32]) -> bool {
    loop {
        if !digits.contains(&((k % u64::from(base)) as u32)) {
            return false;
        }
        k /= u64::from(base);
        if k == 0 {
            return true;
        }
    }
}

/// Members below `bound` by testing every integer.
pub fn scan(base: u32, digits: &[u32], bound: u64) -> Vec<u64> {
    (0..bound).filter(|&k| is_member(k, base, digits)).collect()
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn integer(k: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

pub fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// `e(θ)` with `θ` reduced exactly before rounding.
pub fn unit(theta: &BigRational) -> (f64, f64) {
    let t = frac(theta).to_f64().unwrap_or(0.0) * std::f64::consts::TAU;
    (t.cos(), t.sin())
}

/// `Σ_{w+x=y+z} 1` over quadruples.
pub fn energy(a: &[i64]) -> u64 {
    let mut e = 0;
    for &w in a {
        for &x in a {
            for &y in a {
                for &z in a {
                    e += u64::from(w + x == y + z);
                }
            }
        }
    }
    e
}

/// `Σ_x r(x)²` with `r(x)` the number of ordered pairs summing to `x`.
pub fn energy_by_sums(a: &[i64]) -> u64 {
    let mut r = std::collections::HashMap::new();
    for &x in a {
        for &y in a {
            *r.entry(x + y).or_insert(0u64) += 1;
        }
    }
    r.values().map(|c| c * c).sum()
}

/// Ordered pairs `j ≠ k` at circular distance below `s / N`.
pub fn close_pairs(thetas: &[f64], s: f64) -> u64 {
    let threshold = s / thetas.len() as f64;
    let mut pairs = 0;
    for (j, &x) in thetas.iter().enumerate() {
        for (k, &y) in thetas.iter().enumerate() {
            if j != k {
                let d = if x > y { x - y } else { y - x };
                pairs += u64::from(d < threshold || 1.0 - d < threshold);
            }
        }
    }
    pairs
}

/// Largest `A ⊆ [1, n]` with no difference in `forbidden`, over all `2^n`
/// subsets (independent sets built up from their lowest element).
pub fn max_avoiding(forbidden: &[u64], n: u32) -> u32 {
    let adjacent: Vec<u32> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && forbidden.contains(&u64::from(i.abs_diff(j))))
                .fold(0, |row, j| row | 1 << j)
        })
        .collect();
    let mut independent = vec![false; 1 << n];
    independent[0] = true;
    let mut best = 0;
    for s in 1usize..1 << n {
        let low = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        independent[s] = independent[rest] && adjacent[low] as usize & rest == 0;
        if independent[s] {
            best = best.max(s.count_ones());
        }
    }
    best
}

pub fn big(k: u128) -> BigUint {
    BigUint::from(k)
}
