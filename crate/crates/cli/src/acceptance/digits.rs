use std::collections::BTreeSet;

use cantor_core::digits::delta_star;
use cantor_core::{CantorSet, Result};
use num_bigint::BigUint;

use super::oracle::{self, big, SYSTEMS};
use super::Tally;

const BIJECTION_RANGE: u64 = 100_000;
const SCAN_BOUND: u64 = 1_000_000;

pub fn bijection(t: &mut Tally) -> Result<()> {
    for (b, d) in SYSTEMS {
        let set = CantorSet::new(b, d.iter().copied())?;
        let mut previous: Option<BigUint> = None;
        for n in 0..BIJECTION_RANGE {
            let k = set.element(n);
            t.check(k == big(oracle::element(n, b, d)), || format!("{set}: k_{n} = {k}"));
            let back = set.element_to_index(&k)?;
            t.check(back == BigUint::from(n), || format!("{set}: index of {k} is {back}, not {n}"));
            if let Some(p) = &previous {
                t.check(p < &k, || format!("{set}: k_{} = {p} >= k_{n} = {k}", n - 1));
            }
            previous = Some(k);
        }
        // No member is skipped: the listing matches a scan of all integers.
        let bound = u64::from(b).pow(6).min(SCAN_BOUND);
        for (n, m) in oracle::scan(b, d, bound).into_iter().enumerate() {
            t.check(set.element(n as u64) == BigUint::from(m), || format!("{set}: member {m} is not k_{n}"));
        }
    }
    Ok(())
}

const SELF_SIMILAR_RANGE: u64 = 1000;
const MAX_LEVEL: u32 = 5;
const DELTA_TRUNCATION: u64 = 1 << 10;
const MAX_SHIFT: u64 = 3;

pub fn structure(t: &mut Tally) -> Result<()> {
    for (b, d) in SYSTEMS {
        let set = CantorSet::new(b, d.iter().copied())?;
        let m = d.len() as u64;
        for i in 0..=MAX_LEVEL {
            let block = m.pow(i);
            let scale = BigUint::from(b).pow(i);
            for n in 0..SELF_SIMILAR_RANGE {
                let high = set.element(n);
                for j in 0..block {
                    let lhs = set.element(block * n + j);
                    let ok = lhs == &scale * &high + set.element(j)
                        && set.self_similarity_check(&BigUint::from(n), i, &BigUint::from(j))?;
                    t.check(ok, || format!("{set}: k at {block}*{n}+{j} with i = {i}"));
                }
            }
        }
        shifted_differences(t, &set, b, d)?;
    }
    Ok(())
}

/// Checks the progression decomposition of
/// `{n : k_{n+h} − k_n = k, s(k_{n+h}) − s(k_n) = s}` against direct search,
/// for every `(k, s)` that occurs below the truncation and for two that do not.
fn shifted_differences(t: &mut Tally, set: &CantorSet, b: u32, d: &[u32]) -> Result<()> {
    // Progressions are exact for every t, so membership is checked past the
    // truncation as well.
    let horizon = 4 * DELTA_TRUNCATION;
    let elements: Vec<(u128, i64)> = (0..horizon + MAX_SHIFT + 1)
        .map(|n| {
            let k = oracle::element(n, b, d);
            (k, oracle::digit_sum(k, b) as i64)
        })
        .collect();
    for h in 1..=MAX_SHIFT {
        let step = |n: u64| {
            let (lo, lo_sum) = elements[n as usize];
            let (hi, hi_sum) = elements[(n + h) as usize];
            (hi - lo, hi_sum - lo_sum)
        };
        let mut grid: BTreeSet<(u128, i64)> = (0..DELTA_TRUNCATION).map(step).collect();
        let widest = grid.iter().map(|g| g.0).max().unwrap_or(0);
        grid.insert((widest + 1, 0));
        grid.insert((1, 1));
        for &(k, s) in &grid {
            let family = delta_star(set, h, &big(k), s, Some(DELTA_TRUNCATION))?;
            for n in 0..horizon {
                let qualifies = step(n) == (k, s);
                if n < DELTA_TRUNCATION {
                    t.check(family.contains(n) == qualifies, || {
                        format!("{set}: h = {h}, (k, s) = ({k}, {s}), n = {n}")
                    });
                } else if family.contains(n) {
                    t.check(qualifies, || format!("{set}: h = {h}, ({k}, {s}) wrongly holds n = {n}"));
                }
            }
            t.check(family.pairwise_disjoint(), || format!("{set}: h = {h}, ({k}, {s}) overlaps"));
        }
    }
    Ok(())
}
