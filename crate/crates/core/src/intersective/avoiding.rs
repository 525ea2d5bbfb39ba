use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::clique::{max_clique, members, MAX_VERTICES};
use crate::digits::CantorSet;
use crate::error::{Error, Result};

/// Forbidden differences `H ∩ [1, N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceFamily {
    pub forbidden: BTreeSet<u64>,
    pub source: String,
}

impl DifferenceFamily {
    pub fn new(forbidden: impl IntoIterator<Item = u64>, source: impl Into<String>) -> Self {
        DifferenceFamily {
            forbidden: forbidden.into_iter().filter(|&h| h > 0).collect(),
            source: source.into(),
        }
    }

    /// Nonzero members of `set` below `bound`.
    pub fn from_cantor(set: &CantorSet, bound: u64) -> Self {
        let forbidden = (1..bound).filter(|&k| set.contains_u64(k));
        DifferenceFamily::new(forbidden, format!("members of {set} in [1, {bound})"))
    }

    pub fn forbids(&self, difference: u64) -> bool {
        self.forbidden.contains(&difference)
    }
}

/// Default largest `N` solved exactly.
pub const EXACT_SOLVER_CAP: u64 = 120;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverMode {
    /// Fail with `CapExceeded` above the cap.
    Exact,
    /// Above the cap, return a local-search lower bound.
    Auto,
}

/// A largest known `A ⊆ [1, N]` with `(A − A) ∩ H = ∅`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvoidingSet {
    pub size: usize,
    pub witness: Vec<u64>,
    /// False when `size` is only a lower bound.
    pub exact: bool,
}

impl AvoidingSet {
    /// `|A| / N`.
    pub fn ratio(&self, n: u64) -> BigRational {
        BigRational::new((self.size as u64).into(), n.into())
    }
}

/// True when no two elements of `a` differ by a forbidden amount.
pub fn is_avoiding(family: &DifferenceFamily, a: &[u64]) -> bool {
    a.iter().enumerate().all(|(i, &x)| a[i + 1..].iter().all(|&y| !family.forbids(x.abs_diff(y))))
}

/// Largest `A ⊆ [1, N]` avoiding the forbidden differences: a maximum
/// independent set of the graph joining `i, j` when `|i − j| ∈ H`.
pub fn max_avoiding_set(family: &DifferenceFamily, n: u64, mode: SolverMode) -> Result<AvoidingSet> {
    max_avoiding_set_with_cap(family, n, mode, EXACT_SOLVER_CAP)
}

pub fn max_avoiding_set_with_cap(
    family: &DifferenceFamily,
    n: u64,
    mode: SolverMode,
    cap: u64,
) -> Result<AvoidingSet> {
    let cap = cap.min(MAX_VERTICES as u64);
    if n <= cap {
        let n = n as usize;
        // Clique search in the complement: i ~ j iff |i − j| is allowed.
        let adj: Vec<u128> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i && !family.forbids(i.abs_diff(j) as u64))
                    .fold(0u128, |row, j| row | 1u128 << j)
            })
            .collect();
        let all = if n == 0 { 0 } else { u128::MAX >> (128 - n) };
        let clique = max_clique(&adj, all);
        let witness: Vec<u64> = members(clique).into_iter().map(|v| v as u64 + 1).collect();
        return Ok(AvoidingSet { size: witness.len(), witness, exact: true });
    }
    match mode {
        SolverMode::Exact => Err(Error::CapExceeded { size: n, cap }),
        SolverMode::Auto => Ok(local_search(family, n)),
    }
}

/// Greedy first-fit followed by (1,2)-swaps until no swap improves.
fn local_search(family: &DifferenceFamily, n: u64) -> AvoidingSet {
    let forbidden: Vec<u64> = family.forbidden.iter().copied().filter(|&h| h < n).collect();
    let mut chosen = vec![false; n as usize + 1];
    // Number of chosen elements conflicting with each element.
    let mut conflicts = vec![0u32; n as usize + 1];
    let neighbours = |x: u64| {
        let f = &forbidden;
        f.iter()
            .flat_map(move |&h| [x.checked_sub(h), x.checked_add(h)])
            .flatten()
            .filter(move |&y| y >= 1 && y <= n)
    };
    let add = |x: u64, chosen: &mut Vec<bool>, conflicts: &mut Vec<u32>| {
        chosen[x as usize] = true;
        for y in neighbours(x) {
            conflicts[y as usize] += 1;
        }
    };
    for x in 1..=n {
        if conflicts[x as usize] == 0 {
            add(x, &mut chosen, &mut conflicts);
        }
    }
    loop {
        let mut improved = false;
        for v in 1..=n {
            if !chosen[v as usize] {
                continue;
            }
            // Free elements whose only chosen conflict is v.
            let free: Vec<u64> =
                neighbours(v).filter(|&y| !chosen[y as usize] && conflicts[y as usize] == 1).collect();
            let pair = free.iter().enumerate().find_map(|(i, &x)| {
                free[i + 1..].iter().find(|&&y| !family.forbids(x.abs_diff(y))).map(|&y| (x, y))
            });
            if let Some((x, y)) = pair {
                chosen[v as usize] = false;
                for z in neighbours(v) {
                    conflicts[z as usize] -= 1;
                }
                add(x, &mut chosen, &mut conflicts);
                add(y, &mut chosen, &mut conflicts);
                for z in 1..=n {
                    if !chosen[z as usize] && conflicts[z as usize] == 0 {
                        add(z, &mut chosen, &mut conflicts);
                    }
                }
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    let witness: Vec<u64> = (1..=n).filter(|&x| chosen[x as usize]).collect();
    AvoidingSet { size: witness.len(), witness, exact: false }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioPoint {
    pub exponent: u32,
    pub n: u64,
    pub solution: AvoidingSet,
}

impl RatioPoint {
    pub fn ratio(&self) -> f64 {
        self.solution.size as f64 / self.n as f64
    }
}

/// `I(H, b^n)` for `H = C ∖ {0}` at each requested exponent.
pub fn intersective_ratio_profile(
    set: &CantorSet,
    exponents: &[u32],
    mode: SolverMode,
) -> Result<Vec<RatioPoint>> {
    exponents
        .iter()
        .map(|&e| {
            let n = BigUint::from(set.base())
                .pow(e)
                .to_u64()
                .ok_or(Error::CapExceeded { size: u64::MAX, cap: EXACT_SOLVER_CAP })?;
            let family = DifferenceFamily::from_cantor(set, n);
            let solution = max_avoiding_set(&family, n, mode)?;
            Ok(RatioPoint { exponent: e, n, solution })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive maximum over all subsets of `[1, n]`.
    fn brute(family: &DifferenceFamily, n: u64) -> usize {
        let adj: Vec<u32> = (0..n)
            .map(|i| {
                (0..n).filter(|&j| j != i && family.forbids(i.abs_diff(j))).fold(0, |row, j| row | 1 << j)
            })
            .collect();
        let mut independent = vec![false; 1 << n];
        independent[0] = true;
        let mut best = 0;
        for s in 1usize..1 << n {
            let low = s.trailing_zeros() as usize;
            let rest = s & (s - 1);
            independent[s] = independent[rest] && adj[low] as usize & rest == 0;
            if independent[s] {
                best = best.max(s.count_ones() as usize);
            }
        }
        best
    }

    #[test]
    fn middle_third_at_nine() {
        let family = DifferenceFamily::new([2, 6, 8], "test");
        let a = max_avoiding_set(&family, 9, SolverMode::Exact).unwrap();
        assert_eq!(a.size, 4);
        assert!(is_avoiding(&family, &a.witness));
        assert_eq!(a.ratio(9), BigRational::new(4.into(), 9.into()));
        let c = CantorSet::new(3, [0, 2]).unwrap();
        assert_eq!(DifferenceFamily::from_cantor(&c, 9).forbidden, family.forbidden);
    }

    #[test]
    fn trivial_families() {
        let a = max_avoiding_set(&DifferenceFamily::new([1], "t"), 6, SolverMode::Exact).unwrap();
        assert_eq!(a.size, 3);
        let a = max_avoiding_set(&DifferenceFamily::new([], "t"), 10, SolverMode::Exact).unwrap();
        assert_eq!(a.size, 10);
    }

    #[test]
    fn matches_brute_force() {
        for (h, n) in [(vec![1, 4], 14), (vec![2, 3, 7], 16), (vec![5], 12), (vec![1, 2, 3], 18)] {
            let family = DifferenceFamily::new(h, "t");
            assert_eq!(max_avoiding_set(&family, n, SolverMode::Exact).unwrap().size, brute(&family, n));
        }
    }

    #[test]
    fn cap_and_lower_bound() {
        let c = CantorSet::new(3, [0, 2]).unwrap();
        let family = DifferenceFamily::from_cantor(&c, 243);
        assert!(matches!(
            max_avoiding_set(&family, 243, SolverMode::Exact),
            Err(Error::CapExceeded { size: 243, cap: 120 })
        ));
        let a = max_avoiding_set(&family, 243, SolverMode::Auto).unwrap();
        assert!(!a.exact);
        assert!(is_avoiding(&family, &a.witness));
        let small = DifferenceFamily::from_cantor(&c, 81);
        let exact = max_avoiding_set(&small, 81, SolverMode::Exact).unwrap();
        let bound = local_search(&small, 81);
        assert!(is_avoiding(&small, &bound.witness) && bound.size <= exact.size);
    }

    #[test]
    fn profile() {
        let c = CantorSet::new(3, [0, 2]).unwrap();
        let p = intersective_ratio_profile(&c, &[1, 2, 3], SolverMode::Exact).unwrap();
        assert_eq!(p[1].solution.size, 4);
        assert!(p.windows(2).all(|w| w[1].ratio() <= w[0].ratio()));
    }
}
