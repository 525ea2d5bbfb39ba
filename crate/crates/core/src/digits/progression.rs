//! Greedy decompositions of index sets into `|D|`-power progressions.

use std::collections::{HashSet, VecDeque};

use num_bigint::{BigInt, BigUint};

use super::{mul_mod, pow_mod, CantorSet, IndexCursor, ResidueWalk};
use crate::error::{Error, Result};

/// `{offset + t·radix^step_exponent : t >= 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Progression {
    pub offset: u64,
    pub step_exponent: u32,
    /// True when containment was proved for every `t`, false when it was
    /// only checked below the family's truncation.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgressionFamily {
    pub radix: u64,
    pub progressions: Vec<Progression>,
    /// Every member below this bound is covered by the family.
    pub truncation: u64,
}

impl Progression {
    pub fn step(&self, radix: u64) -> u64 {
        radix.pow(self.step_exponent)
    }

    pub fn contains(&self, radix: u64, n: u64) -> bool {
        n >= self.offset && (n - self.offset).is_multiple_of(self.step(radix))
    }
}

impl ProgressionFamily {
    pub fn is_empty(&self) -> bool {
        self.progressions.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.progressions.iter().any(|p| p.contains(self.radix, n))
    }

    /// True when every progression is proved exact.
    pub fn is_exact(&self) -> bool {
        self.progressions.iter().all(|p| p.certified)
    }

    /// Exact pairwise disjointness test. Two progressions with steps
    /// `radix^i <= radix^j` meet iff their offsets agree mod `radix^i`.
    pub fn pairwise_disjoint(&self) -> bool {
        for (a, p) in self.progressions.iter().enumerate() {
            for q in &self.progressions[a + 1..] {
                let fine = p.step_exponent.min(q.step_exponent);
                let m = self.radix.pow(fine);
                if p.offset % m == q.offset % m {
                    return false;
                }
            }
        }
        true
    }

    fn covers(&self, n: u64) -> bool {
        self.contains(n)
    }
}

/// Smallest `i` with `x < radix^i`.
fn exponent_above(radix: u64, x: u64) -> u32 {
    let mut i = 0;
    let mut p: u128 = 1;
    while u128::from(x) >= p {
        p *= u128::from(radix);
        i += 1;
    }
    i
}

/// Search bound used by [`delta_star`] when none is given: at least `2^10`,
/// and at least twice the block `|D|^{i_h + 4}` where `i_h` is the block
/// exponent that first clears the shift `h`.
pub fn default_truncation(radix: usize, h: u64) -> u64 {
    let m = radix as u64;
    let i = exponent_above(m, h) + 4;
    let block = m.checked_pow(i).unwrap_or(u64::MAX / 2);
    (2 * block).max(1 << 10)
}

/// Greedy decomposition of
/// `Δ*_h(k, s) = {n : k_{n+h} - k_n = k, s_b(k_{n+h}) - s_b(k_n) = s}`.
///
/// The minimal uncovered member `j` seeds the progression
/// `j + |D|^i N` with `i` minimal such that `j + h < |D|^i`; each such
/// progression lies entirely inside the set. All seeds below `truncation`
/// are found. An empty family means no `n < truncation` qualifies.
pub fn delta_star(
    set: &CantorSet,
    h: u64,
    k: &BigUint,
    s: i64,
    truncation: Option<u64>,
) -> Result<ProgressionFamily> {
    set.require_zero_digit("the Δ* decomposition")?;
    if h == 0 {
        return Err(Error::InvalidArgument("shift h must be at least 1".into()));
    }
    let radix = set.radix() as u64;
    let truncation = truncation.unwrap_or_else(|| default_truncation(set.radix(), h));
    let mut family = ProgressionFamily { radix, progressions: Vec::new(), truncation };
    let target_k = BigInt::from(k.clone());

    let mut cursor = IndexCursor::new(set, &BigUint::from(0u32));
    let mut window: VecDeque<(BigInt, i64)> = VecDeque::new();
    let push_current = |cursor: &IndexCursor, window: &mut VecDeque<(BigInt, i64)>| {
        let value = set.value_of_positions(cursor.positions());
        let sum: i64 = cursor.positions().iter().map(|&p| i64::from(set.digits()[p])).sum();
        window.push_back((BigInt::from(value), sum));
    };
    for _ in 0..=h {
        push_current(&cursor, &mut window);
        cursor.advance(|_| {});
    }
    for n in 0..truncation {
        let (low, low_sum) = &window[0];
        let (high, high_sum) = &window[h as usize];
        let qualifies = (high - low) == target_k && high_sum - low_sum == s;
        if qualifies && !family.covers(n) {
            family.progressions.push(Progression {
                offset: n,
                step_exponent: exponent_above(radix, n + h),
                certified: true,
            });
        }
        window.pop_front();
        push_current(&cursor, &mut window);
        cursor.advance(|_| {});
    }
    Ok(family)
}

/// Residue pairs `(k mod q, s_b(k) mod q)` attained by members of `set`.
fn reachable_residues(set: &CantorSet, q: u64) -> HashSet<(u64, u64)> {
    let b = u64::from(set.base()) % q;
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([(0u64, 0u64)]);
    seen.insert((0, 0));
    while let Some((x, y)) = queue.pop_front() {
        for &d in set.digits() {
            let d = u64::from(d) % q;
            let next = ((mul_mod(x, b, q) + d) % q, (y + d) % q);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    seen
}

/// Largest modulus accepted by [`residue_index_set`]; the reachable residue
/// graph has up to `q^2` states.
pub const RESIDUE_SET_MAX_MODULUS: u64 = 1024;

/// Greedy decomposition of `N(r, r', q) = {n : k_n ≡ r, s_b(k_n) ≡ r' (mod q)}`
/// into progressions `j + |D|^i N` with `j < |D|^i`.
///
/// A progression seeded at `j` is certified when
/// `(b^i x + k_j, y + s_b(k_j)) ≡ (r, r')` for every residue pair `(x, y)`
/// reachable by the set, which makes it exact for all `t`. When no block
/// exponent admits a certificate, the smallest exponent whose progression
/// stays inside the set below `truncation` is used and the progression is
/// marked uncertified.
pub fn residue_index_set(
    set: &CantorSet,
    r: u64,
    r2: u64,
    q: u64,
    truncation: u64,
) -> Result<ProgressionFamily> {
    if q == 0 || q > RESIDUE_SET_MAX_MODULUS {
        return Err(Error::InvalidArgument(format!(
            "modulus must lie in [1, {RESIDUE_SET_MAX_MODULUS}], got {q}"
        )));
    }
    set.require_zero_digit("the residue-index decomposition")?;
    let (r, r2) = (r % q, r2 % q);
    let radix = set.radix() as u64;
    let reachable = reachable_residues(set, q);
    let digit_sums_vanish = reachable.iter().all(|&(_, y)| y == 0);

    let mut members = vec![false; truncation as usize];
    let mut walk = ResidueWalk::new(set, q, q, &BigUint::from(0u32));
    for slot in members.iter_mut() {
        *slot = walk.current() == (r, r2);
        walk.advance();
    }

    let b = u64::from(set.base());
    let certified_at = |i: u32| -> bool {
        let shift = pow_mod(b, u64::from(i), q);
        digit_sums_vanish && reachable.iter().all(|&(x, _)| mul_mod(shift, x, q) == 0)
    };

    let mut family = ProgressionFamily { radix, progressions: Vec::new(), truncation };
    for n in 0..truncation {
        if !members[n as usize] || family.covers(n) {
            continue;
        }
        let first = exponent_above(radix, n);
        // Multiplying by b^i stops changing the q-part once i exceeds log2 q.
        let last = first + 64;
        let certified = (first..=last).find(|&i| certified_at(i));
        let progression = match certified {
            Some(i) => Progression { offset: n, step_exponent: i, certified: true },
            None => {
                let i = (first..)
                    .find(|&i| {
                        let step = radix.saturating_pow(i);
                        (n..truncation).step_by(step as usize).all(|t| members[t as usize])
                    })
                    .expect("a step beyond the truncation always fits");
                Progression { offset: n, step_exponent: i, certified: false }
            }
        };
        family.progressions.push(progression);
    }
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(b: u32, d: &[u32]) -> CantorSet {
        CantorSet::new(b, d.iter().copied()).unwrap()
    }

    /// Brute-force membership in Δ*_h(k, s).
    fn in_delta(c: &CantorSet, h: u64, k: i64, s: i64, n: u64) -> bool {
        let lo = c.element(n);
        let hi = c.element(n + h);
        let diff = BigInt::from(hi.clone()) - BigInt::from(lo.clone());
        diff == BigInt::from(k) && c.sum_digits(&hi) as i64 - c.sum_digits(&lo) as i64 == s
    }

    #[test]
    fn middle_third_unit_shift() {
        let c = set(3, &[0, 2]);
        let fam = delta_star(&c, 1, &BigUint::from(2u32), 2, Some(1 << 10)).unwrap();
        assert_eq!(fam.progressions[0], Progression { offset: 0, step_exponent: 1, certified: true });
        for n in 0..1 << 10 {
            assert_eq!(fam.contains(n), in_delta(&c, 1, 2, 2, n), "n = {n}");
        }
        assert!(fam.pairwise_disjoint());
    }

    #[test]
    fn odd_difference_is_empty() {
        let c = set(3, &[0, 2]);
        let fam = delta_star(&c, 1, &BigUint::from(1u32), 0, Some(1 << 10)).unwrap();
        assert!(fam.is_empty());
    }

    #[test]
    fn negative_digit_sum_change() {
        // 8 -> 18 in C(3,{0,2}) drops the digit sum from 4 to 2.
        let c = set(3, &[0, 2]);
        let fam = delta_star(&c, 1, &BigUint::from(10u32), -2, Some(1 << 10)).unwrap();
        assert!(!fam.is_empty());
        for n in 0..1 << 10 {
            assert_eq!(fam.contains(n), in_delta(&c, 1, 10, -2, n));
        }
    }

    #[test]
    fn requires_zero_digit() {
        let c = set(4, &[1, 3]);
        assert!(delta_star(&c, 1, &BigUint::from(2u32), 2, None).is_err());
        assert!(delta_star(&set(3, &[0, 2]), 0, &BigUint::from(2u32), 2, None).is_err());
    }

    #[test]
    fn residue_sets_of_middle_third() {
        let c = set(3, &[0, 2]);
        let all = residue_index_set(&c, 0, 0, 2, 1 << 10).unwrap();
        assert_eq!(all.progressions, vec![Progression { offset: 0, step_exponent: 0, certified: true }]);
        assert!(residue_index_set(&c, 1, 0, 2, 1 << 10).unwrap().is_empty());
    }

    #[test]
    fn residue_set_roundtrip_below_truncation() {
        let c = set(3, &[0, 1]);
        let fam = residue_index_set(&c, 1, 1, 2, 512).unwrap();
        for n in 0..512 {
            let k = c.element(n);
            let member = (&k % 2u32) == BigUint::from(1u32) && c.sum_digits(&k) % 2 == 1;
            assert_eq!(fam.contains(n), member, "n = {n}");
        }
        assert!(fam.pairwise_disjoint());
        // Parity of the digit count is not a union of progressions.
        assert!(!fam.is_exact());
    }

    #[test]
    fn residue_set_modulus_dividing_base_power() {
        // q = 9 | 3^2 and all digit sums are multiples of... no: only k mod 9 is
        // periodic here, digit sums are not, so use r' over q = 1 via q = 9 with
        // a digit set whose digit sums vanish mod 9 is impossible; instead check
        // that certification never claims more than the brute-force truth.
        let c = set(3, &[0, 2]);
        let fam = residue_index_set(&c, 2, 2, 9, 729).unwrap();
        for n in 0..729 {
            let k = c.element(n);
            let member = (&k % 9u32) == BigUint::from(2u32) && c.sum_digits(&k) % 9 == 2;
            assert_eq!(fam.contains(n), member);
        }
    }
}
