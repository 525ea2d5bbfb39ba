//! Integer Cantor sets `C(b, D)` and their digit structure.
//!
//! Members are indexed 0-based through the monotone bijection between
//! indices written in base `|D|` and members written in base `b`. When
//! `0 ∈ D` this is the positional map `n = Σ n_c |D|^c ↦ Σ d_{n_c} b^c`.
//! When `0 ∉ D` members are enumerated by digit length (all one-digit
//! members ascending, then all two-digit members, ...), which is bijective
//! numeration in base `|D|`.

mod cursor;
mod good_set;
mod progression;
mod set;

pub(crate) use cursor::{mul_mod, pow_mod, IndexCursor, PlaceSum, ResidueWalk};
pub use good_set::{good_set, GoodSet};
pub use progression::{default_truncation, delta_star, residue_index_set, Progression, ProgressionFamily};
pub use set::{base_digits, sum_digits_in_base, CantorSet, DigitSpec};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A member `k_n` of a Cantor set with its digit positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub value: BigUint,
    /// Positions in `D` of the base-`b` digits, least significant first.
    pub digit_vector: Vec<usize>,
}

impl CantorSet {
    /// Base-`|D|` positions describing index `n`, least significant first.
    pub(crate) fn index_positions(&self, n: &BigUint) -> Vec<usize> {
        let m = self.radix() as u32;
        if self.has_zero() {
            return base_digits(n, m).into_iter().map(|p| p as usize).collect();
        }
        // Bijective numeration: skip whole length blocks of size |D|^len.
        let radix = BigUint::from(m);
        let mut rest = n.clone();
        let mut block = radix.clone();
        let mut len = 1usize;
        while rest >= block {
            rest -= &block;
            block *= &radix;
            len += 1;
        }
        let mut positions: Vec<usize> = base_digits(&rest, m).into_iter().map(|p| p as usize).collect();
        positions.resize(len, 0);
        positions
    }

    pub(crate) fn value_of_positions(&self, positions: &[usize]) -> BigUint {
        let b = u64::from(self.base());
        let mut fast: Option<u128> = Some(0);
        for &p in positions.iter().rev() {
            fast = fast
                .and_then(|v| v.checked_mul(u128::from(b)))
                .and_then(|v| v.checked_add(u128::from(self.digits()[p])));
        }
        if let Some(v) = fast {
            return BigUint::from(v);
        }
        let mut acc = BigUint::zero();
        for &p in positions.iter().rev() {
            acc *= b;
            acc += self.digits()[p];
        }
        acc
    }

    fn index_of_positions(&self, positions: &[usize]) -> BigUint {
        let m = self.radix() as u64;
        let mut acc = BigUint::zero();
        for &p in positions.iter().rev() {
            acc *= m;
            acc += p as u64;
        }
        if !self.has_zero() {
            // Add the sizes of all shorter length blocks.
            let mut block = BigUint::from(m);
            for _ in 1..positions.len() {
                acc += &block;
                block *= m;
            }
        }
        acc
    }

    /// `k_n`, the `n`-th smallest member (0-based).
    pub fn index_to_element(&self, n: &BigUint) -> Element {
        let digit_vector = self.index_positions(n);
        Element { value: self.value_of_positions(&digit_vector), digit_vector }
    }

    /// Convenience form of [`index_to_element`](Self::index_to_element)
    /// returning only the value.
    pub fn element(&self, n: u64) -> BigUint {
        self.index_to_element(&BigUint::from(n)).value
    }

    /// Inverse of [`index_to_element`](Self::index_to_element).
    pub fn element_to_index(&self, k: &BigUint) -> Result<BigUint> {
        let positions = self
            .positions_of_value(k)
            .ok_or_else(|| Error::NotAMember { value: k.to_string(), set: self.to_string() })?;
        Ok(self.index_of_positions(&positions))
    }

    fn positions_of_value(&self, k: &BigUint) -> Option<Vec<usize>> {
        if k.is_zero() {
            return self.has_zero().then(Vec::new);
        }
        base_digits(k, self.base()).into_iter().map(|d| self.digit_position(d)).collect()
    }

    /// Whether every base-`b` digit of `k` lies in `D`.
    pub fn contains(&self, k: &BigUint) -> bool {
        self.positions_of_value(k).is_some()
    }

    pub fn contains_u64(&self, mut k: u64) -> bool {
        if k == 0 {
            return self.has_zero();
        }
        let b = u64::from(self.base());
        while k > 0 {
            if self.digit_position((k % b) as u32).is_none() {
                return false;
            }
            k /= b;
        }
        true
    }

    /// `s_b(k)`, the base-`b` digit sum of any nonnegative `k`.
    pub fn sum_digits(&self, k: &BigUint) -> u64 {
        sum_digits_in_base(k, self.base())
    }

    /// Number of members strictly below `bound`.
    pub fn rank(&self, bound: &BigUint) -> BigUint {
        if bound.is_zero() {
            return BigUint::zero();
        }
        let digits = base_digits(bound, self.base());
        let len = digits.len();
        let m = BigUint::from(self.radix());
        let mut count = BigUint::zero();
        let mut power = vec![BigUint::one(); len + 1];
        for i in 1..=len {
            power[i] = &power[i - 1] * &m;
        }
        if !self.has_zero() {
            // all members with fewer digits than `bound`
            for p in power.iter().take(len).skip(1) {
                count += p;
            }
        }
        for place in (0..len).rev() {
            let x = digits[place];
            let below = self.digits().iter().filter(|&&d| d < x).count();
            count += &power[place] * below;
            if self.digit_position(x).is_none() {
                return count;
            }
        }
        // `bound` itself is a member and was not counted.
        count
    }

    /// Checks `k_{|D|^i n + j} = b^i k_n + k_j` together with the matching
    /// digit-sum identity.
    pub fn self_similarity_check(&self, n: &BigUint, i: u32, j: &BigUint) -> Result<bool> {
        self.require_zero_digit("the self-similarity identity")?;
        let block = BigUint::from(self.radix()).pow(i);
        if j >= &block {
            return Err(Error::IndexOutOfRange(format!("j = {j} must be below |D|^i = {block}")));
        }
        let combined = self.index_to_element(&(&block * n + j)).value;
        let k_n = self.index_to_element(n).value;
        let k_j = self.index_to_element(j).value;
        let shifted = BigUint::from(self.base()).pow(i) * &k_n + &k_j;
        let sums_match = self.sum_digits(&combined) == self.sum_digits(&k_n) + self.sum_digits(&k_j);
        Ok(combined == shifted && sums_match)
    }

    /// `|C ∩ [0, b^k)|` by index arithmetic.
    pub fn count_below_power(&self, k: u32) -> BigUint {
        self.rank(&BigUint::from(self.base()).pow(k))
    }
}
