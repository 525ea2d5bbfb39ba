use num_bigint::BigUint;

use super::CantorSet;
use crate::error::{Error, Result};

/// Low-order blocks `k'` of `C ∩ [0, b^{n0})` whose shifts by up to `horizon`
/// indices never carry into the higher block.
///
/// For `k' = k_j` in the set, every `n = |D|^{n0} m + j` and `0 < h <= horizon`
/// satisfy `k_{n+h} = b^{n0} k_m + k_{j+h}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodSet {
    pub block_length: u32,
    pub horizon: u64,
    /// Indices `j` of the members `k_j`, increasing.
    pub indices: Vec<u64>,
    pub elements: Vec<BigUint>,
}

impl GoodSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The low block `k''` of `k_{n+h}`, given the low block `k'` of `k_n`.
    pub fn successor(&self, set: &CantorSet, low: &BigUint, h: u64) -> Option<BigUint> {
        if h == 0 || h > self.horizon {
            return None;
        }
        let pos = self.elements.binary_search(low).ok()?;
        Some(set.element(self.indices[pos] + h))
    }
}

/// Smallest block length whose tail of `horizon` excluded indices is at most
/// an `epsilon` fraction of the block.
fn minimal_block_length(radix: u64, epsilon: f64, horizon: u64) -> Option<u32> {
    (1..=62u32).find(|&n| {
        radix.checked_pow(n).is_some_and(|block| horizon as f64 <= epsilon * block as f64 && horizon < block)
    })
}

/// Builds the good set at block length `n0`, or at the smallest admissible
/// length when `n0` is `None`.
///
/// The set is `{k_j : j + horizon < |D|^{n0}}`, the largest set with the
/// no-carry property, so `|G| = |D|^{n0} - horizon`.
pub fn good_set(set: &CantorSet, epsilon: f64, horizon: u64, n0: Option<u32>) -> Result<GoodSet> {
    set.require_zero_digit("the good-set construction")?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0,1), got {epsilon}")));
    }
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon H must be at least 1".into()));
    }
    let radix = set.radix() as u64;
    let n0 = match n0 {
        Some(n) => n,
        None => minimal_block_length(radix, epsilon, horizon).ok_or_else(|| {
            Error::NotAchievable(format!("no block length fits H = {horizon} at ε = {epsilon}"))
        })?,
    };
    let block = radix
        .checked_pow(n0)
        .filter(|&b| b <= 1 << 24)
        .ok_or_else(|| Error::LevelTooLarge { size: radix.saturating_pow(n0), limit: 1 << 24 })?;
    let size = block.saturating_sub(horizon);
    if horizon >= block || (size as f64) < (1.0 - epsilon) * block as f64 {
        return Err(Error::NotAchievable(format!(
            "block length {n0} leaves {size} of {block} elements, below (1-ε)|D|^n0"
        )));
    }
    let indices: Vec<u64> = (0..size).collect();
    let elements = indices.iter().map(|&j| set.element(j)).collect();
    Ok(GoodSet { block_length: n0, horizon, indices, elements })
}
