//! Additive energy, Sidon checks and the pair-correlation statistic `R₂`.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digits::CantorSet;
use crate::error::{Error, Result};
use crate::expsum::phase::PhaseWalk;
use crate::frequency::Frequency;

/// Largest set handled by the sum-multiset method.
pub const ENERGY_SET_LIMIT: u64 = 10_000;

/// Largest truncation whose sumset is compared element by element.
pub const SUMSET_CHECK_LIMIT: u64 = 2_000;

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyReport {
    pub set_size: usize,
    pub energy: BigUint,
    /// `log E / log |A|`, undefined for a single element.
    pub exponent: Option<f64>,
    pub sidon: bool,
}

impl EnergyReport {
    fn new(set_size: usize, energy: BigUint) -> Self {
        let n = set_size as u64;
        let exponent =
            (set_size > 1).then(|| energy.to_f64().unwrap_or(f64::INFINITY).ln() / (set_size as f64).ln());
        let sidon = energy == BigUint::from(2 * n * n - n);
        EnergyReport { set_size, energy, exponent, sidon }
    }
}

/// `Σ_x r(x)²` with `r(x) = #{(a, b) ∈ A² : a + b = x}`.
pub fn additive_energy(a: &[i64]) -> Result<EnergyReport> {
    let a: BTreeSet<i64> = a.iter().copied().collect();
    if a.len() as u64 > ENERGY_SET_LIMIT {
        return Err(Error::LevelTooLarge { size: a.len() as u64, limit: ENERGY_SET_LIMIT });
    }
    let mut reps: HashMap<i64, u64> = HashMap::new();
    for &x in &a {
        for &y in &a {
            *reps.entry(x + y).or_default() += 1;
        }
    }
    let energy: u128 = reps.values().map(|&r| u128::from(r) * u128::from(r)).sum();
    Ok(EnergyReport::new(a.len(), BigUint::from(energy)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncationEnergy {
    pub levels: u32,
    /// Energy of `C ∩ [0, b^s)`.
    pub report: EnergyReport,
    pub digit_energy: EnergyReport,
    /// No carries when adding two members: `2 max(D) < b`.
    pub carry_free: bool,
    /// `E(D)^s`.
    pub product_formula: BigUint,
    /// `|D + D|^s`.
    pub sumset_formula: BigUint,
    /// Whether the energy was computed from the elements rather than `E(D)^s`.
    pub direct: bool,
}

fn truncation(set: &CantorSet, levels: u32, limit: u64) -> Result<Vec<i64>> {
    let size = set.count_below_power(levels);
    match size.to_u64() {
        Some(n) if n <= limit => {
            Ok((0..n).map(|i| set.element(i).to_i64().expect("below the element limit")).collect())
        }
        _ => Err(Error::LevelTooLarge { size: size.to_u64().unwrap_or(u64::MAX), limit }),
    }
}

/// Energy of `C ∩ [0, b^s)`.
///
/// In the carry-free case the energy factors over places as `E(D)^s`; it is
/// still computed directly whenever the truncation has at most
/// `ENERGY_SET_LIMIT` elements, so the identity is checked rather than assumed.
pub fn cantor_truncation_energy(set: &CantorSet, levels: u32) -> Result<TruncationEnergy> {
    set.require_zero_digit("truncation energy")?;
    let digits: Vec<i64> = set.digits().iter().map(|&d| i64::from(d)).collect();
    let digit_energy = additive_energy(&digits)?;
    let carry_free = 2 * set.digits().last().copied().unwrap_or(0) < set.base();
    let product_formula = digit_energy.energy.pow(levels);
    let sums: BTreeSet<i64> = digits.iter().flat_map(|x| digits.iter().map(move |y| x + y)).collect();
    let sumset_formula = BigUint::from(sums.len()).pow(levels);
    let (report, direct) = match truncation(set, levels, ENERGY_SET_LIMIT) {
        Ok(elements) => (additive_energy(&elements)?, true),
        Err(e) if !carry_free => return Err(e),
        Err(_) => {
            let size = set.count_below_power(levels).to_usize().unwrap_or(usize::MAX);
            (EnergyReport::new(size, product_formula.clone()), false)
        }
    };
    Ok(TruncationEnergy { levels, report, digit_energy, carry_free, product_formula, sumset_formula, direct })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumsetCheck {
    /// `C_s + C_s` equals the numbers `Σ e_j b^j` with every `e_j ∈ D + D`.
    pub sets_equal: bool,
    pub sumset_size: usize,
    /// `|D + D|^s`, the size when every such number has one representation.
    pub formula: u64,
}

/// Compares `C_s + C_s` with the digit-wise sumset, element by element.
pub fn carry_free_sumset(set: &CantorSet, levels: u32) -> Result<SumsetCheck> {
    let elements = truncation(set, levels, SUMSET_CHECK_LIMIT)?;
    let sums: BTreeSet<i64> = elements.iter().flat_map(|x| elements.iter().map(move |y| x + y)).collect();
    let digit_sums: BTreeSet<i64> =
        set.digits().iter().flat_map(|&x| set.digits().iter().map(move |&y| i64::from(x + y))).collect();
    let b = i64::from(set.base());
    let mut expected: BTreeSet<i64> = BTreeSet::from([0]);
    let mut place = 1i64;
    for _ in 0..levels {
        expected = expected.iter().flat_map(|&v| digit_sums.iter().map(move |&e| v + e * place)).collect();
        place *= b;
    }
    Ok(SumsetCheck {
        sets_equal: sums == expected,
        sumset_size: sums.len(),
        formula: (digit_sums.len() as u64).pow(levels),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationReport {
    pub s: f64,
    pub n: usize,
    /// Ordered pairs `j ≠ k` with `‖θ_j − θ_k‖ < s/N`.
    pub pairs: u64,
    pub r2: f64,
    pub target: f64,
}

/// `R₂(s, N) = N⁻¹ #{j ≠ k : ‖θ_j − θ_k‖ < s/N}` with a strict inequality.
pub fn pair_correlation(thetas: &[f64], s: f64) -> Result<CorrelationReport> {
    let mut x: Vec<f64> = thetas.iter().map(|t| t.rem_euclid(1.0)).collect();
    x.sort_by(f64::total_cmp);
    sorted_pair_correlation(&x, s)
}

fn sorted_pair_correlation(x: &[f64], s: f64) -> Result<CorrelationReport> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidArgument(format!("s must lie in (0, 1), got {s}")));
    }
    let n = x.len();
    let threshold = s / n.max(1) as f64;
    // For N ≥ 2 the threshold is below 1/2, so a pair is near either
    // directly or across the wrap, never both.
    let mut unordered = 0u64;
    for (i, &xi) in x.iter().enumerate() {
        let rest = &x[i + 1..];
        let near = rest.partition_point(|&xj| xj - xi < threshold);
        let far = rest.partition_point(|&xj| 1.0 - (xj - xi) >= threshold);
        unordered += (near + rest.len() - far) as u64;
    }
    let pairs = 2 * unordered;
    Ok(CorrelationReport {
        s,
        n,
        pairs,
        r2: if n == 0 { 0.0 } else { pairs as f64 / n as f64 },
        target: 2.0 * s,
    })
}

/// `R₂` for several `s` on the same points, sorting once.
pub fn pair_correlation_profile(thetas: &[f64], s_values: &[f64]) -> Result<Vec<CorrelationReport>> {
    let mut x: Vec<f64> = thetas.iter().map(|t| t.rem_euclid(1.0)).collect();
    x.sort_by(f64::total_cmp);
    s_values.iter().map(|&s| sorted_pair_correlation(&x, s)).collect()
}

/// `α k_n mod 1` for the first `count` members.
pub fn cantor_phases(set: &CantorSet, alpha: &Frequency, count: u64) -> Vec<f64> {
    let zero = BigRational::zero();
    let mut walk = PhaseWalk::new(set, &alpha.exact(), &zero, &BigUint::zero());
    (0..count)
        .map(|_| {
            let p = walk.phase();
            walk.advance();
            p
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairCorrelationHypotheses {
    pub digit_energy: EnergyReport,
    /// `3 − log E(D) / log |D|`.
    pub epsilon: f64,
    /// `1 − ε / (3 + log b / log |D|)`.
    pub dimension_bound: f64,
    /// Unmet conditions among `b ≥ 5`, `D ⊆ [0, b/2]` and `ε > 0`.
    pub violations: Vec<String>,
}

impl PairCorrelationHypotheses {
    pub fn hold(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn pair_correlation_hypotheses(set: &CantorSet) -> Result<PairCorrelationHypotheses> {
    let digits: Vec<i64> = set.digits().iter().map(|&d| i64::from(d)).collect();
    let digit_energy = additive_energy(&digits)?;
    let epsilon = 3.0 - digit_energy.exponent.unwrap_or(3.0);
    let ratio = f64::from(set.base()).ln() / (digits.len() as f64).ln();
    let mut violations = Vec::new();
    if set.base() < 5 {
        violations.push(format!("base {} is below 5", set.base()));
    }
    if let Some(&d) = set.digits().iter().find(|&&d| d > set.base() / 2) {
        violations.push(format!("digit {d} exceeds b/2"));
    }
    if epsilon <= 0.0 {
        violations.push(format!("energy exponent gives epsilon = {epsilon}"));
    }
    Ok(PairCorrelationHypotheses {
        digit_energy,
        epsilon,
        dimension_bound: 1.0 - epsilon / (3.0 + ratio),
        violations,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CantorCorrelation {
    pub alpha: f64,
    pub report: CorrelationReport,
    pub hypotheses: PairCorrelationHypotheses,
}

/// `R₂(s, N)` for `{α k_n}`. Violated hypotheses are reported, not raised.
pub fn cantor_pair_correlation(
    set: &CantorSet,
    alpha: &Frequency,
    s: f64,
    count: u64,
) -> Result<CantorCorrelation> {
    let report = pair_correlation(&cantor_phases(set, alpha, count), s)?;
    Ok(CantorCorrelation { alpha: alpha.to_f64(), report, hypotheses: pair_correlation_hypotheses(set)? })
}

/// `count` values in `[0, 1)` from a ChaCha8 stream seeded with `seed`.
pub fn seeded_alphas(seed: u64, count: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.random::<f64>()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_energy(a: &[i64]) -> u64 {
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

    fn brute_pairs(thetas: &[f64], s: f64) -> u64 {
        let mut x: Vec<f64> = thetas.iter().map(|t| t.rem_euclid(1.0)).collect();
        x.sort_by(f64::total_cmp);
        let threshold = s / x.len() as f64;
        let mut pairs = 0;
        for i in 0..x.len() {
            for j in 0..x.len() {
                if i != j {
                    let d = (x[i] - x[j]).abs();
                    pairs += u64::from(d < threshold || 1.0 - d < threshold);
                }
            }
        }
        pairs
    }

    #[test]
    fn energy_examples() {
        assert_eq!(additive_energy(&[0, 2]).unwrap().energy, BigUint::from(6u32));
        let e = additive_energy(&[0, 1, 3]).unwrap();
        assert_eq!(e.energy, BigUint::from(15u32));
        assert!(e.sidon);
        assert_eq!(additive_energy(&[5]).unwrap().energy, BigUint::from(1u32));
        assert!(additive_energy(&[0, 1, 4, 9, 11]).unwrap().sidon);
        assert!(!additive_energy(&[0, 1, 2]).unwrap().sidon);
    }

    #[test]
    fn energy_matches_quadruples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for size in [1, 2, 5, 12, 30] {
            let a: Vec<i64> = (0..size).map(|_| rng.random_range(-40..40)).collect();
            let set: Vec<i64> = a.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
            let e = additive_energy(&a).unwrap();
            assert_eq!(e.energy, BigUint::from(brute_energy(&set)));
            let n = set.len() as u64;
            assert!(e.energy >= BigUint::from(n * n) && e.energy <= BigUint::from(n * n * n));
        }
    }

    #[test]
    fn truncation_energy() {
        let c = CantorSet::new(7, [0, 1, 3]).unwrap();
        let t = cantor_truncation_energy(&c, 2).unwrap();
        assert_eq!(t.report.energy, BigUint::from(225u32));
        assert!(t.carry_free && t.direct);
        assert_eq!(t.product_formula, BigUint::from(225u32));
        assert_eq!(t.sumset_formula, BigUint::from(36u32));
        for s in 1..=3 {
            let t = cantor_truncation_energy(&c, s).unwrap();
            assert_eq!(t.report.energy, t.product_formula);
            let check = carry_free_sumset(&c, s).unwrap();
            assert!(check.sets_equal);
            assert_eq!(check.sumset_size as u64, check.formula);
        }
        let t = cantor_truncation_energy(&c, 1).unwrap();
        assert_eq!(t.report, t.digit_energy);

        let big = cantor_truncation_energy(&c, 12).unwrap();
        assert!(!big.direct);
        // 1 + 3 = 4 · 1 + 0 carries into the next place.
        let carries = CantorSet::new(4, [0, 1, 3]).unwrap();
        let t = cantor_truncation_energy(&carries, 2).unwrap();
        assert!(!t.carry_free);
        assert!(t.report.energy != t.product_formula);
        let check = carry_free_sumset(&carries, 2).unwrap();
        assert!(check.sets_equal && (check.sumset_size as u64) < check.formula);
        assert!(matches!(cantor_truncation_energy(&carries, 20), Err(Error::LevelTooLarge { .. })));
    }

    #[test]
    fn sweep_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1, 2, 3, 10, 100, 500] {
            let mut thetas: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            // Coincident points and points straddling the wrap.
            if n > 3 {
                thetas[1] = thetas[0];
                thetas[2] = 1.0 - 1e-4;
                thetas[3] = 1e-4;
            }
            for s in [0.1, 0.5, 0.99] {
                let r = pair_correlation(&thetas, s).unwrap();
                assert_eq!(r.pairs, brute_pairs(&thetas, s), "n = {n}, s = {s}");
            }
        }
    }

    #[test]
    fn degenerate_configurations() {
        let n = 1000;
        let grid: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        assert_eq!(pair_correlation(&grid, 0.9).unwrap().r2, 0.0);
        let mut dup = grid.clone();
        dup[5] = dup[4];
        assert_eq!(pair_correlation(&dup, 0.5).unwrap().pairs, 2);
        assert!(pair_correlation(&grid, 1.0).is_err());

        let c = CantorSet::new(7, [0, 1, 3]).unwrap();
        let r = cantor_pair_correlation(&c, &Frequency::zero(), 0.5, 64).unwrap();
        assert_eq!(r.report.r2, 63.0);
    }

    #[test]
    fn uniform_points_are_poissonian() {
        let thetas = seeded_alphas(2024, 10_000);
        let r = pair_correlation(&thetas, 0.5).unwrap();
        assert!((r.r2 - 1.0).abs() < 0.1, "{}", r.r2);
    }

    #[test]
    fn hypotheses_and_dimension_bound() {
        let c = CantorSet::new(7, [0, 1, 3]).unwrap();
        let h = pair_correlation_hypotheses(&c).unwrap();
        assert!(h.hold());
        assert!((h.epsilon - (3.0 - 15f64.ln() / 3f64.ln())).abs() < 1e-12);
        assert!((h.dimension_bound - 0.888).abs() < 0.005);
        let h = pair_correlation_hypotheses(&CantorSet::new(3, [0, 2]).unwrap()).unwrap();
        assert_eq!(h.violations.len(), 2);
    }

    #[test]
    fn phases_match_products() {
        let c = CantorSet::new(7, [0, 1, 3]).unwrap();
        let alpha = Frequency::real(std::f64::consts::FRAC_1_PI);
        let exact = alpha.exact();
        for (n, p) in cantor_phases(&c, &alpha, 3000).into_iter().enumerate() {
            let k = BigRational::from_integer(c.element(n as u64).into());
            let want = crate::frequency::frac(&(&exact * k)).to_f64().unwrap();
            let d = (p - want).abs();
            assert!(d.min(1.0 - d) < 1e-15);
        }
    }
}
