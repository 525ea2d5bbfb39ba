//! Limiting and empirical distributions of `k_n` and `s_b(k_n)` modulo `q`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::digits::{mul_mod, pow_mod, CantorSet, ResidueWalk};
use crate::error::{Error, Result};
use crate::expsum::exact_limit;
use crate::frequency::Frequency;

#[derive(Clone, Debug, PartialEq)]
pub enum Masses {
    Predicted(Vec<BigRational>),
    Empirical { counts: Vec<u64>, sample_size: u64 },
}

/// A probability vector over `Z_q`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModDistribution {
    pub modulus: u64,
    pub masses: Masses,
}

impl ModDistribution {
    pub fn to_f64(&self) -> Vec<f64> {
        match &self.masses {
            Masses::Predicted(m) => m.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect(),
            Masses::Empirical { counts, sample_size } => {
                counts.iter().map(|&c| c as f64 / *sample_size as f64).collect()
            }
        }
    }

    /// Masses as exact rationals (empirical counts over the sample size).
    pub fn exact(&self) -> Vec<BigRational> {
        match &self.masses {
            Masses::Predicted(m) => m.clone(),
            Masses::Empirical { counts, sample_size } => counts
                .iter()
                .map(|&c| BigRational::new(BigInt::from(c), BigInt::from(*sample_size)))
                .collect(),
        }
    }

    pub fn total_variation(&self, other: &ModDistribution) -> f64 {
        assert_eq!(self.modulus, other.modulus, "moduli differ");
        total_variation(&self.to_f64(), &other.to_f64())
    }

    /// Distance to the uniform law on the multiples of `g` in `Z_q`.
    pub fn distance_to_subgroup(&self, g: u64) -> f64 {
        total_variation(&self.to_f64(), &subgroup_uniform(self.modulus, g))
    }

    pub fn distance_to_uniform(&self) -> f64 {
        self.distance_to_subgroup(1)
    }

    /// Residues carrying positive mass.
    pub fn support(&self) -> Vec<u64> {
        self.to_f64().iter().enumerate().filter(|(_, &m)| m > 0.0).map(|(i, _)| i as u64).collect()
    }
}

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Uniform law on the subgroup `g Z_q`, `g | q` after reduction.
pub fn subgroup_uniform(q: u64, g: u64) -> Vec<f64> {
    let g = g.gcd(&q);
    let size = (q / g) as f64;
    (0..q).map(|x| if x % g == 0 { 1.0 / size } else { 0.0 }).collect()
}

fn check_count(count: u64) -> Result<()> {
    if count == 0 {
        return Err(Error::InvalidArgument("sample size must be positive".into()));
    }
    Ok(())
}

fn check_modulus(q: u64) -> Result<()> {
    if q == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    Ok(())
}

/// Frequencies of `k_n mod q` over `n < count`.
pub fn empirical_mod_distribution(set: &CantorSet, q: u64, count: u64) -> Result<ModDistribution> {
    check_modulus(q)?;
    check_count(count)?;
    let mut counts = vec![0u64; q as usize];
    let mut walk = ResidueWalk::new(set, q, 1, &BigUint::zero());
    for _ in 0..count {
        counts[walk.current().0 as usize] += 1;
        walk.advance();
    }
    Ok(ModDistribution { modulus: q, masses: Masses::Empirical { counts, sample_size: count } })
}

/// `q = r·u` with `gcd(r, b) = 1` and every prime of `u` dividing `b`,
/// together with the least `j` such that `u | b^j`.
pub fn split_modulus(q: u64, b: u64) -> (u64, u64, u32) {
    let mut u = 1;
    let mut r = q;
    loop {
        let g = r.gcd(&b);
        if g == 1 {
            break;
        }
        r /= g;
        u *= g;
    }
    let mut j = 0;
    let mut power = 1 % u;
    while power != 0 {
        power = mul_mod(power, b, u);
        j += 1;
    }
    (r, u, j)
}

/// Largest `|D|^j · q` for which predicted masses are expanded exactly.
pub const PREDICTION_WORK_LIMIT: u64 = 1 << 26;

/// The limiting law of `k_n mod q`, exactly.
///
/// With `q = r·u` and `u | b^j` as in [`split_modulus`] and `g = gcd(r, s)`,
/// the limit is the law of `(k' + b^j g m) mod q` where `k'` is uniform on
/// `C ∩ [0, b^j)` and `m` is uniform on `[0, r/g)`, independently. The low
/// `j` digits fix the residue mod `u`, and the remaining high part is
/// uniform on the multiples of `g` mod `r`.
pub fn predicted_mod_distribution(set: &CantorSet, q: u64) -> Result<ModDistribution> {
    check_modulus(q)?;
    set.require_zero_digit("the limiting law of k_n mod q")?;
    let b = u64::from(set.base());
    let (r, _, j) = split_modulus(q, b);
    let g = r.gcd(&u64::from(set.step()));
    let low_count = (set.radix() as u64).checked_pow(j).unwrap_or(u64::MAX);
    let spread = r / g;
    let work = low_count.saturating_mul(spread).max(q);
    if work > PREDICTION_WORK_LIMIT {
        return Err(Error::LevelTooLarge { size: work, limit: PREDICTION_WORK_LIMIT });
    }
    let shift = mul_mod(pow_mod(b, u64::from(j), q), g % q, q);
    let mut counts = vec![0u64; q as usize];
    let mut walk = ResidueWalk::new(set, q, 1, &BigUint::zero());
    for _ in 0..low_count {
        let low = walk.current().0;
        for m in 0..spread {
            counts[((low + mul_mod(shift, m, q)) % q) as usize] += 1;
        }
        walk.advance();
    }
    let total = BigInt::from(low_count * spread);
    let masses = counts.into_iter().map(|c| BigRational::new(BigInt::from(c), total.clone())).collect();
    Ok(ModDistribution { modulus: q, masses: Masses::Predicted(masses) })
}

/// Density of `k_n ≡ 0 (mod q)` over `n < count`.
pub fn zero_residue_density(set: &CantorSet, q: u64, count: u64) -> Result<f64> {
    set.require_zero_digit("the zero-residue density")?;
    check_count(count)?;
    Ok(empirical_mod_distribution(set, q, count)?.to_f64()[0])
}

/// Frequencies of `s_b(k_n) mod q` over `n < count`, for `gcd(q, b) = 1`.
pub fn sum_digits_mod_distribution(set: &CantorSet, q: u64, count: u64) -> Result<ModDistribution> {
    check_modulus(q)?;
    check_count(count)?;
    if q.gcd(&u64::from(set.base())) != 1 {
        return Err(Error::HypothesisViolated(format!(
            "digit sums mod {q} need gcd(q, b) = 1, base is {}",
            set.base()
        )));
    }
    let mut counts = vec![0u64; q as usize];
    let mut walk = ResidueWalk::new(set, 1, q, &BigUint::zero());
    for _ in 0..count {
        counts[walk.current().1 as usize] += 1;
        walk.advance();
    }
    Ok(ModDistribution { modulus: q, masses: Masses::Empirical { counts, sample_size: count } })
}

/// Generator `gcd(q, s)` of the subgroup carrying the limiting law of
/// `s_b(k_n) mod q`.
pub fn digit_sum_subgroup(set: &CantorSet, q: u64) -> u64 {
    q.gcd(&u64::from(set.step()))
}

/// Joint frequencies of `(k_n mod a, s_b(k_n) mod a2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    pub a: u64,
    pub a2: u64,
    /// Row-major, `counts[x * a2 + y]`.
    pub counts: Vec<u64>,
    pub sample_size: u64,
}

impl JointDistribution {
    pub fn mass(&self, x: u64, y: u64) -> f64 {
        self.counts[(x * self.a2 + y) as usize] as f64 / self.sample_size as f64
    }

    /// Law of `k_n mod a`.
    pub fn row_marginal(&self) -> Vec<f64> {
        (0..self.a).map(|x| (0..self.a2).map(|y| self.mass(x, y)).sum()).collect()
    }

    pub fn distance_to_uniform(&self) -> f64 {
        let cells = (self.a * self.a2) as f64;
        0.5 * self
            .counts
            .iter()
            .map(|&c| (c as f64 / self.sample_size as f64 - 1.0 / cells).abs())
            .sum::<f64>()
    }
}

fn check_joint_hypothesis(set: &CantorSet) -> Result<()> {
    if set.step() == 1 || set.step_divides_digits() {
        Ok(())
    } else {
        Err(Error::HypothesisViolated(format!(
            "{set}: some digit is not a multiple of the step {}",
            set.step()
        )))
    }
}

pub fn joint_mod_distribution(set: &CantorSet, a: u64, a2: u64, count: u64) -> Result<JointDistribution> {
    check_modulus(a)?;
    check_modulus(a2)?;
    check_count(count)?;
    check_joint_hypothesis(set)?;
    let mut counts = vec![0u64; (a * a2) as usize];
    let mut walk = ResidueWalk::new(set, a, a2, &BigUint::zero());
    for _ in 0..count {
        let (x, y) = walk.current();
        counts[(x * a2 + y) as usize] += 1;
        walk.advance();
    }
    Ok(JointDistribution { a, a2, counts, sample_size: count })
}

/// Sufficient arithmetic condition for the joint law mod `(a, a2)` to be
/// uniform.
///
/// With step 1: `gcd(b(b−1), a) = 1`, or `gcd(b−1, a2) = 1` together with
/// `gcd(b, a) = 1`. With step `s > 1`: `gcd(sb(b−1), a) = 1` together with
/// `gcd(s, a2) = 1`, or `gcd(s(b−1), a2) = 1` together with `gcd(sb, a) = 1`.
pub fn joint_uniformity_criterion(set: &CantorSet, a: u64, a2: u64) -> bool {
    let b = u64::from(set.base());
    let s = u64::from(set.step());
    let coprime = |x: u64, y: u64| x.gcd(&y) == 1;
    if s == 1 {
        coprime(b * (b - 1), a) || (coprime(b - 1, a2) && coprime(b, a))
    } else {
        (coprime(s * b * (b - 1), a) && coprime(s, a2)) || (coprime(s * (b - 1), a2) && coprime(s * b, a))
    }
}

/// Decides exactly whether the limiting joint law mod `(a, a2)` is uniform,
/// by checking that every nontrivial character `e(h k/a + h2 s/a2)` has
/// limit zero.
pub fn joint_law_is_uniform(set: &CantorSet, a: u64, a2: u64) -> Result<bool> {
    check_modulus(a)?;
    check_modulus(a2)?;
    check_joint_hypothesis(set)?;
    for h in 0..a {
        for h2 in 0..a2 {
            if h == 0 && h2 == 0 {
                continue;
            }
            let alpha = Frequency::rational(h as i64, a);
            let beta = Frequency::rational(h2 as i64, a2);
            if exact_limit(set, &alpha, &beta)?.norm() > 1e-12 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True when the exact masses are nonnegative and sum to one.
pub fn is_probability(masses: &[BigRational]) -> bool {
    let total: BigRational = masses.iter().cloned().sum();
    total.is_one() && masses.iter().all(|m| !m.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(b: u32, d: &[u32]) -> CantorSet {
        CantorSet::new(b, d.iter().copied()).unwrap()
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn modulus_split() {
        assert_eq!(split_modulus(12, 10), (3, 4, 2));
        assert_eq!(split_modulus(7, 3), (7, 1, 0));
        assert_eq!(split_modulus(9, 3), (1, 9, 2));
        assert_eq!(split_modulus(1, 3), (1, 1, 0));
    }

    #[test]
    fn predicted_examples() {
        let c = set(3, &[0, 2]);
        let p = predicted_mod_distribution(&c, 3).unwrap();
        assert_eq!(p.exact(), vec![ratio(1, 2), ratio(0, 1), ratio(1, 2)]);
        let p = predicted_mod_distribution(&c, 2).unwrap();
        assert_eq!(p.exact(), vec![ratio(1, 1), ratio(0, 1)]);
        let p = predicted_mod_distribution(&set(3, &[0, 1]), 2).unwrap();
        assert_eq!(p.exact(), vec![ratio(1, 2), ratio(1, 2)]);
        assert!(predicted_mod_distribution(&set(4, &[1, 3]), 2).is_err());
    }

    #[test]
    fn empirical_examples() {
        let c = set(3, &[0, 2]);
        assert_eq!(empirical_mod_distribution(&c, 2, 1 << 12).unwrap().to_f64(), vec![1.0, 0.0]);
        let d = empirical_mod_distribution(&set(3, &[0, 1]), 2, 1 << 14).unwrap().to_f64();
        assert!((d[0] - 0.5).abs() < 0.02);
        assert_eq!(empirical_mod_distribution(&c, 1, 10).unwrap().to_f64(), vec![1.0]);
    }

    #[test]
    fn mixed_modulus_prediction_matches_scan() {
        for (c, q) in [(set(10, &[0, 3, 5]), 12), (set(6, &[0, 2, 4]), 8), (set(4, &[0, 1, 3]), 6)] {
            let p = predicted_mod_distribution(&c, q).unwrap();
            let n = (c.radix() as u64).pow(11);
            let e = empirical_mod_distribution(&c, q, n).unwrap();
            assert!(p.total_variation(&e) < 0.02, "{c} mod {q}: {}", p.total_variation(&e));
            assert!(is_probability(&p.exact()));
        }
    }

    #[test]
    fn digit_sums_on_subgroups() {
        let c = set(3, &[0, 2]);
        let d = sum_digits_mod_distribution(&c, 4, 1 << 16).unwrap();
        assert_eq!(d.support(), vec![0, 2]);
        assert!(d.distance_to_subgroup(digit_sum_subgroup(&c, 4)) < 0.02);
        assert!(sum_digits_mod_distribution(&c, 6, 10).is_err());
    }

    #[test]
    fn joint_law_counterexamples_to_the_weaker_criterion() {
        // gcd(b-1, a2) = 1 alone does not give uniformity: k mod 3 is the last digit.
        let c = set(3, &[0, 1]);
        assert!(!joint_law_is_uniform(&c, 3, 5).unwrap());
        assert!(!joint_uniformity_criterion(&c, 3, 5));
        // With step 2 the digit sums are always even.
        let c = set(3, &[0, 2]);
        assert!(!joint_law_is_uniform(&c, 5, 2).unwrap());
        assert!(!joint_uniformity_criterion(&c, 5, 2));
    }

    #[test]
    fn criterion_implies_exact_uniformity() {
        for c in [set(3, &[0, 1]), set(5, &[0, 2, 3]), set(3, &[0, 2]), set(7, &[0, 3, 6])] {
            for a in 1..=8 {
                for a2 in 1..=8 {
                    if joint_uniformity_criterion(&c, a, a2) {
                        assert!(joint_law_is_uniform(&c, a, a2).unwrap(), "{c} ({a},{a2})");
                    }
                }
            }
        }
    }
}
