//! Exponential sums `E_n e(k_n α + s_b(k_n) β)` over a Cantor set.

mod limit;
pub(crate) mod phase;
mod poly;

pub use limit::{classify_limit, exact_limit, verify_witness, LimitClass};
pub(crate) use poly::exact_polynomial_average;
pub use poly::{polynomial_weyl_sum, Monomial, Polynomial, POLYNOMIAL_DEGREE_CAP};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::digits::CantorSet;
use crate::error::{Error, Result};
use crate::frequency::{frac, Frequency};
use crate::summation::{unit, ComplexSum};
use phase::PhaseWalk;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeylSumResult {
    pub value: Complex64,
    pub count: u64,
    pub magnitude: f64,
}

impl WeylSumResult {
    pub(crate) fn from_sum(sum: &ComplexSum, count: u64) -> Self {
        let value = sum.value() / count as f64;
        WeylSumResult { value, count, magnitude: value.norm() }
    }
}

/// `L̂(θ) = |D|^{-1} Σ_{d∈D} e(dθ)` for an exact `θ`.
pub(crate) fn lhat_exact(set: &CantorSet, theta: &BigRational) -> Complex64 {
    let mut sum = ComplexSum::new();
    for &d in set.digits() {
        let phase = frac(&(theta * BigRational::from_integer(BigInt::from(d))));
        sum.add(unit(phase.to_f64().unwrap_or(0.0)));
    }
    sum.value() / set.radix() as f64
}

/// The one-step Fourier factor `L̂(θ)`.
pub fn lhat(set: &CantorSet, theta: &Frequency) -> Complex64 {
    lhat_exact(set, &theta.exact())
}

/// Factors `L̂(b^j α + β)` for `j < k`, with `b^j α` reduced exactly.
pub(crate) fn riesz_factors<'a>(
    set: &'a CantorSet,
    alpha: &BigRational,
    beta: &BigRational,
    k: u32,
) -> impl Iterator<Item = Complex64> + 'a {
    let base = BigRational::from_integer(BigInt::from(set.base()));
    let beta = beta.clone();
    let mut shifted = frac(alpha);
    (0..k).map(move |_| {
        let factor = lhat_exact(set, &frac(&(&shifted + &beta)));
        shifted = frac(&(&shifted * &base));
        factor
    })
}

/// `∏_{j<k} L̂(b^j α + β)`. When `0 ∈ D` this equals the Weyl sum over the
/// first `|D|^k` members.
pub fn riesz_product(set: &CantorSet, alpha: &Frequency, beta: &Frequency, k: u32) -> Complex64 {
    riesz_factors(set, &alpha.exact(), &beta.exact(), k).product()
}

/// Average of `e(k_n α + s_b(k_n) β)` over `0 <= n < count`.
pub fn weyl_sum(set: &CantorSet, alpha: &Frequency, beta: &Frequency, count: u64) -> Result<WeylSumResult> {
    weyl_sum_window(set, alpha, beta, 0, count)
}

/// Average of `e(k_n α + s_b(k_n) β)` over `start <= n < end`.
pub fn weyl_sum_window(
    set: &CantorSet,
    alpha: &Frequency,
    beta: &Frequency,
    start: u64,
    end: u64,
) -> Result<WeylSumResult> {
    exact_weyl_window(set, &alpha.exact(), &beta.exact(), start, end)
}

pub(crate) fn exact_weyl_window(
    set: &CantorSet,
    alpha: &BigRational,
    beta: &BigRational,
    start: u64,
    end: u64,
) -> Result<WeylSumResult> {
    if end <= start {
        return Err(Error::InvalidArgument(format!("empty index window [{start}, {end})")));
    }
    let mut walk = PhaseWalk::new(set, alpha, beta, &BigUint::from(start));
    let mut sum = ComplexSum::new();
    for _ in start..end {
        sum.add(unit(walk.phase()));
        walk.advance();
    }
    Ok(WeylSumResult::from_sum(&sum, end - start))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(b: u32, d: &[u32]) -> CantorSet {
        CantorSet::new(b, d.iter().copied()).unwrap()
    }

    fn naive_weyl(set: &CantorSet, alpha: f64, beta: f64, n: u64) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let k = set.element(i);
            let s = set.sum_digits(&k) as f64;
            z += unit((k.to_f64().unwrap() * alpha + s * beta).rem_euclid(1.0));
        }
        z / n as f64
    }

    #[test]
    fn lhat_examples() {
        let c = set(3, &[0, 2]);
        assert_eq!(lhat(&c, &Frequency::zero()), Complex64::new(1.0, 0.0));
        assert!((lhat(&c, &Frequency::rational(1, 2)) - 1.0).norm() < 1e-15);
        let d: Vec<u32> = (0..20).map(|i| 1 + 5 * i).collect();
        let c = CantorSet::new(101, d).unwrap();
        for p in 1..5 {
            assert!((lhat(&c, &Frequency::rational(p, 5)).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn weyl_matches_naive_for_small_members() {
        let c = set(5, &[0, 1, 3]);
        let w = weyl_sum(&c, &Frequency::rational(2, 7), &Frequency::rational(1, 3), 500).unwrap();
        let naive = naive_weyl(&c, 2.0 / 7.0, 1.0 / 3.0, 500);
        assert!((w.value - naive).norm() < 1e-9);
    }

    #[test]
    fn riesz_identity() {
        let c = set(3, &[0, 2]);
        let alpha = Frequency::real(std::f64::consts::SQRT_2 - 1.0);
        let beta = Frequency::rational(1, 5);
        for k in 1..=8 {
            let r = riesz_product(&c, &alpha, &beta, k);
            let w = weyl_sum(&c, &alpha, &beta, 2u64.pow(k)).unwrap();
            assert!((r - w.value).norm() < 1e-9, "k = {k}");
        }
    }

    #[test]
    fn even_members() {
        let c = set(3, &[0, 2]);
        let w = weyl_sum(&c, &Frequency::rational(1, 2), &Frequency::zero(), 777).unwrap();
        assert!((w.value - 1.0).norm() < 1e-12);
        assert!(weyl_sum(&c, &Frequency::zero(), &Frequency::zero(), 0).is_err());
    }

    #[test]
    fn window_composes_linearly() {
        let c = set(7, &[0, 1, 3]);
        let a = Frequency::real(0.3271);
        let b = Frequency::zero();
        let whole = weyl_sum(&c, &a, &b, 3000).unwrap();
        let left = weyl_sum_window(&c, &a, &b, 0, 1200).unwrap();
        let right = weyl_sum_window(&c, &a, &b, 1200, 3000).unwrap();
        let merged = (left.value * 1200.0 + right.value * 1800.0) / 3000.0;
        assert!((merged - whole.value).norm() < 1e-12);
    }
}
