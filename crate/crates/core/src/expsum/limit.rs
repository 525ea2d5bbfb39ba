use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::lhat_exact;
use crate::digits::CantorSet;
use crate::error::{Error, Result};
use crate::frequency::{frac, Frequency};

/// Which limits of `E_{n<N} e(k_n α + s_b(k_n) β)` are possible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitClass {
    /// `α = β = 0`.
    One,
    Zero,
    /// The limit exists and may be nonzero; the witnesses satisfy
    /// `sα ≡ a/(b−1) + r/b^t` and `sβ ≡ −a/(b−1)` (mod 1).
    NonzeroPossible {
        a: u64,
        r: BigUint,
        t: u32,
    },
    /// The witnesses exist but some digit is not a multiple of the step, so
    /// the limit can fail to exist.
    MayNotExist {
        a: u64,
        r: BigUint,
        t: u32,
    },
}

fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Smallest `t` with `den | b^t`, if any.
fn adic_exponent(den: &BigUint, base: u32) -> Option<u32> {
    let b = BigUint::from(base);
    let mut rest = den.clone();
    let mut t = 0;
    while !rest.is_one() {
        let g = rest.gcd(&b);
        if g.is_one() {
            return None;
        }
        rest /= g;
        t += 1;
    }
    Some(t)
}

/// Exact search for `(a, r, t)` with `a < b−1`, `r < b^t` and `t` minimal.
fn witnesses(set: &CantorSet, alpha: &BigRational, beta: &BigRational) -> Option<(u64, BigUint, u32)> {
    let s = BigRational::from_integer(BigInt::from(set.step()));
    let bm1 = u64::from(set.base() - 1);
    let s_alpha = frac(&(&s * alpha));
    let s_beta = frac(&(&s * beta));
    let v = &s_beta * BigRational::from_integer(BigInt::from(bm1));
    if !v.is_integer() {
        return None;
    }
    let a = (-v.to_integer()).mod_floor(&BigInt::from(bm1));
    let a: u64 = a.try_into().expect("residue below b-1");
    let x = frac(&(s_alpha - ratio(a, bm1)));
    let den = x.denom().to_biguint().expect("positive denominator");
    let t = adic_exponent(&den, set.base())?;
    let scale = BigUint::from(set.base()).pow(t);
    let r = (x * BigRational::from_integer(BigInt::from(scale))).to_integer();
    Some((a, r.to_biguint().expect("nonnegative"), t))
}

/// Exact check of the witness congruences.
pub fn verify_witness(
    set: &CantorSet,
    alpha: &Frequency,
    beta: &Frequency,
    a: u64,
    r: &BigUint,
    t: u32,
) -> bool {
    if !(alpha.is_rational() && beta.is_rational()) {
        return false;
    }
    let s = BigRational::from_integer(BigInt::from(set.step()));
    let bm1 = u64::from(set.base() - 1);
    let bt = BigUint::from(set.base()).pow(t);
    let lhs_alpha = frac(&(&s * alpha.exact()));
    let rhs_alpha = frac(&(ratio(a, bm1) + ratio(r.clone(), bt)));
    let lhs_beta = frac(&(&s * beta.exact()));
    let rhs_beta = frac(&-ratio(a, bm1));
    lhs_alpha == rhs_alpha && lhs_beta == rhs_beta
}

/// Classifies the limit of the Weyl averages at `(α, β)`.
///
/// A real (irrational) coordinate forces `Zero` unless both are zero.
pub fn classify_limit(set: &CantorSet, alpha: &Frequency, beta: &Frequency) -> LimitClass {
    if alpha.is_zero() && beta.is_zero() {
        return LimitClass::One;
    }
    if !(alpha.is_rational() && beta.is_rational()) {
        return LimitClass::Zero;
    }
    match witnesses(set, &alpha.exact(), &beta.exact()) {
        None => LimitClass::Zero,
        Some((a, r, t)) if set.step_divides_digits() => LimitClass::NonzeroPossible { a, r, t },
        Some((a, r, t)) => LimitClass::MayNotExist { a, r, t },
    }
}

/// Longest preperiod plus period scanned by [`exact_limit`].
pub const EXACT_LIMIT_MAX_ORBIT: u64 = 1 << 20;

/// The limit of the Riesz products `∏_{j<k} L̂(b^j α + β)` for rational
/// `(α, β)` and `0 ∈ D`.
///
/// `b^j α mod 1` is eventually periodic. A periodic factor of modulus 1
/// equals 1 exactly (every digit is a multiple of the step), so the limit is
/// the preperiodic product when every periodic factor is 1, and 0 otherwise.
pub fn exact_limit(set: &CantorSet, alpha: &Frequency, beta: &Frequency) -> Result<Complex64> {
    set.require_zero_digit("the Riesz-product limit")?;
    if !(alpha.is_rational() && beta.is_rational()) {
        return Err(Error::InvalidArgument("exact limits need rational frequencies".into()));
    }
    let beta = beta.exact();
    let base = BigRational::from_integer(BigInt::from(set.base()));
    let step = BigRational::from_integer(BigInt::from(set.step()));
    let mut seen: HashMap<BigRational, usize> = HashMap::new();
    let mut orbit: Vec<BigRational> = Vec::new();
    let mut current = alpha.exact();
    let cycle_start = loop {
        if let Some(&j) = seen.get(&current) {
            break j;
        }
        if orbit.len() as u64 >= EXACT_LIMIT_MAX_ORBIT {
            return Err(Error::LevelTooLarge { size: orbit.len() as u64, limit: EXACT_LIMIT_MAX_ORBIT });
        }
        seen.insert(current.clone(), orbit.len());
        orbit.push(current.clone());
        current = frac(&(&current * &base));
    };
    let cycle_is_trivial =
        orbit[cycle_start..].iter().all(|theta| (&step * frac(&(theta + &beta))).is_integer());
    if !cycle_is_trivial {
        return Ok(Complex64::zero());
    }
    Ok(orbit[..cycle_start].iter().map(|theta| lhat_exact(set, &frac(&(theta + &beta)))).product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expsum::{riesz_product, weyl_sum};

    fn set(b: u32, d: &[u32]) -> CantorSet {
        CantorSet::new(b, d.iter().copied()).unwrap()
    }

    #[test]
    fn classification_examples() {
        let c = set(3, &[0, 2]);
        let zero = Frequency::zero();
        assert_eq!(classify_limit(&c, &zero, &zero), LimitClass::One);
        assert_eq!(
            classify_limit(&c, &Frequency::rational(1, 2), &zero),
            LimitClass::NonzeroPossible { a: 0, r: BigUint::zero(), t: 0 }
        );
        assert_eq!(classify_limit(&c, &Frequency::rational(1, 5), &zero), LimitClass::Zero);
        assert_eq!(classify_limit(&c, &Frequency::real(0.3), &zero), LimitClass::Zero);
        assert_eq!(classify_limit(&c, &Frequency::real(0.0), &zero), LimitClass::One);
    }

    #[test]
    fn witnesses_verify() {
        let c = set(5, &[0, 1, 3]);
        let alpha = Frequency::from_ratio(ratio(3, 4) + ratio(1, 25));
        let beta = Frequency::rational(1, 4);
        match classify_limit(&c, &alpha, &beta) {
            LimitClass::NonzeroPossible { a, r, t } => {
                assert_eq!((a, t), (3, 2));
                assert!(verify_witness(&c, &alpha, &beta, a, &r, t));
                assert!(!verify_witness(&c, &alpha, &beta, (a + 1) % 4, &r, t));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn step_not_dividing_digits() {
        let c = set(5, &[1, 3]);
        assert!(matches!(
            classify_limit(&c, &Frequency::rational(1, 2), &Frequency::zero()),
            LimitClass::MayNotExist { .. }
        ));
    }

    #[test]
    fn exact_limit_matches_long_products() {
        let c = set(5, &[0, 1, 3]);
        for (a, b) in [((1, 4), (0, 1)), ((1, 2), (1, 4)), ((1, 5), (0, 1)), ((3, 8), (1, 4))] {
            let alpha = Frequency::rational(a.0, a.1);
            let beta = Frequency::rational(b.0, b.1);
            let limit = exact_limit(&c, &alpha, &beta).unwrap();
            let long = riesz_product(&c, &alpha, &beta, 60);
            assert!((limit - long).norm() < 1e-9, "{alpha} {beta}");
        }
        let c = set(3, &[0, 2]);
        let limit = exact_limit(&c, &Frequency::rational(1, 2), &Frequency::zero()).unwrap();
        assert!((limit - 1.0).norm() < 1e-15);
        let w = weyl_sum(&c, &Frequency::rational(1, 2), &Frequency::zero(), 1 << 10).unwrap();
        assert!((w.value - limit).norm() < 1e-12);
    }
}
