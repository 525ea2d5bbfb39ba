use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::phase::{to_fixed, EXACT_MODULUS_LIMIT};
use super::WeylSumResult;
use crate::digits::{mul_mod, pow_mod, CantorSet, IndexCursor, ResidueWalk};
use crate::error::{Error, Result};
use crate::frequency::{common_denominator, scaled_numerator, Frequency};
use crate::summation::{unit, ComplexSum};

/// Largest total degree accepted by polynomial Weyl sums.
pub const POLYNOMIAL_DEGREE_CAP: u32 = 5;

/// `coeff · x^x_power · y^y_power`, where `x = k_n` and `y = s_b(k_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub x_power: u32,
    pub y_power: u32,
    pub coeff: Frequency,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Polynomial {
    pub terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|m| m.x_power + m.y_power).max().unwrap_or(0)
    }

    /// `α x`.
    pub fn linear(alpha: Frequency) -> Self {
        Polynomial { terms: vec![Monomial { x_power: 1, y_power: 0, coeff: alpha }] }
    }

    fn exact_terms(&self) -> Vec<(u32, u32, BigRational)> {
        self.terms.iter().map(|m| (m.x_power, m.y_power, m.coeff.exact())).collect()
    }
}

/// Parses sums of terms such as `1/2*x^2*y + sqrt3*x + 1/3*y`.
impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for term in s.split('+').map(str::trim) {
            if term.is_empty() {
                return Err(Error::InvalidArgument(format!("empty term in polynomial {s:?}")));
            }
            let mut monomial = Monomial { x_power: 0, y_power: 0, coeff: Frequency::rational(1, 1) };
            let mut has_coeff = false;
            for factor in term.split('*').map(str::trim) {
                let (var, power) = match factor.split_once('^') {
                    Some((v, p)) => (v.trim(), Some(p.trim())),
                    None => (factor, None),
                };
                let power = match power {
                    Some(p) => p
                        .parse::<u32>()
                        .map_err(|e| Error::InvalidArgument(format!("bad exponent in {factor:?}: {e}")))?,
                    None => 1,
                };
                match var {
                    "x" | "k" => monomial.x_power += power,
                    "y" | "s" => monomial.y_power += power,
                    _ if !has_coeff && power == 1 => {
                        monomial.coeff = factor.parse()?;
                        has_coeff = true;
                    }
                    _ => {
                        return Err(Error::InvalidArgument(format!(
                            "unexpected factor {factor:?} in polynomial {s:?}"
                        )))
                    }
                }
            }
            terms.push(monomial);
        }
        Ok(Polynomial { terms })
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}", m.coeff)?;
            for (name, power) in [("x", m.x_power), ("y", m.y_power)] {
                match power {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    p => write!(f, "*{name}^{p}")?,
                }
            }
        }
        Ok(())
    }
}

/// Average of `e(p(k_n, s_b(k_n)))` over `0 <= n < count`.
pub fn polynomial_weyl_sum(set: &CantorSet, p: &Polynomial, count: u64) -> Result<WeylSumResult> {
    if p.degree() > POLYNOMIAL_DEGREE_CAP {
        return Err(Error::DegreeTooLarge { degree: p.degree(), cap: POLYNOMIAL_DEGREE_CAP });
    }
    exact_polynomial_average(set, &p.exact_terms(), 0, count)
}

/// Polynomial Weyl average with exact coefficients over `start <= n < end`.
///
/// Coefficients over a common denominator `Q < 2^62` are evaluated on
/// `(k_n mod Q, s_b(k_n) mod Q)`; otherwise members are built in full.
pub(crate) fn exact_polynomial_average(
    set: &CantorSet,
    terms: &[(u32, u32, BigRational)],
    start: u64,
    end: u64,
) -> Result<WeylSumResult> {
    if end <= start {
        return Err(Error::InvalidArgument(format!("empty index window [{start}, {end})")));
    }
    let q = common_denominator(terms.iter().map(|t| &t.2));
    let numerators: Vec<(u32, u32, BigUint)> =
        terms.iter().map(|(i, j, c)| (*i, *j, scaled_numerator(c, &q))).collect();
    let mut sum = ComplexSum::new();
    let start_index = BigUint::from(start);
    match q.to_u64().filter(|&q| q < EXACT_MODULUS_LIMIT) {
        Some(qs) => {
            let coeffs: Vec<(u32, u32, u64)> =
                numerators.iter().map(|(i, j, c)| (*i, *j, c.to_u64().unwrap())).collect();
            let mut walk = ResidueWalk::new(set, qs, qs, &start_index);
            for _ in start..end {
                let (k, s) = walk.current();
                let r = coeffs.iter().fold(0u64, |acc, &(i, j, c)| {
                    let term = mul_mod(
                        c,
                        mul_mod(pow_mod(k, u64::from(i), qs), pow_mod(s, u64::from(j), qs), qs),
                        qs,
                    );
                    (acc + term) % qs
                });
                sum.add(unit(r as f64 / qs as f64));
                walk.advance();
            }
        }
        None => {
            let mut cursor = IndexCursor::new(set, &start_index);
            let qi = BigInt::from(q.clone());
            for _ in start..end {
                let k = set.value_of_positions(cursor.positions());
                let s: u64 = cursor.positions().iter().map(|&p| u64::from(set.digits()[p])).sum();
                let s = BigUint::from(s);
                let mut r = BigUint::zero();
                for (i, j, c) in &numerators {
                    r += c * (k.pow(*i) % &q) * s.pow(*j);
                }
                let phase = BigRational::new(BigInt::from(r % &q), qi.clone());
                sum.add(unit(to_fixed(&phase) as f64 * (-64f64).exp2()));
                cursor.advance(|_| {});
            }
        }
    }
    Ok(WeylSumResult::from_sum(&sum, end - start))
}

impl Monomial {
    pub fn is_constant(&self) -> bool {
        self.x_power == 0 && self.y_power == 0
    }
}

impl Polynomial {
    /// True when every coefficient is rational with denominator dividing `q`.
    pub fn is_periodic_mod(&self, q: &BigUint) -> bool {
        self.terms.iter().all(|m| match m.coeff.denominator() {
            Some(d) => (q % d).is_zero(),
            None => false,
        })
    }
}
