use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A frequency `α` or `β`, read modulo 1.
///
/// Rationality is carried by the variant, never inferred from a float.
#[derive(Clone, Debug, PartialEq)]
pub enum Frequency {
    /// Lowest terms, reduced into `[0, 1)`.
    Rational(BigRational),
    /// A real number standing for an irrational frequency.
    Real(f64),
}

/// `x mod 1` in `[0, 1)`.
pub(crate) fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

impl Frequency {
    pub fn rational(num: i64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let r = BigRational::new(BigInt::from(num), BigInt::from(den));
        Frequency::Rational(frac(&r))
    }

    pub fn from_ratio(r: BigRational) -> Self {
        Frequency::Rational(frac(&r))
    }

    pub fn real(x: f64) -> Self {
        Frequency::Real(x)
    }

    pub fn zero() -> Self {
        Frequency::Rational(BigRational::zero())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Frequency::Rational(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Frequency::Rational(r) => r.is_zero(),
            Frequency::Real(x) => x.rem_euclid(1.0) == 0.0,
        }
    }

    /// The exact value in `[0, 1)`. A real is converted through its binary
    /// expansion, so the result is dyadic.
    pub fn exact(&self) -> BigRational {
        match self {
            Frequency::Rational(r) => r.clone(),
            Frequency::Real(x) => {
                let r = BigRational::from_float(*x).expect("finite frequency");
                frac(&r)
            }
        }
    }

    /// Approximate value in `[0, 1)`.
    pub fn to_f64(&self) -> f64 {
        match self {
            Frequency::Rational(r) => r.to_f64().unwrap_or(0.0),
            Frequency::Real(x) => x.rem_euclid(1.0),
        }
    }

    /// Denominator of a rational frequency.
    pub fn denominator(&self) -> Option<BigUint> {
        match self {
            Frequency::Rational(r) => r.denom().to_biguint(),
            Frequency::Real(_) => None,
        }
    }
}

/// Named irrational constants accepted by the parser.
pub const NAMED_CONSTANTS: &[(&str, f64)] = &[
    ("sqrt2", std::f64::consts::SQRT_2),
    ("sqrt2m1", std::f64::consts::SQRT_2 - 1.0),
    ("sqrt3", 1.732_050_807_568_877_2),
    ("sqrt5", 2.236_067_977_499_79),
    ("golden", 1.618_033_988_749_895),
    ("pi", std::f64::consts::PI),
    ("e", std::f64::consts::E),
];

/// `p/q` and plain integers are rational; decimals, exponents and named
/// constants are real.
impl FromStr for Frequency {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |msg: String| Error::InvalidArgument(format!("frequency {s:?}: {msg}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = num.trim().parse().map_err(|e| bad(format!("{e}")))?;
            let den: BigInt = den.trim().parse().map_err(|e| bad(format!("{e}")))?;
            if den.is_zero() {
                return Err(bad("zero denominator".into()));
            }
            return Ok(Frequency::from_ratio(BigRational::new(num, den)));
        }
        if let Some(&(_, v)) = NAMED_CONSTANTS.iter().find(|(name, _)| *name == s) {
            return Ok(Frequency::Real(v));
        }
        if let Ok(n) = s.parse::<BigInt>() {
            return Ok(Frequency::from_ratio(BigRational::from_integer(n)));
        }
        let x: f64 = s.parse().map_err(|e| bad(format!("{e}")))?;
        if !x.is_finite() {
            return Err(bad("not finite".into()));
        }
        Ok(Frequency::Real(x))
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Frequency::Rational(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Frequency::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Frequency::Real(x) => {
                let s = format!("{x:?}");
                // Keep a decimal point so the value parses back as real.
                if s.contains(['.', 'e', 'E']) {
                    f.write_str(&s)
                } else {
                    write!(f, "{s}.0")
                }
            }
        }
    }
}

/// Least common multiple of the denominators of exact values.
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigUint {
    values.into_iter().fold(BigUint::one(), |acc, v| {
        let d = v.denom().abs().to_biguint().expect("positive denominator");
        acc.lcm(&d)
    })
}

/// Numerator of `v` over the common denominator `q`, reduced into `[0, q)`.
pub(crate) fn scaled_numerator(v: &BigRational, q: &BigUint) -> BigUint {
    let v = frac(v);
    let q = BigInt::from(q.clone());
    let n = v.numer() * (&q / v.denom());
    n.mod_floor(&q).to_biguint().expect("nonnegative residue")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntax_decides_the_tag() {
        assert_eq!("1/2".parse::<Frequency>().unwrap(), Frequency::rational(1, 2));
        assert_eq!("3/2".parse::<Frequency>().unwrap(), Frequency::rational(1, 2));
        assert_eq!("-1/3".parse::<Frequency>().unwrap(), Frequency::rational(2, 3));
        assert_eq!("0".parse::<Frequency>().unwrap(), Frequency::zero());
        assert!(matches!("0.5".parse::<Frequency>().unwrap(), Frequency::Real(x) if x == 0.5));
        let r = "0.4142135623730951".parse::<Frequency>().unwrap();
        assert!(!r.is_rational());
        assert!(matches!("sqrt2m1".parse::<Frequency>().unwrap(), Frequency::Real(_)));
        assert!("1/0".parse::<Frequency>().is_err());
        assert!("x".parse::<Frequency>().is_err());
    }

    #[test]
    fn display_roundtrip() {
        for s in ["1/2", "0", "2/7", "0.25", "0.4142135623730951", "3.0"] {
            let f: Frequency = s.parse().unwrap();
            assert_eq!(f.to_string().parse::<Frequency>().unwrap(), f, "{s}");
        }
    }

    #[test]
    fn exact_value_of_real_is_dyadic() {
        let f = Frequency::real(1.25);
        assert_eq!(f.exact(), BigRational::new(1.into(), 4.into()));
        let q = common_denominator([&f.exact(), &Frequency::rational(1, 3).exact()]);
        assert_eq!(q, BigUint::from(12u32));
        assert_eq!(scaled_numerator(&Frequency::rational(1, 3).exact(), &q), BigUint::from(4u32));
    }
}
