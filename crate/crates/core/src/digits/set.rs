use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A classical integer Cantor set `C(b, D)`: the nonnegative integers whose
/// base-`b` digits all lie in `D`.
///
/// Digits are stored sorted and must satisfy `0 <= d < b` with
/// `2 <= |D| < b`. Members are enumerated 0-based, `k_0 < k_1 < ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CantorSet {
    base: u32,
    digits: Vec<u32>,
    step: u32,
}

impl CantorSet {
    pub fn new(base: u32, digits: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut digits: Vec<u32> = digits.into_iter().collect();
        digits.sort_unstable();
        if base < 3 {
            return Err(Error::InvalidCantorSet(format!("base {base} must be at least 3")));
        }
        if digits.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCantorSet("digits must be distinct".into()));
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::InvalidCantorSet(format!("digit {d} is not in [0, {base})")));
        }
        if digits.len() < 2 || digits.len() >= base as usize {
            return Err(Error::InvalidCantorSet(format!(
                "need 2 <= |D| < b, got |D| = {} with b = {base}",
                digits.len()
            )));
        }
        let d0 = digits[0];
        let step = digits.iter().fold(0u32, |g, &d| g.gcd(&(d - d0)));
        Ok(CantorSet { base, digits, step })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Allowed digits in increasing order.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// `|D|`, the radix of the index space.
    pub fn radix(&self) -> usize {
        self.digits.len()
    }

    /// Largest `s` such that `D` lies in an arithmetic progression of step `s`.
    pub fn step(&self) -> u32 {
        self.step
    }

    /// `log |D| / log b`.
    pub fn dim(&self) -> f64 {
        (self.radix() as f64).ln() / (self.base as f64).ln()
    }

    pub fn has_zero(&self) -> bool {
        self.digits[0] == 0
    }

    /// True when every digit is a multiple of the step.
    pub fn step_divides_digits(&self) -> bool {
        self.digits.iter().all(|d| d % self.step == 0)
    }

    /// Position of `d` in the sorted digit list.
    pub fn digit_position(&self, d: u32) -> Option<usize> {
        self.digits.binary_search(&d).ok()
    }

    pub(crate) fn require_zero_digit(&self, what: &str) -> Result<()> {
        if self.has_zero() {
            Ok(())
        } else {
            Err(Error::HypothesisViolated(format!("{what} requires 0 to be an allowed digit of {self}")))
        }
    }
}

impl fmt::Display for CantorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b={};D=", self.base)?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Parses the canonical textual form `b=3;D=0,2`.
impl FromStr for CantorSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let spec = DigitSpec::from_str(s)?;
        spec.to_cantor_set()
    }
}

/// A base together with a possibly signed list of digit representatives, as
/// written in a config (`b=9;D=-2,-1,0,1,2`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitSpec {
    pub base: u32,
    pub digits: Vec<i64>,
}

impl DigitSpec {
    pub fn is_signed(&self) -> bool {
        self.digits.iter().any(|&d| d < 0)
    }

    /// Interprets the digits as a nonnegative Cantor set.
    pub fn to_cantor_set(&self) -> Result<CantorSet> {
        let digits = self
            .digits
            .iter()
            .map(|&d| {
                u32::try_from(d).map_err(|_| {
                    Error::InvalidCantorSet(format!(
                        "digit {d} is negative; signed representatives are only \
                         meaningful for residue-based kernel searches"
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        CantorSet::new(self.base, digits)
    }

    /// Digits reduced into `Z_b`, sorted and deduplicated.
    pub fn residues(&self) -> Vec<u32> {
        let b = i64::from(self.base);
        let mut r: Vec<u32> = self.digits.iter().map(|d| d.rem_euclid(b) as u32).collect();
        r.sort_unstable();
        r.dedup();
        r
    }
}

impl fmt::Display for DigitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b={};D=", self.base)?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for DigitSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut base = None;
        let mut digits = None;
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidCantorSet(format!("expected key=value, got {part:?}")))?;
            match key.trim() {
                "b" => {
                    base = Some(
                        value
                            .trim()
                            .parse::<u32>()
                            .map_err(|e| Error::InvalidCantorSet(format!("bad base {value:?}: {e}")))?,
                    )
                }
                "D" => {
                    digits = Some(
                        value
                            .split(',')
                            .map(|d| {
                                d.trim()
                                    .parse::<i64>()
                                    .map_err(|e| Error::InvalidCantorSet(format!("bad digit {d:?}: {e}")))
                            })
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                other => {
                    return Err(Error::InvalidCantorSet(format!("unknown key {other:?}")));
                }
            }
        }
        match (base, digits) {
            (Some(base), Some(digits)) => {
                let residues: BTreeSet<i64> =
                    digits.iter().map(|d| d.rem_euclid(i64::from(base.max(1)))).collect();
                if base < 2 || residues.len() != digits.len() || digits.len() < 2 {
                    return Err(Error::InvalidCantorSet(format!(
                        "need at least two digits distinct modulo the base, got {s:?}"
                    )));
                }
                Ok(DigitSpec { base, digits })
            }
            _ => Err(Error::InvalidCantorSet(format!("expected `b=<base>;D=<d1>,<d2>,...`, got {s:?}"))),
        }
    }
}

/// Base-`b` digits of `k`, least significant first. Empty for `k = 0`.
pub fn base_digits(k: &BigUint, base: u32) -> Vec<u32> {
    if let Some(mut v) = k.to_u128() {
        let b = u128::from(base);
        let mut out = Vec::new();
        while v > 0 {
            out.push((v % b) as u32);
            v /= b;
        }
        return out;
    }
    let mut out = Vec::new();
    let mut v = k.clone();
    let b = BigUint::from(base);
    while !v.is_zero() {
        let (q, r) = v.div_rem(&b);
        out.push(r.to_u32().expect("remainder below base"));
        v = q;
    }
    out
}

/// Sum of the base-`b` digits of `k`.
pub fn sum_digits_in_base(k: &BigUint, base: u32) -> u64 {
    base_digits(k, base).iter().map(|&d| u64::from(d)).sum()
}
