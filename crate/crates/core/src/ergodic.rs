//! A diagonal model of commuting unitaries `U e_m = e(α_m) e_m`,
//! `V e_m = e(β_m) e_m`, and recurrence densities along periodic sets.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::digits::{CantorSet, ResidueWalk};
use crate::error::{Error, Result};
use crate::expsum::{
    classify_limit, exact_polynomial_average, riesz_product, weyl_sum, LimitClass, POLYNOMIAL_DEGREE_CAP,
};
use crate::frequency::Frequency;

/// Largest Riesz-product depth tried when estimating a limit.
pub const MAX_RIESZ_LEVELS: u32 = 40;
/// Successive Riesz products closer than this count as stable.
pub const STABILITY_TOLERANCE: f64 = 1e-6;
/// Number of consecutive stable steps required.
pub const STABLE_STEPS: u32 = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralComponent {
    pub alpha: Frequency,
    pub beta: Frequency,
    pub coeff: Complex64,
}

/// Finitely many joint eigencomponents with distinct `(α, β)`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SpectralVector {
    components: Vec<SpectralComponent>,
}

impl SpectralVector {
    pub fn new(components: Vec<SpectralComponent>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for c in &components {
            if !seen.insert((c.alpha.to_string(), c.beta.to_string())) {
                return Err(Error::InvalidArgument(format!(
                    "repeated eigencomponent ({}, {})",
                    c.alpha, c.beta
                )));
            }
        }
        Ok(SpectralVector { components })
    }

    pub fn components(&self) -> &[SpectralComponent] {
        &self.components
    }

    pub fn norm_sqr(&self) -> f64 {
        self.components.iter().map(|c| c.coeff.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Same eigencomponents with new coefficients.
    fn scaled(&self, mut factor: impl FnMut(&SpectralComponent) -> Result<Complex64>) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|c| Ok(SpectralComponent { coeff: c.coeff * factor(c)?, ..c.clone() }))
            .collect::<Result<_>>()?;
        Ok(SpectralVector { components })
    }

    /// `‖x − y‖` for vectors over the same eigencomponents in the same order.
    pub fn distance(&self, other: &SpectralVector) -> Result<f64> {
        let same = self.components.len() == other.components.len()
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.alpha == b.alpha && a.beta == b.beta);
        if !same {
            return Err(Error::InvalidArgument("vectors have different eigencomponents".into()));
        }
        Ok(self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| (a.coeff - b.coeff).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }
}

/// One component per line: `alpha, beta, re, im`. Blank lines and lines
/// starting with `#` are skipped.
impl FromStr for SpectralVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut components = Vec::new();
        for (i, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parse_err = |column: usize, message: String| Error::Parse { line: i + 1, column, message };
            if fields.len() != 4 {
                return Err(parse_err(1, format!("expected 4 fields, found {}", fields.len())));
            }
            let alpha = fields[0].parse().map_err(|e: Error| parse_err(1, e.to_string()))?;
            let beta = fields[1].parse().map_err(|e: Error| parse_err(2, e.to_string()))?;
            let re: f64 = fields[2].parse().map_err(|e| parse_err(3, format!("{e}")))?;
            let im: f64 = fields[3].parse().map_err(|e| parse_err(4, format!("{e}")))?;
            components.push(SpectralComponent { alpha, beta, coeff: Complex64::new(re, im) });
        }
        SpectralVector::new(components)
    }
}

impl fmt::Display for SpectralVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.components {
            writeln!(f, "{}, {}, {:e}, {:e}", c.alpha, c.beta, c.coeff.re, c.coeff.im)?;
        }
        Ok(())
    }
}

/// `E_{n<N} U^{k_n} V^{s_b(k_n)} x`, acting diagonally.
pub fn ergodic_average(set: &CantorSet, x: &SpectralVector, count: u64) -> Result<SpectralVector> {
    x.scaled(|c| Ok(weyl_sum(set, &c.alpha, &c.beta, count)?.value))
}

/// Limit of the Riesz products `∏_{j<k} L̂(b^j α + β)` as `k` grows, read
/// off once `STABLE_STEPS` successive values agree to `STABILITY_TOLERANCE`.
pub fn riesz_limit(set: &CantorSet, alpha: &Frequency, beta: &Frequency) -> Result<Complex64> {
    let mut previous = riesz_product(set, alpha, beta, 1);
    let mut stable = 0;
    for k in 2..=MAX_RIESZ_LEVELS {
        let current = riesz_product(set, alpha, beta, k);
        if (current - previous).norm() < STABILITY_TOLERANCE {
            stable += 1;
            if stable == STABLE_STEPS {
                return Ok(current);
            }
        } else {
            stable = 0;
        }
        previous = current;
    }
    Err(Error::Unstable { max_levels: MAX_RIESZ_LEVELS })
}

/// The norm limit of [`ergodic_average`] as `N` runs through `|D|^k`.
///
/// Components the classification rules out are zeroed; the rest are scaled by
/// the estimated Riesz-product limit.
pub fn predicted_limit(set: &CantorSet, x: &SpectralVector) -> Result<SpectralVector> {
    set.require_zero_digit("the ergodic limit")?;
    x.scaled(|c| match classify_limit(set, &c.alpha, &c.beta) {
        LimitClass::Zero => Ok(Complex64::zero()),
        LimitClass::One => Ok(Complex64::one()),
        LimitClass::NonzeroPossible { .. } => riesz_limit(set, &c.alpha, &c.beta),
        LimitClass::MayNotExist { .. } => Err(Error::HypothesisViolated(format!(
            "some digit of {set} is not a multiple of the step {}",
            set.step()
        ))),
    })
}

/// `Σ c_ij x^i y^j` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntegerPolynomial {
    /// `(x power, y power, coefficient)`.
    pub terms: Vec<(u32, u32, i64)>,
}

impl IntegerPolynomial {
    pub fn degree(&self) -> u32 {
        self.terms.iter().filter(|t| t.2 != 0).map(|t| t.0 + t.1).max().unwrap_or(0)
    }

    pub fn is_univariate(&self) -> bool {
        self.terms.iter().all(|t| t.1 == 0 || t.2 == 0)
    }

    pub fn constant_term(&self) -> i64 {
        self.terms.iter().filter(|t| t.0 == 0 && t.1 == 0).map(|t| t.2).sum()
    }

    /// Coefficient of the highest power of `x`, for univariate polynomials.
    pub fn leading_coefficient(&self) -> i64 {
        let d = self.degree();
        self.terms.iter().filter(|t| t.0 == d).map(|t| t.2).sum()
    }

    /// `p(k) mod q` for univariate `p`, from `k mod q`.
    pub fn eval_mod(&self, k: u64, q: u64) -> u64 {
        let q128 = i128::from(q);
        self.terms.iter().fold(0i128, |acc, &(i, _, c)| {
            let mut power = 1i128;
            for _ in 0..i {
                power = power * i128::from(k) % q128;
            }
            (acc + i128::from(c).rem_euclid(q128) * power) % q128
        }) as u64
    }
}

impl FromStr for IntegerPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |what: &str| Error::InvalidArgument(format!("{what} in polynomial {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("no terms"));
        }
        let mut terms = Vec::new();
        for raw in compact.replace('-', "+-").split('+').filter(|t| !t.is_empty()) {
            let (sign, body) = match raw.strip_prefix('-') {
                Some(rest) => (-1i64, rest),
                None => (1, raw),
            };
            let mut term = (0u32, 0u32, sign);
            for factor in body.split('*') {
                let (var, power) = match factor.split_once('^') {
                    Some((v, p)) => (v, p.parse::<u32>().map_err(|_| bad("bad exponent"))?),
                    None => (factor, 1),
                };
                match var {
                    "x" | "k" => term.0 += power,
                    "y" | "s" => term.1 += power,
                    _ => {
                        let c: i64 = var.parse().map_err(|_| bad("unexpected factor"))?;
                        term.2 = term
                            .2
                            .checked_mul(c.checked_pow(power).ok_or_else(|| bad("overflow"))?)
                            .ok_or_else(|| bad("overflow"))?;
                    }
                }
            }
            terms.push(term);
        }
        Ok(IntegerPolynomial { terms })
    }
}

impl fmt::Display for IntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, &(i, j, c)) in self.terms.iter().enumerate() {
            match (n, c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write!(f, "{}", c.unsigned_abs())?;
            for (name, power) in [("x", i), ("y", j)] {
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

/// `p = (p₁, p₂): Z² → Z²`, acting as `(U, V)^{p(k, s)} = U^{p₁} V^{p₂}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialMap {
    pub first: IntegerPolynomial,
    pub second: IntegerPolynomial,
}

impl PolynomialMap {
    /// `(x, y)`.
    pub fn identity() -> Self {
        PolynomialMap {
            first: IntegerPolynomial { terms: vec![(1, 0, 1)] },
            second: IntegerPolynomial { terms: vec![(0, 1, 1)] },
        }
    }
}

/// Parses `p1, p2`.
impl FromStr for PolynomialMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (first, second) = s
            .split_once(',')
            .ok_or_else(|| Error::InvalidArgument(format!("expected two polynomials in {s:?}")))?;
        Ok(PolynomialMap { first: first.parse()?, second: second.parse()? })
    }
}

impl fmt::Display for PolynomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}", self.first, self.second)
    }
}

/// `E_{n<N} (U, V)^{p(k_n, s_b(k_n))} x`.
pub fn polynomial_ergodic_average(
    set: &CantorSet,
    p: &PolynomialMap,
    x: &SpectralVector,
    count: u64,
) -> Result<SpectralVector> {
    let degree = p.first.degree().max(p.second.degree());
    if degree > POLYNOMIAL_DEGREE_CAP {
        return Err(Error::DegreeTooLarge { degree, cap: POLYNOMIAL_DEGREE_CAP });
    }
    x.scaled(|c| {
        let (alpha, beta) = (c.alpha.exact(), c.beta.exact());
        let scale = |freq: &BigRational, k: i64| freq * BigRational::from_integer(BigInt::from(k));
        let terms: Vec<(u32, u32, BigRational)> = p
            .first
            .terms
            .iter()
            .map(|&(i, j, k)| (i, j, scale(&alpha, k)))
            .chain(p.second.terms.iter().map(|&(i, j, k)| (i, j, scale(&beta, k))))
            .collect();
        Ok(exact_polynomial_average(set, &terms, 0, count)?.value)
    })
}

/// A union of residue classes modulo `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicSet {
    modulus: u64,
    residues: BTreeSet<u64>,
}

impl PeriodicSet {
    pub fn new(modulus: u64, residues: impl IntoIterator<Item = u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let residues: BTreeSet<u64> = residues.into_iter().map(|r| r % modulus).collect();
        if residues.is_empty() {
            return Err(Error::InvalidArgument("periodic set has no residues".into()));
        }
        Ok(PeriodicSet { modulus, residues })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &BTreeSet<u64> {
        &self.residues
    }

    pub fn contains(&self, k: u64) -> bool {
        self.residues.contains(&(k % self.modulus))
    }

    pub fn density(&self) -> f64 {
        self.residues.len() as f64 / self.modulus as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceReport {
    /// Members of `C ∩ [1, N]`.
    pub members: u64,
    /// Members `k` with `k ∈ A` and `k + p(k) ∈ A`.
    pub hits: u64,
    pub density: f64,
}

/// `E_{k ∈ C ∩ [1, N]} 1_A(k) 1_A(k + p(k))`, working modulo `q` only.
pub fn recurrence_density(
    set: &CantorSet,
    a: &PeriodicSet,
    p: &IntegerPolynomial,
    bound: u64,
) -> Result<RecurrenceReport> {
    if !p.is_univariate() {
        return Err(Error::InvalidArgument(format!("{p} is not a polynomial in k alone")));
    }
    if p.constant_term() != 0 {
        return Err(Error::HypothesisViolated(format!("{p} has a nonzero constant term")));
    }
    if p.leading_coefficient() <= 0 {
        return Err(Error::HypothesisViolated(format!("{p} has no positive leading coefficient")));
    }
    let q = a.modulus();
    // Members below bound + 1, without 0.
    let zero_is_member = u64::from(set.has_zero());
    let members = (set.rank(&(BigUint::from(bound) + 1u32)) - zero_is_member)
        .to_u64()
        .ok_or(Error::LevelTooLarge { size: u64::MAX, limit: u64::MAX })?;
    let mut walk = ResidueWalk::new(set, q, 1, &BigUint::from(zero_is_member));
    let mut hits = 0;
    for _ in 0..members {
        let (k, _) = walk.current();
        if a.contains(k) && a.contains(k + p.eval_mod(k, q)) {
            hits += 1;
        }
        walk.advance();
    }
    let density = if members == 0 { 0.0 } else { hits as f64 / members as f64 };
    Ok(RecurrenceReport { members, hits, density })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expsum::exact_limit;

    fn set(b: u32, d: &[u32]) -> CantorSet {
        CantorSet::new(b, d.iter().copied()).unwrap()
    }

    fn component(alpha: Frequency, beta: Frequency, re: f64, im: f64) -> SpectralComponent {
        SpectralComponent { alpha, beta, coeff: Complex64::new(re, im) }
    }

    #[test]
    fn averages() {
        let c = set(3, &[0, 2]);
        let x = SpectralVector::new(vec![component(Frequency::rational(1, 2), Frequency::zero(), 0.6, -0.8)])
            .unwrap();
        for n in [1, 7, 100, 4096] {
            assert!(ergodic_average(&c, &x, n).unwrap().distance(&x).unwrap() < 1e-12);
        }
        let x = SpectralVector::new(vec![component(
            Frequency::real(std::f64::consts::SQRT_2 - 1.0),
            Frequency::zero(),
            1.0,
            0.0,
        )])
        .unwrap();
        assert!(ergodic_average(&c, &x, 1 << 14).unwrap().norm() < 0.05);
        let empty = SpectralVector::default();
        assert_eq!(ergodic_average(&c, &empty, 10).unwrap().norm(), 0.0);
        assert!(SpectralVector::new(vec![
            component(Frequency::zero(), Frequency::zero(), 1.0, 0.0),
            component(Frequency::zero(), Frequency::zero(), 2.0, 0.0),
        ])
        .is_err());
    }

    #[test]
    fn predicted_limits() {
        let c = set(3, &[0, 2]);
        let x: SpectralVector =
            "0, 0, 1, 0\n1/2, 0, 0, 1\n1/5, 0, 2, 0\n# comment\n1/3, 2/3, 1, 1\n".parse().unwrap();
        let limit = predicted_limit(&c, &x).unwrap();
        let coeffs: Vec<Complex64> = limit.components().iter().map(|c| c.coeff).collect();
        assert_eq!(coeffs[0], Complex64::new(1.0, 0.0));
        assert!((coeffs[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        assert_eq!(coeffs[2], Complex64::zero());
        for comp in limit.components().iter().zip(x.components()) {
            let (l, orig) = comp;
            if orig.alpha.is_rational() {
                let exact = exact_limit(&c, &orig.alpha, &orig.beta).unwrap() * orig.coeff;
                assert!((l.coeff - exact).norm() < 1e-5);
            }
        }
        let avg = ergodic_average(&c, &x, 1 << 14).unwrap();
        assert!(avg.distance(&limit).unwrap() < 0.05);
        assert!(avg.norm() <= x.norm() + 1e-12);
        assert_eq!(x.to_string().parse::<SpectralVector>().unwrap(), x);
    }

    #[test]
    fn polynomial_maps() {
        let c = set(3, &[0, 2]);
        let x: SpectralVector = "1/7, 1/4, 1, 0\nsqrt2m1, 0, 0, 1".parse().unwrap();
        let a = polynomial_ergodic_average(&c, &PolynomialMap::identity(), &x, 3000).unwrap();
        let b = ergodic_average(&c, &x, 3000).unwrap();
        assert!(a.distance(&b).unwrap() < 1e-9);

        let p: PolynomialMap = "x^2, 0".parse().unwrap();
        let x: SpectralVector = "sqrt3, 0, 1, 0".parse().unwrap();
        assert!(polynomial_ergodic_average(&c, &p, &x, 1 << 14).unwrap().norm() < 0.1);

        let p: PolynomialMap = "x^2 - 3*x*y, 2*y^2".parse().unwrap();
        assert_eq!(p.to_string().parse::<PolynomialMap>().unwrap(), p);
        let p: PolynomialMap = "x^6, 0".parse().unwrap();
        assert!(matches!(
            polynomial_ergodic_average(&c, &p, &x, 10),
            Err(Error::DegreeTooLarge { degree: 6, .. })
        ));
    }

    #[test]
    fn rational_polynomial_averages_stabilize() {
        let c = set(3, &[0, 2]);
        for (p, x) in [("x^3, y^2", "1/8, 1/3, 1, 0"), ("x^2, 0", "1/7, 0, 1, 0")] {
            let p: PolynomialMap = p.parse().unwrap();
            let x: SpectralVector = x.parse().unwrap();
            let at = |k: u32| polynomial_ergodic_average(&c, &p, &x, 2u64.pow(k)).unwrap();
            for k in 12..=13 {
                assert!(at(k).distance(&at(k - 1)).unwrap() < 1e-3);
            }
        }
    }

    #[test]
    fn recurrence() {
        let c = set(3, &[0, 2]);
        let k2: IntegerPolynomial = "k^2".parse().unwrap();
        let all = PeriodicSet::new(5, 0..5).unwrap();
        assert_eq!(recurrence_density(&c, &all, &k2, 1000).unwrap().density, 1.0);

        let zero7 = PeriodicSet::new(7, [0]).unwrap();
        let r = recurrence_density(&c, &zero7, &k2, 3u64.pow(12)).unwrap();
        assert_eq!(r.members, 4095);
        assert!(r.density > 0.005);

        // Brute force over the members themselves.
        let k: IntegerPolynomial = "k".parse().unwrap();
        let even = PeriodicSet::new(2, [0]).unwrap();
        let r = recurrence_density(&c, &even, &k, 500).unwrap();
        let members: Vec<u64> = (1..=500).filter(|&n| c.contains_u64(n)).collect();
        assert_eq!(r.members as usize, members.len());
        assert_eq!(r.hits as usize, members.iter().filter(|&&n| n % 2 == 0).count());

        let mixed = PeriodicSet::new(6, [1, 3, 4]).unwrap();
        let cubic: IntegerPolynomial = "2*k^3 - k".parse().unwrap();
        let r = recurrence_density(&c, &mixed, &cubic, 5000).unwrap();
        let hits = (1..=5000u64)
            .filter(|&n| c.contains_u64(n))
            .filter(|&n| mixed.contains(n) && mixed.contains(n + (2 * n * n * n - n) % 6))
            .count();
        assert_eq!(r.hits as usize, hits);

        assert!(matches!(
            recurrence_density(&c, &zero7, &"k^2 + 1".parse().unwrap(), 10),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(PeriodicSet::new(3, []).is_err());
    }
}
