use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::f64::consts::TAU;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest number of distinct frequencies kept during expansion.
pub const SUPPORT_LIMIT: usize = 1_000_000;

/// `T(x) = Σ a_n cos(2π n x)` with exact coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct CosinePolynomial {
    pub coefficients: BTreeMap<u64, BigRational>,
    /// `b^{J+1}`. The product form can exceed it when several nonzero
    /// residues add up past `b`.
    pub degree_bound: u64,
}

impl CosinePolynomial {
    pub fn constant_term(&self) -> BigRational {
        self.coefficients.get(&0).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `T(0) = Σ a_n`.
    pub fn value_at_zero(&self) -> BigRational {
        self.coefficients.values().sum()
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        self.float_terms().map(|(n, a)| a * (TAU * (n as f64 * x).fract()).cos()).sum()
    }

    fn float_terms(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.coefficients.iter().map(|(&n, a)| (n, a.to_f64().unwrap_or(0.0)))
    }

    /// Minimum of `T` over `points` equally spaced points of `[0, 1)`.
    pub fn grid_min(&self, points: usize) -> f64 {
        let terms: Vec<(u64, f64)> = self.float_terms().collect();
        (0..points)
            .map(|i| {
                let x = i as f64 / points as f64;
                terms.iter().map(|&(n, a)| a * (TAU * (n as f64 * x).fract()).cos()).sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Nonzero frequencies that are not `Σ e_j b^j` with every `e_j ∈ digits`.
    pub fn frequencies_outside(&self, base: u32, digits: &[i64]) -> Vec<u64> {
        self.coefficients
            .keys()
            .copied()
            .filter(|&n| n != 0 && !signed_digit_member(n as i64, base, digits))
            .collect()
    }
}

/// Whether `n = Σ e_j b^j` for finitely many `e_j ∈ digits` (which must
/// include 0).
pub fn signed_digit_member(n: i64, base: u32, digits: &[i64]) -> bool {
    let b = i64::from(base);
    let mut seen = BTreeSet::new();
    let mut frontier = vec![n];
    while let Some(m) = frontier.pop() {
        if m == 0 {
            return true;
        }
        if !seen.insert(m) {
            continue;
        }
        for &e in digits {
            if (m - e).rem_euclid(b) == 0 {
                frontier.push((m - e) / b);
            }
        }
    }
    false
}

/// `S` reduced into `[0, b)`, sorted and deduplicated.
pub fn normalize_residues(base: u32, s: &[i64]) -> Vec<i64> {
    let set: BTreeSet<i64> = s.iter().map(|x| x.rem_euclid(i64::from(base))).collect();
    set.into_iter().collect()
}

/// Integer differences `x − y` of the normalized residues.
pub fn difference_digits(base: u32, s: &[i64]) -> Vec<i64> {
    let s = normalize_residues(base, s);
    let set: BTreeSet<i64> = s.iter().flat_map(|x| s.iter().map(move |y| x - y)).collect();
    set.into_iter().collect()
}

fn layer_frequencies(base: u32, s: &[i64], layers: u32) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for &x in normalize_residues(base, s).iter().filter(|&&x| x != 0) {
        let mut f = x;
        for _ in 0..layers {
            out.push(f);
            f = f
                .checked_mul(i64::from(base))
                .ok_or_else(|| Error::InvalidArgument(format!("frequency {x}·{base}^{layers} overflows")))?;
        }
    }
    Ok(out)
}

fn degree_bound(base: u32, layers: u32) -> Result<u64> {
    if base < 2 {
        return Err(Error::InvalidArgument(format!("base must be at least 2, got {base}")));
    }
    u64::from(base)
        .checked_pow(layers)
        .ok_or_else(|| Error::InvalidArgument(format!("{base}^{layers} overflows")))
}

/// Multiplies exponential coefficients by `Σ w e(f x)` for each `(f, w)` layer,
/// then folds conjugate pairs into cosine coefficients over `denominator`.
fn expand(
    layers: impl IntoIterator<Item = Vec<(i64, u64)>>,
    denominator: BigUint,
    degree_bound: u64,
) -> Result<CosinePolynomial> {
    let mut coeffs: HashMap<i64, BigUint> = HashMap::from([(0, BigUint::one())]);
    for layer in layers {
        let mut next: HashMap<i64, BigUint> = HashMap::with_capacity(coeffs.len() * layer.len());
        for (&n, c) in &coeffs {
            for &(f, w) in &layer {
                *next.entry(n + f).or_default() += c * w;
            }
        }
        if next.len() > 2 * SUPPORT_LIMIT {
            return Err(Error::SupportTooLarge { size: next.len().div_ceil(2), limit: SUPPORT_LIMIT });
        }
        coeffs = next;
    }
    let denominator = BigInt::from(denominator);
    let coefficients: BTreeMap<u64, BigRational> = coeffs
        .into_iter()
        .filter(|(n, c)| *n >= 0 && !c.is_zero())
        .map(|(n, c)| {
            let c = if n == 0 { c } else { c * 2u32 };
            (n as u64, BigRational::new(c.into(), denominator.clone()))
        })
        .collect();
    if coefficients.len() > SUPPORT_LIMIT {
        return Err(Error::SupportTooLarge { size: coefficients.len(), limit: SUPPORT_LIMIT });
    }
    Ok(CosinePolynomial { coefficients, degree_bound })
}

/// Expands `∏_{j=0}^{J} |S|⁻² |Σ_{s ∈ S} e(s b^j x)|²`, with `S` reduced into
/// `[0, b)`.
///
/// Each layer is `|S|⁻² Σ_{s, s'} e((s − s') b^j x)`, so every nonzero
/// frequency is `Σ e_j b^j` with `e_j ∈ S − S`, the constant term is exactly
/// `|S|^{−(J+1)}`, and the degree stays below `b^{J+1}`.
pub fn vdc_polynomial(base: u32, s: &[i64], j: u32) -> Result<CosinePolynomial> {
    let layers = j + 1;
    let bound = degree_bound(base, layers)?;
    let s = normalize_residues(base, s);
    let mut weights: BTreeMap<i64, u64> = BTreeMap::new();
    for x in &s {
        for y in &s {
            *weights.entry(x - y).or_default() += 1;
        }
    }
    let mut place = 1i64;
    let mut expanded = Vec::new();
    for _ in 0..layers {
        expanded.push(weights.iter().map(|(&d, &w)| (d * place, w)).collect::<Vec<_>>());
        place = place.saturating_mul(i64::from(base));
    }
    let denominator = BigUint::from(s.len()).pow(2 * layers);
    expand(expanded, denominator, bound)
}

/// Expands `∏_{s ∈ S∖{0}} ∏_{j=0}^{J} ½(1 + cos(2π s b^j x))`, with `S`
/// reduced into `[0, b)`.
///
/// For `|S| = 2` this has the same support as [`vdc_polynomial`]. With more
/// nonzero residues, two of them at the same place add with a carry, so the
/// support can leave `Σ e_j b^j, e_j ∈ S − S`.
pub fn vdc_product_polynomial(base: u32, s: &[i64], j: u32) -> Result<CosinePolynomial> {
    let layers = j + 1;
    let bound = degree_bound(base, layers)?;
    let frequencies = layer_frequencies(base, s, layers)?;
    // Each factor is ½ + ¼e(f) + ¼e(−f).
    let denominator = BigUint::one() << (2 * frequencies.len());
    expand(frequencies.iter().map(|&f| vec![(0, 2), (f, 1), (-f, 1)]), denominator, bound)
}

#[derive(Clone, Debug, PartialEq)]
pub struct VdcBound {
    /// `N = b^{J+1}`.
    pub degree_bound: u64,
    pub constant_term: BigRational,
    /// `c = log |S| / log b`.
    pub exponent: f64,
    /// `log(1/a0) / log N`.
    pub achieved_exponent: f64,
    /// `a0 ≤ N^{−c}`, decided exactly as `a0 · |S|^{J+1} ≤ 1`.
    pub certified: bool,
}

pub fn vdc_bound(base: u32, s: &[i64], j: u32) -> Result<VdcBound> {
    Ok(bound_of(&vdc_polynomial(base, s, j)?, base, s, j))
}

/// The bound certified by an already expanded polynomial for `(b, S, J)`.
pub fn bound_of(poly: &CosinePolynomial, base: u32, s: &[i64], j: u32) -> VdcBound {
    let size = normalize_residues(base, s).len();
    let a0 = poly.constant_term();
    let n = poly.degree_bound as f64;
    let scale = BigRational::from_integer(BigInt::from(size).pow(j + 1));
    VdcBound {
        degree_bound: poly.degree_bound,
        exponent: (size as f64).ln() / f64::from(base).ln(),
        achieved_exponent: -a0.to_f64().unwrap_or(0.0).ln() / n.ln(),
        certified: &a0 * scale <= BigRational::one(),
        constant_term: a0,
    }
}
