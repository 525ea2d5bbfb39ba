use cantor_core::expsum::{classify_limit, riesz_product, verify_witness, weyl_sum};
use cantor_core::{CantorSet, Frequency, LimitClass, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle::{self, SYSTEMS};
use super::Tally;

const RIESZ_LEVELS: u32 = 8;
const PAIRS_PER_SET: usize = 20;
const RIESZ_SEED: u64 = 3;

fn random_frequency(rng: &mut ChaCha8Rng, rational: bool) -> Frequency {
    if rational {
        let q = rng.random_range(1..=1000u64);
        Frequency::rational(rng.random_range(0..q) as i64, q)
    } else {
        Frequency::real(rng.random::<f64>())
    }
}

pub fn riesz_identity(t: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(RIESZ_SEED);
    for (b, d) in SYSTEMS {
        let set = CantorSet::new(b, d.iter().copied())?;
        let total = (d.len() as u64).pow(RIESZ_LEVELS);
        let elements: Vec<(BigRational, BigRational)> = (0..total)
            .map(|n| {
                let k = oracle::element(n, b, d);
                (oracle::integer(k), oracle::integer(u128::from(oracle::digit_sum(k, b))))
            })
            .collect();
        let mut worst = 0f64;
        for i in 0..PAIRS_PER_SET {
            let alpha = random_frequency(&mut rng, i % 2 == 0);
            let beta = match i % 3 {
                0 => Frequency::zero(),
                1 => random_frequency(&mut rng, true),
                _ => random_frequency(&mut rng, false),
            };
            let (a, be) = (alpha.exact(), beta.exact());
            let (mut re, mut im) = (0f64, 0f64);
            let mut level = 1;
            for (n, (k, s)) in elements.iter().enumerate() {
                let (c, si) = oracle::unit(&(&a * k + &be * s));
                re += c;
                im += si;
                let count = n as u64 + 1;
                if count == (d.len() as u64).pow(level) {
                    let product = riesz_product(&set, &alpha, &beta, level);
                    let diff = ((product.re - re / count as f64).powi(2)
                        + (product.im - im / count as f64).powi(2))
                    .sqrt();
                    worst = worst.max(diff);
                    t.check(diff < 1e-9, || {
                        format!("{set}: ({alpha}, {beta}) at k = {level} differs by {diff:e}")
                    });
                    level += 1;
                }
            }
        }
        t.note(format!("{set}: largest difference {worst:.1e}"));
    }
    Ok(())
}

/// Sets where the average over `|D|^14` members is cheap enough for a full
/// grid of frequencies.
const FULL_GRID_RADIX: usize = 2;
const LEVELS: u32 = 14;
/// Depth at which slowly decaying products are reported.
const DEEP_LEVELS: u32 = 1000;

/// Independent check of `sα ≡ a/(b−1) + r/b^t` and `sβ ≡ −a/(b−1)` mod 1.
fn congruences_hold(
    set: &CantorSet,
    alpha: &Frequency,
    beta: &Frequency,
    a: u64,
    r: &num_bigint::BigUint,
    w: u32,
) -> bool {
    let s = oracle::integer(u128::from(set.step()));
    let b = i64::from(set.base());
    let shift = oracle::ratio(a as i64, b - 1);
    let tail = BigRational::new(BigInt::from(r.clone()), BigInt::from(b).pow(w));
    let first = &s * alpha.exact() - &shift - tail;
    let second = &s * beta.exact() + &shift;
    first.is_integer() && second.is_integer()
}

pub fn trichotomy(t: &mut Tally) -> Result<()> {
    let named = [
        Frequency::real(std::f64::consts::SQRT_2 - 1.0),
        Frequency::real((5f64.sqrt() - 1.0) / 2.0),
        Frequency::real(std::f64::consts::PI - 3.0),
    ];
    for (b, d) in SYSTEMS {
        let set = CantorSet::new(b, d.iter().copied())?;
        let n = (d.len() as u64).pow(LEVELS);
        let full = d.len() == FULL_GRID_RADIX;
        let (max_q, betas): (u64, Vec<Frequency>) = if full {
            (12, vec![Frequency::zero(), Frequency::rational(1, 2), Frequency::rational(1, 3)])
        } else {
            (8, vec![Frequency::zero()])
        };
        let mut pairs: Vec<(Frequency, Frequency)> = Vec::new();
        for q in 1..=max_q {
            for p in 0..q {
                if num_integer::gcd(p, q) == 1 {
                    for beta in &betas {
                        pairs.push((Frequency::rational(p as i64, q), beta.clone()));
                    }
                }
            }
        }
        pairs.extend(named.iter().map(|a| (a.clone(), Frequency::zero())));
        pairs.push((Frequency::zero(), named[0].clone()));
        let (mut zeros, mut witnessed, mut largest) = (0, 0, 0f64);
        let mut slow = Vec::new();
        for (alpha, beta) in &pairs {
            match classify_limit(&set, alpha, beta) {
                LimitClass::Zero => {
                    zeros += 1;
                    let m = weyl_sum(&set, alpha, beta, n)?.magnitude;
                    largest = largest.max(m);
                    t.check(m < 0.1, || format!("{set}: ({alpha}, {beta}) has magnitude {m} at N = {n}"));
                    if m >= 0.1 {
                        // Diagnostic: the average is the Riesz product, which still decays.
                        let here = riesz_product(&set, alpha, beta, LEVELS).norm();
                        let deep = riesz_product(&set, alpha, beta, DEEP_LEVELS).norm();
                        slow.push(format!("({alpha}, {beta}) product {here:.4} at k = {LEVELS}, {deep:.1e} at k = {DEEP_LEVELS}"));
                    }
                }
                LimitClass::One => {
                    t.check(alpha.is_zero() && beta.is_zero(), || {
                        format!("{set}: ({alpha}, {beta}) classed One")
                    });
                }
                LimitClass::NonzeroPossible { a, r, t: w } | LimitClass::MayNotExist { a, r, t: w } => {
                    witnessed += 1;
                    let ok = verify_witness(&set, alpha, beta, a, &r, w)
                        && congruences_hold(&set, alpha, beta, a, &r, w);
                    t.check(ok, || format!("{set}: witness ({a}, {r}, {w}) for ({alpha}, {beta})"));
                }
            }
        }
        t.note(format!(
            "{set}: {zeros} zero classes (largest magnitude {largest:.4} at N = {n}), {witnessed} witnessed"
        ));
        if !slow.is_empty() {
            t.note(format!("{set}: slow decay {}", slow.join(", ")));
        }
    }
    let c = CantorSet::new(3, [0, 2])?;
    let half = Frequency::rational(1, 2);
    let m = weyl_sum(&c, &half, &Frequency::zero(), 1 << LEVELS)?.magnitude;
    t.check((m - 1.0).abs() < 1e-9, || format!("{c} at 1/2 has magnitude {m}"));
    t.note(format!("{c} at alpha = 1/2: magnitude {m:.9}"));
    let product = riesz_product(&c, &half, &Frequency::zero(), LEVELS);
    t.check((product - num_complex::Complex64::one()).norm() < 1e-9, || format!("product {product}"));
    Ok(())
}
