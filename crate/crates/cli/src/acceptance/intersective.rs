use std::collections::BTreeSet;

use cantor_core::intersective::{
    find_difference_kernel, intersective_ratio_profile, max_avoiding_set, normalize_residues, vdc_polynomial,
    vdc_product_polynomial, DifferenceFamily, SolverMode,
};
use cantor_core::{CantorSet, Result};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle;
use super::Tally;

const FAMILY_SEED: u64 = 6;
const FAMILIES: usize = 10;
const BRUTE_SIZES: [u32; 3] = [12, 18, 24];

/// Sets with a difference kernel, and the exponents solved exactly.
const PACKING: [(u32, &[u32], &[u32]); 5] = [
    (5, &[0, 2, 3], &[1, 2]),
    (7, &[0, 1, 6], &[1, 2]),
    (4, &[0, 1, 3], &[1, 2, 3]),
    (9, &[0, 1, 2, 7, 8], &[1, 2]),
    (10, &[0, 1, 9], &[1, 2]),
];

fn avoids(forbidden: &BTreeSet<u64>, a: &[u64]) -> bool {
    a.iter().all(|&x| a.iter().all(|&y| x == y || !forbidden.contains(&x.abs_diff(y))))
}

pub fn avoiding_sets(t: &mut Tally) -> Result<()> {
    let middle = DifferenceFamily::new([2, 6, 8], "members of C(3,{0,2}) below 9");
    let solved = max_avoiding_set(&middle, 9, SolverMode::Exact)?;
    let brute = oracle::max_avoiding(&[2, 6, 8], 9);
    t.check(brute == 4 && solved.size == 4, || format!("I(H, 9): solver {}, subsets {brute}", solved.size));
    t.check(solved.ratio(9) == oracle::ratio(4, 9), || format!("ratio {}", solved.ratio(9)));
    let c = CantorSet::new(3, [0, 2])?;
    let profile = intersective_ratio_profile(&c, &[2], SolverMode::Exact)?;
    t.check(profile[0].solution.size == 4, || format!("{c} at N = 9: {}", profile[0].solution.size));

    let mut rng = ChaCha8Rng::seed_from_u64(FAMILY_SEED);
    for f in 0..FAMILIES {
        let density = rng.random_range(0.05..0.5);
        let forbidden: Vec<u64> = (1..24u64).filter(|_| rng.random_bool(density)).collect();
        let family = DifferenceFamily::new(forbidden.iter().copied(), format!("random family {f}"));
        for n in BRUTE_SIZES {
            let solved = max_avoiding_set(&family, u64::from(n), SolverMode::Exact)?;
            let brute = oracle::max_avoiding(&forbidden, n);
            t.check(solved.size as u32 == brute && solved.exact, || {
                format!("family {f} {forbidden:?}, N = {n}: solver {}, subsets {brute}", solved.size)
            });
            t.check(avoids(&family.forbidden, &solved.witness), || format!("family {f}: bad witness"));
        }
    }

    let mut solves = 0;
    for (b, d, exponents) in PACKING {
        let set = CantorSet::new(b, d.iter().copied())?;
        let kernel = find_difference_kernel(b, d)?
            .witness
            .ok_or_else(|| cantor_core::Error::NotAchievable(format!("{set} has no kernel")))?;
        let s = kernel.elements.len() as u128;
        for point in intersective_ratio_profile(&set, exponents, SolverMode::Exact)? {
            solves += 1;
            let forbidden: BTreeSet<u64> =
                oracle::scan(b, d, point.n).into_iter().filter(|&k| k > 0).collect();
            let a = &point.solution;
            t.check(a.exact && avoids(&forbidden, &a.witness), || {
                format!("{set} at N = {}: witness", point.n)
            });
            let translates = s.pow(point.exponent);
            t.check(a.size as u128 * translates <= 2 * u128::from(point.n), || {
                format!("{set} at N = {}: {} * {translates} > 2N", point.n, a.size)
            });
        }
    }
    t.note(format!("{solves} exact solves meet the packing bound"));
    Ok(())
}

const GRID: usize = 10_000;
const MAX_LAYER: u32 = 3;

/// `C(b, E)` for signed digits `E`, using `places` digits.
fn signed_digit_sums(base: u32, digits: &[i64], places: u32) -> BTreeSet<i64> {
    let mut sums = BTreeSet::from([0i64]);
    let mut place = 1i64;
    for _ in 0..places {
        sums = sums.iter().flat_map(|&v| digits.iter().map(move |&e| v + e * place)).collect();
        place *= i64::from(base);
    }
    sums
}

/// `∏_{j ≤ J} |S|⁻² |Σ_{s ∈ S} e(s b^j x)|²` summed term by term.
fn layered_kernel(base: u32, s: &[i64], layers: u32, x: f64) -> f64 {
    let mut value = 1.0;
    for j in 0..=layers {
        let place = f64::from(base).powi(j as i32);
        let (mut re, mut im) = (0.0, 0.0);
        for &v in s {
            let turn = std::f64::consts::TAU * (v as f64 * place * x).fract();
            re += turn.cos();
            im += turn.sin();
        }
        value *= (re * re + im * im) / (s.len() * s.len()) as f64;
    }
    value
}

pub fn cosine_polynomials(t: &mut Tally) -> Result<()> {
    for (base, given) in [(5u32, vec![0i64, 2]), (9, vec![-1, 0, 1])] {
        let s = normalize_residues(base, &given);
        let differences: Vec<i64> = s.iter().flat_map(|&x| s.iter().map(move |&y| x - y)).collect();
        let nonzero = s.iter().filter(|&&x| x != 0).count() as u32;
        let mut constants = Vec::new();
        for j in 0..=MAX_LAYER {
            let poly = vdc_polynomial(base, &given, j)?;
            let label = format!("(b, S, J) = ({base}, {s:?}, {j})");
            t.check(poly.value_at_zero().is_one(), || format!("{label}: T(0) = {}", poly.value_at_zero()));
            let min = poly.grid_min(GRID);
            t.check(min >= -1e-9, || format!("{label}: grid minimum {min}"));

            let reachable = signed_digit_sums(base, &differences, j + 3);
            let outside: Vec<u64> = poly
                .coefficients
                .keys()
                .copied()
                .filter(|&n| n != 0 && !reachable.contains(&(n as i64)))
                .collect();
            t.check(outside.is_empty(), || format!("{label}: frequencies {outside:?} outside C(b, S - S)"));

            // The mean over more points than twice the degree is a0.
            let top = *poly.coefficients.keys().last().unwrap_or(&0);
            let points = 2 * top as usize + 1;
            let mean =
                (0..points).map(|i| layered_kernel(base, &s, j, i as f64 / points as f64)).sum::<f64>()
                    / points as f64;
            let a0 = poly.constant_term();
            let a0f = a0.to_f64().unwrap_or(f64::NAN);
            t.check((mean - a0f).abs() < 1e-12, || format!("{label}: a0 = {a0} but the mean is {mean}"));
            let cap = BigRational::new(1.into(), num_bigint::BigInt::from(2).pow(j * nonzero));
            t.check(a0 <= cap, || format!("{label}: a0 = {a0} exceeds {cap}"));
            constants.push(a0.to_string());
        }
        t.note(format!("b = {base}, S = {s:?}: a0 = {} for J = 0..{MAX_LAYER}", constants.join(", ")));
        // Reported only: the one-factor-per-residue product is not the certificate.
        let escaped: Vec<u32> = (0..=MAX_LAYER)
            .filter(|&j| {
                vdc_product_polynomial(base, &given, j)
                    .is_ok_and(|p| !p.frequencies_outside(base, &differences).is_empty())
            })
            .collect();
        if !escaped.is_empty() {
            t.note(format!(
                "b = {base}, S = {s:?}: the plain cosine product leaves C(b, S - S) at J = {escaped:?}"
            ));
        }
    }
    Ok(())
}
