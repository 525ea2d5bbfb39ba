use cantor_core::correlation::{
    additive_energy, cantor_phases, cantor_truncation_energy, pair_correlation, pair_correlation_profile,
    seeded_alphas,
};
use cantor_core::{CantorSet, Frequency, Result};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle;
use super::Tally;

const SWEEP_SEED: u64 = 8;
const SWEEP_SIZES: [usize; 6] = [2, 10, 50, 100, 250, 500];
const SWEEP_S: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.99];

pub fn energies(t: &mut Tally) -> Result<()> {
    for (a, expected) in [(vec![0i64, 2], 6u64), (vec![0, 1, 3], 15)] {
        let brute = oracle::energy(&a);
        let e = additive_energy(&a)?.energy;
        t.check(brute == expected && e == BigUint::from(expected), || {
            format!("E({a:?}): solver {e}, quadruples {brute}, expected {expected}")
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SWEEP_SEED);
    let c = CantorSet::new(7, [0, 1, 3])?;
    let mut compared = 0;
    for n in SWEEP_SIZES {
        let random: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let phases = cantor_phases(&c, &Frequency::real(std::f64::consts::SQRT_2 - 1.0), n as u64);
        // Rational phases repeat, which exercises exact ties.
        let tied = cantor_phases(&c, &Frequency::rational(1, 7), n as u64);
        for (label, thetas) in [("random", &random), ("cantor", &phases), ("rational", &tied)] {
            for s in SWEEP_S {
                let swept = pair_correlation(thetas, s)?.pairs;
                let brute = oracle::close_pairs(thetas, s);
                compared += 1;
                t.check(swept == brute, || format!("{label} N = {n}, s = {s}: sweep {swept}, brute {brute}"));
            }
        }
    }
    t.note(format!("{compared} sweep comparisons"));

    for (levels, expected) in [(2u32, 225u64), (3, 3375)] {
        let truncation = cantor_truncation_energy(&c, levels)?;
        let members: Vec<i64> =
            oracle::scan(7, &[0, 1, 3], 7u64.pow(levels)).into_iter().map(|k| k as i64).collect();
        // Quadruples for the small case, representation counts for the large.
        let brute = if levels == 2 { oracle::energy(&members) } else { oracle::energy_by_sums(&members) };
        t.check(truncation.carry_free, || format!("{c} should be carry-free"));
        t.check(brute == expected && truncation.report.energy == BigUint::from(brute), || {
            format!("{c} at s = {levels}: solver {}, quadruples {brute}", truncation.report.energy)
        });
        t.check(truncation.product_formula == BigUint::from(expected), || {
            format!("{c} at s = {levels}: E(D)^s = {}", truncation.product_formula)
        });
    }
    t.note(format!("{c}: energy 225 at s = 2, 3375 at s = 3"));
    Ok(())
}

const CORRELATION_SEED: u64 = 20240601;
const DRAWS: usize = 20;
const POINTS: u64 = 4096;
const WINDOWS: [f64; 3] = [0.25, 0.5, 0.75];
const TOLERANCE: f64 = 0.2;
const REQUIRED: usize = 15;

pub fn pair_correlation_metric(t: &mut Tally) -> Result<()> {
    let c = CantorSet::new(7, [0, 1, 3])?;
    let mut good = [0usize; WINDOWS.len()];
    for alpha in seeded_alphas(CORRELATION_SEED, DRAWS) {
        let thetas = cantor_phases(&c, &Frequency::real(alpha), POINTS);
        for (i, report) in pair_correlation_profile(&thetas, &WINDOWS)?.iter().enumerate() {
            good[i] += usize::from((report.r2 - report.target).abs() < TOLERANCE);
        }
    }
    for (s, count) in WINDOWS.iter().zip(good) {
        t.check(count >= REQUIRED, || format!("s = {s}: only {count} of {DRAWS} draws within {TOLERANCE}"));
    }
    let summary: Vec<String> =
        WINDOWS.iter().zip(good).map(|(s, g)| format!("{g}/{DRAWS} at s = {s}")).collect();
    t.note(format!("{c}, seed {CORRELATION_SEED}, N = {POINTS}: {}", summary.join(", ")));
    Ok(())
}
