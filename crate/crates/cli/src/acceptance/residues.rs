use cantor_core::moddist::{empirical_mod_distribution, predicted_mod_distribution, zero_residue_density};
use cantor_core::{CantorSet, Result};

use super::oracle;
use super::Tally;

const SAMPLE: u64 = 1 << 16;
const TOLERANCE: f64 = 0.02;

/// `(b, D, q)` with `gcd(q, b) = 1`, with `q | b^j`, and with both kinds of
/// prime factor.
const COPRIME: [(u32, &[u32], u64); 5] =
    [(3, &[0, 1], 5), (3, &[0, 2], 5), (3, &[0, 2], 4), (7, &[0, 1, 3], 4), (10, &[0, 5], 3)];
const ADIC: [(u32, &[u32], u64); 4] =
    [(3, &[0, 2], 9), (10, &[0, 5], 8), (5, &[0, 2, 3], 25), (7, &[0, 1, 3], 7)];
const MIXED: [(u32, &[u32], u64); 4] =
    [(3, &[0, 2], 6), (5, &[0, 2, 3], 10), (10, &[0, 5], 6), (7, &[0, 1, 3], 14)];

/// `(b, D, q, j)` with `q | b^j`.
const EXACT: [(u32, &[u32], u64, u32); 8] = [
    (3, &[0, 2], 3, 1),
    (3, &[0, 2], 9, 2),
    (3, &[0, 2], 27, 3),
    (3, &[0, 1], 9, 2),
    (10, &[0, 5], 4, 2),
    (10, &[0, 5], 125, 3),
    (5, &[0, 2, 3], 25, 2),
    (7, &[0, 1, 3], 49, 2),
];

pub fn mod_distributions(t: &mut Tally) -> Result<()> {
    for (case, systems) in [("coprime", &COPRIME[..]), ("b-adic", &ADIC[..]), ("mixed", &MIXED[..])] {
        let mut worst = 0f64;
        for &(b, d, q) in systems {
            let set = CantorSet::new(b, d.iter().copied())?;
            let empirical = empirical_mod_distribution(&set, q, SAMPLE)?;
            let mut counts = vec![0u64; q as usize];
            for n in 0..SAMPLE {
                counts[(oracle::element(n, b, d) % u128::from(q)) as usize] += 1;
            }
            let scanned: Vec<f64> = counts.iter().map(|&c| c as f64 / SAMPLE as f64).collect();
            t.check(empirical.to_f64() == scanned, || {
                format!("{set} mod {q}: empirical law differs from scan")
            });
            let predicted = predicted_mod_distribution(&set, q)?;
            let tv = empirical.total_variation(&predicted);
            worst = worst.max(tv);
            t.check(tv < TOLERANCE, || format!("{case}: {set} mod {q} has distance {tv:.5}"));
        }
        t.note(format!("{case}: largest distance {worst:.2e} at N = {SAMPLE}"));
    }
    for (b, d, q, j) in EXACT {
        let set = CantorSet::new(b, d.iter().copied())?;
        let predicted = predicted_mod_distribution(&set, q)?.exact();
        for m in j..=j + 2 {
            let n = (d.len() as u64).pow(m);
            let empirical = empirical_mod_distribution(&set, q, n)?.exact();
            t.check(empirical == predicted, || format!("{set} mod {q} at N = |D|^{m} is not exact"));
        }
    }
    let c = CantorSet::new(3, [0, 2])?;
    let mut lowest = 1f64;
    for q in 2..=9 {
        let density = zero_residue_density(&c, q, SAMPLE)?;
        let scanned =
            (0..SAMPLE).filter(|&n| oracle::element(n, 3, &[0, 2]).is_multiple_of(u128::from(q))).count();
        t.check(density == scanned as f64 / SAMPLE as f64, || format!("density mod {q} differs from scan"));
        t.check(density > 0.01, || format!("{c}: density of 0 mod {q} is {density}"));
        lowest = lowest.min(density);
    }
    t.note(format!("lowest zero-residue density {lowest:.4}"));
    Ok(())
}
