use cantor_core::ergodic::{
    ergodic_average, predicted_limit, recurrence_density, IntegerPolynomial, PeriodicSet, SpectralComponent,
    SpectralVector,
};
use cantor_core::{CantorSet, Frequency, Result};
use num_complex::Complex64;

use super::oracle;
use super::Tally;

const LEVELS: u32 = 14;
const TOLERANCE: f64 = 0.05;
const RECURRENCE_LEVELS: u32 = 12;
const RECURRENCE_FLOOR: f64 = 0.005;

fn mixed_vector() -> Result<SpectralVector> {
    let f = Frequency::rational;
    let components = [
        (f(0, 1), f(0, 1), 0.5, 0.0),
        (f(1, 2), f(0, 1), 0.3, -0.4),
        (f(1, 3), f(0, 1), -0.2, 0.25),
        (f(1, 5), f(0, 1), 0.35, 0.1),
        (Frequency::real(std::f64::consts::SQRT_2 - 1.0), f(0, 1), 0.0, 0.45),
        (f(0, 1), f(1, 2), -0.3, 0.0),
        (f(1, 4), f(1, 3), 0.15, 0.2),
        (f(1, 9), f(0, 1), 0.25, -0.25),
    ];
    SpectralVector::new(
        components
            .into_iter()
            .map(|(alpha, beta, re, im)| SpectralComponent { alpha, beta, coeff: Complex64::new(re, im) })
            .collect(),
    )
}

pub fn averages_and_recurrence(t: &mut Tally) -> Result<()> {
    let c = CantorSet::new(3, [0, 2])?;
    let x = mixed_vector()?;
    let n = 2u64.pow(LEVELS);
    let average = ergodic_average(&c, &x, n)?;
    let limit = predicted_limit(&c, &x)?;
    let gap = average.distance(&limit)?;
    t.check(gap < TOLERANCE, || format!("{c}: average at N = {n} is {gap:.4} from the limit"));
    t.note(format!("{c}: distance {gap:.2e} at N = {n}, |x| = {:.3}", x.norm()));

    let a = PeriodicSet::new(7, [0])?;
    let p: IntegerPolynomial = "k^2".parse()?;
    let bound = 3u64.pow(RECURRENCE_LEVELS);
    let report = recurrence_density(&c, &a, &p, bound)?;
    let members: Vec<u64> = oracle::scan(3, &[0, 2], bound + 1).into_iter().filter(|&k| k >= 1).collect();
    let hits = members.iter().filter(|&&k| k % 7 == 0 && (k + k * k) % 7 == 0).count() as u64;
    t.check(report.members == members.len() as u64 && report.hits == hits, || {
        format!(
            "recurrence: {} hits among {} members, scan gives {hits} among {}",
            report.hits,
            report.members,
            members.len()
        )
    });
    t.check(report.density > RECURRENCE_FLOOR, || format!("recurrence density {}", report.density));
    t.note(format!("recurrence density {:.4} over {} members up to {bound}", report.density, report.members));
    Ok(())
}
