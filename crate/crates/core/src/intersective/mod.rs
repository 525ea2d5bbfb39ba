//! Difference-avoiding sets, van der Corput cosine polynomials and
//! difference kernels `S − S ⊆ D`.

mod avoiding;
mod clique;
mod kernel;
mod vdc;

use num_bigint::BigUint;
use num_traits::Zero;

pub use avoiding::{
    intersective_ratio_profile, is_avoiding, max_avoiding_set, max_avoiding_set_with_cap, AvoidingSet,
    DifferenceFamily, RatioPoint, SolverMode, EXACT_SOLVER_CAP,
};
pub use kernel::{balanced, find_difference_kernel, KernelReport, KernelWitness};
pub use vdc::{
    bound_of, difference_digits, normalize_residues, signed_digit_member, vdc_bound, vdc_polynomial,
    vdc_product_polynomial, CosinePolynomial, VdcBound, SUPPORT_LIMIT,
};

use crate::digits::CantorSet;
use crate::error::Result;

/// Largest number of IP generators sampled.
pub const IP_GENERATORS: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct IntersectiveReport {
    pub has_zero_digit: bool,
    pub kernel: KernelReport,
    /// Generators `d b^t` used for the finite-sums check.
    pub generators: Vec<BigUint>,
    /// Every finite sum, and every difference of nested finite sums, is a member.
    pub ip_sample_holds: bool,
}

/// IP structure and difference kernel of `set`.
///
/// The generators are `d b^t` for `t = 0, 1, …` with `d` the least nonzero
/// digit. With `0 ∈ D` their finite sums are members; without it they are not.
pub fn is_intersective_structure(set: &CantorSet) -> Result<IntersectiveReport> {
    let kernel = if set.base() as usize <= 128 {
        find_difference_kernel(set.base(), set.digits())?
    } else {
        KernelReport { witness: None, antipodal: None }
    };
    let d = set.digits().iter().copied().find(|&d| d != 0).expect("two digits");
    let generators: Vec<BigUint> =
        (0..IP_GENERATORS as u32).map(|t| BigUint::from(d) * BigUint::from(set.base()).pow(t)).collect();
    let sums: Vec<BigUint> = (0u32..1 << generators.len())
        .map(|mask| generators.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, g)| g).sum())
        .collect();
    // Differences of nested finite sums, on a sample of outer sets.
    let mut holds = sums.iter().skip(1).all(|k| set.contains(k));
    for outer in (0..sums.len()).step_by(37) {
        let mut inner = outer;
        while holds && inner != 0 {
            inner = (inner - 1) & outer;
            let diff = &sums[outer] - &sums[inner];
            holds = diff.is_zero() || set.contains(&diff);
        }
    }
    Ok(IntersectiveReport { has_zero_digit: set.has_zero(), kernel, generators, ip_sample_holds: holds })
}

/// `(log(4k+1)/log b, log(2k+1)/log b)`: the dimension of `C(b, {−2k..2k})`
/// and the exponent of its kernel `{−k..k}`.
pub fn dimension_power_savings(base: u32, k: u32) -> (f64, f64) {
    let lb = f64::from(base).ln();
    (f64::from(4 * k + 1).ln() / lb, f64::from(2 * k + 1).ln() / lb)
}

/// The translates `A + k`, `k ∈ C(b,S) ∩ [b^n]`, are pairwise disjoint inside
/// `[1, 2b^n]`, so `|A| · |S|^n ≤ 2 b^n`.
pub fn packing_bound_holds(avoiding_size: usize, kernel_size: usize, base: u32, n: u32) -> bool {
    BigUint::from(avoiding_size) * BigUint::from(kernel_size).pow(n)
        <= BigUint::from(2u32) * BigUint::from(base).pow(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_reports() {
        let c = CantorSet::new(3, [0, 2]).unwrap();
        let r = is_intersective_structure(&c).unwrap();
        assert!(r.has_zero_digit && r.ip_sample_holds);
        assert_eq!(r.kernel.witness, None);

        let c = CantorSet::new(5, [0, 2, 3]).unwrap();
        let r = is_intersective_structure(&c).unwrap();
        assert_eq!(r.kernel.witness.unwrap().residues(), vec![0, 2]);

        let c = CantorSet::new(3, [1, 2]).unwrap();
        assert!(!is_intersective_structure(&c).unwrap().ip_sample_holds);
    }

    #[test]
    fn dimension_pairs() {
        for k in 1..4 {
            for b in [4 * k + 1, 10 * k, 100 * k] {
                let (dim, c) = dimension_power_savings(b, k);
                assert!(dim > c && (dim - c) * f64::from(b).ln() <= 2f64.ln() + 1e-12);
            }
        }
    }

    #[test]
    fn packing_on_exact_witnesses() {
        let c = CantorSet::new(5, [0, 2, 3]).unwrap();
        let family = DifferenceFamily::from_cantor(&c, 25);
        let a = max_avoiding_set(&family, 25, SolverMode::Exact).unwrap();
        assert!(packing_bound_holds(a.size, 2, 5, 2));
        // The finite constant stays modest.
        assert!(a.size as f64 <= 4.0 * 6.25);
    }
}
