//! Phases `k_n α + s_b(k_n) β mod 1` along consecutive members.
//!
//! With `α = A/Q`, `β = B/Q` over a common denominator `Q < 2^62` the phase
//! is the exact residue `(A k_n + B s_b(k_n)) mod Q`, updated per changed
//! place. Larger denominators (including the dyadic values of reals) use a
//! 64-bit fixed-point fraction of a turn, with each place contribution
//! rounded once.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::digits::{mul_mod, CantorSet, IndexCursor, PlaceSum};
use crate::frequency::{common_denominator, frac, scaled_numerator};

/// Denominators below this bound use exact residues.
pub(crate) const EXACT_MODULUS_LIMIT: u64 = 1 << 62;

type Contribution<'a> = Box<dyn FnMut(usize, usize) -> u64 + 'a>;

pub(crate) struct PhaseWalk<'a> {
    cursor: IndexCursor,
    sum: PlaceSum<Contribution<'a>>,
    modulus: Option<u64>,
}

/// `floor(x · 2^64)` for `x` in `[0, 1)`.
pub(crate) fn to_fixed(x: &BigRational) -> u64 {
    let scaled: BigInt = (x.numer() << 64u32) / x.denom();
    scaled.to_u64().unwrap_or(u64::MAX)
}

impl<'a> PhaseWalk<'a> {
    pub fn new(set: &'a CantorSet, alpha: &BigRational, beta: &BigRational, start: &BigUint) -> Self {
        let cursor = IndexCursor::new(set, start);
        let q = common_denominator([alpha, beta]);
        let b = u64::from(set.base());
        let (modulus, contribution): (Option<u64>, Contribution<'a>) = match q.to_u64() {
            Some(q) if q < EXACT_MODULUS_LIMIT => {
                let qb = BigUint::from(q);
                let a = scaled_numerator(alpha, &qb).to_u64().expect("below modulus");
                let bb = scaled_numerator(beta, &qb).to_u64().expect("below modulus");
                let mut place_alpha: Vec<u64> = Vec::new();
                let contribution = Box::new(move |place: usize, pos: usize| {
                    while place_alpha.len() <= place {
                        let next = match place_alpha.last() {
                            None => a % q,
                            Some(&p) => mul_mod(p, b, q),
                        };
                        place_alpha.push(next);
                    }
                    let d = u64::from(set.digits()[pos]);
                    mul_mod(d, (place_alpha[place] + bb) % q, q)
                });
                (Some(q), contribution)
            }
            _ => {
                let alpha = frac(alpha);
                let beta = frac(beta);
                let base = BigRational::from_integer(BigInt::from(b));
                let mut place_alpha: Vec<BigRational> = Vec::new();
                let contribution = Box::new(move |place: usize, pos: usize| {
                    while place_alpha.len() <= place {
                        let next = match place_alpha.last() {
                            None => alpha.clone(),
                            Some(p) => frac(&(p * &base)),
                        };
                        place_alpha.push(next);
                    }
                    let d = BigRational::from_integer(BigInt::from(set.digits()[pos]));
                    to_fixed(&frac(&(d * (&place_alpha[place] + &beta))))
                });
                (None, contribution)
            }
        };
        let mut sum = PlaceSum::new(modulus, set.radix(), contribution);
        sum.reset(cursor.positions());
        PhaseWalk { cursor, sum, modulus }
    }

    /// Current phase as a fraction of a turn in `[0, 1]`.
    pub fn phase(&self) -> f64 {
        match self.modulus {
            Some(q) => self.sum.value() as f64 / q as f64,
            None => self.sum.value() as f64 * (-64f64).exp2(),
        }
    }

    /// The exact residue numerator and its modulus on the exact route.
    #[cfg(test)]
    pub fn residue(&self) -> Option<(u64, u64)> {
        self.modulus.map(|q| (self.sum.value(), q))
    }

    pub fn advance(&mut self) {
        let sum = &mut self.sum;
        self.cursor.advance(|c| sum.apply(c));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frequency::Frequency;

    /// Phase from the full member, reduced once.
    fn full_phase(set: &CantorSet, alpha: &BigRational, beta: &BigRational, n: u64) -> f64 {
        let q = common_denominator([alpha, beta]);
        let k = set.element(n);
        let s = BigUint::from(set.sum_digits(&k));
        let r = (scaled_numerator(alpha, &q) * k + scaled_numerator(beta, &q) * s) % &q;
        r.to_u64().unwrap() as f64 / q.to_u64().unwrap() as f64
    }

    #[test]
    fn residue_route_is_bit_exact() {
        let set = CantorSet::new(7, [0, 1, 3, 5]).unwrap();
        for (a, b) in [((3, 11), (1, 2)), ((5, 343), (2, 3)), ((1_000_003, 1u64 << 40), (7, 9))] {
            let alpha = Frequency::rational(a.0, a.1).exact();
            let beta = Frequency::rational(b.0, b.1).exact();
            let mut walk = PhaseWalk::new(&set, &alpha, &beta, &BigUint::from(0u32));
            for n in 0..5000 {
                assert_eq!(walk.phase().to_bits(), full_phase(&set, &alpha, &beta, n).to_bits());
                walk.advance();
            }
        }
    }

    #[test]
    fn fixed_point_route_tracks_the_exact_phase() {
        let set = CantorSet::new(3, [0, 2]).unwrap();
        let alpha = Frequency::real(std::f64::consts::SQRT_2 - 1.0).exact();
        // A tiny dyadic β pushes the common denominator past the residue route.
        let beta = Frequency::real(3e-19).exact();
        let start = BigUint::from(1000u32);
        let mut walk = PhaseWalk::new(&set, &alpha, &beta, &start);
        assert!(walk.residue().is_none());
        for n in 1000..3000u64 {
            let k = set.element(n);
            let s = set.sum_digits(&k);
            let exact = frac(
                &(&alpha * BigRational::from_integer(k.into()) + &beta * BigRational::from_integer(s.into())),
            );
            let diff = (walk.phase() - exact.to_f64().unwrap()).abs();
            assert!(diff.min(1.0 - diff) < 1e-15, "n = {n}");
            walk.advance();
        }
    }
}
