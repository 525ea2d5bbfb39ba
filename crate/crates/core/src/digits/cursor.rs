//! Incremental walk over consecutive members `k_M, k_{M+1}, ...`.
//!
//! The cursor holds the digit positions of the current index and reports
//! which places changed on every step, so that residue trackers can update
//! in amortized constant time instead of rebuilding `k_n` from scratch.

use num_bigint::BigUint;

use super::CantorSet;

/// A single place update produced by [`IndexCursor::advance`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct PlaceChange {
    pub place: usize,
    /// `None` when the place was just created.
    pub old: Option<usize>,
    pub new: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct IndexCursor {
    radix: usize,
    zero_digit: bool,
    positions: Vec<usize>,
}

impl IndexCursor {
    pub fn new(set: &CantorSet, start: &BigUint) -> Self {
        IndexCursor { radix: set.radix(), zero_digit: set.has_zero(), positions: set.index_positions(start) }
    }

    /// Digit positions of the current member, least significant first.
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn advance(&mut self, mut on_change: impl FnMut(PlaceChange)) {
        let top = self.radix - 1;
        for place in 0..self.positions.len() {
            let old = self.positions[place];
            if old < top {
                self.positions[place] = old + 1;
                on_change(PlaceChange { place, old: Some(old), new: old + 1 });
                return;
            }
            self.positions[place] = 0;
            on_change(PlaceChange { place, old: Some(old), new: 0 });
        }
        // Every place overflowed: the member gains a digit. With 0 in D the
        // new leading position is d_1; otherwise the next length block starts
        // at all-minimal digits.
        let new = usize::from(self.zero_digit);
        let place = self.positions.len();
        self.positions.push(new);
        on_change(PlaceChange { place, old: None, new });
    }
}

/// Running sum of per-place contributions modulo `modulus`, or modulo `2^64`
/// when `modulus` is `None`.
pub(crate) struct PlaceSum<F: FnMut(usize, usize) -> u64> {
    modulus: Option<u64>,
    rows: Vec<Vec<u64>>,
    contribution: F,
    radix: usize,
    value: u64,
}

impl<F: FnMut(usize, usize) -> u64> PlaceSum<F> {
    /// `contribution(place, position)` must already be reduced.
    pub fn new(modulus: Option<u64>, radix: usize, contribution: F) -> Self {
        if let Some(m) = modulus {
            assert!((1..(1 << 62)).contains(&m), "modulus out of range");
        }
        PlaceSum { modulus, rows: Vec::new(), contribution, radix, value: 0 }
    }

    fn entry(&mut self, place: usize, position: usize) -> u64 {
        while self.rows.len() <= place {
            let p = self.rows.len();
            let row = (0..self.radix).map(|i| (self.contribution)(p, i)).collect();
            self.rows.push(row);
        }
        self.rows[place][position]
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        match self.modulus {
            Some(m) => {
                let s = a + b;
                if s >= m {
                    s - m
                } else {
                    s
                }
            }
            None => a.wrapping_add(b),
        }
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        match self.modulus {
            Some(m) => {
                if a >= b {
                    a - b
                } else {
                    a + m - b
                }
            }
            None => a.wrapping_sub(b),
        }
    }

    pub fn reset(&mut self, positions: &[usize]) {
        let mut v = 0;
        for (place, &pos) in positions.iter().enumerate() {
            let e = self.entry(place, pos);
            v = self.add(v, e);
        }
        self.value = v;
    }

    pub fn apply(&mut self, change: PlaceChange) {
        if let Some(old) = change.old {
            let e = self.entry(change.place, old);
            self.value = self.sub(self.value, e);
        }
        let e = self.entry(change.place, change.new);
        self.value = self.add(self.value, e);
    }

    pub fn value(&self) -> u64 {
        self.value
    }
}

/// `a * b mod m` without overflow.
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

pub(crate) fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1 % m;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    acc
}

/// Tracks `(k_n mod q, s_b(k_n) mod q2)` along a cursor.
pub(crate) struct ResidueWalk<'a> {
    cursor: IndexCursor,
    element: PlaceSum<Box<dyn FnMut(usize, usize) -> u64 + 'a>>,
    digit_sum: PlaceSum<Box<dyn FnMut(usize, usize) -> u64 + 'a>>,
}

impl<'a> ResidueWalk<'a> {
    pub fn new(set: &'a CantorSet, q: u64, q2: u64, start: &BigUint) -> Self {
        let cursor = IndexCursor::new(set, start);
        let b = u64::from(set.base());
        let mut place_power: Vec<u64> = Vec::new();
        let element: Box<dyn FnMut(usize, usize) -> u64> = Box::new(move |place, pos| {
            while place_power.len() <= place {
                let next = match place_power.last() {
                    None => 1 % q,
                    Some(&p) => mul_mod(p, b, q),
                };
                place_power.push(next);
            }
            mul_mod(u64::from(set.digits()[pos]), place_power[place], q)
        });
        let digit_sum: Box<dyn FnMut(usize, usize) -> u64> =
            Box::new(move |_, pos| u64::from(set.digits()[pos]) % q2);
        let mut element = PlaceSum::new(Some(q), set.radix(), element);
        let mut digit_sum = PlaceSum::new(Some(q2), set.radix(), digit_sum);
        element.reset(cursor.positions());
        digit_sum.reset(cursor.positions());
        ResidueWalk { cursor, element, digit_sum }
    }

    /// `(k mod q, s_b(k) mod q2)` for the current member.
    pub fn current(&self) -> (u64, u64) {
        (self.element.value(), self.digit_sum.value())
    }

    pub fn advance(&mut self) {
        let element = &mut self.element;
        let digit_sum = &mut self.digit_sum;
        self.cursor.advance(|c| {
            element.apply(c);
            digit_sum.apply(c);
        });
    }
}
