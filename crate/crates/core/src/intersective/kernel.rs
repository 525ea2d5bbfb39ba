use super::clique::{max_clique, members, MAX_VERTICES};
use crate::error::{Error, Result};

/// Representative of `x mod b` in `(−b/2, b/2]`.
pub fn balanced(x: i64, b: u32) -> i64 {
    let b = i64::from(b);
    let r = x.rem_euclid(b);
    if 2 * r > b {
        r - b
    } else {
        r
    }
}

/// `S ⊆ Z_b` with `S − S ⊆ D` and `|S| > 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelWitness {
    pub base: u32,
    /// Balanced representatives, increasing.
    pub elements: Vec<i64>,
    /// `log |S| / log b`.
    pub exponent: f64,
}

impl KernelWitness {
    pub fn new(base: u32, elements: impl IntoIterator<Item = i64>) -> Self {
        let mut elements: Vec<i64> = elements.into_iter().map(|x| balanced(x, base)).collect();
        elements.sort_unstable();
        elements.dedup();
        let exponent = (elements.len() as f64).ln() / f64::from(base).ln();
        KernelWitness { base, elements, exponent }
    }

    pub fn residues(&self) -> Vec<u32> {
        let mut r: Vec<u32> =
            self.elements.iter().map(|&x| x.rem_euclid(i64::from(self.base)) as u32).collect();
        r.sort_unstable();
        r
    }

    /// Checks `S − S ⊆ D` modulo `b`.
    pub fn differences_within(&self, digits: &[u32]) -> bool {
        let b = i64::from(self.base);
        self.elements
            .iter()
            .all(|&x| self.elements.iter().all(|&y| digits.contains(&((x - y).rem_euclid(b) as u32))))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelReport {
    pub witness: Option<KernelWitness>,
    /// Some `d` with `d, −d ∈ D` and `d ≠ 0`, giving the kernel `{0, d}`.
    pub antipodal: Option<u32>,
}

/// Largest `S ⊆ Z_b` with `S − S ⊆ D (mod b)`.
///
/// Translating `S` does not change `S − S`, so `0 ∈ S` may be assumed and the
/// other elements are the vertices `x` with `x, −x ∈ D`, joined when
/// `x − y, y − x ∈ D`. Among maximum cliques the one whose elements, sorted by
/// `(|balanced(x)|, x)`, are lexicographically least is returned.
pub fn find_difference_kernel(b: u32, residues: &[u32]) -> Result<KernelReport> {
    if b as usize > MAX_VERTICES || b < 2 {
        return Err(Error::InvalidArgument(format!("kernel search needs 2 <= b <= {MAX_VERTICES}, got {b}")));
    }
    let bi = i64::from(b);
    let mut in_d = vec![false; b as usize];
    for &d in residues {
        in_d[(d % b) as usize] = true;
    }
    let has = |x: i64| in_d[x.rem_euclid(bi) as usize];
    let antipodal = (1..b).find(|&d| has(i64::from(d)) && has(-i64::from(d)));
    if !in_d[0] {
        return Ok(KernelReport { witness: None, antipodal: None });
    }
    let vertex = |x: usize| x != 0 && has(x as i64) && has(-(x as i64));
    let adj: Vec<u128> = (0..b as usize)
        .map(|x| {
            if !vertex(x) {
                return 0;
            }
            (1..b as usize)
                .filter(|&y| y != x && vertex(y) && has(x as i64 - y as i64) && has(y as i64 - x as i64))
                .fold(0u128, |row, y| row | 1u128 << y)
        })
        .collect();
    let candidates = (1..b as usize).filter(|&x| vertex(x)).fold(0u128, |m, x| m | 1u128 << x);
    let omega = max_clique(&adj, candidates).count_ones();
    if omega == 0 {
        return Ok(KernelReport { witness: None, antipodal });
    }

    let mut order: Vec<usize> = members(candidates);
    order.sort_by_key(|&x| (balanced(x as i64, b).abs(), x));
    let mut chosen = 0u128;
    let mut open = candidates;
    for &x in &order {
        if open & 1u128 << x == 0 {
            continue;
        }
        let rest = max_clique(&adj, open & adj[x]).count_ones();
        if chosen.count_ones() + 1 + rest == omega {
            chosen |= 1u128 << x;
            open &= adj[x];
        }
        if chosen.count_ones() == omega {
            break;
        }
    }
    let elements = std::iter::once(0).chain(members(chosen).into_iter().map(|x| x as i64));
    Ok(KernelReport { witness: Some(KernelWitness::new(b, elements)), antipodal })
}
