//! Maximum cliques in graphs with at most 128 vertices, stored as `u128`
//! adjacency rows. Branch and bound with greedy colouring bounds.

pub(crate) const MAX_VERTICES: usize = 128;

fn bit(v: usize) -> u128 {
    1u128 << v
}

fn vertices(mut set: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if set == 0 {
            None
        } else {
            let v = set.trailing_zeros() as usize;
            set &= set - 1;
            Some(v)
        }
    })
}

/// Vertices of `candidates` in colour order with their colour numbers
/// (1-based). Any clique inside the vertices up to position `i` has at most
/// `colours[i]` members.
fn colour_order(adj: &[u128], candidates: u128) -> (Vec<usize>, Vec<u32>) {
    let mut order = Vec::with_capacity(candidates.count_ones() as usize);
    let mut colours = Vec::with_capacity(order.capacity());
    let mut uncoloured = candidates;
    let mut colour = 0;
    while uncoloured != 0 {
        colour += 1;
        let mut open = uncoloured;
        while open != 0 {
            let v = open.trailing_zeros() as usize;
            open &= !bit(v) & !adj[v];
            uncoloured &= !bit(v);
            order.push(v);
            colours.push(colour);
        }
    }
    (order, colours)
}

struct Search<'a> {
    adj: &'a [u128],
    best: u128,
    best_size: u32,
}

impl Search<'_> {
    fn expand(&mut self, current: u128, size: u32, mut candidates: u128) {
        let (order, colours) = colour_order(self.adj, candidates);
        for i in (0..order.len()).rev() {
            if size + colours[i] <= self.best_size {
                return;
            }
            let v = order[i];
            let next = candidates & self.adj[v];
            let grown = current | bit(v);
            if next == 0 {
                if size + 1 > self.best_size {
                    self.best = grown;
                    self.best_size = size + 1;
                }
            } else {
                self.expand(grown, size + 1, next);
            }
            candidates &= !bit(v);
        }
    }
}

/// Greedy clique: repeatedly take the candidate with most candidate neighbours.
fn greedy_clique(adj: &[u128], mut candidates: u128) -> u128 {
    let mut clique = 0;
    while candidates != 0 {
        let v = vertices(candidates)
            .max_by_key(|&v| ((adj[v] & candidates).count_ones(), std::cmp::Reverse(v)))
            .expect("nonempty");
        clique |= bit(v);
        candidates &= adj[v];
    }
    clique
}

/// A maximum clique inside `candidates`, as a vertex bitset.
///
/// `adj[v]` must not contain `v`.
pub(crate) fn max_clique(adj: &[u128], candidates: u128) -> u128 {
    debug_assert!(adj.len() <= MAX_VERTICES);
    let start = greedy_clique(adj, candidates);
    let mut search = Search { adj, best: start, best_size: start.count_ones() };
    if candidates != 0 {
        search.expand(0, 0, candidates);
    }
    search.best
}

pub(crate) fn members(set: u128) -> Vec<usize> {
    vertices(set).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_clique_number(adj: &[u128], n: usize) -> u32 {
        let mut best = 0;
        for s in 0u32..(1 << n) {
            let set = s as u128;
            if vertices(set).all(|v| adj[v] & set == set & !bit(v)) {
                best = best.max(s.count_ones());
            }
        }
        best
    }

    #[test]
    fn random_graphs_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..40 {
            let n = 4 + trial % 12;
            let p = 0.2 + 0.6 * (trial as f64 / 40.0);
            let mut adj = vec![0u128; n];
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random_bool(p) {
                        adj[i] |= bit(j);
                        adj[j] |= bit(i);
                    }
                }
            }
            let all = (1u128 << n) - 1;
            let clique = max_clique(&adj, all);
            for v in vertices(clique) {
                assert_eq!(adj[v] & clique, clique & !bit(v));
            }
            assert_eq!(clique.count_ones(), brute_clique_number(&adj, n));
        }
    }

    #[test]
    fn empty_and_complete() {
        assert_eq!(max_clique(&[0, 0, 0], 0b111).count_ones(), 1);
        assert_eq!(max_clique(&[0b110, 0b101, 0b011], 0b111), 0b111);
        assert_eq!(max_clique(&[], 0), 0);
    }
}
