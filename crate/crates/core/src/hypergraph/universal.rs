use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Hypergraph3, HypergraphLike};
use crate::error::{Error, Result};

/// Largest vertex set a task may constrain.
pub const DEFAULT_RICHNESS: usize = 4;

/// Prefixes beyond this size are refused.
const MAX_PREFIX_VERTICES: usize = 512;

/// Seeded `n`-vertex prefix with the default richness.
pub fn universal_prefix(n: usize, seed: u64) -> Result<Hypergraph3> {
    universal_prefix_with(n, seed, DEFAULT_RICHNESS)
}

/// Build an `n`-vertex hypergraph by greedily meeting one-point extension
/// tasks `(F, τ)`: `F` is a set of at most `richness` existing vertices and
/// `τ` a set of pairs inside `F`; the task is met when some vertex outside
/// `F` forms an edge with exactly the pairs in `τ`.
///
/// Tasks are visited by largest element of `F`, then size, then
/// lexicographically, then by `τ` read as a bitmask over the pairs of `F`.
/// Each unmet task appends a vertex realizing it; pairs not inside `F`
/// receive seeded coin flips.
pub fn universal_prefix_with(n: usize, seed: u64, richness: usize) -> Result<Hypergraph3> {
    if n > MAX_PREFIX_VERTICES {
        return Err(Error::budget(
            "universal prefix vertices",
            MAX_PREFIX_VERTICES as u128,
            None,
        ));
    }
    if richness == 0 {
        return Err(Error::usage("richness must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = Hypergraph3::new(0);
    if n == 0 {
        return Ok(h);
    }
    append(&mut h, 0, &[], &mut rng);
    let mut m = 0;
    while h.n() < n {
        if m >= h.n() {
            append(&mut h, 0, &[], &mut rng);
            continue;
        }
        for f in 1..=richness.min(m + 1) {
            for mut set in subsets(m, f - 1) {
                set.push(m);
                let pairs = pairs_of(&set);
                for tau in 0..1u64 << pairs.len() {
                    if !is_met(&h, &set, &pairs, tau) {
                        append(&mut h, tau, &pairs, &mut rng);
                        if h.n() >= n {
                            return Ok(h);
                        }
                    }
                }
            }
        }
        m += 1;
    }
    Ok(h)
}

fn is_met(h: &Hypergraph3, set: &[usize], pairs: &[(usize, usize)], tau: u64) -> bool {
    (0..h.n()).filter(|y| !set.contains(y)).any(|y| {
        pairs
            .iter()
            .enumerate()
            .all(|(i, &(j, k))| h.has_edge(j, k, y) == ((tau >> i) & 1 == 1))
    })
}

fn append(h: &mut Hypergraph3, tau: u64, pairs: &[(usize, usize)], rng: &mut ChaCha8Rng) {
    let x = h.add_vertex();
    for j in 0..x {
        for k in j + 1..x {
            let edge = match pairs.iter().position(|&p| p == (j, k)) {
                Some(i) => (tau >> i) & 1 == 1,
                None => rng.gen_bool(0.5),
            };
            if edge {
                h.add_edge(j, k, x).expect("fresh vertex");
            }
        }
    }
}

fn pairs_of(set: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &j) in set.iter().enumerate() {
        for &k in &set[i + 1..] {
            out.push((j.min(k), j.max(k)));
        }
    }
    out
}

/// `size`-subsets of `0..m`, lexicographic.
fn subsets(m: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, size, &mut Vec::new(), &mut out);
    out
}
