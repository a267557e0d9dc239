use super::{Hypergraph3, HypergraphLike};
use crate::error::{Error, Result};

/// Default cap on backtracking steps (candidate images tried).
pub const DEFAULT_SEARCH_BUDGET: u64 = 50_000_000;

/// Injective, edge- and non-edge-preserving.
pub fn verify_embedding<B: HypergraphLike + ?Sized>(a: &Hypergraph3, b: &B, map: &[usize]) -> bool {
    if map.len() != a.n() || map.iter().any(|&x| x >= b.vertex_count()) {
        return false;
    }
    for i in 0..map.len() {
        for j in i + 1..map.len() {
            if map[i] == map[j] {
                return false;
            }
            for k in j + 1..map.len() {
                if a.has_edge(i, j, k) != b.has_edge(map[i], map[j], map[k]) {
                    return false;
                }
            }
        }
    }
    true
}

struct Search<'a, B: ?Sized> {
    a: &'a Hypergraph3,
    b: &'a B,
    used: Vec<bool>,
    map: Vec<usize>,
    steps: u64,
    budget: u64,
}

impl<B: HypergraphLike + ?Sized> Search<'_, B> {
    fn consistent(&self, i: usize, x: usize) -> bool {
        (0..i).all(|j| {
            (j + 1..i).all(|k| {
                self.a.has_edge(j, k, i) == self.b.has_edge(self.map[j], self.map[k], x)
            })
        })
    }

    /// Visits embeddings in lexicographic order of the image sequence;
    /// `visit` returns `false` to stop.
    fn run(&mut self, visit: &mut dyn FnMut(&[usize]) -> bool) -> Result<bool> {
        let i = self.map.len();
        if i == self.a.n() {
            return Ok(visit(&self.map));
        }
        for x in 0..self.b.vertex_count() {
            if self.used[x] {
                continue;
            }
            self.steps += 1;
            if self.steps > self.budget {
                return Err(Error::budget("embedding search steps", u128::from(self.budget), None));
            }
            if !self.consistent(i, x) {
                continue;
            }
            self.used[x] = true;
            self.map.push(x);
            let go_on = self.run(visit)?;
            self.map.pop();
            self.used[x] = false;
            if !go_on {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn search<B: HypergraphLike + ?Sized>(
    a: &Hypergraph3,
    b: &B,
    budget: u64,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> Result<()> {
    let mut s = Search {
        a,
        b,
        used: vec![false; b.vertex_count()],
        map: Vec::with_capacity(a.n()),
        steps: 0,
        budget,
    };
    s.run(visit).map(|_| ())
}

/// The lexicographically first embedding of `a` into `b`, if any.
pub fn find_embedding<B: HypergraphLike + ?Sized>(
    a: &Hypergraph3,
    b: &B,
    budget: u64,
) -> Result<Option<Vec<usize>>> {
    let mut found = None;
    search(a, b, budget, &mut |m| {
        found = Some(m.to_vec());
        false
    })?;
    Ok(found)
}

/// Every embedding of `a` into `b`, in lexicographic order of images.
pub fn find_embeddings<B: HypergraphLike + ?Sized>(
    a: &Hypergraph3,
    b: &B,
    budget: u64,
) -> Result<Vec<Vec<usize>>> {
    let mut all = Vec::new();
    search(a, b, budget, &mut |m| {
        all.push(m.to_vec());
        true
    })?;
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> Hypergraph3 {
        Hypergraph3::with_edges(4, [[0, 1, 2], [0, 1, 3], [1, 2, 3]]).unwrap()
    }

    #[test]
    fn single_vertex_goes_to_zero() {
        let one = Hypergraph3::new(1);
        assert_eq!(find_embedding(&one, &example(), 100).unwrap(), Some(vec![0]));
    }

    #[test]
    fn one_edge_into_example() {
        let edge = Hypergraph3::with_edges(3, [[0, 1, 2]]).unwrap();
        let all = find_embeddings(&edge, &example(), 10_000).unwrap();
        assert_eq!(all.len(), 18);
        assert!(all.iter().all(|m| verify_embedding(&edge, &example(), m)));
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn identity_is_found() {
        let h = example();
        let all = find_embeddings(&h, &h, 10_000).unwrap();
        assert!(all.contains(&vec![0, 1, 2, 3]));
    }

    #[test]
    fn budget_stops_search() {
        let big = Hypergraph3::new(8);
        assert!(matches!(
            find_embeddings(&big, &Hypergraph3::new(8), 10),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn no_embedding_of_edge_into_empty() {
        let edge = Hypergraph3::with_edges(3, [[0, 1, 2]]).unwrap();
        assert_eq!(find_embedding(&edge, &Hypergraph3::new(5), 1000).unwrap(), None);
    }
}
