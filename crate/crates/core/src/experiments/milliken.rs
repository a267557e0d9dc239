use serde::Serialize;

use super::Coloring;
use crate::error::{Error, Result};
use crate::subtrees::{colex_subsets, StrongSubtreeStream, SubtreeWalker, VectorStrongSubtree, VectorTruncation};

/// Default cap on partial subtrees visited by a search.
pub const DEFAULT_MILLIKEN_BUDGET: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MillikenOutcome {
    /// A height-`m` subtree all of whose height-`k` subtrees share a color.
    Found(VectorStrongSubtree),
    /// Every candidate was ruled out.
    Exhausted,
}

impl MillikenOutcome {
    pub fn witness(&self) -> Option<&VectorStrongSubtree> {
        match self {
            MillikenOutcome::Found(s) => Some(s),
            MillikenOutcome::Exhausted => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MillikenReport {
    pub outcome: MillikenOutcome,
    /// Partial subtrees examined.
    pub visited: u64,
}

fn check_shape(ambient: &VectorTruncation, k: usize, m: usize) -> Result<()> {
    if k > m || m > ambient.height {
        return Err(Error::usage(format!(
            "need k <= m <= height, got k={k}, m={m}, height={}",
            ambient.height
        )));
    }
    Ok(())
}

/// Height-`k` strong subtrees of `s` whose top slice is slice `top` of `s`.
fn subtrees_topped_at(s: &VectorStrongSubtree, k: usize, top: usize) -> Result<Vec<VectorStrongSubtree>> {
    let sets = colex_subsets(top, k - 1)
        .into_iter()
        .map(|mut l| {
            l.push(top);
            l
        })
        .collect();
    let walker = SubtreeWalker::new(s.s1(), s.s2(), sets)?;
    Ok(StrongSubtreeStream::new(walker).collect())
}

/// Whether every height-`k` strong subtree of `s` gets the same color.
pub fn is_monochromatic<C, F>(s: &VectorStrongSubtree, k: usize, mut color: F) -> Result<bool>
where
    C: Eq,
    F: FnMut(&VectorStrongSubtree) -> Result<C>,
{
    let walker = SubtreeWalker::new(s.s1(), s.s2(), colex_subsets(s.height(), k))?;
    let mut first = None;
    for q in StrongSubtreeStream::new(walker) {
        let c = color(&q)?;
        match &first {
            None => first = Some(c),
            Some(f) if *f != c => return Ok(false),
            Some(_) => {}
        }
    }
    Ok(true)
}

/// Search `Str_m` of the truncation for a subtree whose `Str_k` is
/// monochromatic under `chi`, in canonical order.
pub fn milliken_search(
    ambient: &VectorTruncation,
    k: usize,
    m: usize,
    chi: &Coloring,
    budget: u64,
) -> Result<MillikenReport> {
    milliken_search_by(ambient, k, m, |s| chi.color(s), budget)
}

/// [`milliken_search`] with an arbitrary coloring of `Str_k`.
///
/// A prefix is abandoned as soon as a height-`k` subtree ending in its
/// newest slice disagrees with the color fixed by earlier slices.
pub fn milliken_search_by<C, F>(
    ambient: &VectorTruncation,
    k: usize,
    m: usize,
    mut color: F,
    budget: u64,
) -> Result<MillikenReport>
where
    C: Clone + Eq,
    F: FnMut(&VectorStrongSubtree) -> Result<C>,
{
    check_shape(ambient, k, m)?;
    let (h1, h2) = ambient.hosts();
    let mut walker = SubtreeWalker::new(h1, h2, colex_subsets(ambient.height, m))?;

    // fixed[d] is the common color once d + 1 slices are chosen.
    let mut fixed: Vec<Option<C>> = Vec::new();
    let mut visited = 0u64;
    let mut failure: Option<Error> = None;
    let found = {
        let mut prune = |p: &VectorStrongSubtree| -> bool {
            visited += 1;
            if visited > budget {
                failure.get_or_insert_with(|| {
                    Error::budget("Milliken search candidates", u128::from(budget), None)
                });
                return false;
            }
            let d = p.height();
            fixed.truncate(d - 1);
            let mut base = fixed.last().cloned().flatten();
            if k >= 1 && d >= k {
                let fresh = match subtrees_topped_at(p, k, d - 1) {
                    Ok(f) => f,
                    Err(e) => {
                        failure.get_or_insert(e);
                        return false;
                    }
                };
                for q in &fresh {
                    let c = match color(q) {
                        Ok(c) => c,
                        Err(e) => {
                            failure.get_or_insert(e);
                            return false;
                        }
                    };
                    match &base {
                        None => base = Some(c),
                        Some(b) if *b != c => return false,
                        Some(_) => {}
                    }
                }
            }
            fixed.push(base);
            true
        };
        walker.next_with(Some(&mut prune))
    };
    if let Some(e) = failure {
        return Err(e);
    }
    let outcome = match found {
        Some(s) => {
            if !is_monochromatic(&s, k, &mut color)? {
                return Err(Error::invariant("search returned a non-monochromatic subtree"));
            }
            MillikenOutcome::Found(s)
        }
        None => MillikenOutcome::Exhausted,
    };
    Ok(MillikenReport { outcome, visited })
}

/// Independent check: every candidate in reverse level-set order, each
/// tested in full without pruning.
pub fn milliken_exhaustive_reversed<C, F>(
    ambient: &VectorTruncation,
    k: usize,
    m: usize,
    mut color: F,
    budget: u64,
) -> Result<MillikenOutcome>
where
    C: Eq,
    F: FnMut(&VectorStrongSubtree) -> Result<C>,
{
    check_shape(ambient, k, m)?;
    let (h1, h2) = ambient.hosts();
    let mut sets = colex_subsets(ambient.height, m);
    sets.reverse();
    let walker = SubtreeWalker::new(h1, h2, sets)?;
    for (i, s) in StrongSubtreeStream::new(walker).enumerate() {
        if i as u64 >= budget {
            return Err(Error::budget("exhaustive Milliken pass", u128::from(budget), None));
        }
        if is_monochromatic(&s, k, &mut color)? {
            return Ok(MillikenOutcome::Found(s));
        }
    }
    Ok(MillikenOutcome::Exhausted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parity() -> Coloring {
        Coloring::parse("parity:2", 0).unwrap()
    }

    #[test]
    fn constant_finds_first_candidate() {
        let t = VectorTruncation::new(3);
        let r = milliken_search(&t, 1, 2, &Coloring::constant(), 1000).unwrap();
        let s = r.outcome.witness().unwrap();
        assert_eq!(s.levels(), &[0, 1]);
    }

    #[test]
    fn parity_on_three_levels_uses_even_levels() {
        let t = VectorTruncation::new(3);
        let r = milliken_search(&t, 1, 2, &parity(), 1000).unwrap();
        assert_eq!(r.outcome.witness().unwrap().levels(), &[0, 2]);
        let chi = parity();
        let again = milliken_exhaustive_reversed(&t, 1, 2, |s| chi.color(s), 1000).unwrap();
        assert_eq!(again.witness().unwrap().levels(), &[0, 2]);
    }

    #[test]
    fn parity_on_two_levels_is_exhausted() {
        let t = VectorTruncation::new(2);
        let r = milliken_search(&t, 1, 2, &parity(), 1000).unwrap();
        assert_eq!(r.outcome, MillikenOutcome::Exhausted);
        let chi = parity();
        assert_eq!(
            milliken_exhaustive_reversed(&t, 1, 2, |s| chi.color(s), 1000).unwrap(),
            MillikenOutcome::Exhausted
        );
    }

    #[test]
    fn budget_is_an_error_not_exhaustion() {
        let t = VectorTruncation::new(4);
        let chi = Coloring::parse("hash:2:1", 0).unwrap();
        assert!(matches!(
            milliken_search(&t, 1, 3, &chi, 2),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn rejects_bad_shape() {
        let t = VectorTruncation::new(2);
        assert!(milliken_search(&t, 2, 1, &parity(), 10).is_err());
        assert!(milliken_search(&t, 1, 3, &parity(), 10).is_err());
    }
}
