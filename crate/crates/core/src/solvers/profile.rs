//! The uniform hyperfiniteness profile
//! `ε_U(K) = max_A min_T μ_A(T)` over nonempty `A ⊆ V` and `K`-separators
//! `T` of `G[A]`.
//!
//! The inner minimum over a disconnected `A` is the `μ`-weighted average of
//! the minima over its components, so the maximum is always attained at a
//! connected `A`; only connected subsets are visited.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::separator::{min_weight_separator_limited, SeparatorMode};
use crate::error::{Error, Result};
use crate::graph::BoundedDegreeGraph;
use crate::measure::{check_len, VertexMeasure};
use crate::rational::Rational;
use crate::subsets::enumerate_k_subsets;

pub const EXACT_PROFILE_LIMIT: usize = 14;

/// Largest subset the sampled mode draws, so the inner minimum stays exact
/// and the result stays a genuine lower bound.
pub const SAMPLED_SUBSET_LIMIT: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileMode {
    Exact,
    Sampled { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformProfile {
    pub k: usize,
    pub value: Rational,
    /// A subset attaining `value`, and its cheapest separator.
    pub witness: Vec<usize>,
    pub witness_separator: Vec<usize>,
    /// True for sampled runs: `value` is only a lower bound on `ε_U(K)`.
    pub is_lower_bound: bool,
    pub subsets_examined: usize,
}

/// `min_T μ_A(T)` over `K`-separators of `G[A]`, with the separator in
/// original vertex ids.
pub fn subset_separation(
    g: &BoundedDegreeGraph,
    mu: &VertexMeasure,
    a: &[usize],
    k: usize,
) -> Result<(Rational, Vec<usize>)> {
    let h = g.induced(a)?;
    let local = mu.normalized_restriction(a)?;
    let sep = min_weight_separator_limited(&h, local.weights(), k, SeparatorMode::Exact, SAMPLED_SUBSET_LIMIT.max(a.len()))?;
    let mass = sep.removed().iter().map(|&i| local.weight(i).clone()).sum();
    Ok((mass, sep.removed().iter().map(|&i| a[i]).collect()))
}

pub fn uniform_profile(
    g: &BoundedDegreeGraph,
    mu: &VertexMeasure,
    k: usize,
    mode: ProfileMode,
) -> Result<UniformProfile> {
    check_len(g, mu)?;
    if k == 0 {
        return Err(Error::BadParams("K must be at least 1".into()));
    }
    if g.n() == 0 {
        return Err(Error::EmptySubset);
    }
    let (subsets, is_lower_bound) = match mode {
        ProfileMode::Exact => {
            if g.n() > EXACT_PROFILE_LIMIT {
                return Err(Error::Budget(format!(
                    "exact profile limited to {EXACT_PROFILE_LIMIT} vertices, graph has {}",
                    g.n()
                )));
            }
            // a separator is only needed for subsets larger than K
            let all = enumerate_k_subsets(g, g.n(), usize::MAX)?;
            (all.into_iter().map(|s| s.vertices().to_vec()).filter(|s| s.len() > k).collect(), false)
        }
        ProfileMode::Sampled { count, seed } => (sample_connected(g, count, seed), true),
    };
    let examined = subsets.len();
    let results: Vec<(Rational, Vec<usize>, Vec<usize>)> = subsets
        .into_par_iter()
        .map(|a| subset_separation(g, mu, &a, k).map(|(v, t)| (v, a, t)))
        .collect::<Result<_>>()?;
    // ties resolved towards the earliest subset so runs are reproducible
    let best = results.into_iter().fold(None::<(Rational, Vec<usize>, Vec<usize>)>, |acc, r| match acc {
        Some(b) if b.0 >= r.0 => Some(b),
        _ => Some(r),
    });
    let (value, witness, witness_separator) = best.unwrap_or_else(|| (Rational::from_integer(0.into()), vec![0], vec![]));
    Ok(UniformProfile {
        k,
        value,
        witness,
        witness_separator,
        is_lower_bound,
        subsets_examined: examined,
    })
}

/// Random connected subsets grown from a uniform root towards a uniform
/// target size.
fn sample_connected(g: &BoundedDegreeGraph, count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.n();
    let max_size = n.min(SAMPLED_SUBSET_LIMIT);
    (0..count)
        .map(|_| {
            let target = rng.gen_range(1..=max_size);
            let root = rng.gen_range(0..n);
            let mut inside = vec![false; n];
            inside[root] = true;
            let mut set = vec![root];
            let mut frontier: Vec<usize> = g.neighbors(root).to_vec();
            while set.len() < target && !frontier.is_empty() {
                let v = frontier.swap_remove(rng.gen_range(0..frontier.len()));
                if inside[v] {
                    continue;
                }
                inside[v] = true;
                set.push(v);
                frontier.extend(g.neighbors(v).iter().filter(|&&u| !inside[u]));
            }
            set.sort_unstable();
            set
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn cycle(n: usize) -> BoundedDegreeGraph {
        BoundedDegreeGraph::build(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    /// Brute force over all nonempty subsets, connected or not.
    fn brute(g: &BoundedDegreeGraph, mu: &VertexMeasure, k: usize) -> Rational {
        let mut best = Rational::from_integer(0.into());
        for m in 1u32..(1 << g.n()) {
            let a: Vec<usize> = (0..g.n()).filter(|&i| m >> i & 1 == 1).collect();
            let (v, _) = subset_separation(g, mu, &a, k).unwrap();
            if v > best {
                best = v;
            }
        }
        best
    }

    #[test]
    fn cycle_eight_k2() {
        let g = cycle(8);
        let p = uniform_profile(&g, &VertexMeasure::uniform(8), 2, ProfileMode::Exact).unwrap();
        assert_eq!(p.value, ratio(3, 8));
        assert!(!p.is_lower_bound);
    }

    #[test]
    fn connected_subsets_suffice() {
        let g = BoundedDegreeGraph::build(7, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 6), (6, 3)]).unwrap();
        let mu = VertexMeasure::new((1..=7).map(|i| ratio(i, 3)).collect()).unwrap();
        for k in 1..=3 {
            let p = uniform_profile(&g, &mu, k, ProfileMode::Exact).unwrap();
            assert_eq!(p.value, brute(&g, &mu, k));
        }
    }

    #[test]
    fn sampled_is_below_exact() {
        let g = cycle(10);
        let mu = VertexMeasure::uniform(10);
        let exact = uniform_profile(&g, &mu, 3, ProfileMode::Exact).unwrap();
        let s = uniform_profile(&g, &mu, 3, ProfileMode::Sampled { count: 40, seed: 9 }).unwrap();
        assert!(s.is_lower_bound);
        assert!(s.value <= exact.value);
        assert_eq!(s, uniform_profile(&g, &mu, 3, ProfileMode::Sampled { count: 40, seed: 9 }).unwrap());
    }
}
