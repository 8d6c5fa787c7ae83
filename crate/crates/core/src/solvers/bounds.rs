//! Certified lower bounds on `min_Y W(Y)` over `K`-separators `Y`, for
//! graphs too large for the exact search.

use crate::graph::BoundedDegreeGraph;
use crate::lp::LpScalar;
use crate::rational::{self, Rational};
use crate::subsets::enumerate_k_subsets;

const DENSITY_CAP: usize = 2_000_000;

/// Per-graph data behind the lower bounds, computed once and reused for
/// every weight vector.
#[derive(Debug, Clone)]
pub struct SeparatorBounds {
    k: usize,
    densities: Vec<Rational>,
}

impl SeparatorBounds {
    pub fn new(g: &BoundedDegreeGraph, k: usize) -> Self {
        SeparatorBounds {
            k,
            densities: vertex_densities(g, k),
        }
    }

    /// The larger of the packing bound and the edge-density bound.
    pub fn lower_bound<T: LpScalar>(&self, g: &BoundedDegreeGraph, w: &[T]) -> T {
        let a = packing_bound(g, w, self.k);
        let b = density_bound_with(g, w, &self.densities);
        if b > a {
            b
        } else {
            a
        }
    }
}

pub fn separator_lower_bound<T: LpScalar>(g: &BoundedDegreeGraph, w: &[T], k: usize) -> T {
    SeparatorBounds::new(g, k).lower_bound(g, w)
}

/// Every separator meets each connected `(K+1)`-set; over vertex-disjoint
/// such sets the cheapest vertices add up.
pub fn packing_bound<T: LpScalar>(g: &BoundedDegreeGraph, w: &[T], k: usize) -> T {
    let n = g.n();
    let mut used = vec![false; n];
    let mut bound = T::zero();
    let mut order: Vec<usize> = (0..n).collect();
    // cheap vertices first tends to leave heavier sets for later packing
    order.sort_by(|&a, &b| w[a].partial_cmp(&w[b]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
    for s in order {
        if used[s] {
            continue;
        }
        let mut set = vec![s];
        let mut taken = vec![false; n];
        taken[s] = true;
        let mut i = 0;
        while set.len() <= k && i < set.len() {
            let v = set[i];
            i += 1;
            for &u in g.neighbors(v) {
                if !used[u] && !taken[u] {
                    taken[u] = true;
                    set.push(u);
                    if set.len() == k + 1 {
                        break;
                    }
                }
            }
        }
        if set.len() == k + 1 {
            let mut cheapest = w[set[0]].clone();
            for &v in &set {
                used[v] = true;
                if w[v] < cheapest {
                    cheapest = w[v].clone();
                }
            }
            bound = bound + cheapest;
        }
    }
    bound
}

fn edges_inside(g: &BoundedDegreeGraph, a: &crate::subsets::KSubset) -> usize {
    a.vertices()
        .iter()
        .map(|&x| g.neighbors(x).iter().filter(|&&y| y > x && a.contains(y)).count())
        .sum()
}

/// `ρ_K = max e(S)/|S|` over connected `|S| <= K`; falls back to the
/// trivial `min(d, K-1)/2` when the subsets are too many to list.
pub fn max_piece_density(g: &BoundedDegreeGraph, k: usize) -> Rational {
    vertex_densities(g, k).into_iter().max().unwrap_or_else(|| rational::int(0))
}

/// `ρ_v = max e(S)/|S|` over connected `S ∋ v` with `|S| <= K`, so that
/// `e(S) <= Σ_{v∈S} ρ_v` for every such `S`.
pub fn vertex_densities(g: &BoundedDegreeGraph, k: usize) -> Vec<Rational> {
    let trivial = rational::ratio(g.max_degree().min(k.saturating_sub(1)) as i64, 2);
    let Ok(pieces) = enumerate_k_subsets(g, k, DENSITY_CAP) else {
        return vec![trivial; g.n()];
    };
    let mut rho = vec![rational::int(0); g.n()];
    for a in pieces {
        let d = rational::ratio(edges_inside(g, &a) as i64, a.len() as i64);
        for &v in a.vertices() {
            if d > rho[v] {
                rho[v] = d.clone();
            }
        }
    }
    rho
}

/// Every piece `S` of a separator `T` sends `Σ_{v∈S} deg v - 2e(S)` edges
/// into `T`, which has room for `Σ_{v∈T} deg v`. With `e(S) <= Σ_{v∈S} ρ_v`
/// this gives `Σ_{v∈T} (deg v - ρ_v) >= |E| - Σ_v ρ_v`; the fractional
/// knapsack relaxation of that one constraint bounds `W(T)` from below.
pub fn density_bound<T: LpScalar>(g: &BoundedDegreeGraph, w: &[T], k: usize) -> T {
    density_bound_with(g, w, &vertex_densities(g, k))
}

pub fn density_bound_with<T: LpScalar>(g: &BoundedDegreeGraph, w: &[T], rho: &[Rational]) -> T {
    let rho_total = rational::sum(rho);
    let mut demand = T::from_rational(&(rational::int(g.edge_count() as i64) - rho_total));
    if !demand.is_positive_ish() {
        return T::zero();
    }
    let mut items: Vec<(usize, T)> = (0..g.n())
        .filter_map(|v| {
            let gain = T::from_rational(&(rational::int(g.degree(v) as i64) - &rho[v]));
            gain.is_positive_ish().then_some((v, gain))
        })
        .collect();
    items.sort_by(|(a, ga), (b, gb)| {
        (w[*a].clone() / ga.clone())
            .partial_cmp(&(w[*b].clone() / gb.clone()))
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(b))
    });
    let mut bound = T::zero();
    for (v, gain) in items {
        if gain >= demand {
            return bound + w[v].clone() * demand / gain;
        }
        bound = bound + w[v].clone();
        demand = demand - gain;
    }
    // demand cannot be met: no separator of this shape exists, any bound is valid
    bound
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::separator::{min_weight_separator, SeparatorMode};
    use rand::{Rng, SeedableRng};

    #[test]
    fn bounds_never_exceed_optimum() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..80 {
            let n = rng.gen_range(3..=11);
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(0.35))
                .collect();
            let g = BoundedDegreeGraph::build(n, edges).unwrap();
            let w: Vec<Rational> = (0..n).map(|_| rational::int(rng.gen_range(0..5))).collect();
            for k in 1..=3 {
                let opt = min_weight_separator(&g, &w, k, SeparatorMode::Exact).unwrap();
                let opt_w = opt.removed().iter().fold(rational::int(0), |a, &v| a + &w[v]);
                assert!(packing_bound(&g, &w, k) <= opt_w);
                assert!(density_bound(&g, &w, k) <= opt_w);
            }
        }
    }

    #[test]
    fn cycle_density() {
        let c = BoundedDegreeGraph::build(8, (0..8).map(|i| (i, (i + 1) % 8))).unwrap();
        assert_eq!(max_piece_density(&c, 3), rational::ratio(2, 3));
        assert_eq!(max_piece_density(&c, 8), rational::int(1));
    }
}
