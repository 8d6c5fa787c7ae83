//! Randomized multi-start local search for cheap `K`-separators on graphs
//! too large for the exact search. Decisions use `f64` copies of the
//! weights; the result is exact, only its optimality is not guaranteed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certificates::KSeparator;
use crate::graph::BoundedDegreeGraph;
use crate::lp::LpScalar;

pub const DEFAULT_RESTARTS: usize = 8;

struct Checker<'a> {
    g: &'a BoundedDegreeGraph,
    k: usize,
    stamp: Vec<u32>,
    round: u32,
    stack: Vec<usize>,
}

impl<'a> Checker<'a> {
    fn new(g: &'a BoundedDegreeGraph, k: usize) -> Self {
        Checker {
            g,
            k,
            stamp: vec![0; g.n()],
            round: 0,
            stack: Vec::new(),
        }
    }

    /// Some kept component larger than `K`, or `None`.
    fn oversized(&mut self, removed: &[bool]) -> Option<Vec<usize>> {
        self.round += 1;
        for s in 0..self.g.n() {
            if removed[s] || self.stamp[s] == self.round {
                continue;
            }
            self.stamp[s] = self.round;
            self.stack.clear();
            self.stack.push(s);
            let mut comp = vec![s];
            while let Some(v) = self.stack.pop() {
                for &u in self.g.neighbors(v) {
                    if !removed[u] && self.stamp[u] != self.round {
                        self.stamp[u] = self.round;
                        self.stack.push(u);
                        comp.push(u);
                    }
                }
            }
            if comp.len() > self.k {
                return Some(comp);
            }
        }
        None
    }

    fn is_separator(&mut self, removed: &[bool]) -> bool {
        self.oversized(removed).is_none()
    }
}

fn cost(w: &[f64], removed: &[bool]) -> f64 {
    removed.iter().zip(w).filter(|(r, _)| **r).map(|(_, w)| w).sum()
}

fn randomized_greedy(ch: &mut Checker, w: &[f64], noise: f64, rng: &mut ChaCha8Rng) -> Vec<bool> {
    let n = ch.g.n();
    let mut removed = vec![false; n];
    let mut in_comp = vec![false; n];
    while let Some(comp) = ch.oversized(&removed) {
        for &x in &comp {
            in_comp[x] = true;
        }
        let mut best = (usize::MAX, f64::INFINITY);
        for &x in &comp {
            let deg = ch.g.neighbors(x).iter().filter(|&&y| in_comp[y]).count().max(1) as f64;
            let jitter = if noise > 0.0 { 1.0 + noise * rng.gen::<f64>() } else { 1.0 };
            let score = w[x] * jitter / deg;
            if score < best.1 {
                best = (x, score);
            }
        }
        for &x in &comp {
            in_comp[x] = false;
        }
        removed[best.0] = true;
    }
    removed
}

/// Drops removed vertices, heaviest first, while the rest still separates.
fn prune(ch: &mut Checker, w: &[f64], removed: &mut [bool]) {
    let mut order: Vec<usize> = (0..removed.len()).filter(|&x| removed[x]).collect();
    order.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(b.cmp(&a)));
    for x in order {
        removed[x] = false;
        if !ch.is_separator(removed) {
            removed[x] = true;
        }
    }
}

/// Vertices within distance two of `x`.
fn near(g: &BoundedDegreeGraph, x: usize) -> Vec<usize> {
    let mut out: Vec<usize> = g.neighbors(x).to_vec();
    for &y in g.neighbors(x) {
        out.extend(g.neighbors(y).iter().copied().filter(|&z| z != x));
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Improving 1-for-1 and 2-for-1 exchanges among nearby vertices until none
/// applies.
fn improve(ch: &mut Checker, w: &[f64], removed: &mut [bool]) {
    let g = ch.g;
    let tol = 1e-12;
    'outer: loop {
        let t: Vec<usize> = (0..removed.len()).filter(|&x| removed[x]).collect();
        for &u in &t {
            for v in near(g, u) {
                if removed[v] || w[v] >= w[u] - tol {
                    continue;
                }
                removed[u] = false;
                removed[v] = true;
                if ch.is_separator(removed) {
                    prune(ch, w, removed);
                    continue 'outer;
                }
                removed[u] = true;
                removed[v] = false;
            }
        }
        for (i, &u1) in t.iter().enumerate() {
            let near1 = near(g, u1);
            for &u2 in &t[i + 1..] {
                if !near1.contains(&u2) {
                    continue;
                }
                let mut cands = near1.clone();
                cands.extend(near(g, u2));
                cands.sort_unstable();
                cands.dedup();
                for v in cands {
                    if removed[v] || w[v] >= w[u1] + w[u2] - tol {
                        continue;
                    }
                    removed[u1] = false;
                    removed[u2] = false;
                    removed[v] = true;
                    if ch.is_separator(removed) {
                        prune(ch, w, removed);
                        continue 'outer;
                    }
                    removed[u1] = true;
                    removed[u2] = true;
                    removed[v] = false;
                }
            }
        }
        return;
    }
}

/// Best separator over `restarts` randomized greedy starts, each pruned and
/// improved by local exchanges. The first start is the plain greedy order.
pub fn local_search_separator<T: LpScalar>(
    g: &BoundedDegreeGraph,
    weights: &[T],
    k: usize,
    restarts: usize,
    seed: u64,
) -> KSeparator {
    let w: Vec<f64> = weights.iter().map(LpScalar::to_f64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ch = Checker::new(g, k);
    let mut best: Option<(f64, Vec<bool>)> = None;
    for r in 0..restarts.max(1) {
        let noise = if r == 0 { 0.0 } else { 0.5 };
        let mut removed = randomized_greedy(&mut ch, &w, noise, &mut rng);
        prune(&mut ch, &w, &mut removed);
        improve(&mut ch, &w, &mut removed);
        let c = cost(&w, &removed);
        if best.as_ref().map_or(true, |(b, _)| c < *b) {
            best = Some((c, removed));
        }
    }
    let (_, removed) = best.expect("at least one start");
    KSeparator::new(k, (0..g.n()).filter(|&x| removed[x]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{self, Rational};
    use crate::solvers::separator::{min_weight_separator, SeparatorMode};

    #[test]
    fn valid_and_close_to_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..40 {
            let n = rng.gen_range(4..=14);
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(0.3))
                .collect();
            let g = BoundedDegreeGraph::build(n, edges).unwrap();
            let w: Vec<Rational> = (0..n).map(|_| rational::int(rng.gen_range(1..6))).collect();
            for k in 1..=3 {
                let ls = local_search_separator(&g, &w, k, 4, 1);
                assert!(ls.max_component(&g).unwrap() <= k);
                let exact = min_weight_separator(&g, &w, k, SeparatorMode::Exact).unwrap();
                let cost = |s: &KSeparator| s.removed().iter().map(|&v| w[v].clone()).sum::<Rational>();
                assert!(cost(&ls) >= cost(&exact));
            }
        }
    }
}
