//! Minimum-weight `K`-separators.
//!
//! The exact solver is a branch and bound over "hitting" branches: whenever
//! `G[V \ T]` still has a component larger than `K`, pick a connected set `S`
//! of `K + 1` vertices inside it; every separator extending `T` must remove
//! some vertex of `S`, so the children are "remove `s_i`, keep
//! `s_1 .. s_{i-1}`". The subtrees are disjoint, which also makes the same
//! search an enumerator of inclusion-minimal separators.

use super::heuristic::{local_search_separator, DEFAULT_RESTARTS};
use crate::certificates::KSeparator;
use crate::error::{Error, Result};
use crate::graph::BoundedDegreeGraph;
use crate::lp::LpScalar;

pub const DEFAULT_EXACT_LIMIT: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparatorMode {
    Exact,
    Greedy,
    /// Multi-start greedy with exchange moves; see [`super::heuristic`].
    LocalSearch,
}

pub fn min_weight_separator<T: LpScalar>(
    g: &BoundedDegreeGraph,
    weights: &[T],
    k: usize,
    mode: SeparatorMode,
) -> Result<KSeparator> {
    min_weight_separator_limited(g, weights, k, mode, DEFAULT_EXACT_LIMIT)
}

pub fn min_weight_separator_limited<T: LpScalar>(
    g: &BoundedDegreeGraph,
    weights: &[T],
    k: usize,
    mode: SeparatorMode,
    exact_limit: usize,
) -> Result<KSeparator> {
    check_inputs(g, weights, k)?;
    match mode {
        SeparatorMode::Greedy => Ok(greedy_separator(g, weights, k)),
        SeparatorMode::LocalSearch => Ok(local_search_separator(g, weights, k, DEFAULT_RESTARTS, 0)),
        SeparatorMode::Exact => {
            if g.n() > exact_limit.min(64) {
                return Err(Error::Budget(format!(
                    "exact separator search limited to {} vertices, graph has {}",
                    exact_limit.min(64),
                    g.n()
                )));
            }
            Ok(exact_separator(g, weights, k))
        }
    }
}

fn check_inputs<T: LpScalar>(g: &BoundedDegreeGraph, weights: &[T], k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::BadParams("K must be at least 1".into()));
    }
    if weights.len() != g.n() {
        return Err(Error::BadParams(format!(
            "{} weights for {} vertices",
            weights.len(),
            g.n()
        )));
    }
    if weights.iter().any(|w| w.is_negative_ish()) {
        return Err(Error::BadParams("negative vertex weight".into()));
    }
    Ok(())
}

fn weight_of<T: LpScalar>(weights: &[T], set: &[usize]) -> T {
    set.iter().fold(T::zero(), |acc, &x| acc + weights[x].clone())
}

/// Repeatedly removes, from the oversized component with the smallest
/// vertex, the vertex minimizing `W(v) / deg_C(v)`; then drops redundant
/// vertices (heaviest first) so the result is inclusion-minimal.
pub fn greedy_separator<T: LpScalar>(g: &BoundedDegreeGraph, weights: &[T], k: usize) -> KSeparator {
    let n = g.n();
    let mut removed = vec![false; n];
    loop {
        let keep: Vec<bool> = removed.iter().map(|r| !r).collect();
        let comps = g.components_masked(&keep);
        let Some(comp) = comps.into_iter().find(|c| c.len() > k) else {
            break;
        };
        let mut in_comp = vec![false; n];
        for &x in &comp {
            in_comp[x] = true;
        }
        let mut best: Option<(usize, T)> = None;
        for &x in &comp {
            let deg = g.neighbors(x).iter().filter(|&&y| in_comp[y]).count().max(1);
            let score = weights[x].clone() / T::from_rational(&crate::rational::int(deg as i64));
            if best.as_ref().map_or(true, |(_, s)| score < *s) {
                best = Some((x, score));
            }
        }
        removed[best.expect("nonempty component").0] = true;
    }
    let mut order: Vec<usize> = (0..n).filter(|&x| removed[x]).collect();
    order.sort_by(|&a, &b| {
        weights[b]
            .partial_cmp(&weights[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(b.cmp(&a))
    });
    for x in order {
        removed[x] = false;
        if max_component_masked(g, &removed) > k {
            removed[x] = true;
        }
    }
    KSeparator::new(k, (0..n).filter(|&x| removed[x]).collect())
}

fn max_component_masked(g: &BoundedDegreeGraph, removed: &[bool]) -> usize {
    let keep: Vec<bool> = removed.iter().map(|r| !r).collect();
    g.components_masked(&keep).iter().map(Vec::len).max().unwrap_or(0)
}

/// Bitmask view of a graph with at most 64 vertices.
pub(crate) struct BitGraph {
    pub n: usize,
    pub nb: Vec<u64>,
}

impl BitGraph {
    pub fn new(g: &BoundedDegreeGraph) -> Self {
        assert!(g.n() <= 64, "bitmask graphs hold at most 64 vertices");
        let nb = (0..g.n())
            .map(|x| g.neighbors(x).iter().fold(0u64, |m, &y| m | (1 << y)))
            .collect();
        BitGraph { n: g.n(), nb }
    }

    pub fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn neighborhood(&self, set: u64) -> u64 {
        bits(set).fold(0, |m, v| m | self.nb[v])
    }

    /// Component of `start` inside `avail`.
    pub fn component(&self, start: usize, avail: u64) -> u64 {
        let mut comp = 1u64 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let next = self.neighborhood(frontier) & avail & !comp;
            comp |= next;
            frontier = next;
        }
        comp
    }

    /// First component of `avail` (by smallest vertex) with more than `k` vertices.
    pub fn oversized_component(&self, avail: u64, k: usize) -> Option<u64> {
        let mut rest = avail;
        while rest != 0 {
            let s = rest.trailing_zeros() as usize;
            let c = self.component(s, avail);
            if c.count_ones() as usize > k {
                return Some(c);
            }
            rest &= !c;
        }
        None
    }

    /// Connected set of `size` vertices inside `within`, grown breadth-first
    /// from `start`; `None` if the component of `start` is smaller.
    pub fn grow(&self, start: usize, within: u64, size: usize) -> Option<Vec<usize>> {
        let mut taken = 1u64 << start;
        let mut order = vec![start];
        let mut i = 0;
        while order.len() < size && i < order.len() {
            let v = order[i];
            i += 1;
            for u in bits(self.nb[v] & within & !taken) {
                taken |= 1 << u;
                order.push(u);
                if order.len() == size {
                    break;
                }
            }
        }
        (order.len() == size).then_some(order)
    }

    #[cfg(test)]
    pub fn is_separator(&self, removed: u64, k: usize) -> bool {
        self.oversized_component(self.full() & !removed, k).is_none()
    }

    /// No vertex of `removed` can be put back.
    pub fn is_minimal_separator(&self, removed: u64, k: usize) -> bool {
        let avail = self.full() & !removed;
        bits(removed).all(|v| {
            let c = self.component(v, avail | (1 << v));
            c.count_ones() as usize > k
        })
    }
}

pub(crate) fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

pub(crate) fn mask_to_vec(m: u64) -> Vec<usize> {
    bits(m).collect()
}

struct Search<'a, T> {
    bg: BitGraph,
    weights: &'a [T],
    k: usize,
    best: Option<(T, u64)>,
}

impl<T: LpScalar> Search<'_, T> {
    fn cost(&self, m: u64) -> T {
        bits(m).fold(T::zero(), |acc, v| acc + self.weights[v].clone())
    }

    /// Disjoint connected `(K+1)`-sets in the kept graph; each must lose its
    /// cheapest free vertex. `None` when some set has no free vertex.
    fn packing_bound(&self, removed: u64, fixed: u64) -> Option<T> {
        let avail = self.bg.full() & !removed;
        let mut used = 0u64;
        let mut bound = T::zero();
        let mut rest = avail;
        while rest != 0 {
            let s = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if used & (1 << s) != 0 {
                continue;
            }
            if let Some(set) = self.bg.grow(s, avail & !used, self.k + 1) {
                let mut cheapest: Option<T> = None;
                for &v in &set {
                    used |= 1 << v;
                    if fixed & (1 << v) == 0 {
                        let w = self.weights[v].clone();
                        if cheapest.as_ref().map_or(true, |c| w < *c) {
                            cheapest = Some(w);
                        }
                    }
                }
                bound = bound + cheapest?;
            }
        }
        Some(bound)
    }

    fn run(&mut self, removed: u64, fixed: u64, cost: T) {
        let avail = self.bg.full() & !removed;
        let Some(comp) = self.bg.oversized_component(avail, self.k) else {
            let better = match &self.best {
                None => true,
                Some((b, _)) => (b.clone() - cost.clone()).is_positive_ish(),
            };
            if better {
                self.best = Some((cost, removed));
            }
            return;
        };
        let Some(extra) = self.packing_bound(removed, fixed) else {
            return;
        };
        if let Some((b, _)) = &self.best {
            if !(b.clone() - (cost.clone() + extra)).is_positive_ish() {
                return;
            }
        }
        let start = bits(comp & fixed).next().unwrap_or(comp.trailing_zeros() as usize);
        let Some(set) = self.bg.grow(start, comp, self.k + 1) else {
            return;
        };
        let mut free: Vec<usize> = set.into_iter().filter(|&v| fixed & (1 << v) == 0).collect();
        free.sort_by(|&a, &b| {
            self.weights[a]
                .partial_cmp(&self.weights[b])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        let mut fixed = fixed;
        for v in free {
            let c = cost.clone() + self.weights[v].clone();
            self.run(removed | (1 << v), fixed, c);
            fixed |= 1 << v;
        }
    }
}

fn exact_separator<T: LpScalar>(g: &BoundedDegreeGraph, weights: &[T], k: usize) -> KSeparator {
    let greedy = greedy_separator(g, weights, k);
    let bg = BitGraph::new(g);
    let incumbent = greedy.removed().iter().fold(0u64, |m, &v| m | (1 << v));
    let mut s = Search {
        bg,
        weights,
        k,
        best: None,
    };
    let c = s.cost(incumbent);
    s.best = Some((c, incumbent));
    s.run(0, 0, T::zero());
    let (_, m) = s.best.expect("incumbent present");
    KSeparator::new(k, mask_to_vec(m))
}

/// Every inclusion-minimal `K`-separator, sorted lexicographically.
pub fn minimal_separators(g: &BoundedDegreeGraph, k: usize, cap: usize) -> Result<Vec<KSeparator>> {
    if k == 0 {
        return Err(Error::BadParams("K must be at least 1".into()));
    }
    if g.n() > 64 {
        return Err(Error::Budget(format!(
            "separator enumeration limited to 64 vertices, graph has {}",
            g.n()
        )));
    }
    let bg = BitGraph::new(g);
    let mut out = Vec::new();
    enumerate_leaves(&bg, k, 0, 0, cap, &mut out)?;
    let mut seps: Vec<KSeparator> = out.into_iter().map(|m| KSeparator::new(k, mask_to_vec(m))).collect();
    seps.sort();
    Ok(seps)
}

fn enumerate_leaves(bg: &BitGraph, k: usize, removed: u64, fixed: u64, cap: usize, out: &mut Vec<u64>) -> Result<()> {
    let avail = bg.full() & !removed;
    let Some(comp) = bg.oversized_component(avail, k) else {
        if bg.is_minimal_separator(removed, k) {
            if out.len() >= cap {
                return Err(Error::ExplosionCap { cap });
            }
            out.push(removed);
        }
        return Ok(());
    };
    let start = bits(comp & fixed).next().unwrap_or(comp.trailing_zeros() as usize);
    let Some(set) = bg.grow(start, comp, k + 1) else {
        return Ok(());
    };
    let mut fixed = fixed;
    for v in set {
        if fixed & (1 << v) != 0 {
            continue;
        }
        enumerate_leaves(bg, k, removed | (1 << v), fixed, cap, out)?;
        fixed |= 1 << v;
    }
    Ok(())
}

/// Weight of the cheapest separator found by `mode`, normalized by `W(V)`.
pub fn separator_fraction<T: LpScalar>(
    g: &BoundedDegreeGraph,
    weights: &[T],
    k: usize,
    mode: SeparatorMode,
) -> Result<(T, KSeparator)> {
    let sep = min_weight_separator(g, weights, k, mode)?;
    let total = weights.iter().fold(T::zero(), |a, w| a + w.clone());
    let w = weight_of(weights, sep.removed());
    let frac = if total.is_zero_ish() { T::zero() } else { w / total };
    Ok((frac, sep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, Rational};

    fn cycle(n: usize) -> BoundedDegreeGraph {
        BoundedDegreeGraph::build(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn brute_min(g: &BoundedDegreeGraph, w: &[Rational], k: usize) -> Rational {
        let bg = BitGraph::new(g);
        (0..1u64 << g.n())
            .filter(|&m| bg.is_separator(m, k))
            .map(|m| bits(m).fold(int(0), |a, v| a + &w[v]))
            .min()
            .unwrap()
    }

    #[test]
    fn cycle_six_uniform() {
        let g = cycle(6);
        let w = vec![int(1); 6];
        let s = min_weight_separator(&g, &w, 2, SeparatorMode::Exact).unwrap();
        assert_eq!(s.removed().len(), 2);
        assert_eq!(brute_min(&g, &w, 2), int(2));
        assert!(s.is_valid(&g).unwrap());
    }

    #[test]
    fn large_k_and_star() {
        let g = cycle(5);
        let s = min_weight_separator(&g, &vec![int(1); 5], 5, SeparatorMode::Exact).unwrap();
        assert!(s.removed().is_empty());
        let star = BoundedDegreeGraph::build(6, (1..6).map(|i| (0, i))).unwrap();
        let w: Vec<Rational> = (0..6).map(|i| int(i + 1)).collect();
        for mode in [SeparatorMode::Exact, SeparatorMode::Greedy] {
            let s = min_weight_separator(&star, &w, 1, mode).unwrap();
            assert_eq!(s.removed(), &[0]);
        }
    }

    #[test]
    fn exact_matches_brute_force_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.gen_range(2..=9);
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(0.4))
                .collect();
            let g = BoundedDegreeGraph::build(n, edges).unwrap();
            let w: Vec<Rational> = (0..n).map(|_| int(rng.gen_range(0..6))).collect();
            for k in 1..=3 {
                let s = min_weight_separator(&g, &w, k, SeparatorMode::Exact).unwrap();
                assert!(s.is_valid(&g).unwrap());
                let cost = s.removed().iter().fold(int(0), |a, &v| a + &w[v]);
                assert_eq!(cost, brute_min(&g, &w, k));
                let gs = min_weight_separator(&g, &w, k, SeparatorMode::Greedy).unwrap();
                assert!(gs.is_valid(&g).unwrap());
            }
        }
    }

    #[test]
    fn minimal_enumeration_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(1..=9);
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(0.45))
                .collect();
            let g = BoundedDegreeGraph::build(n, edges).unwrap();
            let bg = BitGraph::new(&g);
            for k in 1..=3 {
                let mut brute: Vec<KSeparator> = (0..1u64 << n)
                    .filter(|&m| bg.is_separator(m, k) && bg.is_minimal_separator(m, k))
                    .map(|m| KSeparator::new(k, mask_to_vec(m)))
                    .collect();
                brute.sort();
                assert_eq!(minimal_separators(&g, k, 1 << 20).unwrap(), brute);
            }
        }
    }

    #[test]
    fn float_weights() {
        let g = cycle(6);
        let w = vec![1.0, 0.1, 1.0, 1.0, 0.1, 1.0];
        let s = min_weight_separator(&g, &w, 2, SeparatorMode::Exact).unwrap();
        assert_eq!(s.removed(), &[1, 4]);
    }

    #[test]
    fn exact_mode_budget() {
        let g = cycle(30);
        assert!(matches!(
            min_weight_separator(&g, &vec![int(1); 30], 2, SeparatorMode::Exact),
            Err(Error::Budget(_))
        ));
        assert!(min_weight_separator_limited(&g, &vec![int(1); 30], 2, SeparatorMode::Exact, 40).is_ok());
    }
}
