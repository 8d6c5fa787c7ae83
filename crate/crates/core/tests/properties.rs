//! Randomized invariants, checked against brute force where a brute-force
//! answer exists.

mod common;

use hyperfinite::certificates::{coverage, reiter_defect, KSeparator, ReiterFamily, WeightFunction};
use hyperfinite::generators::random_regular;
use hyperfinite::io::{graph_from_json, graph_to_json};
use hyperfinite::rational::{self, Rational};
use hyperfinite::solvers::game::{separator_game_column_generation, separator_game_exact, ColumnGenerationOptions};
use hyperfinite::solvers::partition_lp::{fractional_partition_lp, optimal_partition};
use hyperfinite::solvers::separator::{min_weight_separator, SeparatorMode};
use hyperfinite::solvers::separator_lower_bound;
use hyperfinite::subsets::DEFAULT_CAP;
use hyperfinite::transforms::{
    amenable_to_local, distribution_to_partition, namioka_threshold, partition_to_reiter, uniform_to_weighted,
    SeparatorUhOracle,
};
use hyperfinite::{BoundedDegreeGraph, VertexMeasure};
use proptest::prelude::*;

use common::{adjacency, all_separators, bits, components, full, max_ball, max_component};

fn graph(max_n: usize) -> impl Strategy<Value = BoundedDegreeGraph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.4), n * (n - 1) / 2).prop_map(move |keep| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges: Vec<(usize, usize)> = pairs.zip(keep).filter(|(_, k)| *k).map(|(e, _)| e).collect();
            BoundedDegreeGraph::build(n, edges).unwrap()
        })
    })
}

/// A random graph with the path `0 - 1 - ... - n-1` added, so it is connected.
fn connected_graph(max_n: usize) -> impl Strategy<Value = BoundedDegreeGraph> {
    graph(max_n).prop_map(|g| {
        let path = (1..g.n()).map(|i| (i - 1, i));
        BoundedDegreeGraph::build(g.n(), g.edges().chain(path)).unwrap()
    })
}

fn unit_rational() -> impl Strategy<Value = Rational> {
    (1i64..=12).prop_flat_map(|q| (0..=q).prop_map(move |p| rational::ratio(p, q)))
}

fn weight_sum(w: &[Rational], mask: u64) -> Rational {
    bits(mask).iter().map(|&x| w[x].clone()).sum()
}

/// `min_Y W(Y)` over all `K`-separators, by enumeration.
fn brute_min(g: &BoundedDegreeGraph, w: &[Rational], k: usize) -> Rational {
    all_separators(g, k).into_iter().map(|y| weight_sum(w, y)).min().unwrap()
}

fn is_separator(g: &BoundedDegreeGraph, sep: &KSeparator, k: usize) -> bool {
    let adj = adjacency(g);
    let removed = sep.removed().iter().fold(0u64, |m, &x| m | 1 << x);
    max_component(&adj, full(g.n()) & !removed) <= k
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn layer_cake_matches_l1(pairs in proptest::collection::vec((unit_rational(), unit_rational()), 1..12)) {
        let (f, g): (Vec<Rational>, Vec<Rational>) = pairs.into_iter().unzip();
        let l1: Rational = f.iter().zip(&g).map(|(a, b)| rational::abs(&(a - b))).sum();
        let d = namioka_threshold(&f, &g).unwrap();
        prop_assert_eq!(&d.integral, &l1);
        prop_assert_eq!(&d.l1, &l1);
    }

    #[test]
    fn exact_separator_is_optimal(g in graph(10), ws in proptest::collection::vec(0i64..5, 10), k in 1usize..=3) {
        let w: Vec<Rational> = ws[..g.n()].iter().map(|&x| rational::int(x)).collect();
        let sep = min_weight_separator(&g, &w, k, SeparatorMode::Exact).unwrap();
        prop_assert!(is_separator(&g, &sep, k));
        let got: Rational = sep.removed().iter().map(|&x| w[x].clone()).sum();
        let best = brute_min(&g, &w, k);
        prop_assert_eq!(&got, &best);
        prop_assert!(separator_lower_bound(&g, &w, k) <= best);
        for mode in [SeparatorMode::Greedy, SeparatorMode::LocalSearch] {
            let h = min_weight_separator(&g, &w, k, mode).unwrap();
            prop_assert!(is_separator(&g, &h, k));
            let hw: Rational = h.removed().iter().map(|&x| w[x].clone()).sum();
            prop_assert!(hw >= best);
        }
    }

    #[test]
    fn heuristics_are_deterministic(g in graph(12), ws in proptest::collection::vec(1i64..9, 12), k in 1usize..=4) {
        let w: Vec<Rational> = ws[..g.n()].iter().map(|&x| rational::int(x)).collect();
        for mode in [SeparatorMode::Greedy, SeparatorMode::LocalSearch] {
            let a = min_weight_separator(&g, &w, k, mode).unwrap();
            let b = min_weight_separator(&g, &w, k, mode).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn random_regular_is_reproducible(half in 3usize..20, seed in any::<u64>()) {
        let n = 2 * half;
        let a = random_regular(n, 3, seed).unwrap();
        prop_assert_eq!(&a, &random_regular(n, 3, seed).unwrap());
        prop_assert!((0..n).all(|v| a.degree(v) == 3));
    }

    #[test]
    fn graph_json_round_trip(g in graph(9), ws in proptest::collection::vec(1i64..7, 9)) {
        let mu = VertexMeasure::new(ws[..g.n()].iter().map(|&x| rational::ratio(x, 3)).collect()).unwrap();
        let v = graph_to_json(&g, Some(&mu));
        prop_assert_eq!(graph_from_json(&v).unwrap(), (g, Some(mu)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Primal coverage, dual weights and the brute-force minimum agree.
    #[test]
    fn game_value_is_certified_both_ways(g in graph(8), k in 1usize..=3) {
        let sol = separator_game_exact(&g, k, DEFAULT_CAP).unwrap();
        let cov = coverage(g.n(), &sol.primal, None).unwrap();
        prop_assert_eq!(&cov.max, &sol.value);
        for (sep, _) in sol.primal.atoms() {
            prop_assert!(is_separator(&g, sep, k));
        }
        let w = sol.dual.values().to_vec();
        prop_assert_eq!(brute_min(&g, &w, k) / rational::sum(&w), sol.value.clone());
        if k > 1 {
            let coarser = separator_game_exact(&g, k - 1, DEFAULT_CAP).unwrap();
            prop_assert!(sol.value <= coarser.value);
        }
    }

    #[test]
    fn column_generation_brackets_the_value(g in graph(8), k in 1usize..=3) {
        let exact = separator_game_exact(&g, k, DEFAULT_CAP).unwrap().value;
        let opts = ColumnGenerationOptions { best_response: SeparatorMode::Exact, ..Default::default() };
        let b = separator_game_column_generation::<Rational>(&g, k, &opts).unwrap();
        prop_assert!(b.lower <= exact && exact <= b.upper);
        if b.converged {
            prop_assert_eq!(&b.upper, &exact);
        }
        let fb = separator_game_column_generation::<f64>(&g, k, &ColumnGenerationOptions::default()).unwrap();
        let v = rational::to_f64(&exact);
        prop_assert!(fb.lower <= v + 1e-7 && v - 1e-7 <= fb.upper);
    }

    /// Partition LP against `(d+1)` times the game value, and the stage
    /// bounds along distribution → partition → Reiter family.
    #[test]
    fn chain_bounds_hold(g in graph(7), k in 1usize..=3) {
        let sol = separator_game_exact(&g, k, DEFAULT_CAP).unwrap();
        let d1 = rational::int(g.max_degree() as i64 + 1);
        let lp = fractional_partition_lp::<Rational>(&g, k, DEFAULT_CAP).unwrap();
        prop_assert!(lp.value <= &d1 * &sol.value);
        optimal_partition(&g, k, &lp).unwrap();

        let cov = coverage(g.n(), &sol.primal, None).unwrap();
        let (phi, bound, _) = distribution_to_partition(&g, &sol.primal).unwrap();
        for x in 0..g.n() {
            // ∂Φ(x) recomputed from the support: x is on the inner boundary of A
            // when x ∈ A and some neighbour lies outside A
            let mut dx = rational::int(0);
            for (a, w) in phi.support() {
                if a.vertices().contains(&x) && g.neighbors(x).iter().any(|y| !a.vertices().contains(y)) {
                    dx += w;
                }
            }
            let local: Rational = std::iter::once(x).chain(g.neighbors(x).iter().copied()).map(|y| cov.values[y].clone()).sum();
            prop_assert!(dx <= local);
        }
        prop_assert!(bound.max_boundary <= &d1 * &cov.max);

        let (fam, report) = partition_to_reiter(&g, &phi).unwrap();
        let defect = reiter_defect(&g, &fam).unwrap();
        prop_assert_eq!(&defect.epsilon, &report.eps_achieved);
        let two_eps_d = rational::int(2 * g.max_degree() as i64) * &bound.max_boundary;
        prop_assert!(defect.epsilon <= two_eps_d);
        prop_assert!(defect.radius < k.max(1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// The extracted piece lies in `B`, its outer boundary inside `B` is
    /// light, and its components fit in a ball of radius `2R`.
    #[test]
    fn local_pieces_meet_their_bounds(
        g in connected_graph(10),
        ws in proptest::collection::vec(1i64..5, 10),
        bmask in 1u64..1 << 10,
        r in 1usize..=2,
    ) {
        let n = g.n();
        let mu = VertexMeasure::new(ws[..n].iter().map(|&x| rational::int(x)).collect()).unwrap();
        let b: Vec<usize> = bits(bmask & full(n));
        prop_assume!(!b.is_empty());
        let fam = ReiterFamily::window(&g, r);
        let eps = reiter_defect(&g, &fam).unwrap().epsilon;
        let (piece, _) = amenable_to_local(&g, &mu, &fam, &eps, &b).unwrap();
        let a = &piece.a;
        prop_assert!(!a.is_empty() && a.iter().all(|x| b.contains(x)));
        let boundary: Vec<usize> = b
            .iter()
            .copied()
            .filter(|y| !a.contains(y) && g.neighbors(*y).iter().any(|x| a.contains(x)))
            .collect();
        prop_assert!(mu.mass(&boundary) <= &eps * mu.mass(a));
        let largest = components(&g, a).iter().map(Vec::len).max().unwrap();
        prop_assert!(largest <= max_ball(&g, 2 * r));
    }

    #[test]
    fn bucketing_meets_the_weighted_bound(
        g in graph(9),
        ws in proptest::collection::vec(0i64..7, 9),
        half in any::<bool>(),
    ) {
        let n = g.n();
        prop_assume!(ws[..n].iter().any(|&x| x > 0));
        let w = WeightFunction::new(ws[..n].iter().map(|&x| rational::int(x)).collect()).unwrap();
        let eps = if half { rational::ratio(1, 2) } else { rational::int(1) };
        let mu = VertexMeasure::uniform(n);
        let run = uniform_to_weighted(&g, &mu, &w, &eps, &SeparatorUhOracle::adaptive()).unwrap();
        let y = run.separator.removed();
        prop_assert!(w.of(y) <= &eps * w.total());
        prop_assert!(is_separator(&g, &run.separator, run.separator.k()));
    }
}
