//! Deterministic graph and measure families.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::BoundedDegreeGraph;
use crate::measure::{bounded_type_constant, VertexMeasure};
use crate::rational::{self, Rational};

pub const MAX_PAIRING_ATTEMPTS: usize = 1000;

fn bad(msg: impl Into<String>) -> Error {
    Error::BadParams(msg.into())
}

pub fn cycle(n: usize) -> Result<BoundedDegreeGraph> {
    if n < 3 {
        return Err(bad("cycle needs at least 3 vertices"));
    }
    BoundedDegreeGraph::build(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn path(n: usize) -> Result<BoundedDegreeGraph> {
    if n == 0 {
        return Err(bad("path needs at least 1 vertex"));
    }
    BoundedDegreeGraph::build(n, (1..n).map(|i| (i - 1, i)))
}

/// Row-major `rows × cols` grid.
pub fn grid(rows: usize, cols: usize) -> Result<BoundedDegreeGraph> {
    if rows == 0 || cols == 0 {
        return Err(bad("grid dimensions must be positive"));
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    BoundedDegreeGraph::build(rows * cols, edges)
}

pub fn torus(rows: usize, cols: usize) -> Result<BoundedDegreeGraph> {
    if rows < 3 || cols < 3 {
        return Err(bad("torus dimensions must be at least 3"));
    }
    let id = |r: usize, c: usize| r * cols + c;
    let edges = (0..rows).flat_map(|r| {
        (0..cols).flat_map(move |c| [(id(r, c), id(r, (c + 1) % cols)), (id(r, c), id((r + 1) % rows, c))])
    });
    BoundedDegreeGraph::build(rows * cols, edges.collect::<Vec<_>>())
}

/// Complete `branching`-ary tree of the given depth, in BFS order.
pub fn tree(branching: usize, depth: usize) -> Result<BoundedDegreeGraph> {
    if branching == 0 {
        return Err(bad("branching must be positive"));
    }
    let mut edges = Vec::new();
    let (mut level_start, mut level_len, mut n) = (0, 1, 1);
    for _ in 0..depth {
        for p in level_start..level_start + level_len {
            for _ in 0..branching {
                edges.push((p, n));
                n += 1;
            }
        }
        level_start += level_len;
        level_len *= branching;
    }
    BoundedDegreeGraph::build(n, edges)
}

pub fn complete(n: usize) -> Result<BoundedDegreeGraph> {
    if n == 0 {
        return Err(bad("complete graph needs at least 1 vertex"));
    }
    BoundedDegreeGraph::build(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// Configuration model, resampled until the pairing is simple.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<BoundedDegreeGraph> {
    if n * d % 2 != 0 {
        return Err(bad("n·d must be even"));
    }
    if n <= d {
        return Err(bad("need n > d"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    'attempt: for _ in 0..MAX_PAIRING_ATTEMPTS {
        stubs.shuffle(&mut rng);
        let mut seen = std::collections::HashSet::new();
        let mut edges = Vec::with_capacity(n * d / 2);
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
            edges.push((u, v));
        }
        return BoundedDegreeGraph::build(n, edges);
    }
    Err(bad(format!("no simple pairing in {MAX_PAIRING_ATTEMPTS} attempts")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gadget {
    /// First gadget vertex; gadget vertex `j` is `offset + j`.
    pub offset: usize,
    pub size: usize,
    /// Cycle vertex joined to gadget vertex 0.
    pub marker: usize,
}

/// A cycle with 3-regular gadgets hanging off evenly spaced markers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hybrid {
    pub graph: BoundedDegreeGraph,
    pub measure: VertexMeasure,
    pub cycle_n: usize,
    pub gadgets: Vec<Gadget>,
}

/// Cycle vertices are `0..cycle_n`; gadget `i` is a random 3-regular graph
/// (seed from its spec) joined by one edge from marker `i · spacing` to its
/// vertex 0. The measure is uniform.
pub fn hybrid_example1(cycle_n: usize, gadgets: &[(usize, u64)], spacing: usize) -> Result<Hybrid> {
    let base = cycle(cycle_n)?;
    if !gadgets.is_empty() && spacing == 0 {
        return Err(bad("spacing must be positive"));
    }
    if gadgets.len() > 1 && (gadgets.len() - 1) * spacing >= cycle_n {
        return Err(bad("markers would wrap around the cycle"));
    }
    let mut edges: Vec<(usize, usize)> = base.edges().collect();
    let mut info = Vec::new();
    let mut offset = cycle_n;
    for (i, &(size, seed)) in gadgets.iter().enumerate() {
        if size < 4 {
            return Err(bad("gadget size must be at least 4"));
        }
        let gadget = random_regular(size, 3, seed)?;
        edges.extend(gadget.edges().map(|(u, v)| (u + offset, v + offset)));
        let marker = i * spacing;
        edges.push((marker, offset));
        info.push(Gadget { offset, size, marker });
        offset += size;
    }
    let graph = BoundedDegreeGraph::build(offset, edges)?;
    Ok(Hybrid {
        measure: VertexMeasure::uniform(graph.n()),
        graph,
        cycle_n,
        gadgets: info,
    })
}

/// Geometric weights inside each gadget: rank `r = j + 1` of gadget vertex
/// `j` gets `m · 2^{-r}` for `r < m` and `m · 2^{-(m-1)}` for `r = m`, so
/// each gadget keeps total `m`. Cycle vertices keep weight one.
pub fn geometric_measure_example2(h: &Hybrid) -> Result<VertexMeasure> {
    let g = &h.graph;
    let expected = h.cycle_n + h.gadgets.iter().map(|gd| gd.size).sum::<usize>();
    if g.n() != expected {
        return Err(Error::NotHybrid(format!("{} vertices, layout needs {expected}", g.n())));
    }
    if h.cycle_n < 3 || (0..h.cycle_n).any(|i| !g.has_edge(i, (i + 1) % h.cycle_n)) {
        return Err(Error::NotHybrid("cycle edges missing".into()));
    }
    let mut weights = vec![rational::int(1); g.n()];
    for gd in &h.gadgets {
        if gd.marker >= h.cycle_n || !g.has_edge(gd.marker, gd.offset) {
            return Err(Error::NotHybrid(format!("gadget at {} is not attached to its marker", gd.offset)));
        }
        let m = gd.size as i64;
        for j in 0..gd.size {
            let r = (j as i64 + 1).min(m - 1);
            weights[gd.offset + j] = rational::int(m) * rational::pow(&rational::int(2), -r);
        }
    }
    VertexMeasure::new(weights)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyBall {
    pub graph: BoundedDegreeGraph,
    pub measure: VertexMeasure,
    pub word_length: Vec<usize>,
    /// The rational stand-in for `e^{-2λ}` used as the per-letter factor.
    pub decay: Rational,
    pub max_edge_ratio: Rational,
}

/// Ball of the Cayley graph of the free group on `rank` generators (a
/// `2·rank`-regular tree truncated at `radius`), with `ρ(γ) ∝ e^{-2λ|γ|}`.
///
/// `e^{-2λ}` is replaced by a nearby small-denominator rational; the edge
/// ratio bound is checked against the float `e^{2λ}` with relative slack
/// `1e-9`.
pub fn cayley_ball_free_group(rank: usize, radius: usize, lambda: f64) -> Result<CayleyBall> {
    if rank == 0 || radius == 0 {
        return Err(bad("rank and radius must be at least 1"));
    }
    if !lambda.is_finite() || lambda < (2.0 * rank as f64).ln() - 1e-12 {
        return Err(bad("λ must be at least ln(2·rank)"));
    }
    let target = (-2.0 * lambda).exp();
    let approx = num::rational::Ratio::<i64>::approximate_float(target)
        .filter(|q| *q.numer() > 0)
        .ok_or_else(|| bad("e^{-2λ} is not representable"))?;
    let decay = Rational::new((*approx.numer()).into(), (*approx.denom()).into());

    // vertices as (parent, last letter), letters 0..2·rank with inverse pairs (2i, 2i+1)
    let letters = 2 * rank;
    let inverse = |a: usize| a ^ 1;
    let mut last: Vec<Option<usize>> = vec![None];
    let mut word_length = vec![0];
    let mut edges = Vec::new();
    let mut level = vec![0usize];
    for len in 1..=radius {
        let mut next = Vec::new();
        for &p in &level {
            for a in 0..letters {
                if last[p].is_some_and(|b| inverse(b) == a) {
                    continue;
                }
                let v = last.len();
                last.push(Some(a));
                word_length.push(len);
                edges.push((p, v));
                next.push(v);
            }
        }
        level = next;
    }
    let graph = BoundedDegreeGraph::build(last.len(), edges)?;
    let raw: Vec<Rational> = word_length.iter().map(|&l| rational::pow(&decay, l as i64)).collect();
    let measure = VertexMeasure::new(raw)?.normalized();
    let max_edge_ratio = bounded_type_constant(&graph, &measure)?;
    let bound = (2.0 * lambda).exp();
    if rational::to_f64(&max_edge_ratio) > bound * (1.0 + 1e-9) {
        return Err(Error::BoundViolated(format!(
            "edge ratio {} exceeds e^(2λ) = {bound}",
            rational::format(&max_edge_ratio)
        )));
    }
    Ok(CayleyBall {
        graph,
        measure,
        word_length,
        decay,
        max_edge_ratio,
    })
}

/// A family with all its parameters, serializable into run manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    Cycle { n: usize },
    Path { n: usize },
    Grid { rows: usize, cols: usize },
    Torus { rows: usize, cols: usize },
    Tree { branching: usize, depth: usize },
    Complete { n: usize },
    RandomRegular { n: usize, d: usize, seed: u64 },
    Hybrid1 { cycle: usize, gadgets: Vec<(usize, u64)>, spacing: usize },
    Hybrid2 { cycle: usize, gadgets: Vec<(usize, u64)>, spacing: usize },
    Cayley { rank: usize, radius: usize, lambda: f64 },
}

impl FamilySpec {
    /// The graph and, for families that carry one, a non-uniform measure.
    pub fn generate(&self) -> Result<(BoundedDegreeGraph, Option<VertexMeasure>)> {
        Ok(match self {
            FamilySpec::Cycle { n } => (cycle(*n)?, None),
            FamilySpec::Path { n } => (path(*n)?, None),
            FamilySpec::Grid { rows, cols } => (grid(*rows, *cols)?, None),
            FamilySpec::Torus { rows, cols } => (torus(*rows, *cols)?, None),
            FamilySpec::Tree { branching, depth } => (tree(*branching, *depth)?, None),
            FamilySpec::Complete { n } => (complete(*n)?, None),
            FamilySpec::RandomRegular { n, d, seed } => (random_regular(*n, *d, *seed)?, None),
            FamilySpec::Hybrid1 { cycle, gadgets, spacing } => {
                let h = hybrid_example1(*cycle, gadgets, *spacing)?;
                (h.graph, Some(h.measure))
            }
            FamilySpec::Hybrid2 { cycle, gadgets, spacing } => {
                let h = hybrid_example1(*cycle, gadgets, *spacing)?;
                let mu = geometric_measure_example2(&h)?;
                (h.graph, Some(mu))
            }
            FamilySpec::Cayley { rank, radius, lambda } => {
                let c = cayley_ball_free_group(*rank, *radius, *lambda)?;
                (c.graph, Some(c.measure))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn basic_shapes() {
        let c = cycle(6).unwrap();
        assert_eq!((c.n(), c.max_degree()), (6, 2));
        let g = grid(4, 4).unwrap();
        assert_eq!((g.n(), g.max_degree(), g.edge_count()), (16, 4, 24));
        let t = torus(3, 3).unwrap();
        assert!((0..9).all(|v| t.degree(v) == 4));
        let tr = tree(2, 3).unwrap();
        assert_eq!((tr.n(), tr.edge_count()), (15, 14));
        assert_eq!(complete(5).unwrap().edge_count(), 10);
        assert_eq!(path(1).unwrap().n(), 1);
        assert!(cycle(2).is_err());
    }

    #[test]
    fn random_regular_properties() {
        let g = random_regular(8, 3, 1).unwrap();
        assert!((0..8).all(|v| g.degree(v) == 3));
        assert_eq!(g, random_regular(8, 3, 1).unwrap());
        let k4 = random_regular(4, 3, 5).unwrap();
        assert_eq!(k4, complete(4).unwrap());
        assert!(random_regular(5, 3, 1).is_err());
        assert!(random_regular(3, 3, 1).is_err());
    }

    #[test]
    fn hybrid_layout() {
        let h = hybrid_example1(12, &[(8, 1)], 12).unwrap();
        assert_eq!(h.graph.n(), 20);
        assert_eq!(h.graph.max_degree(), 4);
        assert_eq!(h.graph.degree(0), 3);
        assert!(h.graph.is_connected());
        let bare = hybrid_example1(12, &[], 12).unwrap();
        assert_eq!(bare.graph, cycle(12).unwrap());
    }

    #[test]
    fn geometric_gadget_weights() {
        let h = hybrid_example1(8, &[(4, 1)], 8).unwrap();
        let mu = geometric_measure_example2(&h).unwrap();
        let gadget: Vec<Rational> = (8..12).map(|v| mu.weight(v).clone()).collect();
        // m · (1/2, 1/4, 1/8, 1/8) with m = 4
        assert_eq!(gadget, vec![int(2), int(1), ratio(1, 2), ratio(1, 2)]);
        assert_eq!(mu.total(), &int(12));
        let mut broken = h.clone();
        broken.cycle_n = 9;
        assert!(matches!(geometric_measure_example2(&broken), Err(Error::NotHybrid(_))));
    }

    #[test]
    fn cayley_ball_counts_and_ratios() {
        let c = cayley_ball_free_group(2, 3, 4f64.ln()).unwrap();
        for r in 1..=3 {
            let sphere = c.word_length.iter().filter(|&&l| l == r).count();
            assert_eq!(sphere, 4 * 3usize.pow(r as u32 - 1));
        }
        assert_eq!(c.decay, ratio(1, 16));
        assert_eq!(c.max_edge_ratio, int(16));
        assert_eq!(c.measure.total(), &int(1));
        let z = cayley_ball_free_group(1, 4, 2f64.ln()).unwrap();
        assert_eq!(z.graph.max_degree(), 2);
        assert_eq!(z.graph.edge_count(), 8);
        assert!(cayley_ball_free_group(2, 3, 1.0).is_err());
    }

    #[test]
    fn spec_round_trip() {
        let s = FamilySpec::Hybrid1 {
            cycle: 12,
            gadgets: vec![(8, 3)],
            spacing: 12,
        };
        let json = serde_json::to_string(&s).unwrap();
        let back: FamilySpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back.generate().unwrap(), s.generate().unwrap());
    }
}
