//! From a Reiter family to local pieces, and from local pieces to a global
//! separator by greedy exhaustion.

use std::collections::BTreeMap;

use num::{Signed, Zero};

use super::namioka::{breakpoints, select_threshold};
use super::report::{Stage, TransformReport};
use crate::certificates::{reiter_defect, KSeparator, ReiterFamily};
use crate::error::{Error, Result};
use crate::graph::BoundedDegreeGraph;
use crate::measure::{check_len, VertexMeasure};
use crate::rational::{self, Rational};
use crate::subsets::enumerate_k_subsets;

/// Coloring radius for the `Λ`-set extraction. `4R + 2` is what the
/// argument needs; `10R` is kept whenever it is larger.
pub fn coloring_radius(r: usize) -> usize {
    (10 * r).max(4 * r + 2)
}

/// Nearest point of `b` for every vertex reachable from it, ties broken
/// towards the lowest id.
pub fn nearest_projection(g: &BoundedDegreeGraph, b: &[usize]) -> Vec<Option<usize>> {
    let mut owner: Vec<Option<usize>> = vec![None; g.n()];
    let mut frontier: Vec<usize> = b.to_vec();
    frontier.sort_unstable();
    frontier.dedup();
    for &x in &frontier {
        owner[x] = Some(x);
    }
    while !frontier.is_empty() {
        let mut next: BTreeMap<usize, usize> = BTreeMap::new();
        for &u in &frontier {
            let o = owner[u].expect("frontier vertices are owned");
            for &v in g.neighbors(u) {
                if owner[v].is_none() {
                    next.entry(v).and_modify(|c| *c = (*c).min(o)).or_insert(o);
                }
            }
        }
        for (&v, &o) in &next {
            owner[v] = Some(o);
        }
        frontier = next.into_keys().collect();
    }
    owner
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalPiece {
    /// The piece `A ⊆ B`, sorted.
    pub a: Vec<usize>,
    pub threshold: Rational,
    pub color: usize,
    /// `∂_B A`.
    pub boundary: Vec<usize>,
    pub mass: Rational,
    pub boundary_mass: Rational,
    pub max_component: usize,
    /// `N_{2R}`.
    pub component_bound: usize,
}

/// Precomputed data for repeated extraction from one Reiter family.
#[derive(Debug, Clone)]
pub struct ReiterLocalOracle<'a> {
    fam: &'a ReiterFamily,
    eps: Rational,
    coloring: Vec<usize>,
    component_bound: usize,
}

impl<'a> ReiterLocalOracle<'a> {
    /// Validates the family; the claimed defect `eps` is not compared to
    /// the measured one here, a family worse than claimed surfaces as
    /// `NoValidThreshold` during extraction.
    pub fn new(g: &BoundedDegreeGraph, fam: &'a ReiterFamily, eps: Rational) -> Result<Self> {
        reiter_defect(g, fam)?;
        Ok(ReiterLocalOracle {
            fam,
            eps,
            coloring: g.distance_power_coloring(coloring_radius(fam.radius())),
            component_bound: g.max_ball_size(2 * fam.radius()),
        })
    }

    pub fn component_bound(&self) -> usize {
        self.component_bound
    }

    pub fn extract(&self, g: &BoundedDegreeGraph, mu: &VertexMeasure, b: &[usize]) -> Result<LocalPiece> {
        check_len(g, mu)?;
        if b.is_empty() {
            return Err(Error::EmptySubset);
        }
        let in_b = g.mask(b)?;
        let mut b: Vec<usize> = b.to_vec();
        b.sort_unstable();
        b.dedup();

        let tau = nearest_projection(g, &b);
        let pushed: BTreeMap<usize, BTreeMap<usize, Rational>> = b
            .iter()
            .map(|&x| {
                let mut row: BTreeMap<usize, Rational> = BTreeMap::new();
                for (&t, v) in self.fam.row(x) {
                    let z = tau[t].expect("support lies within reach of B");
                    *row.entry(z).or_insert_with(Rational::zero) += v;
                }
                (x, row)
            })
            .collect();

        let level = |a: &Rational| -> BTreeMap<usize, Vec<usize>> {
            pushed
                .iter()
                .map(|(&x, row)| (x, row.iter().filter(|(_, v)| *v > a).map(|(&z, _)| z).collect()))
                .collect()
        };
        let bps = breakpoints(pushed.values().flat_map(|r| r.values()));
        let (threshold, num, den) = select_threshold(&bps, |a| {
            let lam = level(a);
            let mut lhs = Rational::zero();
            let mut rhs = Rational::zero();
            for &x in &b {
                let lx = &lam[&x];
                rhs += mu.weight(x) * rational::int(lx.len() as i64);
                let diff: usize = g
                    .neighbors(x)
                    .iter()
                    .filter(|&&y| in_b[y])
                    .map(|&y| symmetric_difference(lx, &lam[&y]))
                    .sum();
                lhs += mu.weight(x) * rational::int(diff as i64);
            }
            (lhs, rhs)
        })
        .ok_or(Error::NoValidThreshold)?;
        if num > &self.eps * &den {
            return Err(Error::NoValidThreshold);
        }

        let lam = level(&threshold);
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &x in &b {
            let mut colors: Vec<usize> = lam[&x].iter().map(|&z| self.coloring[z]).collect();
            colors.sort_unstable();
            colors.dedup();
            for c in colors {
                classes.entry(c).or_default().push(x);
            }
        }
        let mut best: Option<(usize, Vec<usize>, Vec<usize>, Rational, Rational)> = None;
        for (color, a) in classes {
            let in_a = g.mask(&a)?;
            let boundary = g.outer_boundary_masked(&in_a, &in_b);
            let mass = mu.mass(&a);
            let bmass = mu.mass(&boundary);
            let better = match &best {
                None => true,
                Some((_, _, _, m, bm)) => &bmass * m < bm * &mass,
            };
            if better {
                best = Some((color, a, boundary, mass, bmass));
            }
        }
        let (color, a, boundary, mass, boundary_mass) = best.ok_or(Error::NoValidThreshold)?;
        if boundary_mass > &self.eps * &mass {
            return Err(Error::NoValidThreshold);
        }
        let max_component = g.components_of(&a)?.iter().map(Vec::len).max().unwrap_or(0);
        if max_component > self.component_bound {
            return Err(Error::BoundViolated(format!(
                "piece component of size {max_component} exceeds N_2R = {}",
                self.component_bound
            )));
        }
        Ok(LocalPiece {
            a,
            threshold,
            color,
            boundary,
            mass,
            boundary_mass,
            max_component,
            component_bound: self.component_bound,
        })
    }
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len() + b.len() - 2 * common
}

/// A piece `A ⊆ B` with `μ(∂_B A) <= ε μ(A)` and small components.
pub fn amenable_to_local(
    g: &BoundedDegreeGraph,
    mu: &VertexMeasure,
    fam: &ReiterFamily,
    eps: &Rational,
    b: &[usize],
) -> Result<(LocalPiece, TransformReport)> {
    let oracle = ReiterLocalOracle::new(g, fam, eps.clone())?;
    let piece = oracle.extract(g, mu, b)?;
    let report = TransformReport {
        stage: Stage::AmenableToLocal,
        eps_in: eps.clone(),
        k_in: fam.radius(),
        eps_guaranteed: eps.clone(),
        eps_achieved: &piece.boundary_mass / &piece.mass,
        k_out: piece.max_component,
    };
    Ok((piece, report))
}

/// Answers "find a piece of `B`" queries during exhaustion.
pub trait LocalOracle {
    fn piece(&mut self, g: &BoundedDegreeGraph, mu: &VertexMeasure, b: &[usize]) -> Result<Vec<usize>>;
}

impl<F> LocalOracle for F
where
    F: FnMut(&[usize]) -> Result<Vec<usize>>,
{
    fn piece(&mut self, _: &BoundedDegreeGraph, _: &VertexMeasure, b: &[usize]) -> Result<Vec<usize>> {
        self(b)
    }
}

impl LocalOracle for ReiterLocalOracle<'_> {
    fn piece(&mut self, g: &BoundedDegreeGraph, mu: &VertexMeasure, b: &[usize]) -> Result<Vec<usize>> {
        Ok(self.extract(g, mu, b)?.a)
    }
}

/// Lexicographically first connected set of at most `K` vertices of `B`
/// whose outer boundary in `B` is light enough.
#[derive(Debug, Clone)]
pub struct GreedyLocalOracle {
    pub eps: Rational,
    pub k: usize,
    pub cap: usize,
}

impl LocalOracle for GreedyLocalOracle {
    fn piece(&mut self, g: &BoundedDegreeGraph, mu: &VertexMeasure, b: &[usize]) -> Result<Vec<usize>> {
        let mut b = b.to_vec();
        b.sort_unstable();
        let in_b = g.mask(&b)?;
        let h = g.induced(&b)?;
        for cand in enumerate_k_subsets(&h, self.k, self.cap)? {
            let a: Vec<usize> = cand.vertices().iter().map(|&i| b[i]).collect();
            let boundary = g.outer_boundary_masked(&g.mask(&a)?, &in_b);
            if mu.mass(&boundary) <= &self.eps * mu.mass(&a) {
                return Ok(a);
            }
        }
        Err(Error::NoValidThreshold)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustionStep {
    pub remaining: usize,
    pub piece: Vec<usize>,
    pub boundary: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalSeparator {
    pub separator: KSeparator,
    pub steps: Vec<ExhaustionStep>,
    pub report: TransformReport,
}

/// Greedy exhaustion `X_{i+1} = X_i \ (A_i ∪ ∂_{X_i} A_i)`, `T = ∪ ∂_{X_i} A_i`.
pub fn local_to_global(
    g: &BoundedDegreeGraph,
    mu: &VertexMeasure,
    eps: &Rational,
    k: usize,
    oracle: &mut dyn LocalOracle,
) -> Result<GlobalSeparator> {
    check_len(g, mu)?;
    let n = g.n();
    let mut alive = vec![true; n];
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut removed = Vec::new();
    let mut steps = Vec::new();
    let mut boundary_total = Rational::zero();
    let mut piece_total = Rational::zero();
    while !remaining.is_empty() {
        let violation = |reason: String| Error::OracleViolation {
            subset_size: remaining.len(),
            reason,
        };
        let mut a = oracle.piece(g, mu, &remaining)?;
        a.sort_unstable();
        if a.is_empty() {
            return Err(violation("empty piece".into()));
        }
        if a.windows(2).any(|w| w[0] == w[1]) {
            return Err(violation("repeated vertex in piece".into()));
        }
        if let Some(&x) = a.iter().find(|&&x| x >= n || !alive[x]) {
            return Err(violation(format!("vertex {x} is not in the queried set")));
        }
        let in_a = g.mask(&a)?;
        let boundary = g.outer_boundary_masked(&in_a, &alive);
        let (ma, mb) = (mu.mass(&a), mu.mass(&boundary));
        if mb > eps * &ma {
            return Err(violation(format!(
                "boundary mass {} exceeds {} times piece mass {}",
                rational::format(&mb),
                rational::format(eps),
                rational::format(&ma)
            )));
        }
        if let Some(c) = g.components_masked(&in_a).into_iter().find(|c| c.len() > k) {
            return Err(violation(format!("piece component of size {} exceeds K = {k}", c.len())));
        }
        boundary_total += mb;
        piece_total += ma;
        for &x in a.iter().chain(&boundary) {
            alive[x] = false;
        }
        removed.extend(boundary.iter().copied());
        steps.push(ExhaustionStep {
            remaining: remaining.len(),
            piece: a,
            boundary,
        });
        remaining.retain(|&x| alive[x]);
    }

    let separator = KSeparator::new(k, removed);
    let mass = mu.mass(separator.removed());
    // Σ μ(∂A_i) <= ε Σ μ(A_i) <= ε μ(V)
    if mass != boundary_total || boundary_total > eps * &piece_total || &piece_total > mu.total() {
        return Err(Error::BoundViolated("telescoping bound failed".into()));
    }
    let max_component = separator.max_component(g)?;
    if max_component > k {
        return Err(Error::ComponentTooLarge { size: max_component, k });
    }
    let achieved = if mu.total().is_positive() { mass / mu.total() } else { Rational::zero() };
    Ok(GlobalSeparator {
        separator,
        steps,
        report: TransformReport {
            stage: Stage::LocalToGlobal,
            eps_in: eps.clone(),
            k_in: k,
            eps_guaranteed: eps.clone(),
            eps_achieved: achieved,
            k_out: max_component,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::separator_quality;
    use crate::rational::{int, ratio};

    fn cycle(n: usize) -> BoundedDegreeGraph {
        BoundedDegreeGraph::build(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn projection_prefers_lowest_id() {
        let g = cycle(6);
        let tau = nearest_projection(&g, &[1, 5]);
        assert_eq!(tau, vec![Some(1), Some(1), Some(1), Some(1), Some(5), Some(5)]);
        assert_eq!(tau[3], Some(1));
    }

    #[test]
    fn window_family_on_cycle_twelve() {
        let g = cycle(12);
        let mu = VertexMeasure::uniform(12);
        let fam = ReiterFamily::window(&g, 2);
        let eps = reiter_defect(&g, &fam).unwrap().epsilon;
        assert_eq!(eps, ratio(4, 5));
        let all: Vec<usize> = (0..12).collect();
        let (piece, report) = amenable_to_local(&g, &mu, &fam, &eps, &all).unwrap();
        assert!(!piece.a.is_empty());
        assert!(piece.boundary_mass <= &eps * &piece.mass);
        assert!(piece.max_component <= 9);
        assert!(report.holds());
    }

    #[test]
    fn defect_zero_family_returns_whole_set() {
        let g = cycle(5);
        let mu = VertexMeasure::uniform(5);
        let uniform: BTreeMap<usize, Rational> = (0..5).map(|z| (z, ratio(1, 5))).collect();
        let fam = ReiterFamily::new(2, vec![uniform; 5]);
        let all: Vec<usize> = (0..5).collect();
        let (piece, _) = amenable_to_local(&g, &mu, &fam, &int(0), &all).unwrap();
        assert_eq!(piece.a, all);
        assert!(piece.boundary.is_empty());
    }

    #[test]
    fn singleton_b() {
        let g = cycle(8);
        let fam = ReiterFamily::window(&g, 1);
        let eps = reiter_defect(&g, &fam).unwrap().epsilon;
        let (piece, _) = amenable_to_local(&g, &VertexMeasure::uniform(8), &fam, &eps, &[3]).unwrap();
        assert_eq!(piece.a, vec![3]);
    }

    #[test]
    fn understated_defect_is_rejected() {
        let g = cycle(12);
        let fam = ReiterFamily::window(&g, 1);
        let all: Vec<usize> = (0..12).collect();
        let r = amenable_to_local(&g, &VertexMeasure::uniform(12), &fam, &ratio(1, 100), &all);
        assert_eq!(r.unwrap_err(), Error::NoValidThreshold);
    }

    #[test]
    fn whole_component_oracle_gives_empty_separator() {
        let g = cycle(6);
        let mu = VertexMeasure::uniform(6);
        let mut oracle = |b: &[usize]| Ok(b.to_vec());
        let run = local_to_global(&g, &mu, &int(0), 6, &mut oracle).unwrap();
        assert!(run.separator.removed().is_empty());
        assert_eq!(run.steps.len(), 1);
    }

    #[test]
    fn single_vertex_graph() {
        let g = BoundedDegreeGraph::build(1, []).unwrap();
        let mut oracle = |b: &[usize]| Ok(b.to_vec());
        let run = local_to_global(&g, &VertexMeasure::uniform(1), &int(0), 1, &mut oracle).unwrap();
        assert!(run.separator.removed().is_empty());
    }

    #[test]
    fn greedy_oracle_on_cycle_twelve() {
        let g = cycle(12);
        let mu = VertexMeasure::uniform(12);
        let eps = int(1);
        let mut oracle = GreedyLocalOracle { eps: eps.clone(), k: 2, cap: 1000 };
        let run = local_to_global(&g, &mu, &eps, 2, &mut oracle).unwrap();
        let q = separator_quality(&g, &mu, &run.separator).unwrap();
        assert!(q.is_valid_for(&eps, 2));
        assert!(run.report.holds());
    }

    #[test]
    fn bad_oracle_is_reported() {
        let g = cycle(6);
        let mu = VertexMeasure::uniform(6);
        let mut oracle = |_: &[usize]| Ok(vec![0]);
        let err = local_to_global(&g, &mu, &ratio(1, 2), 2, &mut oracle).unwrap_err();
        assert!(matches!(err, Error::OracleViolation { subset_size: 6, .. }));
    }

    #[test]
    fn chained_reiter_oracle_on_cycle() {
        let g = cycle(12);
        let mu = VertexMeasure::uniform(12);
        let fam = ReiterFamily::window(&g, 2);
        let eps = reiter_defect(&g, &fam).unwrap().epsilon;
        let mut oracle = ReiterLocalOracle::new(&g, &fam, eps.clone()).unwrap();
        let k = oracle.component_bound();
        let run = local_to_global(&g, &mu, &eps, k, &mut oracle).unwrap();
        assert!(run.report.holds());
        assert!(run.report.k_out <= k);
    }
}
