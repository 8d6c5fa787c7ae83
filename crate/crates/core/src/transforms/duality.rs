//! From weighted hyperfiniteness to separator distributions, then to
//! fractional partitions, then to Reiter families.

use std::collections::BTreeMap;

use num::Zero;

use super::report::{Stage, TransformReport};
use crate::certificates::{
    boundary_operator, coverage, mix_partitions, reiter_defect, FractionalKPartition, ReiterFamily,
    SeparatorDistribution, WeightFunction,
};
use crate::error::{Error, Result};
use crate::graph::BoundedDegreeGraph;
use crate::rational::{self, Rational};
use crate::solvers::game::separator_game_exact;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dichotomy {
    /// A distribution covering every vertex at most `ε`.
    Feasible {
        distribution: SeparatorDistribution,
        max_coverage: Rational,
    },
    /// Weights under which every `K`-separator has relative weight `> ε`.
    Infeasible {
        witness: WeightFunction,
        min_fraction: Rational,
    },
}

/// Either a separator distribution with maximum coverage at most `ε`, or a
/// weight function no `K`-separator can beat, decided by the exact game LP.
pub fn weighted_to_distribution(
    g: &BoundedDegreeGraph,
    k: usize,
    eps: &Rational,
    cap: usize,
) -> Result<(Dichotomy, TransformReport)> {
    let sol = separator_game_exact(g, k, cap)?;
    let report = |achieved: Rational| TransformReport {
        stage: Stage::WeightedToDistribution,
        eps_in: eps.clone(),
        k_in: k,
        eps_guaranteed: eps.clone(),
        eps_achieved: achieved,
        k_out: k,
    };
    if sol.value <= *eps {
        let max_coverage = coverage(g.n(), &sol.primal, None)?.max;
        let r = report(max_coverage.clone());
        Ok((
            Dichotomy::Feasible {
                distribution: sol.primal,
                max_coverage,
            },
            r,
        ))
    } else {
        // the report states the witness value against ε; it is a failure by design
        let r = report(sol.value.clone());
        Ok((
            Dichotomy::Infeasible {
                witness: sol.dual,
                min_fraction: sol.value,
            },
            r,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionBound {
    pub max_coverage: Rational,
    pub max_boundary: Rational,
    /// `(d+1) · max coverage`.
    pub bound: Rational,
}

/// `Φ = Σ_i t_i Φ_{Y_i}` with `∂Φ(x) <= Σ_{y ∈ B_1(x)} c(y) <= (d+1) max c`.
pub fn distribution_to_partition(
    g: &BoundedDegreeGraph,
    nu: &SeparatorDistribution,
) -> Result<(FractionalKPartition, PartitionBound, TransformReport)> {
    nu.validate(g)?;
    let phi = mix_partitions(g, nu)?;
    let cov = coverage(g.n(), nu, None)?;
    let bnd = boundary_operator(g, &phi, None)?;
    for x in 0..g.n() {
        let local: Rational = std::iter::once(x)
            .chain(g.neighbors(x).iter().copied())
            .map(|y| cov.values[y].clone())
            .sum();
        if bnd.values[x] > local {
            return Err(Error::BoundViolated(format!(
                "∂Φ({x}) = {} exceeds coverage of its closed neighbourhood {}",
                rational::format(&bnd.values[x]),
                rational::format(&local)
            )));
        }
    }
    let bound = rational::int(g.max_degree() as i64 + 1) * &cov.max;
    if bnd.max > bound {
        return Err(Error::BoundViolated("max ∂Φ exceeds (d+1) max coverage".into()));
    }
    let report = TransformReport {
        stage: Stage::DistributionToPartition,
        eps_in: cov.max.clone(),
        k_in: nu.k(),
        eps_guaranteed: bound.clone(),
        eps_achieved: bnd.max.clone(),
        k_out: nu.k(),
    };
    Ok((
        phi,
        PartitionBound {
            max_coverage: cov.max,
            max_boundary: bnd.max,
            bound,
        },
        report,
    ))
}

/// `p(x) = Σ_{A ∋ x} Φ(A) · uniform_A`, supported in `B_{K-1}(x)`.
pub fn partition_to_reiter(
    g: &BoundedDegreeGraph,
    phi: &FractionalKPartition,
) -> Result<(ReiterFamily, TransformReport)> {
    let n = g.n();
    let star = phi.star(n)?;
    if let Some(x) = star.iter().position(|s| *s != rational::int(1)) {
        return Err(Error::InvalidCertificate(format!("Φ*({x}) = {}", rational::format(&star[x]))));
    }
    let mut rows: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); n];
    for (a, w) in phi.support() {
        let share = w / rational::int(a.len() as i64);
        for &x in a.vertices() {
            for &z in a.vertices() {
                *rows[x].entry(z).or_insert_with(Rational::zero) += &share;
            }
        }
    }
    let fam = ReiterFamily::new(phi.k().saturating_sub(1), rows);

    let bnd = boundary_operator(g, phi, None)?;
    // one-sided masses Σ_{A ∋ x, A ∌ y} Φ(A) for every ordered edge
    let mut one_sided: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    for (a, w) in phi.support() {
        for &x in a.vertices() {
            for &y in g.neighbors(x) {
                if !a.contains(y) {
                    *one_sided.entry((x, y)).or_insert_with(Rational::zero) += w;
                }
            }
        }
    }
    let zero = Rational::zero();
    for (x, y) in g.edges() {
        let dist = crate::certificates::l1_distance(fam.row(x), fam.row(y));
        let oxy = one_sided.get(&(x, y)).unwrap_or(&zero);
        let oyx = one_sided.get(&(y, x)).unwrap_or(&zero);
        let mid = oxy + oyx;
        if dist > mid || *oxy > bnd.values[x] || *oyx > bnd.values[y] {
            return Err(Error::BoundViolated(format!("edge ({x}, {y}) breaks the ℓ1 chain of inequalities")));
        }
    }
    let defect = reiter_defect(g, &fam)?;
    let guaranteed = rational::int(2 * g.max_degree() as i64) * &bnd.max;
    if defect.epsilon > guaranteed {
        return Err(Error::BoundViolated("Reiter defect exceeds 2 ε d".into()));
    }
    let report = TransformReport {
        stage: Stage::PartitionToReiter,
        eps_in: bnd.max,
        k_in: phi.k(),
        eps_guaranteed: guaranteed,
        eps_achieved: defect.epsilon,
        k_out: fam.radius(),
    };
    Ok((fam, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::{separator_to_partition, KSeparator};
    use crate::rational::{int, ratio};
    use crate::subsets::DEFAULT_CAP;

    fn cycle(n: usize) -> BoundedDegreeGraph {
        BoundedDegreeGraph::build(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn cycle_six_feasible_at_one_third() {
        let (d, r) = weighted_to_distribution(&cycle(6), 2, &ratio(1, 3), DEFAULT_CAP).unwrap();
        match d {
            Dichotomy::Feasible { max_coverage, .. } => assert_eq!(max_coverage, ratio(1, 3)),
            _ => panic!("expected feasible"),
        }
        assert!(r.holds());
    }

    #[test]
    fn cycle_six_infeasible_at_one_quarter() {
        let (d, r) = weighted_to_distribution(&cycle(6), 2, &ratio(1, 4), DEFAULT_CAP).unwrap();
        match d {
            Dichotomy::Infeasible { witness, min_fraction } => {
                assert_eq!(min_fraction, ratio(1, 3));
                assert_eq!(witness.values().len(), 6);
            }
            _ => panic!("expected infeasible"),
        }
        assert!(!r.holds());
    }

    #[test]
    fn rotation_distribution_is_tight() {
        let g = cycle(6);
        let nu = SeparatorDistribution::new(
            2,
            vec![(vec![0, 3], ratio(1, 3)), (vec![1, 4], ratio(1, 3)), (vec![2, 5], ratio(1, 3))],
        )
        .unwrap();
        let (_, b, r) = distribution_to_partition(&g, &nu).unwrap();
        assert_eq!(b.max_boundary, int(1));
        assert_eq!(b.bound, int(1));
        assert!(r.holds());
    }

    #[test]
    fn empty_separator_atom() {
        let g = cycle(4);
        let nu = SeparatorDistribution::single(KSeparator::new(4, vec![]));
        let (phi, b, _) = distribution_to_partition(&g, &nu).unwrap();
        assert_eq!(b.max_boundary, int(0));
        let (fam, r) = partition_to_reiter(&g, &phi).unwrap();
        assert_eq!(r.eps_achieved, int(0));
        assert_eq!(fam.row(0).get(&3), Some(&ratio(1, 4)));
    }

    #[test]
    fn separator_partition_on_cycle_six() {
        let g = cycle(6);
        let phi = separator_to_partition(&g, &KSeparator::new(2, vec![0, 3])).unwrap();
        let (_, r) = partition_to_reiter(&g, &phi).unwrap();
        assert!(r.holds());
        assert_eq!(r.eps_in, int(1));
        assert!(r.eps_achieved <= int(4));
    }
}
