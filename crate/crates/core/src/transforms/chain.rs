//! The whole equivalence chain on one input family.

use super::duality::{distribution_to_partition, partition_to_reiter, weighted_to_distribution, Dichotomy};
use super::local::{local_to_global, GlobalSeparator, ReiterLocalOracle};
use super::report::{Stage, TransformReport};
use crate::certificates::{reiter_defect, FractionalKPartition, ReiterFamily, SeparatorDistribution};
use crate::error::{Error, Result};
use crate::graph::BoundedDegreeGraph;
use crate::measure::VertexMeasure;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainRun {
    pub eps: Rational,
    /// `K = N_{2R}`.
    pub k: usize,
    pub global: GlobalSeparator,
    pub distribution: SeparatorDistribution,
    pub partition: FractionalKPartition,
    pub family: ReiterFamily,
    pub reports: Vec<TransformReport>,
    /// `2d(d+1)ε`, the product of the per-stage constants.
    pub composed_bound: Rational,
}

/// Reiter family → local pieces → separator → separator distribution at
/// `K = N_{2R}` → fractional partition → Reiter family.
///
/// The distribution stage needs the game value at `K` to be at most `ε`.
/// It is: exhaustion with the local oracle produces, for every positive
/// measure, a `K`-separator of relative mass at most `ε`, and the family
/// itself does not depend on the measure.
pub fn full_cycle(g: &BoundedDegreeGraph, mu: &VertexMeasure, fam: &ReiterFamily, cap: usize) -> Result<ChainRun> {
    let eps = reiter_defect(g, fam)?.epsilon;
    let mut oracle = ReiterLocalOracle::new(g, fam, eps.clone())?;
    let k = oracle.component_bound();
    let global = local_to_global(g, mu, &eps, k, &mut oracle)?;

    let mut worst = Rational::from_integer(0.into());
    let mut k_pieces = 0;
    for step in &global.steps {
        let ratio = mu.mass(&step.boundary) / mu.mass(&step.piece);
        if ratio > worst {
            worst = ratio;
        }
        let biggest = g.components_of(&step.piece)?.iter().map(Vec::len).max().unwrap_or(0);
        k_pieces = k_pieces.max(biggest);
    }
    let local_report = TransformReport {
        stage: Stage::AmenableToLocal,
        eps_in: eps.clone(),
        k_in: fam.radius(),
        eps_guaranteed: eps.clone(),
        eps_achieved: worst,
        k_out: k_pieces,
    };

    let (dichotomy, dist_report) = weighted_to_distribution(g, k, &eps, cap)?;
    let distribution = match dichotomy {
        Dichotomy::Feasible { distribution, .. } => distribution,
        Dichotomy::Infeasible { min_fraction, .. } => {
            return Err(Error::BoundViolated(format!(
                "game value {} at K = {k} exceeds the family defect {}",
                rational::format(&min_fraction),
                rational::format(&eps)
            )))
        }
    };
    let (partition, _, part_report) = distribution_to_partition(g, &distribution)?;
    let (family, reiter_report) = partition_to_reiter(g, &partition)?;

    let d = g.max_degree() as i64;
    let composed_bound = rational::int(2 * d * (d + 1)) * &eps;
    if reiter_report.eps_achieved > composed_bound {
        return Err(Error::BoundViolated("final defect exceeds the composed bound".into()));
    }
    let reports = vec![local_report, global.report.clone(), dist_report, part_report, reiter_report];
    if let Some(r) = reports.iter().find(|r| !r.holds()) {
        return Err(Error::BoundViolated(format!("stage report fails: {r}")));
    }
    Ok(ChainRun {
        eps,
        k,
        global,
        distribution,
        partition,
        family,
        reports,
        composed_bound,
    })
}
