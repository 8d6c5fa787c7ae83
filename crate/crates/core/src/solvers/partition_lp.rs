//! Optimal fractional `K`-partitions: minimize `max_x ∂Φ(x)` subject to
//! `Φ ≥ 0` on `R_K` and `Φ* ≡ 1`.

use std::collections::BTreeMap;

use num::Signed;

use crate::certificates::FractionalKPartition;
use crate::error::{Error, Result};
use crate::graph::BoundedDegreeGraph;
use crate::lp::{LinearProgram, LpScalar, Relation};
use crate::rational::Rational;
use crate::subsets::{enumerate_k_subsets, KSubset};

#[derive(Debug, Clone)]
pub struct PartitionLpResult<T> {
    pub value: T,
    /// Positive-weight pieces of the optimizer.
    pub weights: Vec<(KSubset, T)>,
    pub pieces_considered: usize,
}

pub fn fractional_partition_lp<T: LpScalar>(
    g: &BoundedDegreeGraph,
    k: usize,
    cap: usize,
) -> Result<PartitionLpResult<T>> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptySubset);
    }
    let pieces = enumerate_k_subsets(g, k, cap)?;
    let s = pieces.len();
    let mut objective = vec![T::zero(); s + 1];
    objective[s] = T::one();
    let mut lp = LinearProgram::minimize(objective);
    let mut star: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
    let mut boundary: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
    for (j, a) in pieces.iter().enumerate() {
        for &x in a.vertices() {
            star[x].push((j, T::one()));
        }
        for x in g.inner_boundary(a.vertices())? {
            boundary[x].push((j, T::one()));
        }
    }
    for row in star {
        lp.add_row(row, Relation::Eq, T::one());
    }
    for mut row in boundary {
        row.push((s, -T::one()));
        lp.add_row(row, Relation::Le, T::zero());
    }
    let sol = lp.solve()?;
    let weights = pieces
        .into_iter()
        .zip(sol.x.iter().take(s).cloned())
        .filter(|(_, w)| w.is_positive_ish())
        .collect();
    Ok(PartitionLpResult {
        value: sol.x[s].clone(),
        weights,
        pieces_considered: s,
    })
}

/// The optimizer of an exact run as a validated certificate.
pub fn optimal_partition(
    g: &BoundedDegreeGraph,
    k: usize,
    res: &PartitionLpResult<Rational>,
) -> Result<FractionalKPartition> {
    let support: BTreeMap<KSubset, Rational> = res
        .weights
        .iter()
        .filter(|(_, w)| w.is_positive())
        .map(|(a, w)| (a.clone(), w.clone()))
        .collect();
    FractionalKPartition::new(
        g,
        k,
        support.into_iter().map(|(a, w)| (a.vertices().to_vec(), w)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::boundary_operator;
    use crate::rational::{int, ratio};
    use crate::subsets::DEFAULT_CAP;

    fn cycle(n: usize) -> BoundedDegreeGraph {
        BoundedDegreeGraph::build(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn whole_graph_piece_gives_zero() {
        let g = cycle(5);
        let r = fractional_partition_lp::<Rational>(&g, 5, DEFAULT_CAP).unwrap();
        assert_eq!(r.value, int(0));
    }

    #[test]
    fn cycle_six_k2_is_one() {
        let g = cycle(6);
        let r = fractional_partition_lp::<Rational>(&g, 2, DEFAULT_CAP).unwrap();
        assert_eq!(r.value, int(1));
    }

    #[test]
    fn cycle_twelve_k4_at_most_half() {
        let g = cycle(12);
        let r = fractional_partition_lp::<Rational>(&g, 4, DEFAULT_CAP).unwrap();
        assert!(r.value <= ratio(1, 2));
        let phi = optimal_partition(&g, 4, &r).unwrap();
        assert_eq!(boundary_operator(&g, &phi, None).unwrap().max, r.value);
        let f = fractional_partition_lp::<f64>(&g, 4, DEFAULT_CAP).unwrap();
        assert!((f.value - crate::rational::to_f64(&r.value)).abs() < 1e-9);
    }
}
