use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::BoundedDegreeGraph;
use crate::rational::{self, Rational};

/// Strictly positive vertex weights with a cached total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMeasure {
    weights: Vec<Rational>,
    total: Rational,
}

impl VertexMeasure {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|w| !w.is_positive()) {
            return Err(Error::InvalidMeasure(format!(
                "weight of vertex {i} is {}, must be positive",
                rational::format(&weights[i])
            )));
        }
        let total = rational::sum(&weights);
        Ok(VertexMeasure { weights, total })
    }

    /// Counting measure (every vertex weight 1).
    pub fn uniform(n: usize) -> Self {
        VertexMeasure {
            weights: vec![Rational::one(); n],
            total: rational::int(n as i64),
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, x: usize) -> &Rational {
        &self.weights[x]
    }

    pub fn total(&self) -> &Rational {
        &self.total
    }

    pub fn mass(&self, set: &[usize]) -> Rational {
        set.iter()
            .fold(Rational::zero(), |acc, &x| acc + &self.weights[x])
    }

    pub fn mass_masked(&self, mask: &[bool]) -> Rational {
        self.weights
            .iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .fold(Rational::zero(), |acc, (w, _)| acc + w)
    }

    pub fn is_uniform(&self) -> bool {
        self.weights.windows(2).all(|w| w[0] == w[1])
    }

    /// Rescaled to total mass one.
    pub fn normalized(&self) -> Self {
        let weights = self.weights.iter().map(|w| w / &self.total).collect();
        VertexMeasure {
            weights,
            total: Rational::one(),
        }
    }

    /// `μ_A`: restriction to `a` rescaled by `1/μ(A)`. The result is indexed
    /// by position in `a`.
    pub fn normalized_restriction(&self, a: &[usize]) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::EmptySubset);
        }
        for &x in a {
            if x >= self.len() {
                return Err(Error::OutOfRange {
                    vertex: x,
                    n: self.len(),
                });
            }
        }
        let mass = self.mass(a);
        let weights = a.iter().map(|&x| &self.weights[x] / &mass).collect();
        Ok(VertexMeasure {
            weights,
            total: Rational::one(),
        })
    }

    /// Restriction to `a` without rescaling, indexed by position in `a`.
    pub fn restriction(&self, a: &[usize]) -> Self {
        let weights: Vec<Rational> = a.iter().map(|&x| self.weights[x].clone()).collect();
        let total = rational::sum(&weights);
        VertexMeasure { weights, total }
    }
}

/// Bounded-type constant `M`: the largest ratio `μ(y)/μ(x)` over ordered
/// adjacent pairs. Always at least one.
pub fn bounded_type_constant(g: &BoundedDegreeGraph, mu: &VertexMeasure) -> Result<Rational> {
    check_len(g, mu)?;
    g.edges()
        .flat_map(|(x, y)| {
            let (a, b) = (mu.weight(x), mu.weight(y));
            [a / b, b / a]
        })
        .max()
        .ok_or(Error::NoEdges)
}

pub(crate) fn check_len(g: &BoundedDegreeGraph, mu: &VertexMeasure) -> Result<()> {
    if g.n() != mu.len() {
        return Err(Error::InvalidMeasure(format!(
            "measure has {} entries, graph has {} vertices",
            mu.len(),
            g.n()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn restriction_rescales() {
        let u = VertexMeasure::uniform(6);
        let r = u.normalized_restriction(&[2, 4]).unwrap();
        assert_eq!(r.weights(), &[ratio(1, 2), ratio(1, 2)]);

        let mu = VertexMeasure::new(vec![ratio(1, 6), ratio(2, 6), ratio(3, 6)]).unwrap();
        let r = mu.normalized_restriction(&[1, 2]).unwrap();
        assert_eq!(r.weights(), &[ratio(2, 5), ratio(3, 5)]);
        assert_eq!(r.total(), &int(1));

        assert_eq!(mu.normalized_restriction(&[0, 1, 2]).unwrap(), mu);
        assert_eq!(mu.normalized_restriction(&[]), Err(Error::EmptySubset));
    }

    #[test]
    fn rejects_nonpositive_weights() {
        assert!(VertexMeasure::new(vec![int(1), int(0)]).is_err());
        assert!(VertexMeasure::new(vec![int(-1)]).is_err());
    }

    #[test]
    fn bounded_type() {
        let c = BoundedDegreeGraph::build(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert_eq!(bounded_type_constant(&c, &VertexMeasure::uniform(5)).unwrap(), int(1));
        let p = BoundedDegreeGraph::build(2, [(0, 1)]).unwrap();
        let mu = VertexMeasure::new(vec![ratio(1, 3), ratio(2, 3)]).unwrap();
        assert_eq!(bounded_type_constant(&p, &mu).unwrap(), int(2));
        let iso = BoundedDegreeGraph::build(2, []).unwrap();
        assert_eq!(
            bounded_type_constant(&iso, &VertexMeasure::uniform(2)),
            Err(Error::NoEdges)
        );
    }
}
