//! The space `R_K` of connected vertex subsets with at most `K` vertices.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::BoundedDegreeGraph;

pub const DEFAULT_CAP: usize = 5_000_000;

/// A connected vertex subset, stored as its sorted vertex list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KSubset(Vec<usize>);

impl KSubset {
    /// Canonicalizes `vertices` and checks that they induce a connected subgraph.
    pub fn new(g: &BoundedDegreeGraph, mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.is_empty() {
            return Err(Error::EmptySubset);
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCertificate(format!(
                "duplicate vertex in subset {vertices:?}"
            )));
        }
        if !g.is_connected_set(&vertices)? {
            return Err(Error::InvalidCertificate(format!(
                "subset {vertices:?} is not connected"
            )));
        }
        Ok(KSubset(vertices))
    }

    pub(crate) fn from_sorted_unchecked(vertices: Vec<usize>) -> Self {
        KSubset(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }
}

impl fmt::Display for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// All connected subsets of size at most `k`, each once, in lexicographic
/// order of their sorted vertex lists.
///
/// Fails with `ExplosionCap` as soon as more than `cap` subsets are found.
pub fn enumerate_k_subsets(g: &BoundedDegreeGraph, k: usize, cap: usize) -> Result<Vec<KSubset>> {
    if k == 0 {
        return Err(Error::BadParams("K must be at least 1".into()));
    }
    let mut out = Vec::new();
    let mut state = Esu {
        g,
        k,
        cap,
        touch: vec![0u32; g.n()],
        sub: Vec::with_capacity(k),
        out: &mut out,
    };
    for root in 0..g.n() {
        let ext: Vec<usize> = g.neighbors(root).iter().copied().filter(|&u| u > root).collect();
        state.push(root);
        let r = state.extend(ext, root);
        state.pop(root);
        r?;
    }
    out.sort_unstable();
    Ok(out)
}

/// Enumeration in the style of ESU: every connected set is generated exactly
/// once from its minimum vertex by only ever adding exclusive neighbours.
struct Esu<'a> {
    g: &'a BoundedDegreeGraph,
    k: usize,
    cap: usize,
    // number of sub vertices in the closed neighbourhood of each vertex
    touch: Vec<u32>,
    sub: Vec<usize>,
    out: &'a mut Vec<KSubset>,
}

impl Esu<'_> {
    fn push(&mut self, v: usize) {
        self.sub.push(v);
        self.touch[v] += 1;
        for &u in self.g.neighbors(v) {
            self.touch[u] += 1;
        }
    }

    fn pop(&mut self, v: usize) {
        self.sub.pop();
        self.touch[v] -= 1;
        for &u in self.g.neighbors(v) {
            self.touch[u] -= 1;
        }
    }

    fn extend(&mut self, mut ext: Vec<usize>, root: usize) -> Result<()> {
        if self.out.len() >= self.cap {
            return Err(Error::ExplosionCap { cap: self.cap });
        }
        let mut sorted = self.sub.clone();
        sorted.sort_unstable();
        self.out.push(KSubset(sorted));
        if self.sub.len() == self.k {
            return Ok(());
        }
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            next.extend(
                self.g
                    .neighbors(w)
                    .iter()
                    .copied()
                    .filter(|&u| u > root && self.touch[u] == 0),
            );
            self.push(w);
            let r = self.extend(next, root);
            self.pop(w);
            r?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> BoundedDegreeGraph {
        BoundedDegreeGraph::build(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn cycle_four_pairs() {
        let s = enumerate_k_subsets(&cycle(4), 2, DEFAULT_CAP).unwrap();
        assert_eq!(s.len(), 8);
        assert_eq!(s[0].vertices(), &[0]);
        assert_eq!(s[1].vertices(), &[0, 1]);
    }

    #[test]
    fn singletons_for_k1() {
        let s = enumerate_k_subsets(&cycle(7), 1, DEFAULT_CAP).unwrap();
        assert_eq!(s.len(), 7);
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            enumerate_k_subsets(&cycle(7), 3, 10),
            Err(Error::ExplosionCap { cap: 10 })
        );
        assert!(enumerate_k_subsets(&cycle(3), 0, 10).is_err());
    }

    #[test]
    fn ksubset_validation() {
        let c = cycle(6);
        assert_eq!(KSubset::new(&c, vec![2, 1]).unwrap().vertices(), &[1, 2]);
        assert!(KSubset::new(&c, vec![0, 2]).is_err());
        assert!(KSubset::new(&c, vec![1, 1]).is_err());
        assert!(KSubset::new(&c, vec![]).is_err());
    }
}
