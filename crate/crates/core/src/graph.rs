//! Finite simple graphs with a degree bound, plus the metric and
//! combinatorial utilities every certificate needs: balls, boundaries,
//! induced components and distance-power colorings.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite simple undirected graph on vertices `0..n`.
///
/// Adjacency lists are sorted and deduplicated; `max_degree` is the true
/// maximum degree. Values are immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct BoundedDegreeGraph {
    adjacency: Vec<Vec<usize>>,
    max_degree: usize,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphRepr> for BoundedDegreeGraph {
    type Error = Error;
    fn try_from(r: GraphRepr) -> Result<Self> {
        BoundedDegreeGraph::build(r.n, r.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<BoundedDegreeGraph> for GraphRepr {
    fn from(g: BoundedDegreeGraph) -> Self {
        GraphRepr {
            n: g.n(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl BoundedDegreeGraph {
    pub fn build(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::OutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Ok(BoundedDegreeGraph {
            adjacency,
            max_degree,
        })
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    /// Maximum degree `d`.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adjacency[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.adjacency[x].len()
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.adjacency[x].binary_search(&y).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn check_vertex(&self, x: usize) -> Result<()> {
        if x < self.n() {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                vertex: x,
                n: self.n(),
            })
        }
    }

    /// Membership mask of a vertex list; rejects out-of-range ids.
    pub fn mask(&self, set: &[usize]) -> Result<Vec<bool>> {
        let mut m = vec![false; self.n()];
        for &x in set {
            self.check_vertex(x)?;
            m[x] = true;
        }
        Ok(m)
    }

    /// BFS distances from `x`; `None` for unreachable vertices.
    pub fn distances_from(&self, x: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[x] = Some(0);
        let mut queue = VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in self.neighbors(u) {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Vertices within distance `r` of `x`, sorted.
    pub fn ball(&self, x: usize, r: usize) -> Result<Vec<usize>> {
        self.check_vertex(x)?;
        let mut seen = vec![false; self.n()];
        seen[x] = true;
        let mut out = vec![x];
        let mut frontier = vec![x];
        for _ in 0..r {
            let mut next = Vec::new();
            for &u in &frontier {
                for &v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        next.push(v);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            out.extend_from_slice(&next);
            frontier = next;
        }
        out.sort_unstable();
        Ok(out)
    }

    /// `N_r`: the largest number of vertices in any radius-`r` ball.
    pub fn max_ball_size(&self, r: usize) -> usize {
        (0..self.n())
            .map(|x| self.ball(x, r).map(|b| b.len()).unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Outer boundary of `a` relative to `b`: vertices of `b \ a` with a neighbour in `a`.
    pub fn outer_boundary(&self, a: &[usize], b: &[usize]) -> Result<Vec<usize>> {
        let in_a = self.mask(a)?;
        let in_b = self.mask(b)?;
        if let Some(&x) = a.iter().find(|&&x| !in_b[x]) {
            return Err(Error::NotSubset(x));
        }
        Ok(self.outer_boundary_masked(&in_a, &in_b))
    }

    pub(crate) fn outer_boundary_masked(&self, in_a: &[bool], in_b: &[bool]) -> Vec<usize> {
        (0..self.n())
            .filter(|&x| in_b[x] && !in_a[x] && self.neighbors(x).iter().any(|&y| in_a[y]))
            .collect()
    }

    /// Inner boundary of `a`: members of `a` with a neighbour outside `a`.
    pub fn inner_boundary(&self, a: &[usize]) -> Result<Vec<usize>> {
        let in_a = self.mask(a)?;
        let mut out: Vec<usize> = a
            .iter()
            .copied()
            .filter(|&x| self.neighbors(x).iter().any(|&y| !in_a[y]))
            .collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Connected components of the subgraph induced on `keep`, each sorted,
    /// ordered by smallest vertex.
    pub fn components_masked(&self, keep: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut comps = Vec::new();
        for s in 0..self.n() {
            if !keep[s] || seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &v in self.neighbors(u) {
                    if keep[v] && !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn components_of(&self, set: &[usize]) -> Result<Vec<Vec<usize>>> {
        Ok(self.components_masked(&self.mask(set)?))
    }

    /// Components of `G[V \ removed]`.
    pub fn components_without(&self, removed: &[usize]) -> Result<Vec<Vec<usize>>> {
        let keep: Vec<bool> = self.mask(removed)?.into_iter().map(|r| !r).collect();
        Ok(self.components_masked(&keep))
    }

    pub fn is_connected_set(&self, set: &[usize]) -> Result<bool> {
        Ok(set.is_empty() || self.components_of(set)?.len() == 1)
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.components_masked(&vec![true; self.n()]).len() == 1
    }

    /// Induced subgraph on `set` (relabelled `0..set.len()` in the order given).
    pub fn induced(&self, set: &[usize]) -> Result<BoundedDegreeGraph> {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &x) in set.iter().enumerate() {
            self.check_vertex(x)?;
            index[x] = i;
        }
        let edges = set.iter().enumerate().flat_map(|(i, &x)| {
            let index = &index;
            self.neighbors(x)
                .iter()
                .filter(move |&&y| index[y] != usize::MAX && index[y] > i)
                .map(move |&y| (i, index[y]))
        });
        BoundedDegreeGraph::build(set.len(), edges.collect::<Vec<_>>())
    }

    /// Greedy coloring of the `r`-th power: distinct colors for distinct
    /// vertices at distance at most `r`. Uses at most `N_r` colors.
    pub fn distance_power_coloring(&self, r: usize) -> Vec<usize> {
        let n = self.n();
        let mut color = vec![usize::MAX; n];
        let mut used = Vec::new();
        for x in 0..n {
            used.clear();
            if r > 0 {
                for y in self.ball(x, r).expect("vertex in range") {
                    if y != x && color[y] != usize::MAX {
                        used.push(color[y]);
                    }
                }
            }
            used.sort_unstable();
            used.dedup();
            let c = used
                .iter()
                .enumerate()
                .find(|&(i, &c)| i != c)
                .map(|(i, _)| i)
                .unwrap_or(used.len());
            color[x] = c;
        }
        color
    }

    /// Eccentricity-based diameter of a connected graph; `None` if disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for x in 0..self.n() {
            for d in self.distances_from(x) {
                best = best.max(d?);
            }
        }
        Some(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> BoundedDegreeGraph {
        BoundedDegreeGraph::build(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn grid(rows: usize, cols: usize) -> BoundedDegreeGraph {
        let mut e = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    e.push((v, v + 1));
                }
                if r + 1 < rows {
                    e.push((v, v + cols));
                }
            }
        }
        BoundedDegreeGraph::build(rows * cols, e).unwrap()
    }

    #[test]
    fn build_normalizes() {
        let g = BoundedDegreeGraph::build(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.max_degree(), 2);
        let single = BoundedDegreeGraph::build(1, []).unwrap();
        assert_eq!((single.n(), single.max_degree()), (1, 0));
        let dup = BoundedDegreeGraph::build(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(dup.edge_count(), 1);
        assert_eq!(dup.neighbors(0), &[1]);
    }

    #[test]
    fn build_rejects_bad_edges() {
        assert_eq!(
            BoundedDegreeGraph::build(2, [(0, 2)]),
            Err(Error::OutOfRange { vertex: 2, n: 2 })
        );
        assert_eq!(BoundedDegreeGraph::build(2, [(1, 1)]), Err(Error::SelfLoop(1)));
    }

    #[test]
    fn balls() {
        let c6 = cycle(6);
        assert_eq!(c6.ball(0, 1).unwrap(), vec![0, 1, 5]);
        assert_eq!(c6.ball(3, 0).unwrap(), vec![3]);
        assert!(c6.ball(6, 1).is_err());
        assert_eq!(c6.max_ball_size(2), 5);
    }

    #[test]
    fn boundaries() {
        let c6 = cycle(6);
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(c6.outer_boundary(&[1, 2], &all).unwrap(), vec![0, 3]);
        assert!(c6.outer_boundary(&[1, 2], &[1, 2]).unwrap().is_empty());
        assert_eq!(c6.outer_boundary(&[1, 2], &[2, 3]), Err(Error::NotSubset(1)));
        let g = grid(3, 3);
        let all9: Vec<usize> = (0..9).collect();
        assert_eq!(g.outer_boundary(&[4], &all9).unwrap(), vec![1, 3, 5, 7]);

        assert_eq!(c6.inner_boundary(&[1, 2, 3]).unwrap(), vec![1, 3]);
        assert!(c6.inner_boundary(&all).unwrap().is_empty());
        assert_eq!(c6.inner_boundary(&[4]).unwrap(), vec![4]);
    }

    #[test]
    fn coloring_separates_close_vertices() {
        let g = grid(4, 4);
        let phi = g.distance_power_coloring(2);
        for x in 0..16 {
            let d = g.distances_from(x);
            for y in 0..16 {
                if x != y && d[y].unwrap() <= 2 {
                    assert_ne!(phi[x], phi[y]);
                }
            }
        }
        assert!(phi.iter().max().unwrap() + 1 <= g.max_ball_size(2));
        assert!(cycle(5).distance_power_coloring(0).iter().all(|&c| c == 0));
        let c6 = cycle(6).distance_power_coloring(1);
        for i in 0..6 {
            assert_ne!(c6[i], c6[(i + 1) % 6]);
        }
    }

    #[test]
    fn components_and_induced() {
        let c6 = cycle(6);
        assert_eq!(
            c6.components_without(&[0, 3]).unwrap(),
            vec![vec![1, 2], vec![4, 5]]
        );
        let p = c6.induced(&[2, 3, 4]).unwrap();
        assert_eq!(p.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(c6.diameter(), Some(3));
    }

    #[test]
    fn json_round_trip() {
        let g = grid(2, 3);
        let s = serde_json::to_string(&g).unwrap();
        let back: BoundedDegreeGraph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<BoundedDegreeGraph>(r#"{"n":2,"edges":[[0,0]]}"#).is_err());
    }
}
