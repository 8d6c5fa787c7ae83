//! Brute-force oracles shared by the integration tests. Everything here
//! works on adjacency bitmasks and never calls into the solvers.

#![allow(dead_code)]

use std::collections::BTreeSet;

use hyperfinite::BoundedDegreeGraph;

pub fn adjacency(g: &BoundedDegreeGraph) -> Vec<u64> {
    assert!(g.n() <= 64);
    (0..g.n())
        .map(|x| g.neighbors(x).iter().fold(0u64, |m, &y| m | 1 << y))
        .collect()
}

pub fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Largest connected component of the graph restricted to `keep`.
pub fn max_component(adj: &[u64], keep: u64) -> usize {
    let mut left = keep;
    let mut best = 0;
    while left != 0 {
        let mut comp = left & left.wrapping_neg();
        loop {
            let grown = (0..adj.len())
                .filter(|&x| comp >> x & 1 == 1)
                .fold(comp, |m, x| m | adj[x])
                & keep;
            if grown == comp {
                break;
            }
            comp = grown;
        }
        best = best.max(comp.count_ones() as usize);
        left &= !comp;
    }
    best
}

/// Every vertex set whose removal leaves components of size at most `k`.
pub fn all_separators(g: &BoundedDegreeGraph, k: usize) -> Vec<u64> {
    let adj = adjacency(g);
    let n = g.n();
    assert!(n <= 24, "brute force over 2^{n} sets");
    (0..1u64 << n)
        .filter(|&y| max_component(&adj, full(n) & !y) <= k)
        .collect()
}

pub fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

pub fn mask_of(set: &[usize]) -> u64 {
    set.iter().fold(0, |m, &x| m | 1 << x)
}

fn canonical(n: usize, edges: &[(usize, usize)], perms: &[Vec<usize>]) -> u64 {
    perms
        .iter()
        .map(|p| {
            edges.iter().fold(0u64, |m, &(u, v)| {
                let (a, b) = (p[u].min(p[v]), p[u].max(p[v]));
                m | 1 << (a * n + b)
            })
        })
        .min()
        .unwrap_or(0)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// All connected graphs on `1..=max_n` vertices up to isomorphism. Every
/// connected graph has a vertex whose removal keeps it connected, so adding
/// one vertex with a nonempty neighbourhood to each smaller representative
/// reaches every isomorphism class; canonical forms remove duplicates.
pub fn connected_graphs(max_n: usize) -> Vec<BoundedDegreeGraph> {
    let mut out = vec![BoundedDegreeGraph::build(1, Vec::new()).unwrap()];
    let mut layer: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for n in 2..=max_n {
        let perms = permutations(n);
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for edges in &layer {
            for nbrs in 1u64..1 << (n - 1) {
                let mut e = edges.clone();
                e.extend(bits(nbrs).into_iter().map(|u| (u, n - 1)));
                if seen.insert(canonical(n, &e, &perms)) {
                    next.push(e);
                }
            }
        }
        out.extend(next.iter().map(|e| BoundedDegreeGraph::build(n, e.clone()).unwrap()));
        layer = next;
    }
    out
}

/// `|B_r(x)|` maximized over `x`, by breadth-first search.
pub fn max_ball(g: &BoundedDegreeGraph, r: usize) -> usize {
    (0..g.n())
        .map(|x| {
            let mut seen = vec![false; g.n()];
            seen[x] = true;
            let mut frontier = vec![x];
            let mut count = 1;
            for _ in 0..r {
                let mut next = Vec::new();
                for &v in &frontier {
                    for &u in g.neighbors(v) {
                        if !seen[u] {
                            seen[u] = true;
                            next.push(u);
                        }
                    }
                }
                count += next.len();
                frontier = next;
            }
            count
        })
        .max()
        .unwrap_or(0)
}

/// Components of `g` restricted to `set`, as vertex lists.
pub fn components(g: &BoundedDegreeGraph, set: &[usize]) -> Vec<Vec<usize>> {
    let inside: BTreeSet<usize> = set.iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &s in set {
        if !seen.insert(s) {
            continue;
        }
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            for &u in g.neighbors(comp[i]) {
                if inside.contains(&u) && seen.insert(u) {
                    comp.push(u);
                }
            }
            i += 1;
        }
        out.push(comp);
    }
    out
}
