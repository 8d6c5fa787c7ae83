//! From uniform hyperfiniteness to weighted hyperfiniteness by bucketing
//! the weight function on a geometric scale.
//!
//! With `c = ε/(3Md)` and `L = ⌈3/ε⌉`, vertices fall into buckets
//! `B_i = {c^{i+1} <= W < c^i}` (after rescaling `W` to maximum one). The
//! lightest residue class mod `L` is removed; the rest splits into blocks
//! `C_i` of `L - 1` consecutive buckets. Removing the lighter neighbours
//! `F_i` of each block isolates the blocks, within a block weights differ by
//! less than `c^{-(L-1)}`, and a `μ`-separator of mass `ε' = (ε/3) c^L` is
//! then a `W`-separator of relative mass at most `ε/3`.

use std::collections::{BTreeMap, BTreeSet};

use num::{Integer, One, ToPrimitive, Zero};

use super::report::{Stage, TransformReport};
use crate::certificates::{KSeparator, WeightFunction};
use crate::error::{Error, Result};
use crate::graph::BoundedDegreeGraph;
use crate::measure::{bounded_type_constant, check_len, VertexMeasure};
use crate::rational::{self, Rational};
use crate::solvers::separator::{min_weight_separator, SeparatorMode};

/// Uniform hyperfiniteness oracle, queried on the components that remain
/// after bucketing. Works in the local ids of the induced subgraph.
pub trait UhOracle {
    /// A separator of `g` whose `μ`-mass is at most `eps_prime · μ(V)`.
    fn separate(&self, g: &BoundedDegreeGraph, mu: &VertexMeasure, eps_prime: &Rational) -> Result<KSeparator>;
}

/// Min-`μ`-mass separators from the separator solver.
///
/// With a fixed `K` the answer is the optimum at that `K`, which may miss
/// `ε'`. The adaptive variant returns the optimum at the smallest `K` that
/// meets `ε'`; `K` equal to the component size always does.
#[derive(Debug, Clone, Copy)]
pub struct SeparatorUhOracle {
    pub k: Option<usize>,
    pub mode: SeparatorMode,
}

impl SeparatorUhOracle {
    pub fn fixed(k: usize) -> Self {
        SeparatorUhOracle {
            k: Some(k),
            mode: SeparatorMode::Exact,
        }
    }

    pub fn adaptive() -> Self {
        SeparatorUhOracle {
            k: None,
            mode: SeparatorMode::Exact,
        }
    }

    pub fn greedy_adaptive() -> Self {
        SeparatorUhOracle {
            k: None,
            mode: SeparatorMode::Greedy,
        }
    }
}

impl UhOracle for SeparatorUhOracle {
    fn separate(&self, g: &BoundedDegreeGraph, mu: &VertexMeasure, eps_prime: &Rational) -> Result<KSeparator> {
        let w = mu.weights();
        let meets = |sep: &KSeparator| mu.mass(sep.removed()) <= eps_prime * mu.total();
        let n = g.n().max(1);
        if let Some(k) = self.k {
            return min_weight_separator(g, w, k, self.mode);
        }
        match self.mode {
            SeparatorMode::Exact => {
                // the optimum is monotone in K, so binary search the first K that meets ε'
                // K = n always meets it with the empty separator
                let (mut lo, mut hi) = (1, n);
                let mut best = KSeparator::new(n, Vec::new());
                while lo < hi {
                    let mid = (lo + hi) / 2;
                    let sep = min_weight_separator(g, w, mid, SeparatorMode::Exact)?;
                    if meets(&sep) {
                        best = sep;
                        hi = mid;
                    } else {
                        lo = mid + 1;
                    }
                }
                Ok(best)
            }
            mode => {
                for k in 1..n {
                    let sep = min_weight_separator(g, w, k, mode)?;
                    if meets(&sep) {
                        return Ok(sep);
                    }
                }
                Ok(KSeparator::new(n, Vec::new()))
            }
        }
    }
}

/// Every intermediate quantity of one bucketing run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BucketRun {
    /// The separator `Z ∪ Z'`.
    pub separator: KSeparator,
    pub m: Rational,
    pub c: Rational,
    pub l: usize,
    pub eps_prime: Rational,
    /// Bucket index per vertex; `None` for zero weight.
    pub bucket: Vec<Option<i64>>,
    /// `W(B'_j)` for `j = 0..L`.
    pub residue_weights: Vec<Rational>,
    pub j_star: usize,
    /// Blocks `C_i` by index.
    pub blocks: BTreeMap<i64, Vec<usize>>,
    /// `F_i` by block index.
    pub f_sets: BTreeMap<i64, Vec<usize>>,
    /// `Z = F ∪ B'_{j*} ∪ {W = 0}`.
    pub z: Vec<usize>,
    /// Union of the oracle separators.
    pub z_prime: Vec<usize>,
    pub w_total: Rational,
    pub w_separator: Rational,
    pub report: TransformReport,
}

/// A separator `Y` with `W(Y) <= ε W(V)`, where `W(S) = Σ_{x∈S} W(x) μ(x)`.
pub fn uniform_to_weighted(
    g: &BoundedDegreeGraph,
    mu: &VertexMeasure,
    w: &WeightFunction,
    eps: &Rational,
    oracle: &dyn UhOracle,
) -> Result<BucketRun> {
    check_len(g, mu)?;
    if w.len() != g.n() {
        return Err(Error::BadParams(format!("{} weights for {} vertices", w.len(), g.n())));
    }
    if *eps <= Rational::zero() || *eps > Rational::one() {
        return Err(Error::BadParams("ε must lie in (0, 1]".into()));
    }
    let n = g.n();
    let m = match bounded_type_constant(g, mu) {
        Ok(m) => m,
        Err(Error::NoEdges) => Rational::one(),
        Err(e) => return Err(e),
    };
    let d = rational::int(g.max_degree().max(1) as i64);
    let three = rational::int(3);
    let c = eps / (&three * &m * &d);
    let l_rat = (&three / eps).ceil().to_integer();
    let l = l_rat.to_usize().ok_or_else(|| Error::BadParams("L too large".into()))?;
    let l_i = l as i64;
    let eps_prime = eps / &three * rational::pow(&c, l_i);

    let mass = |s: &[usize]| -> Rational { s.iter().map(|&x| &w.values()[x] * mu.weight(x)).sum() };
    let all: Vec<usize> = (0..n).collect();
    let w_total = mass(&all);
    if w_total.is_zero() {
        return Err(Error::ZeroWeight);
    }

    let wmax = w.values().iter().max().cloned().unwrap_or_else(Rational::zero);
    let bucket: Vec<Option<i64>> = w
        .values()
        .iter()
        .map(|v| {
            if v.is_zero() {
                return None;
            }
            let scaled = v / &wmax;
            let (mut i, mut lower) = (-1i64, Rational::one());
            while scaled < lower {
                i += 1;
                lower *= &c;
            }
            Some(i)
        })
        .collect();

    let mut residue_members: Vec<Vec<usize>> = vec![Vec::new(); l];
    for (x, b) in bucket.iter().enumerate() {
        if let Some(t) = b {
            residue_members[t.rem_euclid(l_i) as usize].push(x);
        }
    }
    let residue_weights: Vec<Rational> = residue_members.iter().map(|s| mass(s)).collect();
    let j_star = (0..l).min_by(|&a, &b| residue_weights[a].cmp(&residue_weights[b])).unwrap_or(0);
    if &residue_weights[j_star] * rational::int(l_i) > w_total {
        return Err(Error::BoundViolated("lightest residue class exceeds W(V)/L".into()));
    }

    let mut block_of: Vec<Option<i64>> = vec![None; n];
    let mut blocks: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (x, b) in bucket.iter().enumerate() {
        if let Some(t) = b {
            let (i, k) = (t - j_star as i64).div_mod_floor(&l_i);
            if k != 0 {
                block_of[x] = Some(i);
                blocks.entry(i).or_default().push(x);
            }
        }
    }

    let third = eps / &three;
    let mut f_sets: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (&i, members) in &blocks {
        let f: BTreeSet<usize> = members
            .iter()
            .flat_map(|&y| g.neighbors(y).iter().copied())
            .filter(|&x| block_of[x].is_some_and(|j| j > i))
            .collect();
        let f: Vec<usize> = f.into_iter().collect();
        if mass(&f) > &third * mass(members) {
            return Err(Error::BoundViolated(format!("W(F_{i}) exceeds (ε/3) W(C_{i})")));
        }
        f_sets.insert(i, f);
    }

    let mut z: BTreeSet<usize> = f_sets.values().flatten().copied().collect();
    z.extend(&residue_members[j_star]);
    z.extend((0..n).filter(|&x| bucket[x].is_none()));
    let z: Vec<usize> = z.into_iter().collect();

    let mut z_prime = Vec::new();
    let mut k_out = 1;
    for comp in g.components_without(&z)? {
        let first = block_of[comp[0]];
        if comp.iter().any(|&x| block_of[x] != first) {
            return Err(Error::BoundViolated("a remaining component spans two blocks".into()));
        }
        let h = g.induced(&comp)?;
        let local = mu.restriction(&comp);
        let sep = oracle.separate(&h, &local, &eps_prime)?;
        let violation = |reason: String| Error::OracleViolation {
            subset_size: comp.len(),
            reason,
        };
        if local.mass(sep.removed()) > &eps_prime * local.total() {
            return Err(violation("separator mass exceeds ε'".into()));
        }
        let worst = sep.max_component(&h)?;
        if worst > sep.k() {
            return Err(violation(format!("component of size {worst} exceeds K = {}", sep.k())));
        }
        k_out = k_out.max(sep.k());
        z_prime.extend(sep.removed().iter().map(|&i| comp[i]));
    }
    z_prime.sort_unstable();

    let separator = KSeparator::new(k_out, z.iter().chain(&z_prime).copied().collect());
    let max_component = separator.max_component(g)?;
    if max_component > k_out {
        return Err(Error::ComponentTooLarge { size: max_component, k: k_out });
    }
    let w_separator = mass(separator.removed());
    if w_separator > eps * &w_total {
        return Err(Error::BoundViolated(format!(
            "W(Z ∪ Z') = {} exceeds ε W(V) = {}",
            rational::format(&w_separator),
            rational::format(&(eps * &w_total))
        )));
    }
    let report = TransformReport {
        stage: Stage::UniformToWeighted,
        eps_in: eps.clone(),
        k_in: k_out,
        eps_guaranteed: eps.clone(),
        eps_achieved: &w_separator / &w_total,
        k_out: max_component,
    };
    Ok(BucketRun {
        separator,
        m,
        c,
        l,
        eps_prime,
        bucket,
        residue_weights,
        j_star,
        blocks,
        f_sets,
        z,
        z_prime,
        w_total,
        w_separator,
        report,
    })
}
