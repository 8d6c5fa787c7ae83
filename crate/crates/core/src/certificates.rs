//! Certificate types for the hyperfiniteness and amenability notions, and
//! validators that compute each certificate's exact quality parameters.
//!
//! Validators never answer pass/fail. They return the measured `(ε, K)` or
//! `(ε, R)` so that callers can compare against whatever threshold they hold.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::BoundedDegreeGraph;
use crate::measure::{check_len, VertexMeasure};
use crate::rational::{self, Rational};
use crate::subsets::KSubset;

/// A removed vertex set `T` together with the component bound `K` it claims.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KSeparator {
    k: usize,
    removed: Vec<usize>,
}

impl KSeparator {
    pub fn new(k: usize, mut removed: Vec<usize>) -> Self {
        removed.sort_unstable();
        removed.dedup();
        KSeparator { k, removed }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn removed(&self) -> &[usize] {
        &self.removed
    }

    pub fn contains(&self, x: usize) -> bool {
        self.removed.binary_search(&x).is_ok()
    }

    /// Largest component of `G[V \ T]`.
    pub fn max_component(&self, g: &BoundedDegreeGraph) -> Result<usize> {
        Ok(g
            .components_without(&self.removed)?
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0))
    }

    pub fn is_valid(&self, g: &BoundedDegreeGraph) -> Result<bool> {
        Ok(self.max_component(g)? <= self.k)
    }
}

/// Exact quality of a separator: normalized mass of `T` and the largest
/// remaining component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorQuality {
    pub mass: Rational,
    pub max_component: usize,
}

impl SeparatorQuality {
    pub fn is_valid_for(&self, eps: &Rational, k: usize) -> bool {
        &self.mass <= eps && self.max_component <= k
    }
}

pub fn separator_quality(
    g: &BoundedDegreeGraph,
    mu: &VertexMeasure,
    sep: &KSeparator,
) -> Result<SeparatorQuality> {
    check_len(g, mu)?;
    let max_component = sep.max_component(g)?;
    let mass = mu.mass(sep.removed()) / mu.total();
    Ok(SeparatorQuality {
        mass,
        max_component,
    })
}

/// Finitely supported probability distribution over `K`-separators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorDistribution {
    k: usize,
    atoms: Vec<(KSeparator, Rational)>,
}

impl SeparatorDistribution {
    /// Checks that probabilities are positive and sum to one. Atoms with the
    /// same vertex set are merged.
    pub fn new(k: usize, atoms: Vec<(Vec<usize>, Rational)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidCertificate("distribution has no atoms".into()));
        }
        let mut merged: BTreeMap<KSeparator, Rational> = BTreeMap::new();
        for (t, p) in atoms {
            if !p.is_positive() {
                return Err(Error::InvalidCertificate(format!(
                    "atom probability {} is not positive",
                    rational::format(&p)
                )));
            }
            *merged.entry(KSeparator::new(k, t)).or_insert_with(Rational::zero) += p;
        }
        let total = rational::sum(merged.values());
        if !total.is_one() {
            return Err(Error::InvalidCertificate(format!(
                "atom probabilities sum to {}, not 1",
                rational::format(&total)
            )));
        }
        Ok(SeparatorDistribution {
            k,
            atoms: merged.into_iter().collect(),
        })
    }

    pub fn single(sep: KSeparator) -> Self {
        SeparatorDistribution {
            k: sep.k,
            atoms: vec![(sep, Rational::one())],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn atoms(&self) -> &[(KSeparator, Rational)] {
        &self.atoms
    }

    /// Every atom must be a valid `K`-separator of `g`.
    pub fn validate(&self, g: &BoundedDegreeGraph) -> Result<()> {
        for (sep, _) in &self.atoms {
            let m = sep.max_component(g)?;
            if m > self.k {
                return Err(Error::ComponentTooLarge { size: m, k: self.k });
            }
        }
        Ok(())
    }
}

/// Per-vertex values with their maximum and a threshold level set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelProfile {
    pub values: Vec<Rational>,
    pub max: Rational,
    /// `{x : value(x) >= threshold}` when a threshold was supplied.
    pub level_set: Vec<usize>,
}

impl LevelProfile {
    fn new(values: Vec<Rational>, threshold: Option<&Rational>) -> Self {
        let max = values.iter().max().cloned().unwrap_or_else(Rational::zero);
        let level_set = match threshold {
            Some(t) => (0..values.len()).filter(|&x| &values[x] >= t).collect(),
            None => Vec::new(),
        };
        LevelProfile {
            values,
            max,
            level_set,
        }
    }
}

/// Barycenter `c(x) = Σ_i ν_i 1[x ∈ Y_i]` of a separator distribution, with
/// the level set `S_{ν,ε}` for the supplied threshold.
pub fn coverage(n: usize, nu: &SeparatorDistribution, threshold: Option<&Rational>) -> Result<LevelProfile> {
    let mut c = vec![Rational::zero(); n];
    for (sep, p) in nu.atoms() {
        for &x in sep.removed() {
            if x >= n {
                return Err(Error::OutOfRange { vertex: x, n });
            }
            c[x] += p;
        }
    }
    Ok(LevelProfile::new(c, threshold))
}

/// Nonnegative weights on connected subsets of size at most `K` whose
/// vertex sums `Φ*(x)` are all one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalKPartition {
    k: usize,
    support: BTreeMap<KSubset, Rational>,
}

impl FractionalKPartition {
    pub fn new(
        g: &BoundedDegreeGraph,
        k: usize,
        pieces: impl IntoIterator<Item = (Vec<usize>, Rational)>,
    ) -> Result<Self> {
        let mut support: BTreeMap<KSubset, Rational> = BTreeMap::new();
        for (a, w) in pieces {
            if w.is_negative() {
                return Err(Error::InvalidCertificate(format!(
                    "negative weight {} on {a:?}",
                    rational::format(&w)
                )));
            }
            let a = KSubset::new(g, a)?;
            if a.len() > k {
                return Err(Error::ComponentTooLarge { size: a.len(), k });
            }
            *support.entry(a).or_insert_with(Rational::zero) += w;
        }
        support.retain(|_, w| !w.is_zero());
        let p = FractionalKPartition { k, support };
        let star = p.star(g.n())?;
        if let Some(x) = star.iter().position(|s| !s.is_one()) {
            return Err(Error::InvalidCertificate(format!(
                "Φ*({x}) = {}, expected 1",
                rational::format(&star[x])
            )));
        }
        Ok(p)
    }

    pub(crate) fn from_support_unchecked(k: usize, support: BTreeMap<KSubset, Rational>) -> Self {
        FractionalKPartition { k, support }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn support(&self) -> &BTreeMap<KSubset, Rational> {
        &self.support
    }

    pub fn weight(&self, a: &KSubset) -> Rational {
        self.support.get(a).cloned().unwrap_or_else(Rational::zero)
    }

    /// `Φ*(x) = Σ_{A ∋ x} Φ(A)`.
    pub fn star(&self, n: usize) -> Result<Vec<Rational>> {
        let mut s = vec![Rational::zero(); n];
        for (a, w) in &self.support {
            for &x in a.vertices() {
                if x >= n {
                    return Err(Error::OutOfRange { vertex: x, n });
                }
                s[x] += w;
            }
        }
        Ok(s)
    }
}

/// `∂Φ(x) = Σ_{A : x ∈ ∂A} Φ(A)` with `∂A` the inner boundary, plus the
/// level set `Q_{Φ,ε}`.
pub fn boundary_operator(
    g: &BoundedDegreeGraph,
    phi: &FractionalKPartition,
    threshold: Option<&Rational>,
) -> Result<LevelProfile> {
    let mut b = vec![Rational::zero(); g.n()];
    for (a, w) in phi.support() {
        for x in g.inner_boundary(a.vertices())? {
            b[x] += w;
        }
    }
    Ok(LevelProfile::new(b, threshold))
}

/// `Φ_Y`: weight one on each removed singleton and on each component of `G[V \ Y]`.
pub fn separator_to_partition(g: &BoundedDegreeGraph, sep: &KSeparator) -> Result<FractionalKPartition> {
    let mut support = BTreeMap::new();
    for &y in sep.removed() {
        g.check_vertex(y)?;
        support.insert(KSubset::from_sorted_unchecked(vec![y]), Rational::one());
    }
    for comp in g.components_without(sep.removed())? {
        if comp.len() > sep.k() {
            return Err(Error::ComponentTooLarge {
                size: comp.len(),
                k: sep.k(),
            });
        }
        support.insert(KSubset::from_sorted_unchecked(comp), Rational::one());
    }
    Ok(FractionalKPartition::from_support_unchecked(sep.k(), support))
}

/// `Φ_t = Σ_i t_i Φ_{Y_i}`.
pub fn mix_partitions(g: &BoundedDegreeGraph, nu: &SeparatorDistribution) -> Result<FractionalKPartition> {
    let mut support: BTreeMap<KSubset, Rational> = BTreeMap::new();
    for (sep, t) in nu.atoms() {
        for (a, w) in separator_to_partition(g, sep)?.support {
            *support.entry(a).or_insert_with(Rational::zero) += w * t;
        }
    }
    Ok(FractionalKPartition::from_support_unchecked(nu.k(), support))
}

/// Per-vertex probability measures with bounded support radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReiterFamily {
    radius: usize,
    rows: Vec<BTreeMap<usize, Rational>>,
}

impl ReiterFamily {
    /// Zero entries are dropped; validation against a graph happens in
    /// [`reiter_defect`].
    pub fn new(radius: usize, rows: Vec<BTreeMap<usize, Rational>>) -> Self {
        let rows = rows
            .into_iter()
            .map(|mut r| {
                r.retain(|_, v| !v.is_zero());
                r
            })
            .collect();
        ReiterFamily { radius, rows }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn rows(&self) -> &[BTreeMap<usize, Rational>] {
        &self.rows
    }

    pub fn row(&self, x: usize) -> &BTreeMap<usize, Rational> {
        &self.rows[x]
    }

    /// `p(x)` uniform on `B_r(x)` for every `x`.
    pub fn window(g: &BoundedDegreeGraph, r: usize) -> Self {
        let rows = (0..g.n())
            .map(|x| {
                let ball = g.ball(x, r).expect("vertex in range");
                let w = rational::ratio(1, ball.len() as i64);
                ball.into_iter().map(|z| (z, w.clone())).collect()
            })
            .collect();
        ReiterFamily { radius: r, rows }
    }

    /// `p(x) = δ_x`.
    pub fn dirac(n: usize) -> Self {
        let rows = (0..n)
            .map(|x| BTreeMap::from([(x, Rational::one())]))
            .collect();
        ReiterFamily { radius: 0, rows }
    }
}

pub fn l1_distance(p: &BTreeMap<usize, Rational>, q: &BTreeMap<usize, Rational>) -> Rational {
    let mut d = Rational::zero();
    for (z, a) in p {
        match q.get(z) {
            Some(b) => d += (a - b).abs(),
            None => d += a.abs(),
        }
    }
    for (z, b) in q {
        if !p.contains_key(z) {
            d += b.abs();
        }
    }
    d
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReiterDefect {
    /// `max_x Σ_{y ~ x} ||p(x) - p(y)||_1`.
    pub epsilon: Rational,
    /// Smallest radius containing every support.
    pub radius: usize,
    pub per_vertex: Vec<Rational>,
}

pub fn reiter_defect(g: &BoundedDegreeGraph, fam: &ReiterFamily) -> Result<ReiterDefect> {
    if fam.rows.len() != g.n() {
        return Err(Error::InvalidCertificate(format!(
            "family has {} rows, graph has {} vertices",
            fam.rows.len(),
            g.n()
        )));
    }
    let mut radius = 0;
    for (x, row) in fam.rows.iter().enumerate() {
        if let Some((_, v)) = row.iter().find(|(_, v)| v.is_negative()) {
            return Err(Error::NotProbability {
                vertex: x,
                reason: format!("negative entry {}", rational::format(v)),
            });
        }
        let total = rational::sum(row.values());
        if !total.is_one() {
            return Err(Error::NotProbability {
                vertex: x,
                reason: format!("entries sum to {}", rational::format(&total)),
            });
        }
        let dist = g.distances_from(x);
        for &z in row.keys() {
            g.check_vertex(z)?;
            match dist[z] {
                Some(d) if d <= fam.radius => radius = radius.max(d),
                _ => {
                    return Err(Error::SupportViolation {
                        vertex: x,
                        target: z,
                        radius: fam.radius,
                    })
                }
            }
        }
    }
    let per_vertex: Vec<Rational> = (0..g.n())
        .map(|x| {
            g.neighbors(x)
                .iter()
                .fold(Rational::zero(), |acc, &y| acc + l1_distance(&fam.rows[x], &fam.rows[y]))
        })
        .collect();
    let epsilon = per_vertex.iter().max().cloned().unwrap_or_else(Rational::zero);
    Ok(ReiterDefect {
        epsilon,
        radius,
        per_vertex,
    })
}

/// Nonnegative vertex weights with at least one positive entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFunction {
    values: Vec<Rational>,
}

impl WeightFunction {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| v.is_negative()) {
            return Err(Error::InvalidCertificate(format!(
                "negative weight {}",
                rational::format(v)
            )));
        }
        if values.iter().all(Zero::is_zero) {
            return Err(Error::ZeroWeight);
        }
        Ok(WeightFunction { values })
    }

    pub fn uniform(n: usize) -> Self {
        WeightFunction {
            values: vec![Rational::one(); n],
        }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> Rational {
        rational::sum(&self.values)
    }

    pub fn of(&self, set: &[usize]) -> Rational {
        set.iter().fold(Rational::zero(), |acc, &x| acc + &self.values[x])
    }

    /// Rescaled to total one.
    pub fn normalized(&self) -> Self {
        let t = self.total();
        WeightFunction {
            values: self.values.iter().map(|v| v / &t).collect(),
        }
    }
}
