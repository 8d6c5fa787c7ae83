//! The separator covering game.
//!
//! The separator player picks a `K`-separator `Y`, the weight player picks a
//! probability vector `W` on vertices, and the payoff is `W(Y)`. Its value
//! is simultaneously the best achievable maximum coverage of a separator
//! distribution and the largest `min_Y W(Y) / W(V)` over weights, which is
//! the finite form of the weighted versus strong hyperfiniteness duality.
//!
//! Only inclusion-minimal separators are needed: for nonnegative `W`,
//! shrinking a separator never increases its weight, and shrinking the atoms
//! of a distribution never increases coverage.

use num::Signed;

use super::bounds::SeparatorBounds;
use super::separator::{min_weight_separator_limited, minimal_separators, SeparatorMode, DEFAULT_EXACT_LIMIT};
use crate::certificates::{coverage, KSeparator, SeparatorDistribution, WeightFunction};
use crate::error::{Error, Result};
use crate::graph::BoundedDegreeGraph;
use crate::lp::{LinearProgram, LpScalar, Relation};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSolution {
    pub value: Rational,
    /// Min-max coverage distribution.
    pub primal: SeparatorDistribution,
    /// Max-min weights, normalized to total one.
    pub dual: WeightFunction,
    /// Number of minimal separators in the LP.
    pub columns: usize,
}

struct Master<T> {
    value: T,
    probabilities: Vec<T>,
    weights: Vec<T>,
}

/// `min t` s.t. coverage of every vertex `<= t`, probabilities sum to one.
fn solve_master<T: LpScalar>(n: usize, columns: &[KSeparator]) -> Result<Master<T>> {
    let s = columns.len();
    let mut objective = vec![T::zero(); s + 1];
    objective[s] = T::one();
    let mut lp = LinearProgram::minimize(objective);
    let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
    for (j, sep) in columns.iter().enumerate() {
        for &x in sep.removed() {
            rows[x].push((j, T::one()));
        }
    }
    for mut row in rows {
        row.push((s, -T::one()));
        lp.add_row(row, Relation::Le, T::zero());
    }
    lp.add_row((0..s).map(|j| (j, T::one())).collect(), Relation::Eq, T::one());
    let sol = lp.solve()?;
    let weights = sol.duals[..n].iter().map(|y| -y.clone()).collect();
    Ok(Master {
        value: sol.x[s].clone(),
        probabilities: sol.x[..s].to_vec(),
        weights,
    })
}

/// The master duals must be a probability vector under which every column
/// costs at least the value. A floating point solve that fails this is
/// redone in exact arithmetic.
fn solve_master_checked<T: LpScalar>(n: usize, columns: &[KSeparator]) -> Result<Master<T>> {
    if T::EXACT {
        return solve_master(n, columns);
    }
    if let Ok(m) = solve_master::<T>(n, columns) {
        let tol = 1e-7;
        let value = m.value.to_f64();
        let total: f64 = m.weights.iter().map(LpScalar::to_f64).sum();
        let consistent = m.weights.iter().all(|y| y.to_f64() >= -tol)
            && (total - 1.0).abs() <= tol
            && columns
                .iter()
                .all(|c| c.removed().iter().map(|&x| m.weights[x].to_f64()).sum::<f64>() >= value - tol);
        if consistent {
            return Ok(m);
        }
    }
    let exact = solve_master::<Rational>(n, columns)?;
    let conv = |v: &[Rational]| v.iter().map(T::from_rational).collect::<Vec<T>>();
    Ok(Master {
        value: T::from_rational(&exact.value),
        probabilities: conv(&exact.probabilities),
        weights: conv(&exact.weights),
    })
}

/// Exact game value by an LP over every inclusion-minimal separator.
pub fn separator_game_exact(g: &BoundedDegreeGraph, k: usize, cap: usize) -> Result<GameSolution> {
    if g.n() == 0 {
        return Err(Error::EmptySubset);
    }
    let columns = minimal_separators(g, k, cap)?;
    let master = solve_master::<Rational>(g.n(), &columns)?;
    let atoms: Vec<(Vec<usize>, Rational)> = columns
        .iter()
        .zip(&master.probabilities)
        .filter(|(_, p)| p.is_positive())
        .map(|(c, p)| (c.removed().to_vec(), p.clone()))
        .collect();
    let primal = SeparatorDistribution::new(k, atoms)?;
    let dual = match WeightFunction::new(master.weights) {
        Ok(w) => w.normalized(),
        Err(Error::ZeroWeight) => WeightFunction::uniform(g.n()).normalized(),
        Err(e) => return Err(e),
    };

    let max_cov = coverage(g.n(), &primal, None)?.max;
    let min_weight = columns
        .iter()
        .map(|c| dual.of(c.removed()))
        .min()
        .unwrap_or_else(|| rational::int(0));
    if max_cov != master.value || min_weight != master.value {
        return Err(Error::BoundViolated(format!(
            "duality check failed: value {}, primal coverage {}, dual minimum {}",
            rational::format(&master.value),
            rational::format(&max_cov),
            rational::format(&min_weight)
        )));
    }
    Ok(GameSolution {
        value: master.value,
        primal,
        dual,
        columns: columns.len(),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct ColumnGenerationOptions {
    pub best_response: SeparatorMode,
    pub max_iterations: usize,
    pub exact_limit: usize,
}

impl Default for ColumnGenerationOptions {
    fn default() -> Self {
        ColumnGenerationOptions {
            best_response: SeparatorMode::LocalSearch,
            max_iterations: 500,
            exact_limit: DEFAULT_EXACT_LIMIT,
        }
    }
}

/// Certified bracket `[lower, upper]` around the game value.
///
/// `upper` is the recomputed maximum coverage of the returned distribution;
/// `lower` is the best certified `min_Y W(Y) / W(V)` over the dual iterates.
#[derive(Debug, Clone)]
pub struct GameBracket<T> {
    pub lower: T,
    pub upper: T,
    /// The best response to the master duals stopped improving. Only with
    /// exact responses does this mean `upper` is the value.
    pub converged: bool,
    pub iterations: usize,
    pub columns: Vec<KSeparator>,
    pub probabilities: Vec<T>,
    /// Dual weights (normalized) that produced `lower`.
    pub lower_witness: Vec<T>,
}

/// Alternates a restricted master LP with best responses of the separator
/// player. With exact best responses in rational arithmetic the bracket
/// closes to the exact value.
///
/// Each round also queries the midpoint between the master duals and the
/// weights whose best response was most expensive so far. Plain master
/// duals jump between extreme points and mostly yield zero-weight
/// responses; the smoothed query keeps columns coming.
pub fn separator_game_column_generation<T: LpScalar>(
    g: &BoundedDegreeGraph,
    k: usize,
    opts: &ColumnGenerationOptions,
) -> Result<GameBracket<T>> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptySubset);
    }
    let uniform = vec![T::one(); n];
    let mut columns = vec![min_weight_separator_limited(g, &uniform, k, opts.best_response, opts.exact_limit)?];
    let mut best_lower: Option<(T, Vec<T>)> = None;
    let mut converged = false;
    let mut iterations = 0;
    let bounds = (opts.best_response != SeparatorMode::Exact).then(|| SeparatorBounds::new(g, k));
    let mut master = solve_master_checked::<T>(n, &columns)?;
    // the cheap greedy answer is tried first, the configured mode only when
    // greedy fails to improve; the flag says whether the answer is a true minimum
    let respond = |w: &[T], value: &T| -> Result<(KSeparator, T, bool)> {
        let mut r = min_weight_separator_limited(g, w, k, SeparatorMode::Greedy, opts.exact_limit)?;
        let mut optimal = false;
        if opts.best_response != SeparatorMode::Greedy
            && !(value.clone() - sum_over(w, r.removed())).is_positive_ish()
        {
            r = min_weight_separator_limited(g, w, k, opts.best_response, opts.exact_limit)?;
            optimal = opts.best_response == SeparatorMode::Exact;
        }
        let weight = sum_over(w, r.removed());
        Ok((r, weight, optimal))
    };
    // stability center: the weights whose best response was most expensive so far
    let mut center: Option<(T, Vec<T>)> = None;
    while iterations < opts.max_iterations {
        iterations += 1;
        let w = normalize(&master.weights);
        let mut queries = vec![w.clone()];
        if let Some((_, c)) = &center {
            let half = T::one() / (T::one() + T::one());
            queries.push(c.iter().zip(&w).map(|(a, b)| half.clone() * (a.clone() + b.clone())).collect());
        }
        let mut fresh = Vec::new();
        let mut master_improves = false;
        for (i, q) in queries.iter().enumerate() {
            let (response, weight, optimal) = respond(q, &master.value)?;
            let certified = match &bounds {
                None => optimal.then(|| weight.clone()),
                Some(b) => Some(b.lower_bound(g, q)),
            };
            if let Some(c) = certified {
                if best_lower.as_ref().map_or(true, |(l, _)| c > *l) {
                    best_lower = Some((c, q.clone()));
                }
            }
            if center.as_ref().map_or(true, |(l, _)| weight > *l) {
                center = Some((weight, q.clone()));
            }
            // a column enters when it beats the value under the master's own duals
            let improves = (master.value.clone() - sum_over(&w, response.removed())).is_positive_ish();
            if i == 0 {
                master_improves = improves;
            }
            if improves && !columns.contains(&response) && !fresh.contains(&response) {
                fresh.push(response);
            }
        }
        if !master_improves {
            converged = true;
            break;
        }
        if fresh.is_empty() {
            break;
        }
        columns.extend(fresh);
        master = solve_master_checked::<T>(n, &columns)?;
    }
    let probabilities = normalize(&master.probabilities);
    let mut cover = vec![T::zero(); n];
    for (c, p) in columns.iter().zip(&probabilities) {
        for &x in c.removed() {
            cover[x] = cover[x].clone() + p.clone();
        }
    }
    let upper = cover
        .into_iter()
        .fold(T::zero(), |m, c| if c > m { c } else { m });
    let (lower, lower_witness) = best_lower.unwrap_or((T::zero(), uniform));
    Ok(GameBracket {
        lower,
        upper,
        converged,
        iterations,
        columns,
        probabilities,
        lower_witness,
    })
}

fn normalize<T: LpScalar>(v: &[T]) -> Vec<T> {
    let clipped: Vec<T> = v
        .iter()
        .map(|x| if x.is_negative_ish() || x.is_zero_ish() { T::zero() } else { x.clone() })
        .collect();
    let total = clipped.iter().fold(T::zero(), |a, x| a + x.clone());
    if total.is_zero_ish() {
        let u = T::one() / T::from_rational(&rational::int(v.len().max(1) as i64));
        return vec![u; v.len()];
    }
    clipped.into_iter().map(|x| x / total.clone()).collect()
}

fn sum_over<T: LpScalar>(w: &[T], set: &[usize]) -> T {
    set.iter().fold(T::zero(), |a, &x| a + w[x].clone())
}
