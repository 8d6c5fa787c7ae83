//! Layer-cake decomposition of `‖f - g‖_1` over superlevel sets.
//!
//! For `f, g ∈ [0,1]^n`, `a ↦ ‖1[f > a] - 1[g > a]‖_1` is a step function
//! constant on `[b_i, b_{i+1})` between consecutive distinct entry values,
//! so the integral is an exact finite sum.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamiokaDecomposition {
    /// Distinct values of `0`, `f` and `g`, ascending.
    pub breakpoints: Vec<Rational>,
    /// `‖1[f > b_i] - 1[g > b_i]‖_1` for each breakpoint.
    pub counts: Vec<usize>,
    pub integral: Rational,
    pub l1: Rational,
}

pub fn check_unit_interval(v: &[Rational]) -> Result<()> {
    let one = rational::int(1);
    for (index, x) in v.iter().enumerate() {
        if x.is_negative() || *x > one {
            return Err(Error::EntryOutOfRange {
                index,
                value: rational::format(x),
            });
        }
    }
    Ok(())
}

/// Sorted distinct values of the inputs together with zero.
pub fn breakpoints<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Vec<Rational> {
    let mut b: Vec<Rational> = values.into_iter().cloned().collect();
    b.push(Rational::zero());
    b.sort();
    b.dedup();
    b
}

pub fn namioka_threshold(f: &[Rational], g: &[Rational]) -> Result<NamiokaDecomposition> {
    if f.len() != g.len() {
        return Err(Error::BadParams(format!("vectors of length {} and {}", f.len(), g.len())));
    }
    check_unit_interval(f)?;
    check_unit_interval(g)?;
    let bps = breakpoints(f.iter().chain(g));
    let counts: Vec<usize> = bps
        .iter()
        .map(|a| f.iter().zip(g).filter(|(x, y)| (*x > a) != (*y > a)).count())
        .collect();
    let mut integral = Rational::zero();
    for i in 0..bps.len().saturating_sub(1) {
        integral += (&bps[i + 1] - &bps[i]) * rational::int(counts[i] as i64);
    }
    let l1 = f.iter().zip(g).map(|(x, y)| (x - y).abs()).sum();
    if integral != l1 {
        return Err(Error::BoundViolated(format!(
            "layer-cake integral {} differs from l1 distance {}",
            rational::format(&integral),
            rational::format(&l1)
        )));
    }
    Ok(NamiokaDecomposition {
        breakpoints: bps,
        counts,
        integral,
        l1,
    })
}

/// The breakpoint minimizing `num(a) / den(a)` among those with positive
/// denominator; the lowest breakpoint wins ties. `objective` returns
/// `(num, den)`.
pub fn select_threshold(
    bps: &[Rational],
    mut objective: impl FnMut(&Rational) -> (Rational, Rational),
) -> Option<(Rational, Rational, Rational)> {
    let mut best: Option<(Rational, Rational, Rational)> = None;
    for a in bps {
        let (num, den) = objective(a);
        if !den.is_positive() {
            continue;
        }
        let better = match &best {
            None => true,
            Some((_, bn, bd)) => &num * bd < bn * &den,
        };
        if better {
            best = Some((a.clone(), num, den));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn swapped_indicators() {
        let d = namioka_threshold(&[int(1), int(0)], &[int(0), int(1)]).unwrap();
        assert_eq!(d.integral, int(2));
    }

    #[test]
    fn identical_vectors() {
        let f = vec![ratio(1, 3), ratio(2, 7), int(1)];
        assert_eq!(namioka_threshold(&f, &f).unwrap().integral, int(0));
    }

    #[test]
    fn rejects_entries_outside_unit_interval() {
        assert!(matches!(
            namioka_threshold(&[ratio(3, 2)], &[int(0)]),
            Err(Error::EntryOutOfRange { index: 0, .. })
        ));
    }

    #[test]
    fn threshold_selection_skips_zero_denominators() {
        let bps = vec![int(0), ratio(1, 2), int(1)];
        let pick = select_threshold(&bps, |a| {
            if *a == int(1) {
                (int(0), int(0))
            } else {
                (int(1) - a, int(1))
            }
        });
        assert_eq!(pick.unwrap().0, ratio(1, 2));
    }
}
