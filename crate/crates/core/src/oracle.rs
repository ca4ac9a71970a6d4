//! Brute-force ground truth: every lattice point of `|u| + |v| ≤ x` on the
//! curve, found without any of the reduction machinery.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::counting::Analysis;
use crate::equation::Equation;
use crate::error::{Error, Result};
use crate::scalar::{exact_sqrt, int, Int};

pub const DEFAULT_ORACLE_CAP: u64 = 100_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ScanMode {
    /// Solve the quadratic in `u` for each row `v`.
    #[default]
    Quadratic,
    /// Evaluate every lattice point. Only sensible for small `x`.
    Naive,
}

#[derive(Clone, Debug)]
pub struct OracleReport<T> {
    pub x: T,
    pub solutions: BTreeSet<(T, T)>,
    pub elapsed: Duration,
}

impl<T: Int> OracleReport<T> {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }

    /// The sub-report for a smaller region.
    pub fn restrict(&self, x: &T) -> OracleReport<T> {
        OracleReport {
            x: x.clone(),
            solutions: self
                .solutions
                .iter()
                .filter(|(u, v)| &(u.abs() + v.abs()) <= x)
                .cloned()
                .collect(),
            elapsed: Duration::ZERO,
        }
    }
}

fn scan_width<T: Int>(x: &T, cap: u64) -> Result<u64> {
    if x.is_negative() {
        return Err(Error::NegativeRegion(x.to_string()));
    }
    match x.to_u64() {
        Some(w) if w <= cap && w < i64::MAX as u64 => Ok(w),
        _ => Err(Error::OracleCap {
            x: x.to_string(),
            cap,
        }),
    }
}

/// Integer roots `u` of `a·u² + (b·v + d)·u + (c·v² + e·v + f)` with `|u| ≤ width`.
fn row_roots<T: Int>(eq: &Equation<T>, v: &T, width: &T) -> Vec<T> {
    let lin = eq.b().clone() * v.clone() + eq.d().clone();
    let cst = (eq.c().clone() * v.clone() + eq.e().clone()) * v.clone() + eq.f().clone();
    let two_a = int::<T>(2) * eq.a().clone();
    let disc = lin.clone() * lin.clone() - int::<T>(4) * eq.a().clone() * cst;
    let Some(root) = exact_sqrt(&disc) else {
        return Vec::new();
    };
    let mut out = Vec::with_capacity(2);
    for num in [-lin.clone() - root.clone(), -lin + root.clone()] {
        if num.is_multiple_of(&two_a) {
            let u = num / two_a.clone();
            if &u.abs() <= width && !out.contains(&u) {
                out.push(u);
            }
        }
    }
    out
}

pub fn brute_force_solutions<T: Int>(eq: &Equation<T>, x: &T, cap: u64) -> Result<OracleReport<T>> {
    brute_force_with_mode(eq, x, cap, ScanMode::Quadratic)
}

pub fn brute_force_with_mode<T: Int>(
    eq: &Equation<T>,
    x: &T,
    cap: u64,
    mode: ScanMode,
) -> Result<OracleReport<T>> {
    let w = scan_width(x, cap)? as i64;
    let start = Instant::now();
    let rows: Vec<Vec<(T, T)>> = (-w..=w)
        .into_par_iter()
        .map(|vi| {
            let v: T = int(vi);
            let width = w - vi.abs();
            match mode {
                ScanMode::Quadratic => row_roots(eq, &v, &int(width))
                    .into_iter()
                    .map(|u| (u, v.clone()))
                    .collect(),
                ScanMode::Naive => (-width..=width)
                    .map(int::<T>)
                    .filter(|u| eq.evaluate(u, &v).is_zero())
                    .map(|u| (u, v.clone()))
                    .collect(),
            }
        })
        .collect();
    Ok(OracleReport {
        x: x.clone(),
        solutions: rows.into_iter().flatten().collect(),
        elapsed: start.elapsed(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyOutcome<T> {
    Match {
        count: u64,
    },
    Mismatch {
        formula_count: u64,
        oracle_count: u64,
        /// Found by the oracle but not produced by the formula.
        missing: Vec<(T, T)>,
        /// Produced by the formula but rejected by the oracle.
        extra: Vec<(T, T)>,
    },
    /// `⌊x⌋ < 𝓛`: the closed form does not apply.
    BelowThreshold {
        bound: T,
        oracle_count: u64,
    },
}

#[derive(Clone, Debug)]
pub struct VerifyReport<T> {
    pub x: T,
    pub outcome: VerifyOutcome<T>,
    pub oracle: OracleReport<T>,
}

impl<T: Int> VerifyReport<T> {
    pub fn is_match(&self) -> bool {
        matches!(self.outcome, VerifyOutcome::Match { .. })
    }

    pub fn is_mismatch(&self) -> bool {
        matches!(self.outcome, VerifyOutcome::Mismatch { .. })
    }
}

/// Compare the closed form with the oracle at `x`. Requires `j = 1`.
pub fn verify<T: Int>(eq: &Equation<T>, x: &T, cap: u64) -> Result<VerifyReport<T>> {
    let analysis = Analysis::new(eq)?;
    let oracle = brute_force_solutions(eq, x, cap)?;
    Ok(compare(&analysis, oracle))
}

/// Compare a prepared analysis with an oracle report taken at the same `x`.
pub fn compare<T: Int>(analysis: &Analysis<T>, oracle: OracleReport<T>) -> VerifyReport<T> {
    let x = oracle.x.clone();
    let oracle_count = oracle.count() as u64;
    let outcome = match (analysis.count(&x), analysis.enumerate(&x)) {
        (Ok(count), Ok(set)) => {
            let formula: BTreeSet<(T, T)> = set.sorted_points().into_iter().collect();
            if count == oracle_count && formula == oracle.solutions && set.len() as u64 == count {
                VerifyOutcome::Match { count }
            } else {
                VerifyOutcome::Mismatch {
                    formula_count: count,
                    oracle_count,
                    missing: oracle.solutions.difference(&formula).cloned().collect(),
                    extra: formula.difference(&oracle.solutions).cloned().collect(),
                }
            }
        }
        _ => VerifyOutcome::BelowThreshold {
            bound: analysis.bound().clone(),
            oracle_count,
        },
    };
    VerifyReport { x, outcome, oracle }
}
