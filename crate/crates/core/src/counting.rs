//! Closed-form counting of the solutions in the rotated square `|u| + |v| ≤ x`.
//!
//! For an equation reducing to `ũ² − τṽ² = 1` the solutions split into the
//! two trivial images and four branches `(s_m, t_m)`. Past the threshold
//! `𝓛 = max M'_l` each branch contributes
//! `⌊log_W(2√τ·(⌊x⌋ − R_l + 1 − Q_l) / P_l)⌋` points, `W = α + β√τ`.
//!
//! No logarithm is ever evaluated: `⌊log_W Z⌋` is computed as the largest
//! `m` with `W^m ≤ Z`, and every comparison runs in Z[√τ].

use std::cmp::Ordering;

use crate::equation::{branch_point_from, class0_solutions, reduce, Equation, ReducedForm};
use crate::error::{Error, Result};
use crate::pell::{fundamental_solution, Branch, PellCache, PellFundamental};
use crate::quad_ring::QuadInt;
use crate::scalar::{int, Int};

/// Iteration bound for the `N₀` search.
pub const N0_ITERATION_CAP: u64 = 100_000;

/// The constants `P_l`, `Q_l`, `R_l` of one branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchParameters<T> {
    pub branch: Branch,
    /// `1 ∓ λ ∓ √τ`, always positive.
    pub p: QuadInt<T>,
    pub q: T,
    /// 0 or 1.
    pub r: u8,
    /// Whether `λ < (−1)^(l−1)·√τ` (selects the first case of `P` and `Q`).
    pub lambda_below: bool,
}

pub fn branch_parameters<T: Int>(
    reduced: &ReducedForm<T>,
    branch: Branch,
) -> Result<BranchParameters<T>> {
    reduced.require_pell()?;
    let ring = reduced.ring();
    let lambda = &reduced.lambda;
    let ed = &reduced.e_over_d;
    let hd = &reduced.half_d;
    let parity = branch.parity_sign(); // (−1)^l
    let alt = -parity; // (−1)^(l−1)

    // λ − (−1)^(l−1)·√τ < 0
    let lambda_below = ring.elem(lambda.clone(), int(-alt)).sign() < 0;

    let (p, q) = if lambda_below {
        (
            ring.elem(T::one() - lambda.clone(), int(-parity)),
            int::<T>(branch.v_sign()) * (ed.clone() * lambda.clone() - ed.clone() - hd.clone()),
        )
    } else {
        (
            ring.elem(T::one() + lambda.clone(), int(parity)),
            int::<T>(-branch.v_sign()) * (ed.clone() * lambda.clone() + ed.clone() - hd.clone()),
        )
    };

    // −√τ + (1 − (−1)^l)/2 < λ < √τ − (1 + (−1)^l)/2
    let low_offset: T = int((1 - parity) / 2);
    let high_offset: T = int((1 + parity) / 2);
    let above_low = ring.elem(lambda.clone() - low_offset, T::one()).sign() > 0;
    let below_high = ring.elem(-high_offset - lambda.clone(), T::one()).sign() > 0;
    let r = u8::from(above_low && below_high);

    if p.sign() <= 0 {
        return Err(Error::Internal(format!(
            "branch {branch}: P = {p} is not positive"
        )));
    }
    Ok(BranchParameters {
        branch,
        p,
        q,
        r,
        lambda_below,
    })
}

/// Whether `|λ| < √τ`.
fn lambda_inside<T: Int>(reduced: &ReducedForm<T>) -> bool {
    reduced.ring().elem(-reduced.lambda.abs(), T::one()).sign() > 0
}

fn check_pair<T: Int>(reduced: &ReducedForm<T>, fund: &PellFundamental<T>) -> Result<()> {
    reduced.require_pell()?;
    if fund.tau() != &reduced.tau {
        return Err(Error::RingMismatch {
            left: reduced.tau.to_string(),
            right: fund.tau().to_string(),
        });
    }
    Ok(())
}

/// Least `m` with `u_m > |λ|v_m + |(E/D)λ − d/2|` (or
/// `u_m < |λ|v_m − |(E/D)λ − d/2|` when `|λ| > √τ`) and `v_m > |E/D|`.
pub fn compute_n0<T: Int>(reduced: &ReducedForm<T>, fund: &PellFundamental<T>) -> Result<u64> {
    check_pair(reduced, fund)?;
    let inside = lambda_inside(reduced);
    let abs_lambda = reduced.lambda.abs();
    let abs_shift = reduced.shift_u().abs();
    let abs_ed = reduced.e_over_d.abs();
    for (m, (u, v)) in (1..=N0_ITERATION_CAP).zip(fund.sequence()) {
        let lv = abs_lambda.clone() * v.clone();
        let first = if inside {
            u > lv + abs_shift.clone()
        } else {
            u < lv - abs_shift.clone()
        };
        if first && v > abs_ed {
            return Ok(m);
        }
    }
    Err(Error::IterationCap {
        what: "N0 search",
        cap: N0_ITERATION_CAP,
    })
}

/// `1` when `|λ| < √τ`; otherwise the least `m ≥ 1` with
/// `2√τ·W^m > 1 + |λ| − (−1)^l·sgn(λ)·√τ`.
///
/// The logarithmic ratio behind this bound is never an integer, so the
/// strict comparison reproduces the ceiling exactly.
pub fn compute_nl<T: Int>(
    reduced: &ReducedForm<T>,
    fund: &PellFundamental<T>,
    branch: Branch,
) -> Result<u64> {
    check_pair(reduced, fund)?;
    if lambda_inside(reduced) {
        return Ok(1);
    }
    let ring = reduced.ring();
    let lambda = &reduced.lambda;
    let sgn = if lambda.is_negative() { -1 } else { 1 };
    let target = ring.elem(T::one() + lambda.abs(), int(-branch.parity_sign() * sgn));
    let unit = fund.unit();
    let mut lhs = ring.elem(T::zero(), int(2)) * unit.clone();
    for m in 1..=N0_ITERATION_CAP {
        if lhs.try_compare(&target)? == Ordering::Greater {
            return Ok(m);
        }
        lhs = &lhs * &unit;
    }
    Err(Error::IterationCap {
        what: "N_l search",
        cap: N0_ITERATION_CAP,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thresholds<T> {
    pub n0: u64,
    /// `N_l` indexed by [`Branch::slot`].
    pub n: [u64; 4],
    /// `M'_l` indexed by [`Branch::slot`].
    pub m_prime: [T; 4],
    /// `𝓛 = max M'_l`.
    pub bound: T,
}

fn abs_sum_max<T: Int>(points: &[(T, T)]) -> T {
    let s = points
        .iter()
        .map(|(s, _)| s.abs())
        .max()
        .expect("non-empty");
    let t = points
        .iter()
        .map(|(_, t)| t.abs())
        .max()
        .expect("non-empty");
    s + t
}

/// `N₀`, `N_l`, `M'_l` and `𝓛`.
///
/// `M'_l` is computed from the indices `{1, N₀, N_l}` and again from
/// `{1, max(N₀, N_l)}`; the two must agree.
pub fn compute_thresholds<T: Int>(
    reduced: &ReducedForm<T>,
    fund: &PellFundamental<T>,
) -> Result<Thresholds<T>> {
    let n0 = compute_n0(reduced, fund)?;
    let mut n = [0u64; 4];
    let mut m_prime: [T; 4] = std::array::from_fn(|_| T::zero());
    let top = n0.max(
        Branch::ALL
            .iter()
            .map(|&b| compute_nl(reduced, fund, b))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max()
            .unwrap_or(1),
    );
    let seq: Vec<(T, T)> = fund.sequence().take(top as usize).collect();
    let point = |b: Branch, m: u64| {
        let (u, v) = &seq[(m - 1) as usize];
        branch_point_from(reduced, b, u, v)
    };

    for b in Branch::ALL {
        let nl = compute_nl(reduced, fund, b)?;
        n[b.slot()] = nl;
        let three = abs_sum_max(&[point(b, 1), point(b, n0), point(b, nl)]);
        let two = abs_sum_max(&[point(b, 1), point(b, n0.max(nl))]);
        if three != two {
            return Err(Error::Internal(format!(
                "branch {b}: M' from indices {{1, N0, N_l}} is {three} but from {{1, max(N0, N_l)}} is {two}"
            )));
        }
        m_prime[b.slot()] = three;
    }
    let bound = m_prime.iter().max().cloned().expect("four branches");
    Ok(Thresholds {
        n0,
        n,
        m_prime,
        bound,
    })
}

/// `max{m ≥ 0 : P·W^m ≤ 2√τ·K}` with `K = ⌊x⌋ − R + 1 − Q`, i.e. the number
/// of branch points inside the region. Requires `⌊x⌋ ≥ M'_l`.
pub fn count_branch<T: Int>(
    fund: &PellFundamental<T>,
    params: &BranchParameters<T>,
    m_prime: &T,
    x: &T,
) -> Result<u64> {
    if x < m_prime {
        return Err(Error::BelowThreshold {
            x: x.to_string(),
            threshold: m_prime.to_string(),
        });
    }
    let k = x.clone() - int::<T>(params.r.into()) + T::one() - params.q.clone();
    if !k.is_positive() {
        return Err(Error::BelowThreshold {
            x: x.to_string(),
            threshold: m_prime.to_string(),
        });
    }
    let ring = fund.ring();
    let limit = ring.elem(T::zero(), int::<T>(2) * k);
    let unit = fund.unit();
    let mut current = params.p.clone();
    if current.try_compare(&limit)? == Ordering::Greater {
        return Err(Error::Internal(format!(
            "branch {}: P exceeds 2√τ·K at x = {x}",
            params.branch
        )));
    }
    let mut m = 0u64;
    loop {
        let next = &current * &unit;
        // ties are impossible for valid inputs; ≤ keeps the floor semantics total
        if next.try_compare(&limit)? == Ordering::Greater {
            return Ok(m);
        }
        current = next;
        m += 1;
    }
}

/// Number of `m ≥ 1` with `|s_m| + |t_m| ≤ limit`, found by walking the
/// branch directly. Growth is monotone from `N₀` on, so the walk stops at
/// the first index past `N₀` that leaves the region.
pub fn scan_branch_count<T: Int>(
    reduced: &ReducedForm<T>,
    fund: &PellFundamental<T>,
    branch: Branch,
    n0: u64,
    limit: &T,
) -> u64 {
    let mut count = 0;
    for (m, (u, v)) in (1u64..).zip(fund.sequence()) {
        let (s, t) = branch_point_from(reduced, branch, &u, &v);
        let size = s.abs() + t.abs();
        if &size <= limit {
            count += 1;
        } else if m >= n0 {
            return count;
        }
    }
    unreachable!("Pell sequence is infinite")
}

/// One point `(s_m, t_m)` of a branch.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BranchSolution<T> {
    pub m: u64,
    pub u: T,
    pub v: T,
}

/// Explicit solution set of the equation inside `|u| + |v| ≤ x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet<T> {
    pub x: T,
    pub class0: [(T, T); 2],
    /// Indexed by [`Branch::slot`], ordered by `m`.
    pub branches: [Vec<BranchSolution<T>>; 4],
}

impl<T: Int> SolutionSet<T> {
    pub fn len(&self) -> usize {
        2 + self.branches.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Every point, sorted lexicographically by `(u, v)`.
    pub fn sorted_points(&self) -> Vec<(T, T)> {
        let mut pts: Vec<(T, T)> = self
            .class0
            .iter()
            .cloned()
            .chain(
                self.branches
                    .iter()
                    .flatten()
                    .map(|p| (p.u.clone(), p.v.clone())),
            )
            .collect();
        pts.sort();
        pts
    }
}

/// Everything the closed form needs for one equation, computed once.
#[derive(Clone, Debug)]
pub struct Analysis<T: Int> {
    pub equation: Equation<T>,
    pub reduced: ReducedForm<T>,
    pub fundamental: PellFundamental<T>,
    pub params: [BranchParameters<T>; 4],
    pub thresholds: Thresholds<T>,
}

impl<T: Int> Analysis<T> {
    /// Reduce, solve the Pell equation and compute every threshold.
    /// Fails for non-LA2 equations and for `j ≠ 1`.
    pub fn new(equation: &Equation<T>) -> Result<Self> {
        let reduced = reduce(equation)?;
        reduced.require_pell()?;
        let fund = fundamental_solution(&reduced.tau)?;
        Self::assemble(equation, reduced, fund)
    }

    pub fn with_cache(equation: &Equation<T>, cache: &PellCache<T>) -> Result<Self> {
        let reduced = reduce(equation)?;
        reduced.require_pell()?;
        let fund = cache.get(&reduced.tau)?;
        Self::assemble(equation, reduced, fund)
    }

    fn assemble(
        equation: &Equation<T>,
        reduced: ReducedForm<T>,
        fundamental: PellFundamental<T>,
    ) -> Result<Self> {
        let thresholds = compute_thresholds(&reduced, &fundamental)?;
        let params = [
            branch_parameters(&reduced, Branch::L1)?,
            branch_parameters(&reduced, Branch::L2)?,
            branch_parameters(&reduced, Branch::L3)?,
            branch_parameters(&reduced, Branch::L4)?,
        ];
        Ok(Self {
            equation: equation.clone(),
            reduced,
            fundamental,
            params,
            thresholds,
        })
    }

    /// `𝓛`
    pub fn bound(&self) -> &T {
        &self.thresholds.bound
    }

    fn require_bound(&self, x: &T) -> Result<()> {
        if x < self.bound() {
            Err(Error::BelowThreshold {
                x: x.to_string(),
                threshold: self.bound().to_string(),
            })
        } else {
            Ok(())
        }
    }

    pub fn count_branch(&self, branch: Branch, x: &T) -> Result<u64> {
        count_branch(
            &self.fundamental,
            &self.params[branch.slot()],
            &self.thresholds.m_prime[branch.slot()],
            x,
        )
    }

    /// `2 + Σ_l count_branch(l)`; requires `⌊x⌋ ≥ 𝓛`.
    pub fn count(&self, x: &T) -> Result<u64> {
        self.require_bound(x)?;
        let mut total = 2;
        for b in Branch::ALL {
            total += self.count_branch(b, x)?;
        }
        Ok(total)
    }

    pub fn enumerate(&self, x: &T) -> Result<SolutionSet<T>> {
        self.require_bound(x)?;
        let counts = Branch::ALL
            .iter()
            .map(|&b| self.count_branch(b, x))
            .collect::<Result<Vec<_>>>()?;
        let longest = counts.iter().copied().max().unwrap_or(0);
        let seq: Vec<(T, T)> = self.fundamental.sequence().take(longest as usize).collect();
        let branches = Branch::ALL.map(|b| {
            seq.iter()
                .take(counts[b.slot()] as usize)
                .zip(1u64..)
                .map(|((u, v), m)| {
                    let (s, t) = branch_point_from(&self.reduced, b, u, v);
                    BranchSolution { m, u: s, v: t }
                })
                .collect()
        });
        Ok(SolutionSet {
            x: x.clone(),
            class0: class0_solutions(&self.reduced)?,
            branches,
        })
    }
}

pub fn count_solutions<T: Int>(equation: &Equation<T>, x: &T) -> Result<u64> {
    Analysis::new(equation)?.count(x)
}

pub fn enumerate_solutions<T: Int>(equation: &Equation<T>, x: &T) -> Result<SolutionSet<T>> {
    Analysis::new(equation)?.enumerate(x)
}
