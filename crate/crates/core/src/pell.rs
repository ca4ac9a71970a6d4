//! Pell's equation `u² − τv² = 1`.
//!
//! The fundamental solution comes from the periodic continued fraction of
//! `√τ`. The full solution set splits into five disjoint classes: the two
//! trivial points `(±1, 0)` and four sign-pattern branches generated by the
//! powers `(α + β√τ)^m`, `m ≥ 1`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::quad_ring::{QuadInt, QuadRing};
use crate::scalar::{int, isqrt, Int};

/// Default bound on the number of period terms computed for one radicand.
pub const DEFAULT_PERIOD_CAP: usize = 1_000_000;

/// `√τ = [a0; period, period, …]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction<T> {
    pub a0: T,
    pub period: Vec<T>,
}

pub fn cf_expand_sqrt<T: Int>(tau: &T) -> Result<ContinuedFraction<T>> {
    cf_expand_sqrt_capped(tau, DEFAULT_PERIOD_CAP)
}

/// Continued fraction of `√τ` via the integer recurrence
/// `m' = d·a − m`, `d' = (τ − m'²)/d`, `a' = ⌊(a0 + m')/d'⌋`,
/// stopping at the first partial quotient equal to `2·a0`.
pub fn cf_expand_sqrt_capped<T: Int>(tau: &T, cap: usize) -> Result<ContinuedFraction<T>> {
    let ring = QuadRing::new(tau.clone())?;
    let tau = ring.tau();
    let a0 = isqrt(tau);
    let two_a0 = a0.clone() + a0.clone();
    let (mut m, mut d, mut a) = (T::zero(), T::one(), a0.clone());
    let mut period = Vec::new();
    while a != two_a0 {
        if period.len() >= cap {
            return Err(Error::PeriodCap {
                tau: tau.to_string(),
                cap,
            });
        }
        m = d.clone() * a.clone() - m;
        d = (tau.clone() - m.clone() * m.clone()) / d;
        a = (a0.clone() + m.clone()) / d.clone();
        period.push(a.clone());
    }
    Ok(ContinuedFraction { a0, period })
}

/// Minimal solution `(α, β)` of `α² − τβ² = 1` with `α + β√τ > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PellFundamental<T> {
    tau: T,
    alpha: T,
    beta: T,
}

impl<T: Int> PellFundamental<T> {
    /// Wrap a known solution. Only the Pell identity and positivity are
    /// checked; minimality is the caller's responsibility.
    pub fn new(tau: T, alpha: T, beta: T) -> Result<Self> {
        QuadRing::new(tau.clone())?;
        let norm = alpha.clone() * alpha.clone() - tau.clone() * beta.clone() * beta.clone();
        if !alpha.is_positive() || !beta.is_positive() || !norm.is_one() {
            return Err(Error::Internal(format!(
                "({alpha}, {beta}) is not a positive solution of u^2 - {tau} v^2 = 1"
            )));
        }
        Ok(Self { tau, alpha, beta })
    }

    pub fn tau(&self) -> &T {
        &self.tau
    }

    pub fn alpha(&self) -> &T {
        &self.alpha
    }

    pub fn beta(&self) -> &T {
        &self.beta
    }

    pub fn ring(&self) -> QuadRing<T> {
        QuadRing::new(self.tau.clone()).expect("validated at construction")
    }

    /// The fundamental unit `α + β√τ`.
    pub fn unit(&self) -> QuadInt<T> {
        self.ring().elem(self.alpha.clone(), self.beta.clone())
    }

    /// `(u_m, v_m)` for `m = 1, 2, …`.
    pub fn sequence(&self) -> PellSequence<'_, T> {
        PellSequence {
            fund: self,
            next: None,
        }
    }
}

pub fn fundamental_solution<T: Int>(tau: &T) -> Result<PellFundamental<T>> {
    fundamental_solution_capped(tau, DEFAULT_PERIOD_CAP)
}

/// The convergent `p/q` closing the first period (even period length) or
/// the second period (odd length) is the fundamental solution.
pub fn fundamental_solution_capped<T: Int>(tau: &T, cap: usize) -> Result<PellFundamental<T>> {
    let cf = cf_expand_sqrt_capped(tau, cap)?;
    let r = cf.period.len();
    let terms = if r % 2 == 0 { r - 1 } else { 2 * r - 1 };
    let (mut p_prev, mut p) = (T::one(), cf.a0.clone());
    let (mut q_prev, mut q) = (T::zero(), T::one());
    for a in cf.period.iter().cycle().take(terms) {
        let p_next = a.clone() * p.clone() + p_prev;
        let q_next = a.clone() * q.clone() + q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    PellFundamental::new(tau.clone(), p, q)
}

/// Thread-safe memo of fundamental solutions keyed by radicand.
#[derive(Debug, Default)]
pub struct PellCache<T: Int> {
    entries: Mutex<HashMap<T, PellFundamental<T>>>,
}

impl<T: Int> PellCache<T> {
    pub fn new() -> Self {
        Self {
            entries: Mutex::new(HashMap::new()),
        }
    }

    pub fn get(&self, tau: &T) -> Result<PellFundamental<T>> {
        if let Some(hit) = self.entries.lock().unwrap().get(tau) {
            return Ok(hit.clone());
        }
        // Computed outside the lock; a racing duplicate insert is harmless.
        let fund = fundamental_solution(tau)?;
        self.entries
            .lock()
            .unwrap()
            .insert(tau.clone(), fund.clone());
        Ok(fund)
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Iterator over `(u_m, v_m)` using
/// `u' = α·u + τβ·v`, `v' = β·u + α·v` from `(u_1, v_1) = (α, β)`.
#[derive(Clone, Debug)]
pub struct PellSequence<'a, T: Int> {
    fund: &'a PellFundamental<T>,
    next: Option<(T, T)>,
}

impl<T: Int> Iterator for PellSequence<'_, T> {
    type Item = (T, T);

    fn next(&mut self) -> Option<(T, T)> {
        let f = self.fund;
        let current = match self.next.take() {
            None => (f.alpha.clone(), f.beta.clone()),
            Some(p) => p,
        };
        let (u, v) = &current;
        let tau_beta = f.tau.clone() * f.beta.clone();
        self.next = Some((
            f.alpha.clone() * u.clone() + tau_beta * v.clone(),
            f.beta.clone() * u.clone() + f.alpha.clone() * v.clone(),
        ));
        Some(current)
    }
}

/// `(u_m, v_m)` for a single `m ≥ 1`.
pub fn pell_sequence<T: Int>(fund: &PellFundamental<T>, m: u64) -> Result<(T, T)> {
    if m == 0 {
        return Err(Error::ZeroIndex);
    }
    Ok(fund
        .sequence()
        .nth((m - 1) as usize)
        .expect("sequence is infinite"))
}

/// One of the four sign-pattern branches `l ∈ {1, 2, 3, 4}`.
///
/// Branch `l` maps `(u_m, v_m)` to `((−1)^⌊l/2⌋ u_m, (−1)^⌊(l−1)/2⌋ v_m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    L1,
    L2,
    L3,
    L4,
}

impl Branch {
    pub const ALL: [Branch; 4] = [Branch::L1, Branch::L2, Branch::L3, Branch::L4];

    pub fn from_index(l: u32) -> Result<Self> {
        match l {
            1 => Ok(Branch::L1),
            2 => Ok(Branch::L2),
            3 => Ok(Branch::L3),
            4 => Ok(Branch::L4),
            other => Err(Error::ClassIndex(other)),
        }
    }

    pub fn index(self) -> u32 {
        match self {
            Branch::L1 => 1,
            Branch::L2 => 2,
            Branch::L3 => 3,
            Branch::L4 => 4,
        }
    }

    /// Position in `[_; 4]` tables.
    pub fn slot(self) -> usize {
        self.index() as usize - 1
    }

    /// `(−1)^⌊l/2⌋`
    pub fn u_sign(self) -> i64 {
        match self {
            Branch::L1 | Branch::L4 => 1,
            Branch::L2 | Branch::L3 => -1,
        }
    }

    /// `(−1)^⌊(l−1)/2⌋`
    pub fn v_sign(self) -> i64 {
        match self {
            Branch::L1 | Branch::L2 => 1,
            Branch::L3 | Branch::L4 => -1,
        }
    }

    /// `(−1)^l`
    pub fn parity_sign(self) -> i64 {
        match self {
            Branch::L2 | Branch::L4 => 1,
            Branch::L1 | Branch::L3 => -1,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Selects one of the two trivial solutions `(1, 0)` / `(−1, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrivialSign {
    Plus,
    Minus,
}

/// One of the five disjoint solution classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PellClass {
    Trivial(TrivialSign),
    Branch(Branch),
}

impl PellClass {
    /// Class `k ∈ 0..=4`; for `k = 0` the point is chosen by `trivial`.
    pub fn from_index(k: u32, trivial: TrivialSign) -> Result<Self> {
        if k == 0 {
            Ok(PellClass::Trivial(trivial))
        } else {
            Branch::from_index(k).map(PellClass::Branch)
        }
    }

    pub fn index(self) -> u32 {
        match self {
            PellClass::Trivial(_) => 0,
            PellClass::Branch(b) => b.index(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PellPoint<T> {
    pub u: T,
    pub v: T,
    pub class_index: u32,
    /// The power `m`; always 1 for the trivial class.
    pub order: u64,
}

/// Both trivial solutions `{(1, 0), (−1, 0)}`.
pub fn trivial_points<T: Int>() -> [PellPoint<T>; 2] {
    [TrivialSign::Plus, TrivialSign::Minus].map(|s| trivial_point(s))
}

pub fn trivial_point<T: Int>(sign: TrivialSign) -> PellPoint<T> {
    let u = match sign {
        TrivialSign::Plus => T::one(),
        TrivialSign::Minus => -T::one(),
    };
    PellPoint {
        u,
        v: T::zero(),
        class_index: 0,
        order: 1,
    }
}

pub fn branch_point<T: Int>(u_m: &T, v_m: &T, branch: Branch, m: u64) -> PellPoint<T> {
    PellPoint {
        u: u_m.clone() * int::<T>(branch.u_sign()),
        v: v_m.clone() * int::<T>(branch.v_sign()),
        class_index: branch.index(),
        order: m,
    }
}

pub fn pell_class_point<T: Int>(
    fund: &PellFundamental<T>,
    class: PellClass,
    m: u64,
) -> Result<PellPoint<T>> {
    match class {
        PellClass::Trivial(sign) => Ok(trivial_point(sign)),
        PellClass::Branch(branch) => {
            let (u, v) = pell_sequence(fund, m)?;
            Ok(branch_point(&u, &v, branch, m))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn continued_fraction_examples() {
        let cf = cf_expand_sqrt(&big(2)).unwrap();
        assert_eq!(cf.a0, big(1));
        assert_eq!(cf.period, vec![big(2)]);
        let cf = cf_expand_sqrt(&big(3)).unwrap();
        assert_eq!((cf.a0, cf.period), (big(1), vec![big(1), big(2)]));
        let cf = cf_expand_sqrt(&7i64).unwrap();
        assert_eq!((cf.a0, cf.period), (2, vec![1, 1, 1, 4]));
    }

    #[test]
    fn continued_fraction_domain_errors() {
        assert!(matches!(
            cf_expand_sqrt(&big(9)),
            Err(Error::BadRadicand(_))
        ));
        assert!(matches!(
            cf_expand_sqrt(&big(0)),
            Err(Error::BadRadicand(_))
        ));
        assert!(matches!(
            cf_expand_sqrt(&big(-2)),
            Err(Error::BadRadicand(_))
        ));
    }

    #[test]
    fn period_cap_is_enforced() {
        // √61 has period length 11.
        assert!(matches!(
            cf_expand_sqrt_capped(&big(61), 5),
            Err(Error::PeriodCap { cap: 5, .. })
        ));
        assert_eq!(
            cf_expand_sqrt_capped(&big(61), 11).unwrap().period.len(),
            11
        );
    }

    #[test]
    fn fundamental_examples() {
        let f = fundamental_solution(&big(2)).unwrap();
        assert_eq!((f.alpha(), f.beta()), (&big(3), &big(2)));
        let f = fundamental_solution(&big(3)).unwrap();
        assert_eq!((f.alpha(), f.beta()), (&big(2), &big(1)));
        let f = fundamental_solution(&big(61)).unwrap();
        assert_eq!(f.alpha(), &big(1_766_319_049));
        assert_eq!(f.beta(), &big(226_153_980));
    }

    #[test]
    fn sequence_examples() {
        let f2 = fundamental_solution(&big(2)).unwrap();
        assert_eq!(pell_sequence(&f2, 1).unwrap(), (big(3), big(2)));
        assert_eq!(pell_sequence(&f2, 3).unwrap(), (big(99), big(70)));
        let f3 = fundamental_solution(&big(3)).unwrap();
        assert_eq!(pell_sequence(&f3, 2).unwrap(), (big(7), big(4)));
        assert_eq!(pell_sequence(&f3, 0), Err(Error::ZeroIndex));
    }

    #[test]
    fn class_point_examples() {
        let f2 = fundamental_solution(&big(2)).unwrap();
        let trivial: Vec<_> = trivial_points::<BigInt>()
            .into_iter()
            .map(|p| (p.u, p.v))
            .collect();
        assert_eq!(trivial, vec![(big(1), big(0)), (big(-1), big(0))]);

        let p = pell_class_point(&f2, PellClass::Branch(Branch::L2), 1).unwrap();
        assert_eq!((p.u, p.v, p.class_index), (big(-3), big(2), 2));
        let p =
            pell_class_point(&f2, PellClass::from_index(4, TrivialSign::Plus).unwrap(), 2).unwrap();
        assert_eq!((p.u, p.v), (big(17), big(-12)));
        assert_eq!(
            PellClass::from_index(5, TrivialSign::Plus),
            Err(Error::ClassIndex(5))
        );
    }

    #[test]
    fn branch_sign_table() {
        let signs: Vec<_> = Branch::ALL
            .iter()
            .map(|b| (b.u_sign(), b.v_sign()))
            .collect();
        assert_eq!(signs, vec![(1, 1), (-1, 1), (-1, -1), (1, -1)]);
    }

    #[test]
    fn cache_reuses_entries() {
        let cache = PellCache::<BigInt>::new();
        assert!(cache.is_empty());
        let a = cache.get(&big(13)).unwrap();
        let b = cache.get(&big(13)).unwrap();
        assert_eq!(a, b);
        assert_eq!(cache.len(), 1);
        assert_eq!((a.alpha(), a.beta()), (&big(649), &big(180)));
    }

    #[test]
    fn rejects_non_solutions() {
        assert!(PellFundamental::new(big(2), big(3), big(1)).is_err());
        assert!(PellFundamental::new(big(2), big(-3), big(2)).is_err());
    }
}
