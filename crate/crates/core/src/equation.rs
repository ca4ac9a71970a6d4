//! The general quadratic `au² + buv + cv² + du + ev + f = 0`, its LA2-type
//! classification, and the Lagrange reduction to `ũ² − τṽ² = j`.

use std::fmt;

use crate::error::{Error, Result};
use crate::pell::{pell_sequence, Branch, PellFundamental};
use crate::quad_ring::QuadRing;
use crate::scalar::{exact_div, gcd_all, int, is_perfect_square, Int};

/// Integer coefficients `(a, b, c, d, e, f)` with `a > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation<T> {
    a: T,
    b: T,
    c: T,
    d: T,
    e: T,
    f: T,
}

impl<T: Int> Equation<T> {
    pub fn new(a: T, b: T, c: T, d: T, e: T, f: T) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::NonPositiveLeading(a.to_string()));
        }
        Ok(Self { a, b, c, d, e, f })
    }

    pub fn from_coeffs([a, b, c, d, e, f]: [T; 6]) -> Result<Self> {
        Self::new(a, b, c, d, e, f)
    }

    pub fn from_i64(coeffs: [i64; 6]) -> Result<Self> {
        Self::from_coeffs(coeffs.map(int))
    }

    pub fn coeffs(&self) -> [&T; 6] {
        [&self.a, &self.b, &self.c, &self.d, &self.e, &self.f]
    }

    pub fn a(&self) -> &T {
        &self.a
    }
    pub fn b(&self) -> &T {
        &self.b
    }
    pub fn c(&self) -> &T {
        &self.c
    }
    pub fn d(&self) -> &T {
        &self.d
    }
    pub fn e(&self) -> &T {
        &self.e
    }
    pub fn f(&self) -> &T {
        &self.f
    }

    /// `au² + buv + cv² + du + ev + f`; zero exactly at the solutions.
    pub fn evaluate(&self, u: &T, v: &T) -> T {
        let (u, v) = (u.clone(), v.clone());
        self.a.clone() * u.clone() * u.clone()
            + self.b.clone() * u.clone() * v.clone()
            + self.c.clone() * v.clone() * v.clone()
            + self.d.clone() * u
            + self.e.clone() * v
            + self.f.clone()
    }

    pub fn content(&self) -> T {
        gcd_all(&self.coeffs().map(Clone::clone))
    }

    /// The equation divided through by its content.
    pub fn primitive_part(&self) -> Self {
        let k = self.content();
        let [a, b, c, d, e, f] = self.coeffs().map(|x| x.clone() / k.clone());
        Self { a, b, c, d, e, f }
    }
}

impl<T: Int> fmt::Display for Equation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = [
            (&self.a, "u²"),
            (&self.b, "uv"),
            (&self.c, "v²"),
            (&self.d, "u"),
            (&self.e, "v"),
            (&self.f, ""),
        ];
        write!(f, "{} = 0", format_terms(&terms))
    }
}

/// Render `Σ coeff·monomial` with unicode minus signs, dropping zero terms
/// and unit coefficients.
pub(crate) fn format_terms<T: Int>(terms: &[(&T, &str)]) -> String {
    let mut out = String::new();
    for (coeff, mono) in terms {
        if coeff.is_zero() {
            continue;
        }
        let mag = coeff.abs();
        let body = if mono.is_empty() {
            mag.to_string()
        } else if mag.is_one() {
            mono.to_string()
        } else {
            format!("{mag}{mono}")
        };
        match (out.is_empty(), coeff.is_negative()) {
            (true, false) => out.push_str(&body),
            (true, true) => {
                out.push('−');
                out.push_str(&body);
            }
            (false, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (false, true) => {
                out.push_str(" − ");
                out.push_str(&body);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `D = b² − 4ac`, `E = bd − 2ae`, `F = d² − 4af`, `N = E² − DF`, plus the
/// integer quotients that exist only when the matching divisibility holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedQuantities<T> {
    pub big_d: T,
    pub big_e: T,
    pub big_f: T,
    pub big_n: T,
    /// `b/2`
    pub lambda: Option<T>,
    /// `D/4`
    pub tau: Option<T>,
    /// `E/D`
    pub e_over_d: Option<T>,
    /// `d/2`
    pub half_d: Option<T>,
    /// `N / (−4a²D)`
    pub j: Option<T>,
}

pub fn derive<T: Int>(eq: &Equation<T>) -> DerivedQuantities<T> {
    let (a, b, c, d, e, f) = (&eq.a, &eq.b, &eq.c, &eq.d, &eq.e, &eq.f);
    let two: T = int(2);
    let four: T = int(4);
    let big_d = b.clone() * b.clone() - four.clone() * a.clone() * c.clone();
    let big_e = b.clone() * d.clone() - two.clone() * a.clone() * e.clone();
    let big_f = d.clone() * d.clone() - four.clone() * a.clone() * f.clone();
    let big_n = big_e.clone() * big_e.clone() - big_d.clone() * big_f.clone();
    let j_den = -(four.clone() * a.clone() * a.clone() * big_d.clone());
    DerivedQuantities {
        lambda: exact_div(b, &two),
        tau: exact_div(&big_d, &four),
        e_over_d: if big_d.is_zero() {
            None
        } else {
            exact_div(&big_e, &big_d)
        },
        half_d: exact_div(d, &two),
        j: if j_den.is_zero() {
            None
        } else {
            exact_div(&big_n, &j_den)
        },
        big_d,
        big_e,
        big_f,
        big_n,
    }
}

/// A violated requirement of the LA2-type definition, or of the structural
/// preconditions `a > 0` and `gcd(a, …, f) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition {
    NonPositiveLeading {
        a: String,
    },
    NotPrimitive {
        gcd: String,
        normalized: String,
    },
    /// (i) `D` must be positive.
    DiscriminantNotPositive {
        d: String,
    },
    /// (i) `D` must not be a perfect square.
    DiscriminantSquare {
        d: String,
    },
    /// (ii) `D | E`.
    DNotDividingE {
        d: String,
        e: String,
    },
    /// (iii) `2a | b`.
    BNotDivisible {
        b: String,
        modulus: String,
    },
    /// (iii) `a | c`.
    CNotDivisible {
        c: String,
        modulus: String,
    },
    /// (iii) `2a | d`.
    DCoeffNotDivisible {
        d: String,
        modulus: String,
    },
    /// (iv) `4a²D | N`.
    NNotDivisible {
        n: String,
        modulus: String,
    },
}

impl Condition {
    /// Short identifier: `a>0`, `gcd`, `i`, `ii`, `iii` or `iv`.
    pub fn id(&self) -> &'static str {
        match self {
            Condition::NonPositiveLeading { .. } => "a>0",
            Condition::NotPrimitive { .. } => "gcd",
            Condition::DiscriminantNotPositive { .. } | Condition::DiscriminantSquare { .. } => "i",
            Condition::DNotDividingE { .. } => "ii",
            Condition::BNotDivisible { .. }
            | Condition::CNotDivisible { .. }
            | Condition::DCoeffNotDivisible { .. } => "iii",
            Condition::NNotDivisible { .. } => "iv",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::NonPositiveLeading { a } => {
                write!(f, "(a>0) leading coefficient a = {a} is not positive")
            }
            Condition::NotPrimitive { gcd, normalized } => write!(
                f,
                "(gcd) coefficients share the factor {gcd}; divide through to get {normalized}"
            ),
            Condition::DiscriminantNotPositive { d } => {
                write!(f, "(i) D = {d} is not positive")
            }
            Condition::DiscriminantSquare { d } => {
                write!(f, "(i) D = {d} is a perfect square")
            }
            Condition::DNotDividingE { d, e } => write!(f, "(ii) D = {d} does not divide E = {e}"),
            Condition::BNotDivisible { b, modulus } => {
                write!(f, "(iii) 2a = {modulus} does not divide b = {b}")
            }
            Condition::CNotDivisible { c, modulus } => {
                write!(f, "(iii) a = {modulus} does not divide c = {c}")
            }
            Condition::DCoeffNotDivisible { d, modulus } => {
                write!(f, "(iii) 2a = {modulus} does not divide d = {d}")
            }
            Condition::NNotDivisible { n, modulus } => {
                write!(f, "(iv) 4a²D = {modulus} does not divide N = {n}")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    La2,
    NotLa2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport<T> {
    pub verdict: Verdict,
    /// Every violated condition, in checking order. Empty iff LA2.
    pub failed: Vec<Condition>,
    /// `j` when the verdict is LA2.
    pub j: Option<T>,
    pub derived: DerivedQuantities<T>,
}

impl<T: Int> ClassificationReport<T> {
    pub fn is_la2(&self) -> bool {
        self.verdict == Verdict::La2
    }
}

/// Check `a > 0`, primitivity, and the four LA2 conditions, collecting every
/// failure rather than stopping at the first.
pub fn classify<T: Int>(eq: &Equation<T>) -> ClassificationReport<T> {
    let derived = derive(eq);
    let mut failed = Vec::new();
    let a = &eq.a;
    let two_a = a.clone() + a.clone();

    if !a.is_positive() {
        failed.push(Condition::NonPositiveLeading { a: a.to_string() });
    }
    let content = eq.content();
    if !content.is_one() {
        failed.push(Condition::NotPrimitive {
            gcd: content.to_string(),
            normalized: eq.primitive_part().to_string(),
        });
    }

    let big_d = &derived.big_d;
    if !big_d.is_positive() {
        failed.push(Condition::DiscriminantNotPositive {
            d: big_d.to_string(),
        });
    } else if is_perfect_square(big_d) {
        failed.push(Condition::DiscriminantSquare {
            d: big_d.to_string(),
        });
    }

    if derived.e_over_d.is_none() {
        failed.push(Condition::DNotDividingE {
            d: big_d.to_string(),
            e: derived.big_e.to_string(),
        });
    }

    if exact_div(&eq.b, &two_a).is_none() {
        failed.push(Condition::BNotDivisible {
            b: eq.b.to_string(),
            modulus: two_a.to_string(),
        });
    }
    if exact_div(&eq.c, a).is_none() {
        failed.push(Condition::CNotDivisible {
            c: eq.c.to_string(),
            modulus: a.to_string(),
        });
    }
    if exact_div(&eq.d, &two_a).is_none() {
        failed.push(Condition::DCoeffNotDivisible {
            d: eq.d.to_string(),
            modulus: two_a.to_string(),
        });
    }

    if derived.j.is_none() {
        let modulus = int::<T>(4) * a.clone() * a.clone() * big_d.clone();
        failed.push(Condition::NNotDivisible {
            n: derived.big_n.to_string(),
            modulus: modulus.to_string(),
        });
    }

    let verdict = if failed.is_empty() {
        // Conditions (ii)-(iv) force a to divide every coefficient, so a
        // primitive LA2 equation is monic.
        assert!(a.is_one(), "LA2 equation with leading coefficient {a}");
        Verdict::La2
    } else {
        Verdict::NotLa2
    };
    let j = match verdict {
        Verdict::La2 => derived.j.clone(),
        Verdict::NotLa2 => None,
    };
    ClassificationReport {
        verdict,
        failed,
        j,
        derived,
    }
}

/// `ũ² − τṽ² = j` together with the affine change of variables
/// `(ũ, ṽ) = (u + λv + d/2, v + E/D)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedForm<T> {
    pub tau: T,
    pub j: T,
    pub lambda: T,
    pub e_over_d: T,
    pub half_d: T,
}

impl<T: Int> ReducedForm<T> {
    /// `(E/D)·λ − d/2`
    pub fn shift_u(&self) -> T {
        self.e_over_d.clone() * self.lambda.clone() - self.half_d.clone()
    }

    /// `−E/D`
    pub fn shift_v(&self) -> T {
        -self.e_over_d.clone()
    }

    pub fn ring(&self) -> QuadRing<T> {
        QuadRing::new(self.tau.clone()).expect("LA2 radicand is a nonsquare")
    }

    /// `(u, v) ↦ (u + λv + d/2, v + E/D)`
    pub fn forward(&self, u: &T, v: &T) -> (T, T) {
        (
            u.clone() + self.lambda.clone() * v.clone() + self.half_d.clone(),
            v.clone() + self.e_over_d.clone(),
        )
    }

    /// `(ũ, ṽ) ↦ (ũ − λṽ + (E/D)λ − d/2, ṽ − E/D)`
    pub fn inverse(&self, ut: &T, vt: &T) -> (T, T) {
        (
            ut.clone() - self.lambda.clone() * vt.clone() + self.shift_u(),
            vt.clone() + self.shift_v(),
        )
    }

    pub fn is_pell(&self) -> bool {
        self.j.is_one()
    }

    /// Error unless `j = 1`.
    pub fn require_pell(&self) -> Result<()> {
        if self.is_pell() {
            Ok(())
        } else {
            Err(Error::UnsupportedClass {
                j: self.j.to_string(),
            })
        }
    }

    fn check_fundamental(&self, fund: &PellFundamental<T>) -> Result<()> {
        if fund.tau() == &self.tau {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: self.tau.to_string(),
                right: fund.tau().to_string(),
            })
        }
    }

    /// Forward map as text, e.g. `ũ = u − 3, ṽ = v − 2`.
    pub fn describe_map(&self) -> String {
        let one = T::one();
        let ut = format_terms(&[(&one, "u"), (&self.lambda, "v"), (&self.half_d, "")]);
        let vt = format_terms(&[(&one, "v"), (&self.e_over_d, "")]);
        format!("ũ = {ut}, ṽ = {vt}")
    }

    /// Inverse map as text, e.g. `u = ũ + 3, v = ṽ + 2`.
    pub fn describe_inverse(&self) -> String {
        let one = T::one();
        let neg_lambda = -self.lambda.clone();
        let su = self.shift_u();
        let sv = self.shift_v();
        let u = format_terms(&[(&one, "ũ"), (&neg_lambda, "ṽ"), (&su, "")]);
        let v = format_terms(&[(&one, "ṽ"), (&sv, "")]);
        format!("u = {u}, v = {v}")
    }
}

impl<T: Int> fmt::Display for ReducedForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = T::one();
        let neg_tau = -self.tau.clone();
        let lhs = format_terms(&[(&one, "ũ²"), (&neg_tau, "ṽ²")]);
        let rhs = if self.j.is_negative() {
            format!("−{}", self.j.abs())
        } else {
            self.j.to_string()
        };
        write!(f, "{lhs} = {rhs}")
    }
}

pub fn reduce<T: Int>(eq: &Equation<T>) -> Result<ReducedForm<T>> {
    let report = classify(eq);
    if !report.is_la2() {
        return Err(Error::NotLa2(report.failed));
    }
    let d = report.derived;
    let missing = |what: &str| Error::Internal(format!("LA2 equation without integral {what}"));
    Ok(ReducedForm {
        tau: d.tau.ok_or_else(|| missing("D/4"))?,
        j: report.j.ok_or_else(|| missing("j"))?,
        lambda: d.lambda.ok_or_else(|| missing("b/2"))?,
        e_over_d: d.e_over_d.ok_or_else(|| missing("E/D"))?,
        half_d: d.half_d.ok_or_else(|| missing("d/2"))?,
    })
}

/// `(s_m, t_m)` on branch `l` from an already computed `(u_m, v_m)`:
/// `s = (−1)^⌊l/2⌋ u_m − (−1)^⌊(l−1)/2⌋ λ v_m + (E/D)λ − d/2`,
/// `t = (−1)^⌊(l−1)/2⌋ v_m − E/D`.
pub fn branch_point_from<T: Int>(
    reduced: &ReducedForm<T>,
    branch: Branch,
    u_m: &T,
    v_m: &T,
) -> (T, T) {
    let su: T = int(branch.u_sign());
    let sv: T = int(branch.v_sign());
    let s =
        su * u_m.clone() - sv.clone() * reduced.lambda.clone() * v_m.clone() + reduced.shift_u();
    let t = sv * v_m.clone() + reduced.shift_v();
    (s, t)
}

pub fn branch_solution<T: Int>(
    reduced: &ReducedForm<T>,
    fund: &PellFundamental<T>,
    branch: Branch,
    m: u64,
) -> Result<(T, T)> {
    reduced.require_pell()?;
    reduced.check_fundamental(fund)?;
    let (u, v) = pell_sequence(fund, m)?;
    Ok(branch_point_from(reduced, branch, &u, &v))
}

/// Images of `(1, 0)` and `(−1, 0)` under the inverse map.
pub fn class0_solutions<T: Int>(reduced: &ReducedForm<T>) -> Result<[(T, T); 2]> {
    reduced.require_pell()?;
    let zero = T::zero();
    Ok([
        reduced.inverse(&T::one(), &zero),
        reduced.inverse(&-T::one(), &zero),
    ])
}

/// The monic equation whose reduction is `ũ² − τṽ² = 1` with `λ`, `E/D = p`
/// and `d/2 = q`: `(1, 2λ, λ² − τ, 2q, 2λq − 2τp, q² − τp² − 1)`.
pub fn make_z1_equation<T: Int>(lambda: &T, tau: &T, p: &T, q: &T) -> Result<Equation<T>> {
    QuadRing::new(tau.clone())?;
    let two: T = int(2);
    let (l, t, p, q) = (lambda.clone(), tau.clone(), p.clone(), q.clone());
    Equation::new(
        T::one(),
        two.clone() * l.clone(),
        l.clone() * l.clone() - t.clone(),
        two.clone() * q.clone(),
        two.clone() * l * q.clone() - two * t.clone() * p.clone(),
        q.clone() * q - t * p.clone() * p - T::one(),
    )
}
