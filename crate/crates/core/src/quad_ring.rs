//! Exact arithmetic in the real quadratic ring Z[√τ].
//!
//! Every inequality the counting formulas phrase with logarithms or
//! irrational numbers is decided here by integer comparisons only. The sign
//! of `a + b√τ` is settled by comparing `a²` with `b²τ` once the signs of
//! `a` and `b` disagree, which is sound because `τ` is never a perfect square.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{is_perfect_square, Int};

/// A validated radicand: `τ > 0` and not a perfect square.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadRing<T> {
    tau: T,
}

impl<T: Int> QuadRing<T> {
    pub fn new(tau: T) -> Result<Self> {
        if !tau.is_positive() || is_perfect_square(&tau) {
            return Err(Error::BadRadicand(tau.to_string()));
        }
        Ok(Self { tau })
    }

    pub fn tau(&self) -> &T {
        &self.tau
    }

    pub fn elem(&self, rational: T, surd: T) -> QuadInt<T> {
        QuadInt {
            rational,
            surd,
            tau: self.tau.clone(),
        }
    }

    pub fn from_int(&self, n: T) -> QuadInt<T> {
        self.elem(n, T::zero())
    }

    pub fn zero(&self) -> QuadInt<T> {
        self.elem(T::zero(), T::zero())
    }

    pub fn one(&self) -> QuadInt<T> {
        self.elem(T::one(), T::zero())
    }

    /// The element `√τ`.
    pub fn sqrt_tau(&self) -> QuadInt<T> {
        self.elem(T::zero(), T::one())
    }
}

/// An element `rational + surd·√τ` of Z[√τ].
///
/// Values are only created through a [`QuadRing`], so the radicand is always
/// valid. Mixing radicands is an error in the `try_*` methods and a panic in
/// the operator impls.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt<T> {
    rational: T,
    surd: T,
    tau: T,
}

impl<T: Int> QuadInt<T> {
    pub fn rational_part(&self) -> &T {
        &self.rational
    }

    pub fn surd_part(&self) -> &T {
        &self.surd
    }

    pub fn tau(&self) -> &T {
        &self.tau
    }

    pub fn into_parts(self) -> (T, T) {
        (self.rational, self.surd)
    }

    pub fn ring(&self) -> QuadRing<T> {
        QuadRing {
            tau: self.tau.clone(),
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.tau == other.tau {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: self.tau.to_string(),
                right: other.tau.to_string(),
            })
        }
    }

    fn with_parts(&self, rational: T, surd: T) -> Self {
        Self {
            rational,
            surd,
            tau: self.tau.clone(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.with_parts(
            self.rational.clone() + other.rational.clone(),
            self.surd.clone() + other.surd.clone(),
        ))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.with_parts(
            self.rational.clone() - other.rational.clone(),
            self.surd.clone() - other.surd.clone(),
        ))
    }

    /// `(a+b√τ)(c+d√τ) = (ac + bdτ) + (ad + bc)√τ`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let (a, b) = (&self.rational, &self.surd);
        let (c, d) = (&other.rational, &other.surd);
        Ok(self.with_parts(
            a.clone() * c.clone() + b.clone() * d.clone() * self.tau.clone(),
            a.clone() * d.clone() + b.clone() * c.clone(),
        ))
    }

    /// Exact `self^exp` by square-and-multiply; `x^0` is the ring identity.
    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.ring().one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiply both components by an integer.
    pub fn scale(&self, k: &T) -> Self {
        self.with_parts(
            self.rational.clone() * k.clone(),
            self.surd.clone() * k.clone(),
        )
    }

    pub fn add_int(&self, k: &T) -> Self {
        self.with_parts(self.rational.clone() + k.clone(), self.surd.clone())
    }

    /// Galois conjugate `a − b√τ`.
    pub fn conj(&self) -> Self {
        self.with_parts(self.rational.clone(), -self.surd.clone())
    }

    /// Field norm `a² − τb²`.
    pub fn norm(&self) -> T {
        self.rational.clone() * self.rational.clone()
            - self.tau.clone() * self.surd.clone() * self.surd.clone()
    }

    /// Sign of the real number `a + b√τ` as −1, 0 or +1.
    pub fn sign(&self) -> i8 {
        let a = &self.rational;
        let b = &self.surd;
        if a.is_zero() && b.is_zero() {
            return 0;
        }
        if !a.is_negative() && !b.is_negative() {
            return 1;
        }
        if !a.is_positive() && !b.is_positive() {
            return -1;
        }
        let a2 = a.clone() * a.clone();
        let b2tau = b.clone() * b.clone() * self.tau.clone();
        match a2.cmp(&b2tau) {
            // |a| dominates, so the rational part decides.
            Ordering::Greater => {
                if a.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Ordering::Less => {
                if b.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Ordering::Equal => unreachable!(
                "a + b*sqrt(tau) = 0 with (a, b) != (0, 0) requires tau = {} to be a square",
                self.tau
            ),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn try_compare(&self, other: &Self) -> Result<Ordering> {
        Ok(match self.try_sub(other)?.sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        })
    }
}

impl<T: Int> PartialOrd for QuadInt<T> {
    /// `None` when the radicands differ.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_compare(other).ok()
    }
}

impl<T: Int> fmt::Display for QuadInt<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.surd.is_zero() {
            return write!(f, "{}", self.rational);
        }
        let root = format!("√{}", self.tau);
        let surd_abs = self.surd.abs();
        let surd_term = if surd_abs.is_one() {
            root
        } else {
            format!("{surd_abs}{root}")
        };
        if self.rational.is_zero() {
            if self.surd.is_negative() {
                write!(f, "-{surd_term}")
            } else {
                write!(f, "{surd_term}")
            }
        } else {
            let op = if self.surd.is_negative() { '-' } else { '+' };
            write!(f, "{} {op} {surd_term}", self.rational)
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a, T: Int> $trait<&'a QuadInt<T>> for &'a QuadInt<T> {
            type Output = QuadInt<T>;
            fn $method(self, rhs: &'a QuadInt<T>) -> QuadInt<T> {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl<T: Int> $trait for QuadInt<T> {
            type Output = QuadInt<T>;
            fn $method(self, rhs: QuadInt<T>) -> QuadInt<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl<T: Int> Neg for QuadInt<T> {
    type Output = QuadInt<T>;
    fn neg(self) -> QuadInt<T> {
        QuadInt {
            rational: -self.rational,
            surd: -self.surd,
            tau: self.tau,
        }
    }
}
