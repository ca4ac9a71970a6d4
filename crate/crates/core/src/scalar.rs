//! Integer scalar abstraction shared by every module.
//!
//! All algorithms are written against [`Int`], so they run unchanged on
//! `BigInt` (the default, and the only type that cannot overflow) or on a
//! fixed-width primitive such as `i128` when the caller knows the inputs are
//! small. Fixed-width types panic on overflow in debug builds.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::{Integer, Roots};
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact signed integer usable as the coefficient type of the solver.
pub trait Int:
    Clone
    + Debug
    + Display
    + Hash
    + Ord
    + Integer
    + Signed
    + Roots
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> Int for T where
    T: Clone
        + Debug
        + Display
        + Hash
        + Ord
        + Integer
        + Signed
        + Roots
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Lift a small machine integer into `T`.
#[inline]
pub fn int<T: Int>(v: i64) -> T {
    T::from_i64(v).expect("small constant must fit the scalar type")
}

/// `Some(r)` with `r * r == n` when `n` is a perfect square, else `None`.
pub fn exact_sqrt<T: Int>(n: &T) -> Option<T> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(r.clone() * r.clone()) == n {
        Some(r)
    } else {
        None
    }
}

pub fn is_perfect_square<T: Int>(n: &T) -> bool {
    exact_sqrt(n).is_some()
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt<T: Int>(n: &T) -> T {
    assert!(!n.is_negative(), "isqrt of a negative number");
    n.sqrt()
}

/// `Some(n / d)` when `d` divides `n` exactly; `d == 0` divides only `0`.
pub fn exact_div<T: Int>(n: &T, d: &T) -> Option<T> {
    if d.is_zero() {
        return if n.is_zero() { Some(T::zero()) } else { None };
    }
    let (q, r) = n.div_rem(d);
    if r.is_zero() {
        Some(q)
    } else {
        None
    }
}

pub fn gcd_all<T: Int>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |acc, v| acc.gcd(v))
}
