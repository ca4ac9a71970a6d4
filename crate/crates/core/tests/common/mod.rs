#![allow(dead_code)]

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use la2_core::{make_z1_equation, BigEquation, BigInt, BigQuadInt};

pub const PREC: usize = 256;
pub const RM: RoundingMode = RoundingMode::ToEven;

pub const TAUS: [i64; 8] = [2, 3, 5, 6, 7, 8, 10, 13];

/// `(λ, τ, p, q)` with `λ ∈ [−4, 4]`, `p, q ∈ [−2, 2]`.
pub fn corpus_params() -> Vec<(i64, i64, i64, i64)> {
    let mut out = Vec::new();
    for lambda in -4..=4 {
        for tau in TAUS {
            for p in -2..=2 {
                for q in -2..=2 {
                    out.push((lambda, tau, p, q));
                }
            }
        }
    }
    out
}

pub fn z1(lambda: i64, tau: i64, p: i64, q: i64) -> BigEquation {
    make_z1_equation(
        &BigInt::from(lambda),
        &BigInt::from(tau),
        &BigInt::from(p),
        &BigInt::from(q),
    )
    .unwrap()
}

pub fn corpus() -> Vec<BigEquation> {
    corpus_params()
        .into_iter()
        .map(|(l, t, p, q)| z1(l, t, p, q))
        .collect()
}

pub struct Floats {
    cc: Consts,
}

impl Floats {
    pub fn new() -> Self {
        Floats {
            cc: Consts::new().expect("constants cache"),
        }
    }

    pub fn int(&mut self, n: &BigInt) -> BigFloat {
        BigFloat::parse(&n.to_string(), Radix::Dec, PREC, RM, &mut self.cc)
    }

    pub fn quad(&mut self, q: &BigQuadInt) -> BigFloat {
        let root = self.int(q.tau()).sqrt(PREC, RM);
        let surd = self.int(q.surd_part()).mul(&root, PREC, RM);
        self.int(q.rational_part()).add(&surd, PREC, RM)
    }

    pub fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(PREC, RM, &mut self.cc)
    }
}

pub fn float_sign(x: &BigFloat) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
