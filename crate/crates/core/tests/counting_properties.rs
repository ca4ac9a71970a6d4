mod common;

use std::collections::BTreeSet;

use astro_float::BigFloat;
use common::{corpus, float_sign, z1, Floats, PREC, RM};
use la2_core::counting::{compute_nl, scan_branch_count};
use la2_core::equation::branch_point_from;
use la2_core::{brute_force_solutions, BigAnalysis, BigEquation, BigInt, Branch};
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

fn b(v: i64) -> BigInt {
    BigInt::from(v)
}

fn analyses() -> Vec<(BigEquation, BigAnalysis)> {
    corpus()
        .into_par_iter()
        .map(|eq| {
            let a = BigAnalysis::new(&eq).unwrap_or_else(|e| panic!("{eq}: {e}"));
            (eq, a)
        })
        .collect()
}

#[test]
fn closed_form_matches_oracle_on_every_x_up_to_200_past_the_bound() {
    analyses().par_iter().for_each(|(eq, a)| {
        let top = a.bound() + b(200);
        let oracle = brute_force_solutions(eq, &top, 10_000).unwrap();
        let mut previous: Option<u64> = None;
        for k in 0..=200 {
            let x = a.bound() + b(k);
            let expect = oracle.restrict(&x).solutions;
            let count = a.count(&x).unwrap();
            assert_eq!(count as usize, expect.len(), "{eq} at x = {x}");
            let set: BTreeSet<_> = a
                .enumerate(&x)
                .unwrap()
                .sorted_points()
                .into_iter()
                .collect();
            assert_eq!(set, expect, "{eq} at x = {x}");
            if let Some(p) = previous {
                assert!(
                    p <= count && count <= p + 4,
                    "{eq}: {p} -> {count} at x = {x}"
                );
            }
            previous = Some(count);
        }
    });
}

#[test]
fn branch_counts_match_a_direct_walk() {
    analyses().par_iter().for_each(|(eq, a)| {
        for k in [0, 1, 7, 50, 199] {
            let x = a.bound() + b(k);
            for l in Branch::ALL {
                let walked = scan_branch_count(&a.reduced, &a.fundamental, l, a.thresholds.n0, &x);
                assert_eq!(
                    walked,
                    a.count_branch(l, &x).unwrap(),
                    "{eq} branch {l} x = {x}"
                );
            }
        }
        for l in Branch::ALL {
            let mp = &a.thresholds.m_prime[l.slot()];
            let walked = scan_branch_count(&a.reduced, &a.fundamental, l, a.thresholds.n0, mp);
            assert_eq!(
                walked,
                a.count_branch(l, mp).unwrap(),
                "{eq} branch {l} at M'"
            );
        }
    });
}

#[test]
fn branch_size_grows_strictly_past_n0() {
    analyses().par_iter().for_each(|(eq, a)| {
        let seq: Vec<_> = a.fundamental.sequence().take(12).collect();
        for l in Branch::ALL {
            let sizes: Vec<BigInt> = seq
                .iter()
                .map(|(u, v)| {
                    let (s, t) = branch_point_from(&a.reduced, l, u, v);
                    s.abs() + t.abs()
                })
                .collect();
            let from = (a.thresholds.n0 as usize).saturating_sub(1);
            for w in sizes[from..].windows(2) {
                assert!(w[0] < w[1], "{eq} branch {l}: {sizes:?}");
            }
        }
    });
}

#[test]
fn branch_conditions_never_tie() {
    for (eq, a) in analyses() {
        let ring = a.reduced.ring();
        let lambda = &a.reduced.lambda;
        for l in Branch::ALL {
            let parity = l.parity_sign();
            // λ against (−1)^(l−1)·√τ, and against the two ends of the R interval
            let probes = [
                ring.elem(lambda.clone(), b(parity)),
                ring.elem(lambda - b((1 - parity) / 2), b(1)),
                ring.elem(-b((1 + parity) / 2) - lambda, b(1)),
            ];
            for p in probes {
                assert_ne!(p.sign(), 0, "{eq} branch {l}");
            }
            let params = &a.params[l.slot()];
            assert!(params.p.sign() > 0);
            assert!(params.r <= 1);
        }
    }
}

/// `2√τ·K − P·W^m` in floating point.
fn float_gap(f: &mut Floats, a: &BigAnalysis, l: Branch, x: &BigInt, m: u64) -> BigFloat {
    let params = &a.params[l.slot()];
    let k = x - BigInt::from(params.r) + 1 - &params.q;
    let root = f.int(&a.reduced.tau).sqrt(PREC, RM);
    let lhs = f.int(&(k * 2)).mul(&root, PREC, RM);
    let w = f.quad(&a.fundamental.unit());
    let rhs = f
        .quad(&params.p)
        .mul(&w.powi(m as usize, PREC, RM), PREC, RM);
    lhs.sub(&rhs, PREC, RM)
}

#[test]
fn branch_comparisons_agree_with_256_bit_floats() {
    analyses().par_iter().for_each(|(eq, a)| {
        let mut f = Floats::new();
        for k in [0, 1, 7, 50, 199] {
            let x = a.bound() + b(k);
            for l in Branch::ALL {
                let count = a.count_branch(l, &x).unwrap();
                for m in 0..=count + 1 {
                    let gap = float_gap(&mut f, a, l, &x, m);
                    let exact_inside = m <= count;
                    assert_eq!(
                        float_sign(&gap) >= 0,
                        exact_inside,
                        "{eq} branch {l} x = {x} m = {m}"
                    );
                }
            }
        }
    });
}

/// `max(1, ⌈log_W((1 + |λ| − (−1)^l·sgn(λ)·√τ) / 2√τ)⌉)` in floating point.
fn float_nl(f: &mut Floats, a: &BigAnalysis, l: Branch) -> u64 {
    let lambda = &a.reduced.lambda;
    let root = f.int(&a.reduced.tau).sqrt(PREC, RM);
    let inside = f.int(&lambda.abs()).sub(&root, PREC, RM).is_negative();
    if inside {
        return 1;
    }
    let sgn = if lambda.is_negative() { -1 } else { 1 };
    let shift = f.int(&b(-l.parity_sign() * sgn)).mul(&root, PREC, RM);
    let num = f.int(&(lambda.abs() + 1)).add(&shift, PREC, RM);
    let ratio = num.div(&f.int(&b(2)).mul(&root, PREC, RM), PREC, RM);
    let w = f.quad(&a.fundamental.unit());
    let log = f.ln(&ratio).div(&f.ln(&w), PREC, RM);
    let ceil = log.ceil();
    let c = ceil.to_string();
    let value: f64 = c.parse().unwrap_or_else(|_| panic!("unparsable {c}"));
    (value as i64).max(1) as u64
}

#[test]
fn nl_agrees_with_float_ceiling() {
    let mut cases: Vec<BigEquation> = corpus();
    for lambda in [5, -5, 9, -9, 17, 40, -40, 120] {
        for tau in [2, 3, 5, 7, 13] {
            cases.push(z1(lambda, tau, 0, 0));
            cases.push(z1(lambda, tau, 1, -2));
        }
    }
    let mut deep = false;
    let mut f = Floats::new();
    for eq in cases {
        let a = BigAnalysis::new(&eq).unwrap();
        for l in Branch::ALL {
            let exact = compute_nl(&a.reduced, &a.fundamental, l).unwrap();
            assert_eq!(exact, float_nl(&mut f, &a, l), "{eq} branch {l}");
            deep |= exact > 1;
        }
    }
    assert!(deep, "no case exercised N_l > 1");
}

#[test]
fn thresholds_hold_across_the_corpus() {
    let all = analyses();
    assert_eq!(all.len(), 1800);
    let max_bound = all
        .iter()
        .map(|(_, a)| a.bound().to_u64().unwrap())
        .max()
        .unwrap();
    assert!(max_bound < 10_000);
}
