//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::{BTreeSet, HashSet};
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use la2_core::counting::{compute_n0, compute_nl};
use la2_core::equation::branch_point_from;
use la2_core::{
    branch_solution, brute_force_solutions, class0_solutions, derive, fundamental_solution,
    make_z1_equation, BigAnalysis, BigEquation, BigInt, BigQuadRing, Branch,
};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn b(v: i64) -> BigInt {
    BigInt::from(v)
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn corpus() -> Vec<BigEquation> {
    let mut out = Vec::new();
    for lambda in -4..=4 {
        for tau in [2, 3, 5, 6, 7, 8, 10, 13] {
            for p in -2..=2 {
                for q in -2..=2 {
                    out.push(make_z1_equation(&b(lambda), &b(tau), &b(p), &b(q)).unwrap());
                }
            }
        }
    }
    out
}

fn oracle_equivalence() -> Check {
    let eqs = corpus();
    let failures: Vec<String> = eqs
        .par_iter()
        .flat_map_iter(|eq| {
            let mut bad = Vec::new();
            let a = match BigAnalysis::new(eq) {
                Ok(a) => a,
                Err(e) => return vec![format!("{eq}: {e}")],
            };
            let oracle = brute_force_solutions(eq, &(a.bound() + b(199)), 10_000).unwrap();
            for k in [0, 1, 7, 50, 199] {
                let x = a.bound() + b(k);
                let expect = oracle.restrict(&x).solutions;
                let count = a.count(&x).map_err(|e| e.to_string());
                let set: Result<BTreeSet<_>, _> = a
                    .enumerate(&x)
                    .map(|s| s.sorted_points().into_iter().collect())
                    .map_err(|e| e.to_string());
                if count != Ok(expect.len() as u64) || set.as_ref() != Ok(&expect) {
                    bad.push(format!(
                        "{eq} at x = {x}: formula {count:?}, oracle {}",
                        expect.len()
                    ));
                }
            }
            bad
        })
        .collect();
    ensure!(
        failures.is_empty(),
        "{} failures, first: {}",
        failures.len(),
        failures[0]
    );
    Ok(format!(
        "{} equations x 5 values of x, counts and sets identical",
        eqs.len()
    ))
}

fn worked_example_e1() -> Check {
    let eq = BigEquation::from_i64([1, 0, -2, -6, 8, 0]).unwrap();
    let d = derive(&eq);
    ensure!(
        (
            d.big_d.clone(),
            d.big_e.clone(),
            d.big_f.clone(),
            d.big_n.clone(),
            d.j.clone()
        ) == (b(8), b(-16), b(36), b(-32), Some(b(1))),
        "derived quantities {d:?}"
    );
    let a = BigAnalysis::new(&eq).map_err(|e| e.to_string())?;
    ensure!(a.thresholds.n0 == 2, "N0 = {}", a.thresholds.n0);
    ensure!(
        a.thresholds.m_prime == [b(34), b(28), b(24), b(30)],
        "M' = {:?}",
        a.thresholds.m_prime
    );
    ensure!(a.bound() == &b(34), "L = {}", a.bound());
    for (x, want) in [(34, 10), (174, 14)] {
        let got = a.count(&b(x)).map_err(|e| e.to_string())?;
        let oracle = brute_force_solutions(&eq, &b(x), 1_000).unwrap().count() as u64;
        ensure!(
            got == want && oracle == want,
            "x = {x}: formula {got}, oracle {oracle}, expected {want}"
        );
    }
    Ok(
        "D,E,F,N,j = 8,-16,36,-32,1; N0 = 2; M' = 34,28,24,30; counts 10 and 14 match oracle"
            .into(),
    )
}

fn worked_example_e2() -> Check {
    let eq = BigEquation::from_i64([1, 2, -2, 0, -6, -4]).unwrap();
    let a = BigAnalysis::new(&eq).map_err(|e| e.to_string())?;
    ensure!(a.bound() == &b(17), "L = {}", a.bound());
    let x = b(17);
    let count = a.count(&x).map_err(|e| e.to_string())?;
    let oracle = brute_force_solutions(&eq, &x, 1_000).unwrap();
    let boundary = (b(12), b(-5));
    let set = a.enumerate(&x).map_err(|e| e.to_string())?.sorted_points();
    ensure!(
        count == 10 && oracle.count() == 10,
        "formula {count}, oracle {}",
        oracle.count()
    );
    ensure!(
        set.contains(&boundary) && oracle.solutions.contains(&boundary),
        "(12, -5) missing"
    );
    Ok("L = 17; count 10 including (12, -5); oracle agrees".into())
}

/// First convergent `p/q` of √τ with `p² − τq² = 1`, by direct search.
fn convergent_search(tau: i64) -> (BigInt, BigInt) {
    let t = b(tau);
    let a0 = (tau as f64).sqrt() as i64;
    let a0 = (a0 - 1..=a0 + 1).filter(|c| c * c <= tau).max().unwrap();
    let (mut m, mut d, mut a) = (0i64, 1i64, a0);
    let (mut p_prev, mut p) = (BigInt::one(), b(a0));
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    loop {
        if &p * &p - &t * &q * &q == BigInt::one() {
            return (p, q);
        }
        m = d * a - m;
        d = (tau - m * m) / d;
        a = (a0 + m) / d;
        let np = b(a) * &p + &p_prev;
        let nq = b(a) * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, np);
        q_prev = std::mem::replace(&mut q, nq);
    }
}

fn pell_correctness() -> Check {
    let mut checked = 0;
    for tau in 2..=200i64 {
        let r = (tau as f64).sqrt() as i64;
        if (r - 1..=r + 1).any(|c| c * c == tau) {
            continue;
        }
        let fund = fundamental_solution(&b(tau)).map_err(|e| e.to_string())?;
        let (p, q) = convergent_search(tau);
        ensure!(
            fund.alpha() == &p && fund.beta() == &q,
            "tau = {tau}: ({}, {}) vs ({p}, {q})",
            fund.alpha(),
            fund.beta()
        );
        checked += 1;
    }
    let f = fundamental_solution(&b(61)).unwrap();
    let (x, y) = (f.alpha(), f.beta());
    ensure!(
        (x * x - b(61) * y * y).is_one(),
        "tau = 61 fails the Pell identity"
    );
    ensure!(x > &b(1_000_000_000), "tau = 61: alpha = {x}");
    Ok(format!(
        "{checked} nonsquare tau <= 200 match; tau = 61 gives alpha = {x}"
    ))
}

fn exactness_regression() -> Check {
    let ring = BigQuadRing::new(b(2)).unwrap();
    let lhs = ring.elem(b(1), b(1)) * ring.elem(b(3), b(2)).pow(2);
    let gap = &lhs - &ring.elem(b(0), b(58));
    ensure!(
        gap == ring.elem(b(41), b(-29)),
        "(1+√2)(3+2√2)² − 58√2 = {gap}"
    );
    ensure!(gap.sign() == -1, "sign of {gap} reported as {}", gap.sign());
    let eq = BigEquation::from_i64([1, 0, -2, -6, 8, 0]).unwrap();
    let a = BigAnalysis::new(&eq).unwrap();
    let n = a
        .count_branch(Branch::L1, &b(34))
        .map_err(|e| e.to_string())?;
    ensure!(n == 2, "E1 branch 1 at x = 34 counts {n}");
    Ok("41 + 29√2 < 58√2 decided by 1681 < 1682; E1 branch 1 at x = 34 counts 2".into())
}

fn structural(eq: &BigEquation) -> Result<(), String> {
    let a = BigAnalysis::new(eq).map_err(|e| e.to_string())?;
    let red = &a.reduced;
    let fund = &a.fundamental;
    let zero = BigInt::zero();
    let mut seen = HashSet::new();
    for (u, v) in class0_solutions(red).unwrap() {
        ensure!(
            eq.evaluate(&u, &v) == zero,
            "{eq}: class 0 point ({u}, {v}) is not a root"
        );
        seen.insert((u, v));
    }
    for l in Branch::ALL {
        for m in 1..=10 {
            let (s, t) = branch_solution(red, fund, l, m).unwrap();
            ensure!(
                eq.evaluate(&s, &t) == zero,
                "{eq}: branch {l} m = {m} is not a root"
            );
            ensure!(
                seen.insert((s, t)),
                "{eq}: families overlap at branch {l}, m = {m}"
            );
        }
    }
    let n0 = compute_n0(red, fund).unwrap();
    let seq: Vec<(BigInt, BigInt)> = fund.sequence().take(12).collect();
    for l in Branch::ALL {
        let size = |m: u64| {
            let (u, v) = &seq[(m - 1) as usize];
            let (s, t) = branch_point_from(red, l, u, v);
            (s, t)
        };
        for m in n0..12 {
            let (s0, t0) = size(m);
            let (s1, t1) = size(m + 1);
            ensure!(
                s0.abs() + t0.abs() < s1.abs() + t1.abs(),
                "{eq}: branch {l} size does not grow from m = {m}"
            );
        }
        let nl = compute_nl(red, fund, l).unwrap();
        let pt = |m: u64| branch_solution(red, fund, l, m).unwrap();
        let max_sum = |pts: &[(BigInt, BigInt)]| {
            pts.iter().map(|p| p.0.abs()).max().unwrap()
                + pts.iter().map(|p| p.1.abs()).max().unwrap()
        };
        let three = max_sum(&[pt(1), pt(n0), pt(nl)]);
        let two = max_sum(&[pt(1), pt(n0.max(nl))]);
        ensure!(
            three == two,
            "{eq}: branch {l} M' forms differ ({three} vs {two})"
        );
        ensure!(
            three == a.thresholds.m_prime[l.slot()],
            "{eq}: branch {l} stored M' differs"
        );
    }
    Ok(())
}

fn structural_properties() -> Check {
    let eqs = corpus();
    let failures: Vec<String> = eqs
        .par_iter()
        .filter_map(|eq| structural(eq).err())
        .collect();
    ensure!(
        failures.is_empty(),
        "{} violations, first: {}",
        failures.len(),
        failures[0]
    );
    Ok(format!(
        "{} equations: transport, disjointness, growth past N0, M' forms agree",
        eqs.len()
    ))
}

fn below_bound_cli() -> Check {
    let bin = env!("CARGO_BIN_EXE_la2");
    let e1 = ["1", "0", "-2", "-6", "8", "0"];
    let plain = Command::new(bin)
        .arg("count")
        .args(e1)
        .args(["--x", "33"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        plain.status.code() == Some(3),
        "exit code {:?}",
        plain.status.code()
    );
    let fallback = Command::new(bin)
        .arg("count")
        .args(e1)
        .args(["--x", "33", "--fallback-oracle", "--json"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        fallback.status.success(),
        "fallback exit code {:?}",
        fallback.status.code()
    );
    let doc: serde_json::Value =
        serde_json::from_slice(&fallback.stdout).map_err(|e| e.to_string())?;
    ensure!(
        doc["result"]["count"] == "9",
        "fallback count {}",
        doc["result"]["count"]
    );
    Ok("x = 33 exits 3; with --fallback-oracle returns 9".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("oracle equivalence on the corpus", oracle_equivalence),
        ("worked example E1", worked_example_e1),
        ("worked example E2", worked_example_e2),
        ("Pell fundamental solutions", pell_correctness),
        ("exact comparison at a tight margin", exactness_regression),
        ("structural properties on the corpus", structural_properties),
        ("below-L behavior of the CLI", below_bound_cli),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {}: {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}: {name} ({detail}) [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
