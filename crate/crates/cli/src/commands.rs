use std::collections::BTreeMap;
use std::fmt::{Display, Write as _};
use std::io::Read;

use la2_core::oracle::compare;
use la2_core::{
    brute_force_solutions, classify, make_z1_equation, reduce, BigAnalysis, BigEquation, BigInt,
    Branch, VerifyOutcome,
};
use num_traits::One;
use serde_json::{json, Map, Value};

use crate::input::{self, floor_decimal, nonnegative_x, parse_int, parse_range};
use crate::{
    CliError, Command, EquationArgs, GenerateArgs, RegionArgs, Report, Settings, VerifyArgs,
    EXIT_INTERNAL, EXIT_OK, EXIT_REJECTED,
};

pub const BELOW_BOUND_WARNING: &str = "below L: brute force used";

pub fn dispatch(
    command: &Command,
    settings: &Settings,
    stdin: &mut dyn Read,
) -> Result<Report, CliError> {
    match command {
        Command::Classify(a) => cmd_classify(&read_equation(a, stdin)?),
        Command::Reduce(a) => cmd_reduce(&read_equation(a, stdin)?),
        Command::Thresholds(a) => cmd_thresholds(&read_equation(a, stdin)?),
        Command::Count(r) => cmd_count(&read_equation(&r.equation, stdin)?, r, settings),
        Command::Enumerate(r) => cmd_enumerate(&read_equation(&r.equation, stdin)?, r, settings),
        Command::Verify(v) => cmd_verify(&read_equation(&v.equation, stdin)?, v, settings),
        Command::Generate(g) => cmd_generate(g),
    }
}

fn read_equation(args: &EquationArgs, stdin: &mut dyn Read) -> Result<BigEquation, CliError> {
    let given = [
        !args.coeffs.is_empty(),
        args.csv.is_some(),
        args.input.is_some(),
    ];
    match given.iter().filter(|g| **g).count() {
        0 => {
            return Err(CliError::usage(
                "no equation given: pass a b c d e f, --coeffs CSV or --input FILE",
            ))
        }
        1 => {}
        _ => return Err(CliError::usage("give the equation only once")),
    }
    if let Some(csv) = &args.csv {
        input::from_csv(csv)
    } else if let Some(path) = &args.input {
        input::from_file(path, stdin)
    } else {
        input::from_positional(&args.coeffs)
    }
}

fn s(v: impl Display) -> Value {
    Value::String(v.to_string())
}

fn coefficients(eq: &BigEquation) -> Map<String, Value> {
    ["a", "b", "c", "d", "e", "f"]
        .iter()
        .zip(eq.coeffs())
        .map(|(k, v)| (k.to_string(), s(v)))
        .collect()
}

fn input_echo(eq: &BigEquation, extra: &[(&str, Value)]) -> Value {
    let mut m = coefficients(eq);
    for (k, v) in extra {
        m.insert(k.to_string(), v.clone());
    }
    Value::Object(m)
}

fn report(command: &'static str, input: Value, result: Value, human: String) -> Report {
    Report {
        command,
        input,
        result,
        warnings: Vec::new(),
        human,
        code: EXIT_OK,
    }
}

fn opt(v: &Option<BigInt>) -> Value {
    v.as_ref().map_or(Value::Null, s)
}

pub fn cmd_classify(eq: &BigEquation) -> Result<Report, CliError> {
    let r = classify(eq);
    let d = &r.derived;
    let mut human = format!(
        "equation: {eq}\nD = {}, E = {}, F = {}, N = {}\n",
        d.big_d, d.big_e, d.big_f, d.big_n
    );
    let failed: Vec<Value> = r
        .failed
        .iter()
        .map(|c| json!({"condition": c.id(), "message": c.to_string()}))
        .collect();
    if r.is_la2() {
        let j = r.j.as_ref().expect("LA2 carries j");
        let _ = writeln!(human, "LA2, j = {j}");
    } else {
        human.push_str("not LA2:\n");
        for c in &r.failed {
            let _ = writeln!(human, "  {c}");
        }
    }
    let result = json!({
        "verdict": if r.is_la2() { "LA2" } else { "NotLA2" },
        "j": opt(&r.j),
        "D": s(&d.big_d),
        "E": s(&d.big_e),
        "F": s(&d.big_f),
        "N": s(&d.big_n),
        "failed": failed,
    });
    let mut out = report("classify", input_echo(eq, &[]), result, human);
    if !r.is_la2() {
        out.code = EXIT_REJECTED;
    }
    Ok(out)
}

pub fn cmd_reduce(eq: &BigEquation) -> Result<Report, CliError> {
    let red = reduce(eq)?;
    let human = format!(
        "{red}, {}\ninverse: {}\n",
        red.describe_map(),
        red.describe_inverse()
    );
    let result = json!({
        "tau": s(&red.tau),
        "j": s(&red.j),
        "lambda": s(&red.lambda),
        "e_over_d": s(&red.e_over_d),
        "half_d": s(&red.half_d),
        "form": red.to_string(),
        "map": red.describe_map(),
        "inverse": red.describe_inverse(),
    });
    let mut out = report("reduce", input_echo(eq, &[]), result, human);
    if !red.is_pell() {
        out.warnings.push(format!(
            "only j = 1 is solvable; this equation reduces to {red} and cannot be solved or counted"
        ));
    }
    Ok(out)
}

fn table(rows: &[Vec<String>]) -> String {
    let width = |c: usize| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..rows[0].len()).map(width).collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell}{}", " ".repeat(w - cell.chars().count())))
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out
}

pub fn cmd_thresholds(eq: &BigEquation) -> Result<Report, CliError> {
    let a = BigAnalysis::new(eq)?;
    let t = &a.thresholds;
    let f = &a.fundamental;
    let mut rows = vec![["branch", "P", "Q", "R", "N_l", "M'_l"]
        .map(String::from)
        .to_vec()];
    let mut branches = Vec::new();
    for l in Branch::ALL {
        let p = &a.params[l.slot()];
        let i = l.slot();
        rows.push(vec![
            l.to_string(),
            p.p.to_string(),
            p.q.to_string(),
            p.r.to_string(),
            t.n[i].to_string(),
            t.m_prime[i].to_string(),
        ]);
        branches.push(json!({
            "l": s(l),
            "p": {"rational": s(p.p.rational_part()), "surd": s(p.p.surd_part()), "text": p.p.to_string()},
            "q": s(&p.q),
            "r": s(p.r),
            "n_l": s(t.n[i]),
            "m_prime": s(&t.m_prime[i]),
        }));
    }
    let human = format!(
        "{}, fundamental solution ({}, {})\nN0 = {}\n{}L = {}\n",
        a.reduced,
        f.alpha(),
        f.beta(),
        t.n0,
        table(&rows),
        t.bound
    );
    let result = json!({
        "tau": s(&a.reduced.tau),
        "fundamental": {"alpha": s(f.alpha()), "beta": s(f.beta())},
        "n0": s(t.n0),
        "branches": branches,
        "bound": s(&t.bound),
    });
    Ok(report("thresholds", input_echo(eq, &[]), result, human))
}

fn region_x(r: &RegionArgs) -> Result<BigInt, CliError> {
    nonnegative_x(floor_decimal(&r.x)?)
}

/// `Ok(None)` when `x ≥ L`; the oracle report is returned below `L` if the
/// fallback was requested.
fn below_bound(
    a: &BigAnalysis,
    eq: &BigEquation,
    x: &BigInt,
    fallback: bool,
    settings: &Settings,
) -> Result<Option<la2_core::OracleReport<BigInt>>, CliError> {
    if x >= a.bound() {
        return Ok(None);
    }
    if !fallback {
        return Err(CliError::from(la2_core::Error::BelowThreshold {
            x: x.to_string(),
            threshold: a.bound().to_string(),
        }));
    }
    Ok(Some(brute_force_solutions(eq, x, settings.oracle_cap)?))
}

pub fn cmd_count(
    eq: &BigEquation,
    r: &RegionArgs,
    settings: &Settings,
) -> Result<Report, CliError> {
    let x = region_x(r)?;
    let a = BigAnalysis::new(eq)?;
    let echo = input_echo(eq, &[("x", s(&r.x))]);
    if let Some(oracle) = below_bound(&a, eq, &x, r.fallback_oracle, settings)? {
        let human = format!(
            "{eq}, x = {x}, L = {}\ncount: {}\n",
            a.bound(),
            oracle.count()
        );
        let result = json!({
            "x": s(&x),
            "bound": s(a.bound()),
            "method": "oracle",
            "count": s(oracle.count()),
        });
        let mut out = report("count", echo, result, human);
        out.warnings.push(BELOW_BOUND_WARNING.into());
        return Ok(out);
    }
    let total = a.count(&x)?;
    let mut human = format!("{eq}, x = {x}, L = {}\n", a.bound());
    let mut branches = Vec::new();
    for l in Branch::ALL {
        let p = &a.params[l.slot()];
        let k = &x - BigInt::from(p.r) + BigInt::one() - &p.q;
        let n = a.count_branch(l, &x)?;
        let range = if n == 0 {
            "none".to_string()
        } else {
            format!("1..{n}")
        };
        let _ = writeln!(
            human,
            "branch {l}: K = {k}, P = {}, Q = {}, R = {}, m = {range}",
            p.p, p.q, p.r
        );
        branches.push(json!({"l": s(l), "k": s(&k), "count": s(n)}));
    }
    let _ = writeln!(human, "count: {total}");
    let result = json!({
        "x": s(&x),
        "bound": s(a.bound()),
        "method": "formula",
        "count": s(total),
        "branches": branches,
    });
    Ok(report("count", echo, result, human))
}

pub fn cmd_enumerate(
    eq: &BigEquation,
    r: &RegionArgs,
    settings: &Settings,
) -> Result<Report, CliError> {
    let x = region_x(r)?;
    let a = BigAnalysis::new(eq)?;
    let echo = input_echo(eq, &[("x", s(&r.x))]);
    let mut warnings = Vec::new();
    // (u, v) -> (family, m)
    let mut points: BTreeMap<(BigInt, BigInt), Option<(u32, u64)>> = BTreeMap::new();
    let method = if let Some(oracle) = below_bound(&a, eq, &x, r.fallback_oracle, settings)? {
        warnings.push(BELOW_BOUND_WARNING.to_string());
        points.extend(oracle.solutions.into_iter().map(|p| (p, None)));
        "oracle"
    } else {
        let set = a.enumerate(&x)?;
        points.extend(set.class0.iter().cloned().map(|p| (p, Some((0, 0)))));
        for l in Branch::ALL {
            for p in &set.branches[l.slot()] {
                points.insert((p.u.clone(), p.v.clone()), Some((l.index(), p.m)));
            }
        }
        "formula"
    };
    let mut human = format!("{eq}, x = {x}, L = {}\n", a.bound());
    let mut list = Vec::new();
    for ((u, v), family) in &points {
        let mut entry = json!({"u": s(u), "v": s(v)});
        match family {
            Some((0, _)) => {
                let _ = writeln!(human, "({u}, {v})  class 0");
                entry["family"] = s(0);
            }
            Some((l, m)) => {
                let _ = writeln!(human, "({u}, {v})  branch {l}, m = {m}");
                entry["family"] = s(l);
                entry["m"] = s(m);
            }
            None => {
                let _ = writeln!(human, "({u}, {v})");
            }
        }
        list.push(entry);
    }
    let _ = writeln!(human, "count: {}", points.len());
    let result = json!({
        "x": s(&x),
        "bound": s(a.bound()),
        "method": method,
        "count": s(points.len()),
        "solutions": list,
    });
    let mut out = report("enumerate", echo, result, human);
    out.warnings = warnings;
    Ok(out)
}

fn pairs(points: &[(BigInt, BigInt)]) -> Value {
    Value::Array(points.iter().map(|(u, v)| json!([s(u), s(v)])).collect())
}

fn show(points: &[(BigInt, BigInt)]) -> String {
    let items: Vec<String> = points.iter().map(|(u, v)| format!("({u}, {v})")).collect();
    format!("[{}]", items.join(", "))
}

pub fn cmd_verify(
    eq: &BigEquation,
    v: &VerifyArgs,
    settings: &Settings,
) -> Result<Report, CliError> {
    let (lo, hi, echo_key, echo_val) = match (&v.x, &v.x_range) {
        (Some(x), _) => {
            let x = nonnegative_x(floor_decimal(x)?)?;
            (x.clone(), x, "x", v.x.clone().unwrap_or_default())
        }
        (None, Some(range)) => {
            let (a, b) = parse_range(range)?;
            (nonnegative_x(a)?, b, "x_range", range.clone())
        }
        (None, None) => return Err(CliError::usage("verify needs --x or --x-range")),
    };
    let a = BigAnalysis::new(eq)?;
    let oracle = brute_force_solutions(eq, &hi, settings.oracle_cap)?;
    let mut human = format!("{eq}, L = {}\n", a.bound());
    let mut results = Vec::new();
    let (mut matched, mut mismatched, mut below) = (0u64, 0u64, 0u64);
    let mut x = lo;
    while x <= hi {
        let r = compare(&a, oracle.restrict(&x));
        let entry = match &r.outcome {
            VerifyOutcome::Match { count } => {
                matched += 1;
                let _ = writeln!(human, "x = {x}: match, {count} solutions");
                json!({"x": s(&x), "status": "match", "formula_count": s(count), "oracle_count": s(count)})
            }
            VerifyOutcome::Mismatch {
                formula_count,
                oracle_count,
                missing,
                extra,
            } => {
                mismatched += 1;
                let _ = writeln!(
                    human,
                    "x = {x}: MISMATCH, formula {formula_count}, oracle {oracle_count}, missing {}, extra {}",
                    show(missing),
                    show(extra)
                );
                json!({
                    "x": s(&x),
                    "status": "mismatch",
                    "formula_count": s(formula_count),
                    "oracle_count": s(oracle_count),
                    "missing": pairs(missing),
                    "extra": pairs(extra),
                })
            }
            VerifyOutcome::BelowThreshold {
                bound,
                oracle_count,
            } => {
                below += 1;
                let _ = writeln!(
                    human,
                    "x = {x}: below L = {bound}, formula not applicable; oracle finds {oracle_count}"
                );
                json!({"x": s(&x), "status": "below_bound", "oracle_count": s(oracle_count)})
            }
        };
        results.push(entry);
        x += 1;
    }
    let _ = writeln!(
        human,
        "{matched} match, {mismatched} mismatch, {below} below L"
    );
    let result = json!({
        "bound": s(a.bound()),
        "results": results,
        "all_match": mismatched == 0,
    });
    let mut out = report(
        "verify",
        input_echo(eq, &[(echo_key, s(echo_val))]),
        result,
        human,
    );
    if mismatched > 0 {
        out.code = EXIT_INTERNAL;
    }
    Ok(out)
}

pub fn cmd_generate(g: &GenerateArgs) -> Result<Report, CliError> {
    let lambda = parse_int("lambda", &g.lambda)?;
    let tau = parse_int("tau", &g.tau)?;
    let p = parse_int("p", &g.p)?;
    let q = parse_int("q", &g.q)?;
    let eq = make_z1_equation(&lambda, &tau, &p, &q)?;
    let coeffs = coefficients(&eq);
    let human = format!("{}\n", Value::Object(coeffs.clone()));
    let mut result = coeffs;
    result.insert("equation".into(), s(&eq));
    let echo = json!({"lambda": s(&lambda), "tau": s(&tau), "p": s(&p), "q": s(&q)});
    Ok(report("generate", echo, Value::Object(result), human))
}
