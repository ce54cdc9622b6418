//! Acceptance checks, one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p pellprod-cli --test acceptance`.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};

use num_traits::{ToPrimitive, Zero};
use pellprod::{
    asymptotic_ratio, binomial_sum_even, binomial_sum_odd, enumerate_square_indices, first_primes,
    is_perfect_square, legendre_factorial_valuation, pell_pair, valuation_closed_form,
    valuation_closed_form_counted, valuation_oracle_counted, valuation_oracle_prefixes,
    verify_grid, vp_int, BigUint, Nat, OpCount, Prime, Terms,
};
use serde_json::Value;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_pellprod"))
        .arg("--format")
        .arg("json")
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {:?}", out.status.code()));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn ns_of(v: &Value, list: &str) -> Vec<u64> {
    v["result"][list]
        .as_array()
        .map(|a| {
            a.iter()
                .filter_map(|e| e["n"].as_str()?.parse().ok())
                .collect()
        })
        .unwrap_or_default()
}

fn p(v: u64) -> Prime {
    Prime::new(v).unwrap()
}

/// `(1 + √2)^k` by binary powering in `Z[√2]`.
fn unit_power(k: u64) -> (Nat, Nat) {
    let mul = |(a, b): &(Nat, Nat), (c, d): &(Nat, Nat)| (a * c + b * d * 2u32, a * d + b * c);
    let mut acc = (Nat::from(1u32), Nat::from(0u32));
    let mut base = (Nat::from(1u32), Nat::from(1u32));
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        base = mul(&base, &base);
        e >>= 1;
    }
    acc
}

fn square_indices() -> Outcome {
    const EXPECTED: [u64; 7] = [8, 49, 288, 1681, 9800, 57121, 332928];
    let v = cli_json(&["squares", "--max-n", "1000000"])?;
    let listed = ns_of(&v, "indices");
    check(listed == EXPECTED, || format!("squares listed {listed:?}"))?;

    // direct scan of 2n(n+1) over the whole range
    let scanned: Vec<u64> = (2..=1_000_000u64)
        .filter(|&n| is_perfect_square(&(2 * n * (n + 1))))
        .collect();
    check(scanned == EXPECTED, || {
        format!("core scan found {scanned:?}")
    })?;

    // full products up to 2000
    let mut found = Vec::new();
    for t in Terms::<Nat>::new().take(1999) {
        let t = t.map_err(|e| e.to_string())?;
        if t.is_square {
            found.push(t.n.to_u64().unwrap());
        }
    }
    check(found == EXPECTED[..4], || {
        format!("full products square at {found:?}")
    })
}

fn pell_invariant() -> Outcome {
    for k in 0..=256u64 {
        let pair = pell_pair::<Nat>(k).map_err(|e| e.to_string())?;
        check(pair.satisfies_norm_equation(), || {
            format!("norm fails at k = {k}")
        })?;
        check((pair.x, pair.y) == unit_power(k), || {
            format!("power mismatch at k = {k}")
        })?;
    }
    Ok(())
}

fn binomial_sums() -> Outcome {
    let mut row = vec![Nat::from(1u32)];
    for k in 1..=101u64 {
        let mut next = vec![Nat::from(1u32)];
        next.extend(row.windows(2).map(|w| &w[0] + &w[1]));
        next.push(Nat::from(1u32));
        row = next;

        let weighted = |first: u64| -> Nat {
            (first..k)
                .step_by(2)
                .map(|j| &row[j as usize] << (j / 2) as usize)
                .sum()
        };
        let pair = pell_pair::<Nat>(k).map_err(|e| e.to_string())?;
        if k % 2 == 1 {
            let s = binomial_sum_odd::<Nat>(k).map_err(|e| e.to_string())?;
            check(s == weighted(0) && s == pair.x, || {
                format!("odd sum wrong at k = {k}")
            })?;
        } else {
            let s = binomial_sum_even::<Nat>(k).map_err(|e| e.to_string())?;
            check(s == weighted(1) && s == pair.y, || {
                format!("even sum wrong at k = {k}")
            })?;
        }
    }
    Ok(())
}

fn closed_form_matches_oracle() -> Outcome {
    let primes = first_primes(25);
    let report = verify_grid(5000, &primes).map_err(|e| e.to_string())?;
    check(report.passed() && report.checks == 4999 * 25, || {
        format!("{report:?}")
    })?;

    // second, independent route: prefix sums of the oracle
    for &q in &primes[..5] {
        let prefix = valuation_oracle_prefixes(&5000u64, q).map_err(|e| e.to_string())?;
        for (i, &want) in prefix.iter().enumerate() {
            let n = i as u64 + 2;
            let got = valuation_closed_form(&n, q)
                .map_err(|e| e.to_string())?
                .total;
            check(got == want, || format!("n = {n}, p = {q}: {got} vs {want}"))?;
        }
    }

    // against the actual product
    for t in Terms::<Nat>::new().take(299) {
        let t = t.map_err(|e| e.to_string())?;
        for q in [2, 3, 5, 7, 11].map(p) {
            let direct = vp_int(&t.a_n, q).map_err(|e| e.to_string())?;
            let closed = valuation_closed_form(&t.n, q)
                .map_err(|e| e.to_string())?
                .total;
            check(closed == Nat::from(direct), || {
                format!("n = {}, p = {q}", t.n)
            })?;
        }
    }
    Ok(())
}

fn legendre() -> Outcome {
    for &q in &first_primes(10) {
        let mut factorial = BigUint::from(1u32);
        for m in 0..=5000u64 {
            let mut floor_sum = 0;
            let mut power = q.get();
            while power <= m {
                floor_sum += m / power;
                power *= q.get();
            }
            let got = legendre_factorial_valuation(&m, q);
            check(got == floor_sum, || {
                format!("m = {m}, p = {q}: {got} vs {floor_sum}")
            })?;
            if m <= 200 {
                if m > 0 {
                    factorial *= m;
                }
                let direct = vp_int(&factorial, q).map_err(|e| e.to_string())?;
                check(direct == floor_sum, || format!("v_{q}({m}!) = {direct}"))?;
            }
        }
    }
    Ok(())
}

fn asymptotic_ratios() -> Outcome {
    let tolerance = pellprod::BigRational::new(1.into(), 1000.into());
    for q in [2, 3, 5].map(p) {
        for n in [1_000u64, 10_000, 100_000, 1_000_000] {
            let r = asymptotic_ratio(&n, q).map_err(|e| e.to_string())?;
            check(r.within_bound(), || {
                format!("n = {n}, p = {q}: deviation {} over bound", r.deviation)
            })?;
            if n == 1_000_000 {
                check(
                    r.deviation < tolerance && r.deviation_bound < tolerance,
                    || {
                        format!(
                            "n = {n}, p = {q}: deviation {}, bound {}",
                            r.deviation, r.deviation_bound
                        )
                    },
                )?;
            }
        }
    }
    let r = asymptotic_ratio(&1025u64, p(2)).map_err(|e| e.to_string())?;
    check(
        r.ratio == pellprod::BigRational::new(1023.into(), 1025.into()),
        || format!("ratio {}", r.ratio),
    )
}

fn explorer() -> Outcome {
    let plus = cli_json(&["explore", "--kind", "plus", "--a", "1", "--max-n", "2000"])?;
    let hits: BTreeSet<u64> = ns_of(&plus, "hits").into_iter().collect();
    check(hits == BTreeSet::from([3]), || {
        format!("plus-1 hits {hits:?}")
    })?;

    let minus = cli_json(&[
        "explore", "--kind", "minus", "--a", "1", "--max-n", "100000",
    ])?;
    let hits = ns_of(&minus, "hits");
    let theory: Vec<u64> = enumerate_square_indices(&100_000u64)
        .into_iter()
        .map(|s| s.n)
        .collect();
    check(hits == theory, || {
        format!("minus-1 hits {hits:?}, enumeration {theory:?}")
    })
}

fn operation_counts() -> Outcome {
    let mut ops = OpCount::default();
    valuation_closed_form_counted(&1_000_000_000u64, p(2), &mut ops).map_err(|e| e.to_string())?;
    check(ops.divisions <= 200, || {
        format!("closed form used {} divisions", ops.divisions)
    })?;
    check(!ops.divisions.is_zero(), || {
        "closed form counted no divisions".into()
    })?;

    let mut previous = 0;
    for n in [10_000u64, 100_000, 1_000_000] {
        let mut ops = OpCount::default();
        valuation_oracle_counted(&n, p(2), &mut ops).map_err(|e| e.to_string())?;
        check(ops.divisions >= 2 * (n - 1), || {
            format!("oracle at n = {n}: {} divisions", ops.divisions)
        })?;
        check(ops.divisions > 5 * previous, || {
            format!("oracle at n = {n} did not grow linearly")
        })?;
        previous = ops.divisions;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("square indices up to 10^6", square_indices),
        ("Pell invariant for k <= 256", pell_invariant),
        ("binomial sums for k <= 101", binomial_sums),
        ("closed form equals oracle", closed_form_matches_oracle),
        ("Legendre's formula", legendre),
        ("asymptotic ratio within bound", asymptotic_ratios),
        ("explorer sanity", explorer),
        ("closed form operation count", operation_counts),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(()) => println!("criterion {}: PASS ({name})", i + 1),
            Err(why) => {
                println!("criterion {}: FAIL ({name}): {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
