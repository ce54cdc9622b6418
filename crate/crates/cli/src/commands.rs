use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use num_traits::ToPrimitive;
use pellprod::valuation::rational_to_decimal;
use pellprod::{
    asymptotic_ratio, compute_term, enumerate_square_indices, search_squares, square_indices,
    valuation_closed_form, valuation_closed_form_counted, valuation_oracle_counted,
    verify_grid_with, Error, Kind, Nat, OpCount, Prime, Result, SequenceSpec, SquareIndex,
};
use serde_json::{json, Value};

use crate::output::{Report, Table};

/// Longest integer printed in full by the text format.
const TEXT_DIGITS: usize = 80;

fn abbreviate(v: &Nat) -> String {
    let s = v.to_string();
    if s.len() <= TEXT_DIGITS {
        s
    } else {
        format!("{}...{} ({} digits)", &s[..20], &s[s.len() - 20..], s.len())
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn inputs<const N: usize>(pairs: [(&'static str, String); N]) -> BTreeMap<&'static str, String> {
    pairs.into_iter().collect()
}

pub fn term(n: &Nat) -> Result<Report> {
    let t = compute_term(n)?;
    let digits = t.decimal_digits();
    let a_n = t.a_n.to_string();
    let witness = t.sqrt_witness.as_ref().map(Nat::to_string);

    let mut text = format!(
        "n = {n}\na_n = {a_n}\ndigits = {digits}\nis_square = {}\n",
        t.is_square
    );
    if let Some(w) = &witness {
        writeln!(text, "sqrt_witness = {w}").unwrap();
    }

    let mut table = Table::new(&["n", "a_n", "digits", "is_square", "sqrt_witness"]);
    table.push(vec![
        n.to_string(),
        a_n.clone(),
        digits.to_string(),
        t.is_square.to_string(),
        witness.clone().unwrap_or_default(),
    ]);

    Ok(Report {
        command: "term",
        inputs: inputs([("n", n.to_string())]),
        result: json!({
            "n": n.to_string(),
            "a_n": a_n,
            "digits": digits,
            "is_square": t.is_square,
            "sqrt_witness": witness,
        }),
        text,
        table,
        failed: false,
    })
}

/// Which bound `squares` was given.
#[derive(Debug, Clone)]
pub enum SquaresLimit {
    MaxN(Nat),
    Count(usize),
}

fn square_index_json(s: &SquareIndex<Nat>) -> Value {
    json!({
        "k": s.k,
        "n": s.n.to_string(),
        "parity": s.parity.to_string(),
        "root_a": s.root_a.to_string(),
        "root_b": s.root_b.to_string(),
    })
}

pub fn squares(limit: &SquaresLimit) -> Result<Report> {
    let (indices, input) = match limit {
        SquaresLimit::MaxN(max_n) => (
            enumerate_square_indices(max_n),
            ("max_n", max_n.to_string()),
        ),
        SquaresLimit::Count(c) => (
            square_indices().take(*c).collect(),
            ("count", c.to_string()),
        ),
    };
    // Every record re-derives its own certificate.
    let failed = !indices.iter().all(SquareIndex::verify);

    let mut text = match limit {
        SquaresLimit::MaxN(m) => format!("{} square indices n in [2, {m}]\n", indices.len()),
        SquaresLimit::Count(c) => format!("first {c} square indices\n"),
    };
    let mut table = Table::new(&["k", "n", "parity", "root_a", "root_b"]);
    for s in &indices {
        writeln!(
            text,
            "k = {:>3}  {:<4}  n = {}  root_a = {}  root_b = {}",
            s.k,
            s.parity,
            abbreviate(&s.n),
            abbreviate(&s.root_a),
            abbreviate(&s.root_b)
        )
        .unwrap();
        table.push(vec![
            s.k.to_string(),
            s.n.to_string(),
            s.parity.to_string(),
            s.root_a.to_string(),
            s.root_b.to_string(),
        ]);
    }

    Ok(Report {
        command: "squares",
        inputs: inputs([input]),
        result: json!({
            "count": indices.len(),
            "indices": indices.iter().map(square_index_json).collect::<Vec<_>>(),
        }),
        text,
        table,
        failed,
    })
}

pub fn valuation(n: &Nat, p: u64, explain: bool) -> Result<Report> {
    let p = Prime::new(p)?;
    let b = valuation_closed_form(n, p)?;

    let mut text = format!("v_{p}(a_{n}) = {}\n", b.total);
    let mut result = json!({
        "n": n.to_string(),
        "p": p.to_string(),
        "total": b.total.to_string(),
        "family": b.family.name(),
    });
    if explain {
        writeln!(text, "family: {}", b.family).unwrap();
        for s in &b.summands {
            writeln!(text, "  {s}").unwrap();
        }
        result["summands"] = b
            .summands
            .iter()
            .map(|s| json!({ "label": s.label, "value": s.signed().to_string() }))
            .collect();
    }

    let mut table = Table::new(&[
        "n",
        "p",
        "family",
        "total",
        "summand_1",
        "summand_2",
        "summand_3",
    ]);
    let mut row = vec![
        n.to_string(),
        p.to_string(),
        b.family.name().to_string(),
        b.total.to_string(),
    ];
    row.extend(b.summands.iter().map(|s| s.signed().to_string()));
    table.push(row);

    let mut inputs = inputs([("n", n.to_string()), ("p", p.to_string())]);
    inputs.insert("explain", explain.to_string());
    Ok(Report {
        command: "valuation",
        inputs,
        result,
        text,
        table,
        failed: false,
    })
}

fn primes(list: &[u64]) -> Result<Vec<Prime>> {
    list.iter().map(|&p| Prime::new(p)).collect()
}

pub fn verify(max_n: u64, prime_list: &[u64], inject_fault_at: Option<u64>) -> Result<Report> {
    let ps = primes(prime_list)?;
    let report = verify_grid_with(max_n, &ps, |n, p| {
        let v = valuation_closed_form(&n, p)?.total;
        Ok(match inject_fault_at {
            Some(at) if n >= at => v + 1,
            _ => v,
        })
    })?;
    let status = if report.passed() { "PASS" } else { "FAIL" };

    let mut text = format!(
        "{status}: {} checks over n in [2, {max_n}] x primes {{{}}}\n",
        report.checks,
        join(prime_list)
    );
    let mismatch = report.first_mismatch.map(|m| {
        writeln!(
            text,
            "{} mismatches; first at n = {}, p = {}: closed form {} vs oracle {}",
            report.mismatches, m.n, m.p, m.closed_form, m.oracle
        )
        .unwrap();
        json!({
            "n": m.n.to_string(),
            "p": m.p.to_string(),
            "closed_form": m.closed_form.to_string(),
            "oracle": m.oracle.to_string(),
        })
    });

    let mut table = Table::new(&[
        "status",
        "checks",
        "mismatches",
        "first_n",
        "first_p",
        "closed_form",
        "oracle",
    ]);
    let cell = |f: fn(&pellprod::Mismatch) -> u64| {
        report
            .first_mismatch
            .as_ref()
            .map(|m| f(m).to_string())
            .unwrap_or_default()
    };
    table.push(vec![
        status.to_string(),
        report.checks.to_string(),
        report.mismatches.to_string(),
        cell(|m| m.n),
        cell(|m| m.p.get()),
        cell(|m| m.closed_form),
        cell(|m| m.oracle),
    ]);

    let mut inputs = inputs([("max_n", max_n.to_string()), ("primes", join(prime_list))]);
    if let Some(at) = inject_fault_at {
        inputs.insert("inject_fault_at", at.to_string());
    }
    Ok(Report {
        command: "verify",
        inputs,
        result: json!({
            "status": status,
            "checks": report.checks,
            "mismatches": report.mismatches,
            "first_mismatch": mismatch,
        }),
        text,
        table,
        failed: !report.passed(),
    })
}

pub fn ratio(p: u64, n_list: &[Nat]) -> Result<Report> {
    let p = Prime::new(p)?;
    if n_list.is_empty() {
        return Err(Error::Domain(
            "--n-list must name at least one index".into(),
        ));
    }
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut table = Table::new(&[
        "n",
        "p",
        "valuation",
        "ratio",
        "ratio_decimal",
        "deviation",
        "deviation_bound",
        "within_bound",
    ]);
    let mut failed = false;
    for n in n_list {
        let r = asymptotic_ratio(n, p)?;
        let within = r.within_bound();
        failed |= !within;
        writeln!(
            text,
            "n = {n}  v_{p}(a_n) = {}  ratio = {} ~ {}  |ratio-1| = {} <= {} : {}",
            r.valuation,
            r.ratio,
            rational_to_decimal(&r.ratio, 12),
            rational_to_decimal(&r.deviation, 12),
            rational_to_decimal(&r.deviation_bound, 12),
            if within { "ok" } else { "VIOLATED" }
        )
        .unwrap();
        table.push(vec![
            n.to_string(),
            p.to_string(),
            r.valuation.to_string(),
            r.ratio.to_string(),
            rational_to_decimal(&r.ratio, 12),
            r.deviation.to_string(),
            r.deviation_bound.to_string(),
            within.to_string(),
        ]);
        rows.push(json!({
            "n": n.to_string(),
            "valuation": r.valuation.to_string(),
            "ratio": r.ratio.to_string(),
            "ratio_decimal": rational_to_decimal(&r.ratio, 12),
            "deviation": r.deviation.to_string(),
            "deviation_bound": r.deviation_bound.to_string(),
            "within_bound": within,
        }));
    }
    Ok(Report {
        command: "ratio",
        inputs: inputs([("p", p.to_string()), ("n_list", join(n_list))]),
        result: json!({ "p": p.to_string(), "rows": rows }),
        text,
        table,
        failed,
    })
}

pub fn explore(kind: Kind, a: &Nat, max_n: &Nat) -> Result<Report> {
    let spec = SequenceSpec::new(kind, a.clone())?;
    let hits = search_squares(&spec, max_n)?;

    let mut text = format!(
        "exhaustive scan of {spec} for n in [{}, {max_n}]: {} square(s)\n",
        spec.start(),
        hits.len()
    );
    let mut table = Table::new(&["kind", "a", "n", "sqrt_witness"]);
    for h in &hits {
        writeln!(text, "n = {}  sqrt = {}", h.n, abbreviate(&h.sqrt_witness)).unwrap();
        table.push(vec![
            kind.to_string(),
            a.to_string(),
            h.n.to_string(),
            h.sqrt_witness.to_string(),
        ]);
    }

    Ok(Report {
        command: "explore",
        inputs: inputs([
            ("kind", kind.to_string()),
            ("a", a.to_string()),
            ("max_n", max_n.to_string()),
        ]),
        result: json!({
            "sequence": spec.to_string(),
            "kind": kind.to_string(),
            "a": a.to_string(),
            "start": spec.start().to_string(),
            "max_n": max_n.to_string(),
            "exhaustive_range": [spec.start().to_string(), max_n.to_string()],
            "hits": hits
                .iter()
                .map(|h| json!({ "n": h.n.to_string(), "sqrt_witness": h.sqrt_witness.to_string() }))
                .collect::<Vec<_>>(),
        }),
        text,
        table,
        failed: false,
    })
}

fn median(mut v: Vec<u64>) -> u64 {
    v.sort_unstable();
    v[v.len() / 2]
}

pub fn bench(n: &Nat, p: u64, reps: u32) -> Result<Report> {
    let p = Prime::new(p)?;
    let n64 = n
        .to_u64()
        .ok_or_else(|| Error::Domain("bench index must fit in 64 bits".into()))?;
    let reps = reps.max(1);

    let mut closed_times = Vec::new();
    let mut closed_ops = OpCount::default();
    let mut closed_total = 0;
    for _ in 0..reps {
        let mut ops = OpCount::default();
        let start = Instant::now();
        closed_total = valuation_closed_form_counted(&n64, p, &mut ops)?.total;
        closed_times.push(start.elapsed().as_nanos() as u64);
        closed_ops = ops;
    }

    let mut oracle_times = Vec::new();
    let mut oracle_ops = OpCount::default();
    let mut oracle_total = 0;
    for _ in 0..reps {
        let mut ops = OpCount::default();
        let start = Instant::now();
        oracle_total = valuation_oracle_counted(&n64, p, &mut ops)?;
        oracle_times.push(start.elapsed().as_nanos() as u64);
        oracle_ops = ops;
    }

    let agree = closed_total == oracle_total;
    let (closed_median, oracle_median) = (median(closed_times), median(oracle_times));
    let text = format!(
        "v_{p}(a_{n}): closed form {closed_total}, oracle {oracle_total} ({})\n\
         closed form: median {closed_median} ns, {} divisions\n\
         oracle:      median {oracle_median} ns, {} divisions\n",
        if agree { "agree" } else { "MISMATCH" },
        closed_ops.divisions,
        oracle_ops.divisions,
    );
    let mut table = Table::new(&[
        "n",
        "p",
        "reps",
        "closed_total",
        "oracle_total",
        "closed_median_ns",
        "oracle_median_ns",
        "closed_divisions",
        "oracle_divisions",
    ]);
    table.push(vec![
        n.to_string(),
        p.to_string(),
        reps.to_string(),
        closed_total.to_string(),
        oracle_total.to_string(),
        closed_median.to_string(),
        oracle_median.to_string(),
        closed_ops.divisions.to_string(),
        oracle_ops.divisions.to_string(),
    ]);

    Ok(Report {
        command: "bench",
        inputs: inputs([
            ("n", n.to_string()),
            ("p", p.to_string()),
            ("reps", reps.to_string()),
        ]),
        result: json!({
            "closed_form": {
                "total": closed_total.to_string(),
                "median_ns": closed_median,
                "divisions": closed_ops.divisions,
            },
            "oracle": {
                "total": oracle_total.to_string(),
                "median_ns": oracle_median,
                "divisions": oracle_ops.divisions,
            },
            "totals_equal": agree,
        }),
        text,
        table,
        failed: !agree,
    })
}
