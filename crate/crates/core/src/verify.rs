//! Grid sweep comparing the closed-form valuation with the summation oracle.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::prime::Prime;
use crate::valuation::{valuation_closed_form, valuation_oracle_prefixes};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mismatch {
    pub n: u64,
    pub p: Prime,
    pub closed_form: u64,
    pub oracle: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub max_n: u64,
    pub primes: Vec<Prime>,
    /// Grid points compared: `(max_n − 1) · primes.len()`.
    pub checks: u64,
    pub mismatches: u64,
    /// Smallest failing `(n, p)` in lexicographic order.
    pub first_mismatch: Option<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

/// Checks `v_p(a_n)` for every `n ∈ [2, max_n]` and every listed prime.
pub fn verify_grid(max_n: u64, primes: &[Prime]) -> Result<VerifyReport> {
    verify_grid_with(
        max_n,
        primes,
        |n, p| Ok(valuation_closed_form(&n, p)?.total),
    )
}

/// [`verify_grid`] with the closed form supplied by the caller.
pub fn verify_grid_with<F>(max_n: u64, primes: &[Prime], closed_form: F) -> Result<VerifyReport>
where
    F: Fn(u64, Prime) -> Result<u64> + Sync,
{
    if max_n < 2 {
        return Err(Error::domain(format!("max_n must be ≥ 2 (got {max_n})")));
    }
    if primes.is_empty() {
        return Err(Error::domain("at least one prime is required"));
    }

    let per_prime: Vec<(u64, Option<Mismatch>)> = primes
        .par_iter()
        .map(|&p| -> Result<_> {
            let oracle = valuation_oracle_prefixes(&max_n, p)?;
            let mut count = 0;
            let mut first = None;
            for (n, &expected) in (2..=max_n).zip(&oracle) {
                let got = closed_form(n, p)?;
                if got != expected {
                    count += 1;
                    first.get_or_insert(Mismatch {
                        n,
                        p,
                        closed_form: got,
                        oracle: expected,
                    });
                }
            }
            Ok((count, first))
        })
        .collect::<Result<_>>()?;

    let mismatches = per_prime.iter().map(|(c, _)| c).sum();
    let first_mismatch = per_prime
        .iter()
        .filter_map(|(_, m)| *m)
        .min_by_key(|m| (m.n, m.p));

    Ok(VerifyReport {
        max_n,
        primes: primes.to_vec(),
        checks: (max_n - 1) * primes.len() as u64,
        mismatches,
        first_mismatch,
    })
}
