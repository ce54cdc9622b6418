//! Perfect squares and p-adic valuations in the sequence
//! `a_n = (2² − 1)(3² − 1)⋯(n² − 1)`, `n ≥ 2`.
//!
//! * [`sequence`]: exact terms, integer square roots, and the reduction of
//!   squareness of `a_n` to squareness of `2n(n + 1)`.
//! * [`pell`]: the square indices, generated from powers of `1 + √2` and
//!   from the equivalent binomial sums.
//! * [`valuation`]: `v_p(a_n)` in `O(log n)` divisions from base-`p` digit
//!   sums, a factor-by-factor oracle, and the ratio to `2n/(p − 1)`.
//! * [`explorer`]: brute-force square search in related product sequences.
//! * [`verify`]: closed form versus oracle over an `(n, p)` grid.
//!
//! Everything is generic over [`Natural`], which covers the unsigned
//! primitives and [`BigUint`]. [`Nat`] and the `Big*` aliases below fix the
//! arbitrary-precision instantiation used by the command-line tool.

pub mod error;
pub mod explorer;
pub mod natural;
pub mod pell;
pub mod prime;
pub mod sequence;
pub mod valuation;
pub mod verify;

pub use num_bigint::BigUint;
pub use num_rational::BigRational;

pub use error::{Error, Result};
pub use explorer::{running_product, search_squares, Kind, SearchHit, SequenceSpec};
pub use natural::Natural;
pub use pell::{
    binomial_sum_even, binomial_sum_odd, enumerate_square_indices, pell_pair, pell_pairs,
    square_index_from_k, square_indices, Parity, PellPair, SquareIndex,
};
pub use prime::{factorize, first_primes, is_prime, Prime};
pub use sequence::{
    compute_term, core_reduction, integer_sqrt, is_perfect_square, perfect_sqrt, Reduction,
    TermResult, Terms,
};
pub use valuation::{
    asymptotic_ratio, digit_sum, legendre_factorial_valuation, valuation_closed_form,
    valuation_closed_form_counted, valuation_oracle, valuation_oracle_counted,
    valuation_oracle_prefixes, vp_int, Family, OpCount, RatioReport, Sign, Summand,
    ValuationBreakdown,
};
pub use verify::{verify_grid, verify_grid_with, Mismatch, VerifyReport};

/// Arbitrary-precision natural number.
pub type Nat = BigUint;

pub type BigTerm = TermResult<Nat>;
pub type BigReduction = Reduction<Nat>;
pub type BigPellPair = PellPair<Nat>;
pub type BigSquareIndex = SquareIndex<Nat>;
pub type BigBreakdown = ValuationBreakdown<Nat>;
pub type BigRatioReport = RatioReport<Nat>;
pub type BigSequenceSpec = SequenceSpec<Nat>;
pub type BigSearchHit = SearchHit<Nat>;

/// Machine-word instantiations, for sweeps over small indices.
pub type Term64 = TermResult<u64>;
pub type PellPair64 = PellPair<u64>;
pub type SquareIndex64 = SquareIndex<u64>;
pub type Breakdown64 = ValuationBreakdown<u64>;
