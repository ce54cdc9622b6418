//! p-adic valuations of `a_n` without forming `a_n`.
//!
//! Only base-`p` digit sums and valuations of numbers near `n` are needed:
//!
//! * `p = 2`, `n` odd:  `v₂(a_n) = 2n − 2 − 2·s₂((n−1)/2) + v₂((n+1)/2)`
//! * `p = 2`, `n` even: `v₂(a_n) = 2n − 4 − 2·s₂(n/2 − 1) + v₂(n/2)`
//! * `p` odd:           `v_p(a_n) = v_p(n) + v_p(n+1) + 2(n − 1 − s_p(n−1))/(p − 1)`
//!
//! Each costs `O(log_p n)` divisions. [`valuation_oracle`] instead sums
//! `v_p(k−1) + v_p(k+1)` over all factors and serves as the reference.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::natural::Natural;
use crate::prime::Prime;

/// Tally of the divisions (digit extractions and divisibility probes)
/// performed by a routine.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct OpCount {
    pub divisions: u64,
}

/// `p` in the scalar type, or `None` when `p` exceeds every value of `T`.
fn prime_as<T: Natural>(p: Prime) -> Option<T> {
    T::from_u64(p.get())
}

fn check_index<T: Natural>(n: &T) -> Result<()> {
    if *n < T::two() {
        return Err(Error::domain(format!("index must be ≥ 2 (got {n})")));
    }
    Ok(())
}

pub fn vp_int_counted<T: Natural>(x: &T, p: Prime, ops: &mut OpCount) -> Result<u64> {
    if x.is_zero() {
        return Err(Error::domain("valuation of zero is undefined"));
    }
    let Some(p) = prime_as::<T>(p) else {
        return Ok(0);
    };
    let mut e = 0;
    let mut rest = x.clone();
    loop {
        ops.divisions += 1;
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            return Ok(e);
        }
        e += 1;
        rest = q;
    }
}

/// Largest `e` with `p^e | x`, for `x ≥ 1`.
pub fn vp_int<T: Natural>(x: &T, p: Prime) -> Result<u64> {
    vp_int_counted(x, p, &mut OpCount::default())
}

pub fn digit_sum_counted<T: Natural>(x: &T, p: Prime, ops: &mut OpCount) -> T {
    let Some(p) = prime_as::<T>(p) else {
        return x.clone();
    };
    let mut sum = T::zero();
    let mut rest = x.clone();
    while !rest.is_zero() {
        ops.divisions += 1;
        let (q, r) = rest.div_rem(&p);
        sum = sum + r;
        rest = q;
    }
    sum
}

/// Sum of the base-`p` digits of `x`.
pub fn digit_sum<T: Natural>(x: &T, p: Prime) -> T {
    digit_sum_counted(x, p, &mut OpCount::default())
}

pub fn legendre_factorial_valuation_counted<T: Natural>(m: &T, p: Prime, ops: &mut OpCount) -> T {
    let s = digit_sum_counted(m, p, ops);
    let Some(p) = prime_as::<T>(p) else {
        return T::zero();
    };
    ops.divisions += 1;
    let (q, r) = (m.clone() - s).div_rem(&(p - T::one()));
    debug_assert!(r.is_zero(), "p − 1 divides m − s_p(m)");
    q
}

/// `v_p(m!) = (m − s_p(m)) / (p − 1)`.
pub fn legendre_factorial_valuation<T: Natural>(m: &T, p: Prime) -> T {
    legendre_factorial_valuation_counted(m, p, &mut OpCount::default())
}

/// Which branch of the closed form applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `p = 2`, odd `n`.
    TwoOddIndex,
    /// `p = 2`, even `n`.
    TwoEvenIndex,
    OddPrime,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::TwoOddIndex => "p2-odd-n",
            Family::TwoEvenIndex => "p2-even-n",
            Family::OddPrime => "odd-p",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// One labelled term of the closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summand<T> {
    pub label: &'static str,
    pub sign: Sign,
    pub magnitude: T,
}

impl<T: Natural> Summand<T> {
    fn plus(label: &'static str, magnitude: T) -> Self {
        Summand {
            label,
            sign: Sign::Plus,
            magnitude,
        }
    }

    fn minus(label: &'static str, magnitude: T) -> Self {
        Summand {
            label,
            sign: Sign::Minus,
            magnitude,
        }
    }

    pub fn signed(&self) -> BigInt {
        let m = BigInt::from(self.magnitude.to_big());
        match self.sign {
            Sign::Plus => m,
            Sign::Minus => -m,
        }
    }
}

impl<T: Natural> fmt::Display for Summand<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.label, self.signed())
    }
}

/// `v_p(a_n)` with the individual terms that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationBreakdown<T> {
    pub n: T,
    pub p: Prime,
    pub family: Family,
    pub total: T,
    pub summands: Vec<Summand<T>>,
}

impl<T: Natural> ValuationBreakdown<T> {
    /// Signed sum of the summands; equals `total`.
    pub fn summand_total(&self) -> BigInt {
        self.summands.iter().map(Summand::signed).sum()
    }
}

/// Folds the summands in order. Every prefix of the closed forms is
/// nonnegative, so only the final width can overflow, not a transient sum.
fn total_of<T: Natural>(summands: &[Summand<T>]) -> Option<T> {
    summands.iter().try_fold(T::zero(), |acc, s| match s.sign {
        Sign::Plus => acc.checked_add(&s.magnitude),
        Sign::Minus => acc.checked_sub(&s.magnitude),
    })
}

pub fn valuation_closed_form_counted<T: Natural>(
    n: &T,
    p: Prime,
    ops: &mut OpCount,
) -> Result<ValuationBreakdown<T>> {
    check_index(n)?;
    let overflow = || Error::Overflow("valuation_closed_form");
    let one = T::one();
    let two = T::two();
    let n_plus_1 = n.checked_add(&one).ok_or_else(overflow)?;

    let (family, summands) = if p.is_two() {
        let two_n = n.checked_mul(&two).ok_or_else(overflow)?;
        ops.divisions += 1;
        if n.is_odd() {
            let half_below = (n.clone() - one.clone()) / two.clone();
            let half_above = n_plus_1 / two.clone();
            let s = digit_sum_counted(&half_below, p, ops);
            let v = vp_int_counted(&half_above, p, ops)?;
            (
                Family::TwoOddIndex,
                vec![
                    Summand::plus("2n-2", two_n - two.clone()),
                    Summand::minus("2*s_2((n-1)/2)", s * two),
                    Summand::plus("v_2((n+1)/2)", T::from_u64(v).ok_or_else(overflow)?),
                ],
            )
        } else {
            let half = n.clone() / two.clone();
            let s = digit_sum_counted(&(half.clone() - one), p, ops);
            let v = vp_int_counted(&half, p, ops)?;
            let four = two.clone() + two.clone();
            (
                Family::TwoEvenIndex,
                vec![
                    Summand::plus("2n-4", two_n - four),
                    Summand::minus("2*s_2(n/2-1)", s * two),
                    Summand::plus("v_2(n/2)", T::from_u64(v).ok_or_else(overflow)?),
                ],
            )
        }
    } else {
        let v_n = vp_int_counted(n, p, ops)?;
        let v_n1 = vp_int_counted(&n_plus_1, p, ops)?;
        let fact = legendre_factorial_valuation_counted(&(n.clone() - one), p, ops);
        (
            Family::OddPrime,
            vec![
                Summand::plus("v_p(n)", T::from_u64(v_n).ok_or_else(overflow)?),
                Summand::plus("v_p(n+1)", T::from_u64(v_n1).ok_or_else(overflow)?),
                Summand::plus(
                    "2(n-1-s_p(n-1))/(p-1)",
                    fact.checked_mul(&two).ok_or_else(overflow)?,
                ),
            ],
        )
    };

    Ok(ValuationBreakdown {
        n: n.clone(),
        p,
        family,
        total: total_of(&summands).ok_or_else(overflow)?,
        summands,
    })
}

/// `v_p(a_n)` from the digit-sum closed form, for `n ≥ 2`.
pub fn valuation_closed_form<T: Natural>(n: &T, p: Prime) -> Result<ValuationBreakdown<T>> {
    valuation_closed_form_counted(n, p, &mut OpCount::default())
}

fn oracle_bound<T: Natural>(n: &T) -> Result<u64> {
    check_index(n)?;
    n.to_u64()
        .filter(|&n| n < u64::MAX)
        .ok_or_else(|| Error::domain("oracle index must fit in 64 bits"))
}

pub fn valuation_oracle_counted<T: Natural>(n: &T, p: Prime, ops: &mut OpCount) -> Result<u64> {
    let n = oracle_bound(n)?;
    let mut total = 0;
    for k in 2..=n {
        total += vp_int_counted(&(k - 1), p, ops)? + vp_int_counted(&(k + 1), p, ops)?;
    }
    Ok(total)
}

/// `v_p(a_n) = Σ_{k=2}^{n} v_p(k − 1) + v_p(k + 1)`, one factor at a time.
pub fn valuation_oracle<T: Natural>(n: &T, p: Prime) -> Result<u64> {
    valuation_oracle_counted(n, p, &mut OpCount::default())
}

/// The oracle's running sums: entry `i` is `v_p(a_{i+2})`, for `n` up to
/// `max_n`. Same summation as [`valuation_oracle`], shared across indices.
pub fn valuation_oracle_prefixes<T: Natural>(max_n: &T, p: Prime) -> Result<Vec<u64>> {
    let max_n = oracle_bound(max_n)?;
    let mut total = 0;
    (2..=max_n)
        .map(|k| {
            total += vp_int(&(k - 1), p)? + vp_int(&(k + 1), p)?;
            Ok(total)
        })
        .collect()
}

/// `⌊log_p x⌋` for `x ≥ 1`, by repeated division.
pub fn floor_log<T: Natural>(x: &T, p: Prime) -> u64 {
    assert!(!x.is_zero(), "log of zero");
    let Some(p) = prime_as::<T>(p) else {
        return 0;
    };
    let mut e = 0;
    let mut rest = x.clone() / p.clone();
    while !rest.is_zero() {
        e += 1;
        rest = rest / p.clone();
    }
    e
}

/// `v_p(a_n)` against its asymptotic size `2n/(p − 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioReport<T> {
    pub n: T,
    pub p: Prime,
    pub valuation: T,
    /// `v_p(a_n)·(p − 1) / (2n)`.
    pub ratio: BigRational,
    /// `|ratio − 1|`.
    pub deviation: BigRational,
    /// Upper bound on `|ratio − 1|` from the digit-sum and valuation size
    /// bounds `s_p(m) ≤ (p−1)(1 + log_p m)` and `v_p(m) ≤ log_p m`, with
    /// `log_p` replaced by `⌊log_p(n+1)⌋ + 1`.
    pub deviation_bound: BigRational,
}

impl<T> RatioReport<T> {
    pub fn within_bound(&self) -> bool {
        self.deviation <= self.deviation_bound
    }
}

/// Exact ratio of `v_p(a_n)` to `2n/(p−1)` and an explicit bound on how far
/// it can stray from 1.
pub fn asymptotic_ratio<T: Natural>(n: &T, p: Prime) -> Result<RatioReport<T>> {
    let breakdown = valuation_closed_form(n, p)?;
    let big_n = BigInt::from(n.to_big());
    let p_minus_1 = BigInt::from(p.get() - 1);
    let v = BigInt::from(breakdown.total.to_big());

    let ratio = BigRational::new(&v * &p_minus_1, BigInt::from(2) * &big_n);
    let deviation = (&ratio - BigRational::one()).abs();

    let n_plus_1 = n.to_big() + 1u32;
    let log_bound = BigInt::from(floor_log(&n_plus_1, p) + 1);
    let deviation_bound = match breakdown.family {
        // (1 + (1 + L) + L/2) / n
        Family::TwoOddIndex => BigRational::new(
            BigInt::from(4) + BigInt::from(3) * &log_bound,
            BigInt::from(2) * &big_n,
        ),
        // (2 + (1 + L) + L/2) / n
        Family::TwoEvenIndex => BigRational::new(
            BigInt::from(6) + BigInt::from(3) * &log_bound,
            BigInt::from(2) * &big_n,
        ),
        // (1 + (p−1)(1 + L) + (p−1)/2 · 2L) / n
        Family::OddPrime => BigRational::new(
            BigInt::one() + &p_minus_1 * (BigInt::one() + BigInt::from(2) * &log_bound),
            big_n,
        ),
    };
    debug_assert!(!deviation_bound.is_negative() && !deviation_bound.is_zero());

    Ok(RatioReport {
        n: n.clone(),
        p,
        valuation: breakdown.total,
        ratio,
        deviation,
        deviation_bound,
    })
}

/// Renders a rational as a decimal with `places` digits after the point,
/// truncated toward zero.
pub fn rational_to_decimal(r: &BigRational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = (r * BigRational::from_integer(scale.clone()))
        .trunc()
        .to_integer();
    let neg = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = digits.split_at(digits.len() - places);
    let sign = if neg { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Lossy view of a rational, for display only.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}
