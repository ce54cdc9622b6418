//! Powers of the unit `1 + √2` and the indices `n` at which `a_n` is a square.
//!
//! Writing `(1 + √2)^k = x + y√2`, the pair satisfies `x² − 2y² = (−1)^k`.
//! For odd `k` the index `n = x²` has `(n + 1)/2 = y²`; for even `k` the index
//! `n = 2y²` has `n + 1 = x²`. Either way `2n(n+1)` is a square, and every
//! `n ≥ 2` with `a_n` square arises this way from some `k ≥ 2`.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::natural::Natural;
use crate::sequence::is_perfect_square;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(k: u64) -> Self {
        if k.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// `x + y√2 = (1 + √2)^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellPair<T> {
    pub k: u64,
    pub x: T,
    pub y: T,
}

impl<T: Natural> PellPair<T> {
    /// `(1 + √2)^0 = 1`.
    pub fn unit() -> Self {
        PellPair {
            k: 0,
            x: T::one(),
            y: T::zero(),
        }
    }

    /// Multiply by `1 + √2`: `(x, y) ↦ (x + 2y, x + y)`.
    pub fn checked_next(&self) -> Option<Self> {
        let x = self.y.checked_mul(&T::two())?.checked_add(&self.x)?;
        let y = self.x.checked_add(&self.y)?;
        Some(PellPair {
            k: self.k + 1,
            x,
            y,
        })
    }

    /// Checks `x² − 2y² = (−1)^k`, squaring in arbitrary precision.
    pub fn satisfies_norm_equation(&self) -> bool {
        let (x, y) = (self.x.to_big(), self.y.to_big());
        let x2 = &x * &x;
        let two_y2 = &y * &y * 2u32;
        match Parity::of(self.k) {
            Parity::Even => x2 == two_y2 + 1u32,
            Parity::Odd => x2 + 1u32 == two_y2,
        }
    }
}

/// Iterates `(1 + √2)^0, (1 + √2)^1, …` until `T` overflows.
#[derive(Debug, Clone)]
pub struct PellPairs<T> {
    next: Option<PellPair<T>>,
}

impl<T: Natural> Default for PellPairs<T> {
    fn default() -> Self {
        PellPairs {
            next: Some(PellPair::unit()),
        }
    }
}

impl<T: Natural> Iterator for PellPairs<T> {
    type Item = PellPair<T>;

    fn next(&mut self) -> Option<PellPair<T>> {
        let current = self.next.take()?;
        self.next = current.checked_next();
        Some(current)
    }
}

pub fn pell_pairs<T: Natural>() -> PellPairs<T> {
    PellPairs::default()
}

/// `(1 + √2)^k` by repeated multiplication by the unit.
pub fn pell_pair<T: Natural>(k: u64) -> Result<PellPair<T>> {
    let mut pair = PellPair::unit();
    for _ in 0..k {
        pair = pair.checked_next().ok_or(Error::Overflow("pell_pair"))?;
    }
    Ok(pair)
}

/// `Σ_{j ≡ parity (mod 2), j < k} 2^⌊j/2⌋ · C(k, j)`, with the binomials
/// advanced by `C(k, j+1) = C(k, j)·(k − j)/(j + 1)`.
///
/// Starting at `j = 0` gives the rational part of `(1 + √2)^k` truncated
/// before `j = k`; starting at `j = 1` gives the `√2` part likewise.
fn weighted_binomial_sum<T: Natural>(k: u64, first: u64) -> Result<T> {
    let overflow = || Error::Overflow("binomial sum");
    let mut binom = T::one();
    // 2^⌊j/2⌋
    let mut weight = T::one();
    let mut sum = T::zero();
    for j in 0..k {
        if j >= first && (j - first).is_multiple_of(2) {
            let term = binom.checked_mul(&weight).ok_or_else(overflow)?;
            sum = sum.checked_add(&term).ok_or_else(overflow)?;
        }
        if j % 2 == 1 && j + 1 < k {
            weight = weight.checked_mul(&T::two()).ok_or_else(overflow)?;
        }
        let num = T::from_u64(k - j).ok_or_else(overflow)?;
        let den = T::from_u64(j + 1).ok_or_else(overflow)?;
        binom = binom.checked_mul(&num).ok_or_else(overflow)? / den;
    }
    Ok(sum)
}

/// `C(k,0) + 2·C(k,2) + 4·C(k,4) + ⋯ + 2^((k−1)/2)·C(k,k−1)` for odd `k`.
pub fn binomial_sum_odd<T: Natural>(k: u64) -> Result<T> {
    if k.is_multiple_of(2) {
        return Err(Error::domain(format!("k must be odd (got {k})")));
    }
    weighted_binomial_sum(k, 0)
}

/// `C(k,1) + 2·C(k,3) + ⋯ + 2^((k−2)/2)·C(k,k−1)` for even `k ≥ 2`.
pub fn binomial_sum_even<T: Natural>(k: u64) -> Result<T> {
    if k % 2 == 1 || k == 0 {
        return Err(Error::domain(format!("k must be even and ≥ 2 (got {k})")));
    }
    weighted_binomial_sum(k, 1)
}

/// An index `n ≥ 2` at which `a_n` is a perfect square, with its certificate.
///
/// Odd `k`: `n = root_a²` and `(n + 1)/2 = root_b²`.
/// Even `k`: `n = 2·root_b²` and `n + 1 = root_a²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareIndex<T> {
    pub k: u64,
    pub n: T,
    pub parity: Parity,
    pub root_a: T,
    pub root_b: T,
}

impl<T: Natural> SquareIndex<T> {
    fn from_pair(pair: PellPair<T>) -> Option<Self> {
        let parity = Parity::of(pair.k);
        let n = match parity {
            Parity::Odd => pair.x.checked_mul(&pair.x)?,
            Parity::Even => pair.y.checked_mul(&pair.y)?.checked_mul(&T::two())?,
        };
        Some(SquareIndex {
            k: pair.k,
            n,
            parity,
            root_a: pair.x,
            root_b: pair.y,
        })
    }

    /// `√(2n(n+1)) = 2·root_a·root_b`.
    pub fn core_root(&self) -> T {
        T::two() * self.root_a.clone() * self.root_b.clone()
    }

    /// Re-derives every stated relation from scratch, in arbitrary precision.
    pub fn verify(&self) -> bool {
        let (n, a, b) = (self.n.to_big(), self.root_a.to_big(), self.root_b.to_big());
        let n1 = &n + 1u32;
        let family = match self.parity {
            Parity::Odd => n.is_odd() && n == &a * &a && n1 == &b * &b * 2u32,
            Parity::Even => n.is_even() && n == &b * &b * 2u32 && n1 == &a * &a,
        };
        let core = &n * &n1 * 2u32;
        let root = &a * &b * 2u32;
        family && core == &root * &root && is_perfect_square(&core)
    }
}

/// The square index generated by `(1 + √2)^k`, `k ≥ 2`.
///
/// `k = 1` would give `n = 1`, which precedes the sequence's first index.
pub fn square_index_from_k<T: Natural>(k: u64) -> Result<SquareIndex<T>> {
    if k < 2 {
        return Err(Error::domain(format!(
            "k must be ≥ 2 (k = {k} gives n < 2)"
        )));
    }
    SquareIndex::from_pair(pell_pair(k)?).ok_or(Error::Overflow("square_index_from_k"))
}

/// Square indices in increasing order, `k = 2, 3, …`, until `T` overflows.
pub fn square_indices<T: Natural>() -> impl Iterator<Item = SquareIndex<T>> {
    pell_pairs().skip(2).map_while(SquareIndex::from_pair)
}

/// Every `n` in `[2, max_n]` with `a_n` a perfect square, increasing.
pub fn enumerate_square_indices<T: Natural>(max_n: &T) -> Vec<SquareIndex<T>> {
    square_indices().take_while(|s| s.n <= *max_n).collect()
}
