//! Exhaustive square search in the neighbouring product sequences
//! `∏_{k=a+1}^{n} (k² − a²)` and `∏_{k=1}^{n} (k² + a)`.
//!
//! Results only describe the scanned range; nothing is claimed beyond it.
//!
//! The running product is tracked through the parities of its prime
//! exponents: every factor is at most quadratic in `k` and factors quickly,
//! while the product itself reaches millions of bits within the ranges of
//! interest and becomes divisible by every small modulus, which leaves
//! residue filters nothing to reject.

use std::collections::HashMap;
use std::fmt;

use num_traits::checked_pow;

use crate::error::{Error, Result};
use crate::natural::Natural;
use crate::prime::factorize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    /// Factors `k² − a²`, starting at `k = a + 1`.
    Minus,
    /// Factors `k² + a`, starting at `k = 1`.
    Plus,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Kind::Minus => "minus",
            Kind::Plus => "plus",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSpec<T> {
    kind: Kind,
    a: T,
    start: T,
}

impl<T: Natural> SequenceSpec<T> {
    pub fn new(kind: Kind, a: T) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::domain("shift parameter a must be ≥ 1"));
        }
        let start = match kind {
            Kind::Minus => a.checked_add(&T::one()).ok_or(Error::Overflow("a + 1"))?,
            Kind::Plus => T::one(),
        };
        Ok(SequenceSpec { kind, a, start })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn a(&self) -> &T {
        &self.a
    }

    /// First index of the sequence.
    pub fn start(&self) -> &T {
        &self.start
    }

    /// The factor at index `k` as machine words whose product it is.
    fn factor_parts(&self, k: &T) -> Result<Vec<u64>> {
        let word = |v: T| {
            v.to_u64()
                .ok_or(Error::Overflow("explorer factors must fit in 64 bits"))
        };
        Ok(match self.kind {
            Kind::Minus => vec![
                word(k.clone() - self.a.clone())?,
                word(k.checked_add(&self.a).ok_or(Error::Overflow("k + a"))?)?,
            ],
            Kind::Plus => vec![word(self.factor(k)?)?],
        })
    }

    /// The factor contributed at index `k`.
    pub fn factor(&self, k: &T) -> Result<T> {
        let overflow = || Error::Overflow("sequence factor");
        match self.kind {
            Kind::Minus => {
                let lo = k.checked_sub(&self.a).ok_or_else(overflow)?;
                let hi = k.checked_add(&self.a).ok_or_else(overflow)?;
                lo.checked_mul(&hi).ok_or_else(overflow)
            }
            Kind::Plus => k
                .checked_mul(k)
                .and_then(|sq| sq.checked_add(&self.a))
                .ok_or_else(overflow),
        }
    }
}

impl<T: Natural> fmt::Display for SequenceSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::Minus => write!(f, "prod_{{k={}}}^n (k^2 - {}^2)", self.start, self.a),
            Kind::Plus => write!(f, "prod_{{k=1}}^n (k^2 + {})", self.a),
        }
    }
}

/// An index at which the running product is a perfect square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchHit<T> {
    pub spec: SequenceSpec<T>,
    pub n: T,
    pub sqrt_witness: T,
}

/// Prime exponents of a running product.
#[derive(Debug, Default)]
struct ExponentLedger {
    exponents: HashMap<u64, u64>,
    odd: usize,
}

impl ExponentLedger {
    fn absorb(&mut self, value: u64) {
        for (q, e) in factorize(value) {
            let exp = self.exponents.entry(q).or_insert(0);
            let was_odd = *exp % 2 == 1;
            *exp += u64::from(e);
            match (was_odd, *exp % 2 == 1) {
                (false, true) => self.odd += 1,
                (true, false) => self.odd -= 1,
                _ => {}
            }
        }
    }

    fn is_square(&self) -> bool {
        self.odd == 0
    }

    /// `∏ q^(e/2)`, meaningful when every exponent is even.
    fn half_product<T: Natural>(&self) -> Result<T> {
        let overflow = || Error::Overflow("square root witness");
        let mut powers = self
            .exponents
            .iter()
            .map(|(&q, &e)| {
                let half = usize::try_from(e / 2).map_err(|_| overflow())?;
                checked_pow(T::from_u64(q).ok_or_else(overflow)?, half).ok_or_else(overflow)
            })
            .collect::<Result<Vec<T>>>()?;
        // Pairwise products keep the operands balanced.
        while powers.len() > 1 {
            let mut next = Vec::with_capacity(powers.len().div_ceil(2));
            let mut it = powers.into_iter();
            while let Some(a) = it.next() {
                next.push(match it.next() {
                    Some(b) => a.checked_mul(&b).ok_or_else(overflow)?,
                    None => a,
                });
            }
            powers = next;
        }
        Ok(powers.pop().unwrap_or_else(T::one))
    }
}

/// All `n` in `[start, max_n]` at which the product up to `n` is a square.
pub fn search_squares<T: Natural>(spec: &SequenceSpec<T>, max_n: &T) -> Result<Vec<SearchHit<T>>> {
    if *max_n < spec.start {
        return Err(Error::domain(format!(
            "max_n must be ≥ the first index {} (got {max_n})",
            spec.start
        )));
    }
    let mut hits = Vec::new();
    let mut ledger = ExponentLedger::default();
    let mut k = spec.start.clone();
    while k <= *max_n {
        for part in spec.factor_parts(&k)? {
            ledger.absorb(part);
        }
        if ledger.is_square() {
            hits.push(SearchHit {
                spec: spec.clone(),
                n: k.clone(),
                sqrt_witness: ledger.half_product()?,
            });
        }
        k = k + T::one();
    }
    Ok(hits)
}

/// The product of the sequence from its first index through `n`, built by
/// plain multiplication.
pub fn running_product<T: Natural>(spec: &SequenceSpec<T>, n: &T) -> Result<T> {
    let mut product = T::one();
    let mut k = spec.start.clone();
    while k <= *n {
        product = product
            .checked_mul(&spec.factor(&k)?)
            .ok_or(Error::Overflow("running_product"))?;
        k = k + T::one();
    }
    Ok(product)
}
