//! Unsigned integer abstraction shared by every algorithm in the crate.
//!
//! All routines are written once against [`Natural`] and instantiated for the
//! fixed-width unsigned primitives and for [`BigUint`]. Fixed-width types are
//! convenient for sweeps over small indices; the sequence terms themselves
//! outgrow every primitive almost immediately, so anything that builds a
//! product goes through checked arithmetic and reports overflow.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::{BigUint, ToBigUint};
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, ToPrimitive, Unsigned};

/// An exact nonnegative integer.
pub trait Natural:
    Integer
    + Unsigned
    + Clone
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + FromPrimitive
    + ToPrimitive
    + ToBigUint
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + 'static
{
    /// Number of significant bits; zero for zero.
    fn bit_len(&self) -> u64;

    /// `2^exp`. Callers keep `exp` below the type width.
    fn pow2(exp: u64) -> Self;

    /// Lowest 64 bits of the value.
    fn low_u64(&self) -> u64;

    /// `self >> bits`, for `bits` below the type width.
    fn shr_bits(&self, bits: u64) -> Self;

    /// `self << bits`. The caller guarantees the result fits.
    fn shl_bits(&self, bits: u64) -> Self;

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn to_big(&self) -> BigUint {
        self.to_biguint().expect("unsigned values always convert")
    }
}

macro_rules! impl_natural_prim {
    ($($t:ty)*) => ($(
        impl Natural for $t {
            #[inline]
            fn bit_len(&self) -> u64 {
                (<$t>::BITS - self.leading_zeros()) as u64
            }

            #[inline]
            fn pow2(exp: u64) -> Self {
                (1 as $t) << exp
            }

            #[inline]
            fn low_u64(&self) -> u64 {
                *self as u64
            }

            #[inline]
            fn shr_bits(&self, bits: u64) -> Self {
                *self >> bits
            }

            #[inline]
            fn shl_bits(&self, bits: u64) -> Self {
                *self << bits
            }
        }
    )*)
}

impl_natural_prim!(u8 u16 u32 u64 u128 usize);

impl Natural for BigUint {
    #[inline]
    fn bit_len(&self) -> u64 {
        self.bits()
    }

    #[inline]
    fn pow2(exp: u64) -> Self {
        BigUint::from(1u8) << exp
    }

    #[inline]
    fn low_u64(&self) -> u64 {
        self.iter_u64_digits().next().unwrap_or(0)
    }

    #[inline]
    fn shr_bits(&self, bits: u64) -> Self {
        self >> bits
    }

    #[inline]
    fn shl_bits(&self, bits: u64) -> Self {
        self << bits
    }
}
