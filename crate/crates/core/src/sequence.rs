//! The products `a_n = (2²−1)(3²−1)⋯(n²−1)`, exact square roots, and the
//! reduction of "is `a_n` a square" to "is `2n(n+1)` a square".

use crate::error::{Error, Result};
use crate::natural::Natural;

/// First index at which the sequence is defined.
pub const START_INDEX: u64 = 2;

const fn residue_table<const M: usize>() -> [bool; M] {
    let mut table = [false; M];
    let mut r = 0;
    while r < M {
        table[(r * r) % M] = true;
        r += 1;
    }
    table
}

/// Squares modulo 64: 12 of the 64 classes.
static SQUARES_MOD_64: [bool; 64] = residue_table::<64>();
/// Squares modulo 63 = 7·9: 16 of the 63 classes.
static SQUARES_MOD_63: [bool; 63] = residue_table::<63>();

/// `⌊√x⌋`, by integer Newton iteration started above the root.
///
/// Small inputs start from `2^⌈bits/2⌉`. Wider inputs start from
/// `(⌊√(x >> 2s)⌋ + 1) << s` with `s ≈ bits/4`, which is still `≥ √x` and
/// already carries half of the root's bits, so one or two steps finish it.
/// From above, the Newton step decreases strictly until it reaches the
/// floor root; the loop stops at the first non-decreasing iterate.
pub fn integer_sqrt<T: Natural>(x: &T) -> T {
    if x.is_zero() {
        return T::zero();
    }
    let bits = x.bit_len();
    let start = if bits <= 64 {
        T::pow2(bits.div_ceil(2))
    } else {
        let shift = bits / 4;
        (integer_sqrt(&x.shr_bits(2 * shift)) + T::one()).shl_bits(shift)
    };
    newton_descend(x, start)
}

fn newton_descend<T: Natural>(x: &T, mut r: T) -> T {
    loop {
        // (r + x/r) / 2 without forming r + x/r, which can overflow for
        // fixed-width T near its maximum.
        let q = x.clone() / r.clone();
        let next = if q >= r {
            r.clone() + (q - r.clone()) / T::two()
        } else {
            r.clone() - (r.clone() - q + T::one()) / T::two()
        };
        if next >= r {
            return r;
        }
        r = next;
    }
}

/// Cheap necessary condition for squareness: residues mod 64 and mod 63.
pub fn passes_residue_filter<T: Natural>(x: &T) -> bool {
    if !SQUARES_MOD_64[(x.low_u64() & 63) as usize] {
        return false;
    }
    let m63 = x.mod_floor(&T::from_u8(63).expect("63 fits every width"));
    SQUARES_MOD_63[m63.low_u64() as usize]
}

/// The exact square root of `x`, if `x` is a perfect square.
pub fn perfect_sqrt<T: Natural>(x: &T) -> Option<T> {
    if !passes_residue_filter(x) {
        return None;
    }
    let r = integer_sqrt(x);
    (r.clone() * r.clone() == *x).then_some(r)
}

pub fn is_perfect_square<T: Natural>(x: &T) -> bool {
    perfect_sqrt(x).is_some()
}

/// One term of the sequence together with its squareness verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermResult<T> {
    pub n: T,
    pub a_n: T,
    pub is_square: bool,
    /// `√a_n`, present exactly when `a_n` is a perfect square.
    pub sqrt_witness: Option<T>,
}

impl<T: Natural> TermResult<T> {
    fn new(n: T, a_n: T) -> Self {
        let sqrt_witness = perfect_sqrt(&a_n);
        TermResult {
            n,
            a_n,
            is_square: sqrt_witness.is_some(),
            sqrt_witness,
        }
    }

    /// Number of decimal digits of `a_n`.
    pub fn decimal_digits(&self) -> usize {
        self.a_n.to_big().to_str_radix(10).len()
    }
}

/// `a_n` for `n ≥ 2`, built as the running product of `k² − 1`.
pub fn compute_term<T: Natural>(n: &T) -> Result<TermResult<T>> {
    check_index(n)?;
    let mut product = T::one();
    let mut k = T::two();
    while k <= *n {
        product = product
            .checked_mul(&factor(&k)?)
            .ok_or(Error::Overflow("compute_term"))?;
        k = k + T::one();
    }
    Ok(TermResult::new(n.clone(), product))
}

/// `k² − 1 = (k − 1)(k + 1)`.
fn factor<T: Natural>(k: &T) -> Result<T> {
    let above = k.checked_add(&T::one()).ok_or(Error::Overflow("k + 1"))?;
    (k.clone() - T::one())
        .checked_mul(&above)
        .ok_or(Error::Overflow("k^2 - 1"))
}

fn check_index<T: Natural>(n: &T) -> Result<()> {
    if *n < T::two() {
        return Err(Error::domain(format!(
            "index must be ≥ {START_INDEX} (got {n})"
        )));
    }
    Ok(())
}

/// Successive terms `a_2, a_3, …`, each one multiplication away from the last.
///
/// Yields an error and then stops if `T` cannot hold the next product.
#[derive(Debug, Clone)]
pub struct Terms<T> {
    next_n: T,
    product: T,
    done: bool,
}

impl<T: Natural> Terms<T> {
    pub fn new() -> Self {
        Terms {
            next_n: T::two(),
            product: T::one(),
            done: false,
        }
    }
}

impl<T: Natural> Default for Terms<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Natural> Iterator for Terms<T> {
    type Item = Result<TermResult<T>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let step = factor(&self.next_n).and_then(|f| {
            self.product
                .checked_mul(&f)
                .ok_or(Error::Overflow("Terms::next"))
        });
        match step {
            Ok(product) => {
                self.product = product;
                let n = self.next_n.clone();
                self.next_n = self.next_n.clone() + T::one();
                Some(Ok(TermResult::new(n, self.product.clone())))
            }
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

/// `a_n = core · cofactor_sqrt²` with `core = 2n(n+1)` and
/// `cofactor_sqrt = 3·4⋯(n−1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction<T> {
    pub n: T,
    pub core: T,
    pub cofactor_sqrt: T,
    /// Whether `a_n = core · cofactor_sqrt²` holds literally. False only at
    /// `n = 2`, where `a_2 = 3` but `core = 12` and the cofactor is empty.
    pub identity_holds: bool,
}

/// Split `a_n` into its square-free-relevant core `2n(n+1)` and a square.
///
/// Since the cofactor is a square, `a_n` is a square iff `core` is. That
/// equivalence also holds at `n = 2` (3 and 12 are both non-squares) even
/// though the product identity does not.
pub fn core_reduction<T: Natural>(n: &T) -> Result<Reduction<T>> {
    check_index(n)?;
    let n_plus_1 = n.checked_add(&T::one()).ok_or(Error::Overflow("n + 1"))?;
    let core = T::two()
        .checked_mul(n)
        .and_then(|v| v.checked_mul(&n_plus_1))
        .ok_or(Error::Overflow("2n(n+1)"))?;
    let mut cofactor_sqrt = T::one();
    let mut k = T::from_u8(3).expect("3 fits every width");
    while k < *n {
        cofactor_sqrt = cofactor_sqrt
            .checked_mul(&k)
            .ok_or(Error::Overflow("cofactor"))?;
        k = k + T::one();
    }
    Ok(Reduction {
        identity_holds: *n > T::two(),
        n: n.clone(),
        core,
        cofactor_sqrt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn residue_tables_have_expected_sizes() {
        assert_eq!(SQUARES_MOD_64.iter().filter(|&&b| b).count(), 12);
        assert_eq!(SQUARES_MOD_63.iter().filter(|&&b| b).count(), 16);
    }

    #[test]
    fn residue_filter_never_rejects_a_square() {
        for r in 0u64..20_000 {
            assert!(passes_residue_filter(&(r * r)), "{r}^2 rejected");
        }
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(integer_sqrt(&0u64), 0);
        assert_eq!(integer_sqrt(&144u64), 12);
        assert_eq!(integer_sqrt(&914_457_601u64), 30240);
        assert_eq!(integer_sqrt(&1u8), 1);
        assert_eq!(integer_sqrt(&u64::MAX), u32::MAX as u64);
        assert_eq!(integer_sqrt(&u128::MAX), u64::MAX as u128);
        assert_eq!(integer_sqrt(&u8::MAX), 15);
    }

    #[test]
    fn sqrt_exhaustive_small() {
        for x in 0u32..1_000_000 {
            let r = integer_sqrt(&x) as u64;
            let x = x as u64;
            assert!(r * r <= x && x < (r + 1) * (r + 1), "x = {x}");
        }
    }

    #[test]
    fn square_examples() {
        assert!(is_perfect_square(&0u32));
        assert!(is_perfect_square(&4900u32));
        assert!(!is_perfect_square(&24u32));
        assert!(is_perfect_square(&BigUint::from(914_457_600u64)));
    }

    #[test]
    fn term_examples() {
        let t = compute_term(&2u64).unwrap();
        assert_eq!((t.a_n, t.is_square, t.sqrt_witness), (3, false, None));

        let t = compute_term(&8u64).unwrap();
        assert_eq!(t.a_n, 914_457_600);
        assert_eq!(t.sqrt_witness, Some(30240));
        assert!(t.is_square);

        let t = compute_term(&5u64).unwrap();
        assert_eq!((t.a_n, t.is_square), (8640, false));

        assert!(matches!(compute_term(&1u64), Err(Error::Domain(_))));
        assert!(matches!(compute_term(&0u64), Err(Error::Domain(_))));
    }

    #[test]
    fn term_overflow_is_reported() {
        assert_eq!(compute_term(&30u64), Err(Error::Overflow("compute_term")));
        let last = Terms::<u32>::new().last().unwrap();
        assert!(matches!(last, Err(Error::Overflow(_))));
    }

    #[test]
    fn terms_iterator_matches_compute_term() {
        for t in Terms::<BigUint>::new().take(60) {
            let t = t.unwrap();
            assert_eq!(t, compute_term(&t.n).unwrap());
        }
    }

    #[test]
    fn reduction_examples() {
        let r = core_reduction(&2u64).unwrap();
        assert_eq!((r.core, r.cofactor_sqrt, r.identity_holds), (12, 1, false));

        let r = core_reduction(&3u64).unwrap();
        assert_eq!((r.core, r.cofactor_sqrt, r.identity_holds), (24, 1, true));

        let r = core_reduction(&8u64).unwrap();
        assert_eq!((r.core, r.cofactor_sqrt), (144, 2520));
        assert_eq!(r.core * r.cofactor_sqrt * r.cofactor_sqrt, 914_457_600);

        let r = core_reduction(&5u64).unwrap();
        assert_eq!((r.core, r.cofactor_sqrt), (60, 12));

        assert!(core_reduction(&1u64).is_err());
    }
}
