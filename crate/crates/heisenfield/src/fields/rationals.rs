//! The rational field with an explicit two-way enumeration.
//!
//! The enumeration orders rationals by height, where the height of a reduced
//! fraction `p/q` (`q >= 1`) is `max(|p|, q)`. Index `0` is `0`; after that
//! the positive rationals of height `1, 2, 3, ...` are listed block by
//! block, each block in increasing numeric order, and every positive value
//! is immediately followed by its negative. The first sixteen values are
//! `0, 1, -1, 1/2, -1/2, 2, -2, 1/3, -1/3, 2/3, -2/3, 3/2, -3/2, 3, -3, 1/4`.
//!
//! Within height `h > 1` the block is `p/h` for `p < h` coprime to `h`
//! ascending, then `h/q` for `q < h` coprime to `h` with `q` descending, so
//! the whole block ascends numerically. The index of `p/q` grows like
//! `1.2 * max(|p|, q)^2`, so sums and products of modest rationals stay well
//! inside the `u64` index range; heights beyond [`HEIGHT_CAP`] are out of
//! range (`elem_at` returns `None`, `index_of` reports
//! [`Error::EnumerationOverflow`]).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fields::Field;

/// An exact rational number.
pub type Rat = BigRational;

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Rationals {
    pub fn new() -> Self {
        Rationals
    }

    /// Exact rational from an integer pair, `den != 0`.
    pub fn from_pair(&self, num: i64, den: i64) -> Result<Rat> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Exact rational from an integer.
    pub fn from_i64(&self, n: i64) -> Rat {
        BigRational::from(BigInt::from(n))
    }
}

impl Field for Rationals {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        BigRational::zero()
    }

    fn one(&self) -> Rat {
        BigRational::one()
    }

    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }

    fn neg(&self, a: &Rat) -> Rat {
        -a
    }

    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }

    fn inv(&self, a: &Rat) -> Result<Rat> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(a.recip())
    }

    fn contains(&self, a: &Rat) -> bool {
        // BigRational::new keeps values reduced with a positive denominator;
        // reject anything built some other way that violates that.
        use num_integer::Integer;
        a.denom().is_positive() && a.numer().gcd(a.denom()).is_one()
    }

    fn order(&self) -> Option<u64> {
        None
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn elem_at(&self, index: u64) -> Option<Rat> {
        rational_at(index)
    }

    fn index_of(&self, a: &Rat) -> Result<u64> {
        self.guard(a)?;
        rational_index(a)
    }

    fn label(&self, a: &Rat) -> String {
        a.to_string()
    }

    fn spec_string(&self) -> String {
        "q".into()
    }
}

/// Largest numerator/denominator magnitude the enumeration scans to. The
/// last in-range index is about `1.2 * HEIGHT_CAP^2`; group ids built from
/// coordinate indices near the cap still fit comfortably in a `u64`.
pub const HEIGHT_CAP: u64 = 1 << 16;

/// The rational at the given enumeration index, or `None` when the index
/// lies beyond the height-capped range.
pub fn rational_at(index: u64) -> Option<Rat> {
    if index == 0 {
        return Some(BigRational::zero());
    }
    let mut i = index - 1;
    let mut h = 1u64;
    loop {
        if h > HEIGHT_CAP {
            return None;
        }
        let signed = 2 * height_block_len(h);
        if i < signed {
            break;
        }
        i -= signed;
        h += 1;
    }
    let (num, den) = height_block_entry(h, i / 2);
    let r = BigRational::new(BigInt::from(num), BigInt::from(den));
    Some(if i % 2 == 1 { -r } else { r })
}

/// The enumeration index of a rational, or an overflow error when its
/// height exceeds the capped range.
pub fn rational_index(r: &Rat) -> Result<u64> {
    if r.is_zero() {
        return Ok(0);
    }
    let overflow = || Error::EnumerationOverflow(format!("rational {r} exceeds the height cap"));
    let num = r.numer().abs().to_u64().ok_or_else(overflow)?;
    let den = r.denom().to_u64().ok_or_else(overflow)?;
    let h = num.max(den);
    if h > HEIGHT_CAP {
        return Err(overflow());
    }
    let base: u64 = 1 + (1..h).map(|m| 2 * height_block_len(m)).sum::<u64>();
    let j = if h == 1 {
        0
    } else if num < den {
        // Ascending `p/h` sub-block: count smaller coprime numerators.
        (1..num).filter(|&p| gcd(p, h) == 1).count() as u64
    } else {
        // Descending `h/q` sub-block after all of `p/h`.
        phi(h) + ((den + 1)..h).filter(|&q| gcd(q, h) == 1).count() as u64
    };
    Ok(base + 2 * j + u64::from(!r.is_positive()))
}

fn gcd(a: u64, b: u64) -> u64 {
    use num_integer::Integer;
    a.gcd(&b)
}

/// Euler's totient by trial division.
fn phi(h: u64) -> u64 {
    let mut n = h;
    let mut result = h;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// How many positive rationals have height exactly `h`.
fn height_block_len(h: u64) -> u64 {
    if h == 1 {
        1
    } else {
        2 * phi(h)
    }
}

/// The `j`-th (0-based) positive rational of height `h`, increasing order.
fn height_block_entry(h: u64, j: u64) -> (u64, u64) {
    if h == 1 {
        return (1, 1);
    }
    let phi_h = phi(h);
    if j < phi_h {
        let mut seen = 0;
        for p in 1..h {
            if gcd(p, h) == 1 {
                if seen == j {
                    return (p, h);
                }
                seen += 1;
            }
        }
    } else {
        let mut seen = phi_h;
        for q in (1..h).rev() {
            if gcd(q, h) == 1 {
                if seen == j {
                    return (h, q);
                }
                seen += 1;
            }
        }
    }
    unreachable!("height block position out of range")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rat {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn first_sixteen_frozen() {
        let expected = [
            (0, 1),
            (1, 1),
            (-1, 1),
            (1, 2),
            (-1, 2),
            (2, 1),
            (-2, 1),
            (1, 3),
            (-1, 3),
            (2, 3),
            (-2, 3),
            (3, 2),
            (-3, 2),
            (3, 1),
            (-3, 1),
            (1, 4),
        ];
        for (i, (n, d)) in expected.into_iter().enumerate() {
            assert_eq!(rational_at(i as u64).unwrap(), q(n, d), "index {i}");
        }
    }

    #[test]
    fn enumeration_round_trips() {
        for i in 0..5000u64 {
            let r = rational_at(i).unwrap();
            assert_eq!(rational_index(&r).unwrap(), i, "index {i}");
        }
    }

    #[test]
    fn enumeration_is_injective() {
        let mut seen = std::collections::HashSet::new();
        for i in 0..5000u64 {
            assert!(seen.insert(rational_at(i).unwrap()), "duplicate at index {i}");
        }
    }

    #[test]
    fn index_growth_is_quadratic_in_height() {
        // 1/35 opens the height-35 block; a depth-based ordering would
        // have pushed its index past 2^34.
        assert_eq!(rational_index(&q(1, 35)).unwrap(), 1439);
        assert_eq!(rational_at(1439).unwrap(), q(1, 35));
    }

    #[test]
    fn deep_heights_overflow_cleanly() {
        let tiny = q(1, 1_000_000_000_000_000);
        assert!(matches!(
            rational_index(&tiny),
            Err(Error::EnumerationOverflow(_))
        ));
        assert!(rational_at(u64::MAX).is_none());
    }

    #[test]
    fn arithmetic_is_exact() {
        let f = Rationals::new();
        let half = f.from_pair(1, 2).unwrap();
        let third = f.from_pair(1, 3).unwrap();
        assert_eq!(f.add(&half, &third), f.from_pair(5, 6).unwrap());
        assert_eq!(f.mul(&half, &third), f.from_pair(1, 6).unwrap());
        assert_eq!(f.inv(&half).unwrap(), f.from_i64(2));
        assert!(f.inv(&f.zero()).is_err());
        assert_eq!(f.sub(&half, &half), f.zero());
    }

    #[test]
    fn negative_fractions_display() {
        let f = Rationals::new();
        assert_eq!(f.label(&f.from_pair(-1, 2).unwrap()), "-1/2");
        assert_eq!(f.label(&f.from_i64(3)), "3");
    }
}
