//! Exact fields: GF(p), GF(p^k), and the rationals.
//!
//! Everything downstream (the Heisenberg construction, recovery, the
//! interpretation machinery) is generic over the [`Field`] trait. A field
//! here is a *context object*: `GF(5)` and `GF(7)` are different values of
//! the same type, and elements only make sense relative to the context that
//! produced them. All arithmetic is exact; there is no floating point
//! anywhere in this crate.
//!
//! Elements are kept in canonical form by construction (residues reduced,
//! polynomial coefficients reduced, rationals in lowest terms with positive
//! denominator), so `Eq`/`Hash` on elements coincide with field equality.
//!
//! Each field carries a total enumeration `elem_at(0), elem_at(1), ...` of
//! its universe (finite fields stop at `order() - 1`, the rationals never
//! stop). The enumeration order is part of the contract: group elements,
//! black-box ids and JSON tables are all derived from it.

mod galois;
mod prime;
mod rationals;

pub use galois::{parse_poly, poly_string, GaloisField, GfElem};
pub use prime::{Fp, PrimeField};
pub use rationals::{rational_at, rational_index, Rat, Rationals};

use std::fmt::Debug;
use std::hash::Hash;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::DEFAULT_MAX_FIELD_SIZE;

/// An exact field, presented as a context object.
///
/// Implementations must keep elements canonical: any `Elem` returned by a
/// trait method satisfies `contains`, and `Eq` on elements agrees with
/// equality in the field.
pub trait Field: Clone + Debug + Send + Sync + 'static {
    /// Element representation. Equality and hashing are field equality.
    type Elem: Clone + Eq + Hash + Debug + Send + Sync + 'static;

    /// Additive identity.
    fn zero(&self) -> Self::Elem;
    /// Multiplicative identity.
    fn one(&self) -> Self::Elem;
    /// Addition.
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Additive inverse.
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplication.
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; fails on zero.
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// Subtraction.
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// Division; fails on zero divisor.
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Does this element belong to this field context (right modulus, right
    /// characteristic, canonical form)?
    fn contains(&self, a: &Self::Elem) -> bool;

    /// Error out unless `contains(a)`.
    fn guard(&self, a: &Self::Elem) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::ctx_mismatch(self.spec_string(), a))
        }
    }

    /// Number of elements; `None` for infinite fields.
    fn order(&self) -> Option<u64>;

    /// Characteristic (`0` for the rationals).
    fn characteristic(&self) -> u64;

    /// Enumeration: the element with the given index, or `None` past the end
    /// of a finite field. Index `0` is always zero and index `1` is always
    /// one.
    fn elem_at(&self, index: u64) -> Option<Self::Elem>;

    /// Inverse of `elem_at`. Fails on foreign elements, and on rationals
    /// whose enumeration index does not fit in `u64`.
    fn index_of(&self, a: &Self::Elem) -> Result<u64>;

    /// Human-readable rendering of an element.
    fn label(&self, a: &Self::Elem) -> String;

    /// The parseable field descriptor: `gf:5`, `gf:4:x^2+x+1`, `q`.
    fn spec_string(&self) -> String;

    /// Iterate over the whole (finite) field in enumeration order.
    fn elements(&self) -> Result<Vec<Self::Elem>> {
        let n = self
            .order()
            .ok_or_else(|| Error::RequiresFinite("field enumeration".into()))?;
        Ok((0..n).map(|i| self.elem_at(i).expect("index < order")).collect())
    }
}

/// A parsed field descriptor, the textual form accepted by the CLI and
/// stored in group files.
///
/// Grammar: `gf:N` for prime `N`; `gf:N:POLY` or `gf:p^k:POLY` for the
/// extension field of order `N = p^k` with the given monic modulus; `q` for
/// the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldSpec {
    Prime(u64),
    Ext { p: u64, k: u32, modulus: Vec<u64> },
    Rationals,
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rationals);
        }
        let Some(rest) = s.strip_prefix("gf:") else {
            return Err(Error::Parse(format!(
                "unrecognized field spec `{s}` (expected gf:p, gf:p^k:modulus, or q)"
            )));
        };
        let (size_part, modulus_part) = match rest.find(':') {
            Some(i) => (&rest[..i], Some(&rest[i + 1..])),
            None => (rest, None),
        };
        let (p, k) = parse_prime_power(size_part)?;
        match (k, modulus_part) {
            (1, None) => Ok(FieldSpec::Prime(p)),
            (1, Some(m)) => Err(Error::Parse(format!(
                "prime field gf:{p} does not take a modulus (got `{m}`)"
            ))),
            (_, None) => Err(Error::Parse(format!(
                "extension field gf:{} requires an explicit modulus, e.g. gf:4:x^2+x+1",
                size_part
            ))),
            (_, Some(m)) => {
                let modulus = parse_poly(m, p)?;
                Ok(FieldSpec::Ext { p, k, modulus })
            }
        }
    }
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "gf:{p}"),
            FieldSpec::Ext { p, k, modulus } => {
                write!(f, "gf:{}:{}", p.pow(*k), poly_string(modulus))
            }
            FieldSpec::Rationals => write!(f, "q"),
        }
    }
}

/// Parse `N` or `p^k` into `(p, k)` with `p` prime and `k >= 1`.
fn parse_prime_power(s: &str) -> Result<(u64, u32)> {
    let parse_num = |t: &str| -> Result<u64> {
        t.parse::<u64>()
            .map_err(|_| Error::Parse(format!("`{t}` is not a number")))
    };
    if let Some((base, exp)) = s.split_once('^') {
        let p = parse_num(base)?;
        let k: u32 = exp
            .parse()
            .map_err(|_| Error::Parse(format!("`{exp}` is not an exponent")))?;
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::Parse("exponent must be at least 1".into()));
        }
        return Ok((p, k));
    }
    let n = parse_num(s)?;
    factor_prime_power(n)
}

/// Factor `n` as `p^k`; errors if `n` is not a prime power.
pub fn factor_prime_power(n: u64) -> Result<(u64, u32)> {
    if n < 2 {
        return Err(Error::Parse(format!("{n} is not a prime power")));
    }
    let mut p = 0;
    for d in 2..=n {
        if d * d > n {
            p = n; // n itself is prime
            break;
        }
        if n % d == 0 {
            p = d;
            break;
        }
    }
    let mut m = n;
    let mut k = 0u32;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    if m != 1 {
        return Err(Error::Parse(format!("{n} is not a prime power")));
    }
    Ok((p, k))
}

/// Trial-division primality test; ample for the sizes this crate admits.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    /// Build the prime field this spec describes, or error if it is not a
    /// prime field.
    pub fn build_prime(&self) -> Result<PrimeField> {
        match self {
            FieldSpec::Prime(p) => PrimeField::new(*p),
            other => Err(Error::Parse(format!("{other} is not a prime field"))),
        }
    }

    /// Build the extension field this spec describes.
    pub fn build_ext(&self) -> Result<GaloisField> {
        match self {
            FieldSpec::Ext { p, k, modulus } => GaloisField::new(*p, *k, modulus.clone()),
            other => Err(Error::Parse(format!("{other} is not an extension field"))),
        }
    }

    /// Field size, if finite.
    pub fn size(&self) -> Option<u64> {
        match self {
            FieldSpec::Prime(p) => Some(*p),
            FieldSpec::Ext { p, k, .. } => Some(p.pow(*k)),
            FieldSpec::Rationals => None,
        }
    }
}

/// Check a proposed finite-field size against a bound.
pub(crate) fn check_size_bound(size: u64, bound: u64) -> Result<()> {
    if size > bound {
        Err(Error::FieldTooLarge { size, bound })
    } else {
        Ok(())
    }
}

/// The default size bound re-exported for convenience.
pub fn default_size_bound() -> u64 {
    DEFAULT_MAX_FIELD_SIZE
}
