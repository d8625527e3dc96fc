//! The prime fields GF(p).

use crate::error::{Error, Result};
use crate::fields::{check_size_bound, is_prime, Field};
use crate::DEFAULT_MAX_FIELD_SIZE;

/// The field of integers modulo a prime `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

/// An element of GF(p): a canonical residue `0 <= value < p` tagged with its
/// modulus so foreign elements are detectable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    p: u64,
}

impl Fp {
    /// The canonical residue.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// The modulus this element lives under.
    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl PrimeField {
    /// Construct GF(p). Errors if `p` is not prime or exceeds the default
    /// size bound.
    pub fn new(p: u64) -> Result<Self> {
        Self::with_bound(p, DEFAULT_MAX_FIELD_SIZE)
    }

    /// Construct GF(p) under an explicit size bound.
    pub fn with_bound(p: u64, bound: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        check_size_bound(p, bound)?;
        Ok(PrimeField { p })
    }

    /// The modulus.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The canonical element for an arbitrary unsigned integer.
    pub fn from_u64(&self, n: u64) -> Fp {
        Fp {
            value: n % self.p,
            p: self.p,
        }
    }

    /// The canonical element for an arbitrary signed integer.
    pub fn from_i64(&self, n: i64) -> Fp {
        let m = self.p as i64;
        Fp {
            value: n.rem_euclid(m) as u64,
            p: self.p,
        }
    }
}

impl Field for PrimeField {
    type Elem = Fp;

    fn zero(&self) -> Fp {
        Fp { value: 0, p: self.p }
    }

    fn one(&self) -> Fp {
        Fp {
            value: 1 % self.p,
            p: self.p,
        }
    }

    fn add(&self, a: &Fp, b: &Fp) -> Fp {
        Fp {
            value: (a.value + b.value) % self.p,
            p: self.p,
        }
    }

    fn neg(&self, a: &Fp) -> Fp {
        Fp {
            value: (self.p - a.value) % self.p,
            p: self.p,
        }
    }

    fn mul(&self, a: &Fp, b: &Fp) -> Fp {
        Fp {
            value: (a.value * b.value) % self.p,
            p: self.p,
        }
    }

    fn inv(&self, a: &Fp) -> Result<Fp> {
        if a.value == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Fp {
            value: mod_inverse(a.value, self.p),
            p: self.p,
        })
    }

    fn contains(&self, a: &Fp) -> bool {
        a.p == self.p && a.value < self.p
    }

    fn order(&self) -> Option<u64> {
        Some(self.p)
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn elem_at(&self, index: u64) -> Option<Fp> {
        (index < self.p).then_some(Fp {
            value: index,
            p: self.p,
        })
    }

    fn index_of(&self, a: &Fp) -> Result<u64> {
        self.guard(a)?;
        Ok(a.value)
    }

    fn label(&self, a: &Fp) -> String {
        a.value.to_string()
    }

    fn spec_string(&self) -> String {
        format!("gf:{}", self.p)
    }
}

/// Modular inverse of `a` modulo prime `p` (`a != 0`), by extended Euclid.
pub(crate) fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "modulus must be prime and a nonzero");
    t.rem_euclid(p as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_modulus() {
        assert!(matches!(PrimeField::new(4), Err(Error::NotPrime(4))));
        assert!(matches!(PrimeField::new(1), Err(Error::NotPrime(1))));
    }

    #[test]
    fn rejects_oversized_modulus() {
        assert!(matches!(
            PrimeField::new(67),
            Err(Error::FieldTooLarge { size: 67, bound: 64 })
        ));
        assert!(PrimeField::with_bound(67, 128).is_ok());
    }

    #[test]
    fn gf5_arithmetic() {
        let f = PrimeField::new(5).unwrap();
        let two = f.from_u64(2);
        let three = f.from_u64(3);
        assert_eq!(f.mul(&two, &three), f.one());
        assert_eq!(f.add(&two, &three), f.zero());
        assert_eq!(f.inv(&two).unwrap(), three);
        assert!(matches!(f.inv(&f.zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn detects_foreign_elements() {
        let f5 = PrimeField::new(5).unwrap();
        let f7 = PrimeField::new(7).unwrap();
        let x = f7.from_u64(3);
        assert!(!f5.contains(&x));
        assert!(f5.guard(&x).is_err());
        assert!(f5.index_of(&x).is_err());
    }

    #[test]
    fn enumeration_is_total_and_ordered() {
        let f = PrimeField::new(7).unwrap();
        let elems = f.elements().unwrap();
        assert_eq!(elems.len(), 7);
        assert_eq!(elems[0], f.zero());
        assert_eq!(elems[1], f.one());
        for (i, e) in elems.iter().enumerate() {
            assert_eq!(f.index_of(e).unwrap(), i as u64);
        }
        assert_eq!(f.elem_at(7), None);
    }
}
