//! The extension fields GF(p^k) = GF(p)[x] / (m(x)).
//!
//! Elements are coefficient vectors of length `k` (ascending powers of the
//! generator), reduced modulo `p`. The modulus must be monic of degree `k`
//! and irreducible over GF(p); irreducibility is checked by trial division
//! against every monic polynomial of degree up to `k/2`, which is exact and
//! cheap at the field sizes this crate admits (p^k <= 64 by default).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::{check_size_bound, is_prime, Field};
use crate::DEFAULT_MAX_FIELD_SIZE;

/// Shared, immutable description of a particular GF(p^k).
#[derive(Debug, PartialEq, Eq, Hash)]
struct GfParams {
    p: u64,
    k: u32,
    /// Monic modulus, ascending coefficients, length `k + 1`.
    modulus: Vec<u64>,
}

/// The field GF(p^k) with an explicit irreducible modulus.
#[derive(Debug, Clone)]
pub struct GaloisField {
    params: Arc<GfParams>,
}

/// An element of GF(p^k): `coeffs[i]` is the coefficient of `x^i`,
/// `0 <= coeffs[i] < p`, `coeffs.len() == k`.
#[derive(Debug, Clone)]
pub struct GfElem {
    coeffs: Vec<u64>,
    params: Arc<GfParams>,
}

impl PartialEq for GfElem {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.params == other.params
    }
}

impl Eq for GfElem {}

impl std::hash::Hash for GfElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
        self.params.hash(state);
    }
}

impl GfElem {
    /// Coefficients in ascending powers of the generator, length `k`.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

impl GaloisField {
    /// Construct GF(p^k) with the given monic irreducible modulus
    /// (ascending coefficients, length `k + 1`).
    pub fn new(p: u64, k: u32, modulus: Vec<u64>) -> Result<Self> {
        Self::with_bound(p, k, modulus, DEFAULT_MAX_FIELD_SIZE)
    }

    /// As [`GaloisField::new`] but under an explicit size bound.
    pub fn with_bound(p: u64, k: u32, modulus: Vec<u64>, bound: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k < 2 {
            return Err(Error::InvalidModulus(
                "extension degree must be at least 2 (use PrimeField for k = 1)".into(),
            ));
        }
        let size = (1..=k).try_fold(1u64, |acc, _| {
            acc.checked_mul(p)
                .filter(|&s| s <= bound)
                .ok_or(Error::FieldTooLarge {
                    size: u64::MAX,
                    bound,
                })
        })?;
        check_size_bound(size, bound)?;
        if modulus.len() != k as usize + 1 {
            return Err(Error::InvalidModulus(format!(
                "modulus must have degree {k} (got {} coefficients, need {})",
                modulus.len(),
                k + 1
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus(format!(
                "modulus coefficients must be reduced mod {p}"
            )));
        }
        if modulus[k as usize] != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus(poly_string(&modulus), p));
        }
        Ok(GaloisField {
            params: Arc::new(GfParams { p, k, modulus }),
        })
    }

    pub fn p(&self) -> u64 {
        self.params.p
    }

    pub fn k(&self) -> u32 {
        self.params.k
    }

    /// The modulus polynomial, ascending coefficients.
    pub fn modulus(&self) -> &[u64] {
        &self.params.modulus
    }

    /// The generator `x` of the extension.
    pub fn generator(&self) -> GfElem {
        let mut coeffs = vec![0; self.params.k as usize];
        coeffs[1] = 1;
        GfElem {
            coeffs,
            params: Arc::clone(&self.params),
        }
    }

    /// Build an element from arbitrary ascending coefficients (any length);
    /// reduces modulo `p` and the modulus.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> GfElem {
        let p = self.params.p;
        let reduced: Vec<u64> = coeffs.iter().map(|&c| c % p).collect();
        let rem = poly_rem(&reduced, &self.params.modulus, p);
        self.elem_from_reduced(rem)
    }

    fn elem_from_reduced(&self, mut coeffs: Vec<u64>) -> GfElem {
        coeffs.resize(self.params.k as usize, 0);
        GfElem {
            coeffs,
            params: Arc::clone(&self.params),
        }
    }
}

impl Field for GaloisField {
    type Elem = GfElem;

    fn zero(&self) -> GfElem {
        self.elem_from_reduced(vec![])
    }

    fn one(&self) -> GfElem {
        self.elem_from_reduced(vec![1])
    }

    fn add(&self, a: &GfElem, b: &GfElem) -> GfElem {
        let p = self.params.p;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % p)
            .collect();
        GfElem {
            coeffs,
            params: Arc::clone(&self.params),
        }
    }

    fn neg(&self, a: &GfElem) -> GfElem {
        let p = self.params.p;
        let coeffs = a.coeffs.iter().map(|&x| (p - x) % p).collect();
        GfElem {
            coeffs,
            params: Arc::clone(&self.params),
        }
    }

    fn mul(&self, a: &GfElem, b: &GfElem) -> GfElem {
        let p = self.params.p;
        let prod = poly_mul(&a.coeffs, &b.coeffs, p);
        let rem = poly_rem(&prod, &self.params.modulus, p);
        self.elem_from_reduced(rem)
    }

    fn inv(&self, a: &GfElem) -> Result<GfElem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        let p = self.params.p;
        let inv = poly_mod_inverse(&a.coeffs, &self.params.modulus, p)
            .expect("nonzero elements of a field are invertible");
        Ok(self.elem_from_reduced(inv))
    }

    fn contains(&self, a: &GfElem) -> bool {
        a.params == self.params
            && a.coeffs.len() == self.params.k as usize
            && a.coeffs.iter().all(|&c| c < self.params.p)
    }

    fn order(&self) -> Option<u64> {
        Some(self.params.p.pow(self.params.k))
    }

    fn characteristic(&self) -> u64 {
        self.params.p
    }

    fn elem_at(&self, index: u64) -> Option<GfElem> {
        let n = self.order().expect("finite");
        if index >= n {
            return None;
        }
        let p = self.params.p;
        let mut coeffs = Vec::with_capacity(self.params.k as usize);
        let mut rest = index;
        for _ in 0..self.params.k {
            coeffs.push(rest % p);
            rest /= p;
        }
        Some(self.elem_from_reduced(coeffs))
    }

    fn index_of(&self, a: &GfElem) -> Result<u64> {
        self.guard(a)?;
        let p = self.params.p;
        Ok(a.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * p + c))
    }

    fn label(&self, a: &GfElem) -> String {
        poly_string(&a.coeffs)
    }

    fn spec_string(&self) -> String {
        format!(
            "gf:{}:{}",
            self.params.p.pow(self.params.k),
            poly_string(&self.params.modulus)
        )
    }
}

// ---------------------------------------------------------------------------
// Polynomial arithmetic over GF(p), dense ascending coefficient vectors.
// ---------------------------------------------------------------------------

fn poly_degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn poly_trim(mut a: Vec<u64>) -> Vec<u64> {
    let len = poly_degree(&a).map_or(0, |d| d + 1);
    a.truncate(len);
    a
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(out)
}

/// Remainder of `a` modulo the monic polynomial `m`, over GF(p).
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let md = poly_degree(m).expect("modulus is nonzero");
    let mut r: Vec<u64> = a.to_vec();
    while let Some(rd) = poly_degree(&r) {
        if rd < md {
            break;
        }
        let coef = r[rd];
        let shift = rd - md;
        for (i, &mc) in m.iter().enumerate().take(md + 1) {
            let sub = (coef * mc) % p;
            let idx = i + shift;
            r[idx] = (r[idx] + p - sub) % p;
        }
    }
    poly_trim(r)
}

/// Inverse of `a` modulo the monic polynomial `m` over GF(p), when
/// `gcd(a, m) = 1`.
fn poly_mod_inverse(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    // Extended Euclid on (m, a): maintain r = s*m + t*a (s is not tracked).
    let mut r0: Vec<u64> = poly_trim(m.to_vec());
    let mut r1: Vec<u64> = poly_rem(a, m, p);
    let mut t0: Vec<u64> = vec![];
    let mut t1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (q, rem) = poly_divmod(&r0, &r1, p);
        let qt1 = poly_mul(&q, &t1, p);
        let new_t = poly_sub(&t0, &qt1, p);
        r0 = r1;
        r1 = rem;
        t0 = t1;
        t1 = new_t;
    }
    let d = poly_degree(&r0)?;
    if d != 0 {
        return None; // gcd has positive degree: not invertible
    }
    let scale = super::prime::mod_inverse(r0[0], p);
    Some(poly_trim(t0.iter().map(|&c| (c * scale) % p).collect()))
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().max(b.len());
    let mut out = vec![0u64; len];
    for i in 0..len {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    poly_trim(out)
}

/// Quotient and remainder of `a / b` over GF(p), `b` nonzero.
fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let bd = poly_degree(b).expect("divisor nonzero");
    let lead_inv = super::prime::mod_inverse(b[bd], p);
    let mut r: Vec<u64> = a.to_vec();
    let mut q = vec![0u64; a.len().saturating_sub(bd).max(1)];
    while let Some(rd) = poly_degree(&r) {
        if rd < bd {
            break;
        }
        let coef = (r[rd] * lead_inv) % p;
        let shift = rd - bd;
        q[shift] = coef;
        for (i, &bc) in b.iter().enumerate().take(bd + 1) {
            let sub = (coef * bc) % p;
            let idx = i + shift;
            r[idx] = (r[idx] + p - sub) % p;
        }
    }
    (poly_trim(q), poly_trim(r))
}

/// Is the monic polynomial `m` irreducible over GF(p)? Trial division by
/// every monic polynomial of degree `1 ..= deg(m)/2`.
fn is_irreducible(m: &[u64], p: u64) -> bool {
    let Some(d) = poly_degree(m) else {
        return false;
    };
    if d == 0 {
        return false;
    }
    for dd in 1..=d / 2 {
        // Enumerate monic polynomials of degree dd: dd free coefficients.
        let count = p.pow(dd as u32);
        for idx in 0..count {
            let mut q = Vec::with_capacity(dd + 1);
            let mut rest = idx;
            for _ in 0..dd {
                q.push(rest % p);
                rest /= p;
            }
            q.push(1);
            if poly_rem(m, &q, p).is_empty() {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Textual polynomial form: "x^2+x+1", descending powers, ASCII only.
// ---------------------------------------------------------------------------

/// Render ascending coefficients as a polynomial in `x`, descending powers.
pub fn poly_string(coeffs: &[u64]) -> String {
    let mut terms: Vec<String> = Vec::new();
    for (e, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let t = match (e, c) {
            (0, c) => c.to_string(),
            (1, 1) => "x".into(),
            (1, c) => format!("{c}x"),
            (e, 1) => format!("x^{e}"),
            (e, c) => format!("{c}x^{e}"),
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// Parse a polynomial in `x` over GF(p): `+`-separated terms of the form
/// `C`, `x`, `Cx`, `x^E`, or `Cx^E` (an optional `*` is allowed between the
/// coefficient and `x`). Coefficients must already be reduced mod `p`.
pub fn parse_poly(s: &str, p: u64) -> Result<Vec<u64>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    if s.contains('-') {
        return Err(Error::Parse(
            "polynomial coefficients must be canonical residues (no `-`)".into(),
        ));
    }
    let mut coeffs: Vec<u64> = vec![];
    for term in s.split('+') {
        let term = term.trim().replace('*', "");
        if term.is_empty() {
            return Err(Error::Parse(format!("empty term in polynomial `{s}`")));
        }
        let (coef_str, exp) = match term.find('x') {
            None => (term.as_str(), 0usize),
            Some(i) => {
                let after = &term[i + 1..];
                let exp = if after.is_empty() {
                    1
                } else if let Some(e) = after.strip_prefix('^') {
                    e.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{term}`")))?
                } else {
                    return Err(Error::Parse(format!("malformed term `{term}`")));
                };
                (&term[..i], exp)
            }
        };
        let coef: u64 = if coef_str.is_empty() {
            1
        } else {
            coef_str
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient in `{term}`")))?
        };
        if coef >= p {
            return Err(Error::Parse(format!(
                "coefficient {coef} not reduced mod {p} in `{term}`"
            )));
        }
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, 0);
        }
        coeffs[exp] = (coeffs[exp] + coef) % p;
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> GaloisField {
        // x^2 + x + 1 over GF(2)
        GaloisField::new(2, 2, vec![1, 1, 1]).unwrap()
    }

    #[test]
    fn rejects_reducible_modulus() {
        // x^2 + 1 = (x+1)^2 over GF(2)
        let err = GaloisField::new(2, 2, vec![1, 0, 1]).unwrap_err();
        assert!(matches!(err, Error::ReducibleModulus(_, 2)));
    }

    #[test]
    fn rejects_bad_modulus_shapes() {
        assert!(GaloisField::new(2, 2, vec![1, 1]).is_err()); // wrong degree
        assert!(GaloisField::new(2, 2, vec![1, 1, 2]).is_err()); // unreduced
        assert!(GaloisField::new(4, 2, vec![1, 1, 1]).is_err()); // p not prime
        assert!(GaloisField::new(2, 7, vec![1; 8]).is_err()); // 128 > 64
    }

    #[test]
    fn gf4_generator_squares_to_g_plus_one() {
        let f = gf4();
        let g = f.generator();
        let gg = f.mul(&g, &g);
        let expected = f.add(&g, &f.one());
        assert_eq!(gg, expected);
        assert_eq!(f.label(&gg), "x+1");
    }

    #[test]
    fn inverses_and_division() {
        let f = GaloisField::new(3, 2, parse_poly("x^2+1", 3).unwrap()).unwrap();
        assert_eq!(f.order(), Some(9));
        for i in 1..9 {
            let a = f.elem_at(i).unwrap();
            let inv = f.inv(&a).unwrap();
            assert!(f.is_one(&f.mul(&a, &inv)), "a * a^-1 = 1 for index {i}");
        }
        assert!(f.inv(&f.zero()).is_err());
    }

    #[test]
    fn enumeration_round_trips() {
        let f = GaloisField::new(2, 3, parse_poly("x^3+x+1", 2).unwrap()).unwrap();
        assert_eq!(f.order(), Some(8));
        for i in 0..8 {
            let e = f.elem_at(i).unwrap();
            assert_eq!(f.index_of(&e).unwrap(), i);
        }
        assert_eq!(f.elem_at(0).unwrap(), f.zero());
        assert_eq!(f.elem_at(1).unwrap(), f.one());
        assert!(f.elem_at(8).is_none());
    }

    #[test]
    fn poly_text_round_trips() {
        for (text, p) in [("x^2+x+1", 2), ("x^2+1", 3), ("x^3+2x+1", 3), ("x^6+x+1", 2)] {
            let coeffs = parse_poly(text, p).unwrap();
            assert_eq!(poly_string(&coeffs), text);
        }
        assert!(parse_poly("x^2-1", 3).is_err());
        assert!(parse_poly("5x^2+1", 3).is_err());
        assert!(parse_poly("", 3).is_err());
    }

    #[test]
    fn foreign_elements_detected_across_same_size_fields() {
        let f1 = gf4();
        let f2 = GaloisField::new(2, 2, vec![1, 1, 1]).unwrap();
        // Same parameters: interchangeable.
        assert!(f1.contains(&f2.generator()));
        let f9 = GaloisField::new(3, 2, vec![1, 0, 1]).unwrap();
        assert!(!f1.contains(&f9.generator()));
    }
}
