//! The Heisenberg group H(F) over a field F.
//!
//! Elements are triples `h(a, b, c)` standing for the upper unitriangular
//! matrix with `a` and `b` on the superdiagonal and `c` in the corner:
//!
//! ```text
//!         [ 1  a  c ]
//! h(a,b,c)=[ 0  1  b ]
//!         [ 0  0  1 ]
//! ```
//!
//! so the law is `h(a,b,c) * h(a',b',c') = h(a+a', b+b', c+c'+a*b')`, the
//! identity is `h(0,0,0)`, and `h(a,b,c)^-1 = h(-a,-b,ab-c)`. The center is
//! exactly `{h(0,0,c)}`, commutators land in the center, and
//! `[u, v] = h(0, 0, delta(u, v))` with `delta(u, v) = u_a*v_b - u_b*v_a`.
//!
//! Every group carries a canonical element enumeration derived from its
//! field's: finite groups order triples lexicographically by the field
//! indices of `(a, b, c)` (so ids `0..|F|` are exactly the center), and the
//! group over the rationals interleaves through a Cantor pairing of the
//! three indices. Id `0` is always the identity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::Field;
use crate::DEFAULT_MAX_ORDER;

/// A group element `h(a, b, c)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HElem<E> {
    pub a: E,
    pub b: E,
    pub c: E,
}

/// The Heisenberg group over a field context.
#[derive(Debug, Clone)]
pub struct HGroup<F: Field> {
    field: F,
}

/// Build the Heisenberg group over a field. This is the object half of the
/// field-to-group functor; the morphism half is
/// [`crate::transfer::induced_map`].
pub fn theta<F: Field>(field: F) -> HGroup<F> {
    HGroup::new(field)
}

impl<F: Field> HGroup<F> {
    pub fn new(field: F) -> Self {
        HGroup { field }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// The identity `h(0, 0, 0)`.
    pub fn identity(&self) -> HElem<F::Elem> {
        let z = self.field.zero();
        HElem {
            a: z.clone(),
            b: z.clone(),
            c: z,
        }
    }

    /// Build an element, checking that all three entries belong to this
    /// group's field.
    pub fn elem(&self, a: F::Elem, b: F::Elem, c: F::Elem) -> Result<HElem<F::Elem>> {
        let e = HElem { a, b, c };
        self.guard(&e)?;
        Ok(e)
    }

    /// Error out unless every entry of `x` belongs to this group's field.
    pub fn guard(&self, x: &HElem<F::Elem>) -> Result<()> {
        self.field.guard(&x.a)?;
        self.field.guard(&x.b)?;
        self.field.guard(&x.c)?;
        Ok(())
    }

    /// Group law. Errors on elements from a different context.
    pub fn mul(&self, x: &HElem<F::Elem>, y: &HElem<F::Elem>) -> Result<HElem<F::Elem>> {
        self.guard(x)?;
        self.guard(y)?;
        Ok(self.mul_raw(x, y))
    }

    /// Group law without the context check (hot path for id-driven loops).
    pub(crate) fn mul_raw(&self, x: &HElem<F::Elem>, y: &HElem<F::Elem>) -> HElem<F::Elem> {
        let f = &self.field;
        HElem {
            a: f.add(&x.a, &y.a),
            b: f.add(&x.b, &y.b),
            c: f.add(&f.add(&x.c, &y.c), &f.mul(&x.a, &y.b)),
        }
    }

    /// Inverse: `h(a,b,c)^-1 = h(-a, -b, ab - c)`.
    pub fn inv(&self, x: &HElem<F::Elem>) -> Result<HElem<F::Elem>> {
        self.guard(x)?;
        Ok(self.inv_raw(x))
    }

    pub(crate) fn inv_raw(&self, x: &HElem<F::Elem>) -> HElem<F::Elem> {
        let f = &self.field;
        HElem {
            a: f.neg(&x.a),
            b: f.neg(&x.b),
            c: f.sub(&f.mul(&x.a, &x.b), &x.c),
        }
    }

    /// The commutator `[x, y] = x^-1 y^-1 x y`, computed literally.
    pub fn commutator(&self, x: &HElem<F::Elem>, y: &HElem<F::Elem>) -> Result<HElem<F::Elem>> {
        self.guard(x)?;
        self.guard(y)?;
        let xi = self.inv_raw(x);
        let yi = self.inv_raw(y);
        Ok(self.mul_raw(&self.mul_raw(&xi, &yi), &self.mul_raw(x, y)))
    }

    /// The pairing `delta(u, v) = u_a * v_b - u_b * v_a`; `[u, v]` equals
    /// `h(0, 0, delta(u, v))`, so `u` and `v` commute exactly when it is
    /// zero.
    pub fn delta(&self, u: &HElem<F::Elem>, v: &HElem<F::Elem>) -> Result<F::Elem> {
        self.guard(u)?;
        self.guard(v)?;
        let f = &self.field;
        Ok(f.sub(&f.mul(&u.a, &v.b), &f.mul(&u.b, &v.a)))
    }

    /// Is `x` central? Equivalent to `a = b = 0`, and (checked in tests) to
    /// commuting with every element.
    pub fn is_central(&self, x: &HElem<F::Elem>) -> Result<bool> {
        self.guard(x)?;
        let f = &self.field;
        Ok(f.is_zero(&x.a) && f.is_zero(&x.b))
    }

    /// A central element `h(0, 0, c)`.
    pub fn central(&self, c: F::Elem) -> Result<HElem<F::Elem>> {
        let z = self.field.zero();
        self.elem(z.clone(), z, c)
    }

    /// Group order `|F|^3`, or `None` when the field is infinite.
    pub fn order(&self) -> Option<u64> {
        let n = self.field.order()?;
        n.checked_mul(n).and_then(|m| m.checked_mul(n))
    }

    /// The element with the given enumeration id.
    ///
    /// Finite fields: lexicographic in the field indices of `(a, b, c)`
    /// with `a` most significant, so `id = (ia * |F| + ib) * |F| + ic`.
    /// Rationals: the Cantor pairing `pair(pair(ia, ib), ic)`.
    pub fn elem_at(&self, id: u64) -> Option<HElem<F::Elem>> {
        match self.field.order() {
            Some(n) => {
                if id >= n * n * n {
                    return None;
                }
                let ic = id % n;
                let ib = (id / n) % n;
                let ia = id / (n * n);
                Some(HElem {
                    a: self.field.elem_at(ia)?,
                    b: self.field.elem_at(ib)?,
                    c: self.field.elem_at(ic)?,
                })
            }
            None => {
                let (ab, ic) = cantor_unpair(id);
                let (ia, ib) = cantor_unpair(ab);
                Some(HElem {
                    a: self.field.elem_at(ia)?,
                    b: self.field.elem_at(ib)?,
                    c: self.field.elem_at(ic)?,
                })
            }
        }
    }

    /// Inverse of [`HGroup::elem_at`].
    pub fn index_of(&self, x: &HElem<F::Elem>) -> Result<u64> {
        self.guard(x)?;
        let ia = self.field.index_of(&x.a)?;
        let ib = self.field.index_of(&x.b)?;
        let ic = self.field.index_of(&x.c)?;
        match self.field.order() {
            Some(n) => Ok((ia * n + ib) * n + ic),
            None => {
                let ab = cantor_pair(ia, ib)?;
                cantor_pair(ab, ic)
            }
        }
    }

    /// Render an element as `h(a, b, c)` with field labels.
    pub fn label(&self, x: &HElem<F::Elem>) -> String {
        format!(
            "h({}, {}, {})",
            self.field.label(&x.a),
            self.field.label(&x.b),
            self.field.label(&x.c)
        )
    }

    /// Export the full multiplication table as a versioned group file.
    /// Finite groups only, capped at `max_order` elements.
    pub fn to_group_file(&self, max_order: usize) -> Result<GroupFile> {
        let n = self
            .order()
            .ok_or_else(|| Error::RequiresFinite("group table export".into()))?
            as usize;
        if n > max_order {
            return Err(Error::OrderBound {
                order: n,
                bound: max_order,
                what: "group table export".into(),
            });
        }
        let elems: Vec<HElem<F::Elem>> = (0..n as u64)
            .map(|i| self.elem_at(i).expect("id < order"))
            .collect();
        let mut elements = Vec::with_capacity(n);
        for x in &elems {
            elements.push([
                self.field.index_of(&x.a)?,
                self.field.index_of(&x.b)?,
                self.field.index_of(&x.c)?,
            ]);
        }
        let mut mul = Vec::with_capacity(n * n);
        for x in &elems {
            for y in &elems {
                mul.push(self.index_of(&self.mul_raw(x, y))? as usize);
            }
        }
        Ok(GroupFile {
            schema: GROUP_FILE_SCHEMA,
            order: n,
            field: Some(self.field.spec_string()),
            elements: Some(elements),
            mul,
        })
    }
}

/// Current group-file schema version.
pub const GROUP_FILE_SCHEMA: u32 = 1;

/// On-disk JSON form of a finite group: a flat row-major multiplication
/// table over element ids `0..order`, optionally annotated with the field
/// descriptor and the `(a, b, c)` field-index triples of each id.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupFile {
    pub schema: u32,
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<[u64; 3]>>,
    /// `mul[i * order + j]` is the id of the product of ids `i` and `j`.
    pub mul: Vec<usize>,
}

impl GroupFile {
    /// Serialize to pretty JSON with a trailing newline (byte-stable).
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Default export bound re-exported for callers.
pub fn default_max_order() -> usize {
    DEFAULT_MAX_ORDER
}

/// Cantor pairing `(x, y) -> (x+y)(x+y+1)/2 + y`, checked against `u64`.
pub(crate) fn cantor_pair(x: u64, y: u64) -> Result<u64> {
    let s = (x as u128) + (y as u128);
    let packed = s * (s + 1) / 2 + y as u128;
    u64::try_from(packed).map_err(|_| {
        Error::EnumerationOverflow(format!("cantor pairing of ({x}, {y}) exceeds u64"))
    })
}

/// Inverse of [`cantor_pair`] (total on `u64`).
pub(crate) fn cantor_unpair(z: u64) -> (u64, u64) {
    let zz = z as u128;
    let mut w = ((8 * zz + 1).isqrt().saturating_sub(1) / 2) as u64;
    // Guard against isqrt rounding at the triangle boundary.
    while (w as u128 + 1) * (w as u128 + 2) / 2 <= zz {
        w += 1;
    }
    while (w as u128) * (w as u128 + 1) / 2 > zz {
        w -= 1;
    }
    let t = (w as u128) * (w as u128 + 1) / 2;
    let y = (zz - t) as u64;
    let x = w - y;
    (x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{parse_poly, GaloisField, PrimeField, Rationals};

    /// Independent oracle: multiply as literal 3x3 matrices over F.
    fn mat_mul<F: Field>(f: &F, x: &HElem<F::Elem>, y: &HElem<F::Elem>) -> HElem<F::Elem> {
        type M<E> = [[E; 3]; 3];
        let to_m = |h: &HElem<F::Elem>| -> M<F::Elem> {
            let (o, i) = (f.zero(), f.one());
            [
                [i.clone(), h.a.clone(), h.c.clone()],
                [o.clone(), i.clone(), h.b.clone()],
                [o.clone(), o.clone(), i.clone()],
            ]
        };
        let (mx, my) = (to_m(x), to_m(y));
        let mut out: Vec<Vec<F::Elem>> = vec![vec![f.zero(); 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                let mut acc = f.zero();
                for k in 0..3 {
                    acc = f.add(&acc, &f.mul(&mx[r][k], &my[k][c]));
                }
                out[r][c] = acc;
            }
        }
        HElem {
            a: out[0][1].clone(),
            b: out[1][2].clone(),
            c: out[0][2].clone(),
        }
    }

    fn gf(p: u64) -> HGroup<PrimeField> {
        theta(PrimeField::new(p).unwrap())
    }

    fn h(g: &HGroup<PrimeField>, a: u64, b: u64, c: u64) -> HElem<crate::fields::Fp> {
        let f = g.field();
        g.elem(f.from_u64(a), f.from_u64(b), f.from_u64(c)).unwrap()
    }

    #[test]
    fn law_matches_matrix_multiplication_exhaustively() {
        let g = gf(3);
        let n = g.order().unwrap();
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (g.elem_at(i).unwrap(), g.elem_at(j).unwrap());
                assert_eq!(g.mul(&x, &y).unwrap(), mat_mul(g.field(), &x, &y));
            }
        }
    }

    #[test]
    fn frozen_products_over_gf5() {
        let g = gf(5);
        assert_eq!(g.mul(&h(&g, 1, 0, 0), &h(&g, 0, 1, 0)).unwrap(), h(&g, 1, 1, 1));
        assert_eq!(g.mul(&h(&g, 0, 1, 0), &h(&g, 1, 0, 0)).unwrap(), h(&g, 1, 1, 0));
    }

    #[test]
    fn group_axioms_exhaustive_over_gf2() {
        let g = gf(2);
        let n = g.order().unwrap();
        let e = g.identity();
        let all: Vec<_> = (0..n).map(|i| g.elem_at(i).unwrap()).collect();
        for x in &all {
            assert_eq!(g.mul(x, &e).unwrap(), *x);
            assert_eq!(g.mul(&e, x).unwrap(), *x);
            let xi = g.inv(x).unwrap();
            assert_eq!(g.mul(x, &xi).unwrap(), e);
            assert_eq!(g.mul(&xi, x).unwrap(), e);
            for y in &all {
                for z in &all {
                    let xy_z = g.mul(&g.mul(x, y).unwrap(), z).unwrap();
                    let x_yz = g.mul(x, &g.mul(y, z).unwrap()).unwrap();
                    assert_eq!(xy_z, x_yz);
                }
            }
        }
    }

    #[test]
    fn commutator_is_central_delta() {
        let g = gf(3);
        let n = g.order().unwrap();
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (g.elem_at(i).unwrap(), g.elem_at(j).unwrap());
                let c = g.commutator(&x, &y).unwrap();
                let expected = g.central(g.delta(&x, &y).unwrap()).unwrap();
                assert_eq!(c, expected);
                assert!(g.is_central(&c).unwrap());
            }
        }
    }

    #[test]
    fn frozen_commutators() {
        let g = gf(5);
        assert_eq!(
            g.commutator(&h(&g, 1, 0, 0), &h(&g, 0, 1, 0)).unwrap(),
            h(&g, 0, 0, 1)
        );
        assert_eq!(
            g.commutator(&h(&g, 2, 0, 0), &h(&g, 0, 3, 0)).unwrap(),
            h(&g, 0, 0, 1)
        );
        assert_eq!(g.delta(&h(&g, 2, 1, 0), &h(&g, 1, 3, 0)).unwrap(), g.field().from_u64(0));
    }

    #[test]
    fn centrality_matches_commuting_with_everything() {
        let g = gf(3);
        let n = g.order().unwrap();
        let all: Vec<_> = (0..n).map(|i| g.elem_at(i).unwrap()).collect();
        let mut central_count = 0;
        for x in &all {
            let commutes_all = all
                .iter()
                .all(|y| g.mul(x, y).unwrap() == g.mul(y, x).unwrap());
            assert_eq!(g.is_central(x).unwrap(), commutes_all);
            if commutes_all {
                central_count += 1;
            }
        }
        assert_eq!(central_count, 3);
    }

    #[test]
    fn central_elements_add_in_the_corner() {
        let g = gf(7);
        let f = g.field();
        for a in 0..7 {
            for b in 0..7 {
                let x = g.central(f.from_u64(a)).unwrap();
                let y = g.central(f.from_u64(b)).unwrap();
                assert_eq!(
                    g.mul(&x, &y).unwrap(),
                    g.central(f.from_u64((a + b) % 7)).unwrap()
                );
            }
        }
    }

    #[test]
    fn enumeration_round_trips_and_identity_is_zero() {
        let g = gf(3);
        assert_eq!(g.order(), Some(27));
        assert_eq!(g.elem_at(0).unwrap(), g.identity());
        for id in 0..27 {
            let x = g.elem_at(id).unwrap();
            assert_eq!(g.index_of(&x).unwrap(), id);
        }
        assert!(g.elem_at(27).is_none());
        // Ids 0..|F| are exactly the center.
        for id in 0..27 {
            let x = g.elem_at(id).unwrap();
            assert_eq!(g.is_central(&x).unwrap(), id < 3);
        }
    }

    #[test]
    fn rational_group_is_lazy_and_round_trips() {
        let g = theta(Rationals::new());
        assert_eq!(g.order(), None);
        assert_eq!(g.elem_at(0).unwrap(), g.identity());
        for id in 0..2000u64 {
            let x = g.elem_at(id).unwrap();
            assert_eq!(g.index_of(&x).unwrap(), id);
        }
        // Ids 1 and 3 are the standard generators h(1,0,0) and h(0,1,0).
        let f = Rationals::new();
        let u = g.elem(f.from_i64(1), f.zero(), f.zero()).unwrap();
        let v = g.elem(f.zero(), f.from_i64(1), f.zero()).unwrap();
        assert_eq!(g.index_of(&u).unwrap(), 1);
        assert_eq!(g.index_of(&v).unwrap(), 3);
    }

    #[test]
    fn nonabelian_and_order_for_extension_fields() {
        let f = GaloisField::new(2, 2, parse_poly("x^2+x+1", 2).unwrap()).unwrap();
        let g = theta(f.clone());
        assert_eq!(g.order(), Some(64));
        let x = f.generator();
        let u = g.elem(x.clone(), f.zero(), f.zero()).unwrap();
        let v = g.elem(f.zero(), x, f.zero()).unwrap();
        assert_ne!(g.mul(&u, &v).unwrap(), g.mul(&v, &u).unwrap());
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let g5 = gf(5);
        let g7 = gf(7);
        let x = h(&g7, 1, 2, 3);
        assert!(matches!(
            g5.mul(&x, &x),
            Err(Error::ContextMismatch { .. })
        ));
        assert!(g5.guard(&h(&g5, 1, 2, 3)).is_ok());
    }

    #[test]
    fn group_file_export_shape() {
        let g = gf(2);
        let gf_file = g.to_group_file(100).unwrap();
        assert_eq!(gf_file.schema, 1);
        assert_eq!(gf_file.order, 8);
        assert_eq!(gf_file.mul.len(), 64);
        assert_eq!(gf_file.field.as_deref(), Some("gf:2"));
        let elements = gf_file.elements.as_ref().unwrap();
        assert_eq!(elements[0], [0, 0, 0]);
        // Identity row/column reproduce the ids.
        for i in 0..8 {
            assert_eq!(gf_file.mul[i], i);
            assert_eq!(gf_file.mul[i * 8], i);
        }
        let json = gf_file.to_json().unwrap();
        let back = GroupFile::from_json(&json).unwrap();
        assert_eq!(back.mul, gf_file.mul);
        // Export respects the order bound.
        assert!(matches!(
            g.to_group_file(7),
            Err(Error::OrderBound { order: 8, bound: 7, .. })
        ));
    }

    #[test]
    fn cantor_pairing_round_trips() {
        for z in 0..10_000u64 {
            let (x, y) = cantor_unpair(z);
            assert_eq!(cantor_pair(x, y).unwrap(), z);
        }
        assert_eq!(cantor_pair(0, 0).unwrap(), 0);
    }
}
