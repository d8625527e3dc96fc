//! The recovery construction as a functor.
//!
//! Recovering the field at two different non-commuting pairs of the same
//! host yields two presentations of the same field on the same domain (the
//! ids commuting with both parameters). The transfer map between them is
//! itself definable inside the group:
//!
//! ```text
//! f(x) = x (*) [u', v']      (product taken in the source presentation)
//! ```
//!
//! and is a field isomorphism from the presentation at `(u, v)` to the one
//! at `(u', v')`. Stacking transfer on top of an isomorphism of copies
//! gives the functor's action on morphisms: for `sigma: G1 -> G2`, the
//! induced map sends `x` first through `sigma` (landing in the field
//! presented at `(sigma(u1), sigma(v1))` inside `G2`) and then transfers to
//! `G2`'s own canonical pair. [`check_functorial`] verifies, on concrete
//! relabelled copies, that identities induce identities, that composition
//! is preserved, and that every induced map is a field isomorphism.

use serde::Serialize;

use crate::bbox::{relabel, BlackBoxGroup, CopyIso};
use crate::error::{Error, Result};
use crate::maltsev::{phi, RecoveredField};

/// The transfer isomorphism between two presentations in the same host:
/// `x (*) [u', v']`, with the product taken in `from`.
pub fn transfer(from: &RecoveredField, to: &RecoveredField, x: usize) -> Result<usize> {
    if !same_host(from, to) {
        return Err(Error::ctx_mismatch(
            "a presentation in the same host group",
            "a presentation in a different host",
        ));
    }
    from.mul(x, to.one())
}

fn same_host(a: &RecoveredField, b: &RecoveredField) -> bool {
    let pa = a.host() as *const dyn BlackBoxGroup as *const ();
    let pb = b.host() as *const dyn BlackBoxGroup as *const ();
    std::ptr::eq(pa, pb)
}

/// A tabulated field map between two recovered presentations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Psi {
    /// Recovery pair of the source presentation.
    pub from_pair: (usize, usize),
    /// Recovery pair of the target presentation.
    pub to_pair: (usize, usize),
    /// Pairs `(x, psi(x))`, ascending in `x`, covering the source domain.
    pub map: Vec<(usize, usize)>,
}

impl Psi {
    pub fn apply(&self, x: usize) -> Result<usize> {
        self.map
            .binary_search_by_key(&x, |&(src, _)| src)
            .map(|i| self.map[i].1)
            .map_err(|_| Error::NotCentral { id: x })
    }

    /// Composition: first `self`, then `next`.
    pub fn compose(&self, next: &Psi) -> Result<Psi> {
        if self.to_pair != next.from_pair {
            return Err(Error::ctx_mismatch(
                format!("a map out of the presentation at {:?}", self.to_pair),
                format!("one out of {:?}", next.from_pair),
            ));
        }
        let map = self
            .map
            .iter()
            .map(|&(x, y)| Ok((x, next.apply(y)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Psi {
            from_pair: self.from_pair,
            to_pair: next.to_pair,
            map,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().all(|&(x, y)| x == y)
    }
}

/// Tabulate the within-host transfer map over the whole (finite) domain.
pub fn transfer_table(from: &RecoveredField, to: &RecoveredField) -> Result<Psi> {
    let map = from
        .elements()?
        .iter()
        .map(|&x| Ok((x, transfer(from, to, x)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Psi {
        from_pair: from.pair(),
        to_pair: to.pair(),
        map,
    })
}

/// The functor's action on an isomorphism of copies `sigma`: carry each
/// domain element through `sigma`, then transfer from the image pair
/// `(sigma(u1), sigma(v1))` to the target's own pair.
pub fn induced_map(
    from: &RecoveredField,
    to: &RecoveredField,
    sigma: &CopyIso,
) -> Result<Psi> {
    let n = from
        .host()
        .order()
        .ok_or_else(|| Error::RequiresFinite("inducing a map along an isomorphism".into()))?;
    if to.host().order() != Some(n) || sigma.map.len() != n {
        return Err(Error::ctx_mismatch(
            format!("an isomorphism between hosts of order {n}"),
            format!("a map on {} ids", sigma.map.len()),
        ));
    }
    let (u1, v1) = from.pair();
    let mid = RecoveredField::recover(to.host(), sigma.apply(u1)?, sigma.apply(v1)?)?;
    let map = from
        .elements()?
        .iter()
        .map(|&x| Ok((x, transfer(&mid, to, sigma.apply(x)?)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Psi {
        from_pair: from.pair(),
        to_pair: to.pair(),
        map,
    })
}

/// Exhaustively verify that `psi` is a field isomorphism between two
/// recovered presentations; returns human-readable violations.
pub fn check_field_iso(
    psi: &Psi,
    from: &RecoveredField,
    to: &RecoveredField,
) -> Result<Vec<String>> {
    let dom = from.elements()?;
    let cod = to.elements()?;
    let mut out = Vec::new();
    let sources: Vec<usize> = psi.map.iter().map(|&(x, _)| x).collect();
    if sources != dom {
        out.push("map does not cover the source domain".into());
        return Ok(out);
    }
    let mut targets: Vec<usize> = psi.map.iter().map(|&(_, y)| y).collect();
    targets.sort_unstable();
    if targets != cod {
        out.push("map is not a bijection onto the target domain".into());
    }
    if psi.apply(from.zero())? != to.zero() {
        out.push("zero is not preserved".into());
    }
    if psi.apply(from.one())? != to.one() {
        out.push("one is not preserved".into());
    }
    for &x in dom {
        for &y in dom {
            let (px, py) = (psi.apply(x)?, psi.apply(y)?);
            if psi.apply(from.add(x, y)?)? != to.add(px, py)? {
                out.push(format!("additivity fails at ids ({x}, {y})"));
            }
            if psi.apply(from.mul(x, y)?)? != to.mul(px, py)? {
                out.push(format!("multiplicativity fails at ids ({x}, {y})"));
            }
        }
    }
    out.truncate(16);
    Ok(out)
}

/// One relabelled copy inside a functoriality report.
#[derive(Debug, Clone, Serialize)]
pub struct CopyReport {
    pub seed: u64,
    /// First non-commuting pair of the copy.
    pub pair: (usize, usize),
    pub domain_size: usize,
    /// Did the induced map verify as a field isomorphism?
    pub iso_ok: bool,
}

/// Outcome of [`check_functorial`].
#[derive(Debug, Clone, Serialize)]
pub struct FunctorReport {
    /// Host order.
    pub order: usize,
    /// First non-commuting pair of the base host.
    pub base_pair: (usize, usize),
    pub copies: Vec<CopyReport>,
    /// The identity isomorphism induces the identity map.
    pub identity_ok: bool,
    /// Composing isomorphisms composes the induced maps.
    pub composition_ok: bool,
    pub violations: Vec<String>,
}

impl FunctorReport {
    pub fn passed(&self) -> bool {
        self.identity_ok
            && self.composition_ok
            && self.violations.is_empty()
            && self.copies.iter().all(|c| c.iso_ok)
    }
}

/// Verify the functor laws on concrete relabelled copies of `host`: one
/// copy per seed, plus an identity check and a two-step composition check.
pub fn check_functorial(host: &dyn BlackBoxGroup, seeds: &[u64]) -> Result<FunctorReport> {
    check_functorial_with(host, seeds, induced_map)
}

/// As [`check_functorial`], but with an injectable morphism computation so
/// tests can confirm the checks catch a broken one.
pub fn check_functorial_with(
    host: &dyn BlackBoxGroup,
    seeds: &[u64],
    compute: impl Fn(&RecoveredField, &RecoveredField, &CopyIso) -> Result<Psi>,
) -> Result<FunctorReport> {
    let n = host
        .order()
        .ok_or_else(|| Error::RequiresFinite("functoriality check".into()))?;
    let base = phi(host)?;
    let mut violations = Vec::new();

    let psi_id = compute(&base, &base, &CopyIso::identity(n))?;
    let identity_ok = psi_id.is_identity();
    if !identity_ok {
        violations.push("the identity isomorphism does not induce the identity map".into());
    }

    let mut copies = Vec::new();
    for &seed in seeds {
        let (copy, sigma) = relabel(host, seed)?;
        let fld = phi(&copy)?;
        let psi = compute(&base, &fld, &sigma)?;
        let errors = check_field_iso(&psi, &base, &fld)?;
        copies.push(CopyReport {
            seed,
            pair: fld.pair(),
            domain_size: fld.elements()?.len(),
            iso_ok: errors.is_empty(),
        });
        violations.extend(errors.into_iter().map(|e| format!("seed {seed}: {e}")));
    }

    let (s1, s2) = match seeds {
        [a, b, ..] => (*a, *b),
        [a] => (*a, a.wrapping_add(1)),
        [] => (1, 2),
    };
    let (c1, sigma1) = relabel(host, s1)?;
    let (c2, sigma2) = relabel(&c1, s2)?;
    let f1 = phi(&c1)?;
    let f2 = phi(&c2)?;
    let direct = compute(&base, &f2, &sigma1.then(&sigma2)?)?;
    let stepwise = compute(&base, &f1, &sigma1)?.compose(&compute(&f1, &f2, &sigma2)?)?;
    let composition_ok = direct.map == stepwise.map;
    if !composition_ok {
        violations.push(format!(
            "composition of seeds {s1} and {s2} disagrees with the composed isomorphism"
        ));
    }

    Ok(FunctorReport {
        order: n,
        base_pair: base.pair(),
        copies,
        identity_ok,
        composition_ok,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bbox::HeisBox;
    use crate::fields::PrimeField;
    use crate::heisenberg::theta;

    fn hbox(p: u64) -> HeisBox<PrimeField> {
        HeisBox::new(theta(PrimeField::new(p).unwrap()))
    }

    fn hid(g: &HeisBox<PrimeField>, a: u64, b: u64, c: u64) -> usize {
        let f = g.group().field().clone();
        g.encode(
            &g.group()
                .elem(f.from_u64(a), f.from_u64(b), f.from_u64(c))
                .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn transfer_matches_the_closed_form() {
        let g = hbox(5);
        // delta = 1 at ((1,0,0), (0,1,0)); delta' = 2 at ((2,0,0), (0,1,0)).
        let from =
            RecoveredField::recover(&g, hid(&g, 1, 0, 0), hid(&g, 0, 1, 0)).unwrap();
        let to = RecoveredField::recover(&g, hid(&g, 2, 0, 0), hid(&g, 0, 1, 0)).unwrap();
        for c in 0..5u64 {
            // h(0,0,c) carries alpha = c/1; its image is h(0,0, alpha * 2).
            assert_eq!(
                transfer(&from, &to, hid(&g, 0, 0, c)).unwrap(),
                hid(&g, 0, 0, (2 * c) % 5)
            );
        }
        let psi = transfer_table(&from, &to).unwrap();
        assert!(check_field_iso(&psi, &from, &to).unwrap().is_empty());
        assert_eq!(psi.apply(from.one()).unwrap(), to.one());
    }

    #[test]
    fn transfer_at_the_same_pair_is_the_identity() {
        let g = hbox(3);
        let fld = phi(&g).unwrap();
        let psi = transfer_table(&fld, &fld).unwrap();
        assert!(psi.is_identity());
    }

    #[test]
    fn transfer_rejects_presentations_from_different_hosts() {
        let g1 = hbox(3);
        let g2 = hbox(3);
        let f1 = phi(&g1).unwrap();
        let f2 = phi(&g2).unwrap();
        assert!(matches!(
            transfer(&f1, &f2, f1.one()),
            Err(Error::ContextMismatch { .. })
        ));
    }

    #[test]
    fn transfers_compose_across_three_pairs() {
        let g = hbox(5);
        let a = RecoveredField::recover(&g, hid(&g, 1, 0, 0), hid(&g, 0, 1, 0)).unwrap();
        let b = RecoveredField::recover(&g, hid(&g, 2, 0, 0), hid(&g, 0, 1, 0)).unwrap();
        // delta = 1*2 - 2*3 = -4 = 1 mod 5.
        let c = RecoveredField::recover(&g, hid(&g, 1, 2, 0), hid(&g, 3, 2, 0)).unwrap();
        let ab = transfer_table(&a, &b).unwrap();
        let bc = transfer_table(&b, &c).unwrap();
        let ac = transfer_table(&a, &c).unwrap();
        assert_eq!(ab.compose(&bc).unwrap().map, ac.map);
        // Mismatched endpoints refuse to compose.
        assert!(ab.compose(&ac).is_err());
    }

    #[test]
    fn induced_map_along_a_relabelling_is_a_field_iso() {
        let g = hbox(3);
        let base = phi(&g).unwrap();
        let (copy, sigma) = relabel(&g, 7).unwrap();
        let fld = phi(&copy).unwrap();
        let psi = induced_map(&base, &fld, &sigma).unwrap();
        assert!(check_field_iso(&psi, &base, &fld).unwrap().is_empty());
    }

    #[test]
    fn functor_laws_hold_on_relabelled_copies() {
        for p in [2u64, 3] {
            let g = hbox(p);
            let report = check_functorial(&g, &[7, 11, 13]).unwrap();
            assert!(report.passed(), "p = {p}: {:?}", report.violations);
            assert_eq!(report.copies.len(), 3);
            assert!(report.identity_ok);
            assert!(report.composition_ok);
        }
    }

    #[test]
    fn functor_check_catches_a_broken_morphism_map() {
        let g = hbox(3);
        // Sabotage: swap the images of the last two domain elements.
        let broken = |from: &RecoveredField, to: &RecoveredField, sigma: &CopyIso| {
            let mut psi = induced_map(from, to, sigma)?;
            let k = psi.map.len();
            let (a, b) = (psi.map[k - 1].1, psi.map[k - 2].1);
            psi.map[k - 1].1 = b;
            psi.map[k - 2].1 = a;
            Ok(psi)
        };
        let report = check_functorial_with(&g, &[7], broken).unwrap();
        assert!(!report.passed());
        assert!(!report.copies[0].iso_ok);
        assert!(report.violations.iter().any(|v| v.contains("seed 7")));
        // The sabotaged identity map is also caught.
        assert!(!report.identity_ok);
    }

    #[test]
    fn psi_apply_rejects_ids_outside_the_domain() {
        let g = hbox(3);
        let fld = phi(&g).unwrap();
        let psi = transfer_table(&fld, &fld).unwrap();
        let off_center = hid(&g, 1, 0, 0);
        assert!(matches!(
            psi.apply(off_center),
            Err(Error::NotCentral { .. })
        ));
    }
}
