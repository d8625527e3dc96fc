//! Parameter-free interpretation of the field by triples.
//!
//! The parameterized recovery of [`crate::maltsev`] depends on a choice of
//! non-commuting pair. To remove it, work with triples `(u, v, x)` where
//! `(u, v)` is any non-commuting pair and `x` commutes with both; the
//! domain `D` is the set of all such triples. Two triples are similar,
//!
//! ```text
//! (u, v, x) ~ (u', v', x')   iff   x (*)_(u,v) [u', v'] = x'
//! ```
//!
//! i.e. the transfer of `x` from the pair `(u, v)` to `(u', v')` lands on
//! `x'`. Similarity is an equivalence relation, the class operations
//!
//! ```text
//! (u, v, x) (+) (u', v', x') = (u, v, x * t)       t = transfer of x' to (u, v)
//! (u, v, x) (.) (u', v', x') = (u, v, x (*)_(u,v) t)
//! ```
//!
//! are independent of representatives, and `D / ~` is a field isomorphic to
//! the one recovered at any single pair — no parameters left.
//!
//! [`QuotientField`] materializes all of this for a finite host: it indexes
//! the non-commuting pairs, tabulates each pair's product on the center
//! once, and represents a class by the transfer of its members to the
//! host's first non-commuting pair. [`check_interpretation`] then verifies
//! — exhaustively when the domain is small enough, sampled otherwise —
//! that similarity coincides with key equality (which packs reflexivity,
//! symmetry, and transitivity into one pass) and that both class
//! operations are representative-independent.

use std::collections::{HashMap, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bbox::{center, first_noncommuting_pair, BlackBoxGroup, HeisBox};
use crate::error::{Error, Result};
use crate::fields::Field;
use crate::heisenberg::theta;
use crate::maltsev::{FieldTable, RecoveredField};
use crate::{DEFAULT_BUDGET, DEFAULT_MAX_ORDER};

/// A point of the interpretation domain: a non-commuting pair plus an id
/// commuting with both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Triple {
    pub u: usize,
    pub v: usize,
    pub x: usize,
}

impl Triple {
    pub fn new(u: usize, v: usize, x: usize) -> Self {
        Triple { u, v, x }
    }
}

/// Does the triple lie in the interpretation domain?
pub fn in_domain(host: &dyn BlackBoxGroup, t: &Triple) -> Result<bool> {
    let e = host.identity();
    Ok(host.commutator(t.u, t.v)? != e
        && host.commutator(t.x, t.u)? == e
        && host.commutator(t.x, t.v)? == e)
}

fn guard_domain(host: &dyn BlackBoxGroup, t: &Triple) -> Result<()> {
    let e = host.identity();
    if host.commutator(t.u, t.v)? == e {
        return Err(Error::CommutingPair(format!(
            "ids {} and {} in a domain triple",
            t.u, t.v
        )));
    }
    if host.commutator(t.x, t.u)? != e || host.commutator(t.x, t.v)? != e {
        return Err(Error::NotCentral { id: t.x });
    }
    Ok(())
}

/// Similarity of domain triples (see module docs).
pub fn sim(host: &dyn BlackBoxGroup, t1: &Triple, t2: &Triple) -> Result<bool> {
    guard_domain(host, t1)?;
    guard_domain(host, t2)?;
    let fld = RecoveredField::recover(host, t1.u, t1.v)?;
    let one2 = host.commutator(t2.u, t2.v)?;
    Ok(fld.mul(t1.x, one2)? == t2.x)
}

/// Representative-level addition of triples.
pub fn oplus(host: &dyn BlackBoxGroup, t1: &Triple, t2: &Triple) -> Result<Triple> {
    guard_domain(host, t1)?;
    guard_domain(host, t2)?;
    let f1 = RecoveredField::recover(host, t1.u, t1.v)?;
    let f2 = RecoveredField::recover(host, t2.u, t2.v)?;
    let transported = f2.mul(t2.x, f1.one())?;
    Ok(Triple {
        u: t1.u,
        v: t1.v,
        x: host.mul(t1.x, transported)?,
    })
}

/// Representative-level multiplication of triples.
pub fn odot(host: &dyn BlackBoxGroup, t1: &Triple, t2: &Triple) -> Result<Triple> {
    guard_domain(host, t1)?;
    guard_domain(host, t2)?;
    let f1 = RecoveredField::recover(host, t1.u, t1.v)?;
    let f2 = RecoveredField::recover(host, t2.u, t2.v)?;
    let transported = f2.mul(t2.x, f1.one())?;
    Ok(Triple {
        u: t1.u,
        v: t1.v,
        x: f1.mul(t1.x, transported)?,
    })
}

/// Negated similarity: some similarity image of `t1` at `t2`'s pair differs
/// from `t2.x`. The image is unique, so this is the pointwise complement of
/// [`sim`] on the domain.
pub fn not_sim(host: &dyn BlackBoxGroup, t1: &Triple, t2: &Triple) -> Result<bool> {
    guard_domain(host, t1)?;
    guard_domain(host, t2)?;
    let fld = RecoveredField::recover(host, t1.u, t1.v)?;
    let one2 = host.commutator(t2.u, t2.v)?;
    Ok(fld.mul(t1.x, one2)? != t2.x)
}

/// Every domain triple of a finite host, in lexicographic id order.
pub fn domain_d(host: &dyn BlackBoxGroup) -> Result<Vec<Triple>> {
    let n = host
        .order()
        .ok_or_else(|| Error::RequiresFinite("domain enumeration".into()))?;
    let mut out = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if host.commutator(u, v)? == host.identity() {
                continue;
            }
            for x in 0..n {
                let t = Triple::new(u, v, x);
                if in_domain(host, &t)? {
                    out.push(t);
                }
            }
        }
    }
    Ok(out)
}

/// The interpretation domain of a finite host, materialized and quotiented.
///
/// Internally everything is positional: pairs are indexed in lexicographic
/// order, center elements ascending, and each pair's product is a dense
/// `k * k` table of center positions. A class is named by the center
/// position of its members' transfer to the base pair.
pub struct QuotientField<'g> {
    host: &'g dyn BlackBoxGroup,
    order: usize,
    pairs: Vec<(usize, usize)>,
    pair_index: HashMap<(usize, usize), usize>,
    base_pos: usize,
    center: Vec<usize>,
    center_pos: HashMap<usize, usize>,
    /// Per pair: center position of its commutator `[u, v]`.
    comm_pos: Vec<usize>,
    /// Per pair: flat `k * k` table of the pair's product on the center.
    prod: Vec<Vec<usize>>,
    /// Flat `k * k` table of the group law on the center.
    cadd: Vec<usize>,
    zero_pos: usize,
}

impl<'g> QuotientField<'g> {
    pub fn build(host: &'g dyn BlackBoxGroup) -> Result<Self> {
        let order = host
            .order()
            .ok_or_else(|| Error::RequiresFinite("quotient-field construction".into()))?;
        if order > DEFAULT_MAX_ORDER {
            return Err(Error::OrderBound {
                order,
                bound: DEFAULT_MAX_ORDER,
                what: "quotient-field construction".into(),
            });
        }
        let center = center(host)?;
        let k = center.len();
        let center_pos: HashMap<usize, usize> =
            center.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let e = host.identity();
        let mut pairs = Vec::new();
        for u in 0..order {
            for v in 0..order {
                if host.commutator(u, v)? != e {
                    pairs.push((u, v));
                }
            }
        }
        if pairs.is_empty() {
            return Err(Error::AbelianGroup);
        }
        let pair_index: HashMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let base_pair = first_noncommuting_pair(host, DEFAULT_BUDGET)?;
        let base_pos = *pair_index
            .get(&base_pair)
            .expect("the first non-commuting pair is a non-commuting pair");
        let off_center = |what: &str| Error::NotHeisenberg(format!("{what} is not central"));
        let mut comm_pos = Vec::with_capacity(pairs.len());
        let mut prod = Vec::with_capacity(pairs.len());
        for &(u, v) in &pairs {
            let fld = RecoveredField::recover(host, u, v)?;
            if fld.elements()? != center.as_slice() {
                return Err(Error::NotHeisenberg(format!(
                    "the domain at pair ({u}, {v}) differs from the center"
                )));
            }
            let c = host.commutator(u, v)?;
            comm_pos.push(*center_pos.get(&c).ok_or_else(|| off_center("a commutator"))?);
            let mut table = Vec::with_capacity(k * k);
            for &x in &center {
                for &y in &center {
                    let z = fld.mul(x, y)?;
                    table.push(*center_pos.get(&z).ok_or_else(|| off_center("a product"))?);
                }
            }
            prod.push(table);
        }
        let mut cadd = Vec::with_capacity(k * k);
        for &x in &center {
            for &y in &center {
                let z = host.mul(x, y)?;
                cadd.push(*center_pos.get(&z).ok_or_else(|| off_center("a sum"))?);
            }
        }
        let zero_pos = *center_pos
            .get(&e)
            .ok_or_else(|| off_center("the identity"))?;
        Ok(QuotientField {
            host,
            order,
            pairs,
            pair_index,
            base_pos,
            center,
            center_pos,
            comm_pos,
            prod,
            cadd,
            zero_pos,
        })
    }

    pub fn host(&self) -> &'g dyn BlackBoxGroup {
        self.host
    }

    /// The non-commuting pairs, lexicographically ascending.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// Index of the base pair (the host's first non-commuting pair) within
    /// [`pairs`](Self::pairs).
    pub fn base_index(&self) -> usize {
        self.base_pos
    }

    pub fn base_pair(&self) -> (usize, usize) {
        self.pairs[self.base_pos]
    }

    /// Center ids, ascending; classes are indexed by positions into this.
    pub fn center_ids(&self) -> &[usize] {
        &self.center
    }

    pub fn class_count(&self) -> usize {
        self.center.len()
    }

    pub fn domain_size(&self) -> usize {
        self.pairs.len() * self.center.len()
    }

    /// All domain triples, pair-major.
    pub fn triples(&self) -> impl Iterator<Item = Triple> + '_ {
        self.pairs.iter().flat_map(move |&(u, v)| {
            self.center.iter().map(move |&x| Triple { u, v, x })
        })
    }

    /// Position of `x (*)_(from) [u_to, v_to]` for positional arguments.
    /// Panics if an index is out of range (these are hot-loop accessors).
    pub fn transport(&self, from_pair: usize, x_pos: usize, to_pair: usize) -> usize {
        let k = self.center.len();
        self.prod[from_pair][x_pos * k + self.comm_pos[to_pair]]
    }

    /// Class key of a positional triple: its transfer to the base pair.
    pub fn key(&self, pair: usize, x_pos: usize) -> usize {
        self.transport(pair, x_pos, self.base_pos)
    }

    fn locate(&self, t: &Triple) -> Result<(usize, usize)> {
        for id in [t.u, t.v, t.x] {
            if id >= self.order {
                return Err(Error::InvalidId {
                    id,
                    order: self.order,
                });
            }
        }
        let p = *self.pair_index.get(&(t.u, t.v)).ok_or_else(|| {
            Error::CommutingPair(format!("ids {} and {} in a domain triple", t.u, t.v))
        })?;
        let x = *self
            .center_pos
            .get(&t.x)
            .ok_or(Error::NotCentral { id: t.x })?;
        Ok((p, x))
    }

    /// The class (a center position) of a domain triple.
    pub fn class_of(&self, t: &Triple) -> Result<usize> {
        let (p, x) = self.locate(t)?;
        Ok(self.key(p, x))
    }

    /// Table-driven similarity test.
    pub fn sim(&self, t1: &Triple, t2: &Triple) -> Result<bool> {
        let (p1, x1) = self.locate(t1)?;
        let (p2, x2) = self.locate(t2)?;
        Ok(self.transport(p1, x1, p2) == x2)
    }

    fn guard_class(&self, class: usize) -> Result<()> {
        if class < self.center.len() {
            Ok(())
        } else {
            Err(Error::InvalidId {
                id: class,
                order: self.center.len(),
            })
        }
    }

    /// Class-level addition.
    pub fn add(&self, i: usize, j: usize) -> Result<usize> {
        self.guard_class(i)?;
        self.guard_class(j)?;
        Ok(self.cadd[i * self.center.len() + j])
    }

    /// Class-level multiplication.
    pub fn mul(&self, i: usize, j: usize) -> Result<usize> {
        self.guard_class(i)?;
        self.guard_class(j)?;
        Ok(self.prod[self.base_pos][i * self.center.len() + j])
    }

    pub fn zero_class(&self) -> usize {
        self.zero_pos
    }

    pub fn one_class(&self) -> usize {
        self.comm_pos[self.base_pos]
    }

    /// A canonical representative of a class: the base pair with the class
    /// key as its central component.
    pub fn representative(&self, class: usize) -> Result<Triple> {
        self.guard_class(class)?;
        let (u, v) = self.base_pair();
        Ok(Triple {
            u,
            v,
            x: self.center[class],
        })
    }

    /// The quotient as a positional field table (classes in index order).
    pub fn tabulate(&self) -> FieldTable {
        FieldTable {
            elems: self.center.clone(),
            zero: self.zero_pos,
            one: self.one_class(),
            add: self.cadd.clone(),
            mul: self.prod[self.base_pos].clone(),
        }
    }
}

/// Outcome of [`check_interpretation`].
#[derive(Debug, Clone, Serialize)]
pub struct InterpReport {
    pub order: usize,
    pub base_pair: (usize, usize),
    pub pair_count: usize,
    pub domain_size: usize,
    pub class_count: usize,
    /// Every triple is similar to itself.
    pub reflexive_ok: bool,
    /// Similarity coincides with equality of transported keys; since key
    /// equality is an equivalence relation, this certifies symmetry and
    /// transitivity as well.
    pub sim_matches_keys: bool,
    /// Class of a representative-level sum depends only on the classes.
    pub add_well_defined: bool,
    /// Class of a representative-level product depends only on the classes.
    pub mul_well_defined: bool,
    /// The quotient table satisfies every field axiom.
    pub field_axioms_ok: bool,
    /// Whether the pairwise checks covered all of `D x D`.
    pub exhaustive: bool,
    pub checked_pairs: usize,
    pub violations: Vec<String>,
}

impl InterpReport {
    pub fn passed(&self) -> bool {
        self.reflexive_ok
            && self.sim_matches_keys
            && self.add_well_defined
            && self.mul_well_defined
            && self.field_axioms_ok
    }
}

/// Pairwise checks above this many `(triple, triple)` combinations switch
/// from exhaustive to sampled.
const EXHAUSTIVE_PAIR_LIMIT: u128 = 4_000_000;
const DEFAULT_SAMPLED_PAIRS: usize = 200_000;

/// Verify the interpretation over a finite host. `sample` forces a sampled
/// pairwise check of `(count, seed)`; `None` checks `D x D` exhaustively
/// when it is small enough and falls back to a seeded sample otherwise.
pub fn check_interpretation(
    host: &dyn BlackBoxGroup,
    sample: Option<(usize, u64)>,
) -> Result<InterpReport> {
    let q = QuotientField::build(host)?;
    let k = q.class_count();
    let np = q.pair_count();
    let d = q.domain_size();
    let mut violations: Vec<String> = Vec::new();
    let note = |list: &mut Vec<String>, msg: String| {
        if list.len() < 16 {
            list.push(msg);
        }
    };

    let mut reflexive_ok = true;
    for p in 0..np {
        for i in 0..k {
            if q.transport(p, i, p) != i {
                reflexive_ok = false;
                note(
                    &mut violations,
                    format!("triple (pair {p}, center {i}) is not similar to itself"),
                );
            }
        }
    }

    // Transported keys, triple-major: key[p * k + i].
    let mut keys = Vec::with_capacity(d);
    for p in 0..np {
        for i in 0..k {
            keys.push(q.key(p, i));
        }
    }

    let mut sim_matches_keys = true;
    let mut add_well_defined = true;
    let mut mul_well_defined = true;
    let mut checked_pairs = 0usize;
    let mut check_one = |a: usize, b: usize, violations: &mut Vec<String>| {
        let (p1, i1) = (a / k, a % k);
        let (p2, i2) = (b / k, b % k);
        let (ka, kb) = (keys[a], keys[b]);
        if (q.transport(p1, i1, p2) == i2) != (ka == kb) {
            sim_matches_keys = false;
            note(
                violations,
                format!("similarity disagrees with key equality at triples {a} and {b}"),
            );
        }
        let t = q.transport(p2, i2, p1);
        let sum = q.cadd[i1 * k + t];
        if q.key(p1, sum) != q.cadd[ka * k + kb] {
            add_well_defined = false;
            note(
                violations,
                format!("addition is not representative-independent at triples {a} and {b}"),
            );
        }
        let pr = q.prod[p1][i1 * k + t];
        if q.key(p1, pr) != q.prod[q.base_pos][ka * k + kb] {
            mul_well_defined = false;
            note(
                violations,
                format!("multiplication is not representative-independent at triples {a} and {b}"),
            );
        }
    };

    let exhaustive = match sample {
        Some(_) => false,
        None => (d as u128) * (d as u128) <= EXHAUSTIVE_PAIR_LIMIT,
    };
    if exhaustive {
        for a in 0..d {
            for b in 0..d {
                check_one(a, b, &mut violations);
                checked_pairs += 1;
            }
        }
    } else {
        let (count, seed) = sample.unwrap_or((DEFAULT_SAMPLED_PAIRS, 0));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..count {
            let a = rng.gen_range(0..d);
            let b = rng.gen_range(0..d);
            check_one(a, b, &mut violations);
            checked_pairs += 1;
        }
    }

    let axioms = q.tabulate().check_field_axioms();
    let field_axioms_ok = axioms.is_empty();
    for v in axioms {
        note(&mut violations, format!("quotient table: {v}"));
    }

    Ok(InterpReport {
        order: q.order,
        base_pair: q.base_pair(),
        pair_count: np,
        domain_size: d,
        class_count: k,
        reflexive_ok,
        sim_matches_keys,
        add_well_defined,
        mul_well_defined,
        field_axioms_ok,
        exhaustive,
        checked_pairs,
        violations,
    })
}

/// Outcome of [`biinterp_k`].
#[derive(Debug, Clone, Serialize)]
pub struct KReport {
    pub field: String,
    pub order: u64,
    pub pair_count: usize,
    pub domain_size: usize,
    pub class_count: usize,
    /// `alpha -> class of (u, v, h(0, 0, alpha))` at the canonical pair is
    /// a field isomorphism onto the quotient.
    pub embedding_ok: bool,
    /// The quotient passes the field axioms and is isomorphic to the
    /// original field (the recovery round trip closes).
    pub round_trip_ok: bool,
    pub violations: Vec<String>,
}

impl KReport {
    pub fn passed(&self) -> bool {
        self.embedding_ok && self.round_trip_ok && self.violations.is_empty()
    }
}

/// Round-trip a concrete finite field through its Heisenberg group and the
/// parameter-free quotient: embed `F` into `D / ~` along the canonical pair
/// `(h(1,0,0), h(0,1,0))` and verify the embedding and the quotient are
/// field isomorphisms.
pub fn biinterp_k<F: Field>(field: &F) -> Result<KReport> {
    let host = HeisBox::new(theta(field.clone()));
    let q = QuotientField::build(&host)?;
    let grp = host.group();
    let f = grp.field().clone();
    let u = host.encode(&grp.elem(f.one(), f.zero(), f.zero())?)?;
    let v = host.encode(&grp.elem(f.zero(), f.one(), f.zero())?)?;
    let elems = field.elements()?;
    let mut violations: Vec<String> = Vec::new();

    let mut cls_of: HashMap<F::Elem, usize> = HashMap::new();
    for alpha in &elems {
        let x = host.encode(&grp.central(alpha.clone())?)?;
        cls_of.insert(alpha.clone(), q.class_of(&Triple { u, v, x })?);
    }
    let distinct: HashSet<usize> = cls_of.values().copied().collect();
    let mut embedding_ok = true;
    if distinct.len() != elems.len() || elems.len() != q.class_count() {
        embedding_ok = false;
        violations.push("embedding is not a bijection onto the classes".into());
    }
    if cls_of[&field.zero()] != q.zero_class() {
        embedding_ok = false;
        violations.push("embedding does not preserve zero".into());
    }
    if cls_of[&field.one()] != q.one_class() {
        embedding_ok = false;
        violations.push("embedding does not preserve one".into());
    }
    'outer: for a in &elems {
        for b in &elems {
            let (ca, cb) = (cls_of[a], cls_of[b]);
            if cls_of[&field.add(a, b)] != q.add(ca, cb)?
                || cls_of[&field.mul(a, b)] != q.mul(ca, cb)?
            {
                embedding_ok = false;
                violations.push(format!(
                    "embedding is not a homomorphism at ({}, {})",
                    field.label(a),
                    field.label(b)
                ));
                break 'outer;
            }
        }
    }

    let table = q.tabulate();
    let axioms = table.check_field_axioms();
    let round_trip_ok = axioms.is_empty() && table.iso_to(field)?.is_some();
    violations.extend(axioms.into_iter().map(|v| format!("quotient table: {v}")));

    Ok(KReport {
        field: field.spec_string(),
        order: field.order().unwrap_or(0),
        pair_count: q.pair_count(),
        domain_size: q.domain_size(),
        class_count: q.class_count(),
        embedding_ok,
        round_trip_ok,
        violations,
    })
}

/// Outcome of [`biinterp_k_rationals`].
#[derive(Debug, Clone, Serialize)]
pub struct KSampleReport {
    pub field: String,
    pub sample: usize,
    /// First non-commuting pair of the rational Heisenberg group.
    pub pair: (usize, usize),
    pub checked_sums: usize,
    pub checked_products: usize,
    pub violations: Vec<String>,
}

impl KSampleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The rational half of the round trip, checked on a finite sample.
///
/// `H(Q)` is countable, so instead of a quotient we embed the first
/// `sample` rationals of the fixed enumeration along the first
/// non-commuting pair, `alpha -> h(0, 0, alpha * delta)`, and check that
/// recovered addition, negation, and multiplication agree with exact
/// rational arithmetic on every sampled argument pair.
pub fn biinterp_k_rationals(sample: usize, budget: usize) -> Result<KSampleReport> {
    let field = crate::fields::Rationals::new();
    let host = HeisBox::new(theta(field.clone()));
    let (u, v) = first_noncommuting_pair(&host, budget)?;
    let fld = RecoveredField::recover_with_budget(&host, u, v, budget)?;
    let grp = host.group();
    let delta = grp.delta(&host.decode(u)?, &host.decode(v)?)?;

    let mut violations = Vec::new();
    let mut embed = Vec::with_capacity(sample);
    let mut values = Vec::with_capacity(sample);
    for i in 0..sample {
        let alpha = field
            .elem_at(i as u64)
            .ok_or_else(|| Error::EnumerationOverflow("rational sample".into()))?;
        let id = host.encode(&grp.central(field.mul(&alpha, &delta))?)?;
        if !fld.contains(id)? {
            violations.push(format!("embedding of element {i} left the carrier"));
        }
        embed.push(id);
        values.push(alpha);
    }
    if embed.first() != Some(&host.identity())
        || embed.iter().skip(1).any(|&x| x == host.identity())
    {
        violations.push("embedding does not preserve zero".into());
    }

    let mut checked_sums = 0;
    let mut checked_products = 0;
    'outer: for i in 0..sample {
        let neg = host.encode(&grp.central(field.mul(&field.neg(&values[i]), &delta))?)?;
        if fld.neg(embed[i])? != neg {
            violations.push(format!("negation disagrees at element {i}"));
            break;
        }
        for j in 0..sample {
            let sum = field.add(&values[i], &values[j]);
            let prod = field.mul(&values[i], &values[j]);
            let sum_id = host.encode(&grp.central(field.mul(&sum, &delta))?)?;
            let prod_id = host.encode(&grp.central(field.mul(&prod, &delta))?)?;
            if fld.add(embed[i], embed[j])? != sum_id {
                violations.push(format!("addition disagrees at ({i}, {j})"));
                break 'outer;
            }
            checked_sums += 1;
            if fld.mul(embed[i], embed[j])? != prod_id {
                violations.push(format!("multiplication disagrees at ({i}, {j})"));
                break 'outer;
            }
            checked_products += 1;
        }
    }

    Ok(KSampleReport {
        field: field.spec_string(),
        sample,
        pair: (u, v),
        checked_sums,
        checked_products,
        violations,
    })
}
