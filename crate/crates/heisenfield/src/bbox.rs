//! Black-box groups: groups presented only through element ids and the
//! operations `mul`, `inv`, `identity`.
//!
//! Ids coincide with enumeration indices (finite groups use `0..order`,
//! countable groups use all of `u64`-sized `usize`), so a black box is
//! exactly "a group whose universe is an initial segment of the naturals,
//! given by computable operations". Everything downstream (recovery,
//! transfer, interpretation, the formula engine) consumes this trait and
//! never looks at a concrete element again.
//!
//! The searches this crate performs over a black box enumerate id pairs by
//! *increasing maximum id, then lexicographically*; [`dovetail_pairs`] is
//! the one frozen implementation of that order.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fields::Field;
use crate::heisenberg::{GroupFile, HElem, HGroup, GROUP_FILE_SCHEMA};
use crate::DEFAULT_BUDGET;

/// A group presented through ids.
pub trait BlackBoxGroup: Sync {
    /// Number of elements, or `None` for countable groups.
    fn order(&self) -> Option<usize>;

    /// Id of the identity element.
    fn identity(&self) -> usize;

    /// Product of two ids. Errors on out-of-range ids, and on countable
    /// hosts whose id scheme overflows.
    fn mul(&self, x: usize, y: usize) -> Result<usize>;

    /// Inverse of an id.
    fn inv(&self, x: usize) -> Result<usize>;

    /// The commutator `[x, y] = x^-1 y^-1 x y`.
    fn commutator(&self, x: usize, y: usize) -> Result<usize> {
        let xi = self.inv(x)?;
        let yi = self.inv(y)?;
        self.mul(self.mul(xi, yi)?, self.mul(x, y)?)
    }

    /// Do two ids commute?
    fn commutes(&self, x: usize, y: usize) -> Result<bool> {
        Ok(self.mul(x, y)? == self.mul(y, x)?)
    }

    /// Is this id inside the universe?
    fn contains(&self, x: usize) -> bool {
        match self.order() {
            Some(n) => x < n,
            None => true,
        }
    }

    /// Optional fast path for hosts with a concrete triple representation:
    /// the unique product-with-witnesses value `z` such that some `x', y'`
    /// satisfy `[x',u] = 1`, `[y',v] = 1`, `[x',v] = x`, `[u,y'] = y`,
    /// `[x',y'] = z`. Hosts without such a representation return `None` and
    /// callers fall back to a literal search. Implementations must verify
    /// the four equations before answering, so a `Some(Ok(z))` is exactly
    /// what the search would have found.
    fn witness_product(&self, u: usize, v: usize, x: usize, y: usize) -> Option<Result<usize>> {
        let _ = (u, v, x, y);
        None
    }
}

/// Enumerate all id pairs in the frozen dovetail order: increasing maximum
/// id, then lexicographically. The prefix with maximum id `< n` covers
/// exactly the square `n x n`.
pub fn dovetail_pairs() -> impl Iterator<Item = (usize, usize)> {
    (0usize..).flat_map(|m| {
        (0..m)
            .map(move |i| (i, m))
            .chain((0..=m).map(move |j| (m, j)))
    })
}

/// The first non-commuting pair of ids in dovetail order.
///
/// Finite hosts are searched exhaustively and report [`Error::AbelianGroup`]
/// when no pair exists; countable hosts examine at most `budget` pairs and
/// report [`Error::BudgetExhausted`] past that.
pub fn first_noncommuting_pair(
    g: &dyn BlackBoxGroup,
    budget: usize,
) -> Result<(usize, usize)> {
    let order = g.order();
    let mut examined = 0usize;
    for (i, j) in dovetail_pairs() {
        if let Some(n) = order {
            if i.max(j) >= n {
                return Err(Error::AbelianGroup);
            }
        } else if examined >= budget {
            return Err(Error::BudgetExhausted {
                budget,
                what: "searching for a non-commuting pair".into(),
            });
        }
        examined += 1;
        if !g.commutes(i, j)? {
            return Ok((i, j));
        }
    }
    unreachable!("dovetail_pairs is infinite")
}

/// Search with the default budget.
pub fn first_noncommuting_pair_default(g: &dyn BlackBoxGroup) -> Result<(usize, usize)> {
    first_noncommuting_pair(g, DEFAULT_BUDGET)
}

// ---------------------------------------------------------------------------
// Concrete Heisenberg groups as black boxes
// ---------------------------------------------------------------------------

/// A Heisenberg group presented as a black box through its canonical
/// enumeration.
#[derive(Debug, Clone)]
pub struct HeisBox<F: Field> {
    group: HGroup<F>,
}

impl<F: Field> HeisBox<F> {
    pub fn new(group: HGroup<F>) -> Self {
        HeisBox { group }
    }

    pub fn group(&self) -> &HGroup<F> {
        &self.group
    }

    /// Decode an id into a concrete element.
    pub fn decode(&self, id: usize) -> Result<HElem<F::Elem>> {
        self.group.elem_at(id as u64).ok_or(Error::InvalidId {
            id,
            order: self.order().unwrap_or(usize::MAX),
        })
    }

    /// Encode a concrete element as an id.
    pub fn encode(&self, x: &HElem<F::Elem>) -> Result<usize> {
        let id = self.group.index_of(x)?;
        usize::try_from(id)
            .map_err(|_| Error::EnumerationOverflow(format!("id {id} exceeds usize")))
    }
}

impl<F: Field> BlackBoxGroup for HeisBox<F> {
    fn order(&self) -> Option<usize> {
        self.group.order().map(|n| n as usize)
    }

    fn identity(&self) -> usize {
        0
    }

    fn mul(&self, x: usize, y: usize) -> Result<usize> {
        let (ex, ey) = (self.decode(x)?, self.decode(y)?);
        self.encode(&self.group.mul_raw(&ex, &ey))
    }

    fn inv(&self, x: usize) -> Result<usize> {
        let ex = self.decode(x)?;
        self.encode(&self.group.inv_raw(&ex))
    }

    fn witness_product(&self, u: usize, v: usize, x: usize, y: usize) -> Option<Result<usize>> {
        Some(self.witness_product_inner(u, v, x, y))
    }
}

impl<F: Field> HeisBox<F> {
    /// Construct the closed-form witnesses `x' = h(s*u_a, s*u_b, 0)` and
    /// `y' = h(t*v_a, t*v_b, 0)` with `s = x_c / delta`, `t = y_c / delta`,
    /// verify the four defining equations, and return `[x', y']`.
    fn witness_product_inner(&self, u: usize, v: usize, x: usize, y: usize) -> Result<usize> {
        let g = &self.group;
        let f = g.field();
        let (eu, ev) = (self.decode(u)?, self.decode(v)?);
        let (ex, ey) = (self.decode(x)?, self.decode(y)?);
        let delta = g.delta(&eu, &ev)?;
        if f.is_zero(&delta) {
            return Err(Error::CommutingPair(format!(
                "{} and {}",
                g.label(&eu),
                g.label(&ev)
            )));
        }
        for e in [&ex, &ey] {
            if !g.is_central(e)? {
                return Err(Error::NotCentral {
                    id: self.encode(e)?,
                });
            }
        }
        let s = f.div(&ex.c, &delta)?;
        let t = f.div(&ey.c, &delta)?;
        let xp = g.elem(f.mul(&s, &eu.a), f.mul(&s, &eu.b), f.zero())?;
        let yp = g.elem(f.mul(&t, &ev.a), f.mul(&t, &ev.b), f.zero())?;
        let e = g.identity();
        if g.commutator(&xp, &eu)? != e
            || g.commutator(&yp, &ev)? != e
            || g.commutator(&xp, &ev)? != ex
            || g.commutator(&eu, &yp)? != ey
        {
            return Err(Error::NoWitness(format!(
                "verifying closed-form witnesses at ({}, {})",
                g.label(&eu),
                g.label(&ev)
            )));
        }
        self.encode(&g.commutator(&xp, &yp)?)
    }
}

// ---------------------------------------------------------------------------
// Finite multiplication tables as black boxes
// ---------------------------------------------------------------------------

/// Associativity is checked exhaustively up to this many triples, and on a
/// seeded sample beyond.
const ASSOC_EXHAUSTIVE_TRIPLES: usize = 100_000_000;
const ASSOC_SAMPLE: usize = 20_000;

/// A finite group given by an explicit multiplication table. Construction
/// validates the group axioms and derives identity and inverses.
#[derive(Debug, Clone)]
pub struct TableBox {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    e: usize,
}

impl TableBox {
    /// Validate a flat row-major table (`mul[i * n + j]`) and build the box.
    pub fn from_mul_table(n: usize, mul: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotAGroup("empty universe".into()));
        }
        if mul.len() != n * n {
            return Err(Error::NotAGroup(format!(
                "table has {} entries, expected {}",
                mul.len(),
                n * n
            )));
        }
        if let Some(&bad) = mul.iter().find(|&&v| v >= n) {
            return Err(Error::NotAGroup(format!(
                "table entry {bad} out of range for order {n}"
            )));
        }
        // Identity: unique two-sided.
        let mut e = None;
        for cand in 0..n {
            let is_e = (0..n).all(|x| mul[cand * n + x] == x && mul[x * n + cand] == x);
            if is_e {
                if let Some(prev) = e {
                    return Err(Error::NotAGroup(format!(
                        "two identities: {prev} and {cand}"
                    )));
                }
                e = Some(cand);
            }
        }
        let Some(e) = e else {
            return Err(Error::NotAGroup("no identity element".into()));
        };
        // Inverses: each element needs a two-sided inverse.
        let mut inv = vec![u32::MAX; n];
        for x in 0..n {
            let found = (0..n).find(|&y| mul[x * n + y] == e && mul[y * n + x] == e);
            match found {
                Some(y) => inv[x] = y as u32,
                None => {
                    return Err(Error::NotAGroup(format!("element {x} has no inverse")));
                }
            }
        }
        // Associativity: exhaustive when affordable, seeded sample otherwise.
        let triples = n.saturating_mul(n).saturating_mul(n);
        let check = |x: usize, y: usize, z: usize| -> Result<()> {
            let xy_z = mul[mul[x * n + y] * n + z];
            let x_yz = mul[x * n + mul[y * n + z]];
            if xy_z != x_yz {
                return Err(Error::NotAGroup(format!(
                    "associativity fails at ({x}, {y}, {z})"
                )));
            }
            Ok(())
        };
        if triples <= ASSOC_EXHAUSTIVE_TRIPLES {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        check(x, y, z)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..ASSOC_SAMPLE {
                use rand::Rng;
                let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                check(x, y, z)?;
            }
        }
        Ok(TableBox {
            n,
            mul: mul.iter().map(|&v| v as u32).collect(),
            inv,
            e,
        })
    }

    /// Validate and load a group file.
    pub fn from_group_file(file: &GroupFile) -> Result<Self> {
        if file.schema != GROUP_FILE_SCHEMA {
            return Err(Error::NotAGroup(format!(
                "unsupported schema {} (expected {})",
                file.schema, GROUP_FILE_SCHEMA
            )));
        }
        Self::from_mul_table(file.order, &file.mul)
    }

    /// Materialize any finite black box into a table.
    pub fn from_black_box(g: &dyn BlackBoxGroup) -> Result<Self> {
        let n = g
            .order()
            .ok_or_else(|| Error::RequiresFinite("table materialization".into()))?;
        let mut mul = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                mul.push(g.mul(x, y)?);
            }
        }
        Self::from_mul_table(n, &mul)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// The raw flat table (row-major ids).
    pub fn mul_table(&self) -> Vec<usize> {
        self.mul.iter().map(|&v| v as usize).collect()
    }
}

impl BlackBoxGroup for TableBox {
    fn order(&self) -> Option<usize> {
        Some(self.n)
    }

    fn identity(&self) -> usize {
        self.e
    }

    fn mul(&self, x: usize, y: usize) -> Result<usize> {
        if x >= self.n || y >= self.n {
            return Err(Error::InvalidId {
                id: x.max(y),
                order: self.n,
            });
        }
        Ok(self.mul[x * self.n + y] as usize)
    }

    fn inv(&self, x: usize) -> Result<usize> {
        if x >= self.n {
            return Err(Error::InvalidId { id: x, order: self.n });
        }
        Ok(self.inv[x] as usize)
    }
}

// ---------------------------------------------------------------------------
// Relabelled copies
// ---------------------------------------------------------------------------

/// A finite black box with its ids permuted: the "same" group handed to you
/// by someone who chose a different enumeration.
pub struct RelabelBox<'a> {
    base: &'a dyn BlackBoxGroup,
    to_new: Vec<usize>,
    to_base: Vec<usize>,
}

/// An explicit isomorphism between two black boxes on the same id range:
/// `map[x]` is the image of source id `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyIso {
    pub map: Vec<usize>,
}

impl CopyIso {
    /// The identity correspondence on `n` ids.
    pub fn identity(n: usize) -> CopyIso {
        CopyIso {
            map: (0..n).collect(),
        }
    }

    /// Composition: first `self`, then `next`.
    pub fn then(&self, next: &CopyIso) -> Result<CopyIso> {
        if next.map.len() != self.map.len() {
            return Err(Error::ctx_mismatch(
                format!("an isomorphism between groups of order {}", self.map.len()),
                format!("one of order {}", next.map.len()),
            ));
        }
        let map = self
            .map
            .iter()
            .map(|&m| next.apply(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(CopyIso { map })
    }

    /// The inverse correspondence.
    pub fn inverse(&self) -> CopyIso {
        let mut inv = vec![0; self.map.len()];
        for (i, &m) in self.map.iter().enumerate() {
            inv[m] = i;
        }
        CopyIso { map: inv }
    }

    pub fn apply(&self, x: usize) -> Result<usize> {
        self.map.get(x).copied().ok_or(Error::InvalidId {
            id: x,
            order: self.map.len(),
        })
    }

    /// Exhaustively verify that this is an isomorphism from `src` onto
    /// `dst` (bijective, identity-preserving, multiplication-preserving).
    pub fn verify(&self, src: &dyn BlackBoxGroup, dst: &dyn BlackBoxGroup) -> Result<()> {
        let n = src
            .order()
            .ok_or_else(|| Error::RequiresFinite("isomorphism verification".into()))?;
        if dst.order() != Some(n) || self.map.len() != n {
            return Err(Error::NotAGroup(format!(
                "isomorphism between groups of different orders ({:?} vs {:?}, map {})",
                src.order(),
                dst.order(),
                self.map.len()
            )));
        }
        let mut seen = vec![false; n];
        for &m in &self.map {
            if m >= n || seen[m] {
                return Err(Error::NotAGroup("map is not a bijection".into()));
            }
            seen[m] = true;
        }
        if self.map[src.identity()] != dst.identity() {
            return Err(Error::NotAGroup("map does not preserve the identity".into()));
        }
        for x in 0..n {
            for y in 0..n {
                if self.map[src.mul(x, y)?] != dst.mul(self.map[x], self.map[y])? {
                    return Err(Error::NotAGroup(format!(
                        "map does not preserve the product at ({x}, {y})"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl<'a> RelabelBox<'a> {
    /// The permutation applied to the base ids.
    pub fn iso_from_base(&self) -> CopyIso {
        CopyIso {
            map: self.to_new.clone(),
        }
    }
}

impl BlackBoxGroup for RelabelBox<'_> {
    fn order(&self) -> Option<usize> {
        self.base.order()
    }

    fn identity(&self) -> usize {
        self.to_new[self.base.identity()]
    }

    fn mul(&self, x: usize, y: usize) -> Result<usize> {
        let n = self.to_base.len();
        let (bx, by) = match (self.to_base.get(x), self.to_base.get(y)) {
            (Some(&bx), Some(&by)) => (bx, by),
            _ => {
                return Err(Error::InvalidId {
                    id: x.max(y),
                    order: n,
                })
            }
        };
        Ok(self.to_new[self.base.mul(bx, by)?])
    }

    fn inv(&self, x: usize) -> Result<usize> {
        let bx = *self.to_base.get(x).ok_or(Error::InvalidId {
            id: x,
            order: self.to_base.len(),
        })?;
        Ok(self.to_new[self.base.inv(bx)?])
    }

    fn witness_product(&self, u: usize, v: usize, x: usize, y: usize) -> Option<Result<usize>> {
        // The unique witness product transports along any isomorphism, so
        // delegating to the base is exact.
        let t = &self.to_base;
        let (u, v, x, y) = (*t.get(u)?, *t.get(v)?, *t.get(x)?, *t.get(y)?);
        let res = self.base.witness_product(u, v, x, y)?;
        Some(res.map(|z| self.to_new[z]))
    }
}

/// Produce a relabelled copy of a finite black box plus the isomorphism
/// from the base onto the copy. The permutation is a seeded Fisher-Yates
/// shuffle: the same seed always yields the same copy.
pub fn relabel<'a>(base: &'a dyn BlackBoxGroup, seed: u64) -> Result<(RelabelBox<'a>, CopyIso)> {
    let n = base
        .order()
        .ok_or_else(|| Error::RequiresFinite("relabelling".into()))?;
    let mut to_new: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    to_new.shuffle(&mut rng);
    let mut to_base = vec![0; n];
    for (b, &nw) in to_new.iter().enumerate() {
        to_base[nw] = b;
    }
    let iso = CopyIso {
        map: to_new.clone(),
    };
    Ok((RelabelBox { base, to_new, to_base }, iso))
}

// ---------------------------------------------------------------------------
// Opaque wrapper (hides any concrete fast paths; test and demo support)
// ---------------------------------------------------------------------------

/// Forwards a black box while hiding its `witness_product` fast path,
/// forcing callers onto literal searches. Useful to exercise budgets.
pub struct OpaqueBox<'a>(pub &'a dyn BlackBoxGroup);

impl BlackBoxGroup for OpaqueBox<'_> {
    fn order(&self) -> Option<usize> {
        self.0.order()
    }

    fn identity(&self) -> usize {
        self.0.identity()
    }

    fn mul(&self, x: usize, y: usize) -> Result<usize> {
        self.0.mul(x, y)
    }

    fn inv(&self, x: usize) -> Result<usize> {
        self.0.inv(x)
    }
}

// ---------------------------------------------------------------------------
// Center and centralizer scans
// ---------------------------------------------------------------------------

/// Ids commuting with every element (finite hosts), ascending.
pub fn center(g: &dyn BlackBoxGroup) -> Result<Vec<usize>> {
    let n = g
        .order()
        .ok_or_else(|| Error::RequiresFinite("center scan".into()))?;
    let mut out = Vec::new();
    'outer: for x in 0..n {
        for y in 0..n {
            if !g.commutes(x, y)? {
                continue 'outer;
            }
        }
        out.push(x);
    }
    Ok(out)
}

/// A cyclic group Z/n as a table box (test fixture and demo input).
pub fn cyclic_table(n: usize) -> TableBox {
    let mut mul = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            mul.push((i + j) % n);
        }
    }
    TableBox::from_mul_table(n, &mul).expect("cyclic tables are groups")
}
