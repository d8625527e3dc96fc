//! Automorphism enumeration for small finite groups.
//!
//! The enumerator works on any finite [`BlackBoxGroup`]: pick a greedy
//! generating set, try all order-preserving assignments of images to the
//! generators, and grow each candidate assignment into a full map by
//! breadth-first closure (every element is reached as `reached * generator`,
//! so its image is forced). Conflicting forced images prune the branch early;
//! surviving total maps are verified as bijective homomorphisms against the
//! whole multiplication table before being reported.
//!
//! This is far from the state of the art, but for the orders this crate
//! handles (hundreds, not millions) it terminates in milliseconds and its
//! output is independently checkable — the tests compare it against a
//! brute-force scan of all bijections where that is feasible.

use serde::Serialize;

use crate::bbox::BlackBoxGroup;
use crate::error::{Error, Result};

/// A group automorphism as a permutation of ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Automorphism {
    pub map: Vec<usize>,
}

impl Automorphism {
    /// Image of an id.
    pub fn apply(&self, x: usize) -> Result<usize> {
        self.map.get(x).copied().ok_or(Error::InvalidId {
            id: x,
            order: self.map.len(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &fx)| i == fx)
    }
}

/// Multiplicative order of an id.
fn element_order(mul: &[usize], n: usize, e: usize, x: usize) -> usize {
    let mut acc = x;
    let mut ord = 1;
    while acc != e {
        acc = mul[acc * n + x];
        ord += 1;
    }
    ord
}

/// Ids of the subgroup generated by `gens`, as a membership mask.
fn closure_mask(mul: &[usize], n: usize, e: usize, gens: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[e] = true;
    let mut queue = vec![e];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for &s in gens {
            let y = mul[x * n + s];
            if !seen[y] {
                seen[y] = true;
                queue.push(y);
            }
        }
    }
    seen
}

/// Extend generator images to the subgroup they generate, or detect a
/// conflict. Returns the partial map (`usize::MAX` marks unreached ids).
fn extend(mul: &[usize], n: usize, e: usize, gens: &[usize], imgs: &[usize]) -> Option<Vec<usize>> {
    const UNSET: usize = usize::MAX;
    let mut map = vec![UNSET; n];
    map[e] = e;
    let mut queue = vec![e];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let fx = map[x];
        for (&s, &fs) in gens.iter().zip(imgs) {
            let y = mul[x * n + s];
            let fy = mul[fx * n + fs];
            if map[y] == UNSET {
                map[y] = fy;
                queue.push(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    Some(map)
}

/// Is a total map a bijective homomorphism of the table?
fn is_automorphism(mul: &[usize], n: usize, map: &[usize]) -> bool {
    let mut hit = vec![false; n];
    for &fx in map {
        if fx == usize::MAX || hit[fx] {
            return false;
        }
        hit[fx] = true;
    }
    for x in 0..n {
        for y in 0..n {
            if map[mul[x * n + y]] != mul[map[x] * n + map[y]] {
                return false;
            }
        }
    }
    true
}

/// Enumerate every automorphism of a finite group, sorted by map.
///
/// Refuses countable hosts and groups of order above `max_order` (the table
/// and the n^2 verification make larger orders impractical here).
pub fn enumerate_automorphisms(
    g: &dyn BlackBoxGroup,
    max_order: usize,
) -> Result<Vec<Automorphism>> {
    let n = g
        .order()
        .ok_or_else(|| Error::RequiresFinite("automorphism enumeration".into()))?;
    if n > max_order {
        return Err(Error::OrderBound {
            order: n,
            bound: max_order,
            what: "automorphism enumeration".into(),
        });
    }
    let e = g.identity();
    let mut mul = vec![0usize; n * n];
    for x in 0..n {
        for y in 0..n {
            mul[x * n + y] = g.mul(x, y)?;
        }
    }

    // Greedy generating set: sweep ids, keep whatever lies outside the
    // closure so far. Small and order-deterministic, not minimal.
    let mut gens: Vec<usize> = Vec::new();
    let mut mask = closure_mask(&mul, n, e, &gens);
    for x in 0..n {
        if !mask[x] {
            gens.push(x);
            mask = closure_mask(&mul, n, e, &gens);
        }
    }

    let orders: Vec<usize> = (0..n).map(|x| element_order(&mul, n, e, x)).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| (0..n).filter(|&y| orders[y] == orders[s]).collect())
        .collect();

    let mut found = Vec::new();
    let mut imgs = Vec::with_capacity(gens.len());
    dfs(&mul, n, e, &gens, &candidates, &mut imgs, &mut found);
    found.sort();
    Ok(found)
}

fn dfs(
    mul: &[usize],
    n: usize,
    e: usize,
    gens: &[usize],
    candidates: &[Vec<usize>],
    imgs: &mut Vec<usize>,
    found: &mut Vec<Automorphism>,
) {
    let depth = imgs.len();
    if depth == gens.len() {
        if let Some(map) = extend(mul, n, e, gens, imgs) {
            if is_automorphism(mul, n, &map) {
                found.push(Automorphism { map });
            }
        }
        return;
    }
    for &cand in &candidates[depth] {
        imgs.push(cand);
        // Prune: the partial assignment must already be consistent on the
        // subgroup the assigned generators span.
        if extend(mul, n, e, &gens[..imgs.len()], imgs).is_some() {
            dfs(mul, n, e, gens, candidates, imgs, found);
        }
        imgs.pop();
    }
}

/// All `arity`-tuples of ids fixed coordinatewise by every automorphism,
/// in lexicographic order.
///
/// The scan is the literal brute force over all `n^arity` tuples; the
/// `max_tuples` cap keeps it from being asked for something absurd. An
/// automorphism acts on tuples coordinate by coordinate, so the result is
/// always the `arity`-fold product of the fixed singletons — the scan does
/// not assume that, which lets tests use the identity as a cross-check.
pub fn fixed_tuples(
    g: &dyn BlackBoxGroup,
    autos: &[Automorphism],
    arity: usize,
    max_tuples: usize,
) -> Result<Vec<Vec<usize>>> {
    let n = g
        .order()
        .ok_or_else(|| Error::RequiresFinite("fixed tuple scan".into()))?;
    let total = n
        .checked_pow(arity as u32)
        .filter(|&t| t <= max_tuples)
        .ok_or_else(|| Error::OrderBound {
            order: n,
            bound: max_tuples,
            what: format!("fixed tuple scan at arity {arity}"),
        })?;
    let mut out = Vec::new();
    let mut tuple = vec![0usize; arity];
    for _ in 0..total {
        if tuple
            .iter()
            .all(|&x| autos.iter().all(|a| a.map[x] == x))
        {
            out.push(tuple.clone());
        }
        for slot in (0..arity).rev() {
            tuple[slot] += 1;
            if tuple[slot] < n {
                break;
            }
            tuple[slot] = 0;
        }
    }
    Ok(out)
}

/// Summary of how much of a group its automorphisms pin down.
#[derive(Debug, Clone, Serialize)]
pub struct RigidityReport {
    pub order: usize,
    pub aut_count: usize,
    /// Ids fixed by every automorphism, sorted.
    pub fixed_ids: Vec<usize>,
    /// `fixed_ids.len()`.
    pub fixed_by_all: usize,
    /// Fixed-tuple counts at arities 1, 2, 3. Automorphisms act
    /// coordinatewise, so these are powers of `fixed_by_all`.
    pub fixed_tuple_counts: [u64; 3],
    /// Only the identity is fixed by every automorphism. When true, every
    /// other tuple is moved by some automorphism, so no parameter-free
    /// definable domain can single out anything beyond the identity.
    pub only_identity_pinned: bool,
    pub is_rigid: bool,
}

/// Count automorphisms and globally fixed ids and tuples.
pub fn rigidity_report(g: &dyn BlackBoxGroup, max_order: usize) -> Result<RigidityReport> {
    let autos = enumerate_automorphisms(g, max_order)?;
    let n = g
        .order()
        .ok_or_else(|| Error::RequiresFinite("rigidity report".into()))?;
    let fixed_ids: Vec<usize> = (0..n)
        .filter(|&x| autos.iter().all(|a| a.map[x] == x))
        .collect();
    let s = fixed_ids.len() as u64;
    Ok(RigidityReport {
        order: n,
        aut_count: autos.len(),
        fixed_by_all: fixed_ids.len(),
        only_identity_pinned: fixed_ids == [g.identity()],
        fixed_ids,
        fixed_tuple_counts: [s, s * s, s * s * s],
        is_rigid: autos.len() == 1,
    })
}
