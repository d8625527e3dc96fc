//! Generic removal of parameters from a definable interpretation.
//!
//! A parameterized interpretation presents one structure inside another: for
//! every parameter tuple satisfying an *orbit* formula there is a definable
//! set of rows (the *domain*) carrying definable relations, and a definable
//! family of bijections (the *iso* formula) identifies the copies built at
//! different parameter tuples. When those bijections form a compatible
//! system — identity at equal parameters, closed under composition, and
//! preserving every relation — the copies glue into a single quotient
//! structure that no longer mentions any parameter: its elements are the
//! compatibility classes and its relations descend from any one copy.
//!
//! [`remove_parameters`] checks each hypothesis of that gluing argument
//! against a concrete finite structure, in a fixed order (map totality and
//! bijectivity, then identity, composition, relation transport, and
//! negation complementarity), and reports the first failure as
//! [`Error::Hypothesis`] with the name of the violated check. On success it
//! returns the glued quotient: class count, relation tables over class ids,
//! and statistics about how much of the hypothesis space was examined.
//!
//! Exhaustive checking is quadratic (pairs) and cubic (triples) in the
//! number of parameter tuples, so both loops can be sampled instead; the
//! identity and to-base maps are always built in full, which keeps the
//! class structure itself exact even under sampling.
//!
//! One hypothesis is *not* certified by any finite amount of checking
//! against the structure alone: that the orbit formula carves out a single
//! orbit of the automorphism group, so that the quotient is canonical
//! rather than an artifact of a lucky parameter choice. For small
//! structures the engine enumerates the automorphisms outright and reports
//! a violation as a warning (the quotient is still well-defined — it just
//! depends on the orbit chosen).

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::autos::enumerate_automorphisms;
use crate::bbox::TableBox;
use crate::error::{Error, Result};
use crate::logic::builtins::{comm, commute, witness};
use crate::logic::sexpr::parse_formula;
use crate::logic::{compile, CompiledFormula, FinStructure, NamedFormula};
use crate::DEFAULT_AUTOS_BOUND;

/// How much of a quadratic or cubic check loop to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

/// Knobs for [`remove_parameters`].
#[derive(Debug, Clone)]
pub struct RemovalOptions {
    /// Which parameter pairs get their identification map built and checked.
    pub pairs: SampleMode,
    /// Which parameter triples get the composition check.
    pub triples: SampleMode,
    /// Whether to enumerate automorphisms and warn when the orbit formula is
    /// not closed under them.
    pub check_orbit_closure: bool,
}

impl Default for RemovalOptions {
    fn default() -> Self {
        RemovalOptions {
            pairs: SampleMode::Exhaustive,
            triples: SampleMode::Exhaustive,
            check_orbit_closure: true,
        }
    }
}

/// A parameterized interpretation, presented as formulas.
///
/// Free-variable conventions, with `p = params` and `r = row_arity`:
///
/// - `orbit`: `p` variables; satisfying tuples are the admissible parameters;
/// - `domain`: `p + r` variables (parameters, then one row);
/// - `iso`: `2p + 2r` variables (source parameters, target parameters,
///   source row, target row);
/// - each relation: `p + m*r` variables for its quotient arity `m >= 1`.
#[derive(Debug, Clone)]
pub struct InterpDatum {
    pub name: String,
    pub params: usize,
    pub row_arity: usize,
    pub orbit: NamedFormula,
    pub domain: NamedFormula,
    pub iso: NamedFormula,
    pub relations: Vec<NamedFormula>,
    /// Pairs of relation names asserted to partition the domain power:
    /// exactly one of the two holds on every tuple of domain rows.
    pub negations: Vec<(String, String)>,
}

/// A relation of the glued quotient, over class ids `0..class_count`.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientRelation {
    pub name: String,
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

/// The glued, parameter-free quotient plus checking statistics.
#[derive(Debug, Clone, Serialize)]
pub struct RemovalOutcome {
    pub datum: String,
    pub param_tuples: usize,
    /// The lexicographically first parameter tuple; classes are named by
    /// row positions of its domain.
    pub base_params: Vec<usize>,
    pub domain_rows: usize,
    pub class_count: usize,
    pub maps_built: usize,
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub relations: Vec<QuotientRelation>,
    pub warnings: Vec<String>,
}

fn hypothesis(check: &str, detail: String) -> Error {
    Error::Hypothesis {
        check: check.into(),
        detail,
    }
}

fn check_arity(what: &str, f: &NamedFormula, expected: usize) -> Result<()> {
    if f.arity() != expected {
        return Err(Error::Arity {
            what: format!("{what} `{}`", f.name),
            expected,
            found: f.arity(),
        });
    }
    Ok(())
}

/// Visit every tuple in `0..n` to the power `r`, lexicographically.
fn each_tuple(n: usize, r: usize, mut f: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    let mut t = vec![0usize; r];
    loop {
        f(&t)?;
        let mut k = r;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            t[k] += 1;
            if t[k] < n {
                break;
            }
            t[k] = 0;
        }
    }
}

struct Domain {
    rows: Vec<Vec<usize>>,
    pos: HashMap<Vec<usize>, usize>,
}

struct Engine<'s> {
    st: &'s FinStructure,
    params: usize,
    row_arity: usize,
    iso: CompiledFormula<'s>,
    p: Vec<Vec<usize>>,
    domains: Vec<Domain>,
    /// `(i, j) -> ` row positions of `domains[j]`, indexed by positions of
    /// `domains[i]`.
    maps: HashMap<(usize, usize), Vec<usize>>,
}

impl<'s> Engine<'s> {
    /// Build (and check) the identification map between two parameter
    /// tuples, unless cached.
    fn ensure_map(&mut self, i: usize, j: usize) -> Result<()> {
        if self.maps.contains_key(&(i, j)) {
            return Ok(());
        }
        let n = self.st.size();
        let (p, r) = (self.params, self.row_arity);
        let di = &self.domains[i];
        let dj = &self.domains[j];
        let mut args = Vec::with_capacity(2 * p + 2 * r);
        args.extend_from_slice(&self.p[i]);
        args.extend_from_slice(&self.p[j]);
        args.resize(2 * p + 2 * r, 0);
        let mut map = Vec::with_capacity(di.rows.len());
        for row in &di.rows {
            args[2 * p..2 * p + r].copy_from_slice(row);
            let mut image: Option<usize> = None;
            each_tuple(n, r, |cand| {
                args[2 * p + r..].copy_from_slice(cand);
                if self.iso.eval(&args)? {
                    let Some(&py) = dj.pos.get(cand) else {
                        return Err(hypothesis(
                            "psi-functional",
                            format!(
                                "row {row:?} maps outside the target domain between parameters {:?} and {:?}",
                                self.p[i], self.p[j]
                            ),
                        ));
                    };
                    if image.is_some() {
                        return Err(hypothesis(
                            "psi-functional",
                            format!(
                                "row {row:?} has two images between parameters {:?} and {:?}",
                                self.p[i], self.p[j]
                            ),
                        ));
                    }
                    image = Some(py);
                }
                Ok(())
            })?;
            let Some(py) = image else {
                return Err(hypothesis(
                    "psi-functional",
                    format!(
                        "row {row:?} has no image between parameters {:?} and {:?}",
                        self.p[i], self.p[j]
                    ),
                ));
            };
            map.push(py);
        }
        if map.len() != dj.rows.len() {
            return Err(hypothesis(
                "psi-bijective",
                format!(
                    "domains at parameters {:?} and {:?} have sizes {} and {}",
                    self.p[i],
                    self.p[j],
                    map.len(),
                    dj.rows.len()
                ),
            ));
        }
        let mut hit = vec![false; dj.rows.len()];
        for &py in &map {
            if hit[py] {
                return Err(hypothesis(
                    "psi-bijective",
                    format!(
                        "two rows share an image between parameters {:?} and {:?}",
                        self.p[i], self.p[j]
                    ),
                ));
            }
            hit[py] = true;
        }
        self.maps.insert((i, j), map);
        Ok(())
    }

    fn check_composition(&mut self, i: usize, j: usize, k: usize) -> Result<()> {
        self.ensure_map(i, j)?;
        self.ensure_map(j, k)?;
        self.ensure_map(i, k)?;
        let ij = &self.maps[&(i, j)];
        let jk = &self.maps[&(j, k)];
        let ik = &self.maps[&(i, k)];
        for x in 0..ij.len() {
            if jk[ij[x]] != ik[x] {
                return Err(hypothesis(
                    "psi-composition",
                    format!(
                        "maps through parameters {:?} -> {:?} -> {:?} disagree with the direct map at row position {x}",
                        self.p[i], self.p[j], self.p[k]
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// Check every gluing hypothesis of `datum` over `st` and return the
/// parameter-free quotient. The first violated hypothesis aborts with
/// [`Error::Hypothesis`] naming the check.
pub fn remove_parameters(
    st: &FinStructure,
    datum: &InterpDatum,
    opts: &RemovalOptions,
) -> Result<RemovalOutcome> {
    let p = datum.params;
    let r = datum.row_arity;
    if p == 0 {
        return Err(Error::Arity {
            what: "datum parameter slots".into(),
            expected: 1,
            found: 0,
        });
    }
    if r == 0 {
        return Err(Error::Arity {
            what: "datum row slots".into(),
            expected: 1,
            found: 0,
        });
    }
    check_arity("orbit formula", &datum.orbit, p)?;
    check_arity("domain formula", &datum.domain, p + r)?;
    check_arity("isomorphism formula", &datum.iso, 2 * p + 2 * r)?;
    let mut rel_arities = Vec::with_capacity(datum.relations.len());
    for rel in &datum.relations {
        let extra = rel.arity().checked_sub(p);
        match extra {
            Some(x) if x >= r && x % r == 0 => rel_arities.push(x / r),
            _ => {
                return Err(Error::Arity {
                    what: format!("relation formula `{}`", rel.name),
                    expected: p + r,
                    found: rel.arity(),
                })
            }
        }
    }
    let rel_index = |name: &str| -> Result<usize> {
        datum
            .relations
            .iter()
            .position(|f| f.name == name)
            .ok_or_else(|| Error::UnknownSymbol(format!("datum relation `{name}`")))
    };
    for (pos_name, neg_name) in &datum.negations {
        let (pi, ni) = (rel_index(pos_name)?, rel_index(neg_name)?);
        if rel_arities[pi] != rel_arities[ni] {
            return Err(Error::Arity {
                what: format!("negation pair `{pos_name}`/`{neg_name}`"),
                expected: rel_arities[pi],
                found: rel_arities[ni],
            });
        }
    }

    let orbit = compile(st, &datum.orbit)?;
    let domain = compile(st, &datum.domain)?;
    let iso = compile(st, &datum.iso)?;
    let rels = datum
        .relations
        .iter()
        .map(|f| compile(st, f))
        .collect::<Result<Vec<_>>>()?;

    let ptuples = orbit.tuples_satisfying()?;
    if ptuples.is_empty() {
        return Err(hypothesis(
            "orbit-nonempty",
            format!("formula `{}` has no satisfying tuple", datum.orbit.name),
        ));
    }

    let n = st.size();
    let mut domains = Vec::with_capacity(ptuples.len());
    for c in &ptuples {
        let mut rows = Vec::new();
        let mut args = c.clone();
        args.resize(p + r, 0);
        each_tuple(n, r, |row| {
            args[p..].copy_from_slice(row);
            if domain.eval(&args)? {
                rows.push(row.to_vec());
            }
            Ok(())
        })?;
        if rows.is_empty() {
            return Err(hypothesis(
                "domain-nonempty",
                format!("no domain rows over parameters {c:?}"),
            ));
        }
        let pos = rows
            .iter()
            .enumerate()
            .map(|(i, row)| (row.clone(), i))
            .collect();
        domains.push(Domain { rows, pos });
    }

    let np = ptuples.len();
    let mut eng = Engine {
        st,
        params: p,
        row_arity: r,
        iso,
        p: ptuples,
        domains,
        maps: HashMap::new(),
    };

    // Map building. The diagonal and the to-base column are always complete:
    // the former feeds the identity check, the latter defines the classes.
    match opts.pairs {
        SampleMode::Exhaustive => {
            for i in 0..np {
                for j in 0..np {
                    eng.ensure_map(i, j)?;
                }
            }
        }
        SampleMode::Sample { count, seed } => {
            for i in 0..np {
                eng.ensure_map(i, i)?;
                eng.ensure_map(i, 0)?;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let i = rng.gen_range(0..np);
                let j = rng.gen_range(0..np);
                eng.ensure_map(i, j)?;
            }
        }
    }
    let pairs_checked = eng.maps.len();

    // Identity at equal parameters.
    for i in 0..np {
        let m = &eng.maps[&(i, i)];
        if let Some((from, &to)) = m.iter().enumerate().find(|&(a, &b)| a != b) {
            return Err(hypothesis(
                "psi-identity",
                format!(
                    "map at parameters {:?} moves row position {from} to {to}",
                    eng.p[i]
                ),
            ));
        }
    }

    // Composition.
    let mut triples_checked = 0usize;
    match opts.triples {
        SampleMode::Exhaustive => {
            for i in 0..np {
                for j in 0..np {
                    for k in 0..np {
                        eng.check_composition(i, j, k)?;
                        triples_checked += 1;
                    }
                }
            }
        }
        SampleMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let i = rng.gen_range(0..np);
                let j = rng.gen_range(0..np);
                let k = rng.gen_range(0..np);
                eng.check_composition(i, j, k)?;
                triples_checked += 1;
            }
        }
    }

    // Relation extensions per parameter tuple, as sets of row-position
    // tuples over the local domain.
    let mut rel_sets: Vec<Vec<HashSet<Vec<usize>>>> = Vec::with_capacity(np);
    for (i, c) in eng.p.iter().enumerate() {
        let d = &eng.domains[i];
        let mut sets = Vec::with_capacity(rels.len());
        for (ri, rel) in rels.iter().enumerate() {
            let m = rel_arities[ri];
            let mut set = HashSet::new();
            let mut args = c.clone();
            args.resize(p + m * r, 0);
            each_tuple(d.rows.len(), m, |t| {
                for (slot, &q) in t.iter().enumerate() {
                    args[p + slot * r..p + (slot + 1) * r].copy_from_slice(&d.rows[q]);
                }
                if rel.eval(&args)? {
                    set.insert(t.to_vec());
                }
                Ok(())
            })?;
            sets.push(set);
        }
        rel_sets.push(sets);
    }

    // Relation transport along every built map.
    let mut keys: Vec<(usize, usize)> = eng.maps.keys().copied().collect();
    keys.sort_unstable();
    for &(i, j) in &keys {
        let m = &eng.maps[&(i, j)];
        for ri in 0..rels.len() {
            each_tuple(eng.domains[i].rows.len(), rel_arities[ri], |t| {
                let image: Vec<usize> = t.iter().map(|&q| m[q]).collect();
                if rel_sets[i][ri].contains(t) != rel_sets[j][ri].contains(&image) {
                    return Err(hypothesis(
                        "relation-transport",
                        format!(
                            "relation `{}` is not preserved between parameters {:?} and {:?}",
                            datum.relations[ri].name, eng.p[i], eng.p[j]
                        ),
                    ));
                }
                Ok(())
            })?;
        }
    }

    // Declared negation pairs partition each domain power.
    for (pos_name, neg_name) in &datum.negations {
        let (pi, ni) = (rel_index(pos_name)?, rel_index(neg_name)?);
        for i in 0..np {
            each_tuple(eng.domains[i].rows.len(), rel_arities[pi], |t| {
                let a = rel_sets[i][pi].contains(t);
                if a == rel_sets[i][ni].contains(t) {
                    return Err(hypothesis(
                        "negation-complementarity",
                        format!(
                            "`{pos_name}` and `{neg_name}` {} at parameters {:?}",
                            if a { "overlap" } else { "leave a gap" },
                            eng.p[i]
                        ),
                    ));
                }
                Ok(())
            })?;
        }
    }

    let mut warnings = Vec::new();
    if opts.check_orbit_closure {
        if n <= DEFAULT_AUTOS_BOUND {
            let mut table = Vec::with_capacity(n * n);
            for x in 0..n {
                for y in 0..n {
                    table.push(st.mul_of(x, y));
                }
            }
            let tbox = TableBox::from_mul_table(n, &table)?;
            let autos = enumerate_automorphisms(&tbox, DEFAULT_AUTOS_BOUND)?;
            let pset: HashSet<&Vec<usize>> = eng.p.iter().collect();
            'autos: for a in &autos {
                for c in &eng.p {
                    let image: Vec<usize> = c.iter().map(|&x| a.map[x]).collect();
                    if !pset.contains(&image) {
                        warnings.push(format!(
                            "orbit formula is not automorphism-closed: an automorphism carries parameters {c:?} to {image:?}, which do not satisfy it"
                        ));
                        break 'autos;
                    }
                }
            }
        } else {
            warnings.push(format!(
                "orbit closure unchecked: order {n} exceeds the automorphism-enumeration bound {DEFAULT_AUTOS_BOUND}"
            ));
        }
    }

    let relations = datum
        .relations
        .iter()
        .enumerate()
        .map(|(ri, f)| QuotientRelation {
            name: f.name.clone(),
            arity: rel_arities[ri],
            tuples: rel_sets[0][ri].iter().cloned().collect(),
        })
        .collect();

    Ok(RemovalOutcome {
        datum: datum.name.clone(),
        param_tuples: np,
        base_params: eng.p[0].clone(),
        domain_rows: eng.domains[0].rows.len(),
        class_count: eng.domains[0].rows.len(),
        maps_built: eng.maps.len(),
        pairs_checked,
        triples_checked,
        relations,
        warnings,
    })
}

/// The interpretation datum for field recovery: parameters are a
/// non-commuting pair, rows are single central elements, and the relations
/// are the graphs of the two field operations (plus their complements).
pub fn maltsev_datum() -> InterpDatum {
    let parse = |s: &str| parse_formula(s).expect("datum formulas are well-formed");
    let orbit = parse("(formula orbit (free u v) (!= (* u v) (* v u)))");
    let domain = parse(&format!(
        "(formula domain (free u v x) (and {} {}))",
        commute("x", "u"),
        commute("x", "v"),
    ));
    let iso = parse(&format!(
        "(formula iso (free u v u2 v2 x y) {})",
        witness("u", "v", "x", &comm("u2", "v2"), "y", "="),
    ));
    let relations = vec![
        parse("(formula add3 (free u v x y z) (= (* x y) z))"),
        parse("(formula not_add3 (free u v x y z) (!= (* x y) z))"),
        parse(&format!(
            "(formula otimes3 (free u v x y z) {})",
            witness("u", "v", "x", "y", "z", "="),
        )),
        parse(&format!(
            "(formula not_otimes3 (free u v x y z) {})",
            witness("u", "v", "x", "y", "z", "!="),
        )),
    ];
    InterpDatum {
        name: "maltsev".into(),
        params: 2,
        row_arity: 1,
        orbit,
        domain,
        iso,
        relations,
        negations: vec![
            ("add3".into(), "not_add3".into()),
            ("otimes3".into(), "not_otimes3".into()),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bbox::{cyclic_table, relabel, HeisBox};
    use crate::fields::PrimeField;
    use crate::heisenberg::theta;

    fn hbox(p: u64) -> HeisBox<PrimeField> {
        HeisBox::new(theta(PrimeField::new(p).unwrap()))
    }

    fn tuples(raw: &[&[usize]]) -> BTreeSet<Vec<usize>> {
        raw.iter().map(|t| t.to_vec()).collect()
    }

    #[test]
    fn the_field_datum_glues_over_the_order_eight_group() {
        let g = hbox(2);
        let st = FinStructure::from_group(&g).unwrap();
        let out = remove_parameters(&st, &maltsev_datum(), &RemovalOptions::default()).unwrap();
        assert_eq!(out.param_tuples, 24);
        assert_eq!(out.base_params, vec![2, 4]);
        assert_eq!(out.domain_rows, 2);
        assert_eq!(out.class_count, 2);
        assert_eq!(out.maps_built, 24 * 24);
        assert_eq!(out.pairs_checked, 24 * 24);
        assert_eq!(out.triples_checked, 24 * 24 * 24);
        assert!(out.warnings.is_empty(), "{:?}", out.warnings);

        // The quotient relations are the two-element field: class 0 is the
        // additive identity id, class 1 the multiplicative one.
        let by_name = |name: &str| out.relations.iter().find(|r| r.name == name).unwrap();
        assert_eq!(
            by_name("add3").tuples,
            tuples(&[&[0, 0, 0], &[0, 1, 1], &[1, 0, 1], &[1, 1, 0]])
        );
        assert_eq!(
            by_name("otimes3").tuples,
            tuples(&[&[0, 0, 0], &[0, 1, 0], &[1, 0, 0], &[1, 1, 1]])
        );
        assert_eq!(
            by_name("not_add3").tuples,
            tuples(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0], &[1, 1, 1]])
        );
        assert_eq!(by_name("not_otimes3").arity, 3);
    }

    #[test]
    fn removal_survives_relabelling() {
        let g = hbox(2);
        let (shuffled, _) = relabel(&g, 41).unwrap();
        let st = FinStructure::from_group(&shuffled).unwrap();
        let out = remove_parameters(&st, &maltsev_datum(), &RemovalOptions::default()).unwrap();
        assert_eq!(out.param_tuples, 24);
        assert_eq!(out.class_count, 2);
        let add = out.relations.iter().find(|r| r.name == "add3").unwrap();
        assert_eq!(add.tuples.len(), 4);
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn sampled_checks_glue_the_order_twentyseven_group() {
        let g = hbox(3);
        let st = FinStructure::from_group(&g).unwrap();
        let opts = RemovalOptions {
            pairs: SampleMode::Sample { count: 120, seed: 3 },
            triples: SampleMode::Sample { count: 120, seed: 4 },
            check_orbit_closure: true,
        };
        let out = remove_parameters(&st, &maltsev_datum(), &opts).unwrap();
        assert_eq!(out.param_tuples, 432);
        assert_eq!(out.domain_rows, 3);
        assert_eq!(out.class_count, 3);
        assert!(out.warnings.is_empty(), "{:?}", out.warnings);
        assert!(out.maps_built >= 432);
        assert_eq!(out.triples_checked, 120);
        // The glued quotient is a three-element field: check a couple of
        // table rows without pinning the class labelling.
        let add = out.relations.iter().find(|r| r.name == "add3").unwrap();
        assert_eq!(add.tuples.len(), 9);
        let mul = out.relations.iter().find(|r| r.name == "otimes3").unwrap();
        assert_eq!(mul.tuples.len(), 9);
    }

    #[test]
    fn an_iso_that_shifts_at_equal_parameters_fails_the_identity_check() {
        let g = hbox(2);
        let st = FinStructure::from_group(&g).unwrap();
        let mut datum = maltsev_datum();
        // y = [x',y'] * [u2,v2] instead of y = [x',y']: still functional and
        // bijective, but the map at equal parameters is a central shift.
        datum.iso = parse_formula(&format!(
            "(formula iso (free u v u2 v2 x y) {})",
            witness(
                "u",
                "v",
                "x",
                &comm("u2", "v2"),
                &format!("(* y (inv {}))", comm("u2", "v2")),
                "=",
            ),
        ))
        .unwrap();
        let err = remove_parameters(&st, &datum, &RemovalOptions::default()).unwrap_err();
        assert!(
            matches!(&err, Error::Hypothesis { check, .. } if check == "psi-identity"),
            "{err}"
        );
    }

    #[test]
    fn an_iso_that_shifts_across_parameters_fails_the_composition_check() {
        let g = hbox(2);
        let st = FinStructure::from_group(&g).unwrap();
        let mut datum = maltsev_datum();
        // Honest identity on the diagonal, shifted transfer elsewhere: each
        // map is a bijection and the diagonal is fine, but composing two
        // shifts cancels while the direct map still shifts.
        datum.iso = parse_formula(&format!(
            "(formula iso (free u v u2 v2 x y) (or (and (= u u2) (= v v2) (= y x)) (and (or (!= u u2) (!= v v2)) {})))",
            witness(
                "u",
                "v",
                "x",
                &comm("u2", "v2"),
                &format!("(* y {})", comm("u2", "v2")),
                "=",
            ),
        ))
        .unwrap();
        let err = remove_parameters(&st, &datum, &RemovalOptions::default()).unwrap_err();
        assert!(
            matches!(&err, Error::Hypothesis { check, .. } if check == "psi-composition"),
            "{err}"
        );
    }

    #[test]
    fn a_pinned_orbit_draws_a_closure_warning() {
        let g = hbox(2);
        let mut st = FinStructure::from_group(&g).unwrap();
        st.set_constant("u0", 2).unwrap();
        st.set_constant("v0", 4).unwrap();
        let mut datum = maltsev_datum();
        datum.orbit = parse_formula(
            "(formula orbit (free u v) (and (= u (const u0)) (= v (const v0)) (!= (* u v) (* v u))))",
        )
        .unwrap();
        let out = remove_parameters(&st, &datum, &RemovalOptions::default()).unwrap();
        assert_eq!(out.param_tuples, 1);
        assert_eq!(out.class_count, 2);
        assert_eq!(out.warnings.len(), 1, "{:?}", out.warnings);
        assert!(out.warnings[0].contains("orbit"), "{}", out.warnings[0]);
    }

    #[test]
    fn abelian_hosts_have_an_empty_orbit() {
        let g = cyclic_table(6);
        let st = FinStructure::from_group(&g).unwrap();
        let err = remove_parameters(&st, &maltsev_datum(), &RemovalOptions::default()).unwrap_err();
        assert!(
            matches!(&err, Error::Hypothesis { check, .. } if check == "orbit-nonempty"),
            "{err}"
        );
    }

    #[test]
    fn datum_shapes_are_validated() {
        let g = hbox(2);
        let st = FinStructure::from_group(&g).unwrap();

        let mut bad_iso = maltsev_datum();
        bad_iso.iso = parse_formula("(formula iso (free u v x y) (= x y))").unwrap();
        assert!(matches!(
            remove_parameters(&st, &bad_iso, &RemovalOptions::default()),
            Err(Error::Arity { .. })
        ));

        let mut bad_rel = maltsev_datum();
        bad_rel.relations[0] = parse_formula("(formula add3 (free u v) (= u u))").unwrap();
        assert!(matches!(
            remove_parameters(&st, &bad_rel, &RemovalOptions::default()),
            Err(Error::Arity { .. })
        ));

        let mut bad_neg = maltsev_datum();
        bad_neg.negations = vec![("add3".into(), "missing".into())];
        assert!(matches!(
            remove_parameters(&st, &bad_neg, &RemovalOptions::default()),
            Err(Error::UnknownSymbol(_))
        ));
    }
}
