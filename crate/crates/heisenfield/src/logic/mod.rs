//! Positive-existential formulas over finite group structures.
//!
//! The recovery constructions are all definable by formulas of a restricted
//! shape: atoms are (in)equalities of group words or (negated) memberships
//! in named relations, connectives are conjunction and disjunction, and the
//! only quantifier is `exists`. This module holds the abstract syntax
//! ([`Term`], [`Formula`], [`NamedFormula`]), finite structures to evaluate
//! them in ([`FinStructure`]), and a small compiler that resolves names to
//! slots and tables up front so evaluation is a tight loop over ids.
//!
//! Formulas are data: [`sexpr`] gives them a parseable textual form,
//! [`builtins`] ships the frozen definitions used by the recovery, and
//! [`remove`] consumes them as interpretation data for the parameter
//! removal engine.
//!
//! Since every connective is monotone and `exists` only adds witnesses,
//! satisfaction persists upward along embeddings of structures — a
//! property the tests pin down concretely on the center substructure.

pub mod builtins;
pub mod remove;
pub mod sexpr;

use std::collections::{BTreeMap, HashSet};

use crate::bbox::BlackBoxGroup;
use crate::error::{Error, Result};

/// A group word with variables and named constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Const(String),
    /// The group identity `e`.
    One,
    Mul(Box<Term>, Box<Term>),
    Inv(Box<Term>),
}

/// Positive-existential formulas; negation exists only on atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Eq(Term, Term),
    Ne(Term, Term),
    Rel(String, Vec<Term>),
    NotRel(String, Vec<Term>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(String, Box<Formula>),
}

/// A formula together with its name and ordered free variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedFormula {
    pub name: String,
    pub free: Vec<String>,
    pub body: Formula,
}

impl NamedFormula {
    pub fn arity(&self) -> usize {
        self.free.len()
    }
}

/// A named relation stored in a structure.
#[derive(Debug, Clone)]
pub struct StoredRelation {
    pub arity: usize,
    tuples: HashSet<Vec<usize>>,
}

impl StoredRelation {
    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.tuples.contains(tuple)
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// A finite group with named constants and relations, materialized into
/// flat tables for formula evaluation.
#[derive(Debug, Clone)]
pub struct FinStructure {
    size: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    one: usize,
    constants: BTreeMap<String, usize>,
    relations: BTreeMap<String, StoredRelation>,
}

impl FinStructure {
    /// Materialize a finite black-box group.
    pub fn from_group(g: &dyn BlackBoxGroup) -> Result<Self> {
        let size = g
            .order()
            .ok_or_else(|| Error::RequiresFinite("formula evaluation".into()))?;
        let mut mul = Vec::with_capacity(size * size);
        for x in 0..size {
            for y in 0..size {
                mul.push(g.mul(x, y)?);
            }
        }
        let inv = (0..size).map(|x| g.inv(x)).collect::<Result<Vec<_>>>()?;
        Ok(FinStructure {
            size,
            mul,
            inv,
            one: g.identity(),
            constants: BTreeMap::new(),
            relations: BTreeMap::new(),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn mul_of(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.size + y]
    }

    pub fn inv_of(&self, x: usize) -> usize {
        self.inv[x]
    }

    /// Bind a named constant to an id.
    pub fn set_constant(&mut self, name: &str, id: usize) -> Result<()> {
        if id >= self.size {
            return Err(Error::InvalidId {
                id,
                order: self.size,
            });
        }
        self.constants.insert(name.to_string(), id);
        Ok(())
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.constants.get(name).copied()
    }

    /// Install a named relation; every tuple must have the given arity and
    /// in-range ids.
    pub fn add_relation(
        &mut self,
        name: &str,
        arity: usize,
        tuples: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<()> {
        let mut set = HashSet::new();
        for t in tuples {
            if t.len() != arity {
                return Err(Error::Arity {
                    what: format!("a tuple of relation `{name}`"),
                    expected: arity,
                    found: t.len(),
                });
            }
            if let Some(&id) = t.iter().find(|&&id| id >= self.size) {
                return Err(Error::InvalidId {
                    id,
                    order: self.size,
                });
            }
            set.insert(t);
        }
        self.relations
            .insert(name.to_string(), StoredRelation { arity, tuples: set });
        Ok(())
    }

    pub fn relation(&self, name: &str) -> Option<&StoredRelation> {
        self.relations.get(name)
    }
}

// ---------------------------------------------------------------------------
// Compilation and evaluation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum CTerm {
    /// A variable, indexing the evaluation stack (free variables first,
    /// then quantifier bindings in nesting order).
    Slot(usize),
    /// A resolved constant or the identity.
    Lit(usize),
    Mul(Box<CTerm>, Box<CTerm>),
    Inv(Box<CTerm>),
}

#[derive(Debug, Clone)]
enum CFormula {
    Eq(CTerm, CTerm),
    Ne(CTerm, CTerm),
    Rel(usize, Vec<CTerm>),
    NotRel(usize, Vec<CTerm>),
    And(Vec<CFormula>),
    Or(Vec<CFormula>),
    Exists(Box<CFormula>),
}

/// A formula resolved against a structure, ready for evaluation.
pub struct CompiledFormula<'s> {
    st: &'s FinStructure,
    name: String,
    free_arity: usize,
    rels: Vec<&'s StoredRelation>,
    body: CFormula,
}

/// Resolve names and check arities once; evaluation never fails after this.
pub fn compile<'s>(st: &'s FinStructure, nf: &NamedFormula) -> Result<CompiledFormula<'s>> {
    let mut seen = HashSet::new();
    for v in &nf.free {
        if !seen.insert(v.as_str()) {
            return Err(Error::Parse(format!(
                "duplicate free variable `{v}` in formula `{}`",
                nf.name
            )));
        }
    }
    let mut scope: Vec<String> = nf.free.clone();
    let mut rels: Vec<&'s StoredRelation> = Vec::new();
    let body = compile_formula(st, &nf.body, &mut scope, &mut rels)?;
    Ok(CompiledFormula {
        st,
        name: nf.name.clone(),
        free_arity: nf.free.len(),
        rels,
        body,
    })
}

fn compile_term(
    st: &FinStructure,
    t: &Term,
    scope: &[String],
) -> Result<CTerm> {
    Ok(match t {
        Term::Var(name) => match scope.iter().rposition(|s| s == name) {
            Some(slot) => CTerm::Slot(slot),
            None => return Err(Error::UnknownSymbol(format!("variable `{name}`"))),
        },
        Term::Const(name) => match st.constant(name) {
            Some(id) => CTerm::Lit(id),
            None => return Err(Error::UnknownSymbol(format!("constant `{name}`"))),
        },
        Term::One => CTerm::Lit(st.one),
        Term::Mul(a, b) => CTerm::Mul(
            Box::new(compile_term(st, a, scope)?),
            Box::new(compile_term(st, b, scope)?),
        ),
        Term::Inv(a) => CTerm::Inv(Box::new(compile_term(st, a, scope)?)),
    })
}

fn compile_formula<'s>(
    st: &'s FinStructure,
    f: &Formula,
    scope: &mut Vec<String>,
    rels: &mut Vec<&'s StoredRelation>,
) -> Result<CFormula> {
    Ok(match f {
        Formula::Eq(a, b) => CFormula::Eq(compile_term(st, a, scope)?, compile_term(st, b, scope)?),
        Formula::Ne(a, b) => CFormula::Ne(compile_term(st, a, scope)?, compile_term(st, b, scope)?),
        Formula::Rel(name, args) | Formula::NotRel(name, args) => {
            let rel = st
                .relation(name)
                .ok_or_else(|| Error::UnknownSymbol(format!("relation `{name}`")))?;
            if rel.arity != args.len() {
                return Err(Error::Arity {
                    what: format!("relation `{name}`"),
                    expected: rel.arity,
                    found: args.len(),
                });
            }
            let cargs = args
                .iter()
                .map(|a| compile_term(st, a, scope))
                .collect::<Result<Vec<_>>>()?;
            let idx = rels.len();
            rels.push(rel);
            if matches!(f, Formula::Rel(..)) {
                CFormula::Rel(idx, cargs)
            } else {
                CFormula::NotRel(idx, cargs)
            }
        }
        Formula::And(list) => CFormula::And(
            list.iter()
                .map(|g| compile_formula(st, g, scope, rels))
                .collect::<Result<Vec<_>>>()?,
        ),
        Formula::Or(list) => CFormula::Or(
            list.iter()
                .map(|g| compile_formula(st, g, scope, rels))
                .collect::<Result<Vec<_>>>()?,
        ),
        Formula::Exists(var, inner) => {
            scope.push(var.clone());
            let c = compile_formula(st, inner, scope, rels)?;
            scope.pop();
            CFormula::Exists(Box::new(c))
        }
    })
}

impl<'s> CompiledFormula<'s> {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.free_arity
    }

    /// Evaluate on the given free-variable assignment.
    pub fn eval(&self, args: &[usize]) -> Result<bool> {
        if args.len() != self.free_arity {
            return Err(Error::Arity {
                what: format!("formula `{}`", self.name),
                expected: self.free_arity,
                found: args.len(),
            });
        }
        if let Some(&id) = args.iter().find(|&&id| id >= self.st.size) {
            return Err(Error::InvalidId {
                id,
                order: self.st.size,
            });
        }
        let mut env = args.to_vec();
        Ok(self.eval_formula(&self.body, &mut env))
    }

    fn eval_term(&self, t: &CTerm, env: &[usize]) -> usize {
        match t {
            CTerm::Slot(i) => env[*i],
            CTerm::Lit(v) => *v,
            CTerm::Mul(a, b) => {
                let (x, y) = (self.eval_term(a, env), self.eval_term(b, env));
                self.st.mul[x * self.st.size + y]
            }
            CTerm::Inv(a) => self.st.inv[self.eval_term(a, env)],
        }
    }

    fn eval_formula(&self, f: &CFormula, env: &mut Vec<usize>) -> bool {
        match f {
            CFormula::Eq(a, b) => self.eval_term(a, env) == self.eval_term(b, env),
            CFormula::Ne(a, b) => self.eval_term(a, env) != self.eval_term(b, env),
            CFormula::Rel(idx, args) | CFormula::NotRel(idx, args) => {
                let tuple: Vec<usize> = args.iter().map(|a| self.eval_term(a, env)).collect();
                let held = self.rels[*idx].contains(&tuple);
                if matches!(f, CFormula::Rel(..)) {
                    held
                } else {
                    !held
                }
            }
            CFormula::And(list) => list.iter().all(|g| self.eval_formula(g, env)),
            CFormula::Or(list) => list.iter().any(|g| self.eval_formula(g, env)),
            CFormula::Exists(inner) => {
                env.push(0);
                let slot = env.len() - 1;
                for v in 0..self.st.size {
                    env[slot] = v;
                    if self.eval_formula(inner, env) {
                        env.pop();
                        return true;
                    }
                }
                env.pop();
                false
            }
        }
    }

    /// Every satisfying free-variable tuple, lexicographically ascending.
    pub fn tuples_satisfying(&self) -> Result<Vec<Vec<usize>>> {
        const LIMIT: u128 = 100_000_000;
        let n = self.st.size;
        let total = (n as u128).pow(self.free_arity as u32);
        if total > LIMIT {
            return Err(Error::OrderBound {
                order: n,
                bound: 0,
                what: format!(
                    "enumerating {total} assignments of formula `{}`",
                    self.name
                ),
            });
        }
        let mut out = Vec::new();
        let mut args = vec![0usize; self.free_arity];
        loop {
            if self.eval(&args)? {
                out.push(args.clone());
            }
            // Odometer step, last position fastest.
            let mut pos = self.free_arity;
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                args[pos] += 1;
                if args[pos] < n {
                    break;
                }
                args[pos] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bbox::{cyclic_table, HeisBox};
    use crate::fields::PrimeField;
    use crate::heisenberg::theta;

    fn h3() -> FinStructure {
        let g = HeisBox::new(theta(PrimeField::new(3).unwrap()));
        FinStructure::from_group(&g).unwrap()
    }

    fn named(name: &str, free: &[&str], body: Formula) -> NamedFormula {
        NamedFormula {
            name: name.into(),
            free: free.iter().map(|s| s.to_string()).collect(),
            body,
        }
    }

    fn var(s: &str) -> Term {
        Term::Var(s.into())
    }

    #[test]
    fn terms_evaluate_through_the_tables() {
        let st = h3();
        // inverse law: x * inv(x) = e for all x
        let f = named(
            "inv-law",
            &["x"],
            Formula::Eq(
                Term::Mul(Box::new(var("x")), Box::new(Term::Inv(Box::new(var("x"))))),
                Term::One,
            ),
        );
        let c = compile(&st, &f).unwrap();
        for x in 0..st.size() {
            assert!(c.eval(&[x]).unwrap());
        }
    }

    #[test]
    fn exists_scans_the_whole_structure() {
        let st = FinStructure::from_group(&cyclic_table(6)).unwrap();
        // "x is a double": exists w (x = w * w); in Z/6 the doubles are
        // {0, 2, 4}.
        let f = named(
            "double",
            &["x"],
            Formula::Exists(
                "w".into(),
                Box::new(Formula::Eq(
                    var("x"),
                    Term::Mul(Box::new(var("w")), Box::new(var("w"))),
                )),
            ),
        );
        let c = compile(&st, &f).unwrap();
        let sat = c.tuples_satisfying().unwrap();
        assert_eq!(sat, vec![vec![0], vec![2], vec![4]]);
    }

    #[test]
    fn shadowing_binds_to_the_innermost_quantifier() {
        let st = FinStructure::from_group(&cyclic_table(5)).unwrap();
        // exists w (x = w and exists w (w = e)): inner w is fresh, so this
        // just says x = w for some w, i.e. always true.
        let f = named(
            "shadow",
            &["x"],
            Formula::Exists(
                "w".into(),
                Box::new(Formula::And(vec![
                    Formula::Eq(var("x"), var("w")),
                    Formula::Exists("w".into(), Box::new(Formula::Eq(var("w"), Term::One))),
                ])),
            ),
        );
        let c = compile(&st, &f).unwrap();
        assert_eq!(c.tuples_satisfying().unwrap().len(), 5);
    }

    #[test]
    fn constants_and_relations_resolve() {
        let mut st = FinStructure::from_group(&cyclic_table(4)).unwrap();
        st.set_constant("g", 3).unwrap();
        st.add_relation("odd", 1, vec![vec![1], vec![3]]).unwrap();
        let f = named(
            "odd-shift",
            &["x"],
            Formula::And(vec![
                Formula::Rel("odd".into(), vec![var("x")]),
                Formula::NotRel(
                    "odd".into(),
                    vec![Term::Mul(Box::new(var("x")), Box::new(Term::Const("g".into())))],
                ),
            ]),
        );
        let c = compile(&st, &f).unwrap();
        // x odd and x + 3 even: x = 1 (1 + 3 = 0) and x = 3 (3 + 3 = 2).
        assert_eq!(c.tuples_satisfying().unwrap(), vec![vec![1], vec![3]]);
    }

    #[test]
    fn compile_rejects_unknown_names_and_arities() {
        let st = h3();
        let unbound = named("bad", &["x"], Formula::Eq(var("x"), var("y")));
        assert!(matches!(
            compile(&st, &unbound),
            Err(Error::UnknownSymbol(_))
        ));
        let no_const = named(
            "bad",
            &["x"],
            Formula::Eq(var("x"), Term::Const("missing".into())),
        );
        assert!(matches!(
            compile(&st, &no_const),
            Err(Error::UnknownSymbol(_))
        ));
        let no_rel = named("bad", &["x"], Formula::Rel("r".into(), vec![var("x")]));
        assert!(matches!(compile(&st, &no_rel), Err(Error::UnknownSymbol(_))));
        let mut st2 = h3();
        st2.add_relation("r", 2, vec![]).unwrap();
        let wrong_arity = named("bad", &["x"], Formula::Rel("r".into(), vec![var("x")]));
        assert!(matches!(
            compile(&st2, &wrong_arity),
            Err(Error::Arity { expected: 2, found: 1, .. })
        ));
        let dup = named("bad", &["x", "x"], Formula::Eq(var("x"), var("x")));
        assert!(matches!(compile(&st, &dup), Err(Error::Parse(_))));
    }

    #[test]
    fn eval_rejects_bad_argument_vectors() {
        let st = h3();
        let f = named("id", &["x"], Formula::Eq(var("x"), var("x")));
        let c = compile(&st, &f).unwrap();
        assert!(matches!(c.eval(&[0, 1]), Err(Error::Arity { .. })));
        assert!(matches!(c.eval(&[27]), Err(Error::InvalidId { .. })));
    }

    #[test]
    fn satisfaction_persists_into_larger_structures() {
        // The center of H(GF(3)) is Z/3; positive-existential truths about
        // it persist into the full group along the inclusion.
        let g = HeisBox::new(theta(PrimeField::new(3).unwrap()));
        let sub = FinStructure::from_group(&cyclic_table(3)).unwrap();
        let full = FinStructure::from_group(&g).unwrap();
        let embed: Vec<usize> = crate::bbox::center(&g).unwrap();
        assert_eq!(embed.len(), 3);
        // Doubles with a nontrivial witness structure.
        let f = named(
            "double",
            &["x"],
            Formula::Exists(
                "w".into(),
                Box::new(Formula::Eq(
                    var("x"),
                    Term::Mul(Box::new(var("w")), Box::new(var("w"))),
                )),
            ),
        );
        let c_sub = compile(&sub, &f).unwrap();
        let c_full = compile(&full, &f).unwrap();
        for x in 0..3 {
            if c_sub.eval(&[x]).unwrap() {
                assert!(c_full.eval(&[embed[x]]).unwrap());
            }
        }
        // The product formula too: sums computed in the center persist.
        let sum = named(
            "sum",
            &["x", "y", "z"],
            Formula::Eq(Term::Mul(Box::new(var("x")), Box::new(var("y"))), var("z")),
        );
        let c_sub = compile(&sub, &sum).unwrap();
        let c_full = compile(&full, &sum).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    if c_sub.eval(&[x, y, z]).unwrap() {
                        assert!(c_full.eval(&[embed[x], embed[y], embed[z]]).unwrap());
                    }
                }
            }
        }
    }
}
