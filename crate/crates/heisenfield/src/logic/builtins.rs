//! The frozen formula definitions behind the recovery constructions.
//!
//! Every definable set and map this crate computes by direct search is also
//! pinned down by a positive-existential formula over the group language,
//! and the tests hold the two routes to each other. The formulas come in
//! two flavours:
//!
//! - parameterized: `center`, `otimes` (constants `u`, `v`) and `transfer`
//!   (constants `u`, `v`, `u2`, `v2`) — the evaluating structure must bind
//!   those constants to a non-commuting pair (resp. two pairs);
//! - parameter-free, over triples: `domain`, `sim`/`not_sim` (arity 6),
//!   `oplus`/`not_oplus`, `odot`/`not_odot` (arity 9).
//!
//! The `not_*` forms are not syntactic negations (the fragment has none):
//! they re-run the same witness search and accept when it lands somewhere
//! else. Because the witnessed maps are total and single-valued on the
//! domain, that is exactly the complement within the domain.
//!
//! All bound variables are drawn from the fixed pool `xp`, `yp`, `w`, `z`,
//! and conjuncts sit at the innermost binding site that covers them, so a
//! naive evaluator prunes early instead of scanning full cartesian powers.

use crate::error::{Error, Result};
use crate::logic::sexpr::parse_formula;
use crate::logic::NamedFormula;

/// Names of all built-in formulas, in presentation order.
pub const NAMES: &[&str] = &[
    "center", "domain", "otimes", "transfer", "sim", "not_sim", "oplus", "not_oplus", "odot",
    "not_odot",
];

/// The commutator word `[a, b]`.
pub(crate) fn comm(a: &str, b: &str) -> String {
    format!("(* (* (inv {a}) (inv {b})) (* {a} {b}))")
}

/// The atom `a * b = b * a`.
pub(crate) fn commute(a: &str, b: &str) -> String {
    format!("(= (* {a} {b}) (* {b} {a}))")
}

/// Conjuncts (not wrapped) stating `(a, b, c)` is a domain triple.
pub(crate) fn domain_guard(a: &str, b: &str, c: &str) -> String {
    format!(
        "(!= (* {a} {b}) (* {b} {a})) (= (* {c} {a}) (* {a} {c})) (= (* {c} {b}) (* {b} {c}))"
    )
}

/// The central double-witness block: there are `xp`, `yp` with
/// `[xp, u] = 1`, `[xp, v] = x`, `[yp, v] = 1`, `[u, yp] = y`, and
/// `[xp, yp] EQ z` (`eq` is `=` or `!=`). All six slots take term strings.
pub(crate) fn witness(u: &str, v: &str, x: &str, y: &str, z: &str, eq: &str) -> String {
    format!(
        "(exists xp (and {cxu} (= {cxv} {x}) (exists yp (and {cyv} (= {cuy} {y}) ({eq} {cxy} {z})))))",
        cxu = commute("xp", u),
        cxv = comm("xp", v),
        cyv = commute("yp", v),
        cuy = comm(u, "yp"),
        cxy = comm("xp", "yp"),
    )
}

fn source(name: &str) -> Option<String> {
    let s = match name {
        "center" => format!(
            "(formula center (free x) (and {} {}))",
            commute("x", "(const u)"),
            commute("x", "(const v)"),
        ),
        "domain" => format!(
            "(formula domain (free a b c) (and {}))",
            domain_guard("a", "b", "c"),
        ),
        "otimes" => format!(
            "(formula otimes (free x y z) {})",
            witness("(const u)", "(const v)", "x", "y", "z", "="),
        ),
        "transfer" => format!(
            "(formula transfer (free x y) {})",
            witness(
                "(const u)",
                "(const v)",
                "x",
                &comm("(const u2)", "(const v2)"),
                "y",
                "=",
            ),
        ),
        "sim" | "not_sim" => format!(
            "(formula {name} (free a b c a2 b2 c2) (and {} {} {}))",
            domain_guard("a", "b", "c"),
            domain_guard("a2", "b2", "c2"),
            witness(
                "a",
                "b",
                "c",
                &comm("a2", "b2"),
                "c2",
                if name == "sim" { "=" } else { "!=" },
            ),
        ),
        "oplus" | "not_oplus" => format!(
            "(formula {name} (free a b c a2 b2 c2 a3 b3 c3) (and {} {} {} (exists w (and {} {}))))",
            domain_guard("a", "b", "c"),
            domain_guard("a2", "b2", "c2"),
            domain_guard("a3", "b3", "c3"),
            witness("a2", "b2", "c2", &comm("a", "b"), "w", "="),
            witness(
                "a",
                "b",
                "(* c w)",
                &comm("a3", "b3"),
                "c3",
                if name == "oplus" { "=" } else { "!=" },
            ),
        ),
        "odot" | "not_odot" => format!(
            "(formula {name} (free a b c a2 b2 c2 a3 b3 c3) (and {} {} {} (exists w (and {} (exists z (and {} {}))))))",
            domain_guard("a", "b", "c"),
            domain_guard("a2", "b2", "c2"),
            domain_guard("a3", "b3", "c3"),
            witness("a2", "b2", "c2", &comm("a", "b"), "w", "="),
            witness("a", "b", "c", "w", "z", "="),
            witness(
                "a",
                "b",
                "z",
                &comm("a3", "b3"),
                "c3",
                if name == "odot" { "=" } else { "!=" },
            ),
        ),
        _ => return None,
    };
    Some(s)
}

/// Look up a built-in formula by name.
pub fn builtin(name: &str) -> Result<NamedFormula> {
    let src =
        source(name).ok_or_else(|| Error::UnknownSymbol(format!("built-in formula `{name}`")))?;
    Ok(parse_formula(&src).expect("built-in formulas are well-formed"))
}

/// All built-in formulas, in [`NAMES`] order.
pub fn all() -> Vec<NamedFormula> {
    NAMES
        .iter()
        .map(|n| builtin(n).expect("NAMES lists only built-ins"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bbox::HeisBox;
    use crate::fields::PrimeField;
    use crate::heisenberg::theta;
    use crate::interp::{self, QuotientField, Triple};
    use crate::logic::sexpr::to_sexpr;
    use crate::logic::{compile, CompiledFormula, FinStructure};
    use crate::maltsev::RecoveredField;
    use crate::transfer;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn frozen_names_and_arities() {
        let expected: &[(&str, usize)] = &[
            ("center", 1),
            ("domain", 3),
            ("otimes", 3),
            ("transfer", 2),
            ("sim", 6),
            ("not_sim", 6),
            ("oplus", 9),
            ("not_oplus", 9),
            ("odot", 9),
            ("not_odot", 9),
        ];
        for &(name, arity) in expected {
            let f = builtin(name).unwrap();
            assert_eq!(f.name, name);
            assert_eq!(f.arity(), arity, "{name}");
        }
        assert_eq!(all().len(), NAMES.len());
        assert!(matches!(
            builtin("frobnicate"),
            Err(Error::UnknownSymbol(_))
        ));
    }

    #[test]
    fn builtins_round_trip_through_the_printer() {
        for f in all() {
            let printed = to_sexpr(&f);
            assert_eq!(parse_formula(&printed).unwrap(), f, "{}", f.name);
        }
    }

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

    /// Structure over H(GF(3)) with `(u, v)` the canonical pair and
    /// `(u2, v2)` a pair with commutator scale 2.
    fn structure3() -> (HeisBox<PrimeField>, FinStructure, (usize, usize, usize, usize)) {
        let g = hbox(3);
        let (u, v) = (hid(&g, 1, 0, 0), hid(&g, 0, 1, 0));
        let (u2, v2) = (hid(&g, 2, 0, 0), hid(&g, 0, 1, 0));
        let mut st = FinStructure::from_group(&g).unwrap();
        st.set_constant("u", u).unwrap();
        st.set_constant("v", v).unwrap();
        st.set_constant("u2", u2).unwrap();
        st.set_constant("v2", v2).unwrap();
        (g, st, (u, v, u2, v2))
    }

    #[test]
    fn center_formula_matches_the_centralizer_scan() {
        let (g, st, _) = structure3();
        let c = compile(&st, &builtin("center").unwrap()).unwrap();
        let center = crate::bbox::center(&g).unwrap();
        for x in 0..st.size() {
            assert_eq!(c.eval(&[x]).unwrap(), center.contains(&x), "id {x}");
        }
    }

    #[test]
    fn domain_formula_matches_the_direct_test() {
        let (g, st, _) = structure3();
        let c = compile(&st, &builtin("domain").unwrap()).unwrap();
        let n = st.size();
        let mut in_count = 0;
        for a in 0..n {
            for b in 0..n {
                for x in 0..n {
                    let direct = interp::in_domain(&g, &Triple::new(a, b, x)).unwrap();
                    assert_eq!(c.eval(&[a, b, x]).unwrap(), direct);
                    in_count += usize::from(direct);
                }
            }
        }
        assert_eq!(in_count, 1296); // 432 pairs x 3 central elements
    }

    #[test]
    fn otimes_formula_is_the_graph_of_recovered_multiplication() {
        let (g, st, (u, v, _, _)) = structure3();
        let c = compile(&st, &builtin("otimes").unwrap()).unwrap();
        let fld = RecoveredField::recover(&g, u, v).unwrap();
        let center = fld.elements().unwrap().to_vec();
        for &x in &center {
            for &y in &center {
                let z = fld.mul(x, y).unwrap();
                for cand in 0..st.size() {
                    assert_eq!(
                        c.eval(&[x, y, cand]).unwrap(),
                        cand == z,
                        "x={x} y={y} cand={cand}"
                    );
                }
            }
        }
    }

    #[test]
    fn transfer_formula_is_the_graph_of_the_transfer_map() {
        let (g, st, (u, v, u2, v2)) = structure3();
        let c = compile(&st, &builtin("transfer").unwrap()).unwrap();
        let from = RecoveredField::recover(&g, u, v).unwrap();
        let to = RecoveredField::recover(&g, u2, v2).unwrap();
        for &x in from.elements().unwrap() {
            let fx = transfer::transfer(&from, &to, x).unwrap();
            for cand in 0..st.size() {
                assert_eq!(c.eval(&[x, cand]).unwrap(), cand == fx);
            }
        }
    }

    #[test]
    fn sim_formula_matches_the_oracle_exhaustively_on_gf2() {
        let g = hbox(2);
        let st = FinStructure::from_group(&g).unwrap();
        let csim = compile(&st, &builtin("sim").unwrap()).unwrap();
        let cnot = compile(&st, &builtin("not_sim").unwrap()).unwrap();
        let q = QuotientField::build(&g).unwrap();
        let triples: Vec<Triple> = q.triples().collect();
        for t1 in &triples {
            for t2 in &triples {
                let args = [t1.u, t1.v, t1.x, t2.u, t2.v, t2.x];
                let expected = q.sim(t1, t2).unwrap();
                assert_eq!(csim.eval(&args).unwrap(), expected);
                assert_eq!(cnot.eval(&args).unwrap(), !expected);
            }
        }
        // Outside the domain both forms are false.
        let bad = [0, 0, 0, triples[0].u, triples[0].v, triples[0].x];
        assert!(!csim.eval(&bad).unwrap());
        assert!(!cnot.eval(&bad).unwrap());
    }

    #[test]
    fn sim_formula_matches_the_oracle_on_sampled_gf3_triples() {
        let (g, st, _) = structure3();
        let csim = compile(&st, &builtin("sim").unwrap()).unwrap();
        let cnot = compile(&st, &builtin("not_sim").unwrap()).unwrap();
        let q = QuotientField::build(&g).unwrap();
        let triples: Vec<Triple> = q.triples().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..400 {
            let t1 = triples[rng.gen_range(0..triples.len())];
            let t2 = triples[rng.gen_range(0..triples.len())];
            let args = [t1.u, t1.v, t1.x, t2.u, t2.v, t2.x];
            let expected = q.sim(&t1, &t2).unwrap();
            assert_eq!(csim.eval(&args).unwrap(), expected);
            assert_eq!(cnot.eval(&args).unwrap(), !expected);
        }
    }

    #[test]
    fn oplus_and_odot_formulas_recognize_the_class_operations_on_gf2() {
        let g = hbox(2);
        let st = FinStructure::from_group(&g).unwrap();
        let cplus = compile(&st, &builtin("oplus").unwrap()).unwrap();
        let cnplus = compile(&st, &builtin("not_oplus").unwrap()).unwrap();
        let cdot = compile(&st, &builtin("odot").unwrap()).unwrap();
        let cndot = compile(&st, &builtin("not_odot").unwrap()).unwrap();
        let q = QuotientField::build(&g).unwrap();
        let triples: Vec<Triple> = q.triples().collect();
        // The two central elements at any pair represent the two classes;
        // flipping the result component flips the class.
        let flip = |t: &Triple| -> Triple {
            let other = *q
                .center_ids()
                .iter()
                .find(|&&c| c != t.x)
                .expect("two central elements");
            Triple::new(t.u, t.v, other)
        };
        for t1 in &triples {
            for t2 in &triples {
                let sum = interp::oplus(&g, t1, t2).unwrap();
                let prod = interp::odot(&g, t1, t2).unwrap();
                let good_sum = [t1.u, t1.v, t1.x, t2.u, t2.v, t2.x, sum.u, sum.v, sum.x];
                let bad = flip(&sum);
                let bad_sum = [t1.u, t1.v, t1.x, t2.u, t2.v, t2.x, bad.u, bad.v, bad.x];
                assert!(cplus.eval(&good_sum).unwrap());
                assert!(!cplus.eval(&bad_sum).unwrap());
                assert!(!cnplus.eval(&good_sum).unwrap());
                assert!(cnplus.eval(&bad_sum).unwrap());
                let good_prod = [t1.u, t1.v, t1.x, t2.u, t2.v, t2.x, prod.u, prod.v, prod.x];
                let badp = flip(&prod);
                let bad_prod = [t1.u, t1.v, t1.x, t2.u, t2.v, t2.x, badp.u, badp.v, badp.x];
                assert!(cdot.eval(&good_prod).unwrap());
                assert!(!cdot.eval(&bad_prod).unwrap());
                assert!(!cndot.eval(&good_prod).unwrap());
                assert!(cndot.eval(&bad_prod).unwrap());
            }
        }
    }

    #[test]
    fn oplus_formula_spot_checks_on_gf3() {
        let (g, st, _) = structure3();
        let cplus = compile(&st, &builtin("oplus").unwrap()).unwrap();
        let q = QuotientField::build(&g).unwrap();
        let triples: Vec<Triple> = q.triples().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let t1 = triples[rng.gen_range(0..triples.len())];
            let t2 = triples[rng.gen_range(0..triples.len())];
            let sum = interp::oplus(&g, &t1, &t2).unwrap();
            // Any triple similar to the representative-level sum, at any
            // pair, is accepted; dissimilar central shifts are not.
            let cls = q.class_of(&sum).unwrap();
            for t3 in [sum, q.representative(cls).unwrap()] {
                assert!(cplus
                    .eval(&[t1.u, t1.v, t1.x, t2.u, t2.v, t2.x, t3.u, t3.v, t3.x])
                    .unwrap());
            }
            let wrong = q
                .representative((cls + 1) % q.class_count())
                .unwrap();
            assert!(!cplus
                .eval(&[t1.u, t1.v, t1.x, t2.u, t2.v, t2.x, wrong.u, wrong.v, wrong.x])
                .unwrap());
        }
    }

    /// A helper shared by the evaluation tests: compile a builtin against a
    /// bare structure (no constants needed for the parameter-free ones).
    fn compile_free<'s>(st: &'s FinStructure, name: &str) -> CompiledFormula<'s> {
        compile(st, &builtin(name).unwrap()).unwrap()
    }

    #[test]
    fn parameter_free_builtins_need_no_constants() {
        let g = hbox(2);
        let st = FinStructure::from_group(&g).unwrap();
        for name in ["domain", "sim", "not_sim", "oplus", "not_oplus", "odot", "not_odot"] {
            compile_free(&st, name);
        }
        // The parameterized ones refuse to compile without bindings.
        for name in ["center", "otimes", "transfer"] {
            assert!(matches!(
                compile(&st, &builtin(name).unwrap()),
                Err(Error::UnknownSymbol(_))
            ));
        }
    }
}
