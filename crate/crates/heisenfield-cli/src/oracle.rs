//! Sweeps every built-in formula against the hand-coded operation it is
//! supposed to define, reporting per-formula agreement counts.
//!
//! Small hosts get exhaustive sweeps; larger ones fall back to seeded
//! samples so the run stays within interactive time.  All sampling is
//! drawn from a single ChaCha8 stream, so a fixed `--seed` reproduces the
//! exact tuples checked.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use heisenfield::bbox::{center, BlackBoxGroup};
use heisenfield::interp::{domain_d, in_domain, odot, oplus, sim, Triple};
use heisenfield::logic::builtins::{builtin, NAMES};
use heisenfield::logic::{compile, FinStructure};
use heisenfield::maltsev::RecoveredField;
use heisenfield::{Error, Result};

/// Largest group order the sweep accepts; the exhaustive low-arity passes
/// are cubic in the order, so this keeps a full run to a few seconds.
pub const ORACLE_MAX_ORDER: usize = 64;

/// Hosts at or below this order get exhaustive relation sweeps over the
/// domain; larger hosts are sampled.
const EXHAUSTIVE_ORDER: usize = 8;

/// Agreement tally for one named formula.
#[derive(Serialize)]
pub struct OracleLine {
    pub name: &'static str,
    pub checked: usize,
    pub disagreements: usize,
}

/// Full sweep result: one line per built-in, plus human-readable
/// descriptions of the first few disagreements found.
pub struct OracleOutcome {
    pub lines: Vec<OracleLine>,
    pub violations: Vec<String>,
}

fn push(violations: &mut Vec<String>, msg: String) {
    if violations.len() < 12 {
        violations.push(msg);
    }
}

/// Compares each built-in formula with the corresponding hand-coded
/// operation on `host`, exhaustively where the arity allows and on seeded
/// samples otherwise.
pub fn sweep(host: &dyn BlackBoxGroup, seed: u64) -> Result<OracleOutcome> {
    let n = host
        .order()
        .ok_or_else(|| Error::RequiresFinite("oracle sweep".into()))?;
    if n > ORACLE_MAX_ORDER {
        return Err(Error::OrderBound {
            order: n,
            bound: ORACLE_MAX_ORDER,
            what: "oracle sweep".into(),
        });
    }

    // The first two non-commuting pairs in lexicographic order seed the
    // constants (u, v) and (u2, v2) that the compiled formulas refer to.
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if !host.commutes(u, v)? {
                pairs.push((u, v));
            }
        }
    }
    if pairs.len() < 2 {
        return Err(Error::AbelianGroup);
    }
    let (u, v) = pairs[0];
    let (u2, v2) = pairs[1];

    let mut st = FinStructure::from_group(host)?;
    st.set_constant("u", u)?;
    st.set_constant("v", v)?;
    st.set_constant("u2", u2)?;
    st.set_constant("v2", v2)?;
    let mut compiled = Vec::with_capacity(NAMES.len());
    for name in NAMES {
        compiled.push(compile(&st, &builtin(name)?)?);
    }
    let formula = |name: &str| &compiled[NAMES.iter().position(|m| *m == name).unwrap()];

    let fld = RecoveredField::recover(host, u, v)?;
    let center_set: HashSet<usize> = center(host)?.into_iter().collect();
    let dom = domain_d(host)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut lines = Vec::new();
    let mut violations = Vec::new();

    // center(x): membership in Z(H).
    {
        let f = formula("center");
        let mut bad = 0;
        for x in 0..n {
            if f.eval(&[x])? != center_set.contains(&x) {
                bad += 1;
                push(&mut violations, format!("center disagrees at element {x}"));
            }
        }
        lines.push(OracleLine {
            name: "center",
            checked: n,
            disagreements: bad,
        });
    }

    // domain(u, v, x): membership in the coded-pair domain.
    {
        let f = formula("domain");
        let mut bad = 0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if f.eval(&[a, b, c])? != in_domain(host, &Triple::new(a, b, c))? {
                        bad += 1;
                        push(
                            &mut violations,
                            format!("domain disagrees at ({a}, {b}, {c})"),
                        );
                    }
                }
            }
        }
        lines.push(OracleLine {
            name: "domain",
            checked: n * n * n,
            disagreements: bad,
        });
    }

    // otimes(x, y, z): the graph of multiplication in the recovered field.
    {
        let f = formula("otimes");
        let mut bad = 0;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let hand =
                        fld.contains(x)? && fld.contains(y)? && fld.mul(x, y)? == z;
                    if f.eval(&[x, y, z])? != hand {
                        bad += 1;
                        push(
                            &mut violations,
                            format!("otimes disagrees at ({x}, {y}, {z})"),
                        );
                    }
                }
            }
        }
        lines.push(OracleLine {
            name: "otimes",
            checked: n * n * n,
            disagreements: bad,
        });
    }

    // transfer(x, y): x at the base pair names the same scalar as y at the
    // second pair.
    {
        let f = formula("transfer");
        let mut bad = 0;
        for x in 0..n {
            for y in 0..n {
                let t1 = Triple::new(u, v, x);
                let t2 = Triple::new(u2, v2, y);
                let hand =
                    in_domain(host, &t1)? && in_domain(host, &t2)? && sim(host, &t1, &t2)?;
                if f.eval(&[x, y])? != hand {
                    bad += 1;
                    push(&mut violations, format!("transfer disagrees at ({x}, {y})"));
                }
            }
        }
        lines.push(OracleLine {
            name: "transfer",
            checked: n * n,
            disagreements: bad,
        });
    }

    // Argument lists for the 6-ary relations: every pair of domain triples
    // when the host is small, seeded samples otherwise, plus raw 6-tuples
    // to exercise the off-domain branches.
    let mut args6: Vec<[usize; 6]> = Vec::new();
    if n <= EXHAUSTIVE_ORDER {
        for t1 in &dom {
            for t2 in &dom {
                args6.push([t1.u, t1.v, t1.x, t2.u, t2.v, t2.x]);
            }
        }
        for _ in 0..2000 {
            args6.push(std::array::from_fn(|_| rng.gen_range(0..n)));
        }
    } else {
        for _ in 0..2500 {
            let t1 = &dom[rng.gen_range(0..dom.len())];
            let t2 = &dom[rng.gen_range(0..dom.len())];
            args6.push([t1.u, t1.v, t1.x, t2.u, t2.v, t2.x]);
        }
        for _ in 0..2500 {
            args6.push(std::array::from_fn(|_| rng.gen_range(0..n)));
        }
    }
    let mut hand6 = Vec::with_capacity(args6.len());
    for a in &args6 {
        let t1 = Triple::new(a[0], a[1], a[2]);
        let t2 = Triple::new(a[3], a[4], a[5]);
        let on = in_domain(host, &t1)? && in_domain(host, &t2)?;
        hand6.push(on && sim(host, &t1, &t2)?);
    }
    for (name, positive) in [("sim", true), ("not_sim", false)] {
        let f = formula(name);
        let mut bad = 0;
        for (a, &pos) in args6.iter().zip(&hand6) {
            let t1 = Triple::new(a[0], a[1], a[2]);
            let t2 = Triple::new(a[3], a[4], a[5]);
            let on = in_domain(host, &t1)? && in_domain(host, &t2)?;
            let hand = if positive { pos } else { on && !pos };
            if f.eval(a)? != hand {
                bad += 1;
                push(&mut violations, format!("{name} disagrees at {a:?}"));
            }
        }
        lines.push(OracleLine {
            name: formula_name(name),
            checked: args6.len(),
            disagreements: bad,
        });
    }

    // Argument lists for the 9-ary relations (graphs of induced addition
    // and multiplication on coded pairs), built the same way.
    let mut args9: Vec<[usize; 9]> = Vec::new();
    if n <= EXHAUSTIVE_ORDER {
        for t1 in &dom {
            for t2 in &dom {
                for t3 in &dom {
                    args9.push([t1.u, t1.v, t1.x, t2.u, t2.v, t2.x, t3.u, t3.v, t3.x]);
                }
            }
        }
        for _ in 0..2000 {
            args9.push(std::array::from_fn(|_| rng.gen_range(0..n)));
        }
    } else {
        for _ in 0..1200 {
            let t1 = &dom[rng.gen_range(0..dom.len())];
            let t2 = &dom[rng.gen_range(0..dom.len())];
            let t3 = &dom[rng.gen_range(0..dom.len())];
            args9.push([t1.u, t1.v, t1.x, t2.u, t2.v, t2.x, t3.u, t3.v, t3.x]);
        }
        for _ in 0..1200 {
            args9.push(std::array::from_fn(|_| rng.gen_range(0..n)));
        }
    }
    let mut hand9 = Vec::with_capacity(args9.len());
    for a in &args9 {
        let t1 = Triple::new(a[0], a[1], a[2]);
        let t2 = Triple::new(a[3], a[4], a[5]);
        let t3 = Triple::new(a[6], a[7], a[8]);
        let on = in_domain(host, &t1)? && in_domain(host, &t2)? && in_domain(host, &t3)?;
        if on {
            hand9.push((
                true,
                sim(host, &oplus(host, &t1, &t2)?, &t3)?,
                sim(host, &odot(host, &t1, &t2)?, &t3)?,
            ));
        } else {
            hand9.push((false, false, false));
        }
    }
    for (name, add, positive) in [
        ("oplus", true, true),
        ("not_oplus", true, false),
        ("odot", false, true),
        ("not_odot", false, false),
    ] {
        let f = formula(name);
        let mut bad = 0;
        for (a, &(on, add_pos, mul_pos)) in args9.iter().zip(&hand9) {
            let pos = if add { add_pos } else { mul_pos };
            let hand = if positive { on && pos } else { on && !pos };
            if f.eval(a)? != hand {
                bad += 1;
                push(&mut violations, format!("{name} disagrees at {a:?}"));
            }
        }
        lines.push(OracleLine {
            name: formula_name(name),
            checked: args9.len(),
            disagreements: bad,
        });
    }

    Ok(OracleOutcome { lines, violations })
}

/// Maps a name back to its `'static` copy in `NAMES`, so report lines can
/// hold borrowed strings.
fn formula_name(name: &str) -> &'static str {
    NAMES.iter().find(|m| **m == name).unwrap()
}
