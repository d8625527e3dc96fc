//! S-expression syntax for formulas.
//!
//! Grammar (whitespace-separated, fully parenthesized):
//!
//! ```text
//! FORMULA := (formula NAME (free VAR*) BODY)
//! BODY    := (= TERM TERM) | (!= TERM TERM)
//!          | (rel NAME TERM*) | (not-rel NAME TERM*)
//!          | (and BODY+) | (or BODY+)
//!          | (exists VAR BODY)
//! TERM    := e | VAR | (const NAME) | (* TERM TERM) | (inv TERM)
//! ```
//!
//! `e` denotes the group identity and cannot be used as a name; the
//! keywords are reserved too. [`to_sexpr`] prints the canonical single-line
//! form, and `parse(to_sexpr(f)) == f` for every well-formed formula.

use crate::error::{Error, Result};
use crate::logic::{Formula, NamedFormula, Term};

#[derive(Debug, Clone, PartialEq)]
enum SExpr {
    Atom(String),
    List(Vec<SExpr>),
}

const RESERVED: &[&str] = &[
    "formula", "free", "and", "or", "exists", "rel", "not-rel", "const", "inv", "*", "=", "!=",
    "e",
];

fn tokenize(src: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut atom = String::new();
    for ch in src.chars() {
        match ch {
            '(' | ')' => {
                if !atom.is_empty() {
                    tokens.push(std::mem::take(&mut atom));
                }
                tokens.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !atom.is_empty() {
                    tokens.push(std::mem::take(&mut atom));
                }
            }
            c => atom.push(c),
        }
    }
    if !atom.is_empty() {
        tokens.push(atom);
    }
    tokens
}

fn parse_expr(tokens: &[String], pos: &mut usize) -> Result<SExpr> {
    let Some(tok) = tokens.get(*pos) else {
        return Err(Error::Parse("unexpected end of input".into()));
    };
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => return Err(Error::Parse("unclosed parenthesis".into())),
                    Some(t) if t == ")" => {
                        *pos += 1;
                        return Ok(SExpr::List(items));
                    }
                    Some(_) => items.push(parse_expr(tokens, pos)?),
                }
            }
        }
        ")" => Err(Error::Parse("unexpected `)`".into())),
        atom => Ok(SExpr::Atom(atom.to_string())),
    }
}

fn atom_of(e: &SExpr, what: &str) -> Result<String> {
    match e {
        SExpr::Atom(s) => Ok(s.clone()),
        SExpr::List(_) => Err(Error::Parse(format!("expected {what}, found a list"))),
    }
}

fn name_of(e: &SExpr, what: &str) -> Result<String> {
    let s = atom_of(e, what)?;
    if RESERVED.contains(&s.as_str()) {
        return Err(Error::Parse(format!("`{s}` is reserved and cannot be {what}")));
    }
    Ok(s)
}

fn shape_term(e: &SExpr) -> Result<Term> {
    match e {
        SExpr::Atom(s) if s == "e" => Ok(Term::One),
        SExpr::Atom(_) => Ok(Term::Var(name_of(e, "a variable")?)),
        SExpr::List(items) => {
            let head = atom_of(
                items.first().ok_or_else(|| Error::Parse("empty term".into()))?,
                "a term head",
            )?;
            match head.as_str() {
                "const" => {
                    if items.len() != 2 {
                        return Err(Error::Parse("`const` takes exactly one name".into()));
                    }
                    Ok(Term::Const(name_of(&items[1], "a constant name")?))
                }
                "*" => {
                    if items.len() != 3 {
                        return Err(Error::Parse("`*` takes exactly two terms".into()));
                    }
                    Ok(Term::Mul(
                        Box::new(shape_term(&items[1])?),
                        Box::new(shape_term(&items[2])?),
                    ))
                }
                "inv" => {
                    if items.len() != 2 {
                        return Err(Error::Parse("`inv` takes exactly one term".into()));
                    }
                    Ok(Term::Inv(Box::new(shape_term(&items[1])?)))
                }
                other => Err(Error::Parse(format!("unknown term head `{other}`"))),
            }
        }
    }
}

fn shape_body(e: &SExpr) -> Result<Formula> {
    let SExpr::List(items) = e else {
        return Err(Error::Parse("a formula body must be a list".into()));
    };
    let head = atom_of(
        items.first().ok_or_else(|| Error::Parse("empty formula body".into()))?,
        "a formula head",
    )?;
    let rest = &items[1..];
    match head.as_str() {
        "=" | "!=" => {
            if rest.len() != 2 {
                return Err(Error::Parse(format!("`{head}` takes exactly two terms")));
            }
            let (a, b) = (shape_term(&rest[0])?, shape_term(&rest[1])?);
            Ok(if head == "=" {
                Formula::Eq(a, b)
            } else {
                Formula::Ne(a, b)
            })
        }
        "rel" | "not-rel" => {
            if rest.is_empty() {
                return Err(Error::Parse(format!("`{head}` needs a relation name")));
            }
            let name = name_of(&rest[0], "a relation name")?;
            let args = rest[1..].iter().map(shape_term).collect::<Result<Vec<_>>>()?;
            Ok(if head == "rel" {
                Formula::Rel(name, args)
            } else {
                Formula::NotRel(name, args)
            })
        }
        "and" | "or" => {
            if rest.is_empty() {
                return Err(Error::Parse(format!("`{head}` needs at least one operand")));
            }
            let parts = rest.iter().map(shape_body).collect::<Result<Vec<_>>>()?;
            Ok(if head == "and" {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            })
        }
        "exists" => {
            if rest.len() != 2 {
                return Err(Error::Parse("`exists` takes a variable and a body".into()));
            }
            Ok(Formula::Exists(
                name_of(&rest[0], "a variable")?,
                Box::new(shape_body(&rest[1])?),
            ))
        }
        other => Err(Error::Parse(format!("unknown formula head `{other}`"))),
    }
}

/// Parse one `(formula ...)` s-expression.
pub fn parse_formula(src: &str) -> Result<NamedFormula> {
    let tokens = tokenize(src);
    let mut pos = 0;
    let expr = parse_expr(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(Error::Parse(format!(
            "trailing input after the formula: `{}`",
            tokens[pos]
        )));
    }
    let SExpr::List(items) = &expr else {
        return Err(Error::Parse("expected `(formula ...)`".into()));
    };
    if items.len() != 4 || atom_of(&items[0], "a head")? != "formula" {
        return Err(Error::Parse(
            "expected `(formula NAME (free VAR*) BODY)`".into(),
        ));
    }
    let name = name_of(&items[1], "a formula name")?;
    let SExpr::List(free_items) = &items[2] else {
        return Err(Error::Parse("expected `(free VAR*)`".into()));
    };
    match free_items.first() {
        Some(SExpr::Atom(s)) if s == "free" => {}
        _ => return Err(Error::Parse("expected `(free VAR*)`".into())),
    }
    let free = free_items[1..]
        .iter()
        .map(|e| name_of(e, "a variable"))
        .collect::<Result<Vec<_>>>()?;
    let body = shape_body(&items[3])?;
    Ok(NamedFormula { name, free, body })
}

fn term_to_string(t: &Term, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(v),
        Term::Const(c) => {
            out.push_str("(const ");
            out.push_str(c);
            out.push(')');
        }
        Term::One => out.push('e'),
        Term::Mul(a, b) => {
            out.push_str("(* ");
            term_to_string(a, out);
            out.push(' ');
            term_to_string(b, out);
            out.push(')');
        }
        Term::Inv(a) => {
            out.push_str("(inv ");
            term_to_string(a, out);
            out.push(')');
        }
    }
}

fn body_to_string(f: &Formula, out: &mut String) {
    let binary = |head: &str, a: &Term, b: &Term, out: &mut String| {
        out.push('(');
        out.push_str(head);
        out.push(' ');
        term_to_string(a, out);
        out.push(' ');
        term_to_string(b, out);
        out.push(')');
    };
    match f {
        Formula::Eq(a, b) => binary("=", a, b, out),
        Formula::Ne(a, b) => binary("!=", a, b, out),
        Formula::Rel(name, args) | Formula::NotRel(name, args) => {
            out.push('(');
            out.push_str(if matches!(f, Formula::Rel(..)) {
                "rel "
            } else {
                "not-rel "
            });
            out.push_str(name);
            for a in args {
                out.push(' ');
                term_to_string(a, out);
            }
            out.push(')');
        }
        Formula::And(list) | Formula::Or(list) => {
            out.push('(');
            out.push_str(if matches!(f, Formula::And(..)) {
                "and"
            } else {
                "or"
            });
            for g in list {
                out.push(' ');
                body_to_string(g, out);
            }
            out.push(')');
        }
        Formula::Exists(v, inner) => {
            out.push_str("(exists ");
            out.push_str(v);
            out.push(' ');
            body_to_string(inner, out);
            out.push(')');
        }
    }
}

/// Canonical single-line s-expression form.
pub fn to_sexpr(nf: &NamedFormula) -> String {
    let mut out = String::new();
    out.push_str("(formula ");
    out.push_str(&nf.name);
    out.push_str(" (free");
    for v in &nf.free {
        out.push(' ');
        out.push_str(v);
    }
    out.push_str(") ");
    body_to_string(&nf.body, &mut out);
    out.push(')');
    out
}
