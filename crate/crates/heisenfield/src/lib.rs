//! Heisenberg groups over exact fields, and the machinery to walk back:
//! recovering the field from a (possibly relabelled, black-box) copy of the
//! group, transfer maps between recovery parameters, a parameter-free
//! first-order interpretation by triples, a brute-force formula evaluator,
//! a generic parameter-removal engine, and automorphism enumeration.
//!
//! The central objects:
//!
//! * [`fields::Field`] — exact field contexts: GF(p), GF(p^k), and Q.
//! * [`heisenberg::HGroup`] — the group of upper unitriangular 3x3 matrices
//!   `h(a, b, c)` over a field, with the law
//!   `h(a,b,c) * h(a',b',c') = h(a+a', b+b', c+c'+a*b')`.
//! * [`bbox::BlackBoxGroup`] — groups presented only through ids,
//!   multiplication, and inversion; wrappers for concrete groups, finite
//!   multiplication tables, and seeded relabellings.
//! * [`maltsev::RecoveredField`] — the field rebuilt inside a black box from
//!   a non-commuting pair of parameters.
//! * [`transfer`] — canonical maps between the fields recovered at different
//!   parameter pairs, and their functoriality checks.
//! * [`interp`] — the parameter-free interpretation on triples, its
//!   quotient field, and the bi-interpretability map.
//! * [`logic`] — a first-order formula AST restricted to existential
//!   positive shape, a brute-force evaluator over finite structures, the
//!   built-in formula library, and the parameter-removal engine.
//! * [`autos`] — automorphism enumeration and rigidity reports.

pub mod autos;
pub mod bbox;
pub mod error;
pub mod fields;
pub mod heisenberg;
pub mod interp;
pub mod logic;
pub mod maltsev;
pub mod transfer;

pub use error::{Error, Result};
pub use fields::{Field, FieldSpec, GaloisField, PrimeField, Rationals};
pub use heisenberg::{theta, HElem, HGroup};

/// Default cap on finite-field size (`p^k`).
pub const DEFAULT_MAX_FIELD_SIZE: u64 = 64;

/// Default cap on group order for materializations (tables, JSON export).
pub const DEFAULT_MAX_ORDER: usize = 4096;

/// Default budget for searches on countable hosts (elements or pairs
/// examined before giving up with a budget error).
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Default order bound for automorphism enumeration.
pub const DEFAULT_AUTOS_BOUND: usize = 729;

/// The Heisenberg group over a prime field.
pub type PrimeHeisenberg = HGroup<PrimeField>;

/// The Heisenberg group over an extension field.
pub type GaloisHeisenberg = HGroup<GaloisField>;

/// The Heisenberg group over the rationals.
pub type RationalHeisenberg = HGroup<Rationals>;
