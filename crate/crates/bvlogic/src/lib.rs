//! A workbench for Boolean-valued first-order logic at desk scale.
//!
//! The crate provides, end to end and over *finite* carriers:
//!
//! - [`syntax`]: a deep embedding of first-order logic with de Bruijn
//!   variables, arity-indexed terms/formulas, lift/substitution, and the
//!   classical connectives derived from `falsum`, `->` and `forall`.
//! - [`proof`]: a natural-deduction proof checker over annotated proof
//!   trees, plus a small bounded proof search.
//! - [`boolalg`]: finite complete Boolean algebras — powerset algebras,
//!   regular-open algebras of finite topological spaces, antichains, dense
//!   suborders, and lattice tautology checking.
//! - [`semantics`]: Boolean-valued structures, realization of formulas as
//!   algebra elements, the forcing relation, and a soundness validator.
//! - [`sets`]: hereditary finite sets and Boolean-valued sets with graded
//!   equality/membership, powersets, comprehension, and mixtures.
//! - [`combinatorics`]: Cohen forcing conditions embedded into powerset
//!   algebras, plus sunflower (Δ-system) extraction.
//! - [`corpus`]: a named-variable surface syntax with elaboration to de
//!   Bruijn form, and the ZFC axiom corpus together with the continuum
//!   hypothesis sentence.
//! - [`harness`]: deterministic, seedable generators used by the fuzzing
//!   subcommand and the test suites.
//!
//! Run `cargo run --example <name>` for a guided tour of each capability;
//! the `bvlogic` binary exposes the same operations as subcommands over
//! line-oriented file formats.

pub mod boolalg;
pub mod combinatorics;
pub mod corpus;
pub mod enumerate;
pub mod harness;
pub mod proof;
pub mod semantics;
pub mod sets;
pub mod sexpr;
pub mod syntax;
