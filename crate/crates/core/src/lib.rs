//! Polymorphic dependently-typed higher-order logic (PDHOL).
//!
//! The pipeline: [`surface`] parses problems into the shared abstract syntax
//! ([`ast`]), [`checker`] validates them and collects the proof obligations
//! that cannot be decided structurally, [`erasure`] translates everything to
//! polymorphic HOL by dropping term arguments of types and synthesizing
//! partial equivalence relations, [`tptp`] serializes the result as TPTP TH1
//! problems, and [`driver`] dispatches those to an external prover and
//! aggregates SZS results.

pub mod alpha;
pub mod ast;
pub mod checker;
pub mod driver;
pub mod erasure;
pub mod name;
pub mod normalize;
pub mod subst;
pub mod sugar;
pub mod surface;
pub mod tptp;

#[doc(hidden)]
pub mod testgen;

pub use ast::{
    Context, ContextEntry, Declaration, Kind, Problem, SubstEntry, Substitution, TermExpr, Theory,
    TypeExpr,
};
pub use name::{Name, Namespace};
