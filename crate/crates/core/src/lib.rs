//! Quantitative combinatory logic workbench.
//!
//! Terms over a finite combinator basis are plane binary trees with
//! primitive-labelled leaves; the size of a term is its number of
//! application nodes. On top of that representation the crate provides
//!
//! * normal-order reduction with exact reduction-length accounting
//!   ([`reduce`]),
//! * exhaustive enumeration and brute-force census by reduction length,
//!   normal-form status, subterm containment and typeability
//!   ([`enumerate`]),
//! * uniform random generation via Rémy's algorithm with a deterministic
//!   seeding contract ([`sample`]),
//! * exact generating-function coefficient extraction and square-root
//!   singularity asymptotics ([`series`]),
//! * Monte Carlo normalisation experiments with reproducible sharded
//!   execution ([`experiment`]).
//!
//! Exhaustive census results double as oracles for the analytic layer: the
//! coefficient streams of [`series`] are cross-checked against brute force
//! at small sizes, then extended far beyond enumerable range.

pub mod basis;
pub mod enumerate;
pub mod experiment;
pub mod reduce;
pub mod sample;
pub mod series;
pub mod term;
pub mod types;

pub use basis::{Basis, BasisError, PrimId, PrimitiveCombinator, Template};
pub use reduce::{normalize, reduction_length, ReductionOutcome};
pub use term::{ParseError, Term, TermNode};
