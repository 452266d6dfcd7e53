//! Proof kernel, proof transformations and finite Kripke semantics for
//! intuitionistic sequent calculus extended with decidable propositional atoms.
//!
//! Formulas and sequents live in [`syntax`]. Derivations are checked by
//! [`kernel::check`] against one of the [`kernel::Mode`]s, rewritten by the
//! passes in [`transform`], and refuted by finite search in [`kripke`]. The
//! propositional fragment is decided by truth tables in [`prop`].

pub mod corpus;
pub mod kernel;
pub mod kripke;
pub mod prop;
pub mod syntax;
pub mod transform;
