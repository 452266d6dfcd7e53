//! Derivations and the trusted rule checker.

mod check;
mod derivation;
mod format;
mod rule;
mod structural;

pub use check::{check, check_rule, CheckReport, Failure, Stats, Violation, ViolationCode};
pub use derivation::{BuildError, Derivation};
pub use format::{parse_derivation, parse_derivation_with, render_derivation, FormatError};
pub use rule::{Mode, Rule, RuleInstance, RuleTag};
pub use structural::{elaborate_structural, restructure, restructure_sequent, StructuralChain};

use crate::syntax::Sequent;

/// The conclusion of the root inference.
pub fn endsequent(d: &Derivation) -> &Sequent {
    d.conclusion()
}
