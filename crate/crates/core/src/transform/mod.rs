//! Derivation-to-derivation transformations.

mod cutelim;
mod equiv;
mod extract;
mod lem;
mod merge;
mod subformula;
mod vars;

pub use cutelim::{cut_to_mix, eliminate_cuts, eliminate_cuts_traced, MixMeasure, MixStep};
pub use equiv::{derive_impl_disj_equiv, Direction};
pub use extract::extract_disjuncts;
pub use lem::{derive_lem, lem_to_neutralization, neutralization_to_lem};
pub use merge::{merge_by_substitution, specialize};
pub use subformula::predicate_subformula_report;

pub(crate) use lem::{evaluate, Evaluated};

use thiserror::Error;

use crate::kernel::{BuildError, Failure, RuleTag};
use crate::syntax::{Formula, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("{0}")]
    Build(#[from] BuildError),
    #[error("LemAxiom on non-atomic formula {0}")]
    NonAtomicLem(Formula),
    #[error("formula {0} is not propositional")]
    NotPropositional(Formula),
    #[error("expected endsequent {expected}, found {found}")]
    EndsequentMismatch { expected: Sequent, found: Sequent },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0} is not supported by this transformation")]
    Unsupported(RuleTag),
    #[error("mix measure did not decrease: {parent} -> {child}")]
    MeasureNotDecreasing { parent: MixMeasure, child: MixMeasure },
    #[error("output failed to check: {0}")]
    OutputRejected(Failure),
}

impl From<crate::syntax::SyntaxError> for TransformError {
    fn from(e: crate::syntax::SyntaxError) -> Self {
        TransformError::Precondition(e.to_string())
    }
}
