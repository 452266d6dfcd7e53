//! Formulas, sequents, concrete syntax and syntactic analyses.

mod analysis;
mod formula;
mod parse;
mod render;

pub use analysis::{
    classify, is_strictly_positive, is_unipolar, occurrence_polarities, replace_at, subformula_at,
    subformulas, subst_prop, FormulaClass, OccurrencePath, Polarity,
};
pub use formula::{
    formulas_alpha_eq, fresh_var, generalizes, succedents_alpha_eq, Formula, Sequent, Signature,
    Symbol,
};
pub use parse::{
    parse_formula, parse_formula_with, parse_sequent, parse_sequent_with, Position,
};
pub use render::{render_formula, render_sequent};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("{pos}: {message}")]
    Parse { pos: Position, message: String },
    #[error("symbol {symbol} used with arity {found}, previously {expected}")]
    ArityConflict {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("invalid occurrence path {0}")]
    InvalidPath(OccurrencePath),
    #[error("symbol {0} is not propositional")]
    NotPropositional(String),
}
