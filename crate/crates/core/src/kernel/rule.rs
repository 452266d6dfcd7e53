use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::syntax::{Formula, Sequent};

/// Names of the inference rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleTag {
    Axiom,
    TopAxiom,
    BotAxiom,
    LemAxiom,
    ThinAnt,
    ThinSuc,
    Contract,
    Exchange,
    Cut,
    Mix,
    AndSuc,
    AndAntL,
    AndAntR,
    OrAnt,
    OrSucL,
    OrSucR,
    NotSuc,
    NotAnt,
    ImpSuc,
    ImpAnt,
    ForallSuc,
    ForallAnt,
    ExistsSuc,
    ExistsAnt,
    Neutralization,
}

impl RuleTag {
    pub const ALL: [RuleTag; 25] = [
        RuleTag::Axiom,
        RuleTag::TopAxiom,
        RuleTag::BotAxiom,
        RuleTag::LemAxiom,
        RuleTag::ThinAnt,
        RuleTag::ThinSuc,
        RuleTag::Contract,
        RuleTag::Exchange,
        RuleTag::Cut,
        RuleTag::Mix,
        RuleTag::AndSuc,
        RuleTag::AndAntL,
        RuleTag::AndAntR,
        RuleTag::OrAnt,
        RuleTag::OrSucL,
        RuleTag::OrSucR,
        RuleTag::NotSuc,
        RuleTag::NotAnt,
        RuleTag::ImpSuc,
        RuleTag::ImpAnt,
        RuleTag::ForallSuc,
        RuleTag::ForallAnt,
        RuleTag::ExistsSuc,
        RuleTag::ExistsAnt,
        RuleTag::Neutralization,
    ];

    /// Number of premises.
    pub fn arity(self) -> usize {
        match self {
            RuleTag::Axiom | RuleTag::TopAxiom | RuleTag::BotAxiom | RuleTag::LemAxiom => 0,
            RuleTag::Cut
            | RuleTag::Mix
            | RuleTag::OrAnt
            | RuleTag::AndSuc
            | RuleTag::ImpAnt
            | RuleTag::Neutralization => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RuleTag::Axiom => "Axiom",
            RuleTag::TopAxiom => "TopAxiom",
            RuleTag::BotAxiom => "BotAxiom",
            RuleTag::LemAxiom => "LemAxiom",
            RuleTag::ThinAnt => "ThinAnt",
            RuleTag::ThinSuc => "ThinSuc",
            RuleTag::Contract => "Contract",
            RuleTag::Exchange => "Exchange",
            RuleTag::Cut => "Cut",
            RuleTag::Mix => "Mix",
            RuleTag::AndSuc => "AndSuc",
            RuleTag::AndAntL => "AndAntL",
            RuleTag::AndAntR => "AndAntR",
            RuleTag::OrAnt => "OrAnt",
            RuleTag::OrSucL => "OrSucL",
            RuleTag::OrSucR => "OrSucR",
            RuleTag::NotSuc => "NotSuc",
            RuleTag::NotAnt => "NotAnt",
            RuleTag::ImpSuc => "ImpSuc",
            RuleTag::ImpAnt => "ImpAnt",
            RuleTag::ForallSuc => "ForallSuc",
            RuleTag::ForallAnt => "ForallAnt",
            RuleTag::ExistsSuc => "ExistsSuc",
            RuleTag::ExistsAnt => "ExistsAnt",
            RuleTag::Neutralization => "Neutralization",
        }
    }

    /// Rules whose principal formula sits in the antecedent.
    pub fn is_antecedent_rule(self) -> bool {
        matches!(
            self,
            RuleTag::ThinAnt
                | RuleTag::Contract
                | RuleTag::AndAntL
                | RuleTag::AndAntR
                | RuleTag::OrAnt
                | RuleTag::NotAnt
                | RuleTag::ImpAnt
                | RuleTag::ForallAnt
                | RuleTag::ExistsAnt
        )
    }

    /// Rules whose principal formula is the succedent.
    pub fn is_succedent_rule(self) -> bool {
        matches!(
            self,
            RuleTag::ThinSuc
                | RuleTag::AndSuc
                | RuleTag::OrSucL
                | RuleTag::OrSucR
                | RuleTag::NotSuc
                | RuleTag::ImpSuc
                | RuleTag::ForallSuc
                | RuleTag::ExistsSuc
        )
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleTag::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// A rule together with its attributes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Axiom,
    TopAxiom,
    BotAxiom,
    LemAxiom { a: Formula },
    ThinAnt,
    ThinSuc,
    Contract,
    /// Swaps the antecedent formulas at `pos` and `pos + 1`.
    Exchange { pos: usize },
    Cut { formula: Formula },
    Mix { formula: Formula },
    AndSuc,
    AndAntL,
    AndAntR,
    OrAnt,
    OrSucL,
    OrSucR,
    NotSuc,
    NotAnt,
    ImpSuc,
    /// `split` is the length of the first premise's antecedent.
    ImpAnt { split: usize },
    ForallSuc { eigen: String, bound: String },
    ForallAnt { witness: String, bound: String },
    ExistsSuc { witness: String, bound: String },
    ExistsAnt { eigen: String, bound: String },
    Neutralization { n: Formula },
}

impl Rule {
    pub fn tag(&self) -> RuleTag {
        match self {
            Rule::Axiom => RuleTag::Axiom,
            Rule::TopAxiom => RuleTag::TopAxiom,
            Rule::BotAxiom => RuleTag::BotAxiom,
            Rule::LemAxiom { .. } => RuleTag::LemAxiom,
            Rule::ThinAnt => RuleTag::ThinAnt,
            Rule::ThinSuc => RuleTag::ThinSuc,
            Rule::Contract => RuleTag::Contract,
            Rule::Exchange { .. } => RuleTag::Exchange,
            Rule::Cut { .. } => RuleTag::Cut,
            Rule::Mix { .. } => RuleTag::Mix,
            Rule::AndSuc => RuleTag::AndSuc,
            Rule::AndAntL => RuleTag::AndAntL,
            Rule::AndAntR => RuleTag::AndAntR,
            Rule::OrAnt => RuleTag::OrAnt,
            Rule::OrSucL => RuleTag::OrSucL,
            Rule::OrSucR => RuleTag::OrSucR,
            Rule::NotSuc => RuleTag::NotSuc,
            Rule::NotAnt => RuleTag::NotAnt,
            Rule::ImpSuc => RuleTag::ImpSuc,
            Rule::ImpAnt { .. } => RuleTag::ImpAnt,
            Rule::ForallSuc { .. } => RuleTag::ForallSuc,
            Rule::ForallAnt { .. } => RuleTag::ForallAnt,
            Rule::ExistsSuc { .. } => RuleTag::ExistsSuc,
            Rule::ExistsAnt { .. } => RuleTag::ExistsAnt,
            Rule::Neutralization { .. } => RuleTag::Neutralization,
        }
    }

    /// Applies `f` to every formula-valued attribute.
    pub fn map_formulas(&self, f: &impl Fn(&Formula) -> Formula) -> Rule {
        match self {
            Rule::LemAxiom { a } => Rule::LemAxiom { a: f(a) },
            Rule::Cut { formula } => Rule::Cut { formula: f(formula) },
            Rule::Mix { formula } => Rule::Mix { formula: f(formula) },
            Rule::Neutralization { n } => Rule::Neutralization { n: f(n) },
            other => other.clone(),
        }
    }
}

/// Which rule set a derivation is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Plain intuitionistic sequent calculus.
    Lj,
    /// With the neutralization rule for propositional formulas.
    LjPlus,
    /// With excluded-middle axioms for propositional symbols.
    LjAtomicLem,
    /// With excluded-middle axioms for arbitrary formulas (classical).
    LkLem,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Lj, Mode::LjPlus, Mode::LjAtomicLem, Mode::LkLem];

    /// Flag spelling used on the command line and in corpus manifests.
    pub fn flag(self) -> &'static str {
        match self {
            Mode::Lj => "lj",
            Mode::LjPlus => "lj+",
            Mode::LjAtomicLem => "lj-atomic-lem",
            Mode::LkLem => "lk-lem",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Lj => "LJ",
            Mode::LjPlus => "LJ+",
            Mode::LjAtomicLem => "LJ with atomic LEM",
            Mode::LkLem => "LK (LJ with LEM)",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "lj" => Ok(Mode::Lj),
            "lj+" | "lj-plus" | "ljplus" => Ok(Mode::LjPlus),
            "lj-atomic-lem" => Ok(Mode::LjAtomicLem),
            "lk-lem" | "lk" => Ok(Mode::LkLem),
            _ => Err(format!(
                "unknown mode `{s}` (expected lj, lj+, lj-atomic-lem or lk-lem)"
            )),
        }
    }
}

/// One inference: rule, attributes and the sequent it concludes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInstance {
    pub rule: Rule,
    pub conclusion: Sequent,
}

impl RuleInstance {
    pub fn new(rule: Rule, conclusion: Sequent) -> Self {
        Self { rule, conclusion }
    }

    pub fn tag(&self) -> RuleTag {
        self.rule.tag()
    }
}
