use std::fmt::{self, Write};

use super::{Formula, Sequent};

// Context levels: 0 anywhere, 1 right of `->`, 2 operand of `|`, 3 operand of `&`, 4 operand of `~`.
fn write_at(out: &mut impl Write, f: &Formula, level: u8) -> fmt::Result {
    let (own, needs_top) = match f {
        Formula::Forall(..) | Formula::Exists(..) => (0, true),
        Formula::Implies(..) => (1, false),
        Formula::Or(..) => (2, false),
        Formula::And(..) => (3, false),
        _ => (4, false),
    };
    let paren = if needs_top { level > 0 } else { level > own };
    if paren {
        out.write_char('(')?;
    }
    match f {
        Formula::Atom(p, args) => {
            out.write_str(p)?;
            if !args.is_empty() {
                write!(out, "({})", args.join(","))?;
            }
        }
        Formula::Top => out.write_str("top")?,
        Formula::Bot => out.write_str("bot")?,
        Formula::Not(a) => {
            out.write_char('~')?;
            write_at(out, a, 4)?;
        }
        Formula::And(a, b) => {
            write_at(out, a, 3)?;
            out.write_str(" & ")?;
            write_at(out, b, 4)?;
        }
        Formula::Or(a, b) => {
            write_at(out, a, 2)?;
            out.write_str(" | ")?;
            write_at(out, b, 3)?;
        }
        Formula::Implies(a, b) => {
            write_at(out, a, 2)?;
            out.write_str(" -> ")?;
            write_at(out, b, 1)?;
        }
        Formula::Forall(x, a) => {
            write!(out, "forall {x}. ")?;
            write_at(out, a, 0)?;
        }
        Formula::Exists(x, a) => {
            write!(out, "exists {x}. ")?;
            write_at(out, a, 0)?;
        }
    }
    if paren {
        out.write_char(')')?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(f, self, 0)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.antecedent.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        if !self.antecedent.is_empty() {
            f.write_char(' ')?;
        }
        f.write_str("|-")?;
        if let Some(s) = &self.succedent {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

pub fn render_formula(f: &Formula) -> String {
    f.to_string()
}

pub fn render_sequent(s: &Sequent) -> String {
    s.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_sequent};

    #[test]
    fn renders_canonically() {
        assert_eq!(render_formula(&Formula::Top), "top");
        assert_eq!(render_formula(&Formula::prop("R").excluded_middle()), "R | ~R");
        for text in [
            "(exists x. P(x)) | ~(exists x. P(x))",
            "~~A | (forall x. B(x)) -> A | (forall x. B(x))",
            "A -> B -> C",
            "(A -> B) -> C",
            "A | (B | C)",
            "A & (B & C) | D",
            "~(A & B)",
            "forall x. exists y. P(x,y) -> Q",
            "A -> (forall x. P(x))",
        ] {
            assert_eq!(render_formula(&parse_formula(text).unwrap()), text);
        }
    }

    #[test]
    fn renders_sequents() {
        for text in ["A, B |- C", "|- A", "A |-", "|-"] {
            assert_eq!(render_sequent(&parse_sequent(text).unwrap()), text);
        }
    }
}
