//! S-expression files for derivations.
//!
//! ```text
//! (ImpSuc :concl "|- A -> A"
//!   (Axiom :concl "A |- A"))
//! ```

use std::fmt::Write;

use thiserror::Error;

use super::{Derivation, Rule, RuleInstance, RuleTag};
use crate::syntax::{parse_formula_with, parse_sequent_with, Formula, Position, Signature, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct FormatError {
    pub pos: Position,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Word(String),
    Key(String),
    Str(String),
}

fn lex(text: &str) -> Result<Vec<(Tok, Position)>, FormatError> {
    let mut out = Vec::new();
    let mut pos = Position::START;
    let mut it = text.chars().peekable();
    let step = |pos: &mut Position, c: char| {
        if c == '\n' {
            pos.line += 1;
            pos.column = 1;
        } else {
            pos.column += 1;
        }
    };
    while let Some(&c) = it.peek() {
        let start = pos;
        match c {
            ';' => {
                while let Some(&d) = it.peek() {
                    if d == '\n' {
                        break;
                    }
                    it.next();
                    step(&mut pos, d);
                }
            }
            c if c.is_whitespace() => {
                it.next();
                step(&mut pos, c);
            }
            '(' | ')' => {
                it.next();
                step(&mut pos, c);
                out.push((if c == '(' { Tok::Open } else { Tok::Close }, start));
            }
            '"' => {
                it.next();
                step(&mut pos, c);
                let mut s = String::new();
                loop {
                    let Some(d) = it.next() else {
                        return Err(FormatError {
                            pos: start,
                            message: "unterminated string".into(),
                        });
                    };
                    step(&mut pos, d);
                    match d {
                        '"' => break,
                        '\\' => {
                            let Some(e) = it.next() else { continue };
                            step(&mut pos, e);
                            s.push(e);
                        }
                        _ => s.push(d),
                    }
                }
                out.push((Tok::Str(s), start));
            }
            _ => {
                let mut w = String::new();
                while let Some(&d) = it.peek() {
                    if d.is_whitespace() || matches!(d, '(' | ')' | '"' | ';') {
                        break;
                    }
                    w.push(d);
                    it.next();
                    step(&mut pos, d);
                }
                let tok = match w.strip_prefix(':') {
                    Some(k) => Tok::Key(k.to_string()),
                    None => Tok::Word(w),
                };
                out.push((tok, start));
            }
        }
    }
    Ok(out)
}

struct Reader<'a> {
    toks: Vec<(Tok, Position)>,
    at: usize,
    end: Position,
    sig: &'a mut Signature,
}

impl Reader<'_> {
    fn pos(&self) -> Position {
        self.toks.get(self.at).map_or(self.end, |t| t.1)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, FormatError> {
        Err(FormatError {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn next(&mut self) -> Option<(Tok, Position)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn string(&mut self, what: &str) -> Result<(String, Position), FormatError> {
        match self.next() {
            Some((Tok::Str(s), p)) => Ok((s, p)),
            _ => {
                self.at -= 1;
                self.err(format!("expected a quoted {what}"))
            }
        }
    }

    fn lift(pos: Position, e: SyntaxError) -> FormatError {
        match e {
            // +1 skips the opening quote
            SyntaxError::Parse { pos: inner, message } => FormatError {
                pos: Position {
                    line: pos.line,
                    column: pos.column + 1,
                }
                .offset(inner),
                message,
            },
            other => FormatError {
                pos,
                message: other.to_string(),
            },
        }
    }

    fn formula(&mut self) -> Result<Formula, FormatError> {
        let (s, p) = self.string("formula")?;
        parse_formula_with(&s, self.sig).map_err(|e| Self::lift(p, e))
    }

    fn var(&mut self) -> Result<String, FormatError> {
        match self.next() {
            Some((Tok::Word(w), _))
                if w.starts_with(|c: char| c.is_ascii_lowercase())
                    && w.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
                    && !matches!(w.as_str(), "forall" | "exists" | "top" | "bot") =>
            {
                Ok(w)
            }
            _ => {
                self.at -= 1;
                self.err("expected a variable")
            }
        }
    }

    fn int(&mut self) -> Result<usize, FormatError> {
        match self.next() {
            Some((Tok::Word(w), _)) if w.parse::<usize>().is_ok() => Ok(w.parse().unwrap()),
            _ => {
                self.at -= 1;
                self.err("expected a non-negative integer")
            }
        }
    }

    fn node(&mut self) -> Result<Derivation, FormatError> {
        match self.next() {
            Some((Tok::Open, _)) => {}
            _ => {
                self.at = self.at.saturating_sub(1);
                return self.err("expected `(`");
            }
        }
        let tag_pos = self.pos();
        let tag: RuleTag = match self.next() {
            Some((Tok::Word(w), _)) => w.parse().map_err(|m| FormatError { pos: tag_pos, message: m })?,
            _ => return Err(FormatError { pos: tag_pos, message: "expected a rule name".into() }),
        };
        match self.next() {
            Some((Tok::Key(k), _)) if k == "concl" => {}
            _ => {
                self.at -= 1;
                return self.err("expected `:concl`");
            }
        }
        let (text, p) = self.string("sequent")?;
        let conclusion = parse_sequent_with(&text, self.sig).map_err(|e| Self::lift(p, e))?;

        let mut attrs: Vec<(String, Position)> = Vec::new();
        let mut pos_attr = None;
        let mut eigen = None;
        let mut witness = None;
        let mut bound = None;
        let mut formula = None;
        let mut split = None;
        let mut n = None;
        let mut a = None;
        while let Some(Tok::Key(k)) = self.peek().cloned() {
            let kp = self.pos();
            self.next();
            if attrs.iter().any(|(seen, _)| *seen == k) {
                return Err(FormatError { pos: kp, message: format!("duplicate attribute `:{k}`") });
            }
            match k.as_str() {
                "pos" => pos_attr = Some(self.int()?),
                "split" => split = Some(self.int()?),
                "eigen" => eigen = Some(self.var()?),
                "witness" => witness = Some(self.var()?),
                "bound" => bound = Some(self.var()?),
                "formula" => formula = Some(self.formula()?),
                "n" => n = Some(self.formula()?),
                "a" => a = Some(self.formula()?),
                _ => return Err(FormatError { pos: kp, message: format!("unknown attribute `:{k}`") }),
            }
            attrs.push((k, kp));
        }
        let expected: &[&str] = match tag {
            RuleTag::Exchange => &["pos"],
            RuleTag::ForallSuc | RuleTag::ExistsAnt => &["eigen", "bound"],
            RuleTag::ForallAnt | RuleTag::ExistsSuc => &["witness", "bound"],
            RuleTag::Cut | RuleTag::Mix => &["formula"],
            RuleTag::ImpAnt => &["split"],
            RuleTag::Neutralization => &["n"],
            RuleTag::LemAxiom => &["a"],
            _ => &[],
        };
        for (k, kp) in &attrs {
            if !expected.contains(&k.as_str()) {
                return Err(FormatError { pos: *kp, message: format!("{tag} does not take `:{k}`") });
            }
        }
        for k in expected {
            if !attrs.iter().any(|(seen, _)| seen == k) {
                return Err(FormatError { pos: tag_pos, message: format!("{tag} requires `:{k}`") });
            }
        }
        let rule = match tag {
            RuleTag::Axiom => Rule::Axiom,
            RuleTag::TopAxiom => Rule::TopAxiom,
            RuleTag::BotAxiom => Rule::BotAxiom,
            RuleTag::LemAxiom => Rule::LemAxiom { a: a.unwrap() },
            RuleTag::ThinAnt => Rule::ThinAnt,
            RuleTag::ThinSuc => Rule::ThinSuc,
            RuleTag::Contract => Rule::Contract,
            RuleTag::Exchange => Rule::Exchange { pos: pos_attr.unwrap() },
            RuleTag::Cut => Rule::Cut { formula: formula.unwrap() },
            RuleTag::Mix => Rule::Mix { formula: formula.unwrap() },
            RuleTag::AndSuc => Rule::AndSuc,
            RuleTag::AndAntL => Rule::AndAntL,
            RuleTag::AndAntR => Rule::AndAntR,
            RuleTag::OrAnt => Rule::OrAnt,
            RuleTag::OrSucL => Rule::OrSucL,
            RuleTag::OrSucR => Rule::OrSucR,
            RuleTag::NotSuc => Rule::NotSuc,
            RuleTag::NotAnt => Rule::NotAnt,
            RuleTag::ImpSuc => Rule::ImpSuc,
            RuleTag::ImpAnt => Rule::ImpAnt { split: split.unwrap() },
            RuleTag::ForallSuc => Rule::ForallSuc { eigen: eigen.unwrap(), bound: bound.unwrap() },
            RuleTag::ForallAnt => Rule::ForallAnt { witness: witness.unwrap(), bound: bound.unwrap() },
            RuleTag::ExistsSuc => Rule::ExistsSuc { witness: witness.unwrap(), bound: bound.unwrap() },
            RuleTag::ExistsAnt => Rule::ExistsAnt { eigen: eigen.unwrap(), bound: bound.unwrap() },
            RuleTag::Neutralization => Rule::Neutralization { n: n.unwrap() },
        };
        let mut premises = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Close) => {
                    self.next();
                    break;
                }
                Some(Tok::Open) => premises.push(self.node()?),
                Some(_) => return self.err("expected a premise or `)`"),
                None => return self.err(format!("unclosed {tag} node")),
            }
        }
        Ok(Derivation {
            root: RuleInstance::new(rule, conclusion),
            premises,
        })
    }
}

/// Parses a derivation file. Symbol arities are shared across the file.
pub fn parse_derivation(text: &str) -> Result<Derivation, FormatError> {
    parse_derivation_with(text, &mut Signature::new())
}

pub fn parse_derivation_with(text: &str, sig: &mut Signature) -> Result<Derivation, FormatError> {
    let toks = lex(text)?;
    let end = text.lines().enumerate().last().map_or(Position::START, |(i, l)| Position {
        line: i + 1,
        column: l.chars().count() + 1,
    });
    let mut r = Reader { toks, at: 0, end, sig };
    if r.peek().is_none() {
        return r.err("empty derivation file");
    }
    let d = r.node()?;
    if r.peek().is_some() {
        return r.err("trailing input after derivation");
    }
    Ok(d)
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Canonical text form, two-space indentation per level, trailing newline.
pub fn render_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    write_node(&mut out, d, 0);
    out.push('\n');
    out
}

fn write_node(out: &mut String, d: &Derivation, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
    let _ = write!(out, "({} :concl {}", d.tag(), quote(&d.conclusion().to_string()));
    let _ = match d.rule() {
        Rule::Exchange { pos } => write!(out, " :pos {pos}"),
        Rule::ForallSuc { eigen, bound } | Rule::ExistsAnt { eigen, bound } => {
            write!(out, " :eigen {eigen} :bound {bound}")
        }
        Rule::ForallAnt { witness, bound } | Rule::ExistsSuc { witness, bound } => {
            write!(out, " :witness {witness} :bound {bound}")
        }
        Rule::Cut { formula } | Rule::Mix { formula } => {
            write!(out, " :formula {}", quote(&formula.to_string()))
        }
        Rule::ImpAnt { split } => write!(out, " :split {split}"),
        Rule::Neutralization { n } => write!(out, " :n {}", quote(&n.to_string())),
        Rule::LemAxiom { a } => write!(out, " :a {}", quote(&a.to_string())),
        _ => Ok(()),
    };
    for p in &d.premises {
        out.push('\n');
        write_node(out, p, depth + 1);
    }
    out.push(')');
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check, Mode};

    const EX: &str = r#"
; double negation of an atom
(ImpSuc :concl "|- A -> ~~A"
  (NotSuc :concl "A |- ~~A"
    (Exchange :concl "~A, A |-" :pos 0
      (NotAnt :concl "A, ~A |-"
        (Exchange :concl "~A |- A" :pos 0 ; not an exchange at all
          (Axiom :concl "A |- A"))))))
"#;

    #[test]
    fn parses_and_reports_shape_errors_through_check() {
        let d = parse_derivation(EX).unwrap();
        assert_eq!(d.height(), 6);
        let r = check(&d, Mode::Lj);
        assert!(!r.is_ok());
        assert_eq!(r.failure().unwrap().path, vec![0, 0, 0]);
    }

    #[test]
    fn round_trip() {
        let text = r#"(ImpSuc :concl "|- A -> ~~A"
  (NotSuc :concl "A |- ~~A"
    (Exchange :concl "~A, A |-" :pos 0
      (NotAnt :concl "~A, A |-"
        (Axiom :concl "A |- A")))))
"#;
        let d = parse_derivation(text).unwrap();
        assert_eq!(render_derivation(&d), text);
    }

    #[test]
    fn attribute_errors() {
        assert!(parse_derivation(r#"(Exchange :concl "A, B |-")"#)
            .unwrap_err()
            .message
            .contains("requires `:pos`"));
        assert!(parse_derivation(r#"(Axiom :concl "A |- A" :pos 1)"#).is_err());
        assert!(parse_derivation(r#"(Bogus :concl "A |- A")"#)
            .unwrap_err()
            .message
            .contains("unknown rule"));
        assert!(parse_derivation(r#"(Axiom :concl "A |- A""#).is_err());
        assert!(parse_derivation("").is_err());
        assert!(parse_derivation(r#"(ForallSuc :concl "|- forall x. P(x)" :eigen A :bound x)"#).is_err());
    }

    #[test]
    fn formula_errors_point_into_the_file() {
        let e = parse_derivation("(Axiom\n  :concl \"A |- A &\")").unwrap_err();
        assert_eq!(e.pos, Position { line: 2, column: 19 });
    }

    #[test]
    fn arities_are_shared_across_the_file() {
        let t = r#"(ThinAnt :concl "P(x), P |- P"
  (Axiom :concl "P |- P"))"#;
        assert!(parse_derivation(t).is_err());
    }
}
