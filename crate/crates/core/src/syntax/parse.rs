use std::fmt;

use serde::Serialize;

use super::{Formula, Sequent, Signature, SyntaxError};

/// 1-based line and column of a character in the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl Position {
    pub const START: Position = Position { line: 1, column: 1 };

    /// Position of `inner` when it is located at `self` inside a larger text.
    pub fn offset(self, inner: Position) -> Position {
        if inner.line == 1 {
            Position {
                line: self.line,
                column: self.column + inner.column - 1,
            }
        } else {
            Position {
                line: self.line + inner.line - 1,
                column: inner.column,
            }
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    Forall,
    Exists,
    Top,
    Bot,
    LParen,
    RParen,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Implies,
    Turnstile,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Var(s) => write!(f, "`{s}`"),
            Tok::Forall => f.write_str("`forall`"),
            Tok::Exists => f.write_str("`exists`"),
            Tok::Top => f.write_str("`top`"),
            Tok::Bot => f.write_str("`bot`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Not => f.write_str("`~`"),
            Tok::And => f.write_str("`&`"),
            Tok::Or => f.write_str("`|`"),
            Tok::Implies => f.write_str("`->`"),
            Tok::Turnstile => f.write_str("`|-`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Position)>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut pos = Position::START;
    let advance = |pos: &mut Position, c: char| {
        if c == '\n' {
            pos.line += 1;
            pos.column = 1;
        } else {
            pos.column += 1;
        }
    };
    while let Some(&c) = chars.peek() {
        let start = pos;
        if c.is_whitespace() {
            chars.next();
            advance(&mut pos, c);
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut word = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    word.push(d);
                    chars.next();
                    advance(&mut pos, d);
                } else {
                    break;
                }
            }
            let tok = match word.as_str() {
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                "top" => Tok::Top,
                "bot" => Tok::Bot,
                _ if c.is_ascii_uppercase() => Tok::Ident(word),
                _ if word.chars().all(|d| !d.is_ascii_uppercase()) => Tok::Var(word),
                _ => {
                    return Err(SyntaxError::Parse {
                        pos: start,
                        message: format!("`{word}` is neither a symbol nor a variable"),
                    })
                }
            };
            out.push((tok, start));
            continue;
        }
        chars.next();
        advance(&mut pos, c);
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '~' | '¬' => Tok::Not,
            '&' | '∧' => Tok::And,
            '∨' => Tok::Or,
            '⊃' | '→' => Tok::Implies,
            '∀' => Tok::Forall,
            '∃' => Tok::Exists,
            '⊤' => Tok::Top,
            '⊥' => Tok::Bot,
            '⊢' => Tok::Turnstile,
            '|' if chars.peek() == Some(&'-') => {
                chars.next();
                advance(&mut pos, '-');
                Tok::Turnstile
            }
            '|' => Tok::Or,
            '-' if chars.peek() == Some(&'>') => {
                chars.next();
                advance(&mut pos, '>');
                Tok::Implies
            }
            _ => {
                return Err(SyntaxError::Parse {
                    pos: start,
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::Eof, pos));
    Ok(out)
}

struct Parser<'s> {
    toks: Vec<(Tok, Position)>,
    at: usize,
    sig: &'s mut Signature,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Position {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, message: String) -> Result<T, SyntaxError> {
        Err(SyntaxError::Parse {
            pos: self.pos(),
            message,
        })
    }

    fn expect(&mut self, t: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {t}, found {}", self.peek()))
        }
    }

    fn var(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                Ok(v)
            }
            other => self.error(format!("expected a variable, found {other}")),
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Tok::Forall | Tok::Exists => self.quant(),
            _ => self.implication(),
        }
    }

    fn quant(&mut self) -> Result<Formula, SyntaxError> {
        let universal = self.bump() == Tok::Forall;
        let x = self.var()?;
        self.expect(Tok::Dot)?;
        let body = self.formula()?;
        Ok(if universal {
            Formula::forall(x, body)
        } else {
            Formula::exists(x, body)
        })
    }

    fn implication(&mut self) -> Result<Formula, SyntaxError> {
        let left = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let right = match self.peek() {
                Tok::Forall | Tok::Exists => self.quant()?,
                _ => self.implication()?,
            };
            Ok(Formula::implies(left, right))
        } else {
            Ok(left)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.negation()?;
        while *self.peek() == Tok::And {
            self.bump();
            acc = Formula::and(acc, self.negation()?);
        }
        Ok(acc)
    }

    fn negation(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.negation()?))
            }
            // A quantifier in operand position scopes over the rest of the input.
            Tok::Forall | Tok::Exists => self.quant(),
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, SyntaxError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Top => Ok(Formula::Top),
            Tok::Bot => Ok(Formula::Bot),
            Tok::LParen => {
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) => {
                let mut args = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    args.push(self.var()?);
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.var()?);
                    }
                    self.expect(Tok::RParen)?;
                }
                self.sig.declare(&name, args.len())?;
                Ok(Formula::Atom(name, args))
            }
            other => Err(SyntaxError::Parse {
                pos,
                message: format!("expected a formula, found {other}"),
            }),
        }
    }

    fn finish(&mut self) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error(format!("unexpected {} after end of formula", self.peek()))
        }
    }
}

/// Parses a formula with a fresh arity table.
pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    parse_formula_with(text, &mut Signature::new())
}

/// Parses a formula, checking and extending `sig`.
pub fn parse_formula_with(text: &str, sig: &mut Signature) -> Result<Formula, SyntaxError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        sig,
    };
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_sequent(text: &str) -> Result<Sequent, SyntaxError> {
    parse_sequent_with(text, &mut Signature::new())
}

pub fn parse_sequent_with(text: &str, sig: &mut Signature) -> Result<Sequent, SyntaxError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        sig,
    };
    let mut antecedent = Vec::new();
    if *p.peek() != Tok::Turnstile {
        antecedent.push(p.formula()?);
        while *p.peek() == Tok::Comma {
            p.bump();
            antecedent.push(p.formula()?);
        }
    }
    p.expect(Tok::Turnstile)?;
    let succedent = if *p.peek() == Tok::Eof {
        None
    } else {
        Some(p.formula()?)
    };
    p.finish()?;
    Ok(Sequent::new(antecedent, succedent))
}
