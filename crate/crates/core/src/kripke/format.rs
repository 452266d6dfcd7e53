//! The `.km` structure format:
//!
//! ```text
//! # comment
//! node k
//! node m
//! le k m
//! dom k 0
//! dom m 0
//! val m P(0)
//! ```
//!
//! The order is closed reflexively and transitively on load.

use std::collections::BTreeSet;
use std::fmt::Write;

use super::{GroundAtom, KripkeError, KripkeStructure};

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '\'' | '.' | '-'))
}

/// Splits on whitespace, keeping parenthesized groups together.
fn tokens(line: &str) -> Result<Vec<String>, String> {
    let mut out: Vec<String> = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for c in line.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1).ok_or("unbalanced ')'")?,
            _ => {}
        }
        if c.is_whitespace() {
            if depth == 0 {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                continue;
            }
        } else {
            cur.push(c);
        }
    }
    if depth != 0 {
        return Err("unbalanced '('".into());
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

fn parse_atom(t: &str, declared: &BTreeSet<String>) -> Result<GroundAtom, String> {
    let Some(open) = t.find('(') else {
        return if is_name(t) {
            Ok(GroundAtom::new(t, Vec::<String>::new()))
        } else {
            Err(format!("bad atom {t}"))
        };
    };
    let pred = &t[..open];
    let inner = t[open + 1..].strip_suffix(')').ok_or_else(|| format!("bad atom {t}"))?;
    if !is_name(pred) {
        return Err(format!("bad atom {t}"));
    }
    let args: Vec<&str> = inner.split(',').collect();
    for e in &args {
        if !declared.contains(*e) {
            return Err(format!("undeclared element {e:?} in {t}"));
        }
    }
    Ok(GroundAtom::new(pred, args))
}

pub fn parse_structure(text: &str) -> Result<KripkeStructure, KripkeError> {
    let lines: Vec<(usize, Vec<String>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| {
            let l = l.split('#').next().unwrap_or("");
            tokens(l).map(|t| (i + 1, t)).map_err(|message| KripkeError::Parse { line: i + 1, message })
        })
        .collect::<Result<_, _>>()?;
    let err = |line: usize, message: String| KripkeError::Parse { line, message };
    let mut s = KripkeStructure::new();
    let mut declared = BTreeSet::new();
    for (line, toks) in &lines {
        match toks.first().map(String::as_str) {
            Some("node") => {
                let [_, name] = toks.as_slice() else {
                    return Err(err(*line, "expected: node NAME".into()));
                };
                if !is_name(name) {
                    return Err(err(*line, format!("bad node name {name:?}")));
                }
                s.add_node(name.as_str()).map_err(|e| err(*line, e.to_string()))?;
            }
            Some("dom") => {
                for e in toks.iter().skip(2) {
                    if !is_name(e) {
                        return Err(err(*line, format!("bad element name {e:?}")));
                    }
                    declared.insert(e.clone());
                }
            }
            Some("le" | "val") | None => {}
            Some(other) => return Err(err(*line, format!("unknown directive {other:?}"))),
        }
    }
    for (line, toks) in &lines {
        let node = |i: usize| -> Result<usize, KripkeError> {
            let name = toks.get(i).ok_or_else(|| err(*line, "missing node name".into()))?;
            s.node(name).map_err(|e| err(*line, e.to_string()))
        };
        match toks.first().map(String::as_str) {
            Some("le") => {
                if toks.len() != 3 {
                    return Err(err(*line, "expected: le NAME NAME".into()));
                }
                let (a, b) = (node(1)?, node(2)?);
                s.set_le(a, b);
            }
            Some("dom") => {
                if toks.len() < 3 {
                    return Err(err(*line, "expected: dom NAME ELEM+".into()));
                }
                let k = node(1)?;
                for e in &toks[2..] {
                    s.add_element(k, e.as_str());
                }
            }
            Some("val") => {
                if toks.len() < 3 {
                    return Err(err(*line, "expected: val NAME ATOM+".into()));
                }
                let k = node(1)?;
                for t in &toks[2..] {
                    let a = parse_atom(t, &declared).map_err(|m| err(*line, m))?;
                    s.add_atom(k, a);
                }
            }
            _ => {}
        }
    }
    s.close();
    Ok(s)
}

/// Canonical text: nodes, covering pairs of the order, domains, valuations.
pub fn render_structure(s: &KripkeStructure) -> String {
    let mut out = String::new();
    for k in s.nodes() {
        writeln!(out, "node {}", s.name(k)).unwrap();
    }
    for a in s.nodes() {
        for b in s.nodes() {
            let covers = a != b
                && s.le(a, b)
                && !s.nodes().any(|m| m != a && m != b && s.le(a, m) && s.le(m, b));
            if covers {
                writeln!(out, "le {} {}", s.name(a), s.name(b)).unwrap();
            }
        }
    }
    for k in s.nodes() {
        if !s.domain(k).is_empty() {
            let d: Vec<&str> = s.domain(k).iter().map(String::as_str).collect();
            writeln!(out, "dom {} {}", s.name(k), d.join(" ")).unwrap();
        }
    }
    for k in s.nodes() {
        if !s.valuation(k).is_empty() {
            let v: Vec<String> = s.valuation(k).iter().map(ToString::to_string).collect();
            writeln!(out, "val {} {}", s.name(k), v.join(" ")).unwrap();
        }
    }
    out
}
