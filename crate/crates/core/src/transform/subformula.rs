use std::collections::HashMap;

use super::TransformError;
use crate::kernel::{CheckReport, Derivation, Failure, Stats, ViolationCode};
use crate::syntax::{classify, Formula};

/// A subformula of an endsequent formula together with the variables bound
/// above it, which quantifier rules may instantiate.
struct Pattern<'a> {
    body: &'a Formula,
    params: Vec<&'a str>,
}

fn patterns<'a>(f: &'a Formula, params: &mut Vec<&'a str>, out: &mut Vec<Pattern<'a>>) {
    out.push(Pattern {
        body: f,
        params: params.clone(),
    });
    match f {
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            params.push(x);
            patterns(a, params, out);
            params.pop();
        }
        _ => {
            for c in f.children() {
                patterns(c, params, out);
            }
        }
    }
}

fn matches<'a>(
    p: &'a Formula,
    f: &'a Formula,
    params: &[&str],
    env_p: &mut Vec<&'a str>,
    env_f: &mut Vec<&'a str>,
    binding: &mut HashMap<&'a str, &'a str>,
) -> bool {
    match (p, f) {
        (Formula::Atom(a, xs), Formula::Atom(b, ys)) => {
            a == b
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| {
                    let bx = env_p.iter().rposition(|v| v == x);
                    let by = env_f.iter().rposition(|v| v == y);
                    match (bx, by) {
                        (Some(i), Some(j)) => i == j,
                        (None, None) if params.contains(&x.as_str()) => {
                            *binding.entry(x.as_str()).or_insert(y.as_str()) == y.as_str()
                        }
                        (None, None) => x == y,
                        _ => false,
                    }
                })
        }
        (Formula::Top, Formula::Top) | (Formula::Bot, Formula::Bot) => true,
        (Formula::Not(a), Formula::Not(b)) => matches(a, b, params, env_p, env_f, binding),
        (Formula::And(a1, a2), Formula::And(b1, b2))
        | (Formula::Or(a1, a2), Formula::Or(b1, b2))
        | (Formula::Implies(a1, a2), Formula::Implies(b1, b2)) => {
            matches(a1, b1, params, env_p, env_f, binding) && matches(a2, b2, params, env_p, env_f, binding)
        }
        (Formula::Forall(x, a), Formula::Forall(y, b)) | (Formula::Exists(x, a), Formula::Exists(y, b)) => {
            env_p.push(x);
            env_f.push(y);
            let ok = matches(a, b, params, env_p, env_f, binding);
            env_p.pop();
            env_f.pop();
            ok
        }
        _ => false,
    }
}

fn is_instance(pat: &Pattern<'_>, f: &Formula) -> bool {
    matches(pat.body, f, &pat.params, &mut Vec::new(), &mut Vec::new(), &mut HashMap::new())
}

/// Checks that every non-propositional formula of a cut-free derivation is
/// an instance of a subformula of the endsequent.
pub fn predicate_subformula_report(d: &Derivation) -> Result<CheckReport, TransformError> {
    if !d.is_cut_free() {
        return Err(TransformError::Precondition("derivation contains Cut or Mix".into()));
    }
    let mut pats = Vec::new();
    for f in d.conclusion().formulas() {
        patterns(f, &mut Vec::new(), &mut pats);
    }
    let stats = Stats::of(d);
    let mut stack = vec![(d, Vec::new())];
    while let Some((node, path)) = stack.pop() {
        for f in node.conclusion().formulas() {
            if classify(f).is_propositional() || pats.iter().any(|p| is_instance(p, f)) {
                continue;
            }
            let failure = Failure {
                path,
                rule: node.tag(),
                conclusion: node.conclusion().to_string(),
                code: ViolationCode::SubformulaViolation,
                message: format!("{f} is not an instance of a subformula of the endsequent"),
            };
            return Ok(CheckReport::failed(failure, stats));
        }
        for (i, p) in node.premises.iter().enumerate().rev() {
            let mut q = path.clone();
            q.push(i);
            stack.push((p, q));
        }
    }
    Ok(CheckReport::ok(stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::parse_derivation;
    use crate::syntax::parse_formula;

    #[test]
    fn instances_match() {
        let e = parse_formula("forall x. exists y. P(x, y) & Q(z)").unwrap();
        let mut pats = Vec::new();
        patterns(&e, &mut Vec::new(), &mut pats);
        let yes = ["P(a, b) & Q(z)", "exists w. P(a, w) & Q(z)", "P(a, a) & Q(z)"];
        for t in yes {
            let f = parse_formula(t).unwrap();
            assert!(pats.iter().any(|p| is_instance(p, &f)), "{t}");
        }
        let no = ["P(a, b) & Q(a)", "exists w. P(w, w) & Q(z)", "forall y. P(a, y) & Q(z)"];
        for t in no {
            let f = parse_formula(t).unwrap();
            assert!(!pats.iter().any(|p| is_instance(p, &f)), "{t}");
        }
    }

    #[test]
    fn report() {
        let good = parse_derivation(
            r#"(ImpSuc :concl "|- (forall x. P(x)) -> P(a)"
                 (ForallAnt :concl "forall x. P(x) |- P(a)" :witness a :bound x
                   (Axiom :concl "P(a) |- P(a)")))"#,
        )
        .unwrap();
        assert!(predicate_subformula_report(&good).unwrap().is_ok());
        let bad = parse_derivation(
            r#"(Cut :concl "|- top" :formula "exists x. P(x) -> P(x)"
                 (ExistsSuc :concl "|- exists x. P(x) -> P(x)" :witness a :bound x
                   (ImpSuc :concl "|- P(a) -> P(a)" (Axiom :concl "P(a) |- P(a)")))
                 (ThinAnt :concl "exists x. P(x) -> P(x) |- top" (TopAxiom :concl "|- top")))"#,
        )
        .unwrap();
        assert!(predicate_subformula_report(&bad).is_err());
        let thin = parse_derivation(
            r#"(ImpSuc :concl "|- Q(b) -> top"
                 (ThinAnt :concl "Q(b) |- top" (TopAxiom :concl "|- top")))"#,
        )
        .unwrap();
        assert!(predicate_subformula_report(&thin).unwrap().is_ok());
        // not a valid derivation; the report only inspects formulas
        let stray = parse_derivation(
            r#"(ImpSuc :concl "|- R -> top"
                 (ThinAnt :concl "R |- top" (ThinSuc :concl "|- top" (NotAnt :concl "~Q(a) |-" (Axiom :concl "Q(a) |- Q(a)")))))"#,
        )
        .unwrap();
        let r = predicate_subformula_report(&stray).unwrap();
        let f = r.failure().unwrap();
        assert_eq!(f.code, ViolationCode::SubformulaViolation);
        assert_eq!(f.path, vec![0, 0, 0]);
    }
}
