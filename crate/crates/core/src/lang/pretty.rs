//! Pretty printer. Binary operators are always parenthesized so that the
//! output parses back to the same tree.

use std::fmt::Write;

use super::ast::*;

pub fn pretty_expr(e: &Expr) -> String {
    let s = inner(e);
    match e {
        Expr::And(..) | Expr::Or(..) | Expr::Imp(..) | Expr::Iff(..) | Expr::Eq(..) | Expr::Neq(..) | Expr::Since(..) => {
            s[1..s.len() - 1].to_string()
        }
        _ => s,
    }
}

fn inner(e: &Expr) -> String {
    let bin = |a: &Expr, op: &str, b: &Expr| format!("({} {op} {})", inner(a), inner(b));
    match e {
        Expr::Bool(true) => "TRUE".into(),
        Expr::Bool(false) => "FALSE".into(),
        Expr::Id(n) => n.clone(),
        Expr::Not(a) => format!("!{}", inner(a)),
        Expr::And(a, b) => bin(a, "&", b),
        Expr::Or(a, b) => bin(a, "|", b),
        Expr::Imp(a, b) => bin(a, "->", b),
        Expr::Iff(a, b) => bin(a, "<->", b),
        Expr::Eq(a, b) => bin(a, "=", b),
        Expr::Neq(a, b) => bin(a, "!=", b),
        Expr::Since(a, b) => bin(a, "SINCE", b),
        Expr::Next(a) => format!("next({})", pretty_expr(a)),
        Expr::Prev(a) => format!("PREV({})", pretty_expr(a)),
        Expr::Once(a) => format!("ONCE({})", pretty_expr(a)),
        Expr::Historically(a) => format!("HISTORICALLY({})", pretty_expr(a)),
    }
}

pub fn pretty_body(body: &ConstraintBody) -> String {
    let p = |e: &Expr| pretty_expr(e);
    match body {
        ConstraintBody::Initial(e) => p(e),
        ConstraintBody::Safety(e) => format!("G ({})", p(e)),
        ConstraintBody::Justice(e) => format!("G F ({})", p(e)),
        ConstraintBody::Pattern(inst) => {
            let q = |n: &str| p(inst.param(n));
            match inst.pattern {
                PatternId::P26 => format!("Globally ({}) leads to ({})", q("p"), q("s")),
                PatternId::P20 => format!("Globally ({}) after ({}) until ({})", q("p"), q("q"), q("r")),
                PatternId::P15 => format!(
                    "({}) occurs at most {} times between ({}) and ({})",
                    q("p"),
                    inst.bound.unwrap_or(1),
                    q("q"),
                    q("r")
                ),
                PatternId::P09 => format!("({}) becomes true between ({}) and ({})", q("p"), q("q"), q("r")),
            }
        }
    }
}

fn decl(out: &mut String, v: &VarDecl) {
    let ty = match &v.domain {
        Domain::Boolean => "boolean".to_string(),
        Domain::Enumeration(vals) => format!("{{{}}}", vals.join(", ")),
    };
    let _ = writeln!(out, "  {} : {};", v.name, ty);
}

pub fn pretty(doc: &SpecDocument) -> String {
    let mut out = String::new();
    if !doc.name.is_empty() {
        let _ = writeln!(out, "SPEC {}\n", doc.name);
    }
    out.push_str("VARENV\n");
    doc.env_vars.iter().for_each(|v| decl(&mut out, v));
    out.push_str("\nVAR\n");
    doc.sys_vars.iter().chain(&doc.aux_vars).for_each(|v| decl(&mut out, v));
    if !doc.defines.is_empty() {
        out.push_str("\nDEFINE\n");
        for (n, e) in &doc.defines {
            let _ = writeln!(out, "  {n} := {};", pretty_expr(e));
        }
    }
    out.push('\n');
    for c in doc.constraints() {
        let label = c.label.as_ref().map(|l| format!("{l}: ")).unwrap_or_default();
        let _ = writeln!(out, "{} {label}{};", c.side.keyword(), pretty_body(&c.body));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse, parse_expr};

    #[test]
    fn expression_round_trip() {
        for src in ["a & b | !c", "x = A -> next(y) != B", "PREV(a SINCE b) <-> ONCE(!c)", "!(a | b)", "TRUE"] {
            let e = parse_expr(src).unwrap();
            assert_eq!(parse_expr(&pretty_expr(&e)).unwrap(), e, "{src}");
        }
    }

    #[test]
    fn document_round_trip() {
        let src = "SPEC demo VARENV e : boolean; VAR s : {A, B, C}; spec_m : boolean;
            DEFINE d := s = A | e;
            ASM Globally (e) leads to (!e);
            GAR lbl: G (d -> next(spec_m));
            GAR (s = B) occurs at most 3 times between (e) and (!e);";
        let doc = parse(src).unwrap();
        let again = parse(&pretty(&doc)).unwrap();
        assert_eq!(again.without_spans(), doc.without_spans());
    }
}
