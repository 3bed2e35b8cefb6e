use std::collections::{BTreeSet, HashMap};

use super::ast::*;
use super::LangError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Ty {
    Bool,
    /// Value of an enumeration-typed variable; carries the domain.
    Enum(Vec<String>),
    /// Bare enumeration literal, not yet matched against a domain.
    Lit(String),
}

struct Checker<'a> {
    doc: &'a SpecDocument,
    literals: BTreeSet<String>,
}

impl<'a> Checker<'a> {
    fn new(doc: &'a SpecDocument) -> Self {
        let literals = doc
            .vars()
            .filter_map(|v| match &v.domain {
                Domain::Enumeration(vals) => Some(vals.clone()),
                Domain::Boolean => None,
            })
            .flatten()
            .collect();
        Checker { doc, literals }
    }

    fn ty(&self, e: &Expr) -> Result<Ty, String> {
        match e {
            Expr::Bool(_) => Ok(Ty::Bool),
            Expr::Id(n) => {
                if let Some(v) = self.doc.var(n) {
                    return Ok(match &v.domain {
                        Domain::Boolean => Ty::Bool,
                        Domain::Enumeration(vals) => Ty::Enum(vals.clone()),
                    });
                }
                if let Some(body) = self.doc.defines.get(n) {
                    return self.ty(body);
                }
                if self.literals.contains(n) {
                    return Ok(Ty::Lit(n.clone()));
                }
                Err(format!("unknown identifier `{n}`"))
            }
            Expr::Not(a) => self.boolean(a).map(|_| Ty::Bool),
            Expr::And(a, b) | Expr::Or(a, b) | Expr::Imp(a, b) | Expr::Iff(a, b) | Expr::Since(a, b) => {
                self.boolean(a)?;
                self.boolean(b)?;
                Ok(Ty::Bool)
            }
            Expr::Prev(a) | Expr::Once(a) | Expr::Historically(a) => self.boolean(a).map(|_| Ty::Bool),
            Expr::Next(a) => self.ty(a),
            Expr::Eq(a, b) | Expr::Neq(a, b) => {
                let (ta, tb) = (self.ty(a)?, self.ty(b)?);
                match (&ta, &tb) {
                    (Ty::Bool, Ty::Bool) => Ok(Ty::Bool),
                    (Ty::Enum(d1), Ty::Enum(d2)) if d1 == d2 => Ok(Ty::Bool),
                    (Ty::Enum(d), Ty::Lit(l)) | (Ty::Lit(l), Ty::Enum(d)) => {
                        if d.contains(l) {
                            Ok(Ty::Bool)
                        } else {
                            Err(format!("value `{l}` is not in the domain {{{}}}", d.join(", ")))
                        }
                    }
                    _ => Err(format!("cannot compare `{}` with `{}`", describe(&ta), describe(&tb))),
                }
            }
        }
    }

    fn boolean(&self, e: &Expr) -> Result<(), String> {
        match self.ty(e)? {
            Ty::Bool => Ok(()),
            other => Err(format!("expected a boolean expression, found {}", describe(&other))),
        }
    }
}

fn describe(t: &Ty) -> String {
    match t {
        Ty::Bool => "boolean".into(),
        Ty::Enum(d) => format!("{{{}}}", d.join(", ")),
        Ty::Lit(l) => format!("literal {l}"),
    }
}

/// Checks operator placement on a DEFINE-expanded expression.
fn temporal_placement(e: &Expr, under_next: bool, under_past: bool) -> Result<(), String> {
    match e {
        Expr::Next(a) => {
            if under_next {
                return Err("`next` nested inside `next`".into());
            }
            if under_past {
                return Err("`next` inside a past operator".into());
            }
            if a.has_past() {
                return Err("past operator inside `next`".into());
            }
            temporal_placement(a, true, under_past)
        }
        Expr::Prev(_) | Expr::Since(..) | Expr::Once(_) | Expr::Historically(_) => {
            for c in e.children() {
                temporal_placement(c, under_next, true)?;
            }
            Ok(())
        }
        _ => {
            for c in e.children() {
                temporal_placement(c, under_next, under_past)?;
            }
            Ok(())
        }
    }
}

/// Side whose constraints define a manual auxiliary variable: the side that
/// constrains `next(var)`. Unconstrained variables default to the system.
pub fn aux_owner(doc: &SpecDocument, name: &str) -> Side {
    let defined_by_asm = doc
        .assumptions
        .iter()
        .filter(|c| doc.is_aux_definition(c))
        .any(|c| c.exprs().iter().any(|e| e.idents().contains(name)));
    if defined_by_asm {
        Side::Assumption
    } else {
        Side::Guarantee
    }
}

fn define_cycles(doc: &SpecDocument) -> Vec<LangError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        Active,
        Done,
    }
    fn visit(doc: &SpecDocument, n: &str, marks: &mut HashMap<String, Mark>, path: &mut Vec<String>) -> Option<Vec<String>> {
        match marks.get(n).copied().unwrap_or(Mark::Fresh) {
            Mark::Done => return None,
            Mark::Active => {
                let start = path.iter().position(|p| p == n).unwrap_or(0);
                let mut cycle = path[start..].to_vec();
                cycle.push(n.to_string());
                return Some(cycle);
            }
            Mark::Fresh => {}
        }
        marks.insert(n.to_string(), Mark::Active);
        path.push(n.to_string());
        for r in doc.defines[n].idents() {
            if doc.defines.contains_key(&r) {
                if let Some(c) = visit(doc, &r, marks, path) {
                    return Some(c);
                }
            }
        }
        path.pop();
        marks.insert(n.to_string(), Mark::Done);
        None
    }
    let mut marks = HashMap::new();
    let mut errors = vec![];
    for n in doc.defines.keys() {
        if marks.get(n).copied().unwrap_or(Mark::Fresh) != Mark::Fresh {
            continue;
        }
        if let Some(cycle) = visit(doc, n, &mut marks, &mut vec![]) {
            let span = doc.define_spans.get(&cycle[0]).copied().unwrap_or_default();
            errors.push(LangError::Type {
                line: span.line,
                col: span.col,
                message: format!("cyclic DEFINE: {}", cycle.join(" -> ")),
            });
            for c in &cycle {
                marks.insert(c.clone(), Mark::Done);
            }
        }
    }
    errors
}

/// Type check a parsed document. Reports at most one error per constraint.
pub fn typecheck(doc: &SpecDocument) -> Result<(), Vec<LangError>> {
    let mut errors = define_cycles(doc);
    if !errors.is_empty() {
        return Err(errors);
    }
    let checker = Checker::new(doc);
    let err = |span: Span, message: String| LangError::Type { line: span.line, col: span.col, message };
    for (name, body) in &doc.defines {
        let span = doc.define_spans.get(name).copied().unwrap_or_default();
        if let Err(m) = checker.ty(body) {
            errors.push(err(span, format!("in DEFINE `{name}`: {m}")));
        }
    }
    let sys_names: BTreeSet<String> = doc
        .sys_vars
        .iter()
        .map(|v| v.name.clone())
        .chain(
            doc.aux_vars
                .iter()
                .filter(|v| aux_owner(doc, &v.name) == Side::Guarantee)
                .map(|v| v.name.clone()),
        )
        .collect();
    for c in doc.constraints() {
        if let Err(m) = check_constraint(doc, &checker, c, &sys_names) {
            errors.push(err(c.span, m));
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

fn check_constraint(
    doc: &SpecDocument,
    checker: &Checker,
    c: &Constraint,
    sys_names: &BTreeSet<String>,
) -> Result<(), String> {
    for e in c.exprs() {
        checker.boolean(e)?;
        let x = expand_expr(doc, e);
        temporal_placement(&x, false, false)?;
        match &c.body {
            ConstraintBody::Initial(_) if x.has_temporal() => {
                return Err("initial constraint must not contain temporal operators".into())
            }
            ConstraintBody::Justice(_) | ConstraintBody::Pattern(_) if x.has_next() => {
                return Err("`next` is only allowed in safety constraints".into())
            }
            _ => {}
        }
        if c.side == Side::Assumption {
            if matches!(c.body, ConstraintBody::Initial(_)) {
                if let Some(n) = x.idents().iter().find(|n| sys_names.contains(*n)) {
                    return Err(format!("initial assumption refers to system variable `{n}`"));
                }
            }
            if let Some(n) = x.next_idents().iter().find(|n| sys_names.contains(*n)) {
                return Err(format!("assumption refers to `next({n})` of a system variable"));
            }
            let past_on_sys = x.any(&|s| {
                matches!(s, Expr::Since(..) | Expr::Once(_) | Expr::Historically(_))
                    && s.idents().iter().any(|n| sys_names.contains(n))
            });
            if past_on_sys {
                return Err("SINCE/ONCE/HISTORICALLY in an assumption may only refer to environment variables".into());
            }
        }
    }
    Ok(())
}

fn expand_expr(doc: &SpecDocument, e: &Expr) -> Expr {
    match e {
        Expr::Id(n) => match doc.defines.get(n) {
            Some(body) => expand_expr(doc, body),
            None => e.clone(),
        },
        _ => e.map_children(|c| expand_expr(doc, c)),
    }
}

/// Replace every DEFINE reference by its (recursively expanded) body. The
/// resulting document has an empty DEFINE table.
pub fn expand_defines(doc: &SpecDocument) -> SpecDocument {
    let mut out = doc.clone();
    let exp = |e: &Expr| expand_expr(doc, e);
    for c in out.assumptions.iter_mut().chain(&mut out.guarantees) {
        c.body = match &c.body {
            ConstraintBody::Initial(e) => ConstraintBody::Initial(exp(e)),
            ConstraintBody::Safety(e) => ConstraintBody::Safety(exp(e)),
            ConstraintBody::Justice(e) => ConstraintBody::Justice(exp(e)),
            ConstraintBody::Pattern(p) => ConstraintBody::Pattern(p.map_params(exp)),
        };
    }
    out.defines.clear();
    out.define_spans.clear();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;

    const DECLS: &str = "VARENV station : boolean;
        VAR mLeft : {FWD, BWD, STOP}; mRight : {FWD, BWD, STOP}; lift : {LIFT, DROP, NIL};
        DEFINE stopping := mLeft = STOP & mRight = STOP;";

    fn check(body: &str) -> Result<SpecDocument, Vec<LangError>> {
        let doc = parse(&format!("{DECLS}\n{body}")).unwrap();
        typecheck(&doc).map(|_| doc)
    }

    #[test]
    fn env_next_in_guarantee_and_assumption_ok() {
        let doc = check("GAR G (stopping -> station = next(station));").unwrap();
        assert_eq!(doc.guarantees[0].kind(), ConstraintKind::Safety);
        check("ASM G (stopping -> station = next(station));").unwrap();
    }

    #[test]
    fn literal_outside_domain() {
        let errs = check("GAR G (lift = CLEAR);").unwrap_err();
        assert!(errs[0].to_string().contains("unknown identifier `CLEAR`"), "{}", errs[0]);
        let errs = check("GAR G (lift = FWD);").unwrap_err();
        assert!(errs[0].to_string().contains("not in the domain"), "{}", errs[0]);
    }

    #[test]
    fn cyclic_define() {
        let doc = parse("VAR x : boolean; DEFINE a := b; b := a; GAR a;").unwrap();
        let errs = typecheck(&doc).unwrap_err();
        assert!(errs[0].to_string().contains("cyclic DEFINE"), "{}", errs[0]);
    }

    #[test]
    fn placement_errors() {
        assert!(check("ASM G (next(lift) = NIL);").is_err());
        assert!(check("GAR G (next(next(station)));").is_err());
        assert!(check("GAR G (PREV(next(station)));").is_err());
        assert!(check("GAR next(station);").is_err());
        assert!(check("GAR G F (next(station));").is_err());
        assert!(check("GAR G (lift);").is_err());
        assert!(check("GAR G (PREV(lift = NIL));").is_ok());
    }

    #[test]
    fn expansion() {
        let doc = check("GAR G (stopping -> lift = NIL);").unwrap();
        let x = expand_defines(&doc);
        assert!(x.defines.is_empty());
        let ConstraintBody::Safety(e) = &x.guarantees[0].body else { unreachable!() };
        assert!(e.idents().contains("mLeft") && !e.idents().contains("stopping"));
        typecheck(&x).unwrap();
        assert_eq!(expand_defines(&x), x);

        let doc = parse("VAR c : boolean; DEFINE a := b & c; b := !c; GAR a;").unwrap();
        let x = expand_defines(&doc);
        let ConstraintBody::Initial(e) = &x.guarantees[0].body else { unreachable!() };
        assert_eq!(*e, Expr::and(Expr::not(Expr::id("c")), Expr::id("c")));
    }
}
