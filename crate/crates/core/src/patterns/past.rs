//! Past-time operators compiled into auxiliary monitor bits.

use super::templates::TemplateExpansion;
use crate::lang::ast::*;

fn bool_aux(name: &str) -> VarDecl {
    VarDecl { name: name.to_string(), domain: Domain::Boolean, owner: Owner::Aux, span: Span::default() }
}

/// Replace every past subformula by a fresh auxiliary variable, innermost first.
/// Expressions without past operators come back unchanged with an empty expansion.
pub fn compile_past(e: &Expr, fresh: &mut dyn FnMut(&str) -> String) -> (Expr, TemplateExpansion) {
    let mut exp = TemplateExpansion::default();
    let out = go(e, fresh, &mut exp);
    (out, exp)
}

fn go(e: &Expr, fresh: &mut dyn FnMut(&str) -> String, exp: &mut TemplateExpansion) -> Expr {
    if !e.has_past() {
        return e.clone();
    }
    let e = e.map_children(|c| go(c, fresh, exp));
    match e {
        Expr::Prev(a) => {
            let m = fresh("prev");
            exp.new_aux_vars.push(bool_aux(&m));
            exp.initial.push(Expr::not(Expr::id(&m)));
            exp.safety.push(Expr::iff(Expr::next(Expr::id(&m)), *a));
            Expr::id(m)
        }
        Expr::Since(a, b) => since(*a, *b, fresh, exp),
        Expr::Once(a) => since(Expr::Bool(true), *a, fresh, exp),
        Expr::Historically(a) => Expr::not(since(Expr::Bool(true), Expr::not(*a), fresh, exp)),
        other => other,
    }
}

fn since(a: Expr, b: Expr, fresh: &mut dyn FnMut(&str) -> String, exp: &mut TemplateExpansion) -> Expr {
    let m = fresh("since");
    let aux = Expr::id(&m);
    exp.new_aux_vars.push(bool_aux(&m));
    exp.initial.push(Expr::iff(aux.clone(), b.clone()));
    let step = match a {
        Expr::Bool(true) => Expr::or(Expr::next(b), aux.clone()),
        a => Expr::or(Expr::next(b), Expr::and(Expr::next(a), aux.clone())),
    };
    exp.safety.push(Expr::iff(Expr::next(aux.clone()), step));
    aux
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_expr;

    fn fresh() -> impl FnMut(&str) -> String {
        let mut n = 0;
        move |h: &str| {
            n += 1;
            format!("aux_{h}_{n}")
        }
    }

    #[test]
    fn nested_past_two_aux() {
        let e = parse_expr("PREV (lift != DROP SINCE lift = LIFT)").unwrap();
        let (out, exp) = compile_past(&e, &mut fresh());
        assert_eq!(exp.new_aux_vars.len(), 2);
        assert_eq!(exp.new_aux_vars[0].name, "aux_since_1");
        assert_eq!(out, Expr::id("aux_prev_2"));
        assert!(!exp.safety[1].has_past());
        assert!(exp.safety[1].idents().contains("aux_since_1"));
    }

    #[test]
    fn no_past_is_identity() {
        let e = parse_expr("a & next(b)").unwrap();
        let (out, exp) = compile_past(&e, &mut fresh());
        assert_eq!(out, e);
        assert_eq!(exp, TemplateExpansion::default());
    }
}
