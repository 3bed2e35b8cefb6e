//! Direct evaluation of expressions over value-level states, without any
//! bit encoding. Used by the explicit-state oracle, the run-time monitors and
//! the play-out engine.

use crate::lang::ast::{Domain, Expr};

/// A state is one domain index per variable (booleans: 0 = false, 1 = true).
pub type Values = [usize];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Compiled {
    Const(bool),
    /// Boolean variable.
    Var { var: usize, next: bool },
    /// Variable equals the given domain index.
    IsValue { var: usize, next: bool, value: usize },
    /// Two variables (same domain) hold the same value.
    Same { a: usize, a_next: bool, b: usize, b_next: bool },
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
    Imp(Box<Compiled>, Box<Compiled>),
    Iff(Box<Compiled>, Box<Compiled>),
}

/// Name resolution context: variable names and domains, in index order.
pub trait VarTable {
    fn lookup(&self, name: &str) -> Option<(usize, &Domain)>;
}

/// A plain list of named variables, for evaluation outside a problem.
#[derive(Debug, Clone, Default)]
pub struct VarList(pub Vec<(String, Domain)>);

impl VarTable for VarList {
    fn lookup(&self, name: &str) -> Option<(usize, &Domain)> {
        self.0.iter().position(|(n, _)| n == name).map(|i| (i, &self.0[i].1))
    }
}

enum Term {
    Bool(Compiled),
    Var { var: usize, next: bool, domain: Domain },
    Lit(String),
}

fn term(e: &Expr, vars: &dyn VarTable, next: bool) -> Result<Term, String> {
    match e {
        Expr::Id(n) => match vars.lookup(n) {
            Some((var, Domain::Boolean)) => Ok(Term::Var { var, next, domain: Domain::Boolean }),
            Some((var, d)) => Ok(Term::Var { var, next, domain: d.clone() }),
            None => Ok(Term::Lit(n.clone())),
        },
        Expr::Next(a) => {
            if next {
                return Err("nested next".into());
            }
            term(a, vars, true)
        }
        _ => compile_in(e, vars, next).map(Term::Bool),
    }
}

fn compile_in(e: &Expr, vars: &dyn VarTable, next: bool) -> Result<Compiled, String> {
    let bin = |a: &Expr, b: &Expr| -> Result<(Box<Compiled>, Box<Compiled>), String> {
        Ok((Box::new(compile_in(a, vars, next)?), Box::new(compile_in(b, vars, next)?)))
    };
    Ok(match e {
        Expr::Bool(b) => Compiled::Const(*b),
        Expr::Id(_) | Expr::Next(_) => match term(e, vars, next)? {
            Term::Bool(c) => c,
            Term::Var { var, next, domain: Domain::Boolean } => Compiled::Var { var, next },
            Term::Var { .. } => return Err(format!("enumeration variable used as boolean in {e:?}")),
            Term::Lit(l) => return Err(format!("unknown identifier `{l}`")),
        },
        Expr::Not(a) => Compiled::Not(Box::new(compile_in(a, vars, next)?)),
        Expr::And(a, b) => {
            let (a, b) = bin(a, b)?;
            Compiled::And(a, b)
        }
        Expr::Or(a, b) => {
            let (a, b) = bin(a, b)?;
            Compiled::Or(a, b)
        }
        Expr::Imp(a, b) => {
            let (a, b) = bin(a, b)?;
            Compiled::Imp(a, b)
        }
        Expr::Iff(a, b) => {
            let (a, b) = bin(a, b)?;
            Compiled::Iff(a, b)
        }
        Expr::Eq(a, b) => equality(a, b, vars, next)?,
        Expr::Neq(a, b) => Compiled::Not(Box::new(equality(a, b, vars, next)?)),
        Expr::Prev(_) | Expr::Since(..) | Expr::Once(_) | Expr::Historically(_) => {
            return Err("past operators must be compiled before evaluation".into())
        }
    })
}

fn equality(a: &Expr, b: &Expr, vars: &dyn VarTable, next: bool) -> Result<Compiled, String> {
    let (ta, tb) = (term(a, vars, next)?, term(b, vars, next)?);
    let as_bool = |t: Term| -> Result<Compiled, String> {
        match t {
            Term::Bool(c) => Ok(c),
            Term::Var { var, next, domain: Domain::Boolean } => Ok(Compiled::Var { var, next }),
            Term::Lit(l) if l == "TRUE" || l == "true" => Ok(Compiled::Const(true)),
            Term::Lit(l) if l == "FALSE" || l == "false" => Ok(Compiled::Const(false)),
            Term::Lit(l) => Err(format!("unknown identifier `{l}`")),
            Term::Var { .. } => Err("cannot compare enumeration with boolean".into()),
        }
    };
    match (ta, tb) {
        (Term::Var { var, next, domain: d @ Domain::Enumeration(_) }, Term::Lit(l))
        | (Term::Lit(l), Term::Var { var, next, domain: d @ Domain::Enumeration(_) }) => {
            let value = d.value_index(&l).ok_or_else(|| format!("value `{l}` not in domain"))?;
            Ok(Compiled::IsValue { var, next, value })
        }
        (
            Term::Var { var: a, next: a_next, domain: da @ Domain::Enumeration(_) },
            Term::Var { var: b, next: b_next, domain: db },
        ) => {
            if da != db {
                return Err("comparison of different domains".into());
            }
            Ok(Compiled::Same { a, a_next, b, b_next })
        }
        (ta, tb) => Ok(Compiled::Iff(Box::new(as_bool(ta)?), Box::new(as_bool(tb)?))),
    }
}

impl Compiled {
    /// Resolve names of a past-free expression against a variable table.
    pub fn new(e: &Expr, vars: &dyn VarTable) -> Result<Compiled, String> {
        compile_in(e, vars, false)
    }

    /// Evaluate over a current state and, if the expression mentions
    /// `next(...)`, a successor state. Panics if `next` is needed but absent.
    pub fn eval(&self, cur: &Values, next: Option<&Values>) -> bool {
        let pick = |is_next: bool| -> &Values {
            if is_next {
                next.expect("expression refers to the next state")
            } else {
                cur
            }
        };
        match self {
            Compiled::Const(b) => *b,
            Compiled::Var { var, next } => pick(*next)[*var] == 1,
            Compiled::IsValue { var, next, value } => pick(*next)[*var] == *value,
            Compiled::Same { a, a_next, b, b_next } => pick(*a_next)[*a] == pick(*b_next)[*b],
            Compiled::Not(a) => !a.eval(cur, next),
            Compiled::And(a, b) => a.eval(cur, next) && b.eval(cur, next),
            Compiled::Or(a, b) => a.eval(cur, next) || b.eval(cur, next),
            Compiled::Imp(a, b) => !a.eval(cur, next) || b.eval(cur, next),
            Compiled::Iff(a, b) => a.eval(cur, next) == b.eval(cur, next),
        }
    }

    pub fn uses_next(&self) -> bool {
        match self {
            Compiled::Const(_) => false,
            Compiled::Var { next, .. } | Compiled::IsValue { next, .. } => *next,
            Compiled::Same { a_next, b_next, .. } => *a_next || *b_next,
            Compiled::Not(a) => a.uses_next(),
            Compiled::And(a, b) | Compiled::Or(a, b) | Compiled::Imp(a, b) | Compiled::Iff(a, b) => {
                a.uses_next() || b.uses_next()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_expr;

    #[test]
    fn evaluates_enums_and_next() {
        let t = VarList(vec![
            ("lift".into(), Domain::Enumeration(vec!["LIFT".into(), "DROP".into(), "NIL".into()])),
            ("b".into(), Domain::Boolean),
        ]);
        let c = Compiled::new(&parse_expr("lift = LIFT -> next(b)").unwrap(), &t).unwrap();
        assert!(c.uses_next());
        assert!(c.eval(&[0, 0], Some(&[2, 1])));
        assert!(!c.eval(&[0, 0], Some(&[2, 0])));
        assert!(c.eval(&[2, 0], Some(&[2, 0])));
        let c = Compiled::new(&parse_expr("next(lift) = lift & b = TRUE").unwrap(), &t).unwrap();
        assert!(c.eval(&[1, 1], Some(&[1, 0])));
        assert!(Compiled::new(&parse_expr("lift = CLEAR").unwrap(), &t).is_err());
    }
}
