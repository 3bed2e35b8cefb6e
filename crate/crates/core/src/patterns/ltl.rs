//! A small LTL fragment in negation normal form, its lasso semantics, and a
//! tableau construction yielding a generalized Büchi automaton. Used only to
//! check the pattern templates against their intended meaning.

use std::fmt;

use crate::eval::{Compiled, VarList};
use crate::lang::ast::{Domain, Expr, PatternId, PatternInstance};
use crate::lang::pretty_expr;

/// LTL in negation normal form. Propositional leaves are arbitrary
/// expressions over boolean atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ltl {
    Prop(Expr),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    Release(Box<Ltl>, Box<Ltl>),
}

impl Ltl {
    pub fn prop(e: Expr) -> Ltl {
        Ltl::Prop(e)
    }

    pub fn and(a: Ltl, b: Ltl) -> Ltl {
        Ltl::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Or(Box::new(a), Box::new(b))
    }

    pub fn next(a: Ltl) -> Ltl {
        Ltl::Next(Box::new(a))
    }

    pub fn until(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Release(Box::new(a), Box::new(b))
    }

    pub fn globally(a: Ltl) -> Ltl {
        Ltl::release(Ltl::Prop(Expr::Bool(false)), a)
    }

    pub fn eventually(a: Ltl) -> Ltl {
        Ltl::until(Ltl::Prop(Expr::Bool(true)), a)
    }

    /// `a W b`, written as `b R (b | a)`.
    pub fn weak_until(a: Ltl, b: Ltl) -> Ltl {
        Ltl::release(b.clone(), Ltl::or(b, a))
    }

    pub fn implies(a: Ltl, b: Ltl) -> Ltl {
        Ltl::or(a.negate(), b)
    }

    pub fn negate(&self) -> Ltl {
        match self {
            Ltl::Prop(e) => Ltl::Prop(Expr::not(e.clone())),
            Ltl::And(a, b) => Ltl::or(a.negate(), b.negate()),
            Ltl::Or(a, b) => Ltl::and(a.negate(), b.negate()),
            Ltl::Next(a) => Ltl::next(a.negate()),
            Ltl::Until(a, b) => Ltl::release(a.negate(), b.negate()),
            Ltl::Release(a, b) => Ltl::until(a.negate(), b.negate()),
        }
    }
}

impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ltl::Prop(e) => write!(f, "({})", pretty_expr(e)),
            Ltl::And(a, b) => write!(f, "({a} & {b})"),
            Ltl::Or(a, b) => write!(f, "({a} | {b})"),
            Ltl::Next(a) => write!(f, "X {a}"),
            Ltl::Until(a, b) => write!(f, "({a} U {b})"),
            Ltl::Release(a, b) => write!(f, "({a} R {b})"),
        }
    }
}

/// The intended meaning of a pattern instance.
pub fn pattern_ltl(inst: &PatternInstance) -> Ltl {
    let p = || Ltl::prop(inst.param("p").clone());
    let q_open = || Ltl::prop(Expr::and(inst.param("q").clone(), Expr::not(inst.param("r").clone())));
    let r = || Ltl::prop(inst.param("r").clone());
    match inst.pattern {
        PatternId::P26 => Ltl::globally(Ltl::implies(p(), Ltl::eventually(Ltl::prop(inst.param("s").clone())))),
        PatternId::P20 => Ltl::globally(Ltl::implies(q_open(), Ltl::weak_until(p(), r()))),
        PatternId::P09 => {
            let witness = Ltl::prop(Expr::and(inst.param("p").clone(), Expr::not(inst.param("r").clone())));
            let body = Ltl::until(r().negate(), witness);
            Ltl::globally(Ltl::implies(Ltl::and(q_open(), Ltl::eventually(r())), body))
        }
        PatternId::P15 => {
            let k = inst.bound.unwrap_or(1);
            let mut a = Ltl::until(p().negate(), r());
            for _ in 0..k {
                a = Ltl::until(p().negate(), Ltl::or(r(), Ltl::and(p(), Ltl::next(a))));
            }
            Ltl::globally(Ltl::implies(Ltl::and(q_open(), Ltl::eventually(r())), a))
        }
    }
}

/// Letters are bitmasks over the atoms: bit `i` set means atom `i` holds.
pub type Letter = u32;

/// Evaluates propositional expressions over atoms.
pub struct Alphabet {
    pub atoms: Vec<String>,
    table: VarList,
}

impl Alphabet {
    pub fn new(atoms: &[&str]) -> Alphabet {
        let table = VarList(atoms.iter().map(|a| (a.to_string(), Domain::Boolean)).collect());
        Alphabet { atoms: atoms.iter().map(|a| a.to_string()).collect(), table }
    }

    pub fn size(&self) -> u32 {
        1 << self.atoms.len()
    }

    pub fn values(&self, l: Letter) -> Vec<usize> {
        (0..self.atoms.len()).map(|i| (l >> i & 1) as usize).collect()
    }

    pub fn compile(&self, e: &Expr) -> Compiled {
        Compiled::new(e, &self.table).unwrap_or_else(|m| panic!("proposition over unknown atoms: {m}"))
    }

    pub fn show(&self, l: Letter) -> String {
        let parts: Vec<String> =
            self.atoms.iter().enumerate().map(|(i, a)| if l >> i & 1 == 1 { a.clone() } else { format!("!{a}") }).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// Truth of `f` at every position of the lasso `prefix · cycle^ω`.
pub fn eval_lasso(f: &Ltl, alpha: &Alphabet, prefix: &[Letter], cycle: &[Letter]) -> Vec<bool> {
    assert!(!cycle.is_empty(), "lasso needs a non-empty cycle");
    let word: Vec<Letter> = prefix.iter().chain(cycle).copied().collect();
    let n = word.len();
    let succ = |i: usize| if i + 1 < n { i + 1 } else { prefix.len() };
    fn go(f: &Ltl, alpha: &Alphabet, word: &[Letter], succ: &dyn Fn(usize) -> usize) -> Vec<bool> {
        let n = word.len();
        match f {
            Ltl::Prop(e) => {
                let c = alpha.compile(e);
                word.iter().map(|&l| c.eval(&alpha.values(l), None)).collect()
            }
            Ltl::And(a, b) => {
                let (a, b) = (go(a, alpha, word, succ), go(b, alpha, word, succ));
                a.iter().zip(&b).map(|(x, y)| *x && *y).collect()
            }
            Ltl::Or(a, b) => {
                let (a, b) = (go(a, alpha, word, succ), go(b, alpha, word, succ));
                a.iter().zip(&b).map(|(x, y)| *x || *y).collect()
            }
            Ltl::Next(a) => {
                let a = go(a, alpha, word, succ);
                (0..n).map(|i| a[succ(i)]).collect()
            }
            Ltl::Until(a, b) | Ltl::Release(a, b) => {
                let until = matches!(f, Ltl::Until(..));
                let (a, b) = (go(a, alpha, word, succ), go(b, alpha, word, succ));
                let mut v = vec![!until; n];
                for _ in 0..=n {
                    v = (0..n)
                        .map(|i| if until { b[i] || (a[i] && v[succ(i)]) } else { b[i] && (a[i] || v[succ(i)]) })
                        .collect();
                }
                v
            }
        }
    }
    go(f, alpha, &word, &succ)
}

enum Node {
    Prop(Compiled),
    And(usize, usize),
    Or(usize, usize),
    /// Elementary slot.
    Next(usize),
    Until(usize, usize, usize),
    Release(usize, usize, usize),
}

/// Generalized Büchi automaton from the classic tableau: a state is a letter
/// together with a valuation of the elementary `X` formulas.
pub struct Tableau {
    pub num_states: usize,
    pub letters: u32,
    /// Elementary valuation and letter of each state.
    pub state: Vec<(u32, Letter)>,
    pub initial: Vec<usize>,
    /// One acceptance set per `U` subformula.
    pub fairness: Vec<Vec<bool>>,
    succ_bucket: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn new(f: &Ltl, alpha: &Alphabet) -> Tableau {
        let mut nodes = vec![];
        let mut bodies = vec![];
        let root = flatten(f, alpha, &mut nodes, &mut bodies);
        let elems = bodies.len();
        assert!(elems <= 20, "formula too large for the tableau");
        let letters = alpha.size();
        let mut state = vec![];
        let mut sat_root = vec![];
        let mut body_mask = vec![];
        let untils: Vec<(usize, usize)> = nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| if let Node::Until(_, b, _) = n { Some((i, *b)) } else { None })
            .collect();
        let mut fairness = vec![vec![]; untils.len()];
        for v in 0..(1u32 << elems) {
            for l in 0..letters {
                let sat = evaluate(&nodes, alpha, v, l);
                state.push((v, l));
                sat_root.push(sat[root]);
                body_mask.push(bodies.iter().enumerate().fold(0u32, |m, (k, &b)| m | (sat[b] as u32) << k));
                for (k, &(u, b)) in untils.iter().enumerate() {
                    fairness[k].push(!sat[u] || sat[b]);
                }
            }
        }
        let num_states = state.len();
        let mut succ_bucket = vec![vec![]; 1 << elems];
        for s in 0..num_states {
            succ_bucket[body_mask[s] as usize].push(s);
        }
        let initial = (0..num_states).filter(|&s| sat_root[s]).collect();
        Tableau { num_states, letters, state, initial, fairness, succ_bucket }
    }

    pub fn successors(&self, s: usize) -> &[usize] {
        &self.succ_bucket[self.state[s].0 as usize]
    }

    pub fn letter(&self, s: usize) -> Letter {
        self.state[s].1
    }
}

fn flatten(f: &Ltl, alpha: &Alphabet, nodes: &mut Vec<Node>, bodies: &mut Vec<usize>) -> usize {
    let node = match f {
        Ltl::Prop(e) => Node::Prop(alpha.compile(e)),
        Ltl::And(a, b) => Node::And(flatten(a, alpha, nodes, bodies), flatten(b, alpha, nodes, bodies)),
        Ltl::Or(a, b) => Node::Or(flatten(a, alpha, nodes, bodies), flatten(b, alpha, nodes, bodies)),
        Ltl::Next(a) => {
            let a = flatten(a, alpha, nodes, bodies);
            bodies.push(a);
            Node::Next(bodies.len() - 1)
        }
        Ltl::Until(a, b) | Ltl::Release(a, b) => {
            let (a, b) = (flatten(a, alpha, nodes, bodies), flatten(b, alpha, nodes, bodies));
            // the elementary formula X(self): its body is this node
            bodies.push(nodes.len());
            let slot = bodies.len() - 1;
            if matches!(f, Ltl::Until(..)) {
                Node::Until(a, b, slot)
            } else {
                Node::Release(a, b, slot)
            }
        }
    };
    nodes.push(node);
    nodes.len() - 1
}

fn evaluate(nodes: &[Node], alpha: &Alphabet, v: u32, l: Letter) -> Vec<bool> {
    let values = alpha.values(l);
    let mut sat = Vec::with_capacity(nodes.len());
    for n in nodes {
        let x = match n {
            Node::Prop(c) => c.eval(&values, None),
            Node::And(a, b) => sat[*a] && sat[*b],
            Node::Or(a, b) => sat[*a] || sat[*b],
            Node::Next(k) => v >> k & 1 == 1,
            Node::Until(a, b, k) => sat[*b] || (sat[*a] && v >> k & 1 == 1),
            Node::Release(a, b, k) => sat[*b] && (sat[*a] || v >> k & 1 == 1),
        };
        sat.push(x);
    }
    sat
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_expr;

    fn p(s: &str) -> Ltl {
        Ltl::prop(parse_expr(s).unwrap())
    }

    #[test]
    fn lasso_semantics() {
        let alpha = Alphabet::new(&["a", "b"]);
        // a at 0 only, then b forever
        let f = Ltl::globally(Ltl::implies(p("a"), Ltl::eventually(p("b"))));
        assert!(eval_lasso(&f, &alpha, &[0b01], &[0b10])[0]);
        assert!(!eval_lasso(&f, &alpha, &[0b01], &[0b00])[0]);
        let w = Ltl::weak_until(p("a"), p("b"));
        assert!(eval_lasso(&w, &alpha, &[], &[0b01])[0]);
        assert!(!eval_lasso(&Ltl::until(p("a"), p("b")), &alpha, &[], &[0b01])[0]);
        assert!(eval_lasso(&Ltl::next(p("b")), &alpha, &[0b00], &[0b10])[0]);
    }

    #[test]
    fn tableau_initial_states_match_lasso_semantics_on_single_letters() {
        let alpha = Alphabet::new(&["a", "b"]);
        let f = Ltl::until(p("a"), p("b"));
        let t = Tableau::new(&f, &alpha);
        assert_eq!(t.fairness.len(), 1);
        // letters satisfying b are initial with any obligation
        assert!(t.initial.iter().any(|&s| t.letter(s) == 0b10));
        assert!(!t.initial.iter().any(|&s| t.letter(s) == 0b00));
    }
}
