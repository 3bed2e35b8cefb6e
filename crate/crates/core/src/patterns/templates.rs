//! GR(1) templates for the supported specification patterns.
//!
//! Every template is a deterministic monitor variable `m` whose next value is
//! a function of its current value and the current values of the pattern
//! parameters, plus one justice requirement. The safety patterns (P09, P15,
//! P20) use an absorbing `sink` value that is entered exactly when the
//! observed prefix violates the pattern; their justice is `m != sink`.

use crate::lang::ast::*;

/// Result of compiling one pattern instance (or one past operator).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TemplateExpansion {
    pub new_aux_vars: Vec<VarDecl>,
    pub initial: Vec<Expr>,
    pub safety: Vec<Expr>,
    pub justice: Vec<Expr>,
    /// Predicate over the current state that holds once the pattern has been
    /// violated irrecoverably (the monitor is in, or is about to enter, its
    /// sink). `None` for pure liveness monitors.
    pub violation: Option<Expr>,
}

impl TemplateExpansion {
    pub fn extend(&mut self, other: TemplateExpansion) {
        self.new_aux_vars.extend(other.new_aux_vars);
        self.initial.extend(other.initial);
        self.safety.extend(other.safety);
        self.justice.extend(other.justice);
        if self.violation.is_none() {
            self.violation = other.violation;
        }
    }
}

fn is(m: &str, v: &str) -> Expr {
    Expr::eq(Expr::id(m), Expr::id(v))
}

fn becomes(m: &str, v: &str) -> Expr {
    Expr::eq(Expr::next(Expr::id(m)), Expr::id(v))
}

/// `if g1 then v1 elif g2 then v2 ... else default` as a single safety body.
fn cascade(m: &str, rules: &[(Expr, String)], default: &str) -> Expr {
    let mut out = becomes(m, default);
    for (guard, v) in rules.iter().rev() {
        out = Expr::and(
            Expr::imp(guard.clone(), becomes(m, v)),
            Expr::imp(Expr::not(guard.clone()), out),
        );
    }
    out
}

/// Holds exactly when the cascade sends `m` to `sink` next.
fn entering_sink(rules: &[(Expr, String)]) -> Expr {
    let mut out = Expr::Bool(false);
    for (guard, v) in rules.iter().rev() {
        let hit = Expr::Bool(v == "sink");
        out = Expr::or(Expr::and(guard.clone(), hit), Expr::and(Expr::not(guard.clone()), out));
    }
    out
}

fn enum_monitor(name: String, values: Vec<String>, rules: Vec<(Expr, String)>) -> TemplateExpansion {
    let decl = VarDecl {
        name: name.clone(),
        domain: Domain::Enumeration(values),
        owner: Owner::Aux,
        span: Span::default(),
    };
    TemplateExpansion {
        initial: vec![is(&name, "idle")],
        safety: vec![cascade(&name, &rules, "idle")],
        justice: vec![Expr::Neq(Box::new(Expr::id(&name)), Box::new(Expr::id("sink")))],
        violation: Some(Expr::or(is(&name, "sink"), entering_sink(&rules))),
        new_aux_vars: vec![decl],
    }
}

/// Compile a pattern instance whose parameters are free of temporal operators.
/// `fresh` maps a hint to an unused identifier.
pub fn expand_pattern(inst: &PatternInstance, fresh: &mut dyn FnMut(&str) -> String) -> TemplateExpansion {
    let p = inst.param("p").clone();
    match inst.pattern {
        PatternId::P26 => {
            // pending' <-> ((pending | p) & !s)
            let s = inst.param("s").clone();
            let m = fresh("p26");
            let pending = Expr::id(&m);
            TemplateExpansion {
                new_aux_vars: vec![VarDecl {
                    name: m.clone(),
                    domain: Domain::Boolean,
                    owner: Owner::Aux,
                    span: Span::default(),
                }],
                initial: vec![Expr::not(pending.clone())],
                safety: vec![Expr::iff(
                    Expr::next(pending.clone()),
                    Expr::and(Expr::or(pending.clone(), p), Expr::not(s)),
                )],
                justice: vec![Expr::not(pending)],
                violation: None,
            }
        }
        PatternId::P20 => {
            let (q, r) = (inst.param("q").clone(), inst.param("r").clone());
            let m = fresh("p20");
            let scope = Expr::or(is(&m, "active"), Expr::and(q, Expr::not(r.clone())));
            let open = Expr::and(scope, Expr::not(r));
            let rules = vec![
                (is(&m, "sink"), "sink".into()),
                (Expr::and(open.clone(), Expr::not(p)), "sink".into()),
                (open, "active".into()),
            ];
            enum_monitor(m, vec!["idle".into(), "active".into(), "sink".into()], rules)
        }
        PatternId::P09 => {
            let (q, r) = (inst.param("q").clone(), inst.param("r").clone());
            let m = fresh("p09");
            let armed = Expr::or(is(&m, "armed"), q);
            let rules = vec![
                (is(&m, "sink"), "sink".into()),
                (Expr::and(r.clone(), is(&m, "armed")), "sink".into()),
                (r, "idle".into()),
                (Expr::and(armed.clone(), p), "idle".into()),
                (armed, "armed".into()),
            ];
            enum_monitor(m, vec!["idle".into(), "armed".into(), "sink".into()], rules)
        }
        PatternId::P15 => {
            let (q, r) = (inst.param("q").clone(), inst.param("r").clone());
            let k = inst.bound.unwrap_or(1) as usize;
            let m = fresh("p15");
            let count = |i: usize| if i > k { "over".to_string() } else { format!("c{i}") };
            let mut rules = vec![
                (is(&m, "sink"), "sink".to_string()),
                (Expr::and(is(&m, "over"), r.clone()), "sink".into()),
                (is(&m, "over"), "over".into()),
            ];
            for i in 0..=k {
                let here = is(&m, &count(i));
                rules.push((Expr::and(here.clone(), r.clone()), "idle".into()));
                rules.push((Expr::and(here.clone(), p.clone()), count(i + 1)));
                rules.push((here, count(i)));
            }
            let trigger = Expr::and(q, Expr::not(r));
            rules.push((Expr::and(trigger.clone(), p), count(1)));
            rules.push((trigger, count(0)));
            let mut values = vec!["idle".to_string()];
            values.extend((0..=k).map(count));
            values.extend(["over".to_string(), "sink".to_string()]);
            enum_monitor(m, values, rules)
        }
    }
}

/// One catalog entry for `patterns list`.
pub struct CatalogEntry {
    pub id: PatternId,
    pub name: &'static str,
    pub syntax: &'static str,
    pub ltl: &'static str,
    pub template: &'static str,
}

pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            id: PatternId::P09,
            name: "existence, between q and r",
            syntax: "(p) becomes true between (q) and (r);",
            ltl: "G((q & !r & F r) -> (!r U (p & !r)))",
            template: "monitor {idle, armed, sink} (2 bits); 1 initial, 1 safety, 1 justice (m != sink)",
        },
        CatalogEntry {
            id: PatternId::P15,
            name: "bounded existence (at most k), between q and r",
            syntax: "(p) occurs at most k times between (q) and (r);",
            ltl: "G((q & !r & F r) -> A_k), A_0 = !p U r, A_i = !p U (r | (p & X A_(i-1)))",
            template: "monitor {idle, c0..ck, over, sink} (ceil(log2(k+4)) bits); 1 initial, 1 safety, 1 justice (m != sink)",
        },
        CatalogEntry {
            id: PatternId::P20,
            name: "universality, after q until r",
            syntax: "Globally (p) after (q) until (r);",
            ltl: "G((q & !r) -> (p W r))",
            template: "monitor {idle, active, sink} (2 bits); 1 initial, 1 safety, 1 justice (m != sink)",
        },
        CatalogEntry {
            id: PatternId::P26,
            name: "response, globally",
            syntax: "Globally (p) leads to (s);",
            ltl: "G(p -> F s)",
            template: "pending bit (1 bit); 1 initial, 1 safety, 1 justice (!pending)",
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counter() -> impl FnMut(&str) -> String {
        let mut n = 0;
        move |hint: &str| {
            n += 1;
            format!("aux_{hint}_{n}")
        }
    }

    fn inst(id: PatternId, bound: Option<u32>) -> PatternInstance {
        let names: &[&str] = if id == PatternId::P26 { &["p", "s"] } else { &["p", "q", "r"] };
        PatternInstance {
            pattern: id,
            params: names.iter().map(|n| (n.to_string(), Expr::id(*n))).collect(),
            bound,
        }
    }

    #[test]
    fn shapes() {
        let mut fresh = counter();
        let e = expand_pattern(&inst(PatternId::P26, None), &mut fresh);
        assert_eq!((e.new_aux_vars.len(), e.initial.len(), e.safety.len(), e.justice.len()), (1, 1, 1, 1));
        assert_eq!(e.new_aux_vars[0].name, "aux_p26_1");
        let bits = |id, b| {
            let e = expand_pattern(&inst(id, b), &mut counter());
            e.new_aux_vars.iter().map(|v| v.domain.bits()).sum::<usize>()
        };
        assert_eq!(bits(PatternId::P26, None), 1);
        assert_eq!(bits(PatternId::P09, None), 2);
        assert_eq!(bits(PatternId::P20, None), 2);
        assert_eq!(bits(PatternId::P15, Some(2)), 3);
        assert_eq!(bits(PatternId::P15, Some(5)), 4);
        for id in PatternId::ALL {
            let e = expand_pattern(&inst(id, Some(2)), &mut counter());
            assert_eq!(e.justice.len(), 1);
            assert!(e.new_aux_vars.iter().all(|v| v.name.starts_with("aux_")));
        }
    }
}
