//! Language equivalence between a pattern's GR(1) template (with its monitor
//! variables projected away) and the pattern's LTL meaning, over a small
//! alphabet of boolean atoms.
//!
//! The template is read as a deterministic Büchi automaton over monitor
//! valuations. Inclusion in both directions is decided exactly with product
//! constructions against the tableau of the formula or of its negation; a
//! bounded lasso enumeration evaluated directly on both sides serves as an
//! independent cross-check.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use super::ltl::{eval_lasso, pattern_ltl, Alphabet, Letter, Ltl, Tableau};
use super::templates::{expand_pattern, TemplateExpansion};
use crate::eval::{Compiled, VarList};
use crate::graph::{bfs_path, is_nontrivial, sccs};
use crate::lang::ast::{Domain, PatternInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// The template accepts a word that violates the formula.
    TemplateTooWeak,
    /// The template rejects a word that satisfies the formula.
    TemplateTooStrong,
}

/// A distinguishing lasso `prefix · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub direction: Direction,
    pub atoms: Vec<String>,
    pub prefix: Vec<Letter>,
    pub cycle: Vec<Letter>,
}

impl Counterexample {
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether `atom` holds at position `i` of the infinite word.
    pub fn holds(&self, atom: &str, i: usize) -> bool {
        let k = self.atoms.iter().position(|a| a == atom).expect("known atom");
        let l = if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        };
        l >> k & 1 == 1
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alpha = Alphabet::new(&self.atoms.iter().map(String::as_str).collect::<Vec<_>>());
        let show = |w: &[Letter]| w.iter().map(|&l| alpha.show(l)).collect::<Vec<_>>().join(" ");
        let what = match self.direction {
            Direction::TemplateTooWeak => "template accepts a violating word",
            Direction::TemplateTooStrong => "template rejects a satisfying word",
        };
        write!(f, "{what}: {} ({})^w", show(&self.prefix), show(&self.cycle))
    }
}

const DEAD: usize = usize::MAX;

/// The template read as an automaton: states are monitor valuations.
struct TemplateAutomaton {
    letters: u32,
    /// `init[l]`: initial monitor state when the first letter is `l`.
    init: Vec<Option<usize>>,
    /// `delta[a][l]`: successor or `DEAD`.
    delta: Vec<Vec<usize>>,
    accept: Vec<Vec<bool>>,
}

fn valuations(domains: &[Domain]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for d in domains {
        out = out.into_iter().flat_map(|p| (0..d.size()).map(move |v| [p.clone(), vec![v]].concat())).collect();
    }
    out
}

impl TemplateAutomaton {
    fn new(exp: &TemplateExpansion, alpha: &Alphabet) -> TemplateAutomaton {
        let domains: Vec<Domain> = exp.new_aux_vars.iter().map(|v| v.domain.clone()).collect();
        let mut table: Vec<(String, Domain)> =
            exp.new_aux_vars.iter().map(|v| (v.name.clone(), v.domain.clone())).collect();
        table.extend(alpha.atoms.iter().map(|a| (a.clone(), Domain::Boolean)));
        let table = VarList(table);
        let compile = |es: &[crate::lang::ast::Expr]| -> Vec<Compiled> {
            es.iter().map(|e| Compiled::new(e, &table).expect("template resolves")).collect()
        };
        let (init_c, safe_c, just_c) = (compile(&exp.initial), compile(&exp.safety), compile(&exp.justice));
        assert!(just_c.len() <= 1, "templates carry at most one justice");
        let states = valuations(&domains);
        let letters = alpha.size();
        let full = |a: &[usize], l: Letter| [a.to_vec(), alpha.values(l)].concat();
        let pick = |cands: Vec<usize>, what: &str| -> Option<usize> {
            assert!(cands.len() <= 1, "template is not deterministic ({what})");
            cands.first().copied()
        };
        let init = (0..letters)
            .map(|l| {
                let c = (0..states.len()).filter(|&a| init_c.iter().all(|c| c.eval(&full(&states[a], l), None)));
                pick(c.collect(), "initial")
            })
            .collect();
        let mut delta = vec![];
        let mut accept = vec![];
        for a in &states {
            let mut row = vec![];
            let mut acc = vec![];
            for l in 0..letters {
                let cur = full(a, l);
                let c = (0..states.len()).filter(|&b| {
                    let next = full(&states[b], l);
                    safe_c.iter().all(|c| c.eval(&cur, Some(&next)))
                });
                row.push(pick(c.collect(), "step").unwrap_or(DEAD));
                acc.push(just_c.iter().all(|c| c.eval(&cur, None)));
            }
            delta.push(row);
            accept.push(acc);
        }
        TemplateAutomaton { letters, init, delta, accept }
    }

    fn accepts_lasso(&self, prefix: &[Letter], cycle: &[Letter]) -> bool {
        let Some(mut a) = self.init[*prefix.first().unwrap_or(&cycle[0]) as usize] else { return false };
        for &l in prefix {
            a = self.delta[a][l as usize];
            if a == DEAD {
                return false;
            }
        }
        // iterate the cycle until the state at its start repeats
        let mut seen: Vec<usize> = vec![];
        let mut hits: Vec<bool> = vec![];
        loop {
            if let Some(k) = seen.iter().position(|&s| s == a) {
                return hits[k..].iter().any(|h| *h);
            }
            seen.push(a);
            let mut hit = false;
            for &l in cycle {
                hit |= self.accept[a][l as usize];
                a = self.delta[a][l as usize];
                if a == DEAD {
                    return false;
                }
            }
            hits.push(hit);
        }
    }
}

/// Explicit product of the template with a tableau; nodes are
/// `(monitor state or DEAD, tableau state)`, restricted to reachable ones.
struct Product {
    nodes: Vec<(usize, usize)>,
    succ: Vec<Vec<usize>>,
    initial: Vec<usize>,
}

impl Product {
    fn new(t: &TemplateAutomaton, tab: &Tableau, with_dead: bool) -> Product {
        let mut index: FxHashMap<(usize, usize), usize> = FxHashMap::default();
        let mut nodes = vec![];
        let mut initial = vec![];
        let mut add = |key: (usize, usize), nodes: &mut Vec<(usize, usize)>| -> usize {
            *index.entry(key).or_insert_with(|| {
                nodes.push(key);
                nodes.len() - 1
            })
        };
        for &s in &tab.initial {
            match t.init[tab.letter(s) as usize] {
                Some(a) => initial.push(add((a, s), &mut nodes)),
                None if with_dead => initial.push(add((DEAD, s), &mut nodes)),
                None => {}
            }
        }
        initial.sort_unstable();
        initial.dedup();
        let mut succ = vec![];
        let mut k = 0;
        while k < nodes.len() {
            let (a, s) = nodes[k];
            let a2 = if a == DEAD { DEAD } else { t.delta[a][tab.letter(s) as usize] };
            let mut out = vec![];
            if a2 != DEAD || with_dead {
                for &s2 in tab.successors(s) {
                    out.push(add((a2, s2), &mut nodes));
                }
            }
            succ.push(out);
            k += 1;
        }
        Product { nodes, succ, initial }
    }

    /// A lasso through a nontrivial component of the `keep` subgraph that
    /// meets every requirement.
    fn find_lasso(
        &self,
        tab: &Tableau,
        keep: &dyn Fn(usize) -> bool,
        reqs: &[Box<dyn Fn(usize) -> bool + '_>],
    ) -> Option<(Vec<Letter>, Vec<Letter>)> {
        let succ = |v: usize| self.succ[v].clone();
        for comp in sccs(self.nodes.len(), &succ, keep) {
            if !is_nontrivial(&comp, &succ) || !reqs.iter().all(|r| comp.iter().any(|&v| r(v))) {
                continue;
            }
            let mut in_comp = vec![false; self.nodes.len()];
            comp.iter().for_each(|&v| in_comp[v] = true);
            let prefix = bfs_path(&self.initial, &succ, &|_| true, &|v| in_comp[v], false).expect("component is reachable");
            let entry = *prefix.last().unwrap();
            let mut cycle = vec![entry];
            for r in reqs {
                let here = *cycle.last().unwrap();
                if r(here) {
                    continue;
                }
                let seg = bfs_path(&[here], &succ, &|v| in_comp[v], &|v| r(v), false).expect("inside component");
                cycle.extend(&seg[1..]);
            }
            let here = *cycle.last().unwrap();
            let back = bfs_path(&[here], &succ, &|v| in_comp[v], &|v| v == entry, true).expect("component cycle");
            cycle.extend(&back[1..]);
            cycle.pop();
            let letter = |v: &usize| tab.letter(self.nodes[*v].1);
            let pre = prefix[..prefix.len() - 1].iter().map(letter).collect();
            return Some((pre, cycle.iter().map(letter).collect()));
        }
        None
    }
}

/// Distinguishing lasso between `exp` and `phi`, if any.
pub fn compare(exp: &TemplateExpansion, phi: &Ltl, alpha: &Alphabet) -> Option<Counterexample> {
    let t = TemplateAutomaton::new(exp, alpha);
    let cex = |direction, (prefix, cycle): (Vec<Letter>, Vec<Letter>)| Counterexample {
        direction,
        atoms: alpha.atoms.clone(),
        prefix,
        cycle,
    };
    // template words violating phi
    let neg = Tableau::new(&phi.negate(), alpha);
    let prod = Product::new(&t, &neg, false);
    let nodes = &prod.nodes;
    let mut reqs: Vec<Box<dyn Fn(usize) -> bool>> = vec![];
    reqs.push(Box::new(|v| {
        let (a, s) = nodes[v];
        t.accept[a][neg.letter(s) as usize]
    }));
    for f in &neg.fairness {
        reqs.push(Box::new(move |v| f[nodes[v].1]));
    }
    if let Some(w) = prod.find_lasso(&neg, &|_| true, &reqs) {
        return Some(shorten(cex(Direction::TemplateTooWeak, w), exp, phi, alpha));
    }
    // phi words the template rejects: eventually only non-accepting template steps
    let pos = Tableau::new(phi, alpha);
    let prod = Product::new(&t, &pos, true);
    let nodes = &prod.nodes;
    let reject = |v: usize| {
        let (a, s) = nodes[v];
        a == DEAD || !t.accept[a][pos.letter(s) as usize]
    };
    let reqs: Vec<Box<dyn Fn(usize) -> bool>> =
        pos.fairness.iter().map(|f| Box::new(move |v: usize| f[nodes[v].1]) as Box<dyn Fn(usize) -> bool>).collect();
    prod.find_lasso(&pos, &reject, &reqs)
        .map(|w| shorten(cex(Direction::TemplateTooStrong, w), exp, phi, alpha))
}

fn distinguishes(t: &TemplateAutomaton, phi: &Ltl, alpha: &Alphabet, prefix: &[Letter], cycle: &[Letter]) -> Option<Direction> {
    let sat = eval_lasso(phi, alpha, prefix, cycle)[0];
    match (t.accepts_lasso(prefix, cycle), sat) {
        (true, false) => Some(Direction::TemplateTooWeak),
        (false, true) => Some(Direction::TemplateTooStrong),
        _ => None,
    }
}

/// All lassos with `prefix + cycle` of the given total length.
fn lassos(letters: u32, len: usize) -> impl Iterator<Item = (Vec<Letter>, Vec<Letter>)> {
    let words = (letters as u64).pow(len as u32);
    (0..words).flat_map(move |code| {
        let mut w = Vec::with_capacity(len);
        let mut c = code;
        for _ in 0..len {
            w.push((c % letters as u64) as Letter);
            c /= letters as u64;
        }
        (0..len).map(move |split| (w[..split].to_vec(), w[split..].to_vec()))
    })
}

/// Replace a counterexample by a shortest one when that is cheap to find.
fn shorten(found: Counterexample, exp: &TemplateExpansion, phi: &Ltl, alpha: &Alphabet) -> Counterexample {
    let t = TemplateAutomaton::new(exp, alpha);
    assert_eq!(
        distinguishes(&t, phi, alpha, &found.prefix, &found.cycle),
        Some(found.direction),
        "product lasso does not distinguish; automaton construction is inconsistent"
    );
    for len in 1..found.len().min(5) {
        for (prefix, cycle) in lassos(t.letters, len) {
            if let Some(direction) = distinguishes(&t, phi, alpha, &prefix, &cycle) {
                return Counterexample { direction, atoms: alpha.atoms.clone(), prefix, cycle };
            }
        }
    }
    found
}

/// Direct comparison on every lasso up to length `exhaustive`, then on
/// `samples` random lassos up to length `bound`.
pub fn bounded_check(
    exp: &TemplateExpansion,
    phi: &Ltl,
    alpha: &Alphabet,
    exhaustive: usize,
    bound: usize,
    samples: usize,
    seed: u64,
) -> Option<Counterexample> {
    let t = TemplateAutomaton::new(exp, alpha);
    let found = |direction, prefix, cycle| Counterexample { direction, atoms: alpha.atoms.clone(), prefix, cycle };
    for len in 1..=exhaustive {
        for (prefix, cycle) in lassos(t.letters, len) {
            if let Some(d) = distinguishes(&t, phi, alpha, &prefix, &cycle) {
                return Some(found(d, prefix, cycle));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let len = rng.gen_range(1..=bound);
        let split = rng.gen_range(0..len);
        let w: Vec<Letter> = (0..len).map(|_| rng.gen_range(0..t.letters)).collect();
        let (prefix, cycle) = (w[..split].to_vec(), w[split..].to_vec());
        if let Some(d) = distinguishes(&t, phi, alpha, &prefix, &cycle) {
            return Some(found(d, prefix, cycle));
        }
    }
    None
}

/// Check the template of `inst` against its LTL meaning over `atoms`. The
/// product check is exact for words of any length; `lasso_bound` limits the
/// additional direct lasso cross-check.
pub fn check_template_equivalence(inst: &PatternInstance, atoms: &[&str], lasso_bound: usize) -> Result<(), Counterexample> {
    let mut n = 0;
    let exp = expand_pattern(inst, &mut |hint| {
        n += 1;
        format!("aux_{hint}_{n}")
    });
    check_expansion(inst, &exp, atoms, lasso_bound)
}

/// Like [`check_template_equivalence`] for a given (possibly altered) expansion.
pub fn check_expansion(
    inst: &PatternInstance,
    exp: &TemplateExpansion,
    atoms: &[&str],
    lasso_bound: usize,
) -> Result<(), Counterexample> {
    let alpha = Alphabet::new(atoms);
    let phi = pattern_ltl(inst);
    if let Some(c) = compare(exp, &phi, &alpha) {
        return Err(c);
    }
    match bounded_check(exp, &phi, &alpha, lasso_bound.min(3), lasso_bound, 300, 7) {
        Some(c) => panic!("exact check passed but a bounded lasso distinguishes: {c}"),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::ast::{Expr, PatternId};
    use crate::lang::parse_expr;

    fn inst(id: PatternId, params: &[(&str, &str)], bound: Option<u32>) -> PatternInstance {
        PatternInstance {
            pattern: id,
            params: params.iter().map(|(k, v)| (k.to_string(), parse_expr(v).unwrap())).collect(),
            bound,
        }
    }

    const ATOMS: [&str; 3] = ["a", "b", "c"];

    #[test]
    fn response_template_is_exact() {
        let i = inst(PatternId::P26, &[("p", "a"), ("s", "b")], None);
        check_template_equivalence(&i, &ATOMS, 8).unwrap();
    }

    #[test]
    fn vacuous_response() {
        let i = inst(PatternId::P26, &[("p", "FALSE"), ("s", "b")], None);
        check_template_equivalence(&i, &ATOMS, 8).unwrap();
    }

    #[test]
    fn response_without_justice_is_too_weak() {
        let i = inst(PatternId::P26, &[("p", "a"), ("s", "b")], None);
        let mut exp = expand_pattern(&i, &mut |h| format!("aux_{h}"));
        exp.justice.clear();
        let c = check_expansion(&i, &exp, &["a", "b"], 8).unwrap_err();
        assert_eq!(c.direction, Direction::TemplateTooWeak);
        assert!((0..c.len() + c.cycle.len()).any(|k| c.holds("a", k)), "{c}");
        assert!((0..c.len() + c.cycle.len()).all(|k| !c.holds("b", k)), "{c}");
        assert!(c.len() <= 2, "{c}");
    }

    #[test]
    fn wrong_polarity_is_too_strong() {
        // a monitor demanding b at every a-step rejects words the response allows
        let i = inst(PatternId::P26, &[("p", "a"), ("s", "b")], None);
        let mut exp = expand_pattern(&i, &mut |h| format!("aux_{h}"));
        exp.justice = vec![Expr::Bool(false)];
        let c = check_expansion(&i, &exp, &["a", "b"], 8).unwrap_err();
        assert_eq!(c.direction, Direction::TemplateTooStrong);
    }

    #[test]
    fn scoped_patterns() {
        check_template_equivalence(&inst(PatternId::P20, &[("p", "a"), ("q", "b"), ("r", "c")], None), &ATOMS, 8).unwrap();
        check_template_equivalence(&inst(PatternId::P09, &[("p", "a"), ("q", "b"), ("r", "c")], None), &ATOMS, 8).unwrap();
        for k in 1..=3 {
            check_template_equivalence(&inst(PatternId::P15, &[("p", "a"), ("q", "b"), ("r", "c")], Some(k)), &ATOMS, 8)
                .unwrap();
        }
    }

    /// Monitor states along a word (`None` once the template blocks).
    fn run(t: &TemplateAutomaton, word: &[Letter]) -> Vec<Option<usize>> {
        let mut out = vec![];
        let mut a = t.init[word[0] as usize];
        for &l in word {
            out.push(a);
            a = a.map(|s| t.delta[s][l as usize]).filter(|&s| s != DEAD);
        }
        out
    }

    #[test]
    fn violation_predicate_fires_on_the_offending_letter() {
        // Globally (a) after (b) until (c): b without a or c breaks it at once
        let i = inst(PatternId::P20, &[("p", "a"), ("q", "b"), ("r", "c")], None);
        let exp = expand_pattern(&i, &mut |h| format!("aux_{h}"));
        let alpha = Alphabet::new(&ATOMS);
        let t = TemplateAutomaton::new(&exp, &alpha);
        let mut table: Vec<(String, Domain)> =
            exp.new_aux_vars.iter().map(|v| (v.name.clone(), v.domain.clone())).collect();
        table.extend(alpha.atoms.iter().map(|a| (a.clone(), Domain::Boolean)));
        let viol = Compiled::new(exp.violation.as_ref().unwrap(), &VarList(table)).unwrap();
        let states = valuations(&exp.new_aux_vars.iter().map(|v| v.domain.clone()).collect::<Vec<_>>());
        let letter = |v: [usize; 3]| (0..alpha.size()).find(|&l| alpha.values(l) == v).unwrap();
        let (ok, bad) = (letter([1, 1, 0]), letter([0, 1, 0]));
        let holds = |word: &[Letter]| {
            let a = run(&t, word).last().copied().flatten().unwrap();
            viol.eval(&[states[a].clone(), alpha.values(*word.last().unwrap())].concat(), None)
        };
        assert!(!holds(&[ok]));
        assert!(!holds(&[ok, ok]));
        assert!(holds(&[ok, bad]));
    }

    proptest::proptest! {
        /// Once the violation predicate holds on a prefix, no continuation
        /// satisfies the pattern.
        #[test]
        fn violation_predicate_is_sound(
            pattern in 0usize..3,
            seed in proptest::prelude::any::<u64>(),
            prefix in proptest::collection::vec(0u32..8, 1..6),
            cycle in proptest::collection::vec(0u32..8, 1..4),
        ) {
            use rand::SeedableRng;
            let id = [PatternId::P09, PatternId::P15, PatternId::P20][pattern];
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let i = crate::gen::random_instance(&mut rng, id, &ATOMS);
            let exp = expand_pattern(&i, &mut |h| format!("aux_{h}"));
            let alpha = Alphabet::new(&ATOMS);
            let t = TemplateAutomaton::new(&exp, &alpha);
            let mut table: Vec<(String, Domain)> =
                exp.new_aux_vars.iter().map(|v| (v.name.clone(), v.domain.clone())).collect();
            table.extend(alpha.atoms.iter().map(|a| (a.clone(), Domain::Boolean)));
            let viol = Compiled::new(exp.violation.as_ref().unwrap(), &VarList(table)).unwrap();
            let domains: Vec<Domain> = exp.new_aux_vars.iter().map(|v| v.domain.clone()).collect();
            let states = valuations(&domains);
            let violated = run(&t, &prefix).iter().zip(&prefix).any(|(a, &l)| {
                a.is_some_and(|a| viol.eval(&[states[a].clone(), alpha.values(l)].concat(), None))
            });
            if violated {
                let phi = pattern_ltl(&i);
                proptest::prop_assert!(!eval_lasso(&phi, &alpha, &prefix, &cycle)[0], "{:?}", i.params);
            }
        }
    }
}
