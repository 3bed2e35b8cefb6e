//! Reduced ordered binary decision diagrams.
//!
//! A [`BddManager`] owns a hash-consed node store. Variable ids double as
//! levels (no dynamic reordering), so the id order is the diagram order.
//! Handles ([`Bdd`]) are tagged with the id of the manager that produced
//! them; passing a handle to a different manager panics.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicU32, Ordering};

use rustc_hash::FxHashMap;

pub type VarId = u32;

const FALSE_NODE: u32 = 0;
const TRUE_NODE: u32 = 1;
const TERMINAL_VAR: u32 = u32::MAX;

/// Upper bound on the number of diagram variables (sets are `u128` masks).
pub const MAX_VARS: u32 = 128;

static NEXT_MANAGER_ID: AtomicU32 = AtomicU32::new(1);

/// Handle to a node inside a [`BddManager`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bdd {
    node: u32,
    mgr: u32,
}

impl Bdd {
    pub fn is_false(self) -> bool {
        self.node == FALSE_NODE
    }

    pub fn is_true(self) -> bool {
        self.node == TRUE_NODE
    }

    pub fn is_const(self) -> bool {
        self.node <= TRUE_NODE
    }

    /// Raw node index, stable for the lifetime of the manager.
    pub fn index(self) -> u32 {
        self.node
    }
}

/// A set of diagram variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VarSet(u128);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub fn from_vars<I: IntoIterator<Item = VarId>>(vars: I) -> Self {
        let mut s = VarSet(0);
        for v in vars {
            s.insert(v);
        }
        s
    }

    pub fn insert(&mut self, v: VarId) {
        assert!(v < MAX_VARS, "variable id {v} out of range");
        self.0 |= 1u128 << v;
    }

    pub fn contains(self, v: VarId) -> bool {
        v < MAX_VARS && self.0 & (1u128 << v) != 0
    }

    pub fn union(self, other: VarSet) -> VarSet {
        VarSet(self.0 | other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = VarId> {
        let bits = self.0;
        (0..MAX_VARS).filter(move |v| bits & (1u128 << v) != 0)
    }

    /// Number of members strictly below `v`.
    fn count_below(self, v: u32) -> u32 {
        if v >= MAX_VARS {
            self.0.count_ones()
        } else {
            (self.0 & ((1u128 << v) - 1)).count_ones()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    var: u32,
    lo: u32,
    hi: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Op {
    And,
    Or,
    Xor,
    Not,
    Ite,
    Exists,
    AndExists,
}

/// Binary operators accepted by [`BddManager::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    And,
    Or,
    Xor,
    Imp,
    Iff,
}

pub struct BddManager {
    id: u32,
    num_vars: u32,
    nodes: Vec<Node>,
    unique: FxHashMap<Node, u32>,
    cache: FxHashMap<(Op, u32, u32, u32), u32>,
    quant_cache: FxHashMap<(Op, u32, u32, u128), u32>,
    cache_enabled: bool,
}

impl BddManager {
    pub fn new(num_vars: u32) -> Self {
        assert!(num_vars <= MAX_VARS, "at most {MAX_VARS} variables supported");
        let terminal = |v| Node { var: TERMINAL_VAR, lo: v, hi: v };
        BddManager {
            id: NEXT_MANAGER_ID.fetch_add(1, Ordering::Relaxed),
            num_vars,
            nodes: vec![terminal(FALSE_NODE), terminal(TRUE_NODE)],
            unique: FxHashMap::default(),
            cache: FxHashMap::default(),
            quant_cache: FxHashMap::default(),
            cache_enabled: true,
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Total number of live nodes, terminals included.
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    /// Disable (or re-enable) the operation caches. Results must not change.
    pub fn set_cache_enabled(&mut self, enabled: bool) {
        self.cache_enabled = enabled;
        self.clear_caches();
    }

    pub fn clear_caches(&mut self) {
        self.cache.clear();
        self.quant_cache.clear();
    }

    #[inline]
    fn wrap(&self, node: u32) -> Bdd {
        Bdd { node, mgr: self.id }
    }

    #[inline]
    fn check(&self, b: Bdd) -> u32 {
        assert_eq!(b.mgr, self.id, "BDD handle used with a foreign manager");
        b.node
    }

    pub fn constant(&self, value: bool) -> Bdd {
        self.wrap(if value { TRUE_NODE } else { FALSE_NODE })
    }

    pub fn one(&self) -> Bdd {
        self.constant(true)
    }

    pub fn zero(&self) -> Bdd {
        self.constant(false)
    }

    #[inline]
    fn var_of(&self, n: u32) -> u32 {
        self.nodes[n as usize].var
    }

    fn mk(&mut self, var: u32, lo: u32, hi: u32) -> u32 {
        if lo == hi {
            return lo;
        }
        let node = Node { var, lo, hi };
        if let Some(&n) = self.unique.get(&node) {
            return n;
        }
        let n = self.nodes.len() as u32;
        self.nodes.push(node);
        self.unique.insert(node, n);
        n
    }

    pub fn var(&mut self, v: VarId) -> Bdd {
        assert!(v < self.num_vars, "variable {v} not declared");
        let n = self.mk(v, FALSE_NODE, TRUE_NODE);
        self.wrap(n)
    }

    pub fn nvar(&mut self, v: VarId) -> Bdd {
        assert!(v < self.num_vars, "variable {v} not declared");
        let n = self.mk(v, TRUE_NODE, FALSE_NODE);
        self.wrap(n)
    }

    pub fn literal(&mut self, v: VarId, value: bool) -> Bdd {
        if value {
            self.var(v)
        } else {
            self.nvar(v)
        }
    }

    /// Conjunction of literals.
    pub fn cube(&mut self, lits: &[(VarId, bool)]) -> Bdd {
        let mut sorted = lits.to_vec();
        sorted.sort_unstable_by_key(|l| std::cmp::Reverse(l.0));
        let mut acc = TRUE_NODE;
        for (v, val) in sorted {
            assert!(v < self.num_vars);
            acc = if val { self.mk(v, FALSE_NODE, acc) } else { self.mk(v, acc, FALSE_NODE) };
        }
        self.wrap(acc)
    }

    fn cache_get(&self, key: (Op, u32, u32, u32)) -> Option<u32> {
        if self.cache_enabled {
            self.cache.get(&key).copied()
        } else {
            None
        }
    }

    fn cache_put(&mut self, key: (Op, u32, u32, u32), r: u32) {
        if self.cache_enabled {
            self.cache.insert(key, r);
        }
    }

    pub fn not(&mut self, a: Bdd) -> Bdd {
        let a = self.check(a);
        let r = self.not_rec(a);
        self.wrap(r)
    }

    fn not_rec(&mut self, a: u32) -> u32 {
        match a {
            FALSE_NODE => return TRUE_NODE,
            TRUE_NODE => return FALSE_NODE,
            _ => {}
        }
        let key = (Op::Not, a, 0, 0);
        if let Some(r) = self.cache_get(key) {
            return r;
        }
        let Node { var, lo, hi } = self.nodes[a as usize];
        let l = self.not_rec(lo);
        let h = self.not_rec(hi);
        let r = self.mk(var, l, h);
        self.cache_put(key, r);
        r
    }

    pub fn and(&mut self, a: Bdd, b: Bdd) -> Bdd {
        self.apply(BinOp::And, a, b)
    }

    pub fn or(&mut self, a: Bdd, b: Bdd) -> Bdd {
        self.apply(BinOp::Or, a, b)
    }

    pub fn xor(&mut self, a: Bdd, b: Bdd) -> Bdd {
        self.apply(BinOp::Xor, a, b)
    }

    pub fn imp(&mut self, a: Bdd, b: Bdd) -> Bdd {
        self.apply(BinOp::Imp, a, b)
    }

    pub fn iff(&mut self, a: Bdd, b: Bdd) -> Bdd {
        self.apply(BinOp::Iff, a, b)
    }

    pub fn and_all<I: IntoIterator<Item = Bdd>>(&mut self, items: I) -> Bdd {
        let mut acc = self.one();
        for b in items {
            acc = self.and(acc, b);
        }
        acc
    }

    pub fn or_all<I: IntoIterator<Item = Bdd>>(&mut self, items: I) -> Bdd {
        let mut acc = self.zero();
        for b in items {
            acc = self.or(acc, b);
        }
        acc
    }

    pub fn apply(&mut self, op: BinOp, a: Bdd, b: Bdd) -> Bdd {
        let a = self.check(a);
        let b = self.check(b);
        let r = match op {
            BinOp::And => self.and_rec(a, b),
            BinOp::Or => self.or_rec(a, b),
            BinOp::Xor => self.xor_rec(a, b),
            BinOp::Imp => {
                let na = self.not_rec(a);
                self.or_rec(na, b)
            }
            BinOp::Iff => {
                let x = self.xor_rec(a, b);
                self.not_rec(x)
            }
        };
        self.wrap(r)
    }

    #[inline]
    fn split(&self, n: u32, top: u32) -> (u32, u32) {
        let node = self.nodes[n as usize];
        if node.var == top {
            (node.lo, node.hi)
        } else {
            (n, n)
        }
    }

    fn and_rec(&mut self, a: u32, b: u32) -> u32 {
        if a == FALSE_NODE || b == FALSE_NODE {
            return FALSE_NODE;
        }
        if a == TRUE_NODE {
            return b;
        }
        if b == TRUE_NODE || a == b {
            return a;
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let key = (Op::And, a, b, 0);
        if let Some(r) = self.cache_get(key) {
            return r;
        }
        let top = self.var_of(a).min(self.var_of(b));
        let (a0, a1) = self.split(a, top);
        let (b0, b1) = self.split(b, top);
        let lo = self.and_rec(a0, b0);
        let hi = self.and_rec(a1, b1);
        let r = self.mk(top, lo, hi);
        self.cache_put(key, r);
        r
    }

    fn or_rec(&mut self, a: u32, b: u32) -> u32 {
        if a == TRUE_NODE || b == TRUE_NODE {
            return TRUE_NODE;
        }
        if a == FALSE_NODE {
            return b;
        }
        if b == FALSE_NODE || a == b {
            return a;
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let key = (Op::Or, a, b, 0);
        if let Some(r) = self.cache_get(key) {
            return r;
        }
        let top = self.var_of(a).min(self.var_of(b));
        let (a0, a1) = self.split(a, top);
        let (b0, b1) = self.split(b, top);
        let lo = self.or_rec(a0, b0);
        let hi = self.or_rec(a1, b1);
        let r = self.mk(top, lo, hi);
        self.cache_put(key, r);
        r
    }

    fn xor_rec(&mut self, a: u32, b: u32) -> u32 {
        if a == b {
            return FALSE_NODE;
        }
        if a == FALSE_NODE {
            return b;
        }
        if b == FALSE_NODE {
            return a;
        }
        if a == TRUE_NODE {
            return self.not_rec(b);
        }
        if b == TRUE_NODE {
            return self.not_rec(a);
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let key = (Op::Xor, a, b, 0);
        if let Some(r) = self.cache_get(key) {
            return r;
        }
        let top = self.var_of(a).min(self.var_of(b));
        let (a0, a1) = self.split(a, top);
        let (b0, b1) = self.split(b, top);
        let lo = self.xor_rec(a0, b0);
        let hi = self.xor_rec(a1, b1);
        let r = self.mk(top, lo, hi);
        self.cache_put(key, r);
        r
    }

    pub fn ite(&mut self, c: Bdd, t: Bdd, e: Bdd) -> Bdd {
        let c = self.check(c);
        let t = self.check(t);
        let e = self.check(e);
        let r = self.ite_rec(c, t, e);
        self.wrap(r)
    }

    fn ite_rec(&mut self, c: u32, t: u32, e: u32) -> u32 {
        if c == TRUE_NODE || t == e {
            return t;
        }
        if c == FALSE_NODE {
            return e;
        }
        if t == TRUE_NODE && e == FALSE_NODE {
            return c;
        }
        if t == FALSE_NODE && e == TRUE_NODE {
            return self.not_rec(c);
        }
        let key = (Op::Ite, c, t, e);
        if let Some(r) = self.cache_get(key) {
            return r;
        }
        let top = self.var_of(c).min(self.var_of(t)).min(self.var_of(e));
        let (c0, c1) = self.split(c, top);
        let (t0, t1) = self.split(t, top);
        let (e0, e1) = self.split(e, top);
        let lo = self.ite_rec(c0, t0, e0);
        let hi = self.ite_rec(c1, t1, e1);
        let r = self.mk(top, lo, hi);
        self.cache_put(key, r);
        r
    }

    pub fn exists(&mut self, b: Bdd, vars: VarSet) -> Bdd {
        let b = self.check(b);
        if vars.is_empty() {
            return self.wrap(b);
        }
        let r = self.exists_rec(b, vars);
        self.wrap(r)
    }

    fn exists_rec(&mut self, b: u32, vars: VarSet) -> u32 {
        if b <= TRUE_NODE {
            return b;
        }
        let Node { var, lo, hi } = self.nodes[b as usize];
        // nothing left to quantify below this level
        if (vars.0 >> var) == 0 {
            return b;
        }
        let key = (Op::Exists, b, 0, vars.0);
        if self.cache_enabled {
            if let Some(&r) = self.quant_cache.get(&key) {
                return r;
            }
        }
        let l = self.exists_rec(lo, vars);
        let r = if vars.contains(var) {
            if l == TRUE_NODE {
                TRUE_NODE
            } else {
                let h = self.exists_rec(hi, vars);
                self.or_rec(l, h)
            }
        } else {
            let h = self.exists_rec(hi, vars);
            self.mk(var, l, h)
        };
        if self.cache_enabled {
            self.quant_cache.insert(key, r);
        }
        r
    }

    pub fn forall(&mut self, b: Bdd, vars: VarSet) -> Bdd {
        let nb = self.not(b);
        let e = self.exists(nb, vars);
        self.not(e)
    }

    /// `exists vars. (a & b)` without building the conjunction.
    pub fn and_exists(&mut self, a: Bdd, b: Bdd, vars: VarSet) -> Bdd {
        let a = self.check(a);
        let b = self.check(b);
        let r = self.and_exists_rec(a, b, vars);
        self.wrap(r)
    }

    fn and_exists_rec(&mut self, a: u32, b: u32, vars: VarSet) -> u32 {
        if a == FALSE_NODE || b == FALSE_NODE {
            return FALSE_NODE;
        }
        if a == TRUE_NODE && b == TRUE_NODE {
            return TRUE_NODE;
        }
        if a == TRUE_NODE || a == b {
            return self.exists_rec(b, vars);
        }
        if b == TRUE_NODE {
            return self.exists_rec(a, vars);
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let top = self.var_of(a).min(self.var_of(b));
        if (vars.0 >> top) == 0 {
            return self.and_rec(a, b);
        }
        let key = (Op::AndExists, a, b, vars.0);
        if self.cache_enabled {
            if let Some(&r) = self.quant_cache.get(&key) {
                return r;
            }
        }
        let (a0, a1) = self.split(a, top);
        let (b0, b1) = self.split(b, top);
        let lo = self.and_exists_rec(a0, b0, vars);
        let r = if vars.contains(top) {
            if lo == TRUE_NODE {
                TRUE_NODE
            } else {
                let hi = self.and_exists_rec(a1, b1, vars);
                self.or_rec(lo, hi)
            }
        } else {
            let hi = self.and_exists_rec(a1, b1, vars);
            self.mk(top, lo, hi)
        };
        if self.cache_enabled {
            self.quant_cache.insert(key, r);
        }
        r
    }

    /// Substitute variables according to `map` (`map[v]` is the new id of `v`).
    /// The map must be injective on the support of `b`.
    pub fn rename(&mut self, b: Bdd, map: &[VarId]) -> Bdd {
        let n = self.check(b);
        let mut memo = FxHashMap::default();
        let r = self.rename_rec(n, map, &mut memo);
        self.wrap(r)
    }

    fn rename_rec(&mut self, n: u32, map: &[VarId], memo: &mut FxHashMap<u32, u32>) -> u32 {
        if n <= TRUE_NODE {
            return n;
        }
        if let Some(&r) = memo.get(&n) {
            return r;
        }
        let Node { var, lo, hi } = self.nodes[n as usize];
        let l = self.rename_rec(lo, map, memo);
        let h = self.rename_rec(hi, map, memo);
        let target = map[var as usize];
        let v = self.mk(target, FALSE_NODE, TRUE_NODE);
        let r = self.ite_rec(v, h, l);
        memo.insert(n, r);
        r
    }

    /// Cofactor with respect to a partial assignment (`None` = keep free).
    pub fn restrict(&mut self, b: Bdd, assignment: &[Option<bool>]) -> Bdd {
        let n = self.check(b);
        let mut memo = FxHashMap::default();
        let r = self.restrict_rec(n, assignment, &mut memo);
        self.wrap(r)
    }

    fn restrict_rec(&mut self, n: u32, asg: &[Option<bool>], memo: &mut FxHashMap<u32, u32>) -> u32 {
        if n <= TRUE_NODE {
            return n;
        }
        if let Some(&r) = memo.get(&n) {
            return r;
        }
        let Node { var, lo, hi } = self.nodes[n as usize];
        let r = match asg.get(var as usize).copied().flatten() {
            Some(true) => self.restrict_rec(hi, asg, memo),
            Some(false) => self.restrict_rec(lo, asg, memo),
            None => {
                let l = self.restrict_rec(lo, asg, memo);
                let h = self.restrict_rec(hi, asg, memo);
                self.mk(var, l, h)
            }
        };
        memo.insert(n, r);
        r
    }

    /// Evaluate under a total assignment.
    pub fn eval(&self, b: Bdd, assignment: impl Fn(VarId) -> bool) -> bool {
        let mut n = self.check(b);
        while n > TRUE_NODE {
            let node = self.nodes[n as usize];
            n = if assignment(node.var) { node.hi } else { node.lo };
        }
        n == TRUE_NODE
    }

    pub fn support(&self, b: Bdd) -> VarSet {
        let root = self.check(b);
        let mut seen = rustc_hash::FxHashSet::default();
        let mut stack = vec![root];
        let mut set = VarSet::EMPTY;
        while let Some(n) = stack.pop() {
            if n <= TRUE_NODE || !seen.insert(n) {
                continue;
            }
            let node = self.nodes[n as usize];
            set.insert(node.var);
            stack.push(node.lo);
            stack.push(node.hi);
        }
        set
    }

    /// Number of nodes reachable from `b`, terminals included.
    pub fn node_count(&self, b: Bdd) -> usize {
        let root = self.check(b);
        let mut seen = rustc_hash::FxHashSet::default();
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            if !seen.insert(n) || n <= TRUE_NODE {
                continue;
            }
            let node = self.nodes[n as usize];
            stack.push(node.lo);
            stack.push(node.hi);
        }
        seen.len()
    }

    /// Number of satisfying assignments over exactly the variables of `over`.
    ///
    /// Panics if `b` depends on a variable outside `over`.
    pub fn sat_count(&self, b: Bdd, over: VarSet) -> u128 {
        let root = self.check(b);
        let mut memo: FxHashMap<u32, u128> = FxHashMap::default();
        let c = self.count_rec(root, over, &mut memo);
        let top = self.nodes[root as usize].var;
        c << over.count_below(top)
    }

    fn count_rec(&self, n: u32, over: VarSet, memo: &mut FxHashMap<u32, u128>) -> u128 {
        if n == FALSE_NODE {
            return 0;
        }
        if n == TRUE_NODE {
            return 1;
        }
        if let Some(&c) = memo.get(&n) {
            return c;
        }
        let Node { var, lo, hi } = self.nodes[n as usize];
        assert!(over.contains(var), "sat_count: variable {var} outside the counted set");
        let below = over.count_below(var) + 1;
        let gap = |child: u32| over.count_below(self.nodes[child as usize].var) - below;
        let c = (self.count_rec(lo, over, memo) << gap(lo)) + (self.count_rec(hi, over, memo) << gap(hi));
        memo.insert(n, c);
        c
    }

    /// Lexicographically smallest satisfying assignment over `over`
    /// (lower ids are more significant, `false < true`).
    pub fn pick_min(&self, b: Bdd, over: VarSet) -> Option<Vec<(VarId, bool)>> {
        let mut n = self.check(b);
        if n == FALSE_NODE {
            return None;
        }
        let mut out = Vec::with_capacity(over.len());
        for v in over.iter() {
            let node = self.nodes[n as usize];
            if node.var == v {
                if node.lo != FALSE_NODE {
                    out.push((v, false));
                    n = node.lo;
                } else {
                    out.push((v, true));
                    n = node.hi;
                }
            } else {
                assert!(node.var > v, "pick_min: variable {} outside the requested set", node.var);
                out.push((v, false));
            }
        }
        debug_assert_eq!(n, TRUE_NODE);
        Some(out)
    }

    /// Some satisfying assignment over the support of `b`.
    pub fn pick_one(&self, b: Bdd) -> Option<Vec<(VarId, bool)>> {
        let support = self.support(b);
        self.pick_min(b, support)
    }

    /// All satisfying assignments over `over`, in increasing lexicographic order.
    /// Each assignment lists values for the members of `over` in id order.
    pub fn enumerate(&self, b: Bdd, over: VarSet) -> Vec<Vec<bool>> {
        let root = self.check(b);
        let vars: Vec<VarId> = over.iter().collect();
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(vars.len());
        self.enum_rec(root, &vars, 0, &mut cur, &mut out);
        out
    }

    fn enum_rec(&self, n: u32, vars: &[VarId], i: usize, cur: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if n == FALSE_NODE {
            return;
        }
        if i == vars.len() {
            assert_eq!(n, TRUE_NODE, "enumerate: diagram depends on variables outside the set");
            out.push(cur.clone());
            return;
        }
        let v = vars[i];
        let node = self.nodes[n as usize];
        let (lo, hi) = if node.var == v { (node.lo, node.hi) } else { (n, n) };
        cur.push(false);
        self.enum_rec(lo, vars, i + 1, cur, out);
        cur.pop();
        cur.push(true);
        self.enum_rec(hi, vars, i + 1, cur, out);
        cur.pop();
    }

    /// Graphviz rendering; `name` maps variable ids to labels.
    pub fn to_dot(&self, b: Bdd, name: impl Fn(VarId) -> String) -> String {
        let root = self.check(b);
        let mut s = String::from("digraph bdd {\n  node [shape=circle];\n");
        s.push_str("  n0 [label=\"0\", shape=box];\n  n1 [label=\"1\", shape=box];\n");
        let mut seen = rustc_hash::FxHashSet::default();
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            if n <= TRUE_NODE || !seen.insert(n) {
                continue;
            }
            let node = self.nodes[n as usize];
            let _ = writeln!(s, "  n{n} [label=\"{}\"];", name(node.var));
            let _ = writeln!(s, "  n{n} -> n{} [style=dashed];", node.lo);
            let _ = writeln!(s, "  n{n} -> n{};", node.hi);
            stack.push(node.lo);
            stack.push(node.hi);
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn truth_table(m: &BddManager, b: Bdd, n: u32) -> Vec<bool> {
        (0..1u32 << n).map(|row| m.eval(b, |v| row >> v & 1 == 1)).collect()
    }

    #[test]
    fn contradiction_is_false() {
        let mut m = BddManager::new(2);
        let x = m.var(0);
        let nx = m.not(x);
        assert!(m.and(x, nx).is_false());
    }

    #[test]
    fn redundant_ite_collapses() {
        let mut m = BddManager::new(3);
        let c = m.var(0);
        let t = m.var(2);
        assert_eq!(m.ite(c, t, t), t);
    }

    #[test]
    fn or_over_two_bits_counts_three() {
        let mut m = BddManager::new(2);
        let x = m.var(0);
        let y = m.var(1);
        let f = m.or(x, y);
        assert_eq!(m.sat_count(f, VarSet::from_vars([0, 1])), 3);
    }

    #[test]
    fn quantifier_examples() {
        let mut m = BddManager::new(2);
        let x = m.var(0);
        let y = m.var(1);
        let xy = m.and(x, y);
        assert_eq!(m.exists(xy, VarSet::from_vars([0])), y);
        let x_or_y = m.or(x, y);
        assert_eq!(m.forall(x_or_y, VarSet::from_vars([0])), y);
        assert_eq!(m.exists(xy, VarSet::EMPTY), xy);
    }

    #[test]
    fn rename_and_inverse() {
        let mut m = BddManager::new(4);
        let x1 = m.var(1);
        let to_unprimed = [0, 0, 2, 2];
        let to_primed = [1, 1, 3, 3];
        assert_eq!(m.rename(x1, &to_unprimed), m.var(0));
        let a = m.var(0);
        let b = m.nvar(2);
        let f = m.xor(a, b);
        let p = m.rename(f, &to_primed);
        assert_eq!(m.rename(p, &to_unprimed), f);
    }

    #[test]
    fn constant_counts() {
        let m = BddManager::new(3);
        let all = VarSet::from_vars([0, 1, 2]);
        assert_eq!(m.sat_count(m.one(), all), 8);
        assert_eq!(m.sat_count(m.zero(), all), 0);
        assert!(m.pick_one(m.zero()).is_none());
    }

    #[test]
    fn pick_min_is_lexicographic() {
        let mut m = BddManager::new(3);
        let a = m.var(0);
        let c = m.var(2);
        let f = m.or(a, c);
        let pick = m.pick_min(f, VarSet::from_vars([0, 1, 2])).unwrap();
        assert_eq!(pick, vec![(0, false), (1, false), (2, true)]);
        let rows = m.enumerate(f, VarSet::from_vars([0, 1, 2]));
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0], vec![false, false, true]);
    }

    #[test]
    fn foreign_handle_panics() {
        let m1 = BddManager::new(1);
        let mut m2 = BddManager::new(1);
        let t = m1.one();
        let r = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| m2.not(t)));
        assert!(r.is_err());
    }

    #[test]
    fn rename_matches_truth_table_permutation() {
        // 4-bit relation over interleaved (x0, x0', x1, x1'); swap polarity.
        let mut m = BddManager::new(4);
        let v: Vec<Bdd> = (0..4).map(|i| m.var(i)).collect();
        let t1 = m.and(v[0], v[2]);
        let t2 = m.xor(v[0], v[2]);
        let f = m.or(t1, t2);
        let primed = m.rename(f, &[1, 1, 3, 3]);
        let tt = truth_table(&m, primed, 4);
        for row in 0..16u32 {
            let x0p = row >> 1 & 1 == 1;
            let x1p = row >> 3 & 1 == 1;
            assert_eq!(tt[row as usize], (x0p && x1p) || (x0p ^ x1p));
        }
    }
}
