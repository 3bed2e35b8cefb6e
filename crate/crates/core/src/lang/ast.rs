use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

/// Line/column range in the source text (1-based, inclusive start).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Span {
    pub line: u32,
    pub col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Boolean,
    Enumeration(Vec<String>),
}

impl Domain {
    pub fn size(&self) -> usize {
        match self {
            Domain::Boolean => 2,
            Domain::Enumeration(v) => v.len(),
        }
    }

    /// Bits of the binary encoding.
    pub fn bits(&self) -> usize {
        match self {
            Domain::Boolean => 1,
            Domain::Enumeration(v) => {
                let mut bits = 0;
                while (1usize << bits) < v.len() {
                    bits += 1;
                }
                bits.max(1)
            }
        }
    }

    pub fn value_index(&self, name: &str) -> Option<usize> {
        match self {
            Domain::Boolean => match name {
                "FALSE" | "false" => Some(0),
                "TRUE" | "true" => Some(1),
                _ => None,
            },
            Domain::Enumeration(v) => v.iter().position(|x| x == name),
        }
    }

    pub fn value_name(&self, idx: usize) -> String {
        match self {
            Domain::Boolean => if idx == 1 { "TRUE" } else { "FALSE" }.to_string(),
            Domain::Enumeration(v) => v[idx].clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Owner {
    Env,
    Sys,
    Aux,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarDecl {
    pub name: String,
    pub domain: Domain,
    pub owner: Owner,
    #[serde(skip)]
    pub span: Span,
}

pub const AUX_PREFIX: &str = "spec_";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Assumption,
    Guarantee,
}

impl Side {
    pub fn keyword(self) -> &'static str {
        match self {
            Side::Assumption => "ASM",
            Side::Guarantee => "GAR",
        }
    }
}

/// Expression tree. Names stay unresolved (`Id`) until type checking, since
/// a bare identifier may denote a variable, a DEFINE or an enumeration value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    Bool(bool),
    Id(String),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Imp(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
    Eq(Box<Expr>, Box<Expr>),
    Neq(Box<Expr>, Box<Expr>),
    Next(Box<Expr>),
    Prev(Box<Expr>),
    Since(Box<Expr>, Box<Expr>),
    Once(Box<Expr>),
    Historically(Box<Expr>),
}

impl Expr {
    pub fn id(name: impl Into<String>) -> Expr {
        Expr::Id(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn and(a: Expr, b: Expr) -> Expr {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Expr, b: Expr) -> Expr {
        Expr::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Expr, b: Expr) -> Expr {
        Expr::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Expr, b: Expr) -> Expr {
        Expr::Iff(Box::new(a), Box::new(b))
    }

    pub fn eq(a: Expr, b: Expr) -> Expr {
        Expr::Eq(Box::new(a), Box::new(b))
    }

    pub fn next(e: Expr) -> Expr {
        Expr::Next(Box::new(e))
    }

    pub fn and_all(items: impl IntoIterator<Item = Expr>) -> Expr {
        let mut it = items.into_iter();
        match it.next() {
            None => Expr::Bool(true),
            Some(first) => it.fold(first, Expr::and),
        }
    }

    pub fn or_all(items: impl IntoIterator<Item = Expr>) -> Expr {
        let mut it = items.into_iter();
        match it.next() {
            None => Expr::Bool(false),
            Some(first) => it.fold(first, Expr::or),
        }
    }

    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Bool(_) | Expr::Id(_) => vec![],
            Expr::Not(a) | Expr::Next(a) | Expr::Prev(a) | Expr::Once(a) | Expr::Historically(a) => vec![a],
            Expr::And(a, b)
            | Expr::Or(a, b)
            | Expr::Imp(a, b)
            | Expr::Iff(a, b)
            | Expr::Eq(a, b)
            | Expr::Neq(a, b)
            | Expr::Since(a, b) => vec![a, b],
        }
    }

    /// Rebuild with `f` applied to every direct child.
    pub fn map_children(&self, mut f: impl FnMut(&Expr) -> Expr) -> Expr {
        let b = |e: &Expr, f: &mut dyn FnMut(&Expr) -> Expr| Box::new(f(e));
        match self {
            Expr::Bool(_) | Expr::Id(_) => self.clone(),
            Expr::Not(a) => Expr::Not(b(a, &mut f)),
            Expr::Next(a) => Expr::Next(b(a, &mut f)),
            Expr::Prev(a) => Expr::Prev(b(a, &mut f)),
            Expr::Once(a) => Expr::Once(b(a, &mut f)),
            Expr::Historically(a) => Expr::Historically(b(a, &mut f)),
            Expr::And(x, y) => Expr::And(b(x, &mut f), b(y, &mut f)),
            Expr::Or(x, y) => Expr::Or(b(x, &mut f), b(y, &mut f)),
            Expr::Imp(x, y) => Expr::Imp(b(x, &mut f), b(y, &mut f)),
            Expr::Iff(x, y) => Expr::Iff(b(x, &mut f), b(y, &mut f)),
            Expr::Eq(x, y) => Expr::Eq(b(x, &mut f), b(y, &mut f)),
            Expr::Neq(x, y) => Expr::Neq(b(x, &mut f), b(y, &mut f)),
            Expr::Since(x, y) => Expr::Since(b(x, &mut f), b(y, &mut f)),
        }
    }

    pub fn any(&self, pred: &dyn Fn(&Expr) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.any(pred))
    }

    pub fn has_next(&self) -> bool {
        self.any(&|e| matches!(e, Expr::Next(_)))
    }

    pub fn has_past(&self) -> bool {
        self.any(&|e| matches!(e, Expr::Prev(_) | Expr::Since(..) | Expr::Once(_) | Expr::Historically(_)))
    }

    pub fn has_temporal(&self) -> bool {
        self.has_next() || self.has_past()
    }

    /// All identifiers in the tree.
    pub fn idents(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_idents(&mut out);
        out
    }

    fn collect_idents(&self, out: &mut BTreeSet<String>) {
        if let Expr::Id(n) = self {
            out.insert(n.clone());
        }
        for c in self.children() {
            c.collect_idents(out);
        }
    }

    /// Identifiers appearing underneath a `next(...)`.
    pub fn next_idents(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_next(false, &mut out);
        out
    }

    fn collect_next(&self, under: bool, out: &mut BTreeSet<String>) {
        match self {
            Expr::Id(n) if under => {
                out.insert(n.clone());
            }
            Expr::Next(a) => a.collect_next(true, out),
            _ => {
                for c in self.children() {
                    c.collect_next(under, out);
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PatternId {
    P09,
    P15,
    P20,
    P26,
}

impl PatternId {
    pub const ALL: [PatternId; 4] = [PatternId::P09, PatternId::P15, PatternId::P20, PatternId::P26];

    pub fn name(self) -> &'static str {
        match self {
            PatternId::P09 => "P09",
            PatternId::P15 => "P15",
            PatternId::P20 => "P20",
            PatternId::P26 => "P26",
        }
    }
}

impl fmt::Display for PatternId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A pattern instance. Parameter names are `p`, `q`, `r`, `s` as the pattern requires.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternInstance {
    pub pattern: PatternId,
    pub params: IndexMap<String, Expr>,
    pub bound: Option<u32>,
}

impl PatternInstance {
    pub fn param(&self, name: &str) -> &Expr {
        self.params
            .get(name)
            .unwrap_or_else(|| panic!("pattern {} has no parameter {name}", self.pattern))
    }

    pub fn map_params(&self, mut f: impl FnMut(&Expr) -> Expr) -> PatternInstance {
        PatternInstance {
            pattern: self.pattern,
            params: self.params.iter().map(|(k, v)| (k.clone(), f(v))).collect(),
            bound: self.bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "body")]
pub enum ConstraintBody {
    Initial(Expr),
    Safety(Expr),
    Justice(Expr),
    Pattern(PatternInstance),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    Initial,
    Safety,
    Justice,
    Pattern,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub side: Side,
    pub label: Option<String>,
    pub body: ConstraintBody,
    pub span: Span,
}

impl Constraint {
    pub fn kind(&self) -> ConstraintKind {
        match self.body {
            ConstraintBody::Initial(_) => ConstraintKind::Initial,
            ConstraintBody::Safety(_) => ConstraintKind::Safety,
            ConstraintBody::Justice(_) => ConstraintKind::Justice,
            ConstraintBody::Pattern(_) => ConstraintKind::Pattern,
        }
    }

    /// Label if given, otherwise a positional name such as `GAR#3`.
    pub fn display_label(&self, index: usize) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| format!("{}#{}", self.side.keyword(), index))
    }

    pub fn exprs(&self) -> Vec<&Expr> {
        match &self.body {
            ConstraintBody::Initial(e) | ConstraintBody::Safety(e) | ConstraintBody::Justice(e) => vec![e],
            ConstraintBody::Pattern(p) => p.params.values().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecDocument {
    pub name: String,
    pub env_vars: Vec<VarDecl>,
    pub sys_vars: Vec<VarDecl>,
    pub aux_vars: Vec<VarDecl>,
    pub defines: IndexMap<String, Expr>,
    #[serde(skip)]
    pub define_spans: IndexMap<String, Span>,
    pub assumptions: Vec<Constraint>,
    pub guarantees: Vec<Constraint>,
}

impl SpecDocument {
    pub fn empty(name: impl Into<String>) -> Self {
        SpecDocument {
            name: name.into(),
            env_vars: vec![],
            sys_vars: vec![],
            aux_vars: vec![],
            defines: IndexMap::new(),
            define_spans: IndexMap::new(),
            assumptions: vec![],
            guarantees: vec![],
        }
    }

    /// Copy with every source span reset, for structural comparison.
    pub fn without_spans(&self) -> SpecDocument {
        let mut d = self.clone();
        d.define_spans.clear();
        for v in d.env_vars.iter_mut().chain(&mut d.sys_vars).chain(&mut d.aux_vars) {
            v.span = Span::default();
        }
        for c in d.assumptions.iter_mut().chain(&mut d.guarantees) {
            c.span = Span::default();
        }
        d
    }

    pub fn vars(&self) -> impl Iterator<Item = &VarDecl> {
        self.env_vars.iter().chain(&self.sys_vars).chain(&self.aux_vars)
    }

    pub fn var(&self, name: &str) -> Option<&VarDecl> {
        self.vars().find(|v| v.name == name)
    }

    pub fn constraints(&self) -> impl Iterator<Item = &Constraint> {
        self.assumptions.iter().chain(&self.guarantees)
    }

    /// Stable identifier of a constraint: the label or `ASM#i` / `GAR#i` (1-based).
    pub fn constraint_label(&self, side: Side, index: usize) -> String {
        let list = match side {
            Side::Assumption => &self.assumptions,
            Side::Guarantee => &self.guarantees,
        };
        list[index].display_label(index + 1)
    }

    /// Whether a constraint is one of the assignments that define a manual
    /// auxiliary variable: an initial constraint over auxiliary variables only,
    /// or a safety constraint whose `next(...)` references are all auxiliary.
    pub fn is_aux_definition(&self, c: &Constraint) -> bool {
        let is_aux = |n: &String| self.aux_vars.iter().any(|v| &v.name == n);
        match &c.body {
            ConstraintBody::Initial(e) => {
                let ids = e.idents();
                let vars: Vec<_> = ids.iter().filter(|n| self.var(n).is_some()).collect();
                !vars.is_empty() && vars.iter().all(|n| is_aux(n))
            }
            ConstraintBody::Safety(e) => {
                let next = e.next_idents();
                let vars: Vec<_> = next.iter().filter(|n| self.var(n).is_some()).collect();
                !vars.is_empty() && vars.iter().all(|n| is_aux(n))
            }
            _ => false,
        }
    }
}
