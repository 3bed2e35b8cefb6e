//! Hand-written lexer and recursive-descent parser for `.gr1spec` documents.
//!
//! ```text
//! doc        := ('SPEC' ident)? section*
//! section    := 'VARENV' decl* | 'VAR' decl* | 'DEFINE' define* | ('ASM' | 'GAR') constraint ';'
//! decl       := ident ':' ('boolean' | '{' ident (',' ident)* '}') ';'
//! define     := ident ':=' expr ';'
//! constraint := (ident ':')? ( 'G' 'F' expr | 'GF' expr | 'G' expr | pattern | expr )
//! pattern    := 'Globally' '(' e ')' 'leads' 'to' '(' e ')'
//!             | 'Globally' '(' e ')' 'after' '(' e ')' 'until' '(' e ')'
//!             | '(' e ')' 'occurs' 'at' 'most' int 'times' 'between' '(' e ')' 'and' '(' e ')'
//!             | '(' e ')' 'becomes' 'true' 'between' '(' e ')' 'and' '(' e ')'
//! ```
//!
//! Expression precedence, loosest first: `<->`, `->` (right associative),
//! `|`, `&`, `SINCE`, `=`/`!=`, unary (`!`, `next`, `PREV`, `ONCE`,
//! `HISTORICALLY`). Comments run from `--` to the end of the line.

use std::collections::HashSet;

use indexmap::IndexMap;

use super::ast::*;
use super::LangError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u32),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Colon,
    Semi,
    Comma,
    Assign,
    Eq,
    Neq,
    Not,
    And,
    Or,
    Imp,
    Iff,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Assign => "`:=`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Neq => "`!=`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Imp => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: u32,
    col: u32,
    end_line: u32,
    end_col: u32,
}

const RESERVED: &[&str] = &[
    "SPEC", "VARENV", "VAR", "DEFINE", "ASM", "GAR", "G", "F", "GF", "next", "PREV", "SINCE", "ONCE",
    "HISTORICALLY", "TRUE", "FALSE", "true", "false", "boolean",
];

fn lex(text: &str) -> Result<Vec<Token>, LangError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let three: String = chars[i..(i + 3).min(chars.len())].iter().collect();
        let (tok, len) = if three == "<->" {
            (Tok::Iff, 3)
        } else if two == "->" {
            (Tok::Imp, 2)
        } else if two == "!=" {
            (Tok::Neq, 2)
        } else if two == ":=" {
            (Tok::Assign, 2)
        } else {
            match c {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '{' => (Tok::LBrace, 1),
                '}' => (Tok::RBrace, 1),
                ':' => (Tok::Colon, 1),
                ';' => (Tok::Semi, 1),
                ',' => (Tok::Comma, 1),
                '=' => (Tok::Eq, 1),
                '!' => (Tok::Not, 1),
                '&' => (Tok::And, 1),
                '|' => (Tok::Or, 1),
                d if d.is_ascii_digit() => {
                    let mut j = i;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    let s: String = chars[i..j].iter().collect();
                    let n = s.parse().map_err(|_| LangError::Parse {
                        line,
                        col,
                        message: format!("integer `{s}` out of range"),
                        expected: vec![],
                    })?;
                    (Tok::Int(n), j - i)
                }
                a if a.is_alphabetic() || a == '_' => {
                    let mut j = i;
                    while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                        j += 1;
                    }
                    (Tok::Ident(chars[i..j].iter().collect()), j - i)
                }
                other => {
                    return Err(LangError::Parse {
                        line,
                        col,
                        message: format!("unexpected character `{other}`"),
                        expected: vec![],
                    })
                }
            }
        };
        i += len;
        col += len as u32;
        out.push(Token { tok, line: start_line, col: start_col, end_line: line, end_col: col - 1 });
    }
    out.push(Token { tok: Tok::Eof, line, col, end_line: line, end_col: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> LangError {
        let t = self.here();
        LangError::Parse {
            line: t.line,
            col: t.col,
            message: format!("unexpected {}", t.tok.describe()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, LangError> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.error(&[&tok.describe()]))
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<(), LangError> {
        if self.is_word(w) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[&format!("`{w}`")]))
        }
    }

    fn ident(&mut self) -> Result<(String, Token), LangError> {
        match self.peek().clone() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => Ok((s, self.bump())),
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn span_from(&self, start: &Token) -> Span {
        let end = &self.toks[self.pos.saturating_sub(1)];
        Span { line: start.line, col: start.col, end_line: end.end_line, end_col: end.end_col }
    }

    fn document(&mut self) -> Result<SpecDocument, LangError> {
        let mut doc = SpecDocument::empty("");
        let mut names: HashSet<String> = HashSet::new();
        if self.is_word("SPEC") {
            self.bump();
            doc.name = self.ident()?.0;
            if *self.peek() == Tok::Semi {
                self.bump();
            }
        }
        loop {
            match self.peek().clone() {
                Tok::Eof => break,
                Tok::Ident(w) if w == "VARENV" || w == "VAR" => {
                    self.bump();
                    while matches!(self.peek(), Tok::Ident(s) if !RESERVED.contains(&s.as_str())) {
                        let decl = self.decl(if w == "VARENV" { Owner::Env } else { Owner::Sys })?;
                        if !names.insert(decl.name.clone()) {
                            return Err(LangError::Duplicate { name: decl.name, line: decl.span.line, col: decl.span.col });
                        }
                        match decl.owner {
                            Owner::Env => doc.env_vars.push(decl),
                            Owner::Sys => doc.sys_vars.push(decl),
                            Owner::Aux => doc.aux_vars.push(decl),
                        }
                    }
                }
                Tok::Ident(w) if w == "DEFINE" => {
                    self.bump();
                    while matches!(self.peek(), Tok::Ident(s) if !RESERVED.contains(&s.as_str())) {
                        let (name, tok) = self.ident()?;
                        self.expect(Tok::Assign)?;
                        let e = self.expr()?;
                        self.expect(Tok::Semi)?;
                        if !names.insert(name.clone()) {
                            return Err(LangError::Duplicate { name, line: tok.line, col: tok.col });
                        }
                        doc.define_spans.insert(name.clone(), self.span_from(&tok));
                        doc.defines.insert(name, e);
                    }
                }
                Tok::Ident(w) if w == "ASM" || w == "GAR" => {
                    let start = self.bump();
                    let side = if w == "ASM" { Side::Assumption } else { Side::Guarantee };
                    let c = self.constraint(side, &start)?;
                    match side {
                        Side::Assumption => doc.assumptions.push(c),
                        Side::Guarantee => doc.guarantees.push(c),
                    }
                }
                _ => return Err(self.error(&["`VARENV`", "`VAR`", "`DEFINE`", "`ASM`", "`GAR`"])),
            }
        }
        Ok(doc)
    }

    fn decl(&mut self, section: Owner) -> Result<VarDecl, LangError> {
        let (name, start) = self.ident()?;
        self.expect(Tok::Colon)?;
        let domain = if self.is_word("boolean") {
            self.bump();
            Domain::Boolean
        } else if *self.peek() == Tok::LBrace {
            self.bump();
            let mut values = vec![self.ident()?.0];
            while *self.peek() == Tok::Comma {
                self.bump();
                values.push(self.ident()?.0);
            }
            self.expect(Tok::RBrace)?;
            let distinct: HashSet<_> = values.iter().collect();
            if values.len() < 2 || distinct.len() != values.len() {
                return Err(LangError::Parse {
                    line: start.line,
                    col: start.col,
                    message: format!("enumeration of `{name}` needs at least two distinct values"),
                    expected: vec![],
                });
            }
            Domain::Enumeration(values)
        } else {
            return Err(self.error(&["`boolean`", "`{`"]));
        };
        self.expect(Tok::Semi)?;
        let span = self.span_from(&start);
        let owner = if name.starts_with(AUX_PREFIX) {
            if section == Owner::Env {
                return Err(LangError::Parse {
                    line: start.line,
                    col: start.col,
                    message: format!("auxiliary variable `{name}` must be declared in VAR"),
                    expected: vec![],
                });
            }
            Owner::Aux
        } else {
            section
        };
        Ok(VarDecl { name, domain, owner, span })
    }

    fn constraint(&mut self, side: Side, start: &Token) -> Result<Constraint, LangError> {
        let label = match (self.peek().clone(), self.peek_at(1)) {
            (Tok::Ident(s), Tok::Colon) if !RESERVED.contains(&s.as_str()) => {
                self.bump();
                self.bump();
                Some(s)
            }
            _ => None,
        };
        let body = if self.is_word("GF") {
            self.bump();
            ConstraintBody::Justice(self.expr()?)
        } else if self.is_word("G") {
            self.bump();
            if self.is_word("F") {
                self.bump();
                ConstraintBody::Justice(self.expr()?)
            } else {
                ConstraintBody::Safety(self.expr()?)
            }
        } else if self.is_word("Globally") && *self.peek_at(1) == Tok::LParen {
            self.bump();
            let p = self.paren_expr()?;
            if self.is_word("leads") {
                self.bump();
                self.expect_word("to")?;
                let s = self.paren_expr()?;
                ConstraintBody::Pattern(pattern(PatternId::P26, &[("p", p), ("s", s)], None))
            } else if self.is_word("after") {
                self.bump();
                let q = self.paren_expr()?;
                self.expect_word("until")?;
                let r = self.paren_expr()?;
                ConstraintBody::Pattern(pattern(PatternId::P20, &[("p", p), ("q", q), ("r", r)], None))
            } else {
                return Err(self.error(&["`leads`", "`after`"]));
            }
        } else {
            let e = self.expr()?;
            if self.is_word("occurs") {
                self.bump();
                self.expect_word("at")?;
                self.expect_word("most")?;
                let bound = match self.peek().clone() {
                    Tok::Int(n) if n >= 1 => {
                        self.bump();
                        n
                    }
                    _ => return Err(self.error(&["positive integer"])),
                };
                self.expect_word("times")?;
                let (q, r) = self.between()?;
                ConstraintBody::Pattern(pattern(PatternId::P15, &[("p", e), ("q", q), ("r", r)], Some(bound)))
            } else if self.is_word("becomes") {
                self.bump();
                match self.peek() {
                    Tok::Ident(s) if s == "true" || s == "TRUE" => {
                        self.bump();
                    }
                    _ => return Err(self.error(&["`true`"])),
                }
                let (q, r) = self.between()?;
                ConstraintBody::Pattern(pattern(PatternId::P09, &[("p", e), ("q", q), ("r", r)], None))
            } else {
                ConstraintBody::Initial(e)
            }
        };
        self.expect(Tok::Semi)?;
        Ok(Constraint { side, label, body, span: self.span_from(start) })
    }

    fn between(&mut self) -> Result<(Expr, Expr), LangError> {
        self.expect_word("between")?;
        let q = self.paren_expr()?;
        self.expect_word("and")?;
        let r = self.paren_expr()?;
        Ok((q, r))
    }

    fn paren_expr(&mut self) -> Result<Expr, LangError> {
        self.expect(Tok::LParen)?;
        let e = self.expr()?;
        self.expect(Tok::RParen)?;
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr, LangError> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.imp()?;
            lhs = Expr::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Expr, LangError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Expr::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Expr, LangError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = Expr::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Expr, LangError> {
        let mut lhs = self.since()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.since()?;
            lhs = Expr::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn since(&mut self) -> Result<Expr, LangError> {
        let mut lhs = self.cmp()?;
        while self.is_word("SINCE") {
            self.bump();
            let rhs = self.cmp()?;
            lhs = Expr::Since(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn cmp(&mut self) -> Result<Expr, LangError> {
        let lhs = self.unary()?;
        match self.peek() {
            Tok::Eq => {
                self.bump();
                Ok(Expr::eq(lhs, self.unary()?))
            }
            Tok::Neq => {
                self.bump();
                Ok(Expr::Neq(Box::new(lhs), Box::new(self.unary()?)))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Expr, LangError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Expr::not(self.unary()?))
            }
            Tok::LParen => self.paren_expr(),
            Tok::Ident(w) => match w.as_str() {
                "next" => {
                    self.bump();
                    Ok(Expr::next(self.paren_expr()?))
                }
                "PREV" => {
                    self.bump();
                    Ok(Expr::Prev(Box::new(self.paren_expr()?)))
                }
                "ONCE" => {
                    self.bump();
                    Ok(Expr::Once(Box::new(self.paren_expr()?)))
                }
                "HISTORICALLY" => {
                    self.bump();
                    Ok(Expr::Historically(Box::new(self.paren_expr()?)))
                }
                "TRUE" | "true" => {
                    self.bump();
                    Ok(Expr::Bool(true))
                }
                "FALSE" | "false" => {
                    self.bump();
                    Ok(Expr::Bool(false))
                }
                _ if RESERVED.contains(&w.as_str()) => Err(self.error(&["expression"])),
                _ => {
                    self.bump();
                    Ok(Expr::Id(w))
                }
            },
            _ => Err(self.error(&["expression"])),
        }
    }
}

fn pattern(id: PatternId, params: &[(&str, Expr)], bound: Option<u32>) -> PatternInstance {
    PatternInstance {
        pattern: id,
        params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect::<IndexMap<_, _>>(),
        bound,
    }
}

/// Parse a specification document. DEFINE bodies are kept unexpanded.
pub fn parse(text: &str) -> Result<SpecDocument, LangError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    p.document()
}

/// Parse a single expression (used by tests and the play-out service).
pub fn parse_expr(text: &str) -> Result<Expr, LangError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["end of input"]));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sections_give_empty_document() {
        let doc = parse("VARENV\nVAR\n").unwrap();
        assert!(doc.env_vars.is_empty() && doc.sys_vars.is_empty());
        assert!(doc.assumptions.is_empty() && doc.guarantees.is_empty());
    }

    #[test]
    fn duplicate_identifier_rejected() {
        let err = parse("VAR x : boolean; VAR x : boolean;").unwrap_err();
        assert!(matches!(err, LangError::Duplicate { ref name, .. } if name == "x"), "{err}");
    }

    #[test]
    fn error_reports_position_and_expectation() {
        let err = parse("VAR\n  x : boolean;\nGAR G (x -> );").unwrap_err();
        match err {
            LangError::Parse { line, col, expected, .. } => {
                assert_eq!((line, col), (3, 13));
                assert!(expected.contains(&"expression".to_string()));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn constraint_forms() {
        let doc = parse(
            "VARENV e : boolean; VAR s : {A, B, C};
             ASM e;
             GAR G (e -> next(s) = A);
             GAR goal: G F (s = B);
             GAR GF s != C;
             ASM Globally (e) leads to (!e);
             ASM (e) occurs at most 2 times between (e) and (!e);
             GAR (s = A) becomes true between (e) and (!e);
             GAR Globally (s != C) after (e) until (!e);",
        )
        .unwrap();
        let kinds: Vec<_> = doc.constraints().map(|c| c.kind()).collect();
        use ConstraintKind::*;
        assert_eq!(kinds, vec![Initial, Pattern, Pattern, Safety, Justice, Justice, Pattern, Pattern]);
        assert_eq!(doc.guarantees[1].label.as_deref(), Some("goal"));
        match &doc.assumptions[2].body {
            ConstraintBody::Pattern(p) => assert_eq!((p.pattern, p.bound), (PatternId::P15, Some(2))),
            _ => unreachable!(),
        }
    }

    #[test]
    fn precedence() {
        let e = parse_expr("a & b | c -> d <-> e").unwrap();
        let expected = Expr::iff(
            Expr::imp(Expr::or(Expr::and(Expr::id("a"), Expr::id("b")), Expr::id("c")), Expr::id("d")),
            Expr::id("e"),
        );
        assert_eq!(e, expected);
        let past = parse_expr("PREV (lift!=DROP SINCE lift=LIFT)").unwrap();
        assert!(matches!(past, Expr::Prev(ref inner) if matches!(**inner, Expr::Since(..))));
    }
}
