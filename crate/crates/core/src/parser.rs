//! Hand-written lexer and recursive-descent parser for `.fl` programs.
//!
//! ```text
//! program    := (clause | directive)*
//! directive  := '@declare' name '/' int word* '.'
//! clause     := atom '.' | atom ':-' body '.'
//! body       := conj (('or' | ';') conj)*
//! conj       := item ((',' | 'and') item)*
//! item       := 'not' atom | '(' body ')' | quant | aggregate | atom
//! quant      := ('some' | 'each') Var (',' Var)* '|' body
//! aggregate  := ('count' | 'min' | 'max' | 'sum') '{' Var (',' Var)* ':' setlit (',' setlit)* '}' cmp term
//! setlit     := ['not'] atom
//! ```
//!
//! Quantifier bodies extend as far right as possible. `%` starts a line
//! comment.

use std::collections::BTreeSet;

use crate::ast::*;
use crate::error::{Error, Result};
use crate::value::Constant;

const KEYWORDS: &[&str] = &["not", "and", "or", "some", "each", "count", "min", "max", "sum"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    Str(String),
    Num(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    If,
    Dot,
    Bar,
    Slash,
    At,
    Cmp(CmpOp),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Var(s) | Tok::Num(s) => format!("`{s}`"),
            Tok::Str(s) => format!("'{s}'"),
            Tok::Eof => "end of input".into(),
            Tok::Cmp(op) => format!("`{op}`"),
            other => {
                let s = match other {
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::LBrace => "{",
                    Tok::RBrace => "}",
                    Tok::Comma => ",",
                    Tok::Semi => ";",
                    Tok::Colon => ":",
                    Tok::If => ":-",
                    Tok::Dot => ".",
                    Tok::Bar => "|",
                    Tok::Slash => "/",
                    Tok::At => "@",
                    _ => unreachable!(),
                };
                format!("`{s}`")
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    col: usize,
}

fn err(pos: Pos, msg: impl Into<String>) -> Error {
    Error::Parse { line: pos.line, col: pos.col, msg: msg.into() }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        let peek = chars.get(i + 1).copied();
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '.' => Some(Tok::Dot),
            '|' => Some(Tok::Bar),
            '/' => Some(Tok::Slash),
            '@' => Some(Tok::At),
            '=' => Some(Tok::Cmp(CmpOp::Eq)),
            '≠' => Some(Tok::Cmp(CmpOp::Ne)),
            '≤' => Some(Tok::Cmp(CmpOp::Le)),
            '≥' => Some(Tok::Cmp(CmpOp::Ge)),
            _ => None,
        };
        if let Some(t) = single {
            bump!();
            out.push((t, pos));
            continue;
        }
        match (c, peek) {
            (':', Some('-')) => {
                bump!();
                bump!();
                out.push((Tok::If, pos));
            }
            (':', _) => {
                bump!();
                out.push((Tok::Colon, pos));
            }
            ('!', Some('=')) | ('<', Some('=')) | ('>', Some('=')) => {
                let op = match c {
                    '!' => CmpOp::Ne,
                    '<' => CmpOp::Le,
                    _ => CmpOp::Ge,
                };
                bump!();
                bump!();
                out.push((Tok::Cmp(op), pos));
            }
            ('<', _) => {
                bump!();
                out.push((Tok::Cmp(CmpOp::Lt), pos));
            }
            ('>', _) => {
                bump!();
                out.push((Tok::Cmp(CmpOp::Gt), pos));
            }
            ('\'', _) | ('"', _) => {
                let quote = c;
                bump!();
                let mut s = String::new();
                loop {
                    match chars.get(i).copied() {
                        None => return Err(err(pos, "unterminated string")),
                        Some(ch) if ch == quote => {
                            bump!();
                            break;
                        }
                        Some('\\') => {
                            bump!();
                            match chars.get(i).copied() {
                                Some(esc) => {
                                    s.push(esc);
                                    bump!();
                                }
                                None => return Err(err(pos, "unterminated string")),
                            }
                        }
                        Some(ch) => {
                            s.push(ch);
                            bump!();
                        }
                    }
                }
                out.push((Tok::Str(s), pos));
            }
            (d, _) if d.is_ascii_digit() || (d == '-' && peek.is_some_and(|p| p.is_ascii_digit())) => {
                let mut s = String::new();
                s.push(d);
                bump!();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    s.push(chars[i]);
                    bump!();
                }
                // A '.' continues the number only when a digit follows;
                // otherwise it terminates the clause.
                if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                    s.push('.');
                    bump!();
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        s.push(chars[i]);
                        bump!();
                    }
                }
                out.push((Tok::Num(s), pos));
            }
            (a, _) if a.is_alphabetic() || a == '_' => {
                let mut s = String::new();
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    s.push(chars[i]);
                    bump!();
                }
                let tok = if a.is_uppercase() || a == '_' { Tok::Var(s) } else { Tok::Ident(s) };
                out.push((tok, pos));
            }
            _ => return Err(err(pos, format!("unexpected character `{c}`"))),
        }
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(err(self.pos(), format!("expected {}, found {}", want.describe(), self.peek().describe())))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn program(&mut self) -> Result<Program> {
        let mut prog = Program::default();
        while *self.peek() != Tok::Eof {
            if *self.peek() == Tok::At {
                prog.declarations.push(self.directive()?);
            } else {
                prog.rules.push(self.clause()?);
            }
        }
        Ok(prog)
    }

    fn directive(&mut self) -> Result<Declaration> {
        self.expect(Tok::At)?;
        let pos = self.pos();
        match self.next() {
            Tok::Ident(s) if s == "declare" => {}
            other => return Err(err(pos, format!("unknown directive {}", other.describe()))),
        }
        let pred = self.signature()?;
        let mut decl = Declaration::new(pred);
        loop {
            let pos = self.pos();
            match self.next() {
                Tok::Dot => break,
                Tok::Ident(w) => {
                    let negated = w == "not";
                    let word = if negated {
                        match self.next() {
                            Tok::Ident(w) => w,
                            other => {
                                return Err(err(
                                    self.pos(),
                                    format!("expected `complete` or `closed` after `not`, found {}", other.describe()),
                                ))
                            }
                        }
                    } else {
                        w
                    };
                    apply_declaration_word(&mut decl, &word, negated).map_err(|m| err(pos, m))?;
                }
                other => return Err(err(pos, format!("unexpected {} in declaration", other.describe()))),
            }
        }
        Ok(decl)
    }

    fn signature(&mut self) -> Result<Pred> {
        let pos = self.pos();
        let name = match self.next() {
            Tok::Ident(n) if !KEYWORDS.contains(&n.as_str()) => n,
            other => return Err(err(pos, format!("expected predicate name, found {}", other.describe()))),
        };
        self.expect(Tok::Slash)?;
        let pos = self.pos();
        match self.next() {
            Tok::Num(n) => match n.parse::<usize>() {
                Ok(arity) => Ok(Pred::new(name, arity)),
                Err(_) => Err(err(pos, format!("invalid arity `{n}`"))),
            },
            other => Err(err(pos, format!("expected arity, found {}", other.describe()))),
        }
    }

    fn clause(&mut self) -> Result<Rule> {
        let start = self.pos();
        if self.is_kw("not") {
            return Err(err(start, "negative conclusions are not allowed in source programs"));
        }
        let head = self.atom()?;
        let rule = match self.next() {
            Tok::Dot => Rule::fact(head),
            Tok::If => {
                let body = self.body()?;
                self.expect(Tok::Dot)?;
                Rule { head: Literal::pos(head), body: Some(body) }
            }
            other => return Err(err(self.toks[self.at - 1].1, format!("expected `.` or `:-`, found {}", other.describe()))),
        };
        check_rule(&rule).map_err(|m| err(start, m))?;
        Ok(rule)
    }

    fn body(&mut self) -> Result<Body> {
        let mut items = vec![self.conj()?];
        while *self.peek() == Tok::Semi || self.is_kw("or") {
            self.next();
            items.push(self.conj()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Body::Or(items) })
    }

    fn conj(&mut self) -> Result<Body> {
        let mut items = vec![self.item()?];
        while *self.peek() == Tok::Comma || self.is_kw("and") {
            self.next();
            items.push(self.item()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Body::And(items) })
    }

    fn item(&mut self) -> Result<Body> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::LParen => {
                self.next();
                let b = self.body()?;
                self.expect(Tok::RParen)?;
                Ok(b)
            }
            Tok::Ident(kw) if kw == "not" => {
                self.next();
                match self.peek().clone() {
                    Tok::Ident(k) if matches!(k.as_str(), "count" | "min" | "max" | "sum") => {
                        Err(err(pos, "negation cannot be applied to a comparison; use the complementary operator"))
                    }
                    Tok::LParen => {
                        self.next();
                        let inner = self.body()?;
                        self.expect(Tok::RParen)?;
                        match inner {
                            Body::Lit(l) if l.positive => Ok(Body::Lit(Literal::neg(l.atom))),
                            Body::Cmp(_) => Err(err(pos, "negation cannot be applied to a comparison; use the complementary operator")),
                            _ => Err(err(pos, "negation applies only to predicate atoms")),
                        }
                    }
                    Tok::Ident(k) if KEYWORDS.contains(&k.as_str()) => Err(err(pos, "negation applies only to predicate atoms")),
                    _ => Ok(Body::Lit(Literal::neg(self.atom()?))),
                }
            }
            Tok::Ident(kw) if kw == "some" || kw == "each" => {
                self.next();
                let vars = self.var_list()?;
                self.expect(Tok::Bar)?;
                let inner = self.body()?;
                let mut inner_free = BTreeSet::new();
                inner.for_each_term(&mut |t| {
                    if let Some(v) = t.as_var() {
                        inner_free.insert(v.clone());
                    }
                });
                if let Some(v) = vars.iter().find(|v| !inner_free.contains(*v)) {
                    return Err(err(pos, format!("quantified variable {v} does not occur in the quantifier body")));
                }
                Ok(if kw == "some" { Body::Exists(vars, Box::new(inner)) } else { Body::Forall(vars, Box::new(inner)) })
            }
            Tok::Ident(kw) if matches!(kw.as_str(), "count" | "min" | "max" | "sum") && *self.peek2() == Tok::LBrace => {
                self.next();
                let agg = match kw.as_str() {
                    "count" => AggOp::Count,
                    "min" => AggOp::Min,
                    "max" => AggOp::Max,
                    _ => AggOp::Sum,
                };
                let set = self.set_expr()?;
                if agg == AggOp::Sum && set.vars.len() != 1 {
                    return Err(err(pos, "sum requires a set expression over exactly one variable"));
                }
                let op_pos = self.pos();
                let op = match self.next() {
                    Tok::Cmp(op) => op,
                    other => return Err(err(op_pos, format!("expected comparison operator, found {}", other.describe()))),
                };
                let rhs = self.term()?;
                Ok(Body::Cmp(Comparison { agg, set, op, rhs }))
            }
            Tok::Ident(_) => Ok(Body::Lit(Literal::pos(self.atom()?))),
            other => Err(err(pos, format!("expected a hypothesis, found {}", other.describe()))),
        }
    }

    fn var_list(&mut self) -> Result<Vec<Var>> {
        let mut vars = Vec::new();
        loop {
            let pos = self.pos();
            match self.next() {
                Tok::Var(v) => vars.push(Var::new(v)),
                other => return Err(err(pos, format!("expected variable, found {}", other.describe()))),
            }
            if *self.peek() != Tok::Comma {
                return Ok(vars);
            }
            self.next();
        }
    }

    fn set_expr(&mut self) -> Result<SetExpr> {
        let pos = self.pos();
        self.expect(Tok::LBrace)?;
        let vars = self.var_list()?;
        self.expect(Tok::Colon)?;
        let mut body = Vec::new();
        loop {
            let lpos = self.pos();
            let positive = if self.is_kw("not") {
                self.next();
                false
            } else {
                true
            };
            match self.peek() {
                Tok::Ident(k) if !KEYWORDS.contains(&k.as_str()) => {}
                _ => return Err(err(lpos, "set-expression bodies admit only predicate literals, possibly negated")),
            }
            body.push(Literal { positive, atom: self.atom()? });
            if *self.peek() == Tok::Comma || self.is_kw("and") {
                self.next();
                continue;
            }
            break;
        }
        self.expect(Tok::RBrace)?;
        let set = SetExpr { vars, body };
        let mut occurring = BTreeSet::new();
        for l in &set.body {
            occurring.extend(l.atom.args.iter().filter_map(Term::as_var).cloned());
        }
        if let Some(v) = set.vars.iter().find(|v| !occurring.contains(*v)) {
            return Err(err(pos, format!("set variable {v} does not occur in the set expression body")));
        }
        Ok(set)
    }

    fn atom(&mut self) -> Result<Atom> {
        let pos = self.pos();
        let name = match self.next() {
            Tok::Ident(n) if !KEYWORDS.contains(&n.as_str()) => n,
            other => return Err(err(pos, format!("expected predicate, found {}", other.describe()))),
        };
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.next();
            if *self.peek() != Tok::RParen {
                loop {
                    args.push(self.term()?);
                    if *self.peek() != Tok::Comma {
                        break;
                    }
                    self.next();
                }
            }
            self.expect(Tok::RParen)?;
        }
        Ok(Atom::new(&name, args))
    }

    fn term(&mut self) -> Result<Term> {
        let pos = self.pos();
        match self.next() {
            Tok::Var(v) => Ok(Term::var(&v)),
            Tok::Str(s) => Ok(Term::Const(Constant::Sym(s))),
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => Ok(Term::Const(Constant::Sym(s))),
            Tok::Num(n) => {
                let mut text = n;
                if *self.peek() == Tok::Slash {
                    if let Tok::Num(d) = self.peek2().clone() {
                        self.next();
                        self.next();
                        text = format!("{text}/{d}");
                    }
                }
                Constant::parse_number(&text).map(Term::Const).ok_or_else(|| err(pos, format!("invalid number `{text}`")))
            }
            other => Err(err(pos, format!("expected a term, found {}", other.describe()))),
        }
    }
}

/// Applies one declaration keyword (`certain`, `uncertain`, `complete`,
/// `closed`, optionally preceded by `not`) to a declaration.
pub fn apply_declaration_word(decl: &mut Declaration, word: &str, negated: bool) -> Result<(), String> {
    match (word, negated) {
        ("certain", false) => set_once(&mut decl.certainty, Certainty::Certain, "certainty"),
        ("uncertain", false) => set_once(&mut decl.certainty, Certainty::Uncertain, "certainty"),
        ("complete", n) => set_once(&mut decl.complete, !n, "completeness"),
        ("closed", n) => set_once(&mut decl.closed, !n, "closedness"),
        (w, _) => Err(format!("unknown declaration keyword `{w}`")),
    }
}

fn set_once<T: PartialEq + Copy>(slot: &mut Option<T>, value: T, what: &str) -> Result<(), String> {
    match slot {
        Some(old) if *old != value => Err(format!("conflicting {what} keywords")),
        _ => {
            *slot = Some(value);
            Ok(())
        }
    }
}

/// Safety conditions on a rule: facts are ground, conclusion variables occur
/// free in the body, and comparison right-hand-side variables are bound by
/// some other part of the body.
pub fn check_rule(rule: &Rule) -> Result<(), String> {
    let head_vars: BTreeSet<Var> = rule.head.atom.args.iter().filter_map(Term::as_var).cloned().collect();
    let Some(body) = &rule.body else {
        if let Some(v) = head_vars.iter().next() {
            return Err(format!("fact {} contains variable {v}", rule.head.atom));
        }
        return Ok(());
    };
    let free = body.free_vars();
    if let Some(v) = head_vars.iter().find(|v| !free.contains(*v)) {
        return Err(format!("unsafe rule: conclusion variable {v} does not occur in the body"));
    }
    let mut binding = BTreeSet::new();
    collect_binding_vars(body, &mut binding);
    let mut rhs_vars = Vec::new();
    collect_rhs_vars(body, &BTreeSet::new(), &mut rhs_vars);
    if let Some(v) = rhs_vars.iter().find(|v| !binding.contains(*v)) {
        return Err(format!("unsafe rule: comparison operand {v} is not bound by another hypothesis"));
    }
    Ok(())
}

/// Free variables of a body, ignoring occurrences as comparison operands.
fn collect_binding_vars(body: &Body, out: &mut BTreeSet<Var>) {
    match body {
        Body::Cmp(c) => out.extend(c.set.free_vars()),
        Body::And(bs) | Body::Or(bs) => bs.iter().for_each(|b| collect_binding_vars(b, out)),
        Body::Exists(vs, b) | Body::Forall(vs, b) => {
            let mut inner = BTreeSet::new();
            collect_binding_vars(b, &mut inner);
            out.extend(inner.into_iter().filter(|v| !vs.contains(v)));
        }
        other => out.extend(other.free_vars()),
    }
}

fn collect_rhs_vars(body: &Body, bound: &BTreeSet<Var>, out: &mut Vec<Var>) {
    match body {
        Body::Cmp(c) => {
            if let Some(v) = c.rhs.as_var() {
                if !bound.contains(v) {
                    out.push(v.clone());
                }
            }
        }
        Body::And(bs) | Body::Or(bs) => bs.iter().for_each(|b| collect_rhs_vars(b, bound, out)),
        Body::Exists(vs, b) | Body::Forall(vs, b) => {
            // A quantified operand is bound by its quantifier.
            let mut inner = bound.clone();
            inner.extend(vs.iter().cloned());
            collect_rhs_vars(b, &inner, out);
        }
        _ => {}
    }
}

/// Parses a program from source text.
pub fn parse(src: &str) -> Result<Program> {
    let toks = lex(src)?;
    Parser { toks, at: 0 }.program()
}

/// Parses a single rule or fact, e.g. for tests and the browser demo.
pub fn parse_rule(src: &str) -> Result<Rule> {
    let prog = parse(src)?;
    match <[Rule; 1]>::try_from(prog.rules) {
        Ok([r]) if prog.declarations.is_empty() => Ok(r),
        _ => Err(Error::Parse { line: 1, col: 1, msg: "expected exactly one clause".into() }),
    }
}
