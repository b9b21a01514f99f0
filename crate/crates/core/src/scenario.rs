//! Scenario files: a ring, named ideals, a test ideal, flags and checks.
//!
//! ```text
//! # comment
//! ring R = F(7)[x,y,z] / (x^5 + y^5 + z^5);
//! ideal J = (y, z);
//! ideal U = (x^2);
//! ideal I = J + U;
//! ideal m = maximal;
//! tau = m^3 "graded test ideal of the quintic";
//! flag gorenstein_parameter;
//! note "free text";
//! check member x^2*y in J*(J:I) as x2y_in_JJI expect false;
//! ```
//!
//! Ideal expressions combine names, generator lists `(f, g)` and `maximal`
//! with `+`, `*`, `:`, `cap`, `^n` and `^[q]`. Postfix powers bind tightest,
//! then `*`, then `+`, `:` and `cap` from left to right. A parenthesis that
//! opens with an ideal name groups an expression; otherwise it is a list of
//! generators. The name `m` denotes the maximal ideal unless declared, and
//! `I` denotes `J + U` once `J` exists.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::PrimeChar;
use crate::groebner::GbLimits;
use crate::ideals::{IdealHandle, QuotientRing};
use crate::poly::{parse_poly, parse_poly_at, MonomialOrder, PolyRing, Polynomial, SourcePos};

const RESERVED: &[&str] = &["maximal", "cap", "in", "as", "expect"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Sum,
    Product,
    Colon,
    Cap,
}

#[derive(Clone, Debug)]
pub enum IdealExpr {
    Named(String),
    Gens(Vec<Polynomial>),
    Maximal,
    Binary(BinOp, Box<IdealExpr>, Box<IdealExpr>),
    Power(Box<IdealExpr>, u32),
    Bracket(Box<IdealExpr>, u64),
}

impl fmt::Display for IdealExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealExpr::Named(n) => write!(f, "{n}"),
            IdealExpr::Maximal => write!(f, "maximal"),
            IdealExpr::Gens(g) => {
                write!(f, "(")?;
                for (i, p) in g.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            IdealExpr::Binary(op, a, b) => {
                let sym = match op {
                    BinOp::Sum => " + ",
                    BinOp::Product => "*",
                    BinOp::Colon => ":",
                    BinOp::Cap => " cap ",
                };
                write!(f, "{}{sym}{}", Grouped(a), Grouped(b))
            }
            IdealExpr::Power(a, n) => write!(f, "{}^{n}", Grouped(a)),
            IdealExpr::Bracket(a, q) => write!(f, "{}^[{q}]", Grouped(a)),
        }
    }
}

struct Grouped<'a>(&'a IdealExpr);

impl fmt::Display for Grouped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            IdealExpr::Binary(..) => write!(f, "({})", self.0),
            other => write!(f, "{other}"),
        }
    }
}

/// Named ideals available while evaluating expressions.
pub type Env = HashMap<String, IdealHandle>;

impl IdealExpr {
    pub fn eval(&self, ring: &Arc<QuotientRing>, env: &Env) -> Result<IdealHandle> {
        Ok(match self {
            IdealExpr::Named(n) => match env.get(n) {
                Some(a) => a.clone(),
                None if n == "m" => IdealHandle::maximal(ring),
                None => return Err(Error::usage(format!("unknown ideal `{n}`"))),
            },
            IdealExpr::Gens(g) => IdealHandle::new(ring, g.clone())?,
            IdealExpr::Maximal => IdealHandle::maximal(ring),
            IdealExpr::Binary(op, a, b) => {
                let a = a.eval(ring, env)?;
                let b = b.eval(ring, env)?;
                match op {
                    BinOp::Sum => a.sum(&b)?,
                    BinOp::Product => a.product(&b)?,
                    BinOp::Colon => a.colon(&b)?,
                    BinOp::Cap => a.intersect(&b)?,
                }
            }
            IdealExpr::Power(a, n) => a.eval(ring, env)?.power(*n)?,
            IdealExpr::Bracket(a, q) => a.eval(ring, env)?.bracket_power(*q)?,
        })
    }
}

/// A literal after `expect`, and the value a check computes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Word(String),
    List(Vec<Value>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Word(w) => write!(f, "{w}"),
            Value::List(v) => {
                write!(f, "[")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    A1,
    A2,
    /// a1 and a2 together.
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketProperty {
    Sandwich,
    Equal,
    AffineSandwich,
    AffineEqual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialPart {
    A,
    B,
}

#[derive(Clone, Debug)]
pub enum CheckCommand {
    Member {
        f: Polynomial,
        ideal: IdealExpr,
        local: bool,
    },
    Subset {
        a: IdealExpr,
        b: IdealExpr,
        local: bool,
    },
    Equal {
        a: IdealExpr,
        b: IdealExpr,
        local: bool,
    },
    StarMember {
        f: Polynomial,
        ideal: IdealExpr,
    },
    StarspMember {
        f: Polynomial,
        ideal: IdealExpr,
    },
    DegreeCriterion {
        f: Polynomial,
        ideal: IdealExpr,
    },
    /// Proved `*`-independence of the generators of `J`.
    Independent,
    Criteria,
    Hypothesis(Hypothesis),
    Bracket(BracketProperty),
    RedNumber,
    TauLowerBound,
    /// Both chain conditions for a reduction `K`, as a two-element list.
    Chain(IdealExpr),
    /// Criteria conclusion after scaling by `q = p^e`.
    FrobScale(u32),
    /// Containment (a) or (b) after scaling by `q = p^e`.
    Special(u32, SpecialPart),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Bool,
    Status,
    Conclusion,
    BoolList,
}

impl CheckCommand {
    fn kind(&self) -> Kind {
        match self {
            CheckCommand::StarMember { .. } | CheckCommand::StarspMember { .. } => Kind::Status,
            CheckCommand::Criteria | CheckCommand::FrobScale(_) => Kind::Conclusion,
            CheckCommand::Chain(_) => Kind::BoolList,
            _ => Kind::Bool,
        }
    }

    /// Whether the check needs the `*`-reduction data `J`, `U` and `tau`.
    pub fn needs_star_input(&self) -> bool {
        matches!(
            self,
            CheckCommand::Independent
                | CheckCommand::Criteria
                | CheckCommand::Hypothesis(_)
                | CheckCommand::Bracket(_)
                | CheckCommand::RedNumber
                | CheckCommand::TauLowerBound
                | CheckCommand::Chain(_)
                | CheckCommand::FrobScale(_)
                | CheckCommand::Special(..)
        )
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub pos: SourcePos,
    pub label: Option<String>,
    pub command: CheckCommand,
    pub expect: Value,
    /// Statement text between `check` and `expect`, whitespace-normalized.
    pub text: String,
}

#[derive(Clone, Debug)]
pub struct IdealDecl {
    pub name: String,
    pub expr: IdealExpr,
    pub pos: SourcePos,
}

#[derive(Clone, Debug)]
pub struct TauDecl {
    pub expr: IdealExpr,
    pub provenance: Option<String>,
    pub pos: SourcePos,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    GorensteinParameter,
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub ring_name: String,
    pub ring: Arc<QuotientRing>,
    pub ideals: Vec<IdealDecl>,
    pub tau: Option<TauDecl>,
    pub flags: Vec<Flag>,
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
}

impl Scenario {
    pub fn has_flag(&self, f: Flag) -> bool {
        self.flags.contains(&f)
    }

    pub fn declares(&self, name: &str) -> bool {
        self.ideals.iter().any(|d| d.name == name)
    }
}

pub fn parse_scenario(src: &str) -> Result<Scenario> {
    parse_scenario_with_limits(src, GbLimits::default())
}

pub fn parse_scenario_with_limits(src: &str, limits: GbLimits) -> Result<Scenario> {
    let mut p = Parser::new(src, limits);
    p.scenario()
}

/// Parses a ring description `F(p)[vars] / (relations)`; the relations part is optional.
pub fn parse_ring_text(src: &str, limits: GbLimits) -> Result<Arc<QuotientRing>> {
    let mut p = Parser::new(src, limits);
    p.ws();
    let ring = p.ring_body()?;
    p.ws();
    if p.i < p.chars.len() {
        return Err(p.err(p.i, "unexpected input after ring"));
    }
    Ok(ring)
}

/// Parses an ideal expression in the context of `scenario` (or of a bare ring).
pub fn parse_ideal_expr(
    src: &str,
    ring: &Arc<QuotientRing>,
    names: &[String],
) -> Result<IdealExpr> {
    let mut p = Parser::new(src, *ring.limits());
    p.ring = Some(ring.clone());
    p.names = names.to_vec();
    p.ws();
    let e = p.expr()?;
    p.ws();
    if p.i < p.chars.len() {
        return Err(p.err(p.i, "unexpected input after ideal expression"));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    /// (line, column) of each character, plus one entry for end of input.
    positions: Vec<SourcePos>,
    i: usize,
    limits: GbLimits,
    ring: Option<Arc<QuotientRing>>,
    names: Vec<String>,
}

impl Parser {
    fn new(src: &str, limits: GbLimits) -> Self {
        let chars: Vec<char> = src.chars().collect();
        let mut positions = Vec::with_capacity(chars.len() + 1);
        let (mut line, mut column) = (1, 1);
        for &c in &chars {
            positions.push(SourcePos { line, column });
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        positions.push(SourcePos { line, column });
        Parser {
            chars,
            positions,
            i: 0,
            limits,
            ring: None,
            names: Vec::new(),
        }
    }

    fn err(&self, at: usize, msg: impl Into<String>) -> Error {
        let p = self.positions[at.min(self.chars.len())];
        Error::parse(p.line, p.column, msg)
    }

    fn ws(&mut self) {
        while self.i < self.chars.len() {
            let c = self.chars[self.i];
            if c == '#' {
                while self.i < self.chars.len() && self.chars[self.i] != '\n' {
                    self.i += 1;
                }
            } else if c.is_whitespace() {
                self.i += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        self.ws();
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(self.i, format!("expected `{c}`")))
        }
    }

    fn ident_at(&self, mut j: usize) -> Option<(String, usize)> {
        let start = j;
        match self.chars.get(j) {
            Some(c) if c.is_alphabetic() || *c == '_' => {}
            _ => return None,
        }
        while j < self.chars.len() && (self.chars[j].is_alphanumeric() || self.chars[j] == '_') {
            j += 1;
        }
        Some((self.chars[start..j].iter().collect(), j))
    }

    fn peek_ident(&mut self) -> Option<String> {
        self.ws();
        self.ident_at(self.i).map(|(s, _)| s)
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        self.ws();
        match self.ident_at(self.i) {
            Some((s, end)) => {
                self.i = end;
                Ok(s)
            }
            None => Err(self.err(self.i, format!("expected {what}"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if self.peek_ident().as_deref() == Some(kw) {
            self.i += kw.chars().count();
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.keyword(kw) {
            Ok(())
        } else {
            Err(self.err(self.i, format!("expected `{kw}`")))
        }
    }

    fn int(&mut self) -> Result<u64> {
        self.ws();
        let start = self.i;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err(start, "expected an integer"));
        }
        let s: String = self.chars[start..self.i].iter().collect();
        s.parse()
            .map_err(|_| self.err(start, "integer literal too large"))
    }

    fn string(&mut self) -> Result<String> {
        self.ws();
        let start = self.i;
        if self.peek() != Some('"') {
            return Err(self.err(start, "expected a string literal"));
        }
        self.i += 1;
        let mut out = String::new();
        loop {
            match self.peek() {
                None => return Err(self.err(start, "unterminated string literal")),
                Some('"') => {
                    self.i += 1;
                    return Ok(out);
                }
                Some('\\') if self.chars.get(self.i + 1) == Some(&'"') => {
                    out.push('"');
                    self.i += 2;
                }
                Some(c) => {
                    out.push(c);
                    self.i += 1;
                }
            }
        }
    }

    fn ring(&self) -> &Arc<QuotientRing> {
        self.ring.as_ref().expect("ring parsed first")
    }

    fn is_ideal_name(&self, name: &str) -> bool {
        self.names.iter().any(|n| n == name)
            || (name == "m" && self.ring().poly_ring().var_index("m").is_none())
            || (name == "I" && self.names.iter().any(|n| n == "J"))
    }

    /// `F(p)[vars] [/ (relations)]`
    fn ring_body(&mut self) -> Result<Arc<QuotientRing>> {
        self.ws();
        let at = self.i;
        let f = self.ident("`F`")?;
        if f != "F" {
            return Err(self.err(at, "expected `F(p)`"));
        }
        self.expect('(')?;
        self.ws();
        let p_at = self.i;
        let p = self.int()?;
        let ch = u32::try_from(p)
            .map_err(|_| Error::usage("characteristic too large"))
            .and_then(PrimeChar::new)
            .map_err(|e| self.err(p_at, e.to_string()))?;
        self.expect(')')?;
        self.expect('[')?;
        let mut vars = Vec::new();
        loop {
            self.ws();
            let v_at = self.i;
            let v = self.ident("a variable name")?;
            if RESERVED.contains(&v.as_str()) {
                return Err(self.err(v_at, format!("`{v}` is reserved")));
            }
            if vars.contains(&v) {
                return Err(self.err(v_at, format!("duplicate variable `{v}`")));
            }
            vars.push(v);
            if !self.eat(',') {
                break;
            }
        }
        self.expect(']')?;
        let poly = PolyRing::new(vars, ch, MonomialOrder::Grevlex)?;
        let mut rels = Vec::new();
        if self.eat('/') {
            self.expect('(')?;
            rels = self.poly_list(&poly)?;
            let at = self.i;
            if rels.is_empty() {
                return Err(self.err(at, "empty relation list"));
            }
        }
        QuotientRing::new(poly, rels, self.limits)
    }

    /// End index of a polynomial starting at `self.i`.
    fn poly_extent(&self, stop_at_in: bool) -> usize {
        let mut depth = 0usize;
        let mut j = self.i;
        while j < self.chars.len() {
            let c = self.chars[j];
            match c {
                '(' => depth += 1,
                ')' if depth == 0 => break,
                ')' => depth -= 1,
                ',' | ';' if depth == 0 => break,
                _ => {}
            }
            if depth == 0 && stop_at_in && (c.is_alphabetic() || c == '_') {
                let boundary =
                    j == 0 || !(self.chars[j - 1].is_alphanumeric() || self.chars[j - 1] == '_');
                if let Some((w, end)) = self.ident_at(j) {
                    if boundary && w == "in" {
                        break;
                    }
                    j = end;
                    continue;
                }
            }
            j += 1;
        }
        j
    }

    fn poly_with(&mut self, poly: &Arc<PolyRing>, stop_at_in: bool) -> Result<Polynomial> {
        self.ws();
        let start = self.i;
        let end = self.poly_extent(stop_at_in);
        let text: String = self.chars[start..end].iter().collect();
        if text.trim().is_empty() {
            return Err(self.err(start, "expected a polynomial"));
        }
        let f = parse_poly_at(&text, poly, self.positions[start])?;
        self.i = end;
        Ok(f)
    }

    /// Comma-separated polynomials up to and including `)`; the `(` is consumed.
    fn poly_list(&mut self, poly: &Arc<PolyRing>) -> Result<Vec<Polynomial>> {
        let mut out = Vec::new();
        if self.eat(')') {
            return Ok(out);
        }
        loop {
            out.push(self.poly_with(poly, false)?);
            if self.eat(',') {
                continue;
            }
            self.expect(')')?;
            return Ok(out);
        }
    }

    fn expr(&mut self) -> Result<IdealExpr> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                BinOp::Sum
            } else if self.eat(':') {
                BinOp::Colon
            } else if self.keyword("cap") {
                BinOp::Cap
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = IdealExpr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<IdealExpr> {
        let mut lhs = self.postfix()?;
        while self.eat('*') {
            let rhs = self.postfix()?;
            lhs = IdealExpr::Binary(BinOp::Product, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn postfix(&mut self) -> Result<IdealExpr> {
        let mut e = self.atom()?;
        while self.eat('^') {
            if self.eat('[') {
                let at = self.i;
                let q = self.int()?;
                if self.ring().characteristic().log_of_power(q).is_none() {
                    return Err(self.err(
                        at,
                        format!("{q} is not a power of {}", self.ring().characteristic()),
                    ));
                }
                self.expect(']')?;
                e = IdealExpr::Bracket(Box::new(e), q);
            } else {
                let at = self.i;
                let n = self.int()?;
                let n = u32::try_from(n).map_err(|_| self.err(at, "exponent too large"))?;
                e = IdealExpr::Power(Box::new(e), n);
            }
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<IdealExpr> {
        self.ws();
        let at = self.i;
        if self.eat('(') {
            self.ws();
            let grouped = match self.ident_at(self.i) {
                Some((w, _)) => w == "maximal" || self.is_ideal_name(&w),
                None => false,
            };
            if grouped {
                let e = self.expr()?;
                self.expect(')')?;
                return Ok(e);
            }
            let poly = self.ring().poly_ring().clone();
            return Ok(IdealExpr::Gens(self.poly_list(&poly)?));
        }
        match self.ident_at(self.i) {
            Some((w, end)) if w == "maximal" => {
                self.i = end;
                Ok(IdealExpr::Maximal)
            }
            Some((w, end)) if self.is_ideal_name(&w) => {
                self.i = end;
                Ok(IdealExpr::Named(w))
            }
            Some((w, _)) => Err(self.err(at, format!("unknown ideal `{w}`"))),
            None => Err(self.err(at, "expected an ideal expression")),
        }
    }

    fn literal(&mut self) -> Result<Value> {
        if self.eat('[') {
            let mut v = Vec::new();
            if self.eat(']') {
                return Ok(Value::List(v));
            }
            loop {
                v.push(self.literal()?);
                if !self.eat(',') {
                    break;
                }
            }
            self.expect(']')?;
            return Ok(Value::List(v));
        }
        let w = self.ident("a literal")?;
        Ok(match w.as_str() {
            "true" => Value::Bool(true),
            "false" => Value::Bool(false),
            _ => Value::Word(w),
        })
    }

    fn check_literal(&self, kind: Kind, v: &Value, at: usize) -> Result<()> {
        const STATUS: &[&str] = &["ProvedIn", "ProvedOut", "Unknown"];
        const CONCLUSION: &[&str] = &[
            "ConfirmedFormula",
            "UpperBoundOnly",
            "LowerBoundOnly",
            "Inconclusive",
        ];
        let ok = match (kind, v) {
            (Kind::Bool, Value::Bool(_)) => true,
            (Kind::Status, Value::Word(w)) => STATUS.contains(&w.as_str()),
            (Kind::Conclusion, Value::Word(w)) => CONCLUSION.contains(&w.as_str()),
            (Kind::BoolList, Value::List(xs)) => xs.iter().all(|x| matches!(x, Value::Bool(_))),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            let want = match kind {
                Kind::Bool => "true or false",
                Kind::Status => "ProvedIn, ProvedOut or Unknown",
                Kind::Conclusion => {
                    "ConfirmedFormula, UpperBoundOnly, LowerBoundOnly or Inconclusive"
                }
                Kind::BoolList => "a list of booleans",
            };
            Err(self.err(at, format!("expected {want}, found `{v}`")))
        }
    }

    fn small_int(&mut self) -> Result<u32> {
        self.ws();
        let at = self.i;
        let n = self.int()?;
        u32::try_from(n).map_err(|_| self.err(at, "integer too large"))
    }

    fn check(&mut self, pos: SourcePos) -> Result<Check> {
        let text_start = self.i;
        self.ws();
        let cmd_at = self.i;
        let cmd = self.ident("a check command")?;
        let poly = self.ring().poly_ring().clone();
        let command = match cmd.as_str() {
            "member" | "local_member" | "star_member" | "starsp_member" | "degree_criterion" => {
                let f = self.poly_with(&poly, true)?;
                self.expect_keyword("in")?;
                let ideal = self.expr()?;
                match cmd.as_str() {
                    "member" => CheckCommand::Member {
                        f,
                        ideal,
                        local: false,
                    },
                    "local_member" => CheckCommand::Member {
                        f,
                        ideal,
                        local: true,
                    },
                    "star_member" => CheckCommand::StarMember { f, ideal },
                    "starsp_member" => CheckCommand::StarspMember { f, ideal },
                    _ => CheckCommand::DegreeCriterion { f, ideal },
                }
            }
            "subset" | "local_subset" => {
                let a = self.expr()?;
                self.expect_keyword("in")?;
                let b = self.expr()?;
                CheckCommand::Subset {
                    a,
                    b,
                    local: cmd == "local_subset",
                }
            }
            "equal" | "local_equal" => {
                let a = self.expr()?;
                self.expect('=')?;
                if self.peek() != Some('=') {
                    return Err(self.err(self.i, "expected `==`"));
                }
                self.i += 1;
                let b = self.expr()?;
                CheckCommand::Equal {
                    a,
                    b,
                    local: cmd == "local_equal",
                }
            }
            "independent" => CheckCommand::Independent,
            "criteria" => CheckCommand::Criteria,
            "red_number" => CheckCommand::RedNumber,
            "tau_lower_bound" => CheckCommand::TauLowerBound,
            "hypothesis" => {
                let at = self.i;
                CheckCommand::Hypothesis(match self.ident("a1, a2, a or b")?.as_str() {
                    "a1" => Hypothesis::A1,
                    "a2" => Hypothesis::A2,
                    "a" => Hypothesis::A,
                    "b" => Hypothesis::B,
                    w => return Err(self.err(at, format!("unknown hypothesis `{w}`"))),
                })
            }
            "bracket" => {
                let at = self.i;
                CheckCommand::Bracket(match self.ident("a bracket property")?.as_str() {
                    "sandwich" => BracketProperty::Sandwich,
                    "equal" => BracketProperty::Equal,
                    "affine_sandwich" => BracketProperty::AffineSandwich,
                    "affine_equal" => BracketProperty::AffineEqual,
                    w => return Err(self.err(at, format!("unknown bracket property `{w}`"))),
                })
            }
            "chain" => CheckCommand::Chain(self.expr()?),
            "frob_scale" => CheckCommand::FrobScale(self.small_int()?),
            "special" => {
                let e = self.small_int()?;
                let at = self.i;
                let part = match self.ident("`a` or `b`")?.as_str() {
                    "a" => SpecialPart::A,
                    "b" => SpecialPart::B,
                    w => return Err(self.err(at, format!("unknown part `{w}`"))),
                };
                CheckCommand::Special(e, part)
            }
            other => return Err(self.err(cmd_at, format!("unknown check command `{other}`"))),
        };
        let text_end = self.i;
        let label = if self.keyword("as") {
            Some(self.ident("a label")?)
        } else {
            None
        };
        self.expect_keyword("expect")?;
        self.ws();
        let lit_at = self.i;
        let expect = self.literal()?;
        self.check_literal(command.kind(), &expect, lit_at)?;
        let text = self.chars[text_start..text_end]
            .iter()
            .collect::<String>()
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ");
        Ok(Check {
            pos,
            label,
            command,
            expect,
            text,
        })
    }

    fn scenario(&mut self) -> Result<Scenario> {
        let mut ring_name = None;
        let mut ideals: Vec<IdealDecl> = Vec::new();
        let mut tau = None;
        let mut flags = Vec::new();
        let mut notes = Vec::new();
        let mut checks = Vec::new();
        let mut labels: Vec<String> = Vec::new();
        loop {
            self.ws();
            if self.i >= self.chars.len() {
                break;
            }
            let at = self.i;
            let pos = self.positions[at];
            let kw = self.ident("a statement")?;
            if kw != "ring" && self.ring.is_none() {
                return Err(self.err(at, "the first statement must declare the ring"));
            }
            match kw.as_str() {
                "ring" => {
                    if self.ring.is_some() {
                        return Err(self.err(at, "a scenario declares exactly one ring"));
                    }
                    ring_name = Some(self.ident("a ring name")?);
                    self.expect('=')?;
                    self.ring = Some(self.ring_body()?);
                }
                "ideal" => {
                    self.ws();
                    let name_at = self.i;
                    let name = self.ident("an ideal name")?;
                    if self.names.contains(&name) {
                        return Err(self.err(name_at, format!("duplicate ideal `{name}`")));
                    }
                    if RESERVED.contains(&name.as_str())
                        || parse_poly(&name, self.ring().poly_ring()).is_ok()
                    {
                        return Err(self.err(
                            name_at,
                            format!("ideal name `{name}` clashes with the ring's variables"),
                        ));
                    }
                    self.expect('=')?;
                    let expr = self.expr()?;
                    self.names.push(name.clone());
                    ideals.push(IdealDecl { name, expr, pos });
                }
                "tau" => {
                    if tau.is_some() {
                        return Err(self.err(at, "duplicate tau declaration"));
                    }
                    self.expect('=')?;
                    let expr = self.expr()?;
                    self.ws();
                    let provenance = if self.peek() == Some('"') {
                        Some(self.string()?)
                    } else {
                        None
                    };
                    tau = Some(TauDecl {
                        expr,
                        provenance,
                        pos,
                    });
                }
                "flag" => {
                    let f_at = self.i;
                    match self.ident("a flag name")?.as_str() {
                        "gorenstein_parameter" => flags.push(Flag::GorensteinParameter),
                        w => return Err(self.err(f_at, format!("unknown flag `{w}`"))),
                    }
                }
                "note" => notes.push(self.string()?),
                "check" => {
                    let c = self.check(pos)?;
                    if let Some(l) = &c.label {
                        if labels.contains(l) {
                            return Err(self.err(at, format!("duplicate check label `{l}`")));
                        }
                        labels.push(l.clone());
                    }
                    checks.push(c);
                }
                other => return Err(self.err(at, format!("unknown statement `{other}`"))),
            }
            self.expect(';')?;
        }
        let Some(ring) = self.ring.clone() else {
            return Err(self.err(self.i, "empty scenario: expected a ring declaration"));
        };
        Ok(Scenario {
            ring_name: ring_name.expect("set with ring"),
            ring,
            ideals,
            tau,
            flags,
            notes,
            checks,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUINTIC: &str = r#"
# the quintic
ring R = F(7)[x,y,z] / (x^5 + y^5 + z^5);
ideal J = (y, z);
ideal U = (x^2);
tau = m^3 "graded test ideal";
flag gorenstein_parameter;
check member x^2*y in J*(J:I) as x2y expect false;
check criteria expect Inconclusive;
check chain J expect [true, true];
"#;

    #[test]
    fn parses_a_full_scenario() {
        let s = parse_scenario(QUINTIC).unwrap();
        assert_eq!(s.ring_name, "R");
        assert_eq!(s.ideals.len(), 2);
        assert!(s.has_flag(Flag::GorensteinParameter));
        assert_eq!(
            s.tau.as_ref().unwrap().provenance.as_deref(),
            Some("graded test ideal")
        );
        assert_eq!(s.checks.len(), 3);
        assert_eq!(s.checks[0].label.as_deref(), Some("x2y"));
        assert_eq!(s.checks[0].text, "member x^2*y in J*(J:I)");
        assert_eq!(s.checks[0].pos, SourcePos { line: 8, column: 1 });
        match &s.checks[0].command {
            CheckCommand::Member { ideal, .. } => assert_eq!(ideal.to_string(), "J*(J:I)"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn expression_evaluation() {
        let s = parse_scenario(QUINTIC).unwrap();
        let mut env = Env::new();
        for d in &s.ideals {
            let v = d.expr.eval(&s.ring, &env).unwrap();
            env.insert(d.name.clone(), v);
        }
        let e = parse_ideal_expr("(J + (x^3))^[7] cap m^2", &s.ring, &["J".into()]).unwrap();
        let a = e.eval(&s.ring, &env).unwrap();
        assert!(a.contains(&s.ring.parse_poly("y^7").unwrap()).unwrap());
        assert!(!a.contains(&s.ring.parse_poly("x^3").unwrap()).unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_scenario("").unwrap_err();
        assert!(
            matches!(
                e,
                Error::Parse {
                    line: 1,
                    column: 1,
                    ..
                }
            ),
            "{e}"
        );
        let e = parse_scenario("# only a comment\n").unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));

        let dup = "ring R = F(7)[x,y];\nideal A = (x);\nideal A = (y);\n";
        let e = parse_scenario(dup).unwrap_err();
        assert_eq!(e, Error::parse(3, 7, "duplicate ideal `A`"));

        let e = parse_scenario("ring R = F(7)[x,y];\nideal A = (x + w);\n").unwrap_err();
        assert!(
            matches!(
                e,
                Error::Parse {
                    line: 2,
                    column: 16,
                    ..
                }
            ),
            "{e}"
        );

        let e = parse_scenario("ring R = F(7)[x,y];\nideal A = B + (x);\n").unwrap_err();
        assert!(
            matches!(
                e,
                Error::Parse {
                    line: 2,
                    column: 11,
                    ..
                }
            ),
            "{e}"
        );

        let e = parse_scenario("ring R = F(8)[x];\n").unwrap_err();
        assert!(
            matches!(
                e,
                Error::Parse {
                    line: 1,
                    column: 12,
                    ..
                }
            ),
            "{e}"
        );

        let two = "ring R = F(7)[x];\nring S = F(5)[y];\n";
        assert!(matches!(
            parse_scenario(two),
            Err(Error::Parse { line: 2, .. })
        ));

        let lit = "ring R = F(7)[x];\nideal A = (x);\ncheck member x in A expect maybe;\n";
        assert!(matches!(
            parse_scenario(lit),
            Err(Error::Parse {
                line: 3,
                column: 28,
                ..
            })
        ));

        let clash = "ring R = F(7)[x,y];\nideal xy = (x);\n";
        assert!(parse_scenario(clash).is_err());

        let q = "ring R = F(7)[x];\nideal A = (x)^[6];\n";
        assert!(matches!(
            parse_scenario(q),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn ring_text() {
        let r = parse_ring_text("F(7)[x,y,z] / (x*y*z)", GbLimits::default()).unwrap();
        assert_eq!(r.nvars(), 3);
        assert_eq!(r.relations().len(), 1);
        let r = parse_ring_text("F(3)[a,b]", GbLimits::default()).unwrap();
        assert!(r.relations().is_empty());
        assert!(parse_ring_text("F(3)[a,b] junk", GbLimits::default()).is_err());
    }
}
