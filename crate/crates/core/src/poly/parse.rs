//! Text grammar for polynomials.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (['*'] factor)*
//! factor := atom ['^' integer]
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Identifiers that are not variable names are split greedily into variable
//! names, so `xy^3z^6` reads as `x * y^3 * z^6` in a ring with variables
//! `x, y, z`. An exponent binds to the last variable of such a run.

use std::sync::Arc;

use crate::error::{Error, Result};

use super::{PolyRing, Polynomial};

/// Location of the first character of a source fragment, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourcePos {
    pub line: usize,
    pub column: usize,
}

impl Default for SourcePos {
    fn default() -> Self {
        SourcePos { line: 1, column: 1 }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(u128),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer {
    toks: Vec<(Tok, SourcePos)>,
}

fn lex(src: &str, start: SourcePos) -> Result<Lexer> {
    let mut toks = Vec::new();
    let mut line = start.line;
    let mut col = start.column;
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = SourcePos { line, column: col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            toks.push((t, pos));
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[s..i].iter().collect();
            let v = text
                .parse::<u128>()
                .map_err(|_| Error::parse(pos.line, pos.column, "integer literal too large"))?;
            col += i - s;
            toks.push((Tok::Int(v), pos));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - s;
            toks.push((Tok::Ident(chars[s..i].iter().collect()), pos));
            continue;
        }
        return Err(Error::parse(
            pos.line,
            pos.column,
            format!("unexpected character `{c}`"),
        ));
    }
    toks.push((Tok::End, SourcePos { line, column: col }));
    Ok(Lexer { toks })
}

struct Parser<'a> {
    ring: &'a Arc<PolyRing>,
    toks: Vec<(Tok, SourcePos)>,
    at: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> SourcePos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let p = self.pos();
        Err(Error::parse(p.line, p.column, msg))
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = if *self.peek() == Tok::Minus {
            self.bump();
            -&self.term()?
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Tok::Int(_) | Tok::Ident(_) | Tok::LParen)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            if *self.peek() == Tok::Star {
                self.bump();
                acc = &acc * &self.factor()?;
            } else if self.starts_factor() {
                acc = &acc * &self.factor()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn exponent(&mut self) -> Result<Option<u64>> {
        if *self.peek() != Tok::Caret {
            return Ok(None);
        }
        self.bump();
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                u64::try_from(v)
                    .map(Some)
                    .or_else(|_| self.err("exponent too large"))
            }
            Tok::Minus => self.err("negative exponent"),
            _ => self.err("expected exponent after `^`"),
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let ring = self.ring;
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                let c = (v % ring.characteristic().get() as u128) as i64;
                let base = Polynomial::constant(ring, c);
                Ok(match self.exponent()? {
                    Some(e) => base.pow(e),
                    None => base,
                })
            }
            Tok::Ident(name) => {
                let pos = self.pos();
                self.bump();
                let vars = split_identifier(ring, &name).ok_or_else(|| {
                    Error::parse(pos.line, pos.column, format!("unknown variable `{name}`"))
                })?;
                let e = self.exponent()?.unwrap_or(1);
                let mut acc = Polynomial::one(ring);
                for (k, &v) in vars.iter().enumerate() {
                    let x = Polynomial::var(ring, v);
                    let x = if k + 1 == vars.len() { x.pow(e) } else { x };
                    acc = &acc * &x;
                }
                Ok(acc)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.err("expected `)`");
                }
                self.bump();
                Ok(match self.exponent()? {
                    Some(e) => inner.pow(e),
                    None => inner,
                })
            }
            Tok::End => self.err("unexpected end of input"),
            t => self.err(format!("unexpected token {t:?}")),
        }
    }
}

/// Longest-match split of an identifier into variable indices.
fn split_identifier(ring: &PolyRing, ident: &str) -> Option<Vec<usize>> {
    if let Some(i) = ring.var_index(ident) {
        return Some(vec![i]);
    }
    let mut out = Vec::new();
    let mut rest = ident;
    while !rest.is_empty() {
        let (idx, len) = ring
            .names()
            .iter()
            .enumerate()
            .filter(|(_, n)| rest.starts_with(n.as_str()))
            .map(|(i, n)| (i, n.len()))
            .max_by_key(|&(_, l)| l)?;
        out.push(idx);
        rest = &rest[len..];
    }
    Some(out)
}

/// Parses a polynomial over `ring`.
pub fn parse_poly(src: &str, ring: &Arc<PolyRing>) -> Result<Polynomial> {
    parse_poly_at(src, ring, SourcePos::default())
}

/// As [`parse_poly`], reporting error positions relative to `start`.
pub fn parse_poly_at(src: &str, ring: &Arc<PolyRing>, start: SourcePos) -> Result<Polynomial> {
    let lexer = lex(src, start)?;
    let mut p = Parser {
        ring,
        toks: lexer.toks,
        at: 0,
    };
    let f = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("trailing input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeChar;
    use crate::poly::MonomialOrder;

    fn xyz(p: u32) -> Arc<PolyRing> {
        PolyRing::new(
            vec!["x".into(), "y".into(), "z".into()],
            PrimeChar::new(p).unwrap(),
            MonomialOrder::Grevlex,
        )
        .unwrap()
    }

    #[test]
    fn fermat_quintic_relation() {
        let r = xyz(7);
        let f = parse_poly("x^5 + y^5 + z^5", &r).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.to_string(), "x^5 + y^5 + z^5");
    }

    #[test]
    fn implicit_products() {
        let r = xyz(7);
        let u = parse_poly("xy^3z^6", &r).unwrap();
        assert_eq!(u.to_string(), "x*y^3*z^6");
        assert_eq!(u, parse_poly("x * y^3 * z^6", &r).unwrap());
        assert_eq!(
            parse_poly("2(x+y)", &r).unwrap(),
            parse_poly("2*x + 2*y", &r).unwrap()
        );
    }

    #[test]
    fn zero_and_reduction_of_literals() {
        let r = xyz(7);
        assert!(parse_poly("0", &r).unwrap().is_zero());
        assert!(parse_poly("7*x", &r).unwrap().is_zero());
        assert_eq!(parse_poly("-x", &r).unwrap().to_string(), "6*x");
        assert_eq!(parse_poly("x - x", &r).unwrap().to_string(), "0");
    }

    #[test]
    fn errors_carry_positions() {
        let r = xyz(7);
        match parse_poly("x + w", &r) {
            Err(Error::Parse {
                line,
                column,
                message,
            }) => {
                assert_eq!((line, column), (1, 5));
                assert!(message.contains("unknown variable"));
            }
            other => panic!("{other:?}"),
        }
        match parse_poly("x^-2", &r) {
            Err(Error::Parse { message, .. }) => assert!(message.contains("negative exponent")),
            other => panic!("{other:?}"),
        }
        match parse_poly("x +\n  (y", &r) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_poly("", &r).is_err());
        assert!(parse_poly("x y )", &r).is_err());
    }
}
