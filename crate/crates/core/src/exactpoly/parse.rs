//! Minimal polynomial string parser: `+ - * ^ ( )`, integer coefficients, named variables.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::field::Field;
use super::poly::{MultiPoly, Vars};
use super::scalar::Scalar;
use super::PolyError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

fn lex(src: &str) -> Result<Vec<Tok>, PolyError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' | '\u{2212}' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::Open);
                i += 1
            }
            ')' => {
                out.push(Tok::Close);
                i += 1
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Tok::Int(s.parse().expect("digits")));
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(PolyError::Parse(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    vars: Vars,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = MultiPoly::zero(self.vars.clone(), Field::Rational);
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -1
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign > 0 { &acc + &t } else { &acc - &t };
            match self.peek() {
                None | Some(Tok::Close) => return Ok(acc),
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                Some(t) => return Err(PolyError::Parse(format!("unexpected token {t:?}"))),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, PolyError> {
        let base = match self.next() {
            Some(Tok::Int(n)) => {
                MultiPoly::constant(self.vars.clone(), Scalar::Rational(BigRational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => MultiPoly::var(self.vars.clone(), &Field::Rational, &name)?,
            Some(Tok::Open) => {
                let inner = self.expr()?;
                if self.next() != Some(Tok::Close) {
                    return Err(PolyError::Parse("unbalanced parenthesis".into()));
                }
                inner
            }
            other => return Err(PolyError::Parse(format!("expected number or variable, found {other:?}"))),
        };
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Tok::Int(e)) => {
                    let e: u32 = e.try_into().map_err(|_| PolyError::Parse("exponent too large".into()))?;
                    return Ok(base.pow(e));
                }
                other => return Err(PolyError::Parse(format!("expected exponent, found {other:?}"))),
            }
        }
        Ok(base)
    }
}

pub(crate) fn parse_poly(src: &str, vars: Vars) -> Result<MultiPoly, PolyError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(PolyError::Parse("empty polynomial".into()));
    }
    let mut parser = Parser { toks: &toks, pos: 0, vars };
    let p = parser.expr()?;
    match parser.peek() {
        None => Ok(p),
        Some(t) => Err(PolyError::Parse(format!("unexpected token {t:?}"))),
    }
}
