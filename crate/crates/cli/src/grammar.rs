//! Polynomial expressions.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary | power)*
//! unary  := ("+" | "-") unary | power
//! power  := atom ("^" integer)?
//! atom   := integer | name | "(" expr ")"
//! ```
//!
//! A name or parenthesis directly after a factor multiplies it, so `2i`,
//! `3x^2` and `(1 + 2i) x` are accepted. Names resolve to variables first, then to roots of the field
//! tower. Division is only by nonzero constants.

use std::fmt;

use coxring_core::numfield::{Tower, TowerElement};
use coxring_core::polyalg::Polynomial;
use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.offset + 1, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Name(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push((st, Tok::Num(s[st..i].parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((st, Tok::Name(s[st..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            let ch = s[i..].chars().next().expect("in bounds");
            return Err(ParseError { offset: i, message: format!("unexpected character '{ch}'") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vars: &'a [String],
    tower: &'a Tower,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset: self.offset(), message: message.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn constant(&self, q: BigRational) -> Polynomial {
        Polynomial::constant(self.vars.len(), TowerElement::from_rational(self.tower, q))
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let at = self.offset();
                let d = self.unary()?;
                let c = match d.terms().next() {
                    Some((e, c)) if d.len() == 1 && e.iter().all(|&k| k == 0) => c.clone(),
                    None => return Err(ParseError { offset: at, message: "division by zero".into() }),
                    _ => return Err(ParseError { offset: at, message: "division by a non-constant".into() }),
                };
                acc = acc.scale(&c.inv().expect("nonzero constant"));
            } else if matches!(self.peek(), Some(Tok::Name(_)) | Some(Tok::Sym('('))) {
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        if self.eat('-') {
            Ok(-&self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    let Ok(k) = u32::try_from(&n) else { return self.err("exponent too large") };
                    self.pos += 1;
                    Ok(base.pow(k))
                }
                _ => self.err("expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(self.constant(BigRational::from_integer(n)))
            }
            Some(Tok::Name(s)) => {
                if let Some(i) = self.vars.iter().position(|v| *v == s) {
                    self.pos += 1;
                    return Ok(Polynomial::var(self.vars.len(), self.tower, i));
                }
                if let Some(l) = self.tower.root_index(&s) {
                    self.pos += 1;
                    let r = TowerElement::root(self.tower, l + 1).expect("level in range");
                    return Ok(Polynomial::constant(self.vars.len(), r));
                }
                self.err(format!("unknown name '{s}'"))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(Tok::Sym(c)) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `s` as a polynomial in `vars` over `tower`.
pub fn parse_polynomial(s: &str, vars: &[String], tower: &Tower) -> Result<Polynomial, ParseError> {
    for v in vars {
        if tower.root_index(v).is_some() {
            return Err(ParseError { offset: 0, message: format!("variable '{v}' shadows a field root") });
        }
    }
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(ParseError { offset: 0, message: "empty expression".into() });
    }
    let mut p = Parser { toks, pos: 0, end: s.len(), vars, tower };
    let f = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}

/// Parses a field element written in the same grammar without variables.
pub fn parse_scalar(s: &str, tower: &Tower) -> Result<TowerElement, ParseError> {
    let f = parse_polynomial(s, &[], tower)?;
    let c = f.terms().next().map_or_else(|| TowerElement::zero(tower), |(_, c)| c.clone());
    Ok(c)
}

/// Parses a monomial with coefficient one.
pub fn parse_monomial(s: &str, vars: &[String], tower: &Tower) -> Result<Vec<u32>, ParseError> {
    let f = parse_polynomial(s, vars, tower)?;
    let e = match f.terms().next() {
        Some((e, c)) if f.len() == 1 && c.is_one() => Some(e.clone()),
        _ => None,
    };
    e.ok_or_else(|| ParseError { offset: 0, message: format!("'{s}' is not a monomial") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use coxring_core::numfield::FieldTower;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn basic_expressions() {
        let t = FieldTower::gaussian();
        let v = names(&["x", "y"]);
        let f = parse_polynomial("(x + y)^2 - 2*x*y", &v, &t).unwrap();
        assert_eq!(f.display(&v).to_string(), "x^2 + y^2");
        let g = parse_polynomial("(1+2i) x - y/2", &v, &t).unwrap();
        assert_eq!(g.display(&v).to_string(), "(1 + 2*i)*x - 1/2*y");
        assert_eq!(parse_scalar("-3/4", &t).unwrap().to_string(), "-3/4");
    }

    #[test]
    fn errors_carry_positions() {
        let t = FieldTower::rationals();
        let v = names(&["x"]);
        let e = parse_polynomial("x + z", &v, &t).unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(parse_polynomial("x / x", &v, &t).is_err());
        assert!(parse_polynomial("x^", &v, &t).is_err());
        assert!(parse_polynomial("(x", &v, &t).is_err());
        assert!(parse_polynomial("", &v, &t).is_err());
        assert!(parse_monomial("2*x", &v, &t).is_err());
    }
}
