//! Text grammar for polynomials:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('+' | '-') unary | power
//! power   := atom ('^' INT)?
//! atom    := INT ('/' INT)? | IDENT | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. `^` takes a non-negative integer literal and `/`
//! only divides by a nonzero constant.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::MultiPoly;
use super::rational::Rational;
use super::registry::Registry;
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, AlgebraError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((start, Tok::Int(s.parse().expect("digits"))));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(chars[start..i].iter().collect())));
                continue;
            }
            other => {
                return Err(AlgebraError::Parse {
                    pos: start,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    reg: &'a Arc<Registry>,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, AlgebraError> {
        Err(AlgebraError::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<MultiPoly, AlgebraError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, AlgebraError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let at = self.offset();
                    let d = self.unary()?;
                    match d.constant_value() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        _ => {
                            return Err(AlgebraError::Parse {
                                pos: at,
                                msg: "can only divide by a nonzero constant".into(),
                            })
                        }
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly, AlgebraError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly, AlgebraError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let k: u32 = n
                        .try_into()
                        .or_else(|_| self.err("exponent too large"))?;
                    Ok(base.pow(k))
                }
                _ => {
                    self.pos -= 1;
                    self.err("expected a non-negative integer exponent")
                }
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly, AlgebraError> {
        match self.bump() {
            Some(Tok::Int(n)) => {
                let mut den = BigInt::from(1);
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Int(d)) if !d.is_zero() => den = d,
                        Some(Tok::Int(_)) => {
                            self.pos -= 1;
                            return self.err("zero denominator");
                        }
                        _ => {
                            self.pos -= 1;
                            return self.err("expected an integer denominator");
                        }
                    }
                }
                Ok(MultiPoly::constant(self.reg, Rational::new(n, den)))
            }
            Some(Tok::Ident(name)) => match self.reg.lookup(&name) {
                Some(v) => Ok(MultiPoly::var(self.reg, v)),
                None => Err(AlgebraError::UnknownVariable(name)),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => {
                        self.pos -= 1;
                        self.err("expected `)`")
                    }
                }
            }
            _ => {
                self.pos -= 1;
                self.err("expected a number, variable or `(`")
            }
        }
    }
}

pub fn parse_poly(reg: &Arc<Registry>, text: &str) -> Result<MultiPoly, AlgebraError> {
    let toks = lex(text)?;
    let mut p = Parser {
        reg,
        toks,
        pos: 0,
        end: text.chars().count(),
    };
    if p.peek().is_none() {
        return p.err("empty polynomial");
    }
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ratio;
    use crate::algebra::registry::{X, Z};

    fn std_parse(s: &str) -> Result<MultiPoly, AlgebraError> {
        parse_poly(&Registry::standard(), s)
    }

    #[test]
    fn precedence_and_unary_minus() {
        let reg = Registry::standard();
        let x = MultiPoly::var(&reg, X);
        let z = MultiPoly::var(&reg, Z);
        let one = MultiPoly::one(&reg);
        assert_eq!(std_parse("-x^2").unwrap(), -&x.pow(2));
        assert_eq!(std_parse("(x + 1)^2").unwrap(), (&x + &one).pow(2));
        assert_eq!(std_parse(" z ^ 4 - 1 ").unwrap(), &z.pow(4) - &one);
        assert_eq!(
            std_parse("3/6*x").unwrap(),
            x.scale(&ratio(1, 2))
        );
        assert_eq!(std_parse("x^2/2 - x/(1+1)").unwrap(), (&x.pow(2) - &x).scale(&ratio(1, 2)));
    }

    #[test]
    fn errors_carry_position() {
        assert!(matches!(std_parse("x +"), Err(AlgebraError::Parse { pos: 3, .. })));
        assert!(matches!(std_parse("x ^ y"), Err(AlgebraError::Parse { pos: 4, .. })));
        assert!(matches!(std_parse("q"), Err(AlgebraError::UnknownVariable(_))));
        assert!(matches!(std_parse("1/0"), Err(AlgebraError::Parse { .. })));
        assert!(matches!(std_parse("x # y"), Err(AlgebraError::Parse { pos: 2, .. })));
        assert!(std_parse("").is_err());
        assert!(std_parse("(x").is_err());
        assert!(std_parse("x y").is_err());
        assert!(matches!(std_parse("x / z"), Err(AlgebraError::Parse { pos: 4, .. })));
        assert!(std_parse("x/(1-1)").is_err());
    }
}
