//! Parser for the canonical text of Laurent polynomials and forms, the
//! inverse of `LaurentPoly::render` / `Form::render`.
//!
//! Polynomials accept `+ - * /`, integer powers, parentheses and the
//! imaginary unit `i`. Division is by integer literals only. Forms are sums
//! of `[poly] dA∧dB…` terms; `^` is accepted in place of `∧`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;
use twistform_core::{Form, LaurentPoly, MultiIndex, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {col}: {msg}")]
pub struct ParseError {
    /// 1-based character column.
    pub col: usize,
    pub msg: String,
}

struct Parser<'a> {
    chars: Vec<char>,
    i: usize,
    labels: &'a [String],
}

impl<'a> Parser<'a> {
    fn new(src: &str, labels: &'a [String]) -> Self {
        Parser { chars: src.chars().collect(), i: 0, labels }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { col: self.i + 1, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.i).is_some_and(|c| c.is_whitespace()) {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.i).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.i;
        while self.chars.get(self.i).is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
        }
        if start == self.i {
            return self.err("expected an integer");
        }
        let s: String = self.chars[start..self.i].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.i;
        if !self.chars.get(self.i).is_some_and(|c| c.is_alphabetic() || *c == '_') {
            return None;
        }
        while self.chars.get(self.i).is_some_and(|c| c.is_alphanumeric() || *c == '_') {
            self.i += 1;
        }
        Some(self.chars[start..self.i].iter().collect())
    }

    fn nvars(&self) -> usize {
        self.labels.len()
    }

    fn constant(&self, c: Scalar) -> LaurentPoly {
        LaurentPoly::constant(self.nvars(), c)
    }

    fn expr(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut acc = LaurentPoly::zero(self.nvars());
        let mut first = true;
        loop {
            let neg = if self.eat('-') {
                true
            } else {
                if !self.eat('+') && !first {
                    break;
                }
                false
            };
            let t = self.term()?;
            acc = if neg { &acc - &t } else { &acc + &t };
            first = false;
            match self.peek() {
                Some('+') | Some('-') => {}
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                let f = self.factor()?;
                acc = &acc * &f;
            } else if self.eat('/') {
                let d = self.integer()?;
                if d.is_zero() {
                    return self.err("division by zero");
                }
                acc = acc.scale(&Scalar::from_rational(BigRational::new(BigInt::one(), d)));
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = self.integer()?;
        let e: u32 = match u32::try_from(e) {
            Ok(e) => e,
            Err(_) => return self.err("exponent too large"),
        };
        let p = base.pow(e);
        if !neg {
            return Ok(p);
        }
        match p.monomial_inverse() {
            Some(inv) => Ok(inv),
            None => self.err("negative power of a non-monomial"),
        }
    }

    fn atom(&mut self) -> Result<LaurentPoly, ParseError> {
        match self.peek() {
            Some('(') => {
                self.i += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(self.constant(Scalar::from_rational(BigRational::from_integer(n))))
            }
            Some(_) => {
                let at = self.i;
                match self.ident() {
                    Some(id) if id == "i" => Ok(self.constant(Scalar::i())),
                    Some(id) => match self.labels.iter().position(|l| *l == id) {
                        Some(k) => Ok(LaurentPoly::var(self.nvars(), k)),
                        None => {
                            self.i = at;
                            self.err(format!("unknown variable '{}'", id))
                        }
                    },
                    None => self.err("expected a number, variable or '('"),
                }
            }
            None => self.err("unexpected end of input"),
        }
    }

    /// `dA∧dB…` after a bracketed coefficient; returns variable indices.
    fn basis(&mut self) -> Result<Vec<usize>, ParseError> {
        let mut idx = Vec::new();
        if self.peek() != Some('d') {
            return Ok(idx);
        }
        loop {
            let at = self.i;
            let id = match self.ident() {
                Some(id) => id,
                None => return self.err("expected a differential"),
            };
            let var = id.strip_prefix('d').and_then(|v| self.labels.iter().position(|l| l == v));
            match var {
                Some(k) => idx.push(k),
                None => {
                    self.i = at;
                    return self.err(format!("unknown differential '{}'", id));
                }
            }
            if !(self.eat('∧') || self.eat('^')) {
                return Ok(idx);
            }
        }
    }
}

/// Parses a polynomial in the given chart variables.
pub fn parse_poly(src: &str, labels: &[String]) -> Result<LaurentPoly, ParseError> {
    let mut p = Parser::new(src, labels);
    let e = p.expr()?;
    if !p.at_end() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses a form of the given degree. `"0"` is the zero form.
pub fn parse_form(src: &str, labels: &[String], degree: usize) -> Result<Form, ParseError> {
    let n = labels.len();
    let mut p = Parser::new(src, labels);
    if p.peek() == Some('0') {
        p.i += 1;
        if p.at_end() {
            return Ok(Form::zero(n, degree));
        }
        p.i -= 1;
        return p.err("expected '[' or end of input after 0");
    }
    let mut acc = Form::zero(n, degree);
    let mut first = true;
    while !p.at_end() {
        let neg = if first {
            p.eat('-')
        } else if p.eat('+') {
            false
        } else if p.eat('-') {
            true
        } else {
            return p.err("expected '+' or '-' between terms");
        };
        first = false;
        p.expect('[')?;
        let coeff = p.expr()?;
        p.expect(']')?;
        let at = p.i;
        let idx = p.basis()?;
        if idx.len() != degree {
            p.i = at;
            return p.err(format!("term has degree {}, expected {}", idx.len(), degree));
        }
        let (odd, mi) = match MultiIndex::sorted(&idx) {
            Some(x) => x,
            None => {
                p.i = at;
                return p.err("repeated differential");
            }
        };
        let coeff = if odd != neg { -coeff } else { coeff };
        acc = &acc + &Form::term(mi, coeff);
    }
    if first {
        return p.err("empty form");
    }
    Ok(acc)
}
