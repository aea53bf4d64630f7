//! Expression grammar.
//!
//! ```text
//! expr     = term { ("+" | "-") term } ;
//! term     = unary { ("*" | "/") unary } ;
//! unary    = ("-" | "+") unary | power ;
//! power    = primary [ "^" exponent ] ;
//! exponent = ["-"] integer | "(" ["-"] integer ")" ;
//! primary  = number | func "(" expr ")" | ident | "(" expr ")" ;
//! number   = digit { digit } [ "." digit { digit } ] ;
//! func     = "sin" | "cos" | "tan" | "cot" | "sinh" | "cosh"
//!          | "exp" | "ln" | "sqrt" | "abs" ;
//! ident    = letter { letter | digit | "_" } ;
//! ```
//!
//! An `ident` must be a declared coordinate or parameter (`pi` is always
//! declared). Decimal literals are read as exact rationals. Positions in
//! errors are 0-based character offsets.

use thiserror::Error;

use super::{Expr, Func, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{message} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

/// Names an expression may refer to: coordinates (by chart index) and parameters.
#[derive(Debug, Clone, Default)]
pub struct Symbols {
    coords: Vec<String>,
    params: Vec<String>,
}

impl Symbols {
    pub fn new<S: AsRef<str>>(coords: &[S]) -> Symbols {
        Symbols { coords: coords.iter().map(|s| s.as_ref().to_string()).collect(), params: vec!["pi".to_string()] }
    }

    pub fn with_params<S: AsRef<str>>(mut self, params: &[S]) -> Symbols {
        for p in params {
            if !self.params.iter().any(|q| q == p.as_ref()) {
                self.params.push(p.as_ref().to_string());
            }
        }
        self
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            let mut int_part = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                int_part.push(chars[i]);
                i += 1;
            }
            let mut frac_part = String::new();
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    frac_part.push(chars[i]);
                    i += 1;
                }
            }
            let digits = format!("{int_part}{frac_part}");
            let overflow = || ParseError { position: start, message: "numeric literal too large".into() };
            let numer: i64 = digits.parse().map_err(|_| overflow())?;
            let denom = 10i64.checked_pow(frac_part.len() as u32).ok_or_else(overflow)?;
            out.push((start, Tok::Num(Rational::new(numer, denom))));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                i += 1;
            }
            out.push((start, Tok::Ident(s)));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError { position: i, message: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    syms: &'a Symbols,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.here(), message: message.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                acc = acc.div(&self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        let n = match self.peek() {
            Some(Tok::Num(r)) if r.is_integer() && *r.numer() <= i32::MAX as i64 => *r.numer() as i32,
            _ => return self.err("exponent must be an integer literal"),
        };
        self.pos += 1;
        if paren {
            self.expect(')')?;
        }
        if self.peek() == Some(&Tok::Op('^')) {
            return self.err("chained exponents need parentheses");
        }
        Ok(base.powi(if neg { -n } else { n }))
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let start = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(r)) => {
                self.pos += 1;
                Ok(Expr::rational(r))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(f) = Func::from_name(&name) {
                    if !self.eat('(') {
                        return self.err(format!("expected '(' after function `{name}`"));
                    }
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return Ok(arg.apply(f));
                }
                if let Some(i) = self.syms.coords.iter().position(|c| *c == name) {
                    return Ok(Expr::coord(i, &name));
                }
                if self.syms.params.contains(&name) {
                    return Ok(Expr::param(&name));
                }
                Err(ParseError { position: start, message: format!("unknown identifier `{name}`") })
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_expr(text: &str, syms: &Symbols) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.chars().count(), syms };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}
