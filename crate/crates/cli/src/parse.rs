//! Polynomial strings: `[+|-] [coef] [*] name[^exp] * ... (+|-) ...`.
//!
//! Names are ring variables, or for semigroup rings `t` and the optional
//! generator aliases. Whitespace is ignored everywhere.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the parsed string.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (at character {})", self.message, self.offset + 1)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug)]
pub enum Symbols {
    Variables(Vec<String>),
    /// `t^s`, plus `names[i]` standing for t^{generators[i]}.
    Semigroup { names: Vec<String>, generators: Vec<u32> },
}

impl Symbols {
    fn width(&self) -> usize {
        match self {
            Symbols::Variables(v) => v.len(),
            Symbols::Semigroup { .. } => 1,
        }
    }

    fn resolve(&self, name: &str, exp: u32, out: &mut [u32]) -> Option<()> {
        match self {
            Symbols::Variables(v) => {
                let j = v.iter().position(|x| x == name)?;
                out[j] = out[j].checked_add(exp)?;
            }
            Symbols::Semigroup { names, generators } => {
                let base = match names.iter().position(|x| x == name) {
                    Some(j) => generators[j],
                    None if name == "t" => 1,
                    None => return None,
                };
                out[0] = out[0].checked_add(base.checked_mul(exp)?)?;
            }
        }
        Some(())
    }
}

/// A parsed term: integer coefficient and exponent vector (length 1 for
/// semigroup rings, where it holds the t-exponent).
pub type Term = (i64, Vec<u32>);

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn digits(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| (start, std::str::from_utf8(&self.s[start..self.pos]).unwrap()))
    }

    fn ident(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphabetic() || self.s[self.pos] == b'_') {
            self.pos += 1;
            while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                self.pos += 1;
            }
            return Some((start, std::str::from_utf8(&self.s[start..self.pos]).unwrap()));
        }
        None
    }
}

pub fn parse_polynomial(text: &str, symbols: &Symbols) -> Result<Vec<Term>, ParseError> {
    let mut c = Cursor { s: text.as_bytes(), pos: 0 };
    if c.peek().is_none() {
        return Err(c.err("empty polynomial"));
    }
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let sign: i64 = if c.eat(b'-') {
            -1
        } else if c.eat(b'+') || first {
            1
        } else {
            return Err(c.err("expected '+' or '-'"));
        };
        first = false;
        terms.push(parse_term(&mut c, symbols, sign)?);
        if c.peek().is_none() {
            break;
        }
    }
    Ok(terms)
}

fn parse_term(c: &mut Cursor<'_>, symbols: &Symbols, sign: i64) -> Result<Term, ParseError> {
    let mut exps = vec![0u32; symbols.width()];
    let mut coef = sign;
    let mut need_factor = true;
    if let Some((at, d)) = c.digits() {
        let v: i64 = d.parse().map_err(|_| ParseError {
            offset: at,
            message: format!("bad coefficient {d}"),
        })?;
        coef *= v;
        need_factor = c.eat(b'*') || matches!(c.peek(), Some(b) if b.is_ascii_alphabetic() || b == b'_');
    }
    if need_factor {
        loop {
            let Some((at, name)) = c.ident() else {
                return Err(c.err("expected a variable name"));
            };
            let mut exp = 1u32;
            if c.eat(b'^') {
                let Some((eat, d)) = c.digits() else {
                    return Err(c.err("bad exponent: expected a nonnegative integer"));
                };
                exp = d.parse().map_err(|_| ParseError {
                    offset: eat,
                    message: format!("bad exponent {d}"),
                })?;
            }
            if symbols.resolve(name, exp, &mut exps).is_none() {
                let message = match symbols {
                    Symbols::Variables(v) if !v.iter().any(|x| x == name) => {
                        format!("unknown variable {name} (declared: {})", v.join(", "))
                    }
                    Symbols::Semigroup { names, .. } if name != "t" && !names.iter().any(|x| x == name) => {
                        format!("unknown name {name} (use t or one of: {})", names.join(", "))
                    }
                    _ => format!("exponent too large at {name}"),
                };
                return Err(ParseError { offset: at, message });
            }
            if !c.eat(b'*') {
                break;
            }
        }
    }
    Ok((coef, exps))
}

/// One summand of an ideal expression such as `I^2 + (x^20*y^24, x^24*y^20)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprTerm {
    Named { name: String, power: usize },
    Generators(Vec<String>),
}

pub fn parse_expression(text: &str) -> Result<Vec<ExprTerm>, ParseError> {
    let mut c = Cursor { s: text.as_bytes(), pos: 0 };
    let mut out = Vec::new();
    loop {
        if c.eat(b'(') {
            let start = c.pos;
            let mut depth = 1;
            while c.pos < c.s.len() && depth > 0 {
                match c.s[c.pos] {
                    b'(' => depth += 1,
                    b')' => depth -= 1,
                    _ => {}
                }
                c.pos += 1;
            }
            if depth > 0 {
                return Err(c.err("unbalanced parenthesis"));
            }
            let inner = std::str::from_utf8(&c.s[start..c.pos - 1]).unwrap();
            let gens: Vec<String> = inner
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            out.push(ExprTerm::Generators(gens));
        } else if let Some((_, name)) = c.ident() {
            let mut power = 1;
            if c.eat(b'^') {
                let Some((at, d)) = c.digits() else {
                    return Err(c.err("bad exponent"));
                };
                power = d.parse().map_err(|_| ParseError {
                    offset: at,
                    message: format!("bad exponent {d}"),
                })?;
            }
            out.push(ExprTerm::Named {
                name: name.to_string(),
                power,
            });
        } else {
            return Err(c.err("expected an ideal name or a parenthesized generator list"));
        }
        match c.peek() {
            None => break,
            Some(b'+') => c.pos += 1,
            Some(_) => return Err(c.err("expected '+'")),
        }
    }
    Ok(out)
}
