//! Infix polynomial expressions such as `x^2 + y^2 - 1` or `x²+y²−1`.
//!
//! Numbers are read as exact rationals. Supported: `+ - * / ^`, implicit
//! multiplication (`2x`, `3(x+y)`), parentheses, superscript exponents, and
//! the Unicode minus and middle-dot signs. Division is allowed only by a
//! nonzero constant.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{parse_rational, PolyError, SparsePoly};

/// Mapping from identifiers to variable indices.
#[derive(Clone, Debug)]
pub struct VariableNames {
    num_vars: usize,
    short: Vec<&'static str>,
}

impl VariableNames {
    /// `x1..xm` always; also `x, y, z` when `m ≤ 3`.
    pub fn for_dim(num_vars: usize) -> Self {
        let short = if num_vars <= 3 {
            ["x", "y", "z"][..num_vars].to_vec()
        } else {
            Vec::new()
        };
        VariableNames { num_vars, short }
    }

    /// Single parameter named `t`.
    pub fn univariate() -> Self {
        VariableNames {
            num_vars: 1,
            short: vec!["t"],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    fn lookup(&self, name: &str) -> Option<usize> {
        if let Some(i) = self.short.iter().position(|s| *s == name) {
            return Some(i);
        }
        let idx: usize = name.strip_prefix('x')?.parse().ok()?;
        (1..=self.num_vars).contains(&idx).then(|| idx - 1)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Sup(u32),
    LParen,
    RParen,
}

fn superscript_digit(c: char) -> Option<u32> {
    "⁰¹²³⁴⁵⁶⁷⁸⁹".chars().position(|s| s == c).map(|p| p as u32)
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>, PolyError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                s.push(chars[i].1);
                i += 1;
            }
            out.push((pos, Token::Num(s)));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut s = String::new();
            // a letter followed by digits forms one identifier (`x12`)
            s.push(c);
            i += 1;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                s.push(chars[i].1);
                i += 1;
            }
            out.push((pos, Token::Ident(s)));
            continue;
        }
        if let Some(d) = superscript_digit(c) {
            let mut e = d;
            i += 1;
            while let Some(d) = chars.get(i).and_then(|&(_, c)| superscript_digit(c)) {
                e = e * 10 + d;
                i += 1;
            }
            out.push((pos, Token::Sup(e)));
            continue;
        }
        let tok = match c {
            '+' => Token::Plus,
            '-' | '\u{2212}' => Token::Minus,
            '*' | '\u{00b7}' | '\u{00d7}' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            _ => {
                return Err(PolyError::Parse {
                    offset: pos,
                    message: format!("unexpected character {c:?}"),
                })
            }
        };
        out.push((pos, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    vars: &'a VariableNames,
    len: usize,
}

type Poly = SparsePoly<BigRational>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.len, |(o, _)| *o)
    }

    fn error(&self, message: impl Into<String>) -> PolyError {
        PolyError::Parse {
            offset: self.offset(),
            message: message.into(),
        }
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let mut acc = match self.peek() {
            Some(Token::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Token::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Some(Token::Slash) => {
                    self.bump();
                    let divisor = self.factor()?;
                    match divisor.as_constant() {
                        Some(c) if !c.is_zero() => {
                            acc = acc.scale(&(BigRational::from_integer(1.into()) / c))
                        }
                        _ => return Err(self.error("division by a non-constant or zero")),
                    }
                }
                Some(Token::Num(_) | Token::Ident(_) | Token::LParen) => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly, PolyError> {
        if self.peek() == Some(&Token::Minus) {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        let mut base = self.primary()?;
        loop {
            match self.peek() {
                Some(Token::Caret) => {
                    self.bump();
                    let exp = match self.bump() {
                        Some(Token::Num(s)) => s.parse::<u32>().ok(),
                        Some(Token::LParen) => {
                            let inner = self.expr()?;
                            if self.bump() != Some(Token::RParen) {
                                return Err(self.error("expected ')'"));
                            }
                            inner
                                .as_constant()
                                .filter(|c| c.is_integer())
                                .and_then(|c| c.to_integer().to_u32())
                        }
                        _ => None,
                    };
                    let exp =
                        exp.ok_or_else(|| self.error("exponent must be a non-negative integer"))?;
                    base = base.pow(exp);
                }
                Some(Token::Sup(e)) => {
                    let e = *e;
                    self.bump();
                    base = base.pow(e);
                }
                _ => return Ok(base),
            }
        }
    }

    fn primary(&mut self) -> Result<Poly, PolyError> {
        let n = self.vars.num_vars();
        match self.bump() {
            Some(Token::Num(s)) => {
                let c = parse_rational(&s).map_err(|_| {
                    self.pos -= 1;
                    self.error(format!("bad number {s:?}"))
                })?;
                Ok(SparsePoly::constant(n, c))
            }
            Some(Token::Ident(name)) => match self.vars.lookup(&name) {
                Some(i) => Ok(SparsePoly::variable(n, i)),
                None => {
                    self.pos -= 1;
                    Err(self.error(format!("unknown variable {name:?}")))
                }
            },
            Some(Token::LParen) => {
                let inner = self.expr()?;
                if self.bump() != Some(Token::RParen) {
                    self.pos -= 1;
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.error("expected a number, variable or '('"))
            }
        }
    }
}

pub fn parse_expression(src: &str, vars: &VariableNames) -> Result<Poly, PolyError> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(PolyError::Parse {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        vars,
        len: src.len(),
    };
    let poly = parser.expr()?;
    if parser.pos < parser.tokens.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(poly)
}
