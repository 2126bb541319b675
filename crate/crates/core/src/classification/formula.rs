//! Integer-parameter arithmetic for table formulas.
//!
//! Grammar (printed table notation, so juxtaposition multiplies):
//!
//! ```text
//! cond  := cmp ('&' cmp)*
//! cmp   := sum (('<' | '<=' | '=' | '!=' | '>=' | '>') sum)?
//! sum   := prod (('+' | '-') prod)*
//! prod  := pow (('*' | '/') pow | pow)*
//! pow   := unary ('^' unary)?
//! unary := '-' unary | atom
//! atom  := integer | letter | func '(' cond ')' | '(' cond ')'
//! func  := floor | odd | even
//! ```
//!
//! Variables are single letters, so `2pq` reads as `2·p·q`. Values are exact
//! rationals; comparisons and `odd`/`even` yield 0 or 1.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(i64),
    Var(char),
    Func(&'static str),
    Op(&'static str),
    LParen,
    RParen,
}

const FUNCS: [&str; 3] = ["floor", "odd", "even"];
const OPS: [&str; 12] = ["<=", ">=", "!=", "<", ">", "=", "&", "+", "-", "*", "/", "^"];

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token::Num(s.parse().map_err(|_| Error::Formula(format!("integer overflow in {src:?}")))?));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            match FUNCS.iter().find(|f| **f == word) {
                Some(f) => out.push(Token::Func(f)),
                None => out.extend(word.chars().map(Token::Var)),
            }
        } else if c == '(' {
            out.push(Token::LParen);
            i += 1;
        } else if c == ')' {
            out.push(Token::RParen);
            i += 1;
        } else {
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            let op = OPS
                .iter()
                .find(|op| rest.starts_with(**op))
                .ok_or_else(|| Error::Formula(format!("unexpected {c:?} in {src:?}")))?;
            out.push(Token::Op(op));
            i += op.len();
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a BTreeMap<String, i64>,
    src: &'a str,
}

fn truth(b: bool) -> Rational64 {
    if b {
        Rational64::one()
    } else {
        Rational64::zero()
    }
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn err(&self, msg: &str) -> Error {
        Error::Formula(format!("{msg} in {:?}", self.src))
    }

    fn eat_op(&mut self, ops: &[&str]) -> Option<&'static str> {
        match self.peek() {
            Some(Token::Op(op)) if ops.contains(op) => {
                let op = *op;
                self.pos += 1;
                Some(op)
            }
            _ => None,
        }
    }

    fn cond(&mut self) -> Result<Rational64> {
        let mut v = self.cmp()?;
        while self.eat_op(&["&"]).is_some() {
            let w = self.cmp()?;
            v = truth(!v.is_zero() && !w.is_zero());
        }
        Ok(v)
    }

    fn cmp(&mut self) -> Result<Rational64> {
        let a = self.sum()?;
        let Some(op) = self.eat_op(&["<=", ">=", "!=", "<", ">", "="]) else { return Ok(a) };
        let b = self.sum()?;
        Ok(truth(match op {
            "<=" => a <= b,
            ">=" => a >= b,
            "!=" => a != b,
            "<" => a < b,
            ">" => a > b,
            _ => a == b,
        }))
    }

    fn sum(&mut self) -> Result<Rational64> {
        let mut v = self.prod()?;
        while let Some(op) = self.eat_op(&["+", "-"]) {
            let w = self.prod()?;
            v = if op == "+" { v + w } else { v - w };
        }
        Ok(v)
    }

    fn prod(&mut self) -> Result<Rational64> {
        let mut v = self.pow()?;
        loop {
            if let Some(op) = self.eat_op(&["*", "/"]) {
                let w = self.pow()?;
                if op == "*" {
                    v *= w;
                } else if w.is_zero() {
                    return Err(self.err("division by zero"));
                } else {
                    v /= w;
                }
            } else if matches!(self.peek(), Some(Token::Num(_) | Token::Var(_) | Token::Func(_) | Token::LParen)) {
                v *= self.pow()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn pow(&mut self) -> Result<Rational64> {
        let base = self.unary()?;
        if self.eat_op(&["^"]).is_none() {
            return Ok(base);
        }
        let e = self.unary()?;
        let e = if e.is_integer() && !e.is_negative() { e.to_integer() } else { return Err(self.err("exponent must be a nonnegative integer")) };
        let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
        Ok(num_traits::pow(base, e as usize))
    }

    fn unary(&mut self) -> Result<Rational64> {
        if self.eat_op(&["-"]).is_some() {
            return Ok(-self.unary()?);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Rational64> {
        let tok = self.peek().cloned().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        match tok {
            Token::Num(n) => Ok(Rational64::from_integer(n)),
            Token::Var(c) => self
                .vars
                .get(&c.to_string())
                .map(|&v| Rational64::from_integer(v))
                .ok_or_else(|| self.err(&format!("unbound variable {c}"))),
            Token::LParen => {
                let v = self.cond()?;
                self.expect_rparen()?;
                Ok(v)
            }
            Token::Func(f) => {
                if self.peek() != Some(&Token::LParen) {
                    return Err(self.err(&format!("{f} needs parentheses")));
                }
                self.pos += 1;
                let v = self.cond()?;
                self.expect_rparen()?;
                let parity = |want: i64| -> Result<Rational64> {
                    if !v.is_integer() {
                        return Err(self.err(&format!("{f} of non-integer")));
                    }
                    Ok(truth(v.to_integer().rem_euclid(2) == want))
                };
                match f {
                    "floor" => Ok(Rational64::from_integer(v.floor().to_integer())),
                    "odd" => parity(1),
                    _ => parity(0),
                }
            }
            Token::Op(op) => Err(self.err(&format!("unexpected operator {op}"))),
            Token::RParen => Err(self.err("unexpected ')'")),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        if self.peek() == Some(&Token::RParen) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err("missing ')'"))
        }
    }
}

/// Exact value of `src` under the bindings in `vars`.
pub fn evaluate(src: &str, vars: &BTreeMap<String, i64>) -> Result<Rational64> {
    let mut p = Parser { tokens: tokenize(src)?, pos: 0, vars, src };
    let v = p.cond()?;
    if p.pos != p.tokens.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

/// Like [`evaluate`], but the result must be an integer.
pub fn evaluate_int(src: &str, vars: &BTreeMap<String, i64>) -> Result<i64> {
    let v = evaluate(src, vars)?;
    if !v.is_integer() {
        return Err(Error::Formula(format!("{src:?} evaluates to non-integer {v}")));
    }
    v.to_integer().to_i64().ok_or_else(|| Error::Formula(format!("{src:?} overflows")))
}

pub fn evaluate_bool(src: &str, vars: &BTreeMap<String, i64>) -> Result<bool> {
    Ok(!evaluate(src, vars)?.is_zero())
}

/// Replaces every `{expr}` in `template` by its integer value.
pub fn render(template: &str, vars: &BTreeMap<String, i64>) -> Result<String> {
    let mut out = String::new();
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        let close = rest[open..].find('}').ok_or_else(|| Error::Formula(format!("unclosed '{{' in {template:?}")))? + open;
        out.push_str(&rest[..open]);
        out.push_str(&evaluate_int(&rest[open + 1..close], vars)?.to_string());
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}
