//! Polynomial expression grammar.
//!
//! Accepts rational literals (`3`, `2/5`, `1.5`), identifiers with optional subscripts
//! (`x`, `a_{22}`, `X_0`), `+ - * /`, `\cdot`, implicit multiplication, parentheses or
//! braces, and integer powers written `^k`, `^-k`, `^{-k}` or `^(k)`. Negative powers and
//! division are allowed only for single terms.

use super::LaurentPolynomial;
use crate::arith::{parse_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

/// A parsed polynomial together with its variable names (axis order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub poly: LaurentPolynomial,
    pub vars: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

const MAX_EXPONENT: i64 = 1 << 20;

fn err(pos: usize, msg: impl Into<String>) -> ParseError {
    ParseError { pos, msg: msg.into() }
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' | '$' => i += 1,
            '+' => {
                out.push((Tok::Plus, i));
                i += 1
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1
            }
            '/' => {
                out.push((Tok::Slash, i));
                i += 1
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1
            }
            '(' | '{' | '[' => {
                out.push((Tok::Open, i));
                i += 1
            }
            ')' | '}' | ']' => {
                out.push((Tok::Close, i));
                i += 1
            }
            '\\' => {
                let mut j = i + 1;
                while j < b.len() && (b[j] as char).is_ascii_alphabetic() {
                    j += 1;
                }
                let cmd = &s[i + 1..j];
                match cmd {
                    "cdot" | "times" => out.push((Tok::Star, i)),
                    "left" | "right" | "" => {
                        if cmd.is_empty() && j < b.len() {
                            // "\," and similar spacing commands
                            j += 1;
                        }
                    }
                    _ => return Err(err(i, format!("unknown command \\{cmd}"))),
                }
                i = j;
            }
            '0'..='9' | '.' => {
                let mut j = i;
                while j < b.len() && ((b[j] as char).is_ascii_digit() || b[j] == b'.') {
                    j += 1;
                }
                let v = parse_q(&s[i..j]).ok_or_else(|| err(i, "bad number"))?;
                out.push((Tok::Num(v), i));
                i = j;
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < b.len() && (b[j] as char).is_ascii_alphanumeric() {
                    j += 1;
                }
                let mut name = s[i..j].to_string();
                if j < b.len() && b[j] == b'_' {
                    j += 1;
                    if j < b.len() && b[j] == b'{' {
                        let close = s[j..].find('}').ok_or_else(|| err(j, "unclosed subscript"))? + j;
                        let sub: String = s[j + 1..close].chars().filter(|c| !c.is_whitespace()).collect();
                        if sub.is_empty() || !sub.chars().all(|c| c.is_ascii_alphanumeric() || c == ',' || c == '(' || c == ')') {
                            return Err(err(j, "bad subscript"));
                        }
                        name.push('_');
                        name.push_str(&sub);
                        j = close + 1;
                    } else {
                        let k = j;
                        while j < b.len() && (b[j] as char).is_ascii_alphanumeric() {
                            j += 1;
                        }
                        if j == k {
                            return Err(err(k, "empty subscript"));
                        }
                        name.push('_');
                        name.push_str(&s[k..j]);
                    }
                }
                out.push((Tok::Ident(name), i));
                i = j;
            }
            _ => return Err(err(start, format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    i: usize,
    vars: &'a [String],
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.0)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.1)
    }

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let mut acc = LaurentPolynomial::zero(self.n());
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(Tok::Plus) => {
                    self.i += 1;
                    1
                }
                Some(Tok::Minus) => {
                    self.i += 1;
                    -1
                }
                _ if first => 1,
                _ => break,
            };
            let t = self.term()?;
            acc = if sign > 0 { &acc + &t } else { &acc - &t };
            first = false;
        }
        Ok(acc)
    }

    fn starts_primary(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Open))
    }

    fn term(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.i += 1;
                    let f = self.power()?;
                    acc = &acc * &f;
                }
                Some(Tok::Slash) => {
                    let pos = self.pos();
                    self.i += 1;
                    let f = self.power()?;
                    if !f.is_monomial() {
                        return Err(err(pos, "division by a non-monomial"));
                    }
                    let (e, c) = f.terms().iter().next().unwrap();
                    acc = acc.div_monomial(e, c);
                }
                _ if self.starts_primary() => {
                    let f = self.power()?;
                    acc = &acc * &f;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let pos = self.pos();
        let mut depth = 0;
        while self.peek() == Some(&Tok::Open) {
            self.i += 1;
            depth += 1;
        }
        let mut sign = 1;
        while let Some(t) = self.peek() {
            match t {
                Tok::Minus => sign = -sign,
                Tok::Plus => {}
                _ => break,
            }
            self.i += 1;
        }
        let v = match self.peek() {
            Some(Tok::Num(v)) if v.is_integer() => v.to_integer(),
            _ => return Err(err(self.pos(), "expected integer exponent")),
        };
        self.i += 1;
        for _ in 0..depth {
            if self.peek() != Some(&Tok::Close) {
                return Err(err(self.pos(), "expected closing bracket"));
            }
            self.i += 1;
        }
        let v: i64 = i64::try_from(v).map_err(|_| err(pos, "exponent overflow"))?;
        if v > MAX_EXPONENT {
            return Err(err(pos, "exponent overflow"));
        }
        Ok(sign * v)
    }

    fn power(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let mut base = self.primary()?;
        while self.peek() == Some(&Tok::Caret) {
            let pos = self.pos();
            self.i += 1;
            let k = self.exponent()?;
            if k >= 0 {
                base = base.pow(k as u32);
            } else if base.is_monomial() {
                let (e, c) = base.terms().iter().next().unwrap();
                let inv = LaurentPolynomial::monomial(e.iter().map(|x| -x).collect(), c.recip());
                base = inv.pow((-k) as u32);
            } else {
                return Err(err(pos, "negative power of a non-monomial"));
            }
            if base.terms().keys().flatten().any(|x| x.abs() > MAX_EXPONENT) {
                return Err(err(pos, "exponent overflow"));
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.i += 1;
                Ok(LaurentPolynomial::constant(self.n(), v))
            }
            Some(Tok::Ident(name)) => {
                self.i += 1;
                let k = self.vars.iter().position(|v| *v == name).ok_or_else(|| err(pos, format!("undeclared variable {name}")))?;
                Ok(LaurentPolynomial::var(self.n(), k))
            }
            Some(Tok::Open) => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(err(self.pos(), "expected closing bracket"));
                }
                self.i += 1;
                Ok(e)
            }
            Some(Tok::Minus) => {
                self.i += 1;
                let p = self.power()?;
                Ok(-&p)
            }
            _ => Err(err(pos, "expected a number, variable or bracket")),
        }
    }
}

fn parse_impl(text: &str, declared: Option<&[String]>) -> Result<Parsed, ParseError> {
    let toks = tokenize(text)?;
    let vars: Vec<String> = match declared {
        Some(v) => v.to_vec(),
        None => {
            let mut v: Vec<String> = Vec::new();
            for (t, _) in &toks {
                if let Tok::Ident(name) = t {
                    if !v.contains(name) {
                        v.push(name.clone());
                    }
                }
            }
            v
        }
    };
    if toks.is_empty() {
        return Err(err(0, "empty input"));
    }
    let mut p = Parser { toks: &toks, i: 0, vars: &vars, end: text.len() };
    let poly = p.expr()?;
    if p.i != toks.len() {
        return Err(err(p.pos(), "unexpected token"));
    }
    Ok(Parsed { poly, vars })
}

/// Parses with variables ordered by first appearance.
pub fn parse(text: &str) -> Result<Parsed, ParseError> {
    parse_impl(text, None)
}

/// Parses with a declared variable ordering.
pub fn parse_with_vars(text: &str, vars: &[String]) -> Result<Parsed, ParseError> {
    parse_impl(text, Some(vars))
}

/// Parses and returns only the polynomial.
pub fn parse_poly(text: &str) -> Result<LaurentPolynomial, ParseError> {
    parse(text).map(|p| p.poly)
}

impl std::str::FromStr for LaurentPolynomial {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_poly(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn binomial_expansion() {
        let p = parse("(1+x)^3 + y").unwrap();
        assert_eq!(p.vars, vec!["x", "y"]);
        let t: Vec<(Vec<i64>, Q)> = p.poly.terms().iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        assert_eq!(
            t,
            vec![(vec![0, 0], q(1)), (vec![0, 1], q(1)), (vec![1, 0], q(3)), (vec![2, 0], q(3)), (vec![3, 0], q(1))]
        );
    }

    #[test]
    fn negative_powers_and_latex() {
        let p = parse("x + x^-1").unwrap().poly;
        assert_eq!(p.support(), vec![vec![-1], vec![1]]);
        let p = parse("(b^{-1} c^{-1} d) \\cdot (c + 1)").unwrap();
        assert_eq!(p.vars, vec!["b", "c", "d"]);
        assert_eq!(p.poly.len(), 2);
        let p = parse("a_{22} a_{11}^{-1} + 2 X_0").unwrap();
        assert_eq!(p.vars, vec!["a_22", "a_11", "X_0"]);
        assert_eq!(p.poly.coeff(&[1, -1, 0]), q(1));
        let p = parse("y + (1+x)^2/y").unwrap().poly;
        assert_eq!(p.coeff(&[-1, 2]), q(1));
    }

    #[test]
    fn errors() {
        assert!(parse("x +* y").is_err());
        assert!(parse("(x + 1").is_err());
        assert!(parse("(x+1)^-1").is_err());
        assert!(parse("x / (x + 1)").is_err());
        assert!(parse("x^99999999999").is_err());
        assert!(parse("").is_err());
        assert!(parse("x # y").is_err());
    }
}
