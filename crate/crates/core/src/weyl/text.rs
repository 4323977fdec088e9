//! Text and JSON forms of operators.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Letter, Monomial, WeylOp};
use crate::scalar::{self, Scalar};
use crate::{Error, Result};

fn render_monomial(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (prefix, idx) in [("x", &m.x), ("d", &m.d)] {
        for (i, &e) in idx.as_slice().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("{prefix}{}", i + 1)),
                _ => parts.push(format!("{prefix}{}^{e}", i + 1)),
            }
        }
    }
    parts.join(" ")
}

pub(super) fn render(op: &WeylOp) -> String {
    if op.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (mono, c)) in op.terms().enumerate() {
        let neg = c.is_negative();
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let abs = c.abs();
        let body = render_monomial(mono);
        if body.is_empty() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&body);
        } else {
            out.push_str(&format!("{abs} {body}"));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Plus,
    Minus,
    Star,
    Number(String),
    Factor(Letter, u32),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    let read_int = |i: &mut usize| {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        chars[start..*i].iter().collect::<String>()
    };
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' | '·' => {
                out.push(Token::Star);
                i += 1;
            }
            '0'..='9' => {
                let mut num = read_int(&mut i);
                // allow "p/q" with optional spaces around the slash
                let mut j = i;
                while j < chars.len() && chars[j] == ' ' {
                    j += 1;
                }
                if j < chars.len() && chars[j] == '/' {
                    j += 1;
                    while j < chars.len() && chars[j] == ' ' {
                        j += 1;
                    }
                    i = j;
                    let den = read_int(&mut i);
                    if den.is_empty() {
                        return Err(Error::Parse(format!("missing denominator in {s:?}")));
                    }
                    num = format!("{num}/{den}");
                }
                out.push(Token::Number(num));
            }
            'x' | 'd' | '∂' => {
                i += 1;
                let idx = read_int(&mut i);
                let idx: usize = idx.parse().map_err(|_| {
                    Error::Parse(format!("missing variable index after {c:?} in {s:?}"))
                })?;
                if idx == 0 {
                    return Err(Error::Parse("variable indices start at 1".into()));
                }
                let mut exp = 1;
                if i < chars.len() && chars[i] == '^' {
                    i += 1;
                    exp = read_int(&mut i)
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
                }
                let letter = if c == 'x' {
                    Letter::X(idx - 1)
                } else {
                    Letter::D(idx - 1)
                };
                out.push(Token::Factor(letter, exp));
            }
            _ => return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}"))),
        }
    }
    Ok(out)
}

fn max_index(tokens: &[Token]) -> usize {
    tokens
        .iter()
        .filter_map(|t| match t {
            Token::Factor(Letter::X(i) | Letter::D(i), _) => Some(i + 1),
            _ => None,
        })
        .max()
        .unwrap_or(1)
}

fn parse_tokens(n: usize, tokens: &[Token], src: &str) -> Result<WeylOp> {
    let mut total = WeylOp::zero(n);
    let mut pos = 0;
    let mut first = true;
    while pos < tokens.len() {
        let mut negative = false;
        let mut saw_sign = false;
        while let Some(tok @ (Token::Plus | Token::Minus)) = tokens.get(pos) {
            if *tok == Token::Minus {
                negative = !negative;
            }
            saw_sign = true;
            pos += 1;
        }
        if !first && !saw_sign {
            return Err(Error::Parse(format!(
                "expected '+' or '-' between terms in {src:?}"
            )));
        }
        first = false;
        let mut coeff = Scalar::one();
        let mut word = Vec::new();
        let mut empty = true;
        while let Some(tok) = tokens.get(pos) {
            match tok {
                Token::Plus | Token::Minus => break,
                Token::Star => {}
                Token::Number(s) => coeff *= scalar::parse(s)?,
                Token::Factor(letter, exp) => {
                    for _ in 0..*exp {
                        word.push(*letter);
                    }
                }
            }
            if !matches!(tok, Token::Star) {
                empty = false;
            }
            pos += 1;
        }
        if empty {
            return Err(Error::Parse(format!("empty term in {src:?}")));
        }
        if negative {
            coeff = -coeff;
        }
        total = total.try_add(&super::normal_order(n, coeff, &word)?)?;
    }
    if first {
        return Err(Error::Parse("empty operator".into()));
    }
    Ok(total)
}

pub(super) fn parse(n: usize, s: &str) -> Result<WeylOp> {
    let tokens = tokenize(s)?;
    if s.trim() == "0" {
        return Ok(WeylOp::zero(n));
    }
    parse_tokens(n, &tokens, s)
}

pub(super) fn parse_infer(s: &str) -> Result<WeylOp> {
    let tokens = tokenize(s)?;
    let n = max_index(&tokens);
    if s.trim() == "0" {
        return Ok(WeylOp::zero(n));
    }
    parse_tokens(n, &tokens, s)
}

#[derive(Serialize, Deserialize)]
pub(crate) struct TermRepr {
    c: String,
    a: Vec<u32>,
    b: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct WeylOpRepr {
    n: usize,
    terms: Vec<TermRepr>,
}

impl From<WeylOp> for WeylOpRepr {
    fn from(op: WeylOp) -> Self {
        WeylOpRepr {
            n: op.n,
            terms: op
                .terms
                .into_iter()
                .map(|(m, c)| TermRepr {
                    c: c.to_string(),
                    a: m.x.0,
                    b: m.d.0,
                })
                .collect(),
        }
    }
}

impl TryFrom<WeylOpRepr> for WeylOp {
    type Error = Error;

    fn try_from(repr: WeylOpRepr) -> Result<Self> {
        let n = repr.n;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for t in repr.terms {
            if t.a.len() != n || t.b.len() != n {
                return Err(Error::Parse(format!(
                    "term exponent lengths {}/{} do not match n = {n}",
                    t.a.len(),
                    t.b.len()
                )));
            }
            let c = scalar::parse(&t.c)?;
            if c.is_zero() {
                continue;
            }
            terms.push((Monomial::new(t.a, t.b), c));
        }
        WeylOp::from_terms(n, terms)
    }
}
