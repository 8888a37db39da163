// SPDX-License-Identifier: MIT OR Apache-2.0
//! Readers for the textual notation of the certificate tables.
//!
//! Forms are written as sums of monomials such as `e13-e24+1/2*e567`, where
//! every digit after `e` is one generator index. Coefficients are rational
//! expressions in an optional parameter `L` built from integers, `+ - * /`,
//! integer powers `^k`, parentheses and `sqrt(...)` of perfect squares.
//!
//! Structure equations use the shorthand `(0^4,12,23,34)`: slot `i` lists
//! `d eⁱ`, each term being an optional coefficient followed by `*` and a
//! two-digit pair `jk` meaning `e^{jk}`.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::exterior::Form;
use crate::scalar::{sqrt_exact, Field, Rat, Ring};

/// A parse or evaluation failure with a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset where the problem was detected.
    pub pos: usize,
    /// What went wrong.
    pub kind: ParseErrorKind,
}

/// The kinds of [`ParseError`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// A character that does not start any token.
    UnexpectedChar(char),
    /// The input ended in the middle of an expression.
    UnexpectedEnd,
    /// A token that does not fit the grammar here.
    Unexpected(String),
    /// A generator index outside `1..=n`.
    IndexOutOfRange(usize),
    /// The expression uses `L` but no parameter value was supplied.
    MissingParameter,
    /// Division by zero or by a non-scalar.
    BadDivision,
    /// `sqrt` of a value that is not the square of a rational.
    NotRational(String),
    /// Powers need a scalar base and a small integer exponent.
    BadPower,
    /// A structure equation with the wrong shape.
    Arity(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: ", self.pos)?;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedEnd => f.write_str("unexpected end of input"),
            ParseErrorKind::Unexpected(t) => write!(f, "unexpected {t}"),
            ParseErrorKind::IndexOutOfRange(i) => write!(f, "generator index {i} out of range"),
            ParseErrorKind::MissingParameter => f.write_str("parameter L used but no value given"),
            ParseErrorKind::BadDivision => f.write_str("division by zero or by a form"),
            ParseErrorKind::NotRational(v) => write!(f, "sqrt({v}) is not rational"),
            ParseErrorKind::BadPower => f.write_str("powers need a scalar base and an integer exponent"),
            ParseErrorKind::Arity(m) => f.write_str(m),
        }
    }
}

fn err<T>(pos: usize, kind: ParseErrorKind) -> Result<T, ParseError> {
    Err(ParseError { pos, kind })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Mono(Vec<usize>),
    Param,
    Sqrt,
    Op(char),
    LParen,
    RParen,
}

fn tokenize(src: &str, base: usize) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let pos = pos + base;
        match c {
            ' ' | '\t' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().map(|(_, c)| c).collect();
                out.push((pos, Tok::Num(text.parse().expect("digits"))));
            }
            'e' => {
                i += 1;
                let mut idx = Vec::new();
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    idx.push(chars[i].1.to_digit(10).expect("digit") as usize);
                    i += 1;
                }
                if idx.is_empty() {
                    return err(pos, ParseErrorKind::UnexpectedChar('e'));
                }
                out.push((pos, Tok::Mono(idx)));
            }
            'L' | 'λ' => {
                out.push((pos, Tok::Param));
                i += 1;
            }
            's' if src[chars[i].0..].starts_with("sqrt") => {
                out.push((pos, Tok::Sqrt));
                i += 4;
            }
            '+' | '-' | '*' | '/' | '^' => {
                out.push((pos, Tok::Op(c)));
                i += 1;
            }
            '−' => {
                out.push((pos, Tok::Op('-')));
                i += 1;
            }
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            other => return err(pos, ParseErrorKind::UnexpectedChar(other)),
        }
    }
    Ok(out)
}

/// Parsed rational/form expression, evaluated later for a parameter value.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    node: Node,
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(BigInt),
    Mono(Vec<usize>),
    Param,
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Sqrt(Box<Expr>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn next(&mut self) -> Result<(usize, Tok), ParseError> {
        let t = self.toks.get(self.at).cloned().ok_or(ParseError { pos: self.end, kind: ParseErrorKind::UnexpectedEnd })?;
        self.at += 1;
        Ok(t)
    }

    fn expr(&mut self, min_bp: u8) -> Result<Expr, ParseError> {
        let (pos, tok) = self.next()?;
        let mut lhs = match tok {
            Tok::Num(n) => Expr { node: Node::Num(n), pos },
            Tok::Mono(idx) => Expr { node: Node::Mono(idx), pos },
            Tok::Param => Expr { node: Node::Param, pos },
            Tok::Op('-') => {
                let inner = self.expr(25)?;
                Expr { node: Node::Neg(Box::new(inner)), pos }
            }
            Tok::Op('+') => self.expr(25)?,
            Tok::LParen => {
                let inner = self.expr(0)?;
                self.expect_rparen()?;
                inner
            }
            Tok::Sqrt => {
                match self.next()? {
                    (_, Tok::LParen) => {}
                    (p, t) => return err(p, ParseErrorKind::Unexpected(alloc::format!("{t:?}"))),
                }
                let inner = self.expr(0)?;
                self.expect_rparen()?;
                Expr { node: Node::Sqrt(Box::new(inner)), pos }
            }
            t => return err(pos, ParseErrorKind::Unexpected(alloc::format!("{t:?}"))),
        };
        loop {
            let op = match self.peek() {
                Some(Tok::Op(c)) => *c,
                Some(Tok::RParen) | None => break,
                Some(t) => return err(self.pos(), ParseErrorKind::Unexpected(alloc::format!("{t:?}"))),
            };
            let (lbp, rbp) = match op {
                '+' | '-' => (10, 11),
                '*' | '/' => (20, 21),
                '^' => (30, 30),
                _ => unreachable!("tokenizer only yields arithmetic operators"),
            };
            if lbp < min_bp {
                break;
            }
            let (pos, _) = self.next()?;
            if op == '^' {
                let e = match self.next()? {
                    (_, Tok::Num(n)) => u32::try_from(n).map_err(|_| ParseError { pos, kind: ParseErrorKind::BadPower })?,
                    (p, _) => return err(p, ParseErrorKind::BadPower),
                };
                lhs = Expr { node: Node::Pow(Box::new(lhs), e), pos };
                continue;
            }
            let rhs = self.expr(rbp)?;
            lhs = Expr { node: Node::Bin(op, Box::new(lhs), Box::new(rhs)), pos };
        }
        Ok(lhs)
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        match self.next()? {
            (_, Tok::RParen) => Ok(()),
            (p, t) => err(p, ParseErrorKind::Unexpected(alloc::format!("{t:?}"))),
        }
    }
}

fn parse_expr_at(src: &str, base: usize) -> Result<Expr, ParseError> {
    let toks = tokenize(src, base)?;
    let end = base + src.len();
    let mut p = Parser { toks, at: 0, end };
    let e = p.expr(0)?;
    if p.at < p.toks.len() {
        return err(p.pos(), ParseErrorKind::Unexpected(String::from("closing parenthesis")));
    }
    Ok(e)
}

/// Parses an expression in the form grammar without evaluating it.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    parse_expr_at(src, 0)
}

fn as_scalar(f: &Form<Rat>) -> Option<Rat> {
    if f.is_zero() {
        return Some(Rat::zero());
    }
    (f.len() == 1 && f.terms().all(|(m, _)| m == 0)).then(|| f.coefficient_mask(0))
}

impl Expr {
    /// Whether the expression mentions the parameter `L`.
    pub fn uses_param(&self) -> bool {
        match &self.node {
            Node::Param => true,
            Node::Num(_) | Node::Mono(_) => false,
            Node::Neg(a) | Node::Pow(a, _) | Node::Sqrt(a) => a.uses_param(),
            Node::Bin(_, a, b) => a.uses_param() || b.uses_param(),
        }
    }

    /// Evaluates to a form on `n` generators; scalars become 0-forms.
    pub fn eval(&self, n: usize, param: Option<&Rat>) -> Result<Form<Rat>, ParseError> {
        let pos = self.pos;
        Ok(match &self.node {
            Node::Num(v) => Form::scalar(n, Rat::from_integer(v.clone())),
            Node::Param => match param {
                Some(l) => Form::scalar(n, l.clone()),
                None => return err(pos, ParseErrorKind::MissingParameter),
            },
            Node::Mono(idx) => {
                if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > n) {
                    return err(pos, ParseErrorKind::IndexOutOfRange(bad));
                }
                Form::monomial(n, idx, Rat::one()).expect("indices checked")
            }
            Node::Neg(a) => a.eval(n, param)?.neg(),
            Node::Bin(op, a, b) => {
                let x = a.eval(n, param)?;
                let y = b.eval(n, param)?;
                match op {
                    '+' => x.add(&y),
                    '-' => x.sub(&y),
                    '*' => x.wedge(&y),
                    '/' => match as_scalar(&y).and_then(|s| s.inv()) {
                        Some(inv) => x.scale_rat(&inv),
                        None => return err(pos, ParseErrorKind::BadDivision),
                    },
                    _ => unreachable!("parser only builds arithmetic nodes"),
                }
            }
            Node::Pow(a, e) => {
                let base = as_scalar(&a.eval(n, param)?).ok_or(ParseError { pos, kind: ParseErrorKind::BadPower })?;
                Form::scalar(n, num_traits::pow(base, *e as usize))
            }
            Node::Sqrt(a) => {
                let v = as_scalar(&a.eval(n, param)?).ok_or(ParseError { pos, kind: ParseErrorKind::BadPower })?;
                match sqrt_exact(&v) {
                    Some(r) => Form::scalar(n, r),
                    None => return err(pos, ParseErrorKind::NotRational(crate::scalar::format_rat(&v))),
                }
            }
        })
    }

    /// Evaluates to a rational number; fails if the value is not a scalar.
    pub fn eval_scalar(&self, param: Option<&Rat>) -> Result<Rat, ParseError> {
        let f = self.eval(9, param)?;
        as_scalar(&f)
            .ok_or(ParseError { pos: self.pos, kind: ParseErrorKind::Unexpected(String::from("form where a number was expected")) })
    }
}

/// Parses and evaluates a form without a parameter.
pub fn parse_form(src: &str, n: usize) -> Result<Form<Rat>, ParseError> {
    parse_form_with(src, n, None)
}

/// Parses and evaluates a form at the given parameter value.
pub fn parse_form_with(src: &str, n: usize, param: Option<&Rat>) -> Result<Form<Rat>, ParseError> {
    parse_expr(src)?.eval(n, param)
}

/// Parses a rational expression such as `-3/2` or `(1-L)^2`.
pub fn parse_scalar(src: &str, param: Option<&Rat>) -> Result<Rat, ParseError> {
    parse_expr(src)?.eval_scalar(param)
}

/// One term `coefficient · e^{jk}` of a structure equation.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureTerm {
    /// Coefficient expression, possibly in `L`.
    pub coefficient: Expr,
    /// The pair `(j, k)` as written (not necessarily increasing).
    pub pair: (usize, usize),
}

/// Parsed structure equations with the parameter left symbolic.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureSpec {
    /// `slots[i]` lists the terms of `d e^{i+1}`.
    pub slots: Vec<Vec<StructureTerm>>,
}

impl StructureSpec {
    /// Number of generators.
    pub fn dim(&self) -> usize {
        self.slots.len()
    }

    /// Whether some coefficient mentions `L`.
    pub fn uses_param(&self) -> bool {
        self.slots.iter().flatten().any(|t| t.coefficient.uses_param())
    }

    /// The 2-forms `d e¹, …, d eⁿ` at the given parameter value.
    pub fn instantiate(&self, param: Option<&Rat>) -> Result<Vec<Form<Rat>>, ParseError> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n);
        for slot in &self.slots {
            let mut f = Form::zero(n);
            for t in slot {
                let c = t.coefficient.eval_scalar(param)?;
                let (j, k) = t.pair;
                if j == 0 || j > n || k == 0 || k > n {
                    return err(t.coefficient.pos, ParseErrorKind::IndexOutOfRange(j.max(k)));
                }
                f = f.add(&Form::monomial(n, &[j, k], c).expect("indices checked"));
            }
            out.push(f);
        }
        Ok(out)
    }
}

fn split_top(src: &str, base: usize, seps: &[char], keep_sign: bool) -> Vec<(usize, String)> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut prev: Option<char> = None;
    for (i, c) in src.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let is_sep = depth == 0 && seps.contains(&c);
        let unary = keep_sign && matches!(prev, None | Some('*' | '/' | '^' | '('));
        if is_sep && !unary {
            if i > start || !keep_sign {
                parts.push((base + start, src[start..i].to_string()));
            }
            start = if keep_sign { i } else { i + c.len_utf8() };
        }
        if !c.is_whitespace() {
            prev = Some(c);
        }
    }
    parts.push((base + start, src[start..].to_string()));
    parts
}

fn parse_slot(text: &str, base: usize) -> Result<Vec<StructureTerm>, ParseError> {
    let trimmed = text.trim();
    if trimmed == "0" {
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    for (pos, part) in split_top(text, base, &['+', '-', '−'], true) {
        let part_trim = part.trim();
        if part_trim.is_empty() {
            return err(pos, ParseErrorKind::UnexpectedEnd);
        }
        let (sign, body, body_pos) = match part_trim.strip_prefix('-').or_else(|| part_trim.strip_prefix('−')) {
            Some(rest) => (true, rest.trim(), pos + (part.len() - rest.len())),
            None => {
                let rest = part_trim.strip_prefix('+').unwrap_or(part_trim).trim();
                (false, rest, pos + (part.len() - rest.len()))
            }
        };
        let factors = split_top(body, body_pos, &['*'], false);
        let (pair_pos, pair_text) = factors.last().cloned().expect("split yields at least one part");
        let pair_text = pair_text.trim();
        let digits: Vec<usize> = pair_text.chars().filter_map(|c| c.to_digit(10)).map(|d| d as usize).collect();
        if pair_text.len() != 2 || digits.len() != 2 {
            return err(pair_pos, ParseErrorKind::Arity(alloc::format!("expected a two-digit pair, found {pair_text:?}")));
        }
        let coef_text = if factors.len() > 1 {
            let cut = body.rfind('*').expect("factor separator present");
            &body[..cut]
        } else {
            "1"
        };
        let mut coefficient = parse_expr_at(if factors.len() > 1 { coef_text } else { "1" }, body_pos)?;
        if sign {
            coefficient = Expr { pos: coefficient.pos, node: Node::Neg(Box::new(coefficient)) };
        }
        terms.push(StructureTerm { coefficient, pair: (digits[0], digits[1]) });
    }
    Ok(terms)
}

/// Parses structure equations such as `(0^3,12,23,-13,-15+L*26+(1-L)*34)`.
pub fn parse_structure(text: &str) -> Result<StructureSpec, ParseError> {
    let t = text.trim();
    let inner_start =
        text.find('(').ok_or(ParseError { pos: 0, kind: ParseErrorKind::Arity(String::from("missing opening parenthesis")) })?;
    if !t.ends_with(')') {
        return err(text.len(), ParseErrorKind::Arity(String::from("missing closing parenthesis")));
    }
    let inner_end = text.rfind(')').expect("checked above");
    let inner = &text[inner_start + 1..inner_end];
    let mut slots = Vec::new();
    for (pos, slot) in split_top(inner, inner_start + 1, &[','], false) {
        let s = slot.trim();
        if let Some(k) = s.strip_prefix("0^") {
            let k: usize =
                k.trim().parse().map_err(|_| ParseError { pos, kind: ParseErrorKind::Arity(alloc::format!("bad run length {k:?}")) })?;
            for _ in 0..k {
                slots.push(Vec::new());
            }
        } else {
            slots.push(parse_slot(&slot, pos)?);
        }
    }
    if slots.is_empty() || slots.len() > crate::exterior::MAX_GENERATORS {
        return err(0, ParseErrorKind::Arity(alloc::format!("{} generators", slots.len())));
    }
    Ok(StructureSpec { slots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, rat};

    #[test]
    fn forms() {
        let f = parse_form("e13+e24-e67", 7).unwrap();
        assert_eq!(f.to_text(), "e13+e24-e67");
        let g = parse_form("-1/2*(e7+e5)", 7).unwrap();
        assert_eq!(g.to_text(), "-1/2*e5-1/2*e7");
        assert!(parse_form("0", 7).unwrap().is_zero());
        assert_eq!(parse_form("3/2*(e26+e45)", 7).unwrap().coefficient(&[2, 6]), frac(3, 2));
    }

    #[test]
    fn parameters_and_roots() {
        let l = rat(-3);
        let f = parse_form_with("sqrt(-(L+2))*e246-(L+1)*e25", 7, Some(&l)).unwrap();
        assert_eq!(f.coefficient(&[2, 4, 6]), rat(1));
        assert_eq!(f.coefficient(&[2, 5]), rat(2));
        assert_eq!(parse_scalar("(L^3-L-1)/(L*(L+1))", Some(&rat(2))).unwrap(), frac(5, 6));
        let e = parse_form_with("sqrt(L)*e1", 7, Some(&rat(2))).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::NotRational(_)));
        assert_eq!(parse_form("L*e1", 7).unwrap_err().kind, ParseErrorKind::MissingParameter);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_form("e12+?", 7).unwrap_err();
        assert_eq!(e, ParseError { pos: 4, kind: ParseErrorKind::UnexpectedChar('?') });
        assert_eq!(parse_form("e18", 7).unwrap_err().kind, ParseErrorKind::IndexOutOfRange(8));
        assert_eq!(parse_form("e1/e2", 7).unwrap_err().kind, ParseErrorKind::BadDivision);
        assert_eq!(parse_form("(e1", 7).unwrap_err().kind, ParseErrorKind::UnexpectedEnd);
    }

    #[test]
    fn structures() {
        let s = parse_structure("(0^4,12,23,34)").unwrap();
        let d = s.instantiate(None).unwrap();
        assert_eq!(d.len(), 7);
        assert_eq!(d[4].to_text(), "e12");
        assert_eq!(d[6].to_text(), "e34");

        let s = parse_structure("(0^3,12,23,-13,-15+L*26+(1-L)*34)").unwrap();
        assert!(s.uses_param());
        let d = s.instantiate(Some(&rat(2))).unwrap();
        assert_eq!(d[5].to_text(), "-e13");
        assert_eq!(d[6].to_text(), "-e15+2*e26-e34");

        let s = parse_structure("(0,0,0,12,13,14+35,0)").unwrap();
        assert_eq!(s.instantiate(None).unwrap()[5].to_text(), "e14+e35");

        let s = parse_structure("(0^2,12,0,13,23+24,15+16+25+L*26+34)").unwrap();
        let d = s.instantiate(Some(&rat(0))).unwrap();
        assert_eq!(d[6].to_text(), "e15+e16+e25+e34");

        let d = parse_structure("(0^3,12,23,-13,15+16+26-2*34)").unwrap().instantiate(None).unwrap();
        assert_eq!(d[6].to_text(), "e15+e16+e26-2*e34");
    }

    #[test]
    fn structure_errors() {
        assert!(matches!(parse_structure("(0^4,123)").unwrap_err().kind, ParseErrorKind::Arity(_)));
        assert!(matches!(parse_structure("0,12").unwrap_err().kind, ParseErrorKind::Arity(_)));
        assert!(parse_structure("(0^2,L*12)").unwrap().instantiate(None).is_err());
    }
}
