//! LL(1) parsers for rational functions, operators and sequence expressions.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{Poly, Rat, RatFun};
use crate::ore::{DiffOp, Laurent, ShiftOp};
use crate::seqrep::*;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct SyntaxError {
    pub pos: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at position {}: expected {}, found {}", self.pos, self.expected.join(" | "), self.found)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("`{v}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(text[start..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*/^(),;".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(SyntaxError { pos: i, expected: vec!["token".into()], found: format!("`{c}`") });
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

/// Ring whose elements are built by the arithmetic grammar.
trait Alg: Sized + Clone {
    fn num(v: Rat) -> Self;
    fn ident(name: &str) -> Option<Self>;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Option<Self>;
    fn pow(&self, k: i64) -> Option<Self>;
    fn idents() -> &'static [&'static str];
}

fn pow_by_squaring<A: Alg>(a: &A, k: u64, one: A) -> A {
    let mut acc = one;
    let mut base = a.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.mul(&base);
        }
        base = base.mul(&base);
        k >>= 1;
    }
    acc
}

#[derive(Clone)]
struct RatN(RatFun);
#[derive(Clone)]
struct RatX(RatFun);

macro_rules! ratfun_alg {
    ($t:ident, $v:literal) => {
        impl Alg for $t {
            fn num(v: Rat) -> Self {
                $t(RatFun::constant(v))
            }
            fn ident(name: &str) -> Option<Self> {
                (name == $v).then(|| $t(RatFun::var()))
            }
            fn add(&self, o: &Self) -> Self {
                $t(&self.0 + &o.0)
            }
            fn neg(&self) -> Self {
                $t(-&self.0)
            }
            fn mul(&self, o: &Self) -> Self {
                $t(&self.0 * &o.0)
            }
            fn div(&self, o: &Self) -> Option<Self> {
                (!o.0.is_zero()).then(|| $t(&self.0 / &o.0))
            }
            fn pow(&self, k: i64) -> Option<Self> {
                if k < 0 && self.0.is_zero() {
                    return None;
                }
                let k32 = i32::try_from(k).ok()?;
                Some($t(self.0.pow(k32)))
            }
            fn idents() -> &'static [&'static str] {
                &[$v]
            }
        }
    };
}
ratfun_alg!(RatN, "n");
ratfun_alg!(RatX, "x");

impl Alg for ShiftOp {
    fn num(v: Rat) -> Self {
        ShiftOp::coef(RatFun::constant(v))
    }
    fn ident(name: &str) -> Option<Self> {
        match name {
            "n" => Some(ShiftOp::coef(RatFun::var())),
            "E" => Some(ShiftOp::e(1)),
            _ => None,
        }
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Option<Self> {
        let c = pure_coef(o)?;
        (!c.is_zero()).then(|| self * &ShiftOp::coef(c.recip()))
    }
    fn pow(&self, k: i64) -> Option<Self> {
        if self.terms().len() == 1 {
            let (e, c) = self.terms().iter().next().unwrap();
            if c.is_one() {
                return Some(ShiftOp::e(e * k));
            }
            if *e == 0 {
                return Some(ShiftOp::coef(c.pow(i32::try_from(k).ok()?)));
            }
        }
        (k >= 0).then(|| pow_by_squaring(self, k as u64, ShiftOp::one()))
    }
    fn idents() -> &'static [&'static str] {
        &["n", "E"]
    }
}

fn pure_coef(o: &ShiftOp) -> Option<RatFun> {
    if o.is_zero() {
        return None;
    }
    (o.terms().len() == 1 && o.min_exp() == 0).then(|| o.coeff(0))
}

impl Alg for DiffOp {
    fn num(v: Rat) -> Self {
        DiffOp::coef(Laurent::constant(v))
    }
    fn ident(name: &str) -> Option<Self> {
        match name {
            "x" => Some(DiffOp::x_pow(1)),
            "D" => Some(DiffOp::d(1)),
            _ => None,
        }
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Option<Self> {
        // Only Laurent monomials are units.
        if o.terms().len() != 1 || o.order() != 0 {
            return None;
        }
        let c = o.coeff(0);
        if c.terms().len() != 1 {
            return None;
        }
        let (m, a) = c.terms().iter().next().unwrap();
        Some(self * &DiffOp::coef(Laurent::monomial(a.recip(), -m)))
    }
    fn pow(&self, k: i64) -> Option<Self> {
        if k < 0 {
            return DiffOp::one().div(&pow_by_squaring(self, k.unsigned_abs(), DiffOp::one()));
        }
        Some(pow_by_squaring(self, k as u64, DiffOp::one()))
    }
    fn idents() -> &'static [&'static str] {
        &["x", "D"]
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

const SEQ_HEADS: &[&str] = &[
    "hyper", "rat", "quasi", "delta", "fin", "nsum", "shift", "ishift", "psum", "had", "conv", "interlace", "lam",
    "msect",
];

impl Parser {
    fn new(text: &str) -> Result<Self, SyntaxError> {
        Ok(Parser { toks: lex(text)?, at: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, SyntaxError> {
        Err(SyntaxError {
            pos: self.pos(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        })
    }

    fn invalid<T>(&self, pos: usize, what: &str) -> Result<T, SyntaxError> {
        Err(SyntaxError { pos, expected: vec![what.to_string()], found: "an invalid value".into() })
    }

    fn is_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    fn expect_sym(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.is_sym(c) {
            self.bump();
            Ok(())
        } else {
            self.fail(&[&format!("`{c}`")])
        }
    }

    fn expect_end(&mut self) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.fail(&["end of input"])
        }
    }

    fn arith<A: Alg>(&mut self) -> Result<A, SyntaxError> {
        let mut acc = self.arith_term::<A>()?;
        loop {
            if self.is_sym('+') {
                self.bump();
                acc = acc.add(&self.arith_term::<A>()?);
            } else if self.is_sym('-') {
                self.bump();
                acc = acc.add(&self.arith_term::<A>()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn arith_term<A: Alg>(&mut self) -> Result<A, SyntaxError> {
        let mut acc = self.arith_factor::<A>()?;
        loop {
            if self.is_sym('*') {
                self.bump();
                acc = acc.mul(&self.arith_factor::<A>()?);
            } else if self.is_sym('/') {
                self.bump();
                let pos = self.pos();
                let d = self.arith_factor::<A>()?;
                acc = match acc.div(&d) {
                    Some(v) => v,
                    None => return self.invalid(pos, "a nonzero invertible divisor"),
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn arith_factor<A: Alg>(&mut self) -> Result<A, SyntaxError> {
        if self.is_sym('-') {
            self.bump();
            return Ok(self.arith_factor::<A>()?.neg());
        }
        let base = self.arith_atom::<A>()?;
        if !self.is_sym('^') {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let k = self.signed_int()?;
        match base.pow(k) {
            Some(v) => Ok(v),
            None => self.invalid(pos, "an exponent valid for this base"),
        }
    }

    fn arith_atom<A: Alg>(&mut self) -> Result<A, SyntaxError> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(A::num(Rat::from_integer(v)))
            }
            Tok::Ident(name) => match A::ident(&name) {
                Some(v) => {
                    self.bump();
                    Ok(v)
                }
                None => self.arith_expected::<A, _>(),
            },
            Tok::Sym('(') => {
                self.bump();
                let v = self.arith::<A>()?;
                self.expect_sym(')')?;
                Ok(v)
            }
            _ => self.arith_expected::<A, _>(),
        }
    }

    fn arith_expected<A: Alg, T>(&self) -> Result<T, SyntaxError> {
        let mut exp = vec!["number", "`(`", "`-`"];
        exp.extend(A::idents().iter().map(|s| match *s {
            "n" => "`n`",
            "x" => "`x`",
            "E" => "`E`",
            _ => "`D`",
        }));
        self.fail(&exp)
    }

    fn signed_int(&mut self) -> Result<i64, SyntaxError> {
        let neg = self.is_sym('-');
        if neg {
            self.bump();
        }
        let pos = self.pos();
        let Tok::Num(v) = self.peek().clone() else { return self.fail(&["integer"]) };
        self.bump();
        match i64::try_from(v) {
            Ok(k) => Ok(if neg { -k } else { k }),
            Err(_) => self.invalid(pos, "a machine-size integer"),
        }
    }

    fn natural(&mut self) -> Result<u64, SyntaxError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                match u64::try_from(v) {
                    Ok(k) => Ok(k),
                    Err(_) => self.invalid(pos, "a machine-size integer"),
                }
            }
            _ => self.fail(&["nonnegative integer"]),
        }
    }

    /// `[-] int [/ int]`
    fn rational(&mut self) -> Result<Rat, SyntaxError> {
        let neg = self.is_sym('-');
        if neg {
            self.bump();
        }
        let Tok::Num(p) = self.peek().clone() else { return self.fail(&["number"]) };
        self.bump();
        let mut v = Rat::from_integer(p);
        if self.is_sym('/') {
            self.bump();
            let pos = self.pos();
            let Tok::Num(q) = self.peek().clone() else { return self.fail(&["number"]) };
            self.bump();
            if q.is_zero() {
                return self.invalid(pos, "a nonzero denominator");
            }
            v /= Rat::from_integer(q);
        }
        Ok(if neg { -v } else { v })
    }

    /// Comma-separated rationals up to (not including) `)` or `;`.
    fn rational_list(&mut self) -> Result<Vec<Rat>, SyntaxError> {
        let mut out = Vec::new();
        if self.is_sym(')') || self.is_sym(';') {
            return Ok(out);
        }
        out.push(self.rational()?);
        while self.is_sym(',') {
            self.bump();
            out.push(self.rational()?);
        }
        Ok(out)
    }

    fn poly_n(&mut self) -> Result<Poly, SyntaxError> {
        let pos = self.pos();
        let r = self.arith::<RatN>()?.0;
        match r.as_poly() {
            Some(p) => Ok(p),
            None => self.invalid(pos, "a polynomial in n"),
        }
    }

    fn seq(&mut self) -> Result<Seq, SyntaxError> {
        let mut coeffs = Vec::new();
        let mut terms = Vec::new();
        let (c, t) = self.seq_term()?;
        coeffs.push(c);
        terms.push(t);
        loop {
            let sign = if self.is_sym('+') {
                Rat::one()
            } else if self.is_sym('-') {
                -Rat::one()
            } else {
                break;
            };
            self.bump();
            let (c, t) = self.seq_term()?;
            coeffs.push(sign * c);
            terms.push(t);
        }
        Ok(lincomb(coeffs, terms))
    }

    fn seq_term(&mut self) -> Result<(Rat, Seq), SyntaxError> {
        if matches!(self.peek(), Tok::Num(_)) || self.is_sym('-') {
            let c = self.rational()?;
            self.expect_sym('*')?;
            Ok((c, self.seq_primary()?))
        } else {
            Ok((Rat::one(), self.seq_primary()?))
        }
    }

    fn seq_primary(&mut self) -> Result<Seq, SyntaxError> {
        let mut expected: Vec<&str> = vec!["`(`", "number", "`-`"];
        expected.extend(SEQ_HEADS);
        let head = match self.peek().clone() {
            Tok::Sym('(') => {
                self.bump();
                let e = self.seq()?;
                self.expect_sym(')')?;
                return Ok(e);
            }
            Tok::Ident(h) if SEQ_HEADS.contains(&h.as_str()) => h,
            _ => return self.fail(&expected),
        };
        let head_pos = self.pos();
        self.bump();
        if head == "delta" {
            return Ok(delta());
        }
        self.expect_sym('(')?;
        let e = match head.as_str() {
            "hyper" => {
                let p = self.poly_n()?;
                self.expect_sym(';')?;
                let q = self.poly_n()?;
                self.expect_sym(';')?;
                let init = self.rational_list()?;
                if init.is_empty() {
                    return self.invalid(self.pos(), "at least one initial value");
                }
                hyper(p, q, init)
            }
            "rat" => {
                let r = self.arith::<RatN>()?.0;
                self.expect_sym(';')?;
                rational(r, self.rational_list()?)
            }
            "quasi" => {
                let pos = self.pos();
                let alpha = self.rational()?;
                if alpha.is_zero() {
                    return self.invalid(pos, "a nonzero base");
                }
                self.expect_sym(';')?;
                let form = match self.peek().clone() {
                    Tok::Ident(k) if k == "pow" => {
                        self.bump();
                        QuasiForm::PolyPower(self.small()?)
                    }
                    Tok::Ident(k) if k == "pole" => {
                        self.bump();
                        let beta = self.rational()?;
                        QuasiForm::PolePower(beta, self.small()?)
                    }
                    _ => return self.fail(&["`pow`", "`pole`"]),
                };
                quasi(alpha, form)
            }
            "fin" => fin(self.rational_list()?),
            "nsum" => {
                let mut factors = vec![self.seq()?];
                while self.is_sym(',') {
                    self.bump();
                    factors.push(self.seq()?);
                }
                let offsets = if self.is_sym(';') {
                    self.bump();
                    let pos = self.pos();
                    let mut os = vec![self.natural()?];
                    while self.is_sym(',') {
                        self.bump();
                        os.push(self.natural()?);
                    }
                    if os.len() + 1 != factors.len() {
                        return self.invalid(pos, "one offset per inner sum");
                    }
                    os
                } else {
                    vec![0; factors.len() - 1]
                };
                nested(factors, offsets)
            }
            "shift" => {
                let e = self.seq()?;
                self.expect_sym(',')?;
                let k = self.natural()?;
                Arc::new(SeqExpr::Shift { inner: e, k })
            }
            "ishift" => {
                let e = self.seq()?;
                self.expect_sym(',')?;
                inv_shift(e, self.rational()?)
            }
            "psum" => psum(self.seq()?),
            "had" | "conv" => {
                let a = self.seq()?;
                self.expect_sym(',')?;
                let b = self.seq()?;
                if head == "had" {
                    product(a, b)
                } else {
                    conv(a, b)
                }
            }
            "interlace" => {
                let mut parts = vec![self.seq()?];
                while self.is_sym(',') {
                    self.bump();
                    parts.push(self.seq()?);
                }
                interlace(parts)
            }
            "lam" => {
                let e = self.seq()?;
                self.expect_sym(',')?;
                let pos = self.pos();
                let m = self.natural()?;
                if m == 0 {
                    return self.invalid(pos, "a positive factor");
                }
                zero_interlace(e, m)
            }
            "msect" => {
                let e = self.seq()?;
                self.expect_sym(',')?;
                let pos = self.pos();
                let m = self.natural()?;
                self.expect_sym(',')?;
                let r = self.natural()?;
                if m == 0 || r >= m {
                    return self.invalid(pos, "a modulus m ≥ 1 and residue r < m");
                }
                multisect(e, m, r)
            }
            _ => return self.invalid(head_pos, "a known constructor"),
        };
        self.expect_sym(')')?;
        Ok(e)
    }

    fn small(&mut self) -> Result<u32, SyntaxError> {
        let pos = self.pos();
        let v = self.natural()?;
        match u32::try_from(v) {
            Ok(k) => Ok(k),
            Err(_) => self.invalid(pos, "a small exponent"),
        }
    }
}

/// Parsed operator: shift operators use `n` and `E`, differential ones `x` and `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operator {
    Shift(ShiftOp),
    Diff(DiffOp),
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::Shift(l) => write!(f, "{l}"),
            Operator::Diff(m) => write!(f, "{}", m.fmt_var("x")),
        }
    }
}

pub fn parse_operator(text: &str) -> Result<Operator, SyntaxError> {
    let mut p = Parser::new(text)?;
    let diff = p.toks.iter().any(|(_, t)| matches!(t, Tok::Ident(s) if s == "x" || s == "D"));
    let op = if diff { Operator::Diff(p.arith::<DiffOp>()?) } else { Operator::Shift(p.arith::<ShiftOp>()?) };
    p.expect_end()?;
    Ok(op)
}

pub fn parse_shift_operator(text: &str) -> Result<ShiftOp, SyntaxError> {
    let mut p = Parser::new(text)?;
    let op = p.arith::<ShiftOp>()?;
    p.expect_end()?;
    Ok(op)
}

/// Rational function in `n`.
pub fn parse_ratfun_n(text: &str) -> Result<RatFun, SyntaxError> {
    let mut p = Parser::new(text)?;
    let r = p.arith::<RatN>()?.0;
    p.expect_end()?;
    Ok(r)
}

/// Rational function in `x`.
pub fn parse_ratfun_x(text: &str) -> Result<RatFun, SyntaxError> {
    let mut p = Parser::new(text)?;
    let r = p.arith::<RatX>()?.0;
    p.expect_end()?;
    Ok(r)
}

pub fn parse_seq_expr(text: &str) -> Result<Seq, SyntaxError> {
    let mut p = Parser::new(text)?;
    let e = p.seq()?;
    p.expect_end()?;
    Ok(e)
}

/// Exact rational literal `[-]p[/q]`.
pub fn parse_rational(text: &str) -> Result<Rat, SyntaxError> {
    let mut p = Parser::new(text)?;
    let v = p.rational()?;
    p.expect_end()?;
    Ok(v)
}
