//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr    := ["-"] term (("+" | "-") term)*
//! term    := power (("*" | "/") factor)*
//! factor  := ["-"] power
//! power   := atom ["^" ["-"] power]      right associative, so -x^2 = -(x^2)
//! atom    := integer | ident | "x" | "D" | "(" expr ")"
//!          | "exp(" expr ")" | "sqrt(" integer ")"
//! ```
//!
//! `D` is the derivative operator and multiplication is composition once an
//! operator is involved. Identifiers must be declared parameters, apart from
//! the built-in algebraic constants `i` and `sqrtN`.

use std::collections::BTreeSet;

use crate::diffop::{DiffOp, QuasiRat, XPoly, XRat};
use crate::error::Error;
use crate::exact::{Param, ParamScalar, Rat};

/// A parsed value: a rational function, a quasi-rational function or an operator.
#[derive(Clone, Debug)]
pub enum Value {
    Rat(XRat),
    Quasi(QuasiRat),
    Op(DiffOp),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Rat(r) if r.is_polynomial() => "polynomial",
            Value::Rat(_) => "rational function",
            Value::Quasi(_) => "quasi-rational function",
            Value::Op(_) => "operator",
        }
    }

    pub fn into_xrat(self) -> Result<XRat, Error> {
        match self {
            Value::Rat(r) => Ok(r),
            Value::Quasi(q) => q
                .to_xrat()
                .ok_or_else(|| Error::Invalid("expected a rational function".into())),
            Value::Op(op) if op.order().unwrap_or(0) == 0 => Ok(op.coeff(0)),
            v => Err(Error::Invalid(format!(
                "expected a rational function, found an {}",
                v.kind()
            ))),
        }
    }

    pub fn into_poly(self) -> Result<XPoly, Error> {
        self.into_xrat()?
            .to_poly()
            .ok_or_else(|| Error::Invalid("expected a polynomial in x".into()))
    }

    pub fn into_scalar(self) -> Result<ParamScalar, Error> {
        self.into_xrat()?
            .constant_value()
            .ok_or_else(|| Error::Invalid("expected an x-free constant".into()))
    }

    pub fn into_quasi(self) -> Result<QuasiRat, Error> {
        match self {
            Value::Quasi(q) => Ok(q),
            Value::Rat(r) => Ok(quasi_of(&r)),
            Value::Op(_) => Err(Error::Invalid(
                "expected a function, found an operator".into(),
            )),
        }
    }

    /// An operator; a rational function `f` becomes multiplication by `f`.
    pub fn into_op(self) -> Result<DiffOp, Error> {
        match self {
            Value::Op(op) => Ok(op),
            Value::Rat(r) => Ok(DiffOp::mul_by(r)),
            Value::Quasi(q) => q
                .to_xrat()
                .map(DiffOp::mul_by)
                .ok_or_else(|| Error::Invalid("quasi-rational functions are not operators".into())),
        }
    }
}

fn quasi_of(r: &XRat) -> QuasiRat {
    let num = r.num();
    let mut q = match num.leading().as_rat() {
        Some(lc) if !num.is_constant() => {
            QuasiRat::constant(ParamScalar::from_rat(lc)).mul(&QuasiRat::from_poly(num.monic()))
        }
        _ => QuasiRat::from_poly(num.clone()),
    };
    for (f, e) in r.factors() {
        q = q.mul(&QuasiRat::power(f.clone(), ParamScalar::int(-(e as i64))));
    }
    q
}

/// Parameters that identifiers may refer to.
#[derive(Clone, Debug, Default)]
pub struct ParseContext {
    declared: BTreeSet<String>,
}

impl ParseContext {
    pub fn new<I, S>(names: I) -> Result<ParseContext, Error>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut declared = BTreeSet::new();
        for n in names {
            let n = n.as_ref().trim();
            if n.is_empty() {
                continue;
            }
            Param::named(n)?;
            declared.insert(n.to_string());
        }
        Ok(ParseContext { declared })
    }

    pub fn declare(&mut self, name: &str) -> Result<(), Error> {
        Param::named(name)?;
        self.declared.insert(name.to_string());
        Ok(())
    }

    pub fn declared(&self) -> impl Iterator<Item = &str> {
        self.declared.iter().map(|s| s.as_str())
    }

    fn resolve(&self, name: &str, pos: usize) -> Result<Param, Error> {
        let builtin = name == "i"
            || name
                .strip_prefix("sqrt")
                .is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()));
        if builtin || self.declared.contains(name) {
            return Param::named(name).map_err(|e| Error::Parse {
                pos,
                message: e.to_string(),
            });
        }
        let list: Vec<&str> = self.declared().collect();
        let known = if list.is_empty() {
            "none".to_string()
        } else {
            list.join(", ")
        };
        Err(Error::Parse {
            pos,
            message: format!("unknown identifier `{name}` (declared parameters: {known})"),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, Error> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
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
            out.push((Tok::Num(chars[start..i].iter().collect()), start));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(Error::Parse {
                pos: i,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    ctx: &'a ParseContext,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn err<T>(&self, pos: usize, message: impl Into<String>) -> Result<T, Error> {
        Err(Error::Parse {
            pos,
            message: message.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), Error> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(self.pos(), format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<Value, Error> {
        let neg_pos = self.pos();
        let mut acc = if self.eat('-') {
            negate(self.term()?, neg_pos)?
        } else {
            self.term()?
        };
        loop {
            let pos = self.pos();
            if self.eat('+') {
                let rhs = self.term()?;
                acc = add(acc, rhs, false, pos)?;
            } else if self.eat('-') {
                let rhs = self.term()?;
                acc = add(acc, rhs, true, pos)?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    /// A multiplicand, allowing a leading sign as in `x * -1`.
    fn factor(&mut self) -> Result<Value, Error> {
        let pos = self.pos();
        if self.eat('-') {
            negate(self.power()?, pos)
        } else {
            self.power()
        }
    }

    fn term(&mut self) -> Result<Value, Error> {
        let mut acc = self.power()?;
        loop {
            let pos = self.pos();
            if self.eat('*') {
                let rhs = self.factor()?;
                acc = mul(acc, rhs, pos)?;
            } else if self.eat('/') {
                let rhs = self.factor()?;
                acc = div(acc, rhs, pos)?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Value, Error> {
        let base = self.atom()?;
        let pos = self.pos();
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let mut e = self.power()?;
        if neg {
            e = negate(e, pos)?;
        }
        pow(base, e, pos)
    }

    fn atom(&mut self) -> Result<Value, Error> {
        let pos = self.pos();
        let Some((tok, _)) = self.toks.get(self.at).cloned() else {
            return self.err(pos, "unexpected end of input");
        };
        self.at += 1;
        match tok {
            Tok::Num(digits) => {
                let n: num_bigint::BigInt = digits.parse().expect("lexed digits");
                Ok(Value::Rat(XRat::constant(ParamScalar::from_rat(
                    Rat::from_bigint(n),
                ))))
            }
            Tok::Op('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Op(c) => self.err(pos, format!("unexpected `{c}`")),
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(Value::Rat(XRat::x())),
                "D" => Ok(Value::Op(DiffOp::d())),
                "exp" => {
                    self.expect('(')?;
                    let inner_pos = self.pos();
                    let q = self.expr()?;
                    self.expect(')')?;
                    match q.into_poly() {
                        Ok(p) => Ok(Value::Quasi(QuasiRat::exp(p))),
                        Err(_) => self.err(inner_pos, "exp() needs a polynomial argument"),
                    }
                }
                "sqrt" => {
                    self.expect('(')?;
                    let inner_pos = self.pos();
                    let neg = self.eat('-');
                    let n = match self.toks.get(self.at) {
                        Some((Tok::Num(d), _)) => d.parse::<i64>().ok(),
                        _ => None,
                    };
                    let Some(n) = n.filter(|n| *n != 0) else {
                        return self.err(inner_pos, "sqrt() takes a nonzero integer literal");
                    };
                    self.at += 1;
                    self.expect(')')?;
                    let (c, params) = Param::sqrt_of(if neg { -n } else { n });
                    let mut s = ParamScalar::int(c);
                    for p in params.unwrap_or_default() {
                        s = &s * &ParamScalar::param(p);
                    }
                    Ok(Value::Rat(XRat::constant(s)))
                }
                _ => {
                    let p = self.ctx.resolve(&name, pos)?;
                    Ok(Value::Rat(XRat::constant(ParamScalar::param(p))))
                }
            },
        }
    }
}

fn type_error<T>(pos: usize, what: &str, a: &Value, b: &Value) -> Result<T, Error> {
    Err(Error::Parse {
        pos,
        message: format!("cannot {what} a {} and a {}", a.kind(), b.kind()),
    })
}

fn negate(v: Value, pos: usize) -> Result<Value, Error> {
    mul(Value::Rat(XRat::int(-1)), v, pos)
}

fn add(a: Value, b: Value, subtract: bool, pos: usize) -> Result<Value, Error> {
    let b = if subtract { negate(b, pos)? } else { b };
    match (a, b) {
        (Value::Rat(x), Value::Rat(y)) => Ok(Value::Rat(&x + &y)),
        (a @ Value::Quasi(_), b) | (a, b @ Value::Quasi(_)) => {
            match (a.clone().into_xrat(), b.clone().into_xrat()) {
                (Ok(x), Ok(y)) => Ok(Value::Rat(&x + &y)),
                _ => type_error(pos, "add", &a, &b),
            }
        }
        (a, b) => Ok(Value::Op(&a.into_op()? + &b.into_op()?)),
    }
}

fn mul(a: Value, b: Value, pos: usize) -> Result<Value, Error> {
    match (a, b) {
        (Value::Rat(x), Value::Rat(y)) => Ok(Value::Rat(&x * &y)),
        (Value::Op(x), Value::Op(y)) => Ok(Value::Op(x.compose(&y))),
        (Value::Op(x), Value::Rat(y)) => Ok(Value::Op(x.compose(&DiffOp::mul_by(y)))),
        (Value::Rat(x), Value::Op(y)) => Ok(Value::Op(y.scale(&x))),
        (a @ Value::Op(_), b) | (a, b @ Value::Op(_)) => type_error(pos, "multiply", &a, &b),
        (a, b) => Ok(Value::Quasi(a.into_quasi()?.mul(&b.into_quasi()?))),
    }
}

fn div(a: Value, b: Value, pos: usize) -> Result<Value, Error> {
    let zero = || Error::Parse {
        pos,
        message: "division by zero".into(),
    };
    match (a, b) {
        (Value::Rat(x), Value::Rat(y)) => x.checked_div(&y).map(Value::Rat).map_err(|_| zero()),
        (Value::Op(x), Value::Rat(y)) => match y.constant_value() {
            Some(c) => Ok(Value::Op(x.scale_scalar(&c.recip().map_err(|_| zero())?))),
            None => Err(Error::Parse {
                pos,
                message: "an operator can only be divided by a constant".into(),
            }),
        },
        (a @ Value::Op(_), b) | (a, b @ Value::Op(_)) => type_error(pos, "divide", &a, &b),
        (a, b) => {
            let inv = b
                .into_quasi()?
                .pow(&ParamScalar::int(-1))
                .map_err(|_| zero())?;
            Ok(Value::Quasi(a.into_quasi()?.mul(&inv)))
        }
    }
}

fn pow(base: Value, e: Value, pos: usize) -> Result<Value, Error> {
    let e = match e.into_scalar() {
        Ok(s) => s,
        Err(_) => {
            return Err(Error::Parse {
                pos,
                message: "exponent must be an x-free constant".into(),
            })
        }
    };
    let int = e.as_rat().and_then(|r| r.to_i64());
    match (base, int) {
        (Value::Rat(r), Some(n)) => r.pow(n as i32).map(Value::Rat).map_err(|_| Error::Parse {
            pos,
            message: "division by zero".into(),
        }),
        (Value::Op(op), Some(n)) if n >= 0 => Ok(Value::Op(
            (0..n).fold(DiffOp::identity(), |acc, _| acc.compose(&op)),
        )),
        (Value::Op(_), _) => Err(Error::Parse {
            pos,
            message: "operators take nonnegative integer powers".into(),
        }),
        (base, _) => {
            let q = base.into_quasi()?;
            q.pow(&e).map(Value::Quasi).map_err(|err| Error::Parse {
                pos,
                message: err.to_string(),
            })
        }
    }
}

/// Parses `text` with the given declared parameters.
pub fn parse_value(text: &str, ctx: &ParseContext) -> Result<Value, Error> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            message: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks,
        at: 0,
        end: text.chars().count(),
        ctx,
    };
    let v = p.expr()?;
    if p.at < p.toks.len() {
        return p.err(p.pos(), "unexpected trailing input");
    }
    Ok(v)
}

pub fn parse_xrat(text: &str, ctx: &ParseContext) -> Result<XRat, Error> {
    parse_value(text, ctx)?.into_xrat()
}

pub fn parse_poly(text: &str, ctx: &ParseContext) -> Result<XPoly, Error> {
    parse_value(text, ctx)?.into_poly()
}

pub fn parse_quasi(text: &str, ctx: &ParseContext) -> Result<QuasiRat, Error> {
    parse_value(text, ctx)?.into_quasi()
}

pub fn parse_op(text: &str, ctx: &ParseContext) -> Result<DiffOp, Error> {
    parse_value(text, ctx)?.into_op()
}

pub fn parse_scalar(text: &str, ctx: &ParseContext) -> Result<ParamScalar, Error> {
    parse_value(text, ctx)?.into_scalar()
}

/// An operator, or a potential `V` standing for `-D^2 + V`.
pub fn parse_operator_or_potential(text: &str, ctx: &ParseContext) -> Result<DiffOp, Error> {
    match parse_value(text, ctx)? {
        Value::Op(op) => Ok(op),
        v => Ok(DiffOp::schrodinger(v.into_xrat()?)),
    }
}
