//! Text rendering in the expression grammar accepted by [`super::parse`].
//!
//! Terms are ordered by parameter names rather than interning order, so the
//! same value always prints the same way.

use std::fmt::{self, Display, Write};

use crate::diffop::{DiffOp, QuasiRat, XPoly, XRat};
use crate::exact::{MPoly, Monomial, ParamScalar, Rat};

fn monomial_key(m: &Monomial) -> (u32, Vec<(String, u32)>) {
    let mut names: Vec<(String, u32)> = m
        .factors()
        .map(|(p, e)| (p.name().to_string(), e))
        .collect();
    names.sort();
    (m.degree(), names)
}

fn monomial_text(key: &[(String, u32)]) -> String {
    key.iter()
        .map(|(n, e)| {
            if *e == 1 {
                n.clone()
            } else {
                format!("{n}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Writes `c * body` as a signed term; `body` empty means a bare constant.
fn push_term(out: &mut String, c: &Rat, body: &str) {
    let neg = c.is_negative();
    let a = c.abs();
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if body.is_empty() {
        let _ = write!(out, "{a}");
    } else if a.is_one() {
        out.push_str(body);
    } else {
        let _ = write!(out, "{a}*{body}");
    }
}

type SortedTerm = (Vec<(String, u32)>, u32, Rat);

fn sorted_terms(p: &MPoly) -> Vec<SortedTerm> {
    let mut terms: Vec<_> = p
        .terms()
        .map(|(m, c)| {
            let (d, k) = monomial_key(m);
            (k, d, c.clone())
        })
        .collect();
    terms.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    terms
}

pub(crate) fn mpoly_text(p: &MPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (key, _, c) in sorted_terms(p) {
        push_term(&mut out, &c, &monomial_text(&key));
    }
    out
}

impl Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&mpoly_text(self))
    }
}

/// Whether the text is a single signless factor that needs no parentheses
/// as a multiplicand.
fn is_atomic(s: &str) -> bool {
    !s.contains([' ', '/', '-', '+'])
}

fn is_wrapped(s: &str) -> bool {
    if !s.starts_with('(') || !s.ends_with(')') {
        return false;
    }
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 && i + 1 < s.len() {
                    return false;
                }
            }
            _ => {}
        }
    }
    true
}

fn paren(s: &str) -> String {
    if is_atomic(s) || is_wrapped(s) {
        s.to_string()
    } else {
        format!("({s})")
    }
}

/// Parenthesizes a divisor unless it is a single power.
fn paren_divisor(s: &str) -> String {
    if s.contains('*') && !is_wrapped(s) {
        format!("({s})")
    } else {
        paren(s)
    }
}

impl Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den().is_one() {
            f.write_str(&mpoly_text(self.num()))
        } else {
            write!(
                f,
                "{}/{}",
                paren(&mpoly_text(self.num())),
                paren_divisor(&mpoly_text(self.den()))
            )
        }
    }
}

/// A coefficient times a body (`x^d`, `D^r`, ...), as a signed term.
fn push_scalar_term(out: &mut String, c: &ParamScalar, body: &str) {
    if let Some(r) = c.as_rat() {
        push_term(out, &r, body);
        return;
    }
    if c.den().is_one() && c.num().len() == 1 {
        let (key, _, r) = sorted_terms(c.num()).remove(0);
        let mono = monomial_text(&key);
        let full = if body.is_empty() {
            mono
        } else {
            format!("{mono}*{body}")
        };
        push_term(out, &r, &full);
        return;
    }
    let text = format!("({c})");
    let full = if body.is_empty() {
        text
    } else {
        format!("{text}*{body}")
    };
    push_term(out, &Rat::one(), &full);
}

fn power_text(base: &str, e: usize) -> String {
    match e {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{e}"),
    }
}

pub(crate) fn xpoly_text(p: &XPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (d, c) in p.coeffs().iter().enumerate().rev() {
        if !c.is_zero() {
            push_scalar_term(&mut out, c, &power_text("x", d));
        }
    }
    out
}

impl Display for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&xpoly_text(self))
    }
}

pub(crate) fn xrat_text(r: &XRat) -> String {
    if r.is_polynomial() {
        return xpoly_text(r.num());
    }
    let den: Vec<String> = r
        .factors()
        .map(|(f, e)| {
            let base = paren(&xpoly_text(f));
            if e == 1 {
                base
            } else {
                format!("{base}^{e}")
            }
        })
        .collect();
    let den = if den.len() == 1 {
        den[0].clone()
    } else {
        format!("({})", den.join("*"))
    };
    format!("{}/{}", paren(&xpoly_text(r.num())), paren_divisor(&den))
}

impl Display for XRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&xrat_text(self))
    }
}

impl Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (r, c) in self.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let body = power_text("D", r);
            let single =
                c.is_polynomial() && c.num().coeffs().iter().filter(|a| !a.is_zero()).count() == 1;
            match c.num().degree() {
                Some(d) if single => {
                    let parts: Vec<String> = [power_text("x", d), body]
                        .into_iter()
                        .filter(|s| !s.is_empty())
                        .collect();
                    push_scalar_term(&mut out, &c.num().coeff(d), &parts.join("*"));
                }
                _ => {
                    let text = paren(&xrat_text(c));
                    let full = if body.is_empty() {
                        text
                    } else {
                        format!("{text}*{body}")
                    };
                    push_term(&mut out, &Rat::one(), &full);
                }
            }
        }
        f.write_str(&out)
    }
}

impl Display for QuasiRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.scale().is_one() || (self.factors().is_empty() && self.exp_part().is_zero()) {
            parts.push(paren(&self.scale().to_string()));
        }
        for (b, e) in self.factors() {
            let base = paren(&xpoly_text(b));
            if e.is_one() {
                parts.push(base);
            } else {
                parts.push(format!("{base}^{}", paren(&e.to_string())));
            }
        }
        if !self.exp_part().is_zero() {
            parts.push(format!("exp({})", xpoly_text(self.exp_part())));
        }
        f.write_str(&parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Param;

    #[test]
    fn polynomials_and_fractions() {
        let k = ParamScalar::param(Param::of("k"));
        let p = XPoly::from_coeffs(vec![
            ParamScalar::int(-1),
            k.clone(),
            ParamScalar::ratio(1, 16),
        ]);
        assert_eq!(p.to_string(), "1/16*x^2 + k*x - 1");
        let r = XRat::from_parts(
            XPoly::from_ints(&[2, 0, 0, 0, 1]),
            XPoly::from_ints(&[0, 0, 1]),
        )
        .unwrap();
        assert_eq!(r.to_string(), "(x^4 + 2)/x^2");
        let s = &k / &(&k + &ParamScalar::one());
        assert_eq!(s.to_string(), "k/(k + 1)");
        let a = ParamScalar::param(Param::of("a"));
        let t = &(&k * &k) / &(&(&a * &a) * &(&k * &k * &k));
        assert_eq!(t.to_string(), "1/(a^2*k)");
    }

    #[test]
    fn operators() {
        let l = DiffOp::schrodinger(XRat::from_poly(XPoly::from_ints(&[0, 0, 1])));
        assert_eq!(l.to_string(), "-D^2 + x^2");
        assert_eq!(DiffOp::zero().to_string(), "0");
    }
}
