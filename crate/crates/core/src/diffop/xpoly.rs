//! Dense polynomials in `x` over the parametric field.

use std::collections::{BTreeSet, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use crate::exact::{Param, ParamScalar, Rat};

/// A polynomial `Σ c_d x^d`, stored densely with no trailing zero coefficient.
#[derive(Clone, Debug, Default)]
pub struct XPoly {
    coeffs: Vec<ParamScalar>,
}

impl XPoly {
    pub fn zero() -> XPoly {
        XPoly { coeffs: Vec::new() }
    }

    pub fn one() -> XPoly {
        XPoly::constant(ParamScalar::one())
    }

    pub fn x() -> XPoly {
        XPoly::monomial(ParamScalar::one(), 1)
    }

    pub fn constant(c: ParamScalar) -> XPoly {
        XPoly::from_coeffs(vec![c])
    }

    pub fn monomial(c: ParamScalar, degree: usize) -> XPoly {
        if c.is_zero() {
            return XPoly::zero();
        }
        let mut coeffs = vec![ParamScalar::zero(); degree + 1];
        coeffs[degree] = c;
        XPoly { coeffs }
    }

    /// Builds from ascending coefficients; trailing zeros are trimmed.
    pub fn from_coeffs(coeffs: Vec<ParamScalar>) -> XPoly {
        let mut p = XPoly { coeffs };
        p.trim();
        p
    }

    /// Convenience constructor from ascending integer coefficients.
    pub fn from_ints(coeffs: &[i64]) -> XPoly {
        XPoly::from_coeffs(coeffs.iter().map(|&c| ParamScalar::int(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[ParamScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> ParamScalar {
        self.coeffs
            .get(d)
            .cloned()
            .unwrap_or_else(ParamScalar::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn leading(&self) -> ParamScalar {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(ParamScalar::zero)
    }

    /// Number of leading factors of `x`, i.e. the lowest degree with a nonzero coefficient.
    pub fn x_valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Divides by `x^n`, dropping the `n` lowest coefficients.
    pub fn shift_down(&self, n: usize) -> XPoly {
        XPoly::from_coeffs(self.coeffs.iter().skip(n).cloned().collect())
    }

    pub fn shift_up(&self, n: usize) -> XPoly {
        if self.is_zero() {
            return XPoly::zero();
        }
        let mut coeffs = vec![ParamScalar::zero(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        XPoly { coeffs }
    }

    pub fn scale(&self, c: &ParamScalar) -> XPoly {
        if c.is_zero() {
            return XPoly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        XPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn scale_rat(&self, c: &Rat) -> XPoly {
        if c.is_zero() {
            return XPoly::zero();
        }
        XPoly {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn derivative(&self) -> XPoly {
        XPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(d, c)| c.scale(&Rat::int(d as i64)))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> XPoly {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn pow(&self, e: u32) -> XPoly {
        let mut result = XPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn eval(&self, at: &ParamScalar) -> ParamScalar {
        let mut acc = ParamScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    /// Euclidean division over the coefficient field. Panics on a zero divisor.
    pub fn div_rem(&self, d: &XPoly) -> (XPoly, XPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading();
        let monic = lc.is_one();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (XPoly::zero(), self.clone());
        }
        let mut quot = vec![ParamScalar::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let q = if monic { top.clone() } else { top / &lc };
            for (j, c) in d.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    rem[i + j] = &rem[i + j] - &(&q * c);
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (XPoly::from_coeffs(quot), XPoly::from_coeffs(rem))
    }

    pub fn div_exact(&self, d: &XPoly) -> Option<XPoly> {
        if d.degree()? > self.degree().unwrap_or(0) && !self.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> XPoly {
        let lc = self.leading();
        if lc.is_zero() || lc.is_one() {
            return self.clone();
        }
        let inv = lc.recip().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    /// Monic greatest common divisor over the coefficient field. With
    /// parameters present the result is generic: it is correct away from the
    /// parameter values that make a remainder's leading coefficient vanish.
    pub fn gcd(&self, other: &XPoly) -> XPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Square-free decomposition `p = c · Π s_i^i` (Yun), returned as monic
    /// `(s_i, i)` pairs with nonconstant `s_i`, plus the constant `c`.
    pub fn squarefree(&self) -> (ParamScalar, Vec<(XPoly, u32)>) {
        let lc = self.leading();
        let p = self.monic();
        let mut out = Vec::new();
        if p.is_constant() {
            return (lc, out);
        }
        let dp = p.derivative();
        let a = p.gcd(&dp);
        let mut b = p.div_exact(&a).expect("gcd divides");
        let mut c = dp.div_exact(&a).expect("gcd divides derivative");
        let mut i = 1u32;
        loop {
            let d = &c - &b.derivative();
            if d.is_zero() {
                if !b.is_constant() {
                    out.push((b.monic(), i));
                }
                break;
            }
            let g = b.gcd(&d);
            if !g.is_constant() {
                out.push((g.clone(), i));
            }
            b = b.div_exact(&g).expect("gcd divides");
            c = d.div_exact(&g).expect("gcd divides");
            i += 1;
            if b.is_constant() {
                break;
            }
        }
        (lc, out)
    }

    pub fn params(&self) -> BTreeSet<Param> {
        self.coeffs.iter().flat_map(|c| c.params()).collect()
    }

    pub fn has_params(&self) -> bool {
        self.coeffs.iter().any(|c| c.has_params())
    }

    /// Evaluates the parameters; `None` when a coefficient hits a pole.
    pub fn specialize(&self, values: &HashMap<Param, Rat>) -> Option<XPoly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.specialize(values))
            .collect::<Option<Vec<_>>>()?;
        Some(XPoly::from_coeffs(coeffs))
    }

    pub fn subst_param(&self, p: Param, value: &ParamScalar) -> Option<XPoly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.subst(p, value).ok())
            .collect::<Option<Vec<_>>>()?;
        Some(XPoly::from_coeffs(coeffs))
    }

    /// Whether `self = c · other` for some scalar `c`; returns `c`.
    pub fn proportional_to(&self, other: &XPoly) -> Option<ParamScalar> {
        if other.is_zero() {
            return self.is_zero().then(ParamScalar::zero);
        }
        if self.degree() != other.degree() {
            return None;
        }
        let c = &self.leading() / &other.leading();
        (self == &other.scale(&c)).then_some(c)
    }
}

impl PartialEq for XPoly {
    fn eq(&self, other: &XPoly) -> bool {
        self.coeffs.len() == other.coeffs.len()
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| a.same_repr(b) || a == b)
    }
}

impl Eq for XPoly {}

impl<'a> Add<&'a XPoly> for &'a XPoly {
    type Output = XPoly;
    fn add(self, rhs: &XPoly) -> XPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            if !s.is_zero() {
                *c = &*c + s;
            }
        }
        XPoly::from_coeffs(coeffs)
    }
}

impl<'a> Sub<&'a XPoly> for &'a XPoly {
    type Output = XPoly;
    fn sub(self, rhs: &XPoly) -> XPoly {
        self + &(-rhs)
    }
}

impl Neg for &XPoly {
    type Output = XPoly;
    fn neg(self) -> XPoly {
        XPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for XPoly {
    type Output = XPoly;
    fn neg(self) -> XPoly {
        -&self
    }
}

impl<'a> Mul<&'a XPoly> for &'a XPoly {
    type Output = XPoly;
    fn mul(self, rhs: &XPoly) -> XPoly {
        if self.is_zero() || rhs.is_zero() {
            return XPoly::zero();
        }
        let mut coeffs = vec![ParamScalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = a * b;
                let slot = &mut coeffs[i + j];
                *slot = if slot.is_zero() { t } else { &*slot + &t };
            }
        }
        XPoly::from_coeffs(coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<XPoly> for XPoly {
            type Output = XPoly;
            fn $m(self, rhs: XPoly) -> XPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a XPoly> for XPoly {
            type Output = XPoly;
            fn $m(self, rhs: &XPoly) -> XPoly {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<ParamScalar> for XPoly {
    fn from(c: ParamScalar) -> XPoly {
        XPoly::constant(c)
    }
}
