//! Elements of the coefficient field: fractions of parametric polynomials.

use std::collections::{BTreeSet, HashMap};
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::mpoly::{MPoly, Monomial};
use super::param::Param;
use super::rat::Rat;
use crate::error::Error;

/// A fraction `num / den` of parametric polynomials.
///
/// Normalization is deliberately weak: algebraic parameters are rationalized
/// out of the denominator, integer content and the sign of the denominator's
/// leading term are fixed, common monomial factors cancel, and the denominator is dropped when it divides the
/// numerator exactly. There is no multivariate gcd, so two equal values may
/// have different representations; compare with `==`, which cross-multiplies.
#[derive(Clone, Debug)]
pub struct ParamScalar {
    num: MPoly,
    den: MPoly,
}

/// Builds a normalized fraction; fails when `den` is the zero polynomial.
pub fn normalize_fraction(num: MPoly, den: MPoly) -> Result<ParamScalar, Error> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(ParamScalar::normalized(num, den))
}

/// Divides out the largest monomial dividing every term of both parts.
fn cancel_monomial_gcd(num: MPoly, den: MPoly) -> (MPoly, MPoly) {
    let mut g = Monomial::one();
    for p in den.params().into_iter().filter(|p| !p.is_algebraic()) {
        let e = num
            .terms()
            .chain(den.terms())
            .map(|(m, _)| m.exponent(p))
            .min()
            .unwrap_or(0);
        for _ in 0..e {
            g = g.mul(&Monomial::var(p)).0;
        }
    }
    if g.is_one() {
        return (num, den);
    }
    let strip = |q: &MPoly| {
        MPoly::from_terms(
            q.terms()
                .map(|(m, c)| (m.checked_div(&g).expect("common factor"), c.clone())),
        )
    };
    (strip(&num), strip(&den))
}

impl ParamScalar {
    pub fn zero() -> ParamScalar {
        ParamScalar {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> ParamScalar {
        ParamScalar::from_rat(Rat::one())
    }

    pub fn from_rat(c: Rat) -> ParamScalar {
        ParamScalar {
            num: MPoly::constant(c),
            den: MPoly::one(),
        }
    }

    pub fn int(n: i64) -> ParamScalar {
        ParamScalar::from_rat(Rat::int(n))
    }

    pub fn ratio(n: i64, d: i64) -> ParamScalar {
        ParamScalar::from_rat(Rat::new(n, d))
    }

    pub fn param(p: Param) -> ParamScalar {
        ParamScalar::from_poly(MPoly::var(p))
    }

    pub fn from_poly(p: MPoly) -> ParamScalar {
        ParamScalar {
            num: p,
            den: MPoly::one(),
        }
    }

    fn normalized(mut num: MPoly, mut den: MPoly) -> ParamScalar {
        if num.is_zero() {
            return ParamScalar::zero();
        }
        while let Some(p) = den.params().into_iter().find(|p| p.is_algebraic()) {
            let conj = den.conjugate(p);
            num = &num * &conj;
            den = &den * &conj;
        }
        if let Some(c) = den.constant_value() {
            return ParamScalar {
                num: num.scale(&c.recip()),
                den: MPoly::one(),
            };
        }
        let (num, den) = cancel_monomial_gcd(num, den);
        if let Some(c) = den.constant_value() {
            return ParamScalar {
                num: num.scale(&c.recip()),
                den: MPoly::one(),
            };
        }
        let mut content = den.content();
        if den.leading_is_negative() {
            content = -content;
        }
        let inv = content.recip();
        let (num, den) = (num.scale(&inv), den.scale(&inv));
        if let Some(q) = num.div_exact(&den) {
            return ParamScalar {
                num: q,
                den: MPoly::one(),
            };
        }
        ParamScalar { num, den }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// True when the denominator is a rational constant.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_rat(&self) -> Option<Rat> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn is_rational_constant(&self) -> bool {
        self.as_rat().is_some()
    }

    pub fn params(&self) -> BTreeSet<Param> {
        let mut s = self.num.params();
        s.extend(self.den.params());
        s
    }

    pub fn has_params(&self) -> bool {
        !self.num.is_constant() || !self.den.is_constant()
    }

    pub fn recip(&self) -> Result<ParamScalar, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ParamScalar::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i32) -> Result<ParamScalar, Error> {
        if e >= 0 {
            Ok(ParamScalar::normalized(
                self.num.pow(e as u32),
                self.den.pow(e as u32),
            ))
        } else {
            self.recip()?.pow(-e)
        }
    }

    pub fn scale(&self, c: &Rat) -> ParamScalar {
        if c.is_zero() {
            return ParamScalar::zero();
        }
        ParamScalar {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn checked_div(&self, rhs: &ParamScalar) -> Result<ParamScalar, Error> {
        Ok(self * &rhs.recip()?)
    }

    /// Substitutes rational values; `None` when the denominator vanishes there.
    pub fn specialize(&self, values: &HashMap<Param, Rat>) -> Option<ParamScalar> {
        let den = self.den.specialize(values);
        if den.is_zero() {
            return None;
        }
        Some(ParamScalar::normalized(self.num.specialize(values), den))
    }

    /// Substitutes `value` for parameter `p`; fails if a denominator vanishes.
    pub fn subst(&self, p: Param, value: &ParamScalar) -> Result<ParamScalar, Error> {
        if !self.params().contains(&p) {
            return Ok(self.clone());
        }
        let num = subst_fraction(&self.num, p, value);
        let den = subst_fraction(&self.den, p, value);
        num.checked_div(&den)
    }
}

/// Evaluates a polynomial at a fractional value of one parameter.
fn subst_fraction(poly: &MPoly, p: Param, value: &ParamScalar) -> ParamScalar {
    let coeffs = poly.coefficients_in(p);
    let Some(&max) = coeffs.keys().next_back() else {
        return ParamScalar::zero();
    };
    // sum_i c_i (n/d)^i = (sum_i c_i n^i d^(max-i)) / d^max
    let (n, d) = (value.num(), value.den());
    let mut num = MPoly::zero();
    for (&i, c) in &coeffs {
        num = &num + &(&(c * &n.pow(i)) * &d.pow(max - i));
    }
    ParamScalar::normalized(num, d.pow(max))
}

impl PartialEq for ParamScalar {
    fn eq(&self, other: &ParamScalar) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        (&(&self.num * &other.den) - &(&other.num * &self.den)).is_zero()
    }
}

impl Eq for ParamScalar {}

impl ParamScalar {
    /// Structural equality of the stored representation.
    pub fn same_repr(&self, other: &ParamScalar) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl<'a> Add<&'a ParamScalar> for &'a ParamScalar {
    type Output = ParamScalar;
    fn add(self, rhs: &ParamScalar) -> ParamScalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return ParamScalar {
                    num: &self.num + &rhs.num,
                    den: MPoly::one(),
                };
            }
            return ParamScalar::normalized(&self.num + &rhs.num, self.den.clone());
        }
        if rhs.den.is_one() {
            return ParamScalar::normalized(&self.num + &(&rhs.num * &self.den), self.den.clone());
        }
        if self.den.is_one() {
            return ParamScalar::normalized(&(&self.num * &rhs.den) + &rhs.num, rhs.den.clone());
        }
        if let Some(q) = self.den.div_exact(&rhs.den) {
            return ParamScalar::normalized(&self.num + &(&rhs.num * &q), self.den.clone());
        }
        if let Some(q) = rhs.den.div_exact(&self.den) {
            return ParamScalar::normalized(&(&self.num * &q) + &rhs.num, rhs.den.clone());
        }
        ParamScalar::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Neg for &ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        ParamScalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        -&self
    }
}

impl<'a> Sub<&'a ParamScalar> for &'a ParamScalar {
    type Output = ParamScalar;
    fn sub(self, rhs: &ParamScalar) -> ParamScalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a ParamScalar> for &'a ParamScalar {
    type Output = ParamScalar;
    fn mul(self, rhs: &ParamScalar) -> ParamScalar {
        if self.is_zero() || rhs.is_zero() {
            return ParamScalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return ParamScalar {
                num: &self.num * &rhs.num,
                den: MPoly::one(),
            };
        }
        // Cheap cross-cancellation before forming the product.
        let (mut n1, mut d1) = (self.num.clone(), self.den.clone());
        let (mut n2, mut d2) = (rhs.num.clone(), rhs.den.clone());
        if !d2.is_one() {
            if let Some(q) = n1.div_exact(&d2) {
                n1 = q;
                d2 = MPoly::one();
            }
        }
        if !d1.is_one() {
            if let Some(q) = n2.div_exact(&d1) {
                n2 = q;
                d1 = MPoly::one();
            }
        }
        ParamScalar::normalized(&n1 * &n2, &d1 * &d2)
    }
}

/// Panics on division by zero; use [`ParamScalar::checked_div`] to handle it.
impl<'a> Div<&'a ParamScalar> for &'a ParamScalar {
    type Output = ParamScalar;
    fn div(self, rhs: &ParamScalar) -> ParamScalar {
        self.checked_div(rhs).expect("division by zero scalar")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ParamScalar> for ParamScalar {
            type Output = ParamScalar;
            fn $m(self, rhs: ParamScalar) -> ParamScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ParamScalar> for ParamScalar {
            type Output = ParamScalar;
            fn $m(self, rhs: &ParamScalar) -> ParamScalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl From<Rat> for ParamScalar {
    fn from(c: Rat) -> ParamScalar {
        ParamScalar::from_rat(c)
    }
}

impl From<i64> for ParamScalar {
    fn from(n: i64) -> ParamScalar {
        ParamScalar::int(n)
    }
}

impl From<MPoly> for ParamScalar {
    fn from(p: MPoly) -> ParamScalar {
        ParamScalar::from_poly(p)
    }
}

impl From<Param> for ParamScalar {
    fn from(p: Param) -> ParamScalar {
        ParamScalar::param(p)
    }
}
