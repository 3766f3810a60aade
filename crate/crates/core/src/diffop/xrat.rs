//! Rational functions of `x` with factored denominators.

use std::collections::{BTreeSet, HashMap};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use super::xpoly::XPoly;
use crate::error::Error;
use crate::exact::{MPoly, Param, ParamScalar, Rat};

/// A nonconstant denominator factor together with its derivative.
#[derive(Debug)]
pub struct Factor {
    poly: XPoly,
    deriv: XPoly,
}

impl Factor {
    fn new(poly: XPoly) -> Arc<Factor> {
        let deriv = poly.derivative();
        Arc::new(Factor { poly, deriv })
    }

    pub fn poly(&self) -> &XPoly {
        &self.poly
    }
}

fn same_factor(a: &Arc<Factor>, b: &Arc<Factor>) -> bool {
    Arc::ptr_eq(a, b) || a.poly == b.poly
}

/// `num / Π f_i^{e_i}`.
///
/// Denominator factors are created when a polynomial is inverted (split into
/// a power of `x` and square-free parts) and are shared from then on, so
/// sums and products of related functions reuse the same factor list.
/// Equality and zero tests never depend on how far a value has been reduced.
#[derive(Clone, Debug, Default)]
pub struct XRat {
    num: XPoly,
    den: Vec<(Arc<Factor>, u32)>,
}

/// Clears coefficient denominators of a monic factor: returns `(f, s)` with
/// `monic = f / s` and `f` having polynomial coefficients.
fn primitive_factor(monic: XPoly) -> (XPoly, ParamScalar) {
    if monic.coeffs().iter().all(|c| c.is_polynomial()) {
        return (monic, ParamScalar::one());
    }
    let mut l = MPoly::one();
    for c in monic.coeffs() {
        let d = c.den();
        if d.is_one() || l.div_exact(d).is_some() {
            continue;
        }
        l = if d.div_exact(&l).is_some() {
            d.clone()
        } else {
            &l * d
        };
    }
    let s = ParamScalar::from_poly(l);
    let f = monic.scale(&s);
    let content = f
        .coeffs()
        .iter()
        .fold(Rat::zero(), |g, c| g.gcd(&c.num().content()));
    let inv = content.recip();
    (f.scale_rat(&inv), s.scale(&inv))
}

impl XRat {
    pub fn zero() -> XRat {
        XRat::default()
    }

    pub fn one() -> XRat {
        XRat::from_poly(XPoly::one())
    }

    pub fn x() -> XRat {
        XRat::from_poly(XPoly::x())
    }

    pub fn constant(c: ParamScalar) -> XRat {
        XRat::from_poly(XPoly::constant(c))
    }

    pub fn int(n: i64) -> XRat {
        XRat::constant(ParamScalar::int(n))
    }

    pub fn from_poly(p: XPoly) -> XRat {
        XRat {
            num: p,
            den: Vec::new(),
        }
    }

    /// `num / den`, with `den` split into a power of `x` and square-free factors.
    pub fn from_parts(num: XPoly, den: XPoly) -> Result<XRat, Error> {
        Ok((&XRat::from_poly(num) * &XRat::recip_poly(&den)?).reduced())
    }

    /// `1 / p` in factored form.
    pub fn recip_poly(p: &XPoly) -> Result<XRat, Error> {
        if p.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if p.is_constant() {
            return Ok(XRat::constant(p.leading().recip()?));
        }
        let val = p.x_valuation();
        let rest = p.shift_down(val);
        let mut den = Vec::new();
        if val > 0 {
            den.push((Factor::new(XPoly::x()), val as u32));
        }
        let (c, parts) = rest.squarefree();
        let mut scale = c.recip()?;
        for (part, e) in parts {
            let (f, s) = primitive_factor(part);
            scale = &scale * &s.pow(e as i32)?;
            den.push((Factor::new(f), e));
        }
        Ok(XRat {
            num: XPoly::constant(scale),
            den,
        })
    }

    pub fn num(&self) -> &XPoly {
        &self.num
    }

    pub fn factors(&self) -> impl Iterator<Item = (&XPoly, u32)> {
        self.den.iter().map(|(f, e)| (&f.poly, *e))
    }

    /// The expanded denominator `Π f_i^{e_i}`.
    pub fn den_poly(&self) -> XPoly {
        self.den
            .iter()
            .fold(XPoly::one(), |acc, (f, e)| &acc * &f.poly.pow(*e))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// The polynomial value, after cancelling denominator factors.
    pub fn to_poly(&self) -> Option<XPoly> {
        if self.den.is_empty() {
            return Some(self.num.clone());
        }
        let r = self.reduced();
        r.den.is_empty().then_some(r.num)
    }

    /// The value when it does not depend on `x`.
    pub fn constant_value(&self) -> Option<ParamScalar> {
        if self.den.is_empty() {
            return if self.num.is_constant() {
                Some(self.num.coeff(0))
            } else {
                None
            };
        }
        if !self.derivative().is_zero() {
            return None;
        }
        let lc_den = self
            .den
            .iter()
            .try_fold(ParamScalar::one(), |acc, (f, e)| {
                Ok::<_, Error>(&acc * &f.poly.leading().pow(*e as i32)?)
            })
            .ok()?;
        Some(&self.num.leading() / &lc_den)
    }

    /// Total degree of numerator and denominator, a size measure.
    pub fn size_degree(&self) -> usize {
        let d: usize = self
            .den
            .iter()
            .map(|(f, e)| f.poly.degree().unwrap_or(0) * *e as usize)
            .sum();
        self.num.degree().unwrap_or(0) + d
    }

    /// Cancels denominator factors that divide the numerator.
    pub fn reduced(&self) -> XRat {
        if self.num.is_zero() {
            return XRat::zero();
        }
        let mut num = self.num.clone();
        let mut den = Vec::with_capacity(self.den.len());
        for (f, e) in &self.den {
            let mut e = *e;
            while e > 0 {
                match num.div_exact(&f.poly) {
                    Some(q) => {
                        num = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            if e > 0 {
                den.push((f.clone(), e));
            }
        }
        XRat { num, den }
    }

    pub fn scale(&self, c: &ParamScalar) -> XRat {
        if c.is_zero() {
            return XRat::zero();
        }
        XRat {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn scale_rat(&self, c: &Rat) -> XRat {
        if c.is_zero() {
            return XRat::zero();
        }
        XRat {
            num: self.num.scale_rat(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &XPoly) -> XRat {
        XRat {
            num: &self.num * p,
            den: self.den.clone(),
        }
    }

    pub fn derivative(&self) -> XRat {
        if self.num.is_zero() {
            return XRat::zero();
        }
        if self.den.is_empty() {
            return XRat::from_poly(self.num.derivative());
        }
        // (N / Π f^e)' = (N' Π f - N Σ e_i f_i' Π_{j≠i} f_j) / Π f^{e+1}
        let prod = self
            .den
            .iter()
            .fold(XPoly::one(), |acc, (f, _)| &acc * &f.poly);
        let mut num = &self.num.derivative() * &prod;
        for (i, (f, e)) in self.den.iter().enumerate() {
            if f.deriv.is_zero() {
                continue;
            }
            let others = self.den.iter().enumerate().filter(|(j, _)| *j != i).fold(
                f.deriv.scale_rat(&Rat::int(*e as i64)),
                |acc, (_, (g, _))| &acc * &g.poly,
            );
            num = &num - &(&self.num * &others);
        }
        let den = self.den.iter().map(|(f, e)| (f.clone(), e + 1)).collect();
        XRat { num, den }
    }

    pub fn nth_derivative(&self, n: usize) -> XRat {
        (0..n).fold(self.clone(), |r, _| r.derivative())
    }

    pub fn recip(&self) -> Result<XRat, Error> {
        let inv = XRat::recip_poly(&self.num)?;
        Ok(inv.mul_poly(&self.den_poly()).reduced())
    }

    pub fn pow(&self, e: i32) -> Result<XRat, Error> {
        if e < 0 {
            return self.recip()?.pow(-e);
        }
        let e = e as u32;
        Ok(XRat {
            num: self.num.pow(e),
            den: self
                .den
                .iter()
                .map(|(f, k)| (f.clone(), k * e))
                .filter(|(_, k)| *k > 0)
                .collect(),
        })
    }

    pub fn checked_div(&self, rhs: &XRat) -> Result<XRat, Error> {
        Ok(self * &rhs.recip()?)
    }

    pub fn params(&self) -> BTreeSet<Param> {
        let mut s = self.num.params();
        for (f, _) in &self.den {
            s.extend(f.poly.params());
        }
        s
    }

    pub fn has_params(&self) -> bool {
        self.num.has_params() || self.den.iter().any(|(f, _)| f.poly.has_params())
    }

    /// Evaluates the parameters; `None` when a denominator vanishes identically.
    pub fn specialize(&self, values: &HashMap<Param, Rat>) -> Option<XRat> {
        let num = self.num.specialize(values)?;
        self.rebuild(num, |p| p.specialize(values))
    }

    pub fn subst_param(&self, p: Param, value: &ParamScalar) -> Option<XRat> {
        let num = self.num.subst_param(p, value)?;
        self.rebuild(num, |f| f.subst_param(p, value))
    }

    fn rebuild(&self, num: XPoly, map: impl Fn(&XPoly) -> Option<XPoly>) -> Option<XRat> {
        let mut out = XRat::from_poly(num);
        for (f, e) in &self.den {
            let g = map(&f.poly)?;
            if g.is_zero() {
                return None;
            }
            let inv = if g.is_constant() {
                XRat::constant(g.leading().recip().ok()?)
            } else {
                XRat {
                    num: XPoly::one(),
                    den: vec![(Factor::new(g), 1)],
                }
            };
            out = &out * &inv.pow(*e as i32).ok()?;
        }
        Some(out)
    }

    /// Numerators of `items` over their least common factored denominator.
    pub fn common_numerators(items: &[XRat]) -> (Vec<XPoly>, XPoly) {
        let mut den: Vec<(Arc<Factor>, u32)> = Vec::new();
        for r in items {
            merge_max(&mut den, &r.den);
        }
        let nums = items
            .iter()
            .map(|r| &r.num * &cofactor(&den, &r.den))
            .collect();
        let d = den
            .iter()
            .fold(XPoly::one(), |acc, (f, e)| &acc * &f.poly.pow(*e));
        (nums, d)
    }
}

fn merge_max(into: &mut Vec<(Arc<Factor>, u32)>, from: &[(Arc<Factor>, u32)]) {
    for (f, e) in from {
        match into.iter_mut().find(|(g, _)| same_factor(f, g)) {
            Some((_, k)) => *k = (*k).max(*e),
            None => into.push((f.clone(), *e)),
        }
    }
}

/// `Π f^{E_f - e_f}` for a target denominator `E` and a denominator `e` dividing it.
fn cofactor(target: &[(Arc<Factor>, u32)], part: &[(Arc<Factor>, u32)]) -> XPoly {
    let mut out = XPoly::one();
    for (f, e) in target {
        let have = part
            .iter()
            .find(|(g, _)| same_factor(f, g))
            .map_or(0, |(_, k)| *k);
        if *e > have {
            out = &out * &f.poly.pow(e - have);
        }
    }
    out
}

impl PartialEq for XRat {
    fn eq(&self, other: &XRat) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for XRat {}

impl<'a> Add<&'a XRat> for &'a XRat {
    type Output = XRat;
    fn add(self, rhs: &XRat) -> XRat {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_empty() && rhs.den.is_empty() {
            return XRat::from_poly(&self.num + &rhs.num);
        }
        let mut den = self.den.clone();
        merge_max(&mut den, &rhs.den);
        let a = &self.num * &cofactor(&den, &self.den);
        let b = &rhs.num * &cofactor(&den, &rhs.den);
        let num = &a + &b;
        if num.is_zero() {
            return XRat::zero();
        }
        XRat { num, den }
    }
}

impl<'a> Sub<&'a XRat> for &'a XRat {
    type Output = XRat;
    fn sub(self, rhs: &XRat) -> XRat {
        self + &(-rhs)
    }
}

impl Neg for &XRat {
    type Output = XRat;
    fn neg(self) -> XRat {
        XRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for XRat {
    type Output = XRat;
    fn neg(self) -> XRat {
        -&self
    }
}

impl<'a> Mul<&'a XRat> for &'a XRat {
    type Output = XRat;
    fn mul(self, rhs: &XRat) -> XRat {
        if self.is_zero() || rhs.is_zero() {
            return XRat::zero();
        }
        let mut den = self.den.clone();
        for (f, e) in &rhs.den {
            match den.iter_mut().find(|(g, _)| same_factor(f, g)) {
                Some((_, k)) => *k += e,
                None => den.push((f.clone(), *e)),
            }
        }
        XRat {
            num: &self.num * &rhs.num,
            den,
        }
    }
}

/// Panics on division by zero; use [`XRat::checked_div`] to handle it.
impl<'a> Div<&'a XRat> for &'a XRat {
    type Output = XRat;
    fn div(self, rhs: &XRat) -> XRat {
        self.checked_div(rhs)
            .expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<XRat> for XRat {
            type Output = XRat;
            fn $m(self, rhs: XRat) -> XRat {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a XRat> for XRat {
            type Output = XRat;
            fn $m(self, rhs: &XRat) -> XRat {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl From<XPoly> for XRat {
    fn from(p: XPoly) -> XRat {
        XRat::from_poly(p)
    }
}

impl From<ParamScalar> for XRat {
    fn from(c: ParamScalar) -> XRat {
        XRat::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> XPoly {
        XPoly::from_ints(c)
    }

    #[test]
    fn construction_cancels_common_factors() {
        // (x^2 - 1) / (x - 1) = x + 1
        let r = XRat::from_parts(poly(&[-1, 0, 1]), poly(&[-1, 1])).unwrap();
        assert_eq!(r.to_poly(), Some(poly(&[1, 1])));
        assert!(XRat::from_parts(poly(&[1]), XPoly::zero()).is_err());
    }

    #[test]
    fn sum_and_derivative() {
        // 1/x + 1/x^2 = (x + 1)/x^2
        let a = XRat::recip_poly(&poly(&[0, 1])).unwrap();
        let b = XRat::recip_poly(&poly(&[0, 0, 1])).unwrap();
        let s = &a + &b;
        assert_eq!(
            s,
            XRat::from_parts(poly(&[1, 1]), poly(&[0, 0, 1])).unwrap()
        );
        // (1/x)' = -1/x^2
        assert_eq!(a.derivative(), -&b);
        // (x^2 + 2/x^2)'' = 2 + 12/x^4
        let v = &XRat::from_poly(poly(&[0, 0, 1])) + &b.scale_rat(&Rat::int(2));
        let expected = &XRat::int(2)
            + &XRat::recip_poly(&poly(&[0, 0, 0, 0, 1]))
                .unwrap()
                .scale_rat(&Rat::int(12));
        assert_eq!(v.nth_derivative(2), expected);
    }

    #[test]
    fn constant_detection() {
        let f = XRat::recip_poly(&poly(&[1, 1])).unwrap();
        let c = &f * &XRat::from_poly(poly(&[3, 3]));
        assert_eq!(c.constant_value(), Some(ParamScalar::int(3)));
        assert_eq!(f.constant_value(), None);
    }

    #[test]
    fn parametric_factor_is_made_primitive() {
        let a = ParamScalar::param(Param::of("a"));
        // 1 / (a x + 1): monic form x + 1/a, cleared back to a x + 1
        let p = XPoly::from_coeffs(vec![ParamScalar::one(), a.clone()]);
        let r = XRat::recip_poly(&p).unwrap();
        assert_eq!(&r * &XRat::from_poly(p), XRat::one());
        let (f, _) = r.factors().next().unwrap();
        assert!(f.coeffs().iter().all(|c| c.is_polynomial()));
    }

    #[test]
    fn specialization_rebuilds_denominators() {
        let k = Param::of("k");
        let p = XPoly::from_coeffs(vec![ParamScalar::param(k), ParamScalar::one()]);
        let r = XRat::recip_poly(&p).unwrap();
        let vals = HashMap::from([(k, Rat::int(2))]);
        assert_eq!(
            r.specialize(&vals).unwrap(),
            XRat::recip_poly(&poly(&[2, 1])).unwrap()
        );
    }
}
