//! Differential operators `Σ c_r(x) D^r` in right normal form.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::xpoly::XPoly;
use super::xrat::XRat;
use crate::error::Error;
use crate::exact::{Param, ParamScalar, Rat};

/// A differential operator with rational-function coefficients; index `r`
/// of `coeffs` is the coefficient of `D^r`. The top coefficient is nonzero.
#[derive(Clone, Debug, Default)]
pub struct DiffOp {
    coeffs: Vec<XRat>,
}

pub(crate) fn binomial(n: usize, k: usize) -> Rat {
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) as i64 / (i + 1) as i64;
    }
    Rat::int(r)
}

/// Lazily computed derivatives of an operator's coefficients.
pub struct DerivCache<'a> {
    op: &'a DiffOp,
    derivs: Vec<Vec<XRat>>,
}

impl<'a> DerivCache<'a> {
    pub fn new(op: &'a DiffOp) -> DerivCache<'a> {
        DerivCache {
            op,
            derivs: op.coeffs.iter().map(|c| vec![c.clone()]).collect(),
        }
    }

    pub fn op(&self) -> &'a DiffOp {
        self.op
    }

    /// `n`-th derivative of the coefficient of `D^r`.
    pub fn get(&mut self, r: usize, n: usize) -> &XRat {
        let list = &mut self.derivs[r];
        while list.len() <= n {
            let next = list.last().unwrap().derivative().reduced();
            list.push(next);
        }
        &list[n]
    }
}

impl DiffOp {
    pub fn zero() -> DiffOp {
        DiffOp::default()
    }

    pub fn identity() -> DiffOp {
        DiffOp::mul_by(XRat::one())
    }

    /// The derivative operator `D`.
    pub fn d() -> DiffOp {
        DiffOp::from_coeffs(vec![XRat::zero(), XRat::one()])
    }

    /// Multiplication by `f`, an operator of order zero.
    pub fn mul_by(f: XRat) -> DiffOp {
        DiffOp::from_coeffs(vec![f])
    }

    /// `-D^2 + V`.
    pub fn schrodinger(v: XRat) -> DiffOp {
        DiffOp::from_coeffs(vec![v, XRat::zero(), XRat::int(-1)])
    }

    pub fn from_coeffs(coeffs: Vec<XRat>) -> DiffOp {
        let mut op = DiffOp { coeffs };
        op.trim();
        op
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[XRat] {
        &self.coeffs
    }

    pub fn coeff(&self, r: usize) -> XRat {
        self.coeffs.get(r).cloned().unwrap_or_default()
    }

    /// Order, or `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The potential `V` when the operator is `-D^2 + V`.
    pub fn potential(&self) -> Result<XRat, Error> {
        let ok = self.coeffs.len() == 3
            && self.coeffs[1].is_zero()
            && self.coeffs[2]
                .constant_value()
                .is_some_and(|c| c == ParamScalar::int(-1));
        if ok {
            Ok(self.coeffs[0].clone())
        } else {
            Err(Error::NotSchrodinger(format!(
                "operator of order {:?}",
                self.order()
            )))
        }
    }

    /// Left multiplication of every coefficient by `f`.
    pub fn scale(&self, f: &XRat) -> DiffOp {
        DiffOp::from_coeffs(self.coeffs.iter().map(|c| c * f).collect())
    }

    pub fn scale_scalar(&self, c: &ParamScalar) -> DiffOp {
        DiffOp::from_coeffs(self.coeffs.iter().map(|r| r.scale(c)).collect())
    }

    /// Cancels removable denominator factors in every coefficient.
    pub fn reduced(&self) -> DiffOp {
        DiffOp {
            coeffs: self.coeffs.iter().map(|c| c.reduced()).collect(),
        }
    }

    /// `A ∘ B` by the Leibniz rule.
    pub fn compose(&self, other: &DiffOp) -> DiffOp {
        if self.is_zero() || other.is_zero() {
            return DiffOp::zero();
        }
        let mut out = vec![XRat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        let mut cache = DerivCache::new(other);
        for (p, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for q in 0..other.coeffs.len() {
                for i in 0..=p {
                    let b = cache.get(q, i);
                    if b.is_zero() {
                        continue;
                    }
                    let t = (a * b).scale_rat(&binomial(p, i));
                    let slot = &mut out[p + q - i];
                    *slot = &*slot + &t;
                }
            }
        }
        DiffOp::from_coeffs(out).reduced()
    }

    /// `[A, B] = A∘B − B∘A`.
    pub fn commutator(&self, other: &DiffOp) -> DiffOp {
        let mut ca = DerivCache::new(self);
        commutator_cached(&mut ca, other)
    }

    /// `Σ c_r f^{(r)}`.
    pub fn apply(&self, f: &XRat) -> XRat {
        let mut acc = XRat::zero();
        let mut g = f.clone();
        for (r, c) in self.coeffs.iter().enumerate() {
            if r > 0 {
                g = g.derivative();
            }
            if !c.is_zero() {
                acc = &acc + &(c * &g);
            }
        }
        acc.reduced()
    }

    /// Independent zero test: an operator of order `r` vanishes iff it
    /// annihilates `1, x, ..., x^r`.
    pub fn annihilates_monomials(&self) -> bool {
        let r = self.order().unwrap_or(0);
        (0..=r).all(|d| {
            self.apply(&XRat::from_poly(XPoly::monomial(ParamScalar::one(), d)))
                .is_zero()
        })
    }

    /// Whether `self = c · other` for a scalar `c`; returns `c`.
    pub fn proportional_to(&self, other: &DiffOp) -> Option<ParamScalar> {
        if other.is_zero() {
            return self.is_zero().then(ParamScalar::zero);
        }
        if self.order() != other.order() {
            return None;
        }
        let top = self.coeffs.len() - 1;
        let c = (&self.coeffs[top] / &other.coeffs[top]).constant_value()?;
        (self == &other.scale_scalar(&c)).then_some(c)
    }

    pub fn specialize(&self, values: &HashMap<Param, Rat>) -> Option<DiffOp> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.specialize(values))
            .collect::<Option<Vec<_>>>()?;
        Some(DiffOp::from_coeffs(coeffs))
    }

    pub fn subst_param(&self, p: Param, value: &ParamScalar) -> Option<DiffOp> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.subst_param(p, value))
            .collect::<Option<Vec<_>>>()?;
        Some(DiffOp::from_coeffs(coeffs))
    }

    pub fn has_params(&self) -> bool {
        self.coeffs.iter().any(|c| c.has_params())
    }

    /// Largest coefficient size, used by the expansion limit.
    pub fn size_degree(&self) -> usize {
        self.coeffs
            .iter()
            .map(|c| c.size_degree())
            .max()
            .unwrap_or(0)
    }
}

/// `[A, B]` where the derivatives of `A`'s coefficients come from a cache.
///
/// The Leibniz terms without derivatives cancel, leaving
/// `Σ_{p,q} Σ_{i≥1} (C(p,i) a_p b_q^{(i)} − C(q,i) b_q a_p^{(i)}) D^{p+q−i}`.
pub fn commutator_cached(a: &mut DerivCache<'_>, b: &DiffOp) -> DiffOp {
    let op_a = a.op();
    if op_a.is_zero() || b.is_zero() {
        return DiffOp::zero();
    }
    let la = op_a.coeffs.len();
    let lb = b.coeffs.len();
    let mut out = vec![XRat::zero(); la + lb];
    let mut cb = DerivCache::new(b);
    for p in 0..la {
        for q in 0..lb {
            let ap = &op_a.coeffs[p];
            let bq = &b.coeffs[q];
            if ap.is_zero() && bq.is_zero() {
                continue;
            }
            for i in 1..=p.max(q) {
                let slot = p + q - i;
                if i <= p && !ap.is_zero() {
                    let d = cb.get(q, i);
                    if !d.is_zero() {
                        let t = (ap * d).scale_rat(&binomial(p, i));
                        out[slot] = &out[slot] + &t;
                    }
                }
                if i <= q && !bq.is_zero() {
                    let d = a.get(p, i);
                    if !d.is_zero() {
                        let t = (bq * d).scale_rat(&binomial(q, i));
                        out[slot] = &out[slot] - &t;
                    }
                }
            }
        }
    }
    DiffOp::from_coeffs(out.into_iter().map(|c| c.reduced()).collect())
}

impl PartialEq for DiffOp {
    fn eq(&self, other: &DiffOp) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|r| {
            let z = XRat::zero();
            let a = self.coeffs.get(r).unwrap_or(&z);
            let b = other.coeffs.get(r).unwrap_or(&z);
            a == b
        })
    }
}

impl Eq for DiffOp {}

impl<'a> Add<&'a DiffOp> for &'a DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &DiffOp) -> DiffOp {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DiffOp::from_coeffs((0..n).map(|r| &self.coeff(r) + &rhs.coeff(r)).collect())
    }
}

impl<'a> Sub<&'a DiffOp> for &'a DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        self + &(-rhs)
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        DiffOp {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        -&self
    }
}

/// Composition.
impl<'a> Mul<&'a DiffOp> for &'a DiffOp {
    type Output = DiffOp;
    fn mul(self, rhs: &DiffOp) -> DiffOp {
        self.compose(rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<DiffOp> for DiffOp {
            type Output = DiffOp;
            fn $m(self, rhs: DiffOp) -> DiffOp {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a DiffOp> for DiffOp {
            type Output = DiffOp;
            fn $m(self, rhs: &DiffOp) -> DiffOp {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> DiffOp {
        DiffOp::mul_by(XRat::x())
    }

    fn poly(c: &[i64]) -> XRat {
        XRat::from_poly(XPoly::from_ints(c))
    }

    #[test]
    fn leibniz_products() {
        let d = DiffOp::d();
        assert_eq!(
            d.compose(&x()),
            DiffOp::from_coeffs(vec![XRat::one(), XRat::x()])
        );
        let d2 = d.compose(&d);
        assert_eq!(
            d2.compose(&x()),
            DiffOp::from_coeffs(vec![XRat::zero(), XRat::int(2), XRat::x()])
        );
        let xd = x().compose(&d);
        assert_eq!(
            xd.compose(&xd),
            DiffOp::from_coeffs(vec![XRat::zero(), XRat::x(), poly(&[0, 0, 1])])
        );
    }

    #[test]
    fn commutators() {
        assert_eq!(DiffOp::d().commutator(&x()), DiffOp::identity());
        let l = DiffOp::schrodinger(poly(&[0, 0, 1]));
        let a1 = l.commutator(&x());
        assert_eq!(a1, DiffOp::from_coeffs(vec![XRat::zero(), XRat::int(-2)]));
        let a2 = l.commutator(&a1);
        assert_eq!(a2, DiffOp::mul_by(poly(&[0, 4])));
        assert_eq!(l.commutator(&l), DiffOp::zero());
    }

    #[test]
    fn application() {
        let op = DiffOp::from_coeffs(vec![XRat::zero(), XRat::int(-2)]);
        assert_eq!(op.apply(&poly(&[0, 0, 0, 1])), poly(&[0, 0, -6]));
        let l = DiffOp::schrodinger(poly(&[0, 0, 1]));
        assert_eq!(l.apply(&XRat::one()), poly(&[0, 0, 1]));
        assert_eq!(l.commutator(&x()).apply(&XRat::x()), XRat::int(-2));
    }

    #[test]
    fn proportionality() {
        let a = DiffOp::from_coeffs(vec![poly(&[1, 2]), XRat::int(3)]);
        let b = a.scale_scalar(&ParamScalar::ratio(-5, 2));
        assert_eq!(b.proportional_to(&a), Some(ParamScalar::ratio(-5, 2)));
        assert_eq!(a.proportional_to(&DiffOp::d()), None);
    }
}
