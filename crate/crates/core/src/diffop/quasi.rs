//! Quasi-rational functions `c · Π p_i^{e_i} · exp(q)`.

use super::op::DiffOp;
use super::xpoly::XPoly;
use super::xrat::XRat;
use crate::error::Error;
use crate::exact::ParamScalar;

/// A function `scale · Π base_i^{e_i} · exp(exp_part)` with polynomial bases
/// and symbolic exponents. Only products and powers are supported.
#[derive(Clone, Debug)]
pub struct QuasiRat {
    scale: ParamScalar,
    factors: Vec<(XPoly, ParamScalar)>,
    exp_part: XPoly,
}

impl QuasiRat {
    pub fn one() -> QuasiRat {
        QuasiRat {
            scale: ParamScalar::one(),
            factors: Vec::new(),
            exp_part: XPoly::zero(),
        }
    }

    pub fn constant(c: ParamScalar) -> QuasiRat {
        QuasiRat {
            scale: c,
            ..QuasiRat::one()
        }
    }

    /// `base^exponent`.
    pub fn power(base: XPoly, exponent: ParamScalar) -> QuasiRat {
        if base.is_constant()
            && !base.is_zero()
            && exponent.as_rat().and_then(|r| r.to_i64()).is_some()
        {
            let e = exponent.as_rat().unwrap().to_i64().unwrap();
            if let Ok(c) = base.coeff(0).pow(e as i32) {
                return QuasiRat::constant(c);
            }
        }
        QuasiRat {
            factors: vec![(base, exponent)],
            ..QuasiRat::one()
        }
    }

    pub fn from_poly(p: XPoly) -> QuasiRat {
        QuasiRat::power(p, ParamScalar::one())
    }

    /// `exp(q)`.
    pub fn exp(q: XPoly) -> QuasiRat {
        QuasiRat {
            exp_part: q,
            ..QuasiRat::one()
        }
    }

    pub fn scale(&self) -> &ParamScalar {
        &self.scale
    }

    pub fn factors(&self) -> &[(XPoly, ParamScalar)] {
        &self.factors
    }

    pub fn exp_part(&self) -> &XPoly {
        &self.exp_part
    }

    pub fn mul(&self, other: &QuasiRat) -> QuasiRat {
        let mut factors = self.factors.clone();
        for (b, e) in &other.factors {
            match factors.iter_mut().find(|(c, _)| c == b) {
                Some((_, k)) => *k = &*k + e,
                None => factors.push((b.clone(), e.clone())),
            }
        }
        factors.retain(|(_, e)| !e.is_zero());
        QuasiRat {
            scale: &self.scale * &other.scale,
            factors,
            exp_part: &self.exp_part + &other.exp_part,
        }
    }

    pub fn pow(&self, e: &ParamScalar) -> Result<QuasiRat, Error> {
        let scale = match e.as_rat().and_then(|r| r.to_i64()) {
            Some(n) => self.scale.pow(n as i32)?,
            None if self.scale.is_one() => ParamScalar::one(),
            None => {
                return Err(Error::Invalid(
                    "symbolic power of a scaled quasi-rational function".into(),
                ))
            }
        };
        Ok(QuasiRat {
            scale,
            factors: self
                .factors
                .iter()
                .map(|(b, k)| (b.clone(), k * e))
                .collect(),
            exp_part: self.exp_part.scale(e),
        })
    }

    /// `Σ e_i b_i'/b_i + q'`.
    pub fn log_derivative(&self) -> Result<XRat, Error> {
        let mut acc = XRat::from_poly(self.exp_part.derivative());
        for (b, e) in &self.factors {
            if b.is_zero() {
                return Err(Error::ZeroBase);
            }
            if b.is_constant() || e.is_zero() {
                continue;
            }
            let term = XRat::from_parts(b.derivative().scale(e), b.clone())?;
            acc = &acc + &term;
        }
        Ok(acc.reduced())
    }

    /// The function itself when every exponent is a nonnegative or negative
    /// integer and there is no exponential part.
    pub fn to_xrat(&self) -> Option<XRat> {
        if !self.exp_part.is_zero() {
            return None;
        }
        let mut acc = XRat::constant(self.scale.clone());
        for (b, e) in &self.factors {
            let n = e.as_rat()?.to_i64()?;
            acc = &acc * &XRat::from_poly(b.clone()).pow(n as i32).ok()?;
        }
        Some(acc)
    }
}

/// `(Lψ)/ψ` as a rational function, from `ψ^{(r)}/ψ = g_r` with
/// `g_0 = 1`, `g_{r+1} = g_r' + w g_r` and `w` the logarithmic derivative.
pub fn eigen_ratio(l: &DiffOp, psi: &QuasiRat) -> Result<XRat, Error> {
    let w = psi.log_derivative()?;
    let mut g = XRat::one();
    let mut acc = XRat::zero();
    for (r, c) in l.coeffs().iter().enumerate() {
        if r > 0 {
            g = (&g.derivative() + &(&w * &g)).reduced();
        }
        if !c.is_zero() {
            acc = &acc + &(c * &g);
        }
    }
    Ok(acc.reduced())
}

/// The eigenvalue `λ` with `Lψ = λψ`, or `None` when `(Lψ)/ψ` depends on `x`.
pub fn is_eigenfunction(l: &DiffOp, psi: &QuasiRat) -> Option<ParamScalar> {
    eigen_ratio(l, psi).ok()?.constant_value()
}
