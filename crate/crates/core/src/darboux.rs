//! Darboux transformations `V ↦ V − 2(log ψ)''` of Schrödinger operators.

use crate::diffop::{eigen_ratio, DiffOp, QuasiRat, XRat};
use crate::error::Error;
use crate::exact::ParamScalar;

/// One completed transformation. The eigenvalue is recomputed from the seed.
#[derive(Clone, Debug)]
pub struct DarbouxStep {
    pub seed: QuasiRat,
    pub eigenvalue: ParamScalar,
    pub input_v: XRat,
    pub output_v: XRat,
}

impl DarbouxStep {
    /// `−D² + output_v`.
    pub fn operator(&self) -> DiffOp {
        DiffOp::schrodinger(self.output_v.clone())
    }
}

/// How two potentials are compared.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PotentialMatch {
    /// Equal up to an additive constant, i.e. equal derivatives.
    #[default]
    UpToConstant,
    Exact,
}

/// Whether `a` and `b` agree under `mode`.
pub fn potentials_match(a: &XRat, b: &XRat, mode: PotentialMatch) -> bool {
    match mode {
        PotentialMatch::Exact => a == b,
        PotentialMatch::UpToConstant => potential_offset(a, b).is_some(),
    }
}

/// The constant `a − b`, if the difference is constant.
pub fn potential_offset(a: &XRat, b: &XRat) -> Option<ParamScalar> {
    (a - b).reduced().constant_value()
}

/// Transforms `L = −D² + V` with an eigenfunction `seed`.
pub fn darboux_step(l: &DiffOp, seed: &QuasiRat) -> Result<DarbouxStep, Error> {
    let input_v = l.potential()?;
    let ratio = eigen_ratio(l, seed)?;
    let eigenvalue = ratio
        .constant_value()
        .ok_or_else(|| Error::NotEigenfunction {
            residual: ratio.to_string(),
        })?;
    let w = seed.log_derivative()?;
    let output_v = (&input_v - &w.derivative().scale(&ParamScalar::int(2))).reduced();
    Ok(DarbouxStep {
        seed: seed.clone(),
        eigenvalue,
        input_v,
        output_v,
    })
}

/// Applies the seeds in order, each to the operator produced by the
/// previous step.
pub fn darboux_chain(l: &DiffOp, seeds: &[QuasiRat]) -> Result<Vec<DarbouxStep>, Error> {
    let mut current = l.clone();
    let mut steps = Vec::with_capacity(seeds.len());
    for (index, seed) in seeds.iter().enumerate() {
        let step = darboux_step(&current, seed).map_err(|e| Error::ChainStep {
            index,
            source: Box::new(e),
        })?;
        current = step.operator();
        steps.push(step);
    }
    Ok(steps)
}

/// Checks `L_new ∘ A = A ∘ L` for `A = D − w` with `w = ψ'/ψ`.
pub fn intertwine_check(l: &DiffOp, l_new: &DiffOp, seed: &QuasiRat) -> bool {
    let Ok(w) = seed.log_derivative() else {
        return false;
    };
    let a = DiffOp::from_coeffs(vec![-&w, XRat::one()]);
    (l_new * &a) == (&a * l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::XPoly;
    use crate::expr::{parse_quasi, parse_xrat, ParseContext};

    fn xr(s: &str) -> XRat {
        parse_xrat(s, &ParseContext::new(["k"]).unwrap()).unwrap()
    }

    #[test]
    fn free_particle_seed_x() {
        let l = DiffOp::schrodinger(XRat::zero());
        let seed = QuasiRat::from_poly(XPoly::x());
        let step = darboux_step(&l, &seed).unwrap();
        assert_eq!(step.output_v, xr("2/x^2"));
        assert!(step.eigenvalue.is_zero());
        assert!(intertwine_check(&l, &step.operator(), &seed));
    }

    #[test]
    fn oscillator_first_excited_seed() {
        let l = DiffOp::schrodinger(xr("x^2"));
        let seed = parse_quasi("x*exp(-x^2/2)", &ParseContext::default()).unwrap();
        let chain = darboux_chain(&l, std::slice::from_ref(&seed)).unwrap();
        assert_eq!(chain[0].output_v, xr("x^2 + 2/x^2 + 2"));
        assert_eq!(chain[0].eigenvalue, ParamScalar::int(3));
        assert!(intertwine_check(&l, &chain[0].operator(), &seed));
        let shifted = DiffOp::schrodinger(&chain[0].output_v + &XRat::one());
        assert!(!intertwine_check(&l, &shifted, &seed));
    }

    #[test]
    fn non_eigenfunction_is_rejected_with_index() {
        let l = DiffOp::schrodinger(xr("x^2"));
        let bad = QuasiRat::from_poly(XPoly::from_ints(&[1, 1]));
        match darboux_step(&l, &bad) {
            Err(Error::NotEigenfunction { residual }) => assert!(residual.contains('x')),
            other => panic!("{other:?}"),
        }
        let good = QuasiRat::exp(XPoly::monomial(ParamScalar::ratio(-1, 2), 2));
        match darboux_chain(&l, &[good, bad]) {
            Err(Error::ChainStep { index: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn comparison_modes() {
        let a = xr("x^2 + 2/x^2 + 2");
        let b = xr("x^2 + 2/x^2");
        assert!(potentials_match(&a, &b, PotentialMatch::UpToConstant));
        assert!(!potentials_match(&a, &b, PotentialMatch::Exact));
        assert_eq!(potential_offset(&a, &b), Some(ParamScalar::int(2)));
    }
}
