//! Potentials of the form `V = (P/Θ')'` and the polynomial systems an
//! ad-condition imposes on the coefficients of `Θ` and `P`.

use std::collections::HashMap;

use crate::adcond::{ad_powers, ad_powers_top, verify_condition, ConditionReport, WeightVector};
use crate::diffop::{DiffOp, XPoly, XRat};
use crate::error::Error;
use crate::exact::{nullspace, MPoly, Param, ParamScalar};

/// `(P/Θ')'`.
pub fn build_v(theta: &XPoly, p: &XPoly) -> Result<XRat, Error> {
    let d = theta.derivative();
    if d.is_zero() {
        return Err(Error::ConstantTheta);
    }
    Ok(XRat::from_parts(p.clone(), d)?.derivative().reduced())
}

/// `P` of degree at most `deg` with `(P/Θ')' = V`, normalized to have no
/// `Θ'` component in its lowest term, or `None` when `V` is not of this form.
pub fn fit_p(theta: &XPoly, v: &XRat, deg: usize) -> Result<Option<XPoly>, Error> {
    let d = theta.derivative();
    if d.is_zero() {
        return Err(Error::ConstantTheta);
    }
    // (P/Θ')' = V  ⟺  P'Θ' − PΘ'' − VΘ'² = 0, linear in P and a slack for V.
    let dd = d.derivative();
    let sq = XRat::from_poly(&d * &d);
    let mut columns: Vec<Vec<XRat>> = (0..=deg)
        .map(|i| {
            let m = XPoly::monomial(ParamScalar::one(), i);
            vec![XRat::from_poly(&(&m.derivative() * &d) - &(&m * &dd))]
        })
        .collect();
    columns.push(vec![-&(v * &sq).reduced()]);
    let rows = crate::adcond::slot_rows(&columns);
    let ns = nullspace(&rows, deg + 2);
    let Some(sol) = ns.basis.iter().find(|b| !b[deg + 1].is_zero()) else {
        return Ok(None);
    };
    let scale = sol[deg + 1].recip()?;
    let mut p = XPoly::from_coeffs(sol[..=deg].iter().map(|c| c * &scale).collect());
    // Remove the free multiple of Θ' so the answer is canonical.
    let lead = d.degree().unwrap_or(0);
    if let Some(kernel) = ns.basis.iter().find(|b| b[deg + 1].is_zero()) {
        let k = XPoly::from_coeffs(kernel[..=deg].to_vec());
        if !k.coeff(lead).is_zero() {
            let c = p.coeff(lead).checked_div(&k.coeff(lead))?;
            p = &p - &k.scale(&c);
        }
    }
    Ok(Some(p))
}

/// Checks a candidate pair against an ad-condition.
pub fn verify_candidate(
    w: &WeightVector,
    theta: &XPoly,
    v: &XRat,
) -> Result<ConditionReport, Error> {
    let l = DiffOp::schrodinger(v.clone());
    verify_condition(&l, &DiffOp::mul_by(XRat::from_poly(theta.clone())), w)
}

/// The polynomial system for `Θ = Σ_{i=1}^{n−1} a_i x^i` and
/// `P = Σ_{i=0}^{n+1} c_i x^i`, where `n` is the top order of the weights.
#[derive(Clone, Debug)]
pub struct AnsatzSystem {
    pub weights: WeightVector,
    /// `a_1..a_{n−1}` then `c_0..c_{n+1}`.
    pub unknowns: Vec<Param>,
    pub theta: XPoly,
    pub p: XPoly,
    /// Relations `c_i = f(a)` read off the third coefficient from the top.
    pub forced: Vec<(Param, ParamScalar)>,
    /// Numerators of the remaining coefficients after substituting `forced`,
    /// one per derivative order and power of `x`.
    pub equations: Vec<MPoly>,
    /// Denominators cleared from each derivative order, as powers of the
    /// factors of `Θ'`; equations are valid where these do not vanish.
    pub cleared: Vec<(usize, XPoly)>,
}

impl AnsatzSystem {
    /// Evaluates every equation at a full assignment of the unknowns.
    pub fn evaluate(
        &self,
        values: &HashMap<Param, ParamScalar>,
    ) -> Result<Vec<ParamScalar>, Error> {
        self.equations
            .iter()
            .map(|e| {
                let mut acc = ParamScalar::from_poly(e.clone());
                for (p, v) in values {
                    acc = acc.subst(*p, v)?;
                }
                Ok(acc)
            })
            .collect()
    }

    /// Values of the unknowns for a concrete `(Θ, V)`, fitting `P` and
    /// applying the forced relations' normalization.
    pub fn assignment(
        &self,
        theta: &XPoly,
        v: &XRat,
    ) -> Result<Option<HashMap<Param, ParamScalar>>, Error> {
        let n = self.weights.top_order();
        if theta.degree().is_some_and(|d| d >= n) || !theta.coeff(0).is_zero() {
            return Ok(None);
        }
        let Some(p) = fit_p(theta, v, n + 1)? else {
            return Ok(None);
        };
        let mut values = HashMap::new();
        for (i, a) in theta_params(n).into_iter().enumerate() {
            values.insert(a, theta.coeff(i + 1));
        }
        // P is fixed up to a multiple of Θ'; pick the multiple that satisfies
        // the forced relations when it exists.
        let d = theta.derivative();
        let mut best = p.clone();
        if let Some((c, f)) = self.forced.first() {
            let idx = p_params(n)
                .iter()
                .position(|q| q == c)
                .expect("forced unknown");
            let mut target = f.clone();
            for (a, val) in &values {
                target = target.subst(*a, val)?;
            }
            let slope = d.coeff(idx);
            if !slope.is_zero() {
                let t = (&target - &p.coeff(idx)).checked_div(&slope)?;
                best = &p + &d.scale(&t);
            }
        }
        for (i, c) in p_params(n).into_iter().enumerate() {
            values.insert(c, best.coeff(i));
        }
        Ok(Some(values))
    }
}

fn theta_params(n: usize) -> Vec<Param> {
    (1..n).map(|i| Param::of(&format!("a{i}"))).collect()
}

fn p_params(n: usize) -> Vec<Param> {
    (0..=n + 1).map(|i| Param::of(&format!("c{i}"))).collect()
}

fn symbolic_poly(params: &[Param], offset: usize) -> XPoly {
    let mut coeffs = vec![ParamScalar::zero(); offset];
    coeffs.extend(params.iter().map(|p| ParamScalar::param(*p)));
    XPoly::from_coeffs(coeffs)
}

/// Numerator coefficients of each derivative order of `op` in `orders`.
fn slot_equations(
    op: &DiffOp,
    orders: impl Iterator<Item = usize>,
) -> (Vec<MPoly>, Vec<(usize, XPoly)>) {
    let mut eqs = Vec::new();
    let mut cleared = Vec::new();
    for r in orders {
        let c = op.coeff(r).reduced();
        if c.is_zero() {
            continue;
        }
        for d in 0..=c.num().degree().unwrap_or(0) {
            let e = c.num().coeff(d);
            if !e.is_zero() && !eqs.contains(e.num()) {
                eqs.push(e.num().clone());
            }
        }
        if !c.is_polynomial() {
            cleared.push((r, c.den_poly()));
        }
    }
    (eqs, cleared)
}

/// Solves each equation that is linear in some `c_i` with a constant
/// coefficient, taking the highest such `c_i`.
fn forced_relations(eqs: &[MPoly], cs: &[Param]) -> Vec<(Param, ParamScalar)> {
    let mut out: Vec<(Param, ParamScalar)> = Vec::new();
    for e in eqs {
        let solved = cs.iter().rev().find_map(|&c| {
            if out.iter().any(|(q, _)| *q == c) || e.degree_in(c) != 1 {
                return None;
            }
            let parts = e.coefficients_in(c);
            let k = parts.get(&1)?.constant_value()?;
            let rest = parts.get(&0).cloned().unwrap_or_else(MPoly::zero);
            if cs.iter().any(|q| rest.degree_in(*q) > 0) {
                return None;
            }
            Some((c, ParamScalar::from_poly(rest.scale(&(-k.recip())))))
        });
        if let Some(r) = solved {
            out.push(r);
        }
    }
    out.sort_by_key(|(p, _)| std::cmp::Reverse(p.name()));
    out
}

/// Builds the system for `w`. With `full` unset only the forced relations
/// are computed and `equations` holds the third-from-top coefficient.
pub fn generate_system(w: &WeightVector, full: bool) -> Result<AnsatzSystem, Error> {
    let n = w.top_order();
    if n < 2 {
        return Err(Error::Invalid(
            "the ansatz needs a condition of order at least 2".into(),
        ));
    }
    let a = theta_params(n);
    let c = p_params(n);
    let theta = symbolic_poly(&a, 1);
    let p = symbolic_poly(&c, 0);
    let v = build_v(&theta, &p)?;
    let l = DiffOp::schrodinger(v);
    let theta_op = DiffOp::mul_by(XRat::from_poly(theta.clone()));

    let top = ad_powers_top(&l, &theta_op, n, 3)?;
    let third = weighted(&top, w);
    let (third_eqs, third_cleared) = slot_equations(&third, std::iter::once(n - 2));
    let forced = forced_relations(&third_eqs, &c);

    let mut unknowns = a.clone();
    unknowns.extend(c.iter().copied());
    if !full {
        return Ok(AnsatzSystem {
            weights: w.clone(),
            unknowns,
            theta,
            p,
            forced,
            equations: third_eqs,
            cleared: third_cleared,
        });
    }
    let mut p_forced = p.clone();
    for (q, val) in &forced {
        p_forced = p_forced.subst_param(*q, val).ok_or(Error::DivisionByZero)?;
    }
    let l = DiffOp::schrodinger(build_v(&theta, &p_forced)?);
    let ops = ad_powers(&l, &theta_op, n)?;
    let res = weighted(&ops, w);
    let (equations, cleared) = slot_equations(&res, 0..=n);
    Ok(AnsatzSystem {
        weights: w.clone(),
        unknowns,
        theta,
        p,
        forced,
        equations,
        cleared,
    })
}

fn weighted(ops: &[DiffOp], w: &WeightVector) -> DiffOp {
    let mut acc = DiffOp::zero();
    for (j, c) in w.iter() {
        acc = &acc + &ops[j].scale_scalar(c);
    }
    acc.reduced()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_poly, parse_xrat, ParseContext};

    fn ctx() -> ParseContext {
        ParseContext::new(["a2", "c"]).unwrap()
    }

    #[test]
    fn build_v_examples() {
        let c = ctx();
        let v = build_v(&XPoly::x(), &parse_poly("x^3/3", &c).unwrap()).unwrap();
        assert_eq!(v, parse_xrat("x^2", &c).unwrap());
        let v = build_v(&parse_poly("x^2", &c).unwrap(), &XPoly::one()).unwrap();
        assert_eq!(v, parse_xrat("-1/(2*x^2)", &c).unwrap());
        let theta = parse_poly("a2*x^2", &c).unwrap();
        let p = parse_poly("2*a2/3*x^4 + 2*a2*c*x - 4*a2", &c).unwrap();
        assert_eq!(
            build_v(&theta, &p).unwrap(),
            parse_xrat("x^2 + 2/x^2", &c).unwrap()
        );
        assert_eq!(
            build_v(&XPoly::one(), &XPoly::x()),
            Err(Error::ConstantTheta)
        );
    }

    #[test]
    fn fit_p_inverts_build_v() {
        let c = ctx();
        let theta = parse_poly("a2*x^2", &c).unwrap();
        let v = parse_xrat("x^2 + 2/x^2", &c).unwrap();
        let p = fit_p(&theta, &v, 4).unwrap().unwrap();
        assert_eq!(build_v(&theta, &p).unwrap(), v);
        assert!(fit_p(&XPoly::x(), &parse_xrat("1/x", &c).unwrap(), 4)
            .unwrap()
            .is_none());
    }

    #[test]
    fn candidate_checks() {
        let c = ctx();
        let w = WeightVector::from_ints(&[(2, 1), (0, -4)]);
        assert!(
            verify_candidate(&w, &XPoly::x(), &parse_xrat("x^2 + c", &c).unwrap())
                .unwrap()
                .holds
        );
        let bad = verify_candidate(&w, &XPoly::x(), &parse_xrat("x^3", &c).unwrap()).unwrap();
        assert_eq!(
            bad.residual,
            DiffOp::mul_by(parse_xrat("6*x^2 - 4*x", &c).unwrap())
        );
    }

    #[test]
    fn quadratic_condition_system() {
        let w = WeightVector::from_ints(&[(2, 1), (0, -4)]);
        let sys = generate_system(&w, true).unwrap();
        let c3 = Param::of("c3");
        assert!(sys.forced.iter().any(|(p, v)| *p == c3
            && *v == ParamScalar::param(Param::of("a1")).scale(&crate::exact::Rat::new(1, 3))));
        assert!(
            sys.equations.is_empty()
                || sys
                    .equations
                    .iter()
                    .all(|e| e.degree_in(Param::of("a1")) <= 1)
        );
    }
}
