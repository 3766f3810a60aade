//! Differential operators with square matrix coefficients acting on
//! matrix-valued functions, and identities with constant matrix weights.

use std::fmt;

use crate::adcond::{slot_rows, ConditionReport};
use crate::diffop::{binomial, DiffOp, XRat};
use crate::error::Error;
use crate::exact::{nullspace, ParamScalar, Rat};
use crate::limits::check_degree;

/// Which side the coefficients multiply derivatives of the argument from.
/// `Right` means `(L F) = Σ F^{(r)} C_r`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActionSide {
    Left,
    #[default]
    Right,
}

impl ActionSide {
    pub fn name(self) -> &'static str {
        match self {
            ActionSide::Left => "left",
            ActionSide::Right => "right",
        }
    }

    pub fn other(self) -> ActionSide {
        match self {
            ActionSide::Left => ActionSide::Right,
            ActionSide::Right => ActionSide::Left,
        }
    }
}

impl fmt::Display for ActionSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A square matrix of rational functions, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct XMat {
    n: usize,
    entries: Vec<XRat>,
}

impl XMat {
    pub fn zero(n: usize) -> XMat {
        XMat {
            n,
            entries: vec![XRat::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> XMat {
        XMat::scalar(n, XRat::one())
    }

    /// `f · I`.
    pub fn scalar(n: usize, f: XRat) -> XMat {
        let mut m = XMat::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = f.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<XRat>>) -> Result<XMat, Error> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Mismatch("matrix must be square and nonempty".into()));
        }
        Ok(XMat {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn constant(rows: Vec<Vec<ParamScalar>>) -> Result<XMat, Error> {
        XMat::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(XRat::constant).collect())
                .collect(),
        )
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &XRat {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[XRat]> {
        self.entries.chunks(self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    fn zip(&self, other: &XMat, f: impl Fn(&XRat, &XRat) -> XRat) -> XMat {
        XMat {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    fn map(&self, f: impl Fn(&XRat) -> XRat) -> XMat {
        XMat {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &XMat) -> XMat {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &XMat) -> XMat {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &XMat) -> XMat {
        let n = self.n;
        let mut out = XMat::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = XRat::zero();
                for l in 0..n {
                    let (a, b) = (self.get(i, l), other.get(l, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.entries[i * n + j] = acc;
            }
        }
        out
    }

    pub fn scale_rat(&self, c: &Rat) -> XMat {
        self.map(|e| e.scale_rat(c))
    }

    pub fn scale_scalar(&self, c: &ParamScalar) -> XMat {
        self.map(|e| e.scale(c))
    }

    pub fn derivative(&self) -> XMat {
        self.map(|e| e.derivative().reduced())
    }

    pub fn reduced(&self) -> XMat {
        self.map(|e| e.reduced())
    }

    fn size_degree(&self) -> usize {
        self.entries
            .iter()
            .map(|e| e.size_degree())
            .max()
            .unwrap_or(0)
    }

    /// `c` with `self = c · other`, when `other` is nonzero and the ratio is
    /// a constant.
    pub fn proportional_to(&self, other: &XMat) -> Option<ParamScalar> {
        let (i, pivot) = other
            .entries
            .iter()
            .enumerate()
            .find(|(_, e)| !e.is_zero())?;
        let c = self.entries[i].checked_div(pivot).ok()?.constant_value()?;
        (self == &other.scale_scalar(&c)).then_some(c)
    }
}

impl fmt::Display for XMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .map(|r| {
                format!(
                    "[{}]",
                    r.iter()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// `Σ C_r D^r` with `n × n` coefficients, acting from `side`.
#[derive(Clone, Debug)]
pub struct MatDiffOp {
    coeffs: Vec<XMat>,
    size: usize,
    side: ActionSide,
}

impl MatDiffOp {
    pub fn new(size: usize, side: ActionSide, mut coeffs: Vec<XMat>) -> Result<MatDiffOp, Error> {
        if let Some(m) = coeffs.iter().find(|m| m.size() != size) {
            return Err(Error::Mismatch(format!(
                "coefficient of size {} in a size-{size} operator",
                m.size()
            )));
        }
        while coeffs.last().is_some_and(|m| m.is_zero()) {
            coeffs.pop();
        }
        Ok(MatDiffOp { coeffs, size, side })
    }

    pub fn zero(size: usize, side: ActionSide) -> MatDiffOp {
        MatDiffOp {
            coeffs: Vec::new(),
            size,
            side,
        }
    }

    /// Multiplication by the matrix function `m`.
    pub fn mul_by(m: XMat, side: ActionSide) -> MatDiffOp {
        let size = m.size();
        MatDiffOp::new(size, side, vec![m]).expect("single coefficient")
    }

    /// The `1 × 1` operator with the same coefficients.
    pub fn from_scalar(op: &DiffOp, side: ActionSide) -> MatDiffOp {
        let coeffs = op
            .coeffs()
            .iter()
            .map(|c| XMat::scalar(1, c.clone()))
            .collect();
        MatDiffOp::new(1, side, coeffs).expect("uniform size")
    }

    pub fn to_scalar(&self) -> Option<DiffOp> {
        (self.size == 1)
            .then(|| DiffOp::from_coeffs(self.coeffs.iter().map(|m| m.get(0, 0).clone()).collect()))
    }

    pub fn coeffs(&self) -> &[XMat] {
        &self.coeffs
    }

    pub fn coeff(&self, r: usize) -> XMat {
        self.coeffs
            .get(r)
            .cloned()
            .unwrap_or_else(|| XMat::zero(self.size))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn side(&self) -> ActionSide {
        self.side
    }

    /// The same coefficients read with the other action convention.
    pub fn with_side(&self, side: ActionSide) -> MatDiffOp {
        MatDiffOp {
            side,
            ..self.clone()
        }
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_compatible(&self, other: &MatDiffOp) -> Result<(), Error> {
        if self.size != other.size || self.side != other.side {
            return Err(Error::Mismatch(format!(
                "size {} {} versus size {} {}",
                self.size, self.side, other.size, other.side
            )));
        }
        Ok(())
    }

    fn combine(
        &self,
        other: &MatDiffOp,
        f: impl Fn(&XMat, &XMat) -> XMat,
    ) -> Result<MatDiffOp, Error> {
        self.check_compatible(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        MatDiffOp::new(
            self.size,
            self.side,
            (0..n).map(|r| f(&self.coeff(r), &other.coeff(r))).collect(),
        )
    }

    pub fn add(&self, other: &MatDiffOp) -> Result<MatDiffOp, Error> {
        self.combine(other, XMat::add)
    }

    pub fn sub(&self, other: &MatDiffOp) -> Result<MatDiffOp, Error> {
        self.combine(other, XMat::sub)
    }

    pub fn scale_scalar(&self, c: &ParamScalar) -> MatDiffOp {
        let coeffs = self.coeffs.iter().map(|m| m.scale_scalar(c)).collect();
        MatDiffOp::new(self.size, self.side, coeffs).expect("uniform size")
    }

    /// The operator whose coefficients are `C_r · m`.
    pub fn times_matrix(&self, m: &XMat) -> Result<MatDiffOp, Error> {
        if m.size() != self.size {
            return Err(Error::Mismatch(format!(
                "{}x{} factor for a size-{} operator",
                m.size(),
                m.size(),
                self.size
            )));
        }
        MatDiffOp::new(
            self.size,
            self.side,
            self.coeffs.iter().map(|c| c.mul(m).reduced()).collect(),
        )
    }

    /// `A ∘ B` under the shared action convention. With left action the
    /// Leibniz terms are `A_p B_q^{(i)}`, with right action `B_q^{(i)} A_p`.
    pub fn compose(&self, other: &MatDiffOp) -> Result<MatDiffOp, Error> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(MatDiffOp::zero(self.size, self.side));
        }
        let mut derivs: Vec<Vec<XMat>> = other.coeffs.iter().map(|c| vec![c.clone()]).collect();
        let mut out = vec![XMat::zero(self.size); self.coeffs.len() + other.coeffs.len() - 1];
        for (p, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (q, list) in derivs.iter_mut().enumerate() {
                for i in 0..=p {
                    while list.len() <= i {
                        let next = list.last().unwrap().derivative();
                        list.push(next);
                    }
                    let b = &list[i];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = match self.side {
                        ActionSide::Left => a.mul(b),
                        ActionSide::Right => b.mul(a),
                    };
                    let slot = &mut out[p + q - i];
                    *slot = slot.add(&prod.scale_rat(&binomial(p, i)));
                }
            }
        }
        MatDiffOp::new(
            self.size,
            self.side,
            out.iter().map(XMat::reduced).collect(),
        )
    }

    pub fn commutator(&self, other: &MatDiffOp) -> Result<MatDiffOp, Error> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    fn size_degree(&self) -> usize {
        self.coeffs.iter().map(XMat::size_degree).max().unwrap_or(0)
    }
}

impl PartialEq for MatDiffOp {
    fn eq(&self, other: &MatDiffOp) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        self.size == other.size
            && self.side == other.side
            && (0..n).all(|r| self.coeff(r) == other.coeff(r))
    }
}

impl fmt::Display for MatDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, m)| !m.is_zero())
            .map(|(r, m)| match r {
                0 => m.to_string(),
                1 => format!("{m}*D"),
                _ => format!("{m}*D^{r}"),
            })
            .collect();
        write!(f, "{} ({} action)", terms.join(" + "), self.side)
    }
}

/// `[L, Θ], [L, [L, Θ]], ...` up to order `n`, starting with `Θ`.
pub fn mat_ad_powers(l: &MatDiffOp, theta: &MatDiffOp, n: usize) -> Result<Vec<MatDiffOp>, Error> {
    let mut out = vec![theta.clone()];
    for _ in 0..n {
        let next = l.commutator(out.last().unwrap())?;
        check_degree(next.size_degree())?;
        out.push(next);
    }
    Ok(out)
}

pub fn mat_ad_power(l: &MatDiffOp, theta: &MatDiffOp, j: usize) -> Result<MatDiffOp, Error> {
    Ok(mat_ad_powers(l, theta, j)?.pop().unwrap())
}

/// `Σ_j A_j M_j = 0` with constant matrices `M_j`.
#[derive(Clone, Debug)]
pub struct MatCondition {
    terms: Vec<(usize, XMat)>,
    theta: MatDiffOp,
}

impl MatCondition {
    pub fn new(terms: Vec<(usize, XMat)>, theta: MatDiffOp) -> Result<MatCondition, Error> {
        if terms.iter().all(|(_, m)| m.is_zero()) {
            return Err(Error::Invalid(
                "matrix condition needs a nonzero weight".into(),
            ));
        }
        if let Some((_, m)) = terms.iter().find(|(_, m)| m.size() != theta.size()) {
            return Err(Error::Mismatch(format!(
                "weight of size {} for size-{} operators",
                m.size(),
                theta.size()
            )));
        }
        Ok(MatCondition { terms, theta })
    }

    /// `Σ_j w_j A_j M` for scalar weights and one matrix `M`.
    pub fn scalar_weights(
        w: &[(usize, ParamScalar)],
        m: &XMat,
        theta: MatDiffOp,
    ) -> Result<MatCondition, Error> {
        MatCondition::new(
            w.iter().map(|(j, c)| (*j, m.scale_scalar(c))).collect(),
            theta,
        )
    }

    pub fn terms(&self) -> &[(usize, XMat)] {
        &self.terms
    }

    pub fn theta(&self) -> &MatDiffOp {
        &self.theta
    }

    pub fn top_order(&self) -> usize {
        self.terms.iter().map(|(j, _)| *j).max().unwrap_or(0)
    }

    /// The scalar weights `w_j` and matrix `M` with `M_j = w_j M`, when the
    /// weights share one direction.
    pub fn factored(&self) -> Option<(Vec<(usize, ParamScalar)>, XMat)> {
        let base = self.terms.iter().find(|(_, m)| !m.is_zero())?.1.clone();
        let weights = self
            .terms
            .iter()
            .map(|(j, m)| {
                Some((
                    *j,
                    if m.is_zero() {
                        ParamScalar::zero()
                    } else {
                        m.proportional_to(&base)?
                    },
                ))
            })
            .collect::<Option<Vec<_>>>()?;
        Some((weights, base))
    }
}

fn weighted_residual(ops: &[MatDiffOp], terms: &[(usize, XMat)]) -> Result<MatDiffOp, Error> {
    let mut acc = MatDiffOp::zero(ops[0].size(), ops[0].side());
    for (j, m) in terms {
        acc = acc.add(&ops[*j].times_matrix(m)?)?;
    }
    Ok(acc)
}

/// Evaluates `Σ_j A_j M_j` where `A_j M` has coefficients `C_r M`.
pub fn verify_matrix_condition(
    l: &MatDiffOp,
    cond: &MatCondition,
) -> Result<ConditionReport<MatDiffOp>, Error> {
    let ops = mat_ad_powers(l, &cond.theta, cond.top_order())?;
    let residual = weighted_residual(&ops, &cond.terms)?;
    Ok(ConditionReport {
        holds: residual.is_zero(),
        residual,
        assumptions: Vec::new(),
    })
}

/// Outcome of a condition under one action convention.
#[derive(Clone, Debug)]
pub struct SideOutcome {
    pub side: ActionSide,
    pub report: ConditionReport<MatDiffOp>,
    /// Dimension of the space of constant `N` with `(Σ w_j A_j) N = 0`, when
    /// the condition has the factored form `Σ w_j A_j M`. Equal to `n²` when
    /// the identity holds for every factor.
    pub admissible_dim: Option<usize>,
}

impl SideOutcome {
    pub fn is_degenerate(&self, size: usize) -> bool {
        self.admissible_dim == Some(size * size)
    }
}

#[derive(Clone, Debug)]
pub struct ConventionReport {
    pub left: SideOutcome,
    pub right: SideOutcome,
    /// The side under which the identity holds without holding for every
    /// factor matrix; ties go to right action. `None` when neither side
    /// verifies.
    pub preferred: Option<ActionSide>,
}

impl ConventionReport {
    pub fn outcome(&self, side: ActionSide) -> &SideOutcome {
        match side {
            ActionSide::Left => &self.left,
            ActionSide::Right => &self.right,
        }
    }

    pub fn passing_sides(&self) -> Vec<ActionSide> {
        [&self.left, &self.right]
            .into_iter()
            .filter(|o| o.report.holds)
            .map(|o| o.side)
            .collect()
    }
}

fn admissible_dim(ops: &[MatDiffOp], weights: &[(usize, ParamScalar)]) -> Result<usize, Error> {
    let n = ops[0].size();
    let mut total = MatDiffOp::zero(n, ops[0].side());
    for (j, c) in weights {
        total = total.add(&ops[*j].scale_scalar(c))?;
    }
    // Unknown N_{lk}; equation slots are the entries (i, k) of each C_r N.
    let columns: Vec<Vec<XRat>> = (0..n * n)
        .map(|u| {
            let (l, k) = (u / n, u % n);
            let mut col = Vec::new();
            for c in total.coeffs() {
                for i in 0..n {
                    for kk in 0..n {
                        col.push(if kk == k {
                            c.get(i, l).clone()
                        } else {
                            XRat::zero()
                        });
                    }
                }
            }
            col
        })
        .collect();
    Ok(nullspace(&slot_rows(&columns), n * n).basis.len())
}

fn side_outcome(
    l: &MatDiffOp,
    cond: &MatCondition,
    side: ActionSide,
) -> Result<SideOutcome, Error> {
    let l = l.with_side(side);
    let theta = cond.theta.with_side(side);
    let ops = mat_ad_powers(&l, &theta, cond.top_order())?;
    let residual = weighted_residual(&ops, &cond.terms)?;
    let admissible_dim = match cond.factored() {
        Some((w, _)) => Some(admissible_dim(&ops, &w)?),
        None => None,
    };
    Ok(SideOutcome {
        side,
        report: ConditionReport {
            holds: residual.is_zero(),
            residual,
            assumptions: Vec::new(),
        },
        admissible_dim,
    })
}

/// Runs `cond` with the coefficients of `l` read under both conventions.
pub fn convention_probe(l: &MatDiffOp, cond: &MatCondition) -> Result<ConventionReport, Error> {
    let left = side_outcome(l, cond, ActionSide::Left)?;
    let right = side_outcome(l, cond, ActionSide::Right)?;
    let n = l.size();
    let informative = |o: &SideOutcome| o.report.holds && !o.is_degenerate(n);
    let preferred = if informative(&right) {
        Some(ActionSide::Right)
    } else if informative(&left) {
        Some(ActionSide::Left)
    } else if right.report.holds {
        Some(ActionSide::Right)
    } else if left.report.holds {
        Some(ActionSide::Left)
    } else {
        None
    };
    Ok(ConventionReport {
        left,
        right,
        preferred,
    })
}
