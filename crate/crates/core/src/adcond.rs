//! Iterated commutators `A_j = ad_L^j(Θ)` and the identities `Σ w_j A_j = 0`.

use std::collections::BTreeMap;
use std::fmt;

use crate::diffop::{commutator_cached, DerivCache, DiffOp, XPoly, XRat};
use crate::error::Error;
use crate::exact::{nullspace, MPoly, ParamScalar, Rat};
use crate::limits::check_degree;

/// Spacing `s` of a linear spectrum `λ_n = s·n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumStep(Rat);

impl SpectrumStep {
    pub fn new(s: Rat) -> Result<SpectrumStep, Error> {
        if s.is_zero() {
            return Err(Error::Invalid("spectrum step must be nonzero".into()));
        }
        Ok(SpectrumStep(s))
    }

    pub fn value(&self) -> &Rat {
        &self.0
    }
}

/// Weights `w_j` of an ad-condition `Σ w_j A_j = 0`; zero weights are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    weights: BTreeMap<usize, ParamScalar>,
}

impl WeightVector {
    pub fn new(
        weights: impl IntoIterator<Item = (usize, ParamScalar)>,
    ) -> Result<WeightVector, Error> {
        let mut map = BTreeMap::new();
        for (j, w) in weights {
            if !w.is_zero() {
                let slot = map.entry(j).or_insert_with(ParamScalar::zero);
                *slot = &*slot + &w;
            }
        }
        map.retain(|_, w: &mut ParamScalar| !w.is_zero());
        if map.is_empty() {
            return Err(Error::Invalid("weight vector has no nonzero weight".into()));
        }
        Ok(WeightVector { weights: map })
    }

    /// Panics when every weight is zero.
    pub fn from_ints(weights: &[(usize, i64)]) -> WeightVector {
        WeightVector::new(weights.iter().map(|&(j, w)| (j, ParamScalar::int(w))))
            .expect("a nonzero weight")
    }

    pub fn top_order(&self) -> usize {
        *self.weights.keys().next_back().expect("nonempty")
    }

    pub fn weight(&self, j: usize) -> ParamScalar {
        self.weights
            .get(&j)
            .cloned()
            .unwrap_or_else(ParamScalar::zero)
    }

    /// `(j, w_j)` in increasing order of `j`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &ParamScalar)> {
        self.weights.iter().map(|(j, w)| (*j, w))
    }

    /// Rescaled so the top weight is 1.
    pub fn monic(&self) -> WeightVector {
        let top = self.weight(self.top_order());
        let inv = top.recip().expect("top weight is nonzero");
        WeightVector {
            weights: self.weights.iter().map(|(j, w)| (*j, w * &inv)).collect(),
        }
    }

    /// Compact label such as `A5-5A3+4A1`.
    pub fn label(&self) -> String {
        let mut out = String::new();
        for (j, w) in self.weights.iter().rev() {
            let text = match w.as_rat() {
                Some(r) if r.is_one() => String::new(),
                Some(r) if r == -Rat::one() => "-".into(),
                Some(r) => r.to_string(),
                None => format!("({w})"),
            };
            if !out.is_empty() && !text.starts_with('-') {
                out.push('+');
            }
            out.push_str(&text);
            out.push_str(&format!("A{j}"));
        }
        out
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, w) in self.weights.iter().rev() {
            let text = match w.as_rat() {
                Some(r) => r.to_string(),
                None => w.to_string(),
            };
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, text.as_str()),
            };
            let single_term = !mag.contains(" + ") && !mag.contains(" - ");
            let (neg, mag) = if single_term {
                (neg, mag)
            } else {
                (false, text.as_str())
            };
            let sep = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let coeff = if mag == "1" {
                String::new()
            } else if single_term {
                format!("{mag}*")
            } else {
                format!("({mag})*")
            };
            write!(f, "{sep}{coeff}A{j}")?;
            first = false;
        }
        Ok(())
    }
}

/// Outcome of checking an identity: `holds` iff `residual` is zero.
#[derive(Clone, Debug)]
pub struct ConditionReport<R = DiffOp> {
    pub holds: bool,
    pub residual: R,
    pub assumptions: Vec<MPoly>,
}

/// `A_0, ..., A_n` with `A_0 = Θ` and `A_{j+1} = [L, A_j]`.
pub fn ad_powers(l: &DiffOp, theta: &DiffOp, n: usize) -> Result<Vec<DiffOp>, Error> {
    let mut cache = DerivCache::new(l);
    let mut out = Vec::with_capacity(n + 1);
    out.push(theta.clone());
    for _ in 0..n {
        let next = commutator_cached(&mut cache, out.last().unwrap());
        check_degree(next.size_degree())?;
        out.push(next);
    }
    Ok(out)
}

/// The top `depth` coefficients of each `A_j`, measured from the nominal
/// order `ord Θ + j (ord L − 1)`; lower coefficients are zero in the output.
/// Exact in that window for second-order `L`, since the coefficient of
/// `D^s` in `[L, X]` only involves coefficients of `X` of order `≥ s − 1`.
pub fn ad_powers_top(
    l: &DiffOp,
    theta: &DiffOp,
    n: usize,
    depth: usize,
) -> Result<Vec<DiffOp>, Error> {
    if l.order() != Some(2) {
        return Err(Error::Invalid(
            "truncated expansion needs a second-order operator".into(),
        ));
    }
    let base = theta.order().unwrap_or(0);
    let truncate = |op: DiffOp, nominal: usize| {
        let keep_from = (nominal + 1).saturating_sub(depth);
        DiffOp::from_coeffs(
            op.coeffs()
                .iter()
                .enumerate()
                .map(|(r, c)| {
                    if r < keep_from {
                        XRat::zero()
                    } else {
                        c.clone()
                    }
                })
                .collect(),
        )
    };
    let mut cache = DerivCache::new(l);
    let mut out = Vec::with_capacity(n + 1);
    out.push(truncate(theta.clone(), base));
    for j in 1..=n {
        let next = truncate(commutator_cached(&mut cache, out.last().unwrap()), base + j);
        check_degree(next.size_degree())?;
        out.push(next);
    }
    Ok(out)
}

pub fn ad_power(l: &DiffOp, theta: &DiffOp, j: usize) -> Result<DiffOp, Error> {
    Ok(ad_powers(l, theta, j)?.pop().unwrap())
}

/// Weights of `Π (ad² − r_i)` applied to `ad^base`, i.e. the coefficient of
/// `z^m` in `Π (z − r_i)` placed on order `2m + base`.
fn product_weights(roots: &[Rat], base: usize) -> WeightVector {
    let mut poly = vec![Rat::one()];
    for r in roots {
        let mut next = vec![Rat::zero(); poly.len() + 1];
        for (m, c) in poly.iter().enumerate() {
            next[m + 1] = &next[m + 1] + c;
            next[m] = &next[m] - &(c * r);
        }
        poly = next;
    }
    WeightVector::new(
        poly.into_iter()
            .enumerate()
            .map(|(m, c)| (2 * m + base, ParamScalar::from_rat(c))),
    )
    .expect("monic product")
}

/// The odd-order identity for a spectrum with spacing `s`: expansion of
/// `Π_{i=1}^{n} (ad² − (s·i)²)·ad`.
pub fn reach_weights(n: usize, step: &SpectrumStep) -> WeightVector {
    let roots: Vec<Rat> = (1..=n as i64)
        .map(|i| (step.value() * &Rat::int(i)).pow(2))
        .collect();
    product_weights(&roots, 1)
}

/// Identities for the exceptional Hermite family with index `k`: for odd
/// `k` the product `Π_{i=1}^{(k+1)/2} (ad² − (4i)²)·ad`, for even `k` the
/// product `Π_{i=0}^{k/2} (ad² − (2+4i)²)`. The top order is `k + 2`.
pub fn hermite_new_weights(k: usize) -> WeightVector {
    let k = k as i64;
    if k % 2 == 1 {
        let roots: Vec<Rat> = (1..=(k + 1) / 2).map(|i| Rat::int(4 * i).pow(2)).collect();
        product_weights(&roots, 1)
    } else {
        let roots: Vec<Rat> = (0..=k / 2).map(|i| Rat::int(2 + 4 * i).pow(2)).collect();
        product_weights(&roots, 0)
    }
}

fn weighted_sum(ops: &[DiffOp], w: &WeightVector) -> DiffOp {
    let mut acc = DiffOp::zero();
    for (j, c) in w.iter() {
        acc = &acc + &ops[j].scale_scalar(c);
    }
    acc.reduced()
}

/// `Σ w_j ad_L^j(Θ)`, exactly.
pub fn residual(l: &DiffOp, theta: &DiffOp, w: &WeightVector) -> Result<DiffOp, Error> {
    let ops = ad_powers(l, theta, w.top_order())?;
    Ok(weighted_sum(&ops, w))
}

pub fn verify_condition(
    l: &DiffOp,
    theta: &DiffOp,
    w: &WeightVector,
) -> Result<ConditionReport, Error> {
    let residual = residual(l, theta, w)?;
    Ok(ConditionReport {
        holds: residual.is_zero(),
        residual,
        assumptions: Vec::new(),
    })
}

/// Linear equations on unknown coefficients `u_i` expressing
/// `Σ_i u_i ops_i = 0`: one row per `x`-coefficient of every derivative
/// order after bringing each order over a common denominator.
fn coefficient_rows(ops: &[DiffOp]) -> Vec<Vec<ParamScalar>> {
    let max_len = ops.iter().map(|o| o.coeffs().len()).max().unwrap_or(0);
    let columns: Vec<Vec<XRat>> = ops
        .iter()
        .map(|o| (0..max_len).map(|r| o.coeff(r)).collect())
        .collect();
    slot_rows(&columns)
}

/// Rows of `Σ_i u_i columns_i = 0` where each column lists rational
/// functions slot by slot; every slot yields one row per power of `x`.
pub(crate) fn slot_rows(columns: &[Vec<XRat>]) -> Vec<Vec<ParamScalar>> {
    let slots = columns.iter().map(|c| c.len()).max().unwrap_or(0);
    let mut rows = Vec::new();
    for r in 0..slots {
        let items: Vec<XRat> = columns
            .iter()
            .map(|c| c.get(r).cloned().unwrap_or_default())
            .collect();
        if items.iter().all(|c| c.is_zero()) {
            continue;
        }
        let (nums, _) = XRat::common_numerators(&items);
        let top = nums.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
        for d in 0..=top {
            let row: Vec<ParamScalar> = nums.iter().map(|p| p.coeff(d)).collect();
            if row.iter().any(|c| !c.is_zero()) {
                rows.push(row);
            }
        }
    }
    rows
}

/// Weight vectors discovered by [`fit_weights`].
#[derive(Clone, Debug)]
pub struct FittedWeights {
    /// Monic weight vectors spanning the solution space.
    pub basis: Vec<WeightVector>,
    /// The nullspace basis as computed, indexed like the requested orders.
    pub raw: Vec<Vec<ParamScalar>>,
    pub assumptions: Vec<MPoly>,
}

/// All weight vectors supported on `orders` that make `Σ w_j A_j` vanish.
pub fn fit_weights(l: &DiffOp, theta: &DiffOp, orders: &[usize]) -> Result<FittedWeights, Error> {
    let mut sorted = orders.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() || sorted.len() != orders.len() {
        return Err(Error::Invalid(
            "orders must be nonempty and distinct".into(),
        ));
    }
    let all = ad_powers(l, theta, *sorted.last().unwrap())?;
    let picked: Vec<DiffOp> = orders.iter().map(|&j| all[j].clone()).collect();
    let rows = coefficient_rows(&picked);
    let ns = nullspace(&rows, orders.len());
    let basis = ns
        .basis
        .iter()
        .map(|v| {
            WeightVector::new(orders.iter().copied().zip(v.iter().cloned())).map(|w| w.monic())
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FittedWeights {
        basis,
        raw: ns.basis,
        assumptions: ns.assumptions,
    })
}

/// Polynomial eigenvalue functions found by [`solve_theta`].
#[derive(Clone, Debug)]
pub struct ThetaSolutions {
    pub basis: Vec<XPoly>,
    pub assumptions: Vec<MPoly>,
}

/// Basis of the polynomials `Θ` of degree at most `deg_bound` with
/// `Σ w_j A_j(Θ) = 0`. With `pin_origin` the constant term is fixed to zero;
/// that is harmless only when the weights have no `A0` term.
pub fn solve_theta(
    l: &DiffOp,
    w: &WeightVector,
    deg_bound: usize,
    pin_origin: bool,
) -> Result<ThetaSolutions, Error> {
    if deg_bound == 0 {
        return Err(Error::Invalid("degree bound must be at least 1".into()));
    }
    let start = usize::from(pin_origin);
    let degrees: Vec<usize> = (start..=deg_bound).collect();
    let residuals: Vec<Result<DiffOp, Error>> = std::thread::scope(|s| {
        let handles: Vec<_> = degrees
            .iter()
            .map(|&d| {
                s.spawn(move || {
                    let theta =
                        DiffOp::mul_by(XRat::from_poly(XPoly::monomial(ParamScalar::one(), d)));
                    residual(l, &theta, w)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let residuals = residuals.into_iter().collect::<Result<Vec<_>, _>>()?;
    let rows = coefficient_rows(&residuals);
    let ns = nullspace(&rows, degrees.len());
    let basis = ns
        .basis
        .iter()
        .map(|v| {
            let mut coeffs = vec![ParamScalar::zero(); deg_bound + 1];
            for (c, &d) in v.iter().zip(&degrees) {
                coeffs[d] = c.clone();
            }
            XPoly::from_coeffs(coeffs)
        })
        .collect();
    Ok(ThetaSolutions {
        basis,
        assumptions: ns.assumptions,
    })
}

/// Terms of `e^{tL} Θ e^{−tL} = Σ t^i/i! A_i` and the relations among them.
#[derive(Clone, Debug)]
pub struct HeisenbergReport {
    pub terms: Vec<DiffOp>,
    /// `(j, c)` with `A_{j+2} = c·A_j`, or `None` when not proportional.
    pub step_relations: Vec<(usize, Option<ParamScalar>)>,
    /// `(i, c)` with `A_i = c·A_1` for odd `i ≥ 3`.
    pub odd_chain: Vec<(usize, Option<ParamScalar>)>,
    /// `(i, c)` with `A_i = c·A_2` for even `i ≥ 4`.
    pub even_chain: Vec<(usize, Option<ParamScalar>)>,
    /// `ω²` of the closed form `cosh(ωt)A_0 + sinh(ωt)A_1/ω`.
    pub omega_squared: Option<ParamScalar>,
    /// `(i, matches)` comparing `A_i` with `ω^i A_0` (even) or `ω^{i−1} A_1` (odd).
    pub closed_form: Vec<(usize, bool)>,
}

impl HeisenbergReport {
    pub fn closed_form_holds(&self) -> bool {
        self.omega_squared.is_some() && self.closed_form.iter().all(|(_, ok)| *ok)
    }
}

/// Expands the series to order `n`. `ω²` is taken from `omega_squared` or
/// else read off the relation `A_3 = ω² A_1`.
pub fn heisenberg_series(
    l: &DiffOp,
    theta: &DiffOp,
    n: usize,
    omega_squared: Option<ParamScalar>,
) -> Result<HeisenbergReport, Error> {
    let terms = ad_powers(l, theta, n)?;
    let step_relations = (0..n.saturating_sub(1))
        .map(|j| (j, terms[j + 2].proportional_to(&terms[j])))
        .collect();
    let odd_chain = (3..=n)
        .step_by(2)
        .map(|i| (i, terms[i].proportional_to(&terms[1])))
        .collect();
    let even_chain = (4..=n)
        .step_by(2)
        .map(|i| (i, terms[i].proportional_to(&terms[2])))
        .collect();
    let omega_squared = omega_squared.or_else(|| {
        (n >= 3)
            .then(|| terms[3].proportional_to(&terms[1]))
            .flatten()
            .filter(|_| !terms[1].is_zero())
    });
    let closed_form = match &omega_squared {
        Some(w2) => (0..=n)
            .map(|i| {
                let (base, e) = if i % 2 == 0 {
                    (&terms[0], i / 2)
                } else {
                    (&terms[1], (i - 1) / 2)
                };
                let c = w2.pow(e as i32).expect("integer power");
                (i, terms[i] == base.scale_scalar(&c))
            })
            .collect(),
        None => Vec::new(),
    };
    Ok(HeisenbergReport {
        terms,
        step_relations,
        odd_chain,
        even_chain,
        omega_squared,
        closed_form,
    })
}
