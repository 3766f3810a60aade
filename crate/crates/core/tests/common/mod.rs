//! Generators and property checks shared by the property suites and the
//! acceptance run.
#![allow(dead_code)]

use bispec_core::darboux::{darboux_step, intertwine_check};
use bispec_core::diffop::{DiffOp, QuasiRat, XPoly, XRat};
use bispec_core::exact::{nullspace, MPoly, Param, ParamScalar};
use proptest::prelude::*;

fn param_a() -> ParamScalar {
    ParamScalar::from_poly(MPoly::var(Param::of("a")))
}

/// Coefficients in `-3..=3`, optionally scaled by the parameter `a`.
pub fn small_poly(max_deg: usize) -> impl Strategy<Value = XPoly> {
    (
        prop::collection::vec(-3i64..=3, 1..=max_deg + 1),
        prop::bool::weighted(0.2),
    )
        .prop_map(|(c, with_a)| {
            let p = XPoly::from_ints(&c);
            if with_a {
                p.scale(&param_a())
            } else {
                p
            }
        })
}

fn linear_power(root: i64, e: u32) -> XPoly {
    let f = XPoly::from_ints(&[-root, 1]);
    (0..e).fold(XPoly::one(), |acc, _| &acc * &f)
}

/// `p / (x − r)^e` with `e ≤ 2`.
pub fn small_xrat() -> impl Strategy<Value = XRat> {
    (small_poly(2), -2i64..=2, 0u32..=2)
        .prop_map(|(p, r, e)| XRat::from_parts(p, linear_power(r, e)).expect("nonzero denominator"))
}

pub fn small_op(max_order: usize) -> impl Strategy<Value = DiffOp> {
    prop::collection::vec(small_xrat(), 1..=max_order + 1).prop_map(DiffOp::from_coeffs)
}

/// Applies `Σ c_i D^i` to `f` term by term.
pub fn oracle_apply(op: &DiffOp, f: &XRat) -> XRat {
    let mut acc = XRat::zero();
    let mut deriv = f.clone();
    for c in op.coeffs() {
        acc = &acc + &(c * &deriv);
        deriv = deriv.derivative();
    }
    acc.reduced()
}

fn monomial(m: usize) -> XRat {
    XRat::from_poly(XPoly::monomial(ParamScalar::one(), m))
}

/// Operators of order ≤ r agree iff they agree on `1, x, …, x^r`.
pub fn oracle_equal(a: &DiffOp, b: &DiffOp) -> bool {
    let r = a.order().unwrap_or(0).max(b.order().unwrap_or(0));
    (0..=r).all(|m| oracle_apply(a, &monomial(m)) == oracle_apply(b, &monomial(m)))
}

pub fn jacobi(a: &DiffOp, b: &DiffOp, c: &DiffOp) -> bool {
    let t1 = a.commutator(&b.commutator(c));
    let t2 = b.commutator(&c.commutator(a));
    let t3 = c.commutator(&a.commutator(b));
    (&(&t1 + &t2) + &t3).is_zero()
}

/// `[A, BC] = [A, B]C + B[A, C]`.
pub fn derivation(a: &DiffOp, b: &DiffOp, c: &DiffOp) -> bool {
    let lhs = a.commutator(&(b * c));
    let rhs = &(&a.commutator(b) * c) + &(b * &a.commutator(c));
    lhs == rhs
}

pub fn bilinear_antisymmetric(a: &DiffOp, b: &DiffOp, c: &DiffOp, lambda: &XRat) -> bool {
    let scaled = DiffOp::mul_by(lambda.clone());
    let combo = &b.clone() + &(&scaled * c);
    let lhs = a.commutator(&combo);
    let rhs = &a.commutator(b) + &a.commutator(&(&scaled * c));
    lhs == rhs && a.commutator(b) == -b.commutator(a)
}

/// Composition and equality agree with the monomial oracle.
pub fn monomial_oracle(a: &DiffOp, b: &DiffOp) -> bool {
    let ab = a * b;
    let r = ab
        .order()
        .unwrap_or(0)
        .max(a.order().unwrap_or(0) + b.order().unwrap_or(0));
    let composes = (0..=r).all(|m| {
        oracle_apply(&ab, &monomial(m)) == oracle_apply(a, &oracle_apply(b, &monomial(m)))
    });
    let equality = (a == b) == oracle_equal(a, b) && (ab == a * b) == oracle_equal(&ab, &(a * b));
    composes && equality
}

pub fn associative(a: &DiffOp, b: &DiffOp, c: &DiffOp) -> bool {
    &(a * b) * c == a * &(b * c) && a * &(b + c) == &(a * b) + &(a * c)
}

/// Seed `Π (x − r_i)^{e_i} exp(q)` together with a potential for which it
/// is an eigenfunction with eigenvalue `λ`.
pub fn seeded_operator() -> impl Strategy<Value = (DiffOp, QuasiRat, ParamScalar)> {
    (
        prop::collection::vec((-3i64..=3, prop::sample::select(vec![-1i64, 1, 2])), 0..=2),
        prop::collection::vec(-2i64..=2, 0..=3),
        -4i64..=4,
    )
        .prop_map(|(factors, q, lambda)| {
            let mut seed = QuasiRat::exp(XPoly::from_ints(&q));
            for (r, e) in factors {
                seed = seed.mul(&QuasiRat::power(
                    XPoly::from_ints(&[-r, 1]),
                    ParamScalar::int(e),
                ));
            }
            let w = seed.log_derivative().expect("nonzero factors");
            let v = &(&w.derivative() + &(&w * &w)) + &XRat::int(lambda);
            (
                DiffOp::schrodinger(v.reduced()),
                seed,
                ParamScalar::int(lambda),
            )
        })
}

pub fn darboux_intertwines(l: &DiffOp, seed: &QuasiRat, lambda: &ParamScalar) -> bool {
    match darboux_step(l, seed) {
        Ok(step) => &step.eigenvalue == lambda && intertwine_check(l, &step.operator(), seed),
        Err(_) => false,
    }
}

pub fn small_matrix() -> impl Strategy<Value = Vec<Vec<ParamScalar>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(rows, cols)| {
        prop::collection::vec(
            prop::collection::vec(
                (-2i64..=2, prop::bool::weighted(0.25)).prop_map(|(c, with_a)| {
                    let s = ParamScalar::int(c);
                    if with_a {
                        &s * &(&param_a() + &ParamScalar::one())
                    } else {
                        s
                    }
                }),
                cols,
            ),
            rows,
        )
    })
}

/// Rank over the field of rational functions in the parameters.
pub fn oracle_rank(matrix: &[Vec<ParamScalar>]) -> usize {
    let mut m: Vec<Vec<ParamScalar>> = matrix.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].checked_div(&m[rank][col]).unwrap();
                let pivot_row = m[rank].clone();
                for (entry, p) in m[r].iter_mut().zip(&pivot_row) {
                    *entry = &*entry - &(&f * p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Every basis vector is annihilated, and the basis has full rank of size
/// `cols − rank`.
pub fn nullspace_back_substitutes(matrix: &[Vec<ParamScalar>]) -> bool {
    let cols = matrix[0].len();
    let ns = nullspace(matrix, cols);
    let annihilated = ns.basis.iter().all(|v| {
        matrix.iter().all(|row| {
            row.iter()
                .zip(v)
                .fold(ParamScalar::zero(), |acc, (a, b)| &acc + &(a * b))
                .is_zero()
        })
    });
    let dim_ok = ns.basis.len() == cols - oracle_rank(matrix);
    let independent = ns.basis.is_empty() || oracle_rank(&ns.basis) == ns.basis.len();
    annihilated && dim_ok && independent
}
