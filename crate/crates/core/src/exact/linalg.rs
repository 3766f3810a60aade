//! Fraction-free elimination and exact nullspaces over the parametric field.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::mpoly::{MPoly, Monomial};
use super::param::Param;
use super::rat::Rat;
use super::scalar::ParamScalar;

/// Right nullspace of a matrix together with the pivots that were assumed
/// nonzero while eliminating (generic nonvanishing conditions).
#[derive(Clone, Debug, Default)]
pub struct Nullspace {
    pub basis: Vec<Vec<ParamScalar>>,
    pub assumptions: Vec<MPoly>,
}

/// Conditions equivalent to `p ≠ 0`: each parameter of the common monomial
/// factor, plus the remaining cofactor scaled to integer content one.
fn nonvanishing_factors(p: &MPoly) -> Vec<MPoly> {
    let mut out = Vec::new();
    let mut rest = p.clone();
    for v in p.params() {
        let e = p.terms().map(|(m, _)| m.exponent(v)).min().unwrap_or(0);
        if e > 0 {
            if !v.is_algebraic() {
                out.push(MPoly::var(v));
            }
            let m = (0..e).fold(Monomial::one(), |acc, _| acc.mul(&Monomial::var(v)).0);
            rest = MPoly::from_terms(
                rest.terms()
                    .map(|(t, c)| (t.checked_div(&m).expect("common factor"), c.clone())),
            );
        }
    }
    if !rest.is_constant() {
        let mut c = rest.content();
        if rest.leading_is_negative() {
            c = -c;
        }
        out.push(rest.scale(&c.recip()));
    }
    out
}

/// Exact right nullspace of `matrix` (`rows x cols`).
///
/// Tall parametric systems are first thinned to a row subset that is
/// independent at a random rational specialization; the resulting basis is
/// then checked against every row exactly, and the full matrix is eliminated
/// if that check fails. The specialization only orders work.
pub fn nullspace(matrix: &[Vec<ParamScalar>], cols: usize) -> Nullspace {
    assert!(
        matrix.iter().all(|r| r.len() == cols),
        "matrix must be rectangular"
    );
    let rows: Vec<Vec<MPoly>> = matrix
        .iter()
        .map(|r| clear_row(r))
        .filter(|r| r.iter().any(|e| !e.is_zero()))
        .collect();
    if rows.len() > cols {
        if let Some(subset) = independent_subset(&rows, cols) {
            let picked: Vec<Vec<MPoly>> = subset.iter().map(|&i| rows[i].clone()).collect();
            let ns = eliminate(picked, cols);
            let rest_ok = rows
                .iter()
                .all(|row| ns.basis.iter().all(|v| dot(row, v).is_zero()));
            if rest_ok {
                return ns;
            }
        }
    }
    eliminate(rows, cols)
}

fn dot(row: &[MPoly], v: &[ParamScalar]) -> ParamScalar {
    let mut acc = ParamScalar::zero();
    for (a, b) in row.iter().zip(v) {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        acc = &acc + &(&ParamScalar::from_poly(a.clone()) * b);
    }
    acc
}

/// Multiplies a row by a common multiple of its denominators.
fn clear_row(row: &[ParamScalar]) -> Vec<MPoly> {
    let mut l = MPoly::one();
    for e in row {
        let d = e.den();
        if d.is_one() || l.div_exact(d).is_some() {
            continue;
        }
        if d.div_exact(&l).is_some() {
            l = d.clone();
        } else {
            l = &l * d;
        }
    }
    row.iter()
        .map(|e| {
            if e.is_zero() {
                MPoly::zero()
            } else {
                let q = l.div_exact(e.den()).expect("common multiple");
                e.num() * &q
            }
        })
        .collect()
}

fn complexity(p: &MPoly) -> (usize, u32) {
    (p.len(), p.total_degree())
}

fn independent_subset(rows: &[Vec<MPoly>], cols: usize) -> Option<Vec<usize>> {
    let params: BTreeSet<Param> = rows.iter().flatten().flat_map(|e| e.params()).collect();
    if params.iter().any(|p| p.is_algebraic()) {
        return None;
    }
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&i| rows[i].iter().map(|e| e.len()).sum::<usize>());
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_edad);
    let values: HashMap<Param, Rat> = params
        .iter()
        .map(|&p| {
            let n: i64 = rng.gen_range(2..1000);
            let d: i64 = rng.gen_range(1..50);
            (p, Rat::new(if rng.gen_bool(0.5) { n } else { -n }, d))
        })
        .collect();
    let mut basis: Vec<(usize, Vec<Rat>)> = Vec::new();
    let mut picked = Vec::new();
    for i in order {
        let mut v: Vec<Rat> = rows[i]
            .iter()
            .map(|e| {
                e.specialize(&values)
                    .constant_value()
                    .expect("all parameters specialized")
            })
            .collect();
        for (pc, b) in &basis {
            if v[*pc].is_zero() {
                continue;
            }
            let f = &v[*pc] / &b[*pc];
            for (x, y) in v.iter_mut().zip(b) {
                *x = &*x - &(&f * y);
            }
        }
        if let Some(pc) = v.iter().position(|x| !x.is_zero()) {
            basis.push((pc, v));
            picked.push(i);
            if basis.len() == cols {
                break;
            }
        }
    }
    Some(picked)
}

/// Bareiss elimination to echelon form followed by back substitution.
fn eliminate(mut rows: Vec<Vec<MPoly>>, cols: usize) -> Nullspace {
    let mut assumptions: Vec<MPoly> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = MPoly::one();
    let mut exact = true;
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(best) = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| complexity(&rows[i][c]))
        else {
            continue;
        };
        rows.swap(r, best);
        let pivot = rows[r][c].clone();
        if !pivot.is_constant() {
            for f in nonvanishing_factors(&pivot) {
                if !assumptions.contains(&f) {
                    assumptions.push(f);
                }
            }
        }
        let (top, rest) = rows.split_at_mut(r + 1);
        let prow = &top[r];
        for row in rest.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..cols {
                let mut v = &pivot * &row[j];
                if !factor.is_zero() && !prow[j].is_zero() {
                    v = &v - &(&factor * &prow[j]);
                }
                if exact && !prev.is_one() {
                    match v.div_exact(&prev) {
                        Some(q) => v = q,
                        None => exact = false,
                    }
                }
                row[j] = v;
            }
            row[c] = MPoly::zero();
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }

    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![ParamScalar::zero(); cols];
        v[f] = ParamScalar::one();
        for (i, &pc) in pivots.iter().enumerate().rev() {
            let mut s = ParamScalar::zero();
            for j in pc + 1..cols {
                if !rows[i][j].is_zero() && !v[j].is_zero() {
                    s = &s + &(&ParamScalar::from_poly(rows[i][j].clone()) * &v[j]);
                }
            }
            if !s.is_zero() {
                let p = ParamScalar::from_poly(rows[i][pc].clone());
                v[pc] = -(&s / &p);
            }
        }
        basis.push(v);
    }
    Nullspace { basis, assumptions }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> ParamScalar {
        ParamScalar::int(n)
    }

    fn check(m: &[Vec<ParamScalar>], ns: &Nullspace) {
        for v in &ns.basis {
            for row in m {
                let mut acc = ParamScalar::zero();
                for (a, b) in row.iter().zip(v) {
                    acc = &acc + &(a * b);
                }
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn identity_has_trivial_nullspace() {
        let m = vec![vec![s(1), s(0)], vec![s(0), s(1)]];
        assert!(nullspace(&m, 2).basis.is_empty());
    }

    #[test]
    fn rank_one_integer_matrix() {
        let m = vec![vec![s(1), s(4)], vec![s(2), s(8)]];
        let ns = nullspace(&m, 2);
        assert_eq!(ns.basis.len(), 1);
        let v = &ns.basis[0];
        // proportional to [4, -1]
        assert_eq!(&v[0] * &s(-1), &v[1] * &s(4));
        check(&m, &ns);
    }

    #[test]
    fn parametric_pivot_is_recorded() {
        let k = ParamScalar::param(Param::of("k"));
        let m = vec![vec![k.clone(), &k * &k]];
        let ns = nullspace(&m, 2);
        assert_eq!(ns.basis.len(), 1);
        let v = &ns.basis[0];
        assert_eq!(v[0], -&k);
        assert_eq!(v[1], s(1));
        assert_eq!(ns.assumptions, vec![MPoly::var(Param::of("k"))]);
    }

    #[test]
    fn tall_parametric_system_uses_subset() {
        let k = ParamScalar::param(Param::of("k"));
        // rows are multiples of [1, -k, 0] and [0, 1, -1]
        let mut m = Vec::new();
        for i in 1..6 {
            m.push(vec![s(i), &s(-i) * &k, s(0)]);
            m.push(vec![s(0), &k + &s(i), &(&k + &s(i)) * &s(-1)]);
        }
        let ns = nullspace(&m, 3);
        assert_eq!(ns.basis.len(), 1);
        check(&m, &ns);
    }

    #[test]
    fn empty_matrix() {
        let ns = nullspace(&[], 2);
        assert_eq!(ns.basis.len(), 2);
    }
}
