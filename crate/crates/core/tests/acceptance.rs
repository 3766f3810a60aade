//! Acceptance run: one PASS/FAIL line per criterion, with supporting detail.
//! Exits nonzero when any criterion fails.

mod common;

use std::io::Write;
use std::time::Instant;

use bispec_core::adcond::{
    fit_weights, heisenberg_series, hermite_new_weights, reach_weights, residual, solve_theta,
    verify_condition, SpectrumStep, WeightVector,
};
use bispec_core::ansatz::{generate_system, verify_candidate};
use bispec_core::darboux::{darboux_step, potential_offset};
use bispec_core::diffop::{DiffOp, XPoly, XRat};
use bispec_core::exact::{Param, ParamScalar, Rat};
use bispec_core::expr::{parse_poly, parse_quasi, parse_scalar, parse_xrat, ParseContext};
use bispec_core::families::{
    catalog, check_entry, hermite_poly, lookup, matrix_convention, EntryData, Origin,
};
use bispec_core::matrixop::{verify_matrix_condition, ActionSide, MatCondition, MatDiffOp, XMat};
use proptest::test_runner::{Config, TestCaseError, TestRunner};

type Notes = Vec<String>;
type Criterion = (&'static str, fn(&mut Notes) -> bool);

fn ctx(names: &[&str]) -> ParseContext {
    ParseContext::new(names.iter().copied()).unwrap()
}

fn step(s: i64) -> SpectrumStep {
    SpectrumStep::new(Rat::int(s)).unwrap()
}

fn mul(p: &XPoly) -> DiffOp {
    DiffOp::mul_by(XRat::from_poly(p.clone()))
}

fn scalar(id: &str) -> (DiffOp, XPoly, WeightVector) {
    let (l, t, w) = lookup(id).unwrap().scalar_parts().unwrap();
    (l.clone(), t.clone(), w.clone())
}

fn check(notes: &mut Notes, ok: bool, what: impl Into<String>) -> bool {
    notes.push(format!(
        "{} {}",
        if ok { "ok  " } else { "FAIL" },
        what.into()
    ));
    ok
}

fn reach_weight_formulas(n: &mut Notes) -> bool {
    let cases = [
        (1, 1, vec![(3, 1), (1, -1)]),
        (2, 1, vec![(5, 1), (3, -5), (1, 4)]),
        (1, 2, vec![(3, 1), (1, -4)]),
        (2, 2, vec![(5, 1), (3, -20), (1, 64)]),
    ];
    let mut all = true;
    for (k, s, expected) in cases {
        let got = reach_weights(k, &step(s));
        all &= check(
            n,
            got == WeightVector::from_ints(&expected),
            format!("reach_weights({k},{s}) = {got}"),
        );
    }
    all
}

fn hermite_weight_lists(n: &mut Notes) -> bool {
    let expected: [&[(usize, i64)]; 5] = [
        &[(2, 1), (0, -4)],
        &[(3, 1), (1, -16)],
        &[(4, 1), (2, -40), (0, 144)],
        &[(5, 1), (3, -80), (1, 1024)],
        &[(6, 1), (4, -140), (2, 4144), (0, -14400)],
    ];
    let mut all = true;
    for (k, e) in expected.iter().enumerate() {
        let got = hermite_new_weights(k);
        all &= check(
            n,
            got == WeightVector::from_ints(e),
            format!("k = {k}: {got}"),
        );
    }
    all
}

fn exceptional_hermite_identities(n: &mut Notes) -> bool {
    let mut all = true;
    for k in 0..=4 {
        let id = format!("hermite-exc:k={k}");
        let (l, theta, w) = scalar(&id);
        let r = verify_condition(&l, &mul(&theta), &w).unwrap();
        all &= check(
            n,
            r.holds && theta == hermite_poly(k + 1),
            format!("{id}: {w} = 0 with theta = H_{}", k + 1),
        );
    }
    let (l, theta, w) = scalar("hermite-exc:partition-2-2");
    let r = verify_condition(&l, &mul(&theta), &w).unwrap();
    let expected = parse_poly("4*x^5 + 15*x", &ctx(&[])).unwrap();
    all &= check(
        n,
        r.holds && theta == expected,
        format!("partition (2,2): {w} = 0 with theta = {theta}"),
    );
    all
}

fn negative_controls(n: &mut Notes) -> bool {
    let mut all = true;
    for id in [
        "hermite-exc:k=1:even-control",
        "hermite-exc:k=3:even-control",
    ] {
        let (l, theta, w) = scalar(id);
        let r = verify_condition(&l, &mul(&theta), &w).unwrap();
        let shown: String = r.residual.to_string().chars().take(80).collect();
        all &= check(n, !r.holds, format!("{id}: {w} != 0, residual {shown}"));
    }
    all
}

fn implication(n: &mut Notes) -> bool {
    let (l, theta, w) = scalar("hermite-exc:k=1:reach");
    let holds = verify_condition(&l, &mul(&theta), &w).unwrap().holds;
    let a = check(n, holds, format!("hermite-exc:k=1: {w} = 0"));
    // For any L and theta, A5 - 20A3 + 64A1 = ad^2(R) - 4R with R = A3 - 16A1,
    // so the lower identity forces the higher one.
    let c = ctx(&[]);
    let generic = DiffOp::schrodinger(parse_xrat("x^3 + 1/(x+1)", &c).unwrap());
    let th = mul(&parse_poly("x^2 + x", &c).unwrap());
    let r = residual(&generic, &th, &WeightVector::from_ints(&[(3, 1), (1, -16)])).unwrap();
    let high = residual(&generic, &th, &w).unwrap();
    let ad2 = generic.commutator(&generic.commutator(&r));
    let combo = &ad2 - &r.scale_scalar(&ParamScalar::int(4));
    let b = check(
        n,
        high == combo && !r.is_zero(),
        "A5-20A3+64A1 = ad_L^2(R) - 4R for a generic L, R = A3-16A1",
    );
    a && b
}

fn laguerre_darboux(n: &mut Notes) -> bool {
    let (l0, _, _) = scalar("laguerre-step:0");
    let (l1, _, _) = scalar("laguerre-step:1");
    let seed = parse_quasi("x^(-(k^2+2)/4)*(x^2-k^2)*exp(x^2/8)", &ctx(&["k"])).unwrap();
    let s = darboux_step(&l0, &seed).unwrap();
    let v1 = l1.potential().unwrap();
    let same_derivative = s.output_v.derivative() == v1.derivative();
    let offset = potential_offset(&s.output_v, &v1)
        .map(|o| o.to_string())
        .unwrap_or_default();
    check(
        n,
        same_derivative,
        format!(
            "seed eigenvalue {}; output minus printed potential = {offset}",
            s.eigenvalue
        ),
    )
}

fn laguerre_conditions(n: &mut Notes) -> bool {
    let w5 = reach_weights(2, &step(1));
    let (l1, theta1, _) = scalar("laguerre-step:1");
    let sols = solve_theta(&l1, &w5, 4, true).unwrap();
    let verified = !sols.basis.is_empty()
        && sols
            .basis
            .iter()
            .all(|t| verify_condition(&l1, &mul(t), &w5).unwrap().holds);
    let shown: Vec<String> = sols.basis.iter().map(ToString::to_string).collect();
    let a = check(
        n,
        verified && sols.basis[0].proportional_to(&theta1).is_some(),
        format!("step 1: theta = {}", shown.join("; ")),
    );

    let (l2, theta2, printed2) = scalar("laguerre-step:2");
    let fitted = fit_weights(&l2, &mul(&theta2), &[7, 5, 3, 1]).unwrap();
    let product = reach_weights(3, &step(1));
    let determined = fitted.basis.len() == 1 && fitted.basis[0] == product;
    let printed_fails = !verify_condition(&l2, &mul(&theta2), &printed2)
        .unwrap()
        .holds;
    let printed_no_theta = solve_theta(&l2, &printed2, 6, true)
        .unwrap()
        .basis
        .is_empty();
    let b = check(
        n,
        determined && printed_fails && printed_no_theta,
        format!(
            "step 2: fitted weights {} (product formula); printed A1 weight -34 from the displayed identity fails and admits no theta of degree <= 6",
            fitted.basis.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
        ),
    );

    let (l3, theta3, w3) = scalar("laguerre-step:3");
    let printed = verify_condition(&l3, &mul(&theta3), &w3).unwrap().holds;
    let c = check(
        n,
        printed,
        format!("step 3 as printed: {w3} = 0 with theta = {theta3}"),
    );
    let k3 = std::collections::HashMap::from([(Param::of("k"), Rat::int(3))]);
    let none = solve_theta(&l3.specialize(&k3).unwrap(), &w3, 8, true)
        .unwrap()
        .basis
        .is_empty();
    n.push(format!(
        "     step 3 as printed at k = 3: {}",
        if none {
            "no theta of degree <= 8 exists"
        } else {
            "a theta exists"
        }
    ));
    let (lc, thetac, wc) = scalar("laguerre-step:3:corrected");
    let fixed = verify_condition(&lc, &mul(&thetac), &wc).unwrap().holds;
    n.push(format!(
        "     step 3 with tau constant -k^6 in place of -k: identity {}",
        if fixed { "holds symbolically" } else { "fails" }
    ));
    a && b && c
}

fn ansatz_solutions(n: &mut Notes) -> bool {
    let mut all = true;
    for e in catalog().iter().filter(|e| e.id.starts_with("ansatz:")) {
        let EntryData::Scalar {
            operator,
            theta,
            weights,
            ..
        } = &e.data
        else {
            continue;
        };
        let r = verify_candidate(weights, theta, &operator.potential().unwrap()).unwrap();
        match &e.origin {
            Origin::Printed => all &= check(n, r.holds, e.id.clone()),
            _ => n.push(format!(
                "     {} ({}): {}",
                e.id,
                if r.holds { "holds" } else { "fails" },
                e.note.clone().unwrap_or_default()
            )),
        }
    }
    let c = ctx(&["a1", "a2", "a3", "a4"]);
    let forced = |w: &[(usize, i64)], expected: &[(&str, &str)]| {
        let sys = generate_system(&WeightVector::from_ints(w), false).unwrap();
        expected.iter().all(|(p, v)| {
            sys.forced
                .iter()
                .any(|(q, f)| q.to_string() == *p && *f == parse_scalar(v, &c).unwrap())
        })
    };
    all &= check(
        n,
        forced(
            &[(5, 1), (3, -5), (1, 4)],
            &[("c6", "a4/12"), ("c5", "a3/8")],
        ),
        "A5-5A3+4A1: c6 = a4/12, c5 = a3/8",
    );
    all &= check(
        n,
        forced(
            &[(4, 1), (2, -40), (0, 144)],
            &[("c5", "a3"), ("c4", "5*a2/3")],
        ),
        "A4-40A2+144A0: c5 = a3, c4 = 5/3*a2",
    );
    all
}

fn matrix_conditions(n: &mut Notes) -> bool {
    let side = matrix_convention().unwrap();
    n.push(format!("     probe-selected convention: {side} action"));
    let mut all = true;
    let (op, cond) = match &lookup("matrix:hermite:1").unwrap().data {
        EntryData::Matrix {
            operator,
            condition,
        } => (operator.clone().with_side(side), condition.clone()),
        _ => unreachable!(),
    };
    let theta = cond.theta().clone().with_side(side);
    for (label, m) in [("M = E11", [[1, 0], [0, 0]]), ("M = E12", [[0, 1], [0, 0]])] {
        let m = XMat::constant(
            m.iter()
                .map(|r| r.iter().map(|&v| ParamScalar::int(v)).collect())
                .collect(),
        )
        .unwrap();
        let c = MatCondition::scalar_weights(
            &[(2, ParamScalar::one()), (0, ParamScalar::int(-4))],
            &m,
            theta.clone(),
        )
        .unwrap();
        all &= check(
            n,
            verify_matrix_condition(&op, &c).unwrap().holds,
            format!("matrix:hermite:1 with {label}"),
        );
    }
    for id in [
        "matrix:hermite:1",
        "matrix:laguerre:1a",
        "matrix:laguerre:1b",
        "matrix:laguerre:2",
    ] {
        let o = check_entry(lookup(id).unwrap()).unwrap();
        all &= check(n, o.identity_holds, format!("{id} as printed"));
        if let Ok(fixed) = lookup(&format!("{id}:corrected")) {
            let f = check_entry(fixed).unwrap();
            n.push(format!(
                "     {}: {}",
                fixed.id,
                if f.identity_holds { "holds" } else { "fails" }
            ));
        }
    }
    let mut embedded = 0;
    let mut agree = true;
    for e in catalog()
        .iter()
        .filter(|e| e.is_scalar() && e.id != "laguerre-step:3")
    {
        let (l, theta, w) = e.scalar_parts().unwrap();
        let scalar_holds = verify_condition(l, &mul(theta), w).unwrap().holds;
        let pairs: Vec<(usize, ParamScalar)> = w.iter().map(|(j, c)| (j, c.clone())).collect();
        for s in [ActionSide::Left, ActionSide::Right] {
            let lm = MatDiffOp::from_scalar(l, s);
            let tm = MatDiffOp::from_scalar(&mul(theta), s);
            let c = MatCondition::scalar_weights(&pairs, &XMat::identity(1), tm).unwrap();
            agree &= verify_matrix_condition(&lm, &c).unwrap().holds == scalar_holds;
        }
        embedded += 1;
    }
    all &= check(n, agree, format!("1x1 embedding agrees with the scalar verdict on {embedded} entries, both sides (laguerre-step:3 as printed is checked in criterion 7 only)"));
    all
}

fn heisenberg(n: &mut Notes) -> bool {
    let (l, theta, _) = scalar("hermite:oscillator");
    let h = heisenberg_series(&l, &mul(&theta), 9, None).unwrap();
    let a1 = DiffOp::d().scale_scalar(&ParamScalar::int(-2));
    let osc =
        h.closed_form_holds() && h.omega_squared == Some(ParamScalar::int(4)) && h.terms[1] == a1;
    let a = check(
        n,
        osc,
        "oscillator: A_i match cosh(2t) x - sinh(2t) D through order 9",
    );

    let (l, theta, _) = scalar("hermite-exc:k=1");
    let h = heisenberg_series(&l, &mul(&theta), 9, None).unwrap();
    let odd = h
        .odd_chain
        .iter()
        .all(|(i, c)| *c == Some(ParamScalar::int(16i64.pow((*i as u32 - 1) / 2))));
    let b = check(
        n,
        odd,
        "exceptional k=1: A_{2i+1} = 16^i A1 through order 9",
    );
    let even = h
        .even_chain
        .iter()
        .all(|(i, c)| *c == Some(ParamScalar::int(16i64.pow(*i as u32 / 2 - 1))));
    let c = check(
        n,
        even,
        "exceptional k=1: A_{2i} = 16^(i-1) A2 through order 8",
    );
    let order2 = h
        .closed_form
        .iter()
        .find(|(i, _)| *i == 2)
        .map(|(_, ok)| *ok);
    n.push(format!(
        "     cosh(4t) A0 term at order 2: {}",
        match order2 {
            Some(true) => "A2 = 16 A0, matches",
            Some(false) => "A2 != 16 A0, the even part does not follow cosh(4t) A0",
            None => "not computed",
        }
    ));
    a && b && c && order2.is_some()
}

fn properties(n: &mut Notes) -> bool {
    use common::*;
    fn run<S: proptest::strategy::Strategy>(
        n: &mut Notes,
        name: &str,
        strategy: S,
        prop: impl Fn(S::Value) -> bool,
    ) -> bool {
        let mut runner = TestRunner::new(Config {
            cases: 100,
            failure_persistence: None,
            ..Config::default()
        });
        let result = runner.run(&strategy, |v| {
            if prop(v) {
                Ok(())
            } else {
                Err(TestCaseError::fail(name.to_string()))
            }
        });
        check(n, result.is_ok(), format!("{name}: 100 cases"))
    }
    let mut all = true;
    all &= run(
        n,
        "Jacobi identity",
        (small_op(2), small_op(2), small_op(1)),
        |(a, b, c)| jacobi(&a, &b, &c),
    );
    all &= run(
        n,
        "derivation law",
        (small_op(2), small_op(1), small_op(1)),
        |(a, b, c)| derivation(&a, &b, &c),
    );
    all &= run(
        n,
        "bilinearity and antisymmetry",
        (small_op(2), small_op(2), small_op(1), small_xrat()),
        |(a, b, c, s)| bilinear_antisymmetric(&a, &b, &c, &s),
    );
    all &= run(
        n,
        "monomial oracle",
        (small_op(2), small_op(2)),
        |(a, b)| monomial_oracle(&a, &b),
    );
    all &= run(
        n,
        "intertwining of Darboux steps",
        seeded_operator(),
        |(l, s, lam)| darboux_intertwines(&l, &s, &lam),
    );
    all &= run(n, "nullspace back-substitution", small_matrix(), |m| {
        nullspace_back_substitutes(&m)
    });
    all
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("reach weight formulas", reach_weight_formulas),
        (
            "exceptional Hermite weight lists k = 0..4",
            hermite_weight_lists,
        ),
        (
            "exceptional Hermite identities and partition (2,2)",
            exceptional_hermite_identities,
        ),
        ("negative controls", negative_controls),
        (
            "implication to the recursion-length identity for k = 1",
            implication,
        ),
        (
            "Darboux step reproduces the first Laguerre potential",
            laguerre_darboux,
        ),
        ("Laguerre step identities", laguerre_conditions),
        (
            "ansatz solution lists and forced relations",
            ansatz_solutions,
        ),
        (
            "matrix identities under the probed convention",
            matrix_conditions,
        ),
        ("Heisenberg series", heisenberg),
        ("property suites", properties),
    ];
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut notes = Vec::new();
        let ok = f(&mut notes);
        writeln!(
            out,
            "{} criterion {:>2}: {title} ({:.2?})",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed()
        )
        .unwrap();
        for note in notes {
            writeln!(out, "       {note}").unwrap();
        }
        if !ok {
            failed.push(i + 1);
        }
    }
    writeln!(
        out,
        "{} of {} criteria pass",
        criteria.len() - failed.len(),
        criteria.len()
    )
    .unwrap();
    if !failed.is_empty() {
        writeln!(out, "failing criteria: {failed:?}").unwrap();
        std::process::exit(1);
    }
}
