use std::collections::BTreeMap;

use bispec_core::adcond::{
    ad_power, fit_weights, heisenberg_series, hermite_new_weights, reach_weights, solve_theta,
    SpectrumStep, WeightVector,
};
use bispec_core::ansatz::generate_system;
use bispec_core::darboux::{darboux_chain, intertwine_check};
use bispec_core::diffop::DiffOp;
use bispec_core::exact::{MPoly, ParamScalar};
use bispec_core::expr::{
    parse_operator_or_potential, parse_quasi, parse_scalar, parse_value, ParseContext,
    Value as Expr,
};
use bispec_core::families::{catalog, check_entry, lookup, CatalogEntry, Expect, Origin};
use bispec_core::Error;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{parse_weights, CatalogAction, Cli, Command, Report, Source, Verdict};

pub(crate) fn dispatch(cli: Cli, mut report: Report) -> Report {
    let ctx = match ParseContext::new(&cli.params) {
        Ok(c) => c,
        Err(e) => return report.failed(&e),
    };
    if !cli.params.is_empty() {
        report.input("params", cli.params.clone());
    }
    let outcome = match cli.command {
        Command::Verify { id, all } => verify(&mut report, id, all),
        Command::Ad { source, j } => ad(&mut report, &ctx, &source, j),
        Command::FitWeights { source, orders } => fit(&mut report, &ctx, &source, &orders),
        Command::SolveTheta {
            l,
            catalog,
            weights,
            deg,
            keep_constant,
        } => solve(&mut report, &ctx, l, catalog, weights, deg, keep_constant),
        Command::ReachWeights { n, step } => reach(&mut report, &ctx, n, &step),
        Command::HermiteNewWeights { k } => {
            report.input("k", k);
            report.results = weights_json(&hermite_new_weights(k));
            Ok(())
        }
        Command::Darboux { l, seed } => darboux(&mut report, &ctx, &l, &seed),
        Command::GenSystem {
            weights,
            forced_only,
        } => gen_system(&mut report, &ctx, &weights, !forced_only),
        Command::Heisenberg {
            catalog_id,
            l,
            theta,
            order,
            omega2,
        } => {
            let source = Source {
                l,
                theta,
                catalog: catalog_id,
            };
            heisenberg(&mut report, &ctx, &source, order, omega2.as_deref())
        }
        Command::Catalog {
            action: CatalogAction::List,
        } => {
            report.results = Value::Array(catalog().iter().map(entry_json).collect());
            Ok(())
        }
    };
    match outcome {
        Ok(()) => report.finish(),
        Err(e) => report.failed(&e),
    }
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(ToString::to_string).collect()
}

fn weights_json(w: &WeightVector) -> Value {
    let map: BTreeMap<String, String> = w
        .iter()
        .map(|(j, c)| (j.to_string(), c.to_string()))
        .collect();
    json!({ "label": w.label(), "text": w.to_string(), "weights": map })
}

fn origin_text(o: &Origin) -> String {
    match o {
        Origin::Printed => "printed".into(),
        Origin::Derived => "derived".into(),
        Origin::Corrected { of } => format!("corrects {of}"),
    }
}

fn entry_json(e: &CatalogEntry) -> Value {
    let kind = if e.is_scalar() { "scalar" } else { "matrix" };
    json!({
        "id": e.id,
        "kind": kind,
        "description": e.description,
        "provenance": e.provenance,
        "claim": e.claim(),
        "origin": origin_text(&e.origin),
        "expect": match e.expect { Expect::Holds => "holds", Expect::Fails => "fails" },
        "parameters": strings(&e.parameters),
        "note": e.note,
    })
}

fn verdict_for(e: &CatalogEntry) -> Result<(Verdict, Value), Error> {
    let o = check_entry(e)?;
    let mut detail = json!({ "identity_holds": o.identity_holds });
    if let Some(side) = o.side {
        detail["side"] = json!(side.name());
    }
    if let Some(c) = &o.convention {
        let side_json = |side| {
            let s = c.outcome(side);
            json!({ "holds": s.report.holds, "admissible_dim": s.admissible_dim })
        };
        detail["convention"] = json!({
            "left": side_json(bispec_core::matrixop::ActionSide::Left),
            "right": side_json(bispec_core::matrixop::ActionSide::Right),
            "preferred": c.preferred.map(|s| s.name()),
        });
    }
    let verdict = Verdict {
        claim: format!("{}: {}", e.id, e.claim()),
        holds: o.claim_confirmed,
        residual: if o.identity_holds {
            String::new()
        } else {
            o.residual
        },
        assumptions: strings(&o.assumptions),
    };
    Ok((verdict, detail))
}

fn verify(report: &mut Report, id: Option<String>, all: bool) -> Result<(), Error> {
    let entries: Vec<&CatalogEntry> = match (id, all) {
        (_, true) => {
            report.input("all", true);
            catalog().iter().collect()
        }
        (Some(id), false) => {
            report.input("id", id.clone());
            vec![lookup(&id)?]
        }
        (None, false) => return Err(Error::Invalid("give a catalog id or --all".into())),
    };
    type Checked<'a> = (&'a CatalogEntry, Result<(Verdict, Value), Error>);
    let mut checked: Vec<Checked> = entries
        .into_par_iter()
        .map(|e| (e, verdict_for(e)))
        .collect();
    checked.sort_by(|a, b| a.0.id.cmp(&b.0.id));
    let mut details = serde_json::Map::new();
    for (e, r) in checked {
        let (verdict, detail) = r?;
        report
            .provenance
            .push(format!("{}: {}", e.id, e.provenance));
        let mut detail = detail;
        detail["entry"] = entry_json(e);
        details.insert(e.id.clone(), detail);
        report.verdicts.push(verdict);
    }
    report.results = Value::Object(details);
    Ok(())
}

/// Resolves `L` and `Θ` from flags or a catalog entry.
fn resolve(
    report: &mut Report,
    ctx: &ParseContext,
    source: &Source,
) -> Result<(DiffOp, DiffOp), Error> {
    if let Some(id) = &source.catalog {
        report.input("catalog", id.clone());
        let e = lookup(id)?;
        report
            .provenance
            .push(format!("{}: {}", e.id, e.provenance));
        let (l, theta, _) = e.scalar_parts().ok_or_else(|| {
            Error::Invalid(format!(
                "`{id}` is a matrix entry; scalar commands need a scalar one"
            ))
        })?;
        return Ok((
            l.clone(),
            DiffOp::mul_by(bispec_core::diffop::XRat::from_poly(theta.clone())),
        ));
    }
    let (Some(l), Some(theta)) = (&source.l, &source.theta) else {
        return Err(Error::Invalid("give --L and --theta, or --catalog".into()));
    };
    report.input("L", l.clone());
    report.input("theta", theta.clone());
    let l = parse_operator_or_potential(l, ctx)?;
    let theta = match parse_value(theta, ctx)? {
        Expr::Op(op) => op,
        v => DiffOp::mul_by(v.into_xrat()?),
    };
    Ok((l, theta))
}

fn ad(report: &mut Report, ctx: &ParseContext, source: &Source, j: usize) -> Result<(), Error> {
    let (l, theta) = resolve(report, ctx, source)?;
    report.input("j", j);
    let a = ad_power(&l, &theta, j)?;
    report.results = json!({ "operator": a.to_string(), "order": a.order() });
    Ok(())
}

fn fit(
    report: &mut Report,
    ctx: &ParseContext,
    source: &Source,
    orders: &[usize],
) -> Result<(), Error> {
    let (l, theta) = resolve(report, ctx, source)?;
    report.input("orders", orders.to_vec());
    let fitted = fit_weights(&l, &theta, orders)?;
    report.results = json!({
        "basis": fitted.basis.iter().map(weights_json).collect::<Vec<_>>(),
        "dimension": fitted.basis.len(),
        "assumptions": strings(&fitted.assumptions),
    });
    if let Some(id) = &source.catalog {
        let e = lookup(id)?;
        if let Some((_, _, stored)) = e.scalar_parts() {
            if stored.iter().all(|(j, _)| orders.contains(&j)) {
                let found = fitted.basis.len() == 1 && fitted.basis[0] == stored.monic();
                let residual = if found {
                    String::new()
                } else {
                    format!(
                        "fitted span: {}",
                        fitted
                            .basis
                            .iter()
                            .map(ToString::to_string)
                            .collect::<Vec<_>>()
                            .join("; ")
                    )
                };
                report.verdicts.push(Verdict {
                    claim: format!("{id}: stored weights {stored} are the unique fit"),
                    holds: found,
                    residual,
                    assumptions: strings(&fitted.assumptions),
                });
            }
        }
    }
    Ok(())
}

fn solve(
    report: &mut Report,
    ctx: &ParseContext,
    l: Option<String>,
    catalog_id: Option<String>,
    weights: Option<String>,
    deg: usize,
    keep_constant: bool,
) -> Result<(), Error> {
    report.input("deg", deg);
    report.input("keep_constant", keep_constant);
    let (op, stored) = match (&l, &catalog_id) {
        (Some(l), None) => {
            report.input("L", l.clone());
            (parse_operator_or_potential(l, ctx)?, None)
        }
        (None, Some(id)) => {
            report.input("catalog", id.clone());
            let e = lookup(id)?;
            report
                .provenance
                .push(format!("{}: {}", e.id, e.provenance));
            let (op, _, w) = e
                .scalar_parts()
                .ok_or_else(|| Error::Invalid(format!("`{id}` is a matrix entry")))?;
            (op.clone(), Some(w.clone()))
        }
        _ => {
            return Err(Error::Invalid(
                "give exactly one of --L and --catalog".into(),
            ))
        }
    };
    let w = match (weights, stored) {
        (Some(text), _) => {
            report.input("weights", text.clone());
            parse_weights(&text, ctx)?
        }
        (None, Some(w)) => w,
        (None, None) => {
            return Err(Error::Invalid(
                "--weights is required without --catalog".into(),
            ))
        }
    };
    let sols = solve_theta(&op, &w, deg, !keep_constant)?;
    report.results = json!({
        "weights": weights_json(&w),
        "basis": strings(&sols.basis),
        "dimension": sols.basis.len(),
        "assumptions": strings(&sols.assumptions),
    });
    Ok(())
}

fn reach(report: &mut Report, ctx: &ParseContext, n: usize, step: &str) -> Result<(), Error> {
    report.input("n", n);
    report.input("step", step.to_string());
    let s = parse_scalar(step, ctx)?
        .as_rat()
        .ok_or_else(|| Error::Invalid(format!("step `{step}` must be a rational number")))?;
    report.results = weights_json(&reach_weights(n, &SpectrumStep::new(s)?));
    Ok(())
}

fn darboux(
    report: &mut Report,
    ctx: &ParseContext,
    l: &str,
    seeds: &[String],
) -> Result<(), Error> {
    report.input("L", l.to_string());
    report.input("seed", seeds.to_vec());
    let op = parse_operator_or_potential(l, ctx)?;
    let seeds = seeds
        .iter()
        .map(|s| parse_quasi(s, ctx))
        .collect::<Result<Vec<_>, _>>()?;
    let steps = match darboux_chain(&op, &seeds) {
        Ok(s) => s,
        Err(Error::ChainStep { index, source }) => {
            if let Error::NotEigenfunction { residual } = *source {
                report.verdicts.push(Verdict {
                    claim: format!("seed {index} is an eigenfunction"),
                    holds: false,
                    residual,
                    assumptions: Vec::new(),
                });
                return Ok(());
            }
            return Err(Error::ChainStep { index, source });
        }
        Err(e) => return Err(e),
    };
    let mut current = op;
    let mut out = Vec::new();
    for (i, step) in steps.iter().enumerate() {
        let next = step.operator();
        report.verdicts.push(Verdict {
            claim: format!("step {i}: (D - psi'/psi) intertwines the operators"),
            holds: intertwine_check(&current, &next, &step.seed),
            residual: String::new(),
            assumptions: Vec::new(),
        });
        out.push(json!({
            "seed": step.seed.to_string(),
            "eigenvalue": step.eigenvalue.to_string(),
            "potential": step.output_v.to_string(),
        }));
        current = next;
    }
    report.results = json!({ "steps": out });
    Ok(())
}

fn gen_system(
    report: &mut Report,
    ctx: &ParseContext,
    weights: &str,
    full: bool,
) -> Result<(), Error> {
    report.input("weights", weights.to_string());
    report.input("full", full);
    let w = parse_weights(weights, ctx)?;
    let sys = generate_system(&w, full)?;
    let forced: BTreeMap<String, String> = sys
        .forced
        .iter()
        .map(|(p, v)| (p.to_string(), v.to_string()))
        .collect();
    let cleared: Vec<Value> = sys
        .cleared
        .iter()
        .map(|(j, d)| json!({ "slot": j, "denominator": d.to_string() }))
        .collect();
    report.results = json!({
        "weights": weights_json(&w),
        "unknowns": strings(&sys.unknowns),
        "theta": sys.theta.to_string(),
        "p": sys.p.to_string(),
        "forced": forced,
        "equations": sys.equations.iter().map(MPoly::to_string).collect::<Vec<_>>(),
        "cleared": cleared,
    });
    Ok(())
}

fn heisenberg(
    report: &mut Report,
    ctx: &ParseContext,
    source: &Source,
    order: usize,
    omega2: Option<&str>,
) -> Result<(), Error> {
    let (l, theta) = resolve(report, ctx, source)?;
    report.input("order", order);
    let omega = match omega2 {
        Some(text) => {
            report.input("omega2", text.to_string());
            Some(parse_scalar(text, ctx)?)
        }
        None => None,
    };
    let h = heisenberg_series(&l, &theta, order, omega)?;
    let rel = |v: &[(usize, Option<ParamScalar>)]| -> Vec<Value> {
        v.iter()
            .map(|(j, c)| json!({ "index": j, "factor": c.as_ref().map(ToString::to_string) }))
            .collect()
    };
    report.results = json!({
        "terms": strings(&h.terms),
        "step_relations": rel(&h.step_relations),
        "odd_chain": rel(&h.odd_chain),
        "even_chain": rel(&h.even_chain),
        "omega_squared": h.omega_squared.as_ref().map(ToString::to_string),
        "closed_form": h.closed_form.iter().map(|(i, ok)| json!({ "index": i, "matches": ok })).collect::<Vec<_>>(),
    });
    let mismatches: Vec<String> = h
        .closed_form
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(i, _)| format!("A{i}"))
        .collect();
    report.verdicts.push(Verdict {
        claim: "series equals cosh(wt) A0 + sinh(wt)/w A1".into(),
        holds: h.closed_form_holds(),
        residual: if h.omega_squared.is_none() {
            "A3 is not a multiple of A1".into()
        } else if mismatches.is_empty() {
            String::new()
        } else {
            format!("mismatched terms: {}", mismatches.join(", "))
        },
        assumptions: Vec::new(),
    });
    Ok(())
}
