//! Acceptance criteria 1 to 10, one PASS/FAIL line each. Runs without the
//! libtest harness so the report reads as a table; the process fails if
//! any criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::process::ExitCode;

use polydouble::polydg::{
    psi2_asymptotic, psi2_didouble, psi2_eval, psi2_from_polygamma, psi2_integral, psi2_series,
    recurrence_residual, AsymptoticParams, PolyDoubleArg,
};
use polydouble::specfun::Precision;
use polydouble::verify::{
    audit_identities, check_F_cm, check_lemma_I1, check_ratio_bounds, default_requests, lemma_grid,
    ratio_grid, run_check, AuditStatus, CheckReport, FParams, Grid, Relation, Verdict,
};
use polydouble::Method;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const ORDERS: std::ops::RangeInclusive<u32> = 2..=6;
const POINTS: [f64; 6] = [0.3, 0.5, 1.0, 2.0, 5.0, 10.0];

fn prec() -> Precision {
    Precision::default()
}

fn arg(n: u32, x: f64) -> PolyDoubleArg {
    PolyDoubleArg::new(n, x).expect("valid argument")
}

fn series(n: u32, x: f64) -> f64 {
    psi2_series(arg(n, x), prec()).expect("series").to_f64()
}

fn cross_method() -> Outcome {
    let (mut worst_pg, mut worst_int) = (0.0f64, 0.0f64);
    for n in ORDERS {
        for x in POINTS {
            let s = series(n, x);
            let pg = psi2_from_polygamma(arg(n, x), prec())
                .map_err(|e| e.to_string())?
                .to_f64();
            let int = psi2_integral(arg(n, x), 1e-12)
                .map_err(|e| e.to_string())?
                .to_f64();
            worst_pg = worst_pg.max((s - pg).abs());
            worst_int = worst_int.max((s - int).abs());
        }
    }
    let msg = format!("max |series - polygamma| = {worst_pg:.2e} (<= 1e-10), max |series - integral| = {worst_int:.2e} (<= 1e-8)");
    if worst_pg <= 1e-10 && worst_int <= 1e-8 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn anchors() -> Outcome {
    const ZETA3: f64 = 1.202_056_903_159_594_2;
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    let d2 = (series(2, 1.0) + PI * PI / 3.0).abs();
    let d3 = (series(3, 1.0) - 6.0 * ZETA3).abs();
    let psi2 = psi2_didouble(1.0, prec())
        .map_err(|e| e.to_string())?
        .to_f64();
    let d0 = (psi2 - (0.5 - 0.5 * (2.0 * PI).ln() + 1.0 + EULER_GAMMA)).abs();
    let msg = format!("deviations {d2:.1e}, {d3:.1e}, {d0:.1e} (each <= 1e-10)");
    if d2.max(d3).max(d0) <= 1e-10 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn recurrence() -> Outcome {
    let mut worst = 0.0f64;
    for n in ORDERS {
        for x in POINTS {
            let (r, _) = recurrence_residual(arg(n, x), prec()).map_err(|e| e.to_string())?;
            worst = worst.max(r.abs());
        }
    }
    let msg = format!("max residual {worst:.2e} (<= 1e-10)");
    if worst <= 1e-10 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn limit_theorem() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    let mut probe = |n: u32, x: f64, tol: f64| {
        let v = psi2_eval(arg(n, x), Method::Auto, prec())
            .expect("evaluation")
            .to_f64();
        let target =
            if n % 2 == 1 { 1.0 } else { -1.0 } * (1..=n.saturating_sub(2)).product::<u32>() as f64;
        let dev = (v * x.powi(n as i32 - 1) - target).abs();
        let pass = dev <= tol;
        ok &= pass;
        lines.push(format!(
            "n={n} x={x:e}: {dev:.6e} {} {tol:.0e}",
            if pass { "<=" } else { ">" }
        ));
    };
    probe(2, 1e4, 2e-4);
    probe(2, 4e4, 5e-5);
    for n in [3u32, 4] {
        let tol = 2e-4 * (1..=n - 2).product::<u32>() as f64;
        probe(n, 1e4, tol);
        probe(n, 4e4, tol);
    }
    let msg = lines.join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn f_sharpness() -> Outcome {
    let grid = Grid::logarithmic(0.05, 50.0, 200).expect("grid");
    let mut notes = Vec::new();
    for n in [3u32, 4, 5] {
        let base = FParams {
            n,
            omega: 0.0,
            depth: 6,
        };
        let (l, u) = (base.lower_constant(), base.upper_constant());
        for (omega, want) in [(l, "F"), (u, "-F")] {
            let r =
                check_F_cm(FParams { omega, ..base }, &grid, prec()).map_err(|e| e.to_string())?;
            if !r.passed || r.params.get("pattern").and_then(|v| v.as_str()) != Some(want) {
                return Err(format!("n={n} omega={omega}: pattern {want} did not pass"));
            }
        }
        let mid = 0.5 * (l + u);
        let r =
            check_F_cm(FParams { omega: mid, ..base }, &grid, prec()).map_err(|e| e.to_string())?;
        let vf = r.summary.get("violations_F").copied().unwrap_or(0.0);
        let vm = r.summary.get("violations_minus_F").copied().unwrap_or(0.0);
        if r.passed || vf < 1.0 || vm < 1.0 || r.counterexamples.is_empty() {
            return Err(format!(
                "n={n}: gap midpoint {mid} did not break both patterns"
            ));
        }
        notes.push(format!("n={n} midpoint violations F={vf} -F={vm}"));
    }
    Ok(format!("both constants pass, {}", notes.join(", ")))
}

fn ratio_bounds() -> Outcome {
    let grid = ratio_grid();
    let mut notes = Vec::new();
    for n in 3..=6u32 {
        let r = check_ratio_bounds(n, &grid, prec()).map_err(|e| e.to_string())?;
        let lower = (n - 2) as f64 / (n - 1) as f64;
        let upper = n as f64 / (n + 1) as f64;
        let hi = r.summary["ratio_at_hi"];
        let lo = r.summary["ratio_at_lo"];
        if !r.passed || r.inconclusive > 0 {
            return Err(format!(
                "n={n}: bounds not strict ({} counterexamples)",
                r.counterexamples.len()
            ));
        }
        if (hi - lower).abs() > 1e-3 || (lo - upper).abs() > 5e-2 {
            return Err(format!("n={n}: ratio at 1e4 {hi}, at 0.05 {lo}"));
        }
        notes.push(format!("n={n}: {hi:.6}/{lo:.6}"));
    }
    Ok(format!(
        "strict on [0.05, 1e4]; ratio at 1e4 / at 0.05: {}",
        notes.join(", ")
    ))
}

fn lemma() -> Outcome {
    let grid = lemma_grid();
    let mut worst = f64::NEG_INFINITY;
    for n in [3u32, 4] {
        let r = check_lemma_I1(n, &grid, 1e-10).map_err(|e| e.to_string())?;
        if !r.passed || r.inconclusive > 0 || r.witnesses.len() != 103 {
            return Err(format!(
                "n={n}: {} counterexamples, {} inconclusive",
                r.counterexamples.len(),
                r.inconclusive
            ));
        }
        worst = worst.max(r.summary["max_value"]);
    }
    Ok(format!(
        "I1 < 0 beyond quadrature error at 103 points for n = 3, 4; largest value {worst:.4e}"
    ))
}

fn strictly_positive(r: &CheckReport) -> Result<(), String> {
    if !r.passed || r.inconclusive > 0 {
        return Err(format!(
            "{} {:?}: {} counterexamples, {} inconclusive",
            r.check_id,
            r.params.get("n"),
            r.counterexamples.len(),
            r.inconclusive
        ));
    }
    if let Some(w) = r
        .witnesses
        .iter()
        .find(|w| !(w.margin > 0.0) || w.verdict != Verdict::Holds)
    {
        return Err(format!(
            "{}: witness {} at {:?} has margin {}",
            r.check_id, w.label, w.points, w.margin
        ));
    }
    Ok(())
}

fn families() -> Outcome {
    let ids = [
        "turan",
        "subadditivity",
        "G-convexity",
        "cauchy-schwarz",
        "hankel",
    ];
    let mut count = 0;
    let mut midpoints = 0;
    for req in default_requests(polydouble::verify::DEFAULT_SEED) {
        if !ids.contains(&req.id()) {
            continue;
        }
        let r = run_check(&req, prec()).map_err(|e| e.to_string())?;
        strictly_positive(&r)?;
        if r.check_id == "subadditivity" {
            let mid = r.witnesses.last().expect("midpoint witness");
            if mid.relation != Relation::Eq || mid.verdict != Verdict::Holds {
                return Err("subadditivity midpoint not attained".into());
            }
            midpoints += 1;
        }
        count += 1;
    }
    Ok(format!(
        "{count} reports pass with positive margins, {midpoints} midpoint equalities exact"
    ))
}

fn asymptotic_identity() -> Outcome {
    let xs = [1.0, 1.5, 2.0, 3.0, 4.5, 7.0, 10.0, 14.0, 20.0];
    let mut worst = 0.0f64;
    for n in 2..=5 {
        for x in xs {
            for terms in [2, 4, 6] {
                let r = psi2_asymptotic(arg(n, x), AsymptoticParams::with_remainder(terms))
                    .map_err(|e| e.to_string())?
                    .to_f64();
                worst = worst.max((r - series(n, x)).abs());
            }
        }
    }
    let msg = format!("max deviation {worst:.2e} (<= 1e-9)");
    if worst <= 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn audit() -> Outcome {
    let entries = audit_identities(prec()).map_err(|e| e.to_string())?;
    let confirmed = entries
        .iter()
        .filter(|e| e.status == AuditStatus::Confirmed)
        .count();
    let status = |id: &str| {
        entries
            .iter()
            .find(|e| e.identity_id == id)
            .map(|e| e.status)
    };
    let expect_confirmed = [
        "integral-representation",
        "polygamma-relation",
        "zeta-closed-form",
        "recurrence",
        "lagrange-identity",
        "kernel-derivative",
        "asymptotic-closed-terms",
        "asymptotic-identity",
        "hankel-remark-corrected",
    ];
    let expect_discrepancy = [
        "tau-printed",
        "sigma-printed",
        "remainder-sign",
        "psi2-shift-expansion",
        "remark-zeta-identity",
        "remark-polygamma-identity",
        "vigneras-constant",
        "psi2-integral-normalization",
        "hankel-remark-printed",
    ];
    for id in expect_confirmed {
        if status(id) != Some(AuditStatus::Confirmed) {
            return Err(format!("{id} expected confirmed, got {:?}", status(id)));
        }
    }
    for id in expect_discrepancy {
        if status(id) != Some(AuditStatus::Discrepancy) {
            return Err(format!("{id} expected discrepancy, got {:?}", status(id)));
        }
    }
    if entries.len() != expect_confirmed.len() + expect_discrepancy.len() || confirmed < 5 {
        return Err(format!("unexpected ledger size {}", entries.len()));
    }
    for e in entries
        .iter()
        .filter(|e| e.status == AuditStatus::Discrepancy)
    {
        if !(e.max_deviation > 100.0 * e.error) {
            return Err(format!(
                "{}: deviation {} not above 100 x error {}",
                e.identity_id, e.max_deviation, e.error
            ));
        }
    }
    Ok(format!(
        "{confirmed} confirmed, {} discrepancies, each deviation > 100 x error",
        entries.len() - confirmed
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("cross-method agreement", cross_method),
        ("anchor values", anchors),
        ("recurrence residual", recurrence),
        ("limit x^(n-1) psi2^(n)(x)", limit_theorem),
        ("F_n sharpness", f_sharpness),
        ("ratio bounds", ratio_bounds),
        ("I1 negativity", lemma),
        ("Turan, additivity, G, Cauchy-Schwarz, Hankel", families),
        ("asymptotic identity", asymptotic_identity),
        ("identity audit", audit),
    ];
    // honour libtest-style name filters so `cargo test <name>` elsewhere
    // does not rerun this target
    let filters: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    if !filters.is_empty()
        && !filters
            .iter()
            .any(|f| "acceptance".contains(f.as_str()) || f.starts_with("criterion"))
    {
        return ExitCode::SUCCESS;
    }
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag}  {name}: {detail}", i + 1);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
