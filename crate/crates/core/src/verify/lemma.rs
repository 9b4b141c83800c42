//! The auxiliary integral I₁(a;n) = ∫₀¹ [(2n−3)s² − 1]·fₙ(a(1+s))·fₙ(a(1−s)) ds
//! with fₙ(t) = t^{n−1}/(1−e^{−t})², which is negative for every a > 0.

use rayon::prelude::*;

use crate::dd::DoubleDouble;
use crate::error::{domain, Result};
use crate::quadrature::{integrate_finite, IntegrandSpec, QuadratureResult};
use crate::verify::{Approx, CheckReport, Grid, ReportBuilder, Witness};

fn kernel(n: u32, t: f64) -> f64 {
    if t == 0.0 {
        return if n == 3 { 1.0 } else { 0.0 };
    }
    let d = -(-t).exp_m1();
    t.powi(n as i32 - 1) / (d * d)
}

/// I₁(a;n) by adaptive Gauss-Kronrod. The requested tolerance is taken
/// relative to max(1, fₙ(a)²), the size of the integrand at s = 0.
pub fn lemma_i1(n: u32, a: f64, tol: f64) -> Result<QuadratureResult> {
    if n < 3 {
        return Err(domain(format!("the I1 integral needs n >= 3, got {n}")));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(domain(format!("the I1 integral needs a > 0, got {a}")));
    }
    let c = (2 * n - 3) as f64;
    let spec = IntegrandSpec::new(move |s: f64| {
        (c * s * s - 1.0) * kernel(n, a * (1.0 + s)) * kernel(n, a * (1.0 - s))
    });
    let scale = kernel(n, a).powi(2).max(1.0);
    integrate_finite(&spec, 0.0, 1.0, tol * scale)
}

/// I₁(a;n) < 0 at every point of `a_grid`, by more than the strictness
/// factor times the quadrature error.
#[allow(non_snake_case)]
pub fn check_lemma_I1(n: u32, a_grid: &Grid, tol: f64) -> Result<CheckReport> {
    if n < 3 {
        return Err(domain(format!("the I1 check needs n >= 3, got {n}")));
    }
    a_grid.validate()?;
    let mut b = ReportBuilder::new("lemma-I1", tol);
    b.param("n", n)
        .grid("a_grid", a_grid)
        .param("quad_tol", tol);
    let pts = a_grid.points();
    let ws: Vec<Witness> = pts
        .par_iter()
        .map(|&a| match lemma_i1(n, a, tol) {
            Ok(q) => {
                let v = Approx::new(DoubleDouble::from(q.value), q.error_estimate);
                Witness::inequality(
                    vec![a],
                    "I1(a;n) < 0",
                    crate::verify::Relation::Lt,
                    q.value,
                    0.0,
                    -v,
                )
            }
            Err(e) => Witness::failure(vec![a], "quadrature", &e.to_string()),
        })
        .collect();
    if let Some(max) = ws.iter().map(|w| w.lhs).max_by(|x, y| x.total_cmp(y)) {
        b.summary("max_value", max);
    }
    b.extend(ws);
    Ok(b.finish())
}
