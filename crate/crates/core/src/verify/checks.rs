//! Pointwise checks built directly on ψ₂⁽ᵠ⁾ values at each grid point.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dd::DoubleDouble;
use crate::error::{domain, invalid, Result};
use crate::specfun::Precision;
use crate::verify::subadd::triangle_pairs;
use crate::verify::{
    psi2_approx, s_approx, Approx, CheckReport, Grid, Psi2Orders, Relation, ReportBuilder, Verdict,
    Witness,
};

pub(crate) fn sign(k: u32) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn ratio_const(num: u32, den: u32) -> Approx {
    Approx::new(DoubleDouble::from(num) / DoubleDouble::from(den), 0.0)
}

/// Maps every grid point to its witnesses in parallel, keeping grid order.
pub(crate) fn par_points<F>(points: &[f64], f: F) -> Vec<Witness>
where
    F: Fn(f64) -> Vec<Witness> + Sync,
{
    points
        .par_iter()
        .map(|&x| f(x))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn need(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(domain(msg()))
    }
}

/// (−1)^{n+1+k} ψ₂⁽ⁿ⁺ᵏ⁾(x) > 0 for k = 0..=depth.
pub fn check_cm(n: u32, depth: u32, grid: &Grid, prec: Precision) -> Result<CheckReport> {
    need(n >= 2, || format!("cm check needs n >= 2, got {n}"))?;
    grid.validate()?;
    prec.validate()?;
    let mut b = ReportBuilder::new("cm", prec.abs_tol);
    b.param("n", n).param("depth", depth).grid("grid", grid);
    let ws = par_points(&grid.points(), |x| {
        match Psi2Orders::new(x, n, n + depth, prec) {
            Ok(t) => (0..=depth)
                .map(|k| {
                    let v = t.get(n + k).scale(sign(n + 1 + k));
                    Witness::positive(vec![x], format!("(-1)^(n+1+k) psi2^(n+k), k={k}"), v)
                })
                .collect(),
            Err(e) => vec![Witness::failure(vec![x], "evaluation", &e.to_string())],
        }
    });
    b.extend(ws);
    Ok(b.finish())
}

/// (ψ₂⁽ⁿ⁾(x+1))² < ψ₂⁽ⁿ⁾(x)·ψ₂⁽ⁿ⁾(x+2).
pub fn check_turan(n: u32, grid: &Grid, prec: Precision) -> Result<CheckReport> {
    need(n >= 2, || format!("Turan check needs n >= 2, got {n}"))?;
    grid.validate()?;
    prec.validate()?;
    let mut b = ReportBuilder::new("turan", prec.abs_tol);
    b.param("n", n).grid("grid", grid);
    let ws = par_points(&grid.points(), |x| {
        let vals: Result<Vec<Approx>> =
            (0..3).map(|i| psi2_approx(n, x + i as f64, prec)).collect();
        match vals {
            Ok(v) => vec![Witness::compare(
                vec![x],
                "psi2(x+1)^2 < psi2(x) psi2(x+2)",
                v[1] * v[1],
                Relation::Lt,
                v[0] * v[2],
            )],
            Err(e) => vec![Witness::failure(vec![x], "evaluation", &e.to_string())],
        }
    });
    b.extend(ws);
    Ok(b.finish())
}

/// (n−2)/(n−1) < (ψ₂⁽ⁿ⁾)²/(ψ₂⁽ⁿ⁻¹⁾ψ₂⁽ⁿ⁺¹⁾) < n/(n+1), with the extreme
/// observed ratios reported to show how close the bounds get.
pub fn check_ratio_bounds(n: u32, grid: &Grid, prec: Precision) -> Result<CheckReport> {
    need(n >= 3, || format!("ratio check needs n >= 3, got {n}"))?;
    grid.validate()?;
    prec.validate()?;
    let lower = ratio_const(n - 2, n - 1);
    let upper = ratio_const(n, n + 1);
    let mut b = ReportBuilder::new("ratio", prec.abs_tol);
    b.param("n", n).grid("grid", grid);
    let pts = grid.points();
    let per_point: Vec<(f64, Option<f64>, Vec<Witness>)> = pts
        .par_iter()
        .map(|&x| match Psi2Orders::new(x, n - 1, n + 1, prec) {
            Ok(t) => {
                let r = (t.get(n) * t.get(n)).quotient(t.get(n - 1) * t.get(n + 1));
                let ws = vec![
                    Witness::compare(vec![x], "ratio > (n-2)/(n-1)", r, Relation::Gt, lower),
                    Witness::compare(vec![x], "ratio < n/(n+1)", r, Relation::Lt, upper),
                ];
                (x, Some(r.to_f64()), ws)
            }
            Err(e) => (
                x,
                None,
                vec![Witness::failure(vec![x], "evaluation", &e.to_string())],
            ),
        })
        .collect();
    let ratios: Vec<(f64, f64)> = per_point
        .iter()
        .filter_map(|(x, r, _)| r.map(|r| (*x, r)))
        .collect();
    b.summary("lower_bound", lower.to_f64());
    b.summary("upper_bound", upper.to_f64());
    if let Some(&(_, r)) = ratios.iter().find(|(x, _)| *x == grid.lo) {
        b.summary("ratio_at_lo", r);
    }
    if let Some(&(_, r)) = ratios.iter().find(|(x, _)| *x == grid.hi) {
        b.summary("ratio_at_hi", r);
    }
    if let Some(inf) = ratios.iter().map(|p| p.1).min_by(|a, b| a.total_cmp(b)) {
        b.summary("ratio_inf", inf);
    }
    if let Some(sup) = ratios.iter().map(|p| p.1).max_by(|a, b| a.total_cmp(b)) {
        b.summary("ratio_sup", sup);
    }
    b.extend(per_point.into_iter().flat_map(|p| p.2));
    Ok(b.finish())
}

/// S_{n+1}² < SₙS_{n+2} and S_{n+1}² > ((n²−n−2)/(n²−n))·SₙS_{n+2}, with
/// S_q(x) = Σ(k+1)/(x+k)^q.
pub fn check_cauchy_schwarz(n: u32, grid: &Grid, prec: Precision) -> Result<CheckReport> {
    need(n >= 3, || {
        format!("Cauchy-Schwarz check needs n >= 3, got {n}")
    })?;
    grid.validate()?;
    prec.validate()?;
    let c = ratio_const(n * n - n - 2, n * n - n);
    let mut b = ReportBuilder::new("cauchy-schwarz", prec.abs_tol);
    b.param("n", n).grid("grid", grid);
    b.summary("constant", c.to_f64());
    let ws = par_points(&grid.points(), |x| {
        let s: Result<Vec<Approx>> = (n..=n + 2).map(|q| s_approx(q, x, prec)).collect();
        match s {
            Ok(s) => {
                let sq = s[1] * s[1];
                let prod = s[0] * s[2];
                let scaled = prod.scale_dd(c.value);
                vec![
                    Witness::compare(vec![x], "S(n+1)^2 < S(n) S(n+2)", sq, Relation::Lt, prod),
                    Witness::compare(
                        vec![x],
                        "S(n+1)^2 > c S(n) S(n+2)",
                        sq,
                        Relation::Gt,
                        scaled,
                    ),
                ]
            }
            Err(e) => vec![Witness::failure(vec![x], "evaluation", &e.to_string())],
        }
    });
    b.extend(ws);
    Ok(b.finish())
}

/// Parameters of Fₙ(x;ω) = (ψ₂⁽ⁿ⁾)² − ω·ψ₂⁽ⁿ⁻¹⁾ψ₂⁽ⁿ⁺¹⁾.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FParams {
    pub n: u32,
    pub omega: f64,
    /// Highest derivative order K that is checked.
    pub depth: u32,
}

impl FParams {
    pub fn validate(&self) -> Result<()> {
        need(self.n >= 3, || {
            format!("F check needs n >= 3, got {}", self.n)
        })?;
        if !self.omega.is_finite() {
            return Err(invalid("omega must be finite"));
        }
        if self.depth < 1 {
            return Err(invalid("derivative depth must be at least 1"));
        }
        Ok(())
    }

    pub fn lower_constant(&self) -> f64 {
        (self.n - 2) as f64 / (self.n - 1) as f64
    }

    pub fn upper_constant(&self) -> f64 {
        self.n as f64 / (self.n + 1) as f64
    }
}

fn binomial(k: u32, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (k - i) as f64 / (i + 1) as f64)
}

/// d^k/dx^k Fₙ(x;ω) by the Leibniz rule; `t` must cover orders n−1..=n+1+k.
pub fn f_derivative(n: u32, omega: f64, k: u32, t: &Psi2Orders) -> Approx {
    let mut acc = Approx::exact(0.0);
    for j in 0..=k {
        let c = binomial(k, j);
        let sq = t.get(n + j) * t.get(n + k - j);
        let cross = t.get(n - 1 + j) * t.get(n + 1 + k - j);
        acc = acc + (sq - cross.scale(omega)).scale(c);
    }
    acc
}

#[derive(Clone, Copy, PartialEq)]
enum Pattern {
    F,
    MinusF,
}

fn pattern_witnesses(p: &FParams, t: &Psi2Orders, x: f64, pat: Pattern) -> Vec<Witness> {
    (0..=p.depth)
        .map(|k| {
            let d = f_derivative(p.n, p.omega, k, t);
            let (s, name) = match pat {
                Pattern::F => (sign(k), "(-1)^k F^(k)"),
                Pattern::MinusF => (-sign(k), "-(-1)^k F^(k)"),
            };
            Witness::positive(vec![x], format!("{name}, k={k}"), d.scale(s))
        })
        .collect()
}

/// Alternating-sign pattern of Fₙ(·;ω) (ω ≤ (n−2)/(n−1)) or of −Fₙ
/// (ω ≥ n/(n+1)) up to `depth` derivatives. Between the two constants both
/// patterns are tried; the check passes only if one of them holds
/// everywhere, and the failures of each are summarized.
#[allow(non_snake_case)]
pub fn check_F_cm(params: FParams, grid: &Grid, prec: Precision) -> Result<CheckReport> {
    params.validate()?;
    grid.validate()?;
    prec.validate()?;
    let p = params;
    let mut b = ReportBuilder::new("F-cm", prec.abs_tol);
    b.param("n", p.n)
        .param("omega", p.omega)
        .param("depth", p.depth)
        .grid("grid", grid);
    b.summary("lower_constant", p.lower_constant());
    b.summary("upper_constant", p.upper_constant());
    let pts = grid.points();
    let tables: Vec<(f64, Result<Psi2Orders>)> = pts
        .par_iter()
        .map(|&x| (x, Psi2Orders::new(x, p.n - 1, p.n + 1 + p.depth, prec)))
        .collect();
    let run = |pat: Pattern| -> Vec<Witness> {
        tables
            .iter()
            .flat_map(|(x, t)| match t {
                Ok(t) => pattern_witnesses(&p, t, *x, pat),
                Err(e) => vec![Witness::failure(vec![*x], "evaluation", &e.to_string())],
            })
            .collect()
    };
    let violations = |ws: &[Witness]| ws.iter().filter(|w| w.verdict == Verdict::Violated).count();
    let first_violation = |ws: &[Witness]| {
        ws.iter()
            .find(|w| w.verdict == Verdict::Violated)
            .map(|w| w.points[0])
    };
    if p.omega <= p.lower_constant() {
        b.param("pattern", "F");
        b.extend(run(Pattern::F));
    } else if p.omega >= p.upper_constant() {
        b.param("pattern", "-F");
        b.extend(run(Pattern::MinusF));
    } else {
        let f = run(Pattern::F);
        let g = run(Pattern::MinusF);
        let (vf, vg) = (violations(&f), violations(&g));
        b.summary("violations_F", vf as f64);
        b.summary("violations_minus_F", vg as f64);
        if let Some(x) = first_violation(&f) {
            b.summary("first_violation_F_x", x);
        }
        if let Some(x) = first_violation(&g) {
            b.summary("first_violation_minus_F_x", x);
        }
        b.note("omega lies strictly between the two constants; both sign patterns were tried");
        if vf == 0 {
            b.param("pattern", "F");
            b.note(format!("-F pattern fails at {vg} witnesses"));
            b.extend(f);
        } else if vg == 0 {
            b.param("pattern", "-F");
            b.note(format!("F pattern fails at {vf} witnesses"));
            b.extend(g);
        } else {
            b.param("pattern", "none");
            b.note("neither sign pattern holds on this grid");
            b.extend(f);
            b.extend(g);
        }
    }
    Ok(b.finish())
}

/// Parameters of Gₙ(x;r) = ((−1)^{n+1}ψ₂⁽ⁿ⁾(x))^r.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GParams {
    pub n: u32,
    pub r: f64,
}

impl GParams {
    pub fn validate(&self) -> Result<()> {
        need(self.n >= 3, || {
            format!("G check needs n >= 3, got {}", self.n)
        })?;
        if !self.r.is_finite() || self.r == 0.0 {
            return Err(invalid(format!(
                "exponent r must be finite and nonzero, got {}",
                self.r
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum GRegime {
    Convex,
    Concave,
    Gap,
}

fn g_regime(p: &GParams) -> GRegime {
    let n = p.n as f64;
    if p.r > 0.0 || p.r < -1.0 / (n - 1.0) {
        GRegime::Convex
    } else if p.r > -1.0 / (n + 1.0) {
        GRegime::Concave
    } else {
        GRegime::Gap
    }
}

fn g_value(p: &GParams, x: f64, prec: Precision) -> Result<Approx> {
    let u = psi2_approx(p.n, x, prec)?.scale(sign(p.n + 1));
    Ok(u.powf(p.r))
}

/// G'' = r·u^{r−2}·((r−1)(ψ₂⁽ⁿ⁺¹⁾)² + ψ₂⁽ⁿ⁾ψ₂⁽ⁿ⁺²⁾) with u = (−1)^{n+1}ψ₂⁽ⁿ⁾.
fn g_second(p: &GParams, t: &Psi2Orders) -> Approx {
    let n = p.n;
    let u = t.get(n).scale(sign(n + 1));
    let a = t.get(n + 1) * t.get(n + 1);
    let bracket = a.scale_dd(DoubleDouble::from(p.r) - 1.0) + t.get(n) * t.get(n + 2);
    (u.powf(p.r - 2.0) * bracket).scale(p.r)
}

/// Sign of Gₙ'' (convex for r > 0 or r < −1/(n−1), concave for
/// −1/(n+1) < r < 0, reported but not asserted in between) and, for r < 0
/// outside the gap, Gₙ(x)+Gₙ(y) against Gₙ(x+y) on `pairs` seeded pairs with
/// x + y ≤ grid.hi.
#[allow(non_snake_case)]
pub fn check_G_convexity(
    params: GParams,
    grid: &Grid,
    pairs: usize,
    seed: u64,
    prec: Precision,
) -> Result<CheckReport> {
    params.validate()?;
    grid.validate()?;
    prec.validate()?;
    let p = params;
    let regime = g_regime(&p);
    let mut b = ReportBuilder::new("G-convexity", prec.abs_tol);
    b.param("n", p.n)
        .param("r", p.r)
        .param("pairs", pairs)
        .grid("grid", grid);
    b.seed(seed);
    let n = p.n as f64;
    b.summary("convex_below", -1.0 / (n - 1.0));
    b.summary("concave_above", -1.0 / (n + 1.0));
    let pts = grid.points();
    let seconds: Vec<(f64, Result<Approx>)> = pts
        .par_iter()
        .map(|&x| {
            (
                x,
                Psi2Orders::new(x, p.n, p.n + 2, prec).map(|t| g_second(&p, &t)),
            )
        })
        .collect();
    match regime {
        GRegime::Convex | GRegime::Concave => {
            b.param(
                "regime",
                if regime == GRegime::Convex {
                    "convex"
                } else {
                    "concave"
                },
            );
            for (x, g) in seconds {
                b.push(match g {
                    Ok(g) if regime == GRegime::Convex => Witness::positive(vec![x], "G''", g),
                    Ok(g) => Witness::positive(vec![x], "-G''", -g),
                    Err(e) => Witness::failure(vec![x], "evaluation", &e.to_string()),
                });
            }
        }
        GRegime::Gap => {
            b.param("regime", "gap");
            b.note("r lies in [-1/(n-1), -1/(n+1)]; the sign of G'' is reported, not asserted");
            let (mut pos, mut neg) = (0usize, 0usize);
            for (_, g) in seconds.iter() {
                if let Ok(g) = g {
                    if g.to_f64() > 0.0 {
                        pos += 1;
                    } else {
                        neg += 1;
                    }
                }
            }
            b.summary("observed_positive", pos as f64);
            b.summary("observed_negative", neg as f64);
        }
    }
    if p.r < 0.0 && regime != GRegime::Gap && pairs > 0 {
        // G(0+) = 0 for r < 0, so convexity gives superadditivity and
        // concavity gives subadditivity.
        let rel = if regime == GRegime::Convex {
            Relation::Lt
        } else {
            Relation::Gt
        };
        let label = if rel == Relation::Lt {
            "G(x)+G(y) < G(x+y)"
        } else {
            "G(x)+G(y) > G(x+y)"
        };
        let ps = triangle_pairs(grid.hi, pairs, seed);
        let ws: Vec<Witness> = ps
            .par_iter()
            .map(|&(x, y)| {
                let vals = (
                    g_value(&p, x, prec),
                    g_value(&p, y, prec),
                    g_value(&p, x + y, prec),
                );
                match vals {
                    (Ok(gx), Ok(gy), Ok(gs)) => {
                        Witness::compare(vec![x, y], label, gx + gy, rel, gs)
                    }
                    _ => Witness::failure(vec![x, y], "evaluation", "series evaluation failed"),
                }
            })
            .collect();
        b.extend(ws);
    } else if p.r > 0.0 {
        b.note("no additivity statement for r > 0 (G is unbounded at 0+)");
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    #[test]
    fn cm_sign_pattern_small() {
        let g = Grid::linear(0.1, 2.0, 12).unwrap();
        let r = check_cm(3, 5, &g, p()).unwrap();
        assert!(r.passed);
        assert_eq!(r.witnesses.len(), 12 * 6);
        let t = Psi2Orders::new(1.0, 4, 5, p()).unwrap();
        assert!(t.get(4).to_f64() < 0.0 && t.get(5).to_f64() > 0.0);
    }

    #[test]
    fn turan_reference_point() {
        let g = Grid::linear(1.0, 2.0, 2).unwrap();
        let r = check_turan(2, &g, p()).unwrap();
        assert!(r.passed);
        let w = &r.witnesses[0];
        assert!((w.lhs - 0.784_561).abs() < 1e-5, "{}", w.lhs);
        assert!((w.rhs - 1.584_540).abs() < 1e-5, "{}", w.rhs);
    }

    #[test]
    fn ratio_at_one() {
        let g = Grid::linear(1.0, 2.0, 2).unwrap();
        let r = check_ratio_bounds(3, &g, p()).unwrap();
        assert!(r.passed);
        assert!((r.summary["ratio_at_lo"] - 0.608_703_56).abs() < 1e-7);
    }

    #[test]
    fn cauchy_schwarz_constant() {
        let g = Grid::linear(0.5, 1.0, 2).unwrap();
        let r = check_cauchy_schwarz(4, &g, p()).unwrap();
        assert!(r.passed);
        let r3 = check_cauchy_schwarz(3, &g, p()).unwrap();
        assert!((r3.summary["constant"] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn f_value_at_one() {
        let t = Psi2Orders::new(1.0, 2, 6, p()).unwrap();
        let f = f_derivative(3, 0.5, 0, &t).to_f64();
        assert!((f - 9.289).abs() < 1e-3, "{f}");
    }

    #[test]
    fn f_patterns_at_the_constants() {
        let g = Grid::logarithmic(0.05, 50.0, 40).unwrap();
        let f = check_F_cm(
            FParams {
                n: 3,
                omega: 0.25,
                depth: 4,
            },
            &g,
            p(),
        )
        .unwrap();
        assert!(f.passed);
        let mf = check_F_cm(
            FParams {
                n: 3,
                omega: 0.75,
                depth: 4,
            },
            &g,
            p(),
        )
        .unwrap();
        assert!(mf.passed);
        let gap = check_F_cm(
            FParams {
                n: 3,
                omega: 0.6,
                depth: 4,
            },
            &g,
            p(),
        )
        .unwrap();
        assert!(!gap.passed);
    }

    #[test]
    fn leibniz_matches_finite_differences() {
        // central differences of F^(k-1) approximate F^(k) with O(h²) error
        let (n, omega, x) = (4u32, 0.7, 1.3);
        let at = |x: f64| Psi2Orders::new(x, n - 1, n + 6, p()).unwrap();
        let t0 = at(x);
        for k in 1..=3 {
            let exact = f_derivative(n, omega, k, &t0).to_f64();
            let err = |h: f64| {
                let fd = (f_derivative(n, omega, k - 1, &at(x + h)).to_f64()
                    - f_derivative(n, omega, k - 1, &at(x - h)).to_f64())
                    / (2.0 * h);
                (fd - exact).abs()
            };
            let (e1, e2) = (err(1e-2), err(5e-3));
            let order = (e1 / e2).log2();
            assert!((order - 2.0).abs() < 0.1, "k={k} order={order}");
        }
    }

    #[test]
    fn g_regimes() {
        let g = Grid::logarithmic(0.05, 50.0, 30).unwrap();
        for r in [-0.6, -0.2, 1.0] {
            let rep = check_G_convexity(GParams { n: 3, r }, &g, 16, 7, p()).unwrap();
            assert!(rep.passed, "r={r}: {:?}", rep.counterexamples.first());
        }
        let gap = check_G_convexity(GParams { n: 3, r: -0.4 }, &g, 16, 7, p()).unwrap();
        assert!(gap.passed);
        assert!(gap.witnesses.is_empty());
        assert!(check_G_convexity(GParams { n: 3, r: 0.0 }, &g, 16, 7, p()).is_err());
    }

    #[test]
    fn preconditions() {
        let g = Grid::default_grid();
        assert!(check_cm(1, 2, &g, p()).is_err());
        assert!(check_ratio_bounds(2, &g, p()).is_err());
        assert!(check_F_cm(
            FParams {
                n: 2,
                omega: 0.1,
                depth: 2
            },
            &g,
            p()
        )
        .is_err());
    }
}
