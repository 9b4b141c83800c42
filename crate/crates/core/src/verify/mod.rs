//! Numerical certification of the inequalities and monotonicity statements
//! satisfied by ψ₂⁽ⁿ⁾, plus an audit of printed identities against the series.
//!
//! Every derivative that a check needs is itself a poly-double gamma value
//! (d/dx ψ₂⁽ᵐ⁾ = ψ₂⁽ᵐ⁺¹⁾), so sign checks are plain evaluations carrying
//! error estimates. Results are certified only at finite depth and on finite
//! grids.

mod audit;
mod checks;
mod hankel;
mod lemma;
mod subadd;
mod suite;

pub use audit::{audit_identities, AuditEntry, AuditStatus};
pub use checks::{
    check_F_cm, check_G_convexity, check_cauchy_schwarz, check_cm, check_ratio_bounds, check_turan,
    f_derivative, FParams, GParams,
};
pub use hankel::{check_hankel_cm, hankel_determinant, HankelParams, MAX_HANKEL_ORDER};
pub use lemma::{check_lemma_I1, lemma_i1};
pub use subadd::{check_subadditivity, triangle_pairs, SubAddParams};
pub use suite::{
    canonical_id, check_ids, default_requests, lemma_grid, ratio_grid, run_check, run_suite,
    CheckRequest, DEFAULT_SEED,
};

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::dd::{DoubleDouble, DD_EPSILON};
use crate::error::{invalid, Result};
use crate::polydg::series_sum;
use crate::specfun::{factorial, Precision};

/// A witness holds strictly when its margin exceeds this many combined
/// error estimates.
pub const STRICTNESS_FACTOR: f64 = 10.0;

/// Stated at the top of every report.
pub const CERTIFICATION_NOTE: &str =
    "numerical certification on a finite grid and to finite derivative depth, not a proof";

/// Sample spacing of a [`Grid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Logarithmic,
}

/// Sample points on [lo, hi] inside (0, ∞), optionally with extra points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub spacing: Spacing,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra: Vec<f64>,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, count: usize, spacing: Spacing) -> Result<Self> {
        let g = Self {
            lo,
            hi,
            count,
            spacing,
            extra: Vec::new(),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn linear(lo: f64, hi: f64, count: usize) -> Result<Self> {
        Self::new(lo, hi, count, Spacing::Linear)
    }

    pub fn logarithmic(lo: f64, hi: f64, count: usize) -> Result<Self> {
        Self::new(lo, hi, count, Spacing::Logarithmic)
    }

    /// 200 logarithmic points on [0.05, 50].
    pub fn default_grid() -> Self {
        Self::logarithmic(0.05, 50.0, 200).expect("valid default grid")
    }

    pub fn with_extra(mut self, extra: &[f64]) -> Result<Self> {
        self.extra.extend_from_slice(extra);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo > 0.0) || !self.lo.is_finite() {
            return Err(invalid(format!(
                "grid lower end must be positive, got {}",
                self.lo
            )));
        }
        if !(self.hi > self.lo) || !self.hi.is_finite() {
            return Err(invalid(format!(
                "grid needs lo < hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.count < 2 {
            return Err(invalid(format!(
                "grid needs at least 2 points, got {}",
                self.count
            )));
        }
        if let Some(bad) = self.extra.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
            return Err(invalid(format!(
                "extra grid point must be positive, got {bad}"
            )));
        }
        Ok(())
    }

    /// Regular points followed by the extra points.
    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        let mut pts: Vec<f64> = (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.lo;
                }
                if i + 1 == self.count {
                    return self.hi;
                }
                let s = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.lo + (self.hi - self.lo) * s,
                    Spacing::Logarithmic => {
                        (self.lo.ln() + (self.hi.ln() - self.lo.ln()) * s).exp()
                    }
                }
            })
            .collect();
        pts.extend_from_slice(&self.extra);
        pts
    }
}

/// A double-double value with an absolute error bound, propagated to first
/// order through arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approx {
    pub value: DoubleDouble,
    pub error: f64,
}

impl Approx {
    pub fn new(value: DoubleDouble, error: f64) -> Self {
        Self { value, error }
    }

    pub fn exact(v: f64) -> Self {
        Self::new(DoubleDouble::from(v), 0.0)
    }

    pub fn to_f64(self) -> f64 {
        self.value.to_f64()
    }

    pub fn abs_f64(self) -> f64 {
        self.value.abs().to_f64()
    }

    pub fn scale(self, c: f64) -> Self {
        let v = self.value * c;
        Self::new(v, self.error * c.abs() + rounding(v))
    }

    /// Multiplication by an exact double-double constant.
    pub fn scale_dd(self, c: DoubleDouble) -> Self {
        let v = self.value * c;
        Self::new(v, self.error * c.abs().to_f64() + rounding(v))
    }

    pub fn quotient(self, rhs: Self) -> Self {
        let v = self.value / rhs.value;
        let b = rhs.abs_f64();
        let rel = self.error / self.abs_f64().max(f64::MIN_POSITIVE)
            + rhs.error / b.max(f64::MIN_POSITIVE);
        let err = if self.value.to_f64() == 0.0 {
            self.error / b
        } else {
            v.abs().to_f64() * rel
        };
        Self::new(v, err + rounding(v))
    }

    /// self^r for self > 0, via exp(r·ln self).
    pub fn powf(self, r: f64) -> Self {
        let v = (self.value.ln() * r).exp();
        let rel = r.abs() * self.error / self.abs_f64();
        Self::new(
            v,
            v.abs().to_f64() * rel + 8.0 * (1.0 + r.abs()) * rounding(v),
        )
    }
}

impl From<crate::eval::EvalResult> for Approx {
    fn from(r: crate::eval::EvalResult) -> Self {
        Self::new(r.value, r.error)
    }
}

fn rounding(v: DoubleDouble) -> f64 {
    4.0 * DD_EPSILON * v.abs().to_f64()
}

impl Add for Approx {
    type Output = Approx;
    fn add(self, rhs: Approx) -> Approx {
        let v = self.value + rhs.value;
        Approx::new(v, self.error + rhs.error + rounding(v))
    }
}

impl Sub for Approx {
    type Output = Approx;
    fn sub(self, rhs: Approx) -> Approx {
        let v = self.value - rhs.value;
        Approx::new(v, self.error + rhs.error + rounding(v))
    }
}

impl Mul for Approx {
    type Output = Approx;
    fn mul(self, rhs: Approx) -> Approx {
        let v = self.value * rhs.value;
        let err = self.abs_f64() * rhs.error + rhs.abs_f64() * self.error + self.error * rhs.error;
        Approx::new(v, err + rounding(v))
    }
}

impl Neg for Approx {
    type Output = Approx;
    fn neg(self) -> Approx {
        Approx::new(-self.value, self.error)
    }
}

/// ψ₂⁽ᵠ⁾(x) for q = lo..=hi from the canonical series.
#[derive(Debug, Clone)]
pub struct Psi2Orders {
    pub x: f64,
    lo: u32,
    values: Vec<Approx>,
}

impl Psi2Orders {
    pub fn new(x: f64, lo: u32, hi: u32, prec: Precision) -> Result<Self> {
        if lo < 2 || hi < lo {
            return Err(invalid(format!(
                "poly-double gamma orders must satisfy 2 <= lo <= hi, got {lo}..={hi}"
            )));
        }
        let values = (lo..=hi)
            .map(|q| psi2_approx(q, x, prec))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { x, lo, values })
    }

    /// ψ₂⁽ᵠ⁾(x); panics outside the evaluated range.
    pub fn get(&self, q: u32) -> Approx {
        self.values[(q - self.lo) as usize]
    }
}

/// ψ₂⁽ᵠ⁾(x) = (−1)^{q+1} q! S_{q+1}(x) as an [`Approx`].
pub fn psi2_approx(q: u32, x: f64, prec: Precision) -> Result<Approx> {
    let (s, e) = s_approx(q + 1, x, prec).map(|a| (a.value, a.error))?;
    let f = factorial(q as usize);
    let sign = if q % 2 == 1 { 1.0 } else { -1.0 };
    let v = s * f * sign;
    Ok(Approx::new(v, e * f.to_f64() + rounding(v)))
}

/// S_q(x) = Σ_{k≥0} (1+k)/(x+k)^q as an [`Approx`].
pub fn s_approx(q: u32, x: f64, prec: Precision) -> Result<Approx> {
    let (s, e) = series_sum(q, x, prec)?;
    Ok(Approx::new(s, e))
}

/// Which way a witnessed relation points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// lhs < rhs, margin = rhs − lhs
    Lt,
    /// lhs > rhs, margin = lhs − rhs
    Gt,
    /// lhs = rhs, margin = band − |lhs − rhs|
    Eq,
}

/// Outcome of one witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Inconclusive,
    Violated,
}

/// One evaluated instance of a claimed relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub points: Vec<f64>,
    pub label: String,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub error: f64,
    pub verdict: Verdict,
}

fn finite(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

impl Witness {
    /// Strict inequality `lhs rel rhs`, judged on the margin computed as a
    /// single [`Approx`] (so cancellation is tracked in extended precision).
    pub fn inequality(
        points: Vec<f64>,
        label: impl Into<String>,
        rel: Relation,
        lhs: f64,
        rhs: f64,
        margin: Approx,
    ) -> Self {
        debug_assert!(rel != Relation::Eq);
        let m = margin.to_f64();
        let e = margin.error;
        let verdict = if !m.is_finite() || !e.is_finite() {
            Verdict::Violated
        } else if m > STRICTNESS_FACTOR * e {
            Verdict::Holds
        } else if m < -STRICTNESS_FACTOR * e {
            Verdict::Violated
        } else {
            Verdict::Inconclusive
        };
        Self {
            points,
            label: label.into(),
            relation: rel,
            lhs: finite(lhs),
            rhs: finite(rhs),
            margin: finite(m),
            error: finite(e),
            verdict,
        }
    }

    /// `lhs rel rhs` from two approximations.
    pub fn compare(
        points: Vec<f64>,
        label: impl Into<String>,
        lhs: Approx,
        rel: Relation,
        rhs: Approx,
    ) -> Self {
        let margin = match rel {
            Relation::Lt => rhs - lhs,
            Relation::Gt => lhs - rhs,
            Relation::Eq => return Self::equality(points, label, lhs, rhs),
        };
        Self::inequality(points, label, rel, lhs.to_f64(), rhs.to_f64(), margin)
    }

    /// x > 0.
    pub fn positive(points: Vec<f64>, label: impl Into<String>, v: Approx) -> Self {
        Self::inequality(points, label, Relation::Gt, v.to_f64(), 0.0, v)
    }

    /// lhs = rhs within STRICTNESS_FACTOR combined errors plus rounding.
    pub fn equality(points: Vec<f64>, label: impl Into<String>, lhs: Approx, rhs: Approx) -> Self {
        let d = lhs - rhs;
        let band = STRICTNESS_FACTOR * d.error + 4.0 * DD_EPSILON * (lhs.abs_f64() + rhs.abs_f64());
        let gap = d.abs_f64();
        let verdict = if gap <= band && band.is_finite() {
            Verdict::Holds
        } else {
            Verdict::Violated
        };
        Self {
            points,
            label: label.into(),
            relation: Relation::Eq,
            lhs: finite(lhs.to_f64()),
            rhs: finite(rhs.to_f64()),
            margin: finite(band - gap),
            error: finite(d.error),
            verdict,
        }
    }

    /// A point where evaluation itself failed.
    pub fn failure(points: Vec<f64>, label: impl Into<String>, reason: &str) -> Self {
        Self {
            points,
            label: format!("{}: {reason}", label.into()),
            relation: Relation::Gt,
            lhs: 0.0,
            rhs: 0.0,
            margin: 0.0,
            error: 0.0,
            verdict: Verdict::Violated,
        }
    }
}

/// Result of one check. `passed` holds exactly when `counterexamples` is
/// empty; inconclusive witnesses are counted but are not failures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub passed: bool,
    pub tolerance: f64,
    pub witnesses: Vec<Witness>,
    pub counterexamples: Vec<Witness>,
    pub inconclusive: usize,
    pub summary: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl CheckReport {
    /// Smallest margin among the witnesses that hold, if any.
    pub fn min_margin(&self) -> Option<f64> {
        self.witnesses
            .iter()
            .filter(|w| w.verdict == Verdict::Holds)
            .map(|w| w.margin)
            .min_by(|a, b| a.total_cmp(b))
    }

    /// One-line human summary.
    pub fn headline(&self) -> String {
        format!(
            "{:<16} {}  witnesses={} counterexamples={} inconclusive={}",
            self.check_id,
            if self.passed { "PASS" } else { "FAIL" },
            self.witnesses.len(),
            self.counterexamples.len(),
            self.inconclusive
        )
    }
}

pub(crate) struct ReportBuilder {
    check_id: String,
    params: BTreeMap<String, serde_json::Value>,
    tolerance: f64,
    witnesses: Vec<Witness>,
    summary: BTreeMap<String, f64>,
    notes: Vec<String>,
    seed: Option<u64>,
}

impl ReportBuilder {
    pub(crate) fn new(check_id: &str, tolerance: f64) -> Self {
        Self {
            check_id: check_id.to_string(),
            params: BTreeMap::new(),
            tolerance,
            witnesses: Vec::new(),
            summary: BTreeMap::new(),
            notes: vec![CERTIFICATION_NOTE.to_string()],
            seed: None,
        }
    }

    pub(crate) fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.params.insert(key.to_string(), v);
        self
    }

    pub(crate) fn grid(&mut self, key: &str, grid: &Grid) -> &mut Self {
        self.param(key, grid)
    }

    pub(crate) fn seed(&mut self, seed: u64) -> &mut Self {
        self.seed = Some(seed);
        self.param("seed", seed)
    }

    pub(crate) fn push(&mut self, w: Witness) {
        self.witnesses.push(w);
    }

    pub(crate) fn extend(&mut self, ws: impl IntoIterator<Item = Witness>) {
        self.witnesses.extend(ws);
    }

    pub(crate) fn summary(&mut self, key: &str, value: f64) {
        if value.is_finite() {
            self.summary.insert(key.to_string(), value);
        }
    }

    pub(crate) fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub(crate) fn finish(self) -> CheckReport {
        let counterexamples: Vec<Witness> = self
            .witnesses
            .iter()
            .filter(|w| w.verdict == Verdict::Violated)
            .cloned()
            .collect();
        let inconclusive = self
            .witnesses
            .iter()
            .filter(|w| w.verdict == Verdict::Inconclusive)
            .count();
        let mut params = self.params;
        params.insert(
            "strictness_factor".to_string(),
            serde_json::json!(STRICTNESS_FACTOR),
        );
        CheckReport {
            check_id: self.check_id,
            params,
            passed: counterexamples.is_empty(),
            tolerance: self.tolerance,
            witnesses: self.witnesses,
            counterexamples,
            inconclusive,
            summary: self.summary,
            notes: self.notes,
            seed: self.seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_hit_both_ends() {
        let g = Grid::logarithmic(0.05, 50.0, 200).unwrap();
        let p = g.points();
        assert_eq!(p.len(), 200);
        assert_eq!(p[0], 0.05);
        assert_eq!(p[199], 50.0);
        assert!(p.windows(2).all(|w| w[0] < w[1]));
        let l = Grid::linear(1.0, 2.0, 3).unwrap().points();
        assert_eq!(l, vec![1.0, 1.5, 2.0]);
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::linear(0.0, 1.0, 10).is_err());
        assert!(Grid::linear(2.0, 1.0, 10).is_err());
        assert!(Grid::linear(1.0, 2.0, 1).is_err());
        assert!(Grid::linear(1.0, 2.0, 2)
            .unwrap()
            .with_extra(&[-1.0])
            .is_err());
    }

    #[test]
    fn psi2_approx_reference_values() {
        let p = Precision::default();
        let v2 = psi2_approx(2, 1.0, p).unwrap();
        assert!((v2.to_f64() + std::f64::consts::PI.powi(2) / 3.0).abs() < 1e-14);
        assert!(v2.error < 1e-25);
        let v4 = psi2_approx(4, 1.0, p).unwrap();
        assert!((v4.to_f64() + 25.975_757_609_1).abs() < 1e-9);
    }

    #[test]
    fn witness_verdicts() {
        let w = Witness::positive(vec![1.0], "a", Approx::new(DoubleDouble::from(1.0), 0.01));
        assert_eq!(w.verdict, Verdict::Holds);
        let w = Witness::positive(vec![1.0], "b", Approx::new(DoubleDouble::from(0.05), 0.01));
        assert_eq!(w.verdict, Verdict::Inconclusive);
        let w = Witness::positive(vec![1.0], "c", Approx::new(DoubleDouble::from(-1.0), 0.01));
        assert_eq!(w.verdict, Verdict::Violated);
        let a = Approx::exact(2.0);
        let w = Witness::equality(vec![], "d", a, a);
        assert_eq!(w.verdict, Verdict::Holds);
        assert!(w.margin >= 0.0);
    }

    #[test]
    fn approx_arithmetic_tracks_error() {
        let a = Approx::new(DoubleDouble::from(2.0), 1e-10);
        let b = Approx::new(DoubleDouble::from(3.0), 1e-10);
        let p = a * b;
        assert!((p.error - 5e-10).abs() < 1e-15);
        let q = a.quotient(b);
        assert!((q.to_f64() - 2.0 / 3.0).abs() < 1e-16);
        assert!(q.error > 0.0);
        let r = Approx::exact(4.0).powf(0.5);
        assert!((r.to_f64() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn builder_partitions_counterexamples() {
        let mut b = ReportBuilder::new("t", 1e-12);
        b.push(Witness::positive(vec![1.0], "ok", Approx::exact(1.0)));
        let r = b.finish();
        assert!(r.passed);
        let mut b = ReportBuilder::new("t", 1e-12);
        b.push(Witness::positive(vec![1.0], "bad", Approx::exact(-1.0)));
        let r = b.finish();
        assert!(!r.passed);
        assert_eq!(r.counterexamples.len(), 1);
    }
}
