//! Adaptive Gauss-Kronrod (7/15) quadrature on finite intervals and on
//! [0, ∞) for integrands with a known exponential envelope.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};

/// Maximum number of interval bisections.
pub const MAX_SUBDIVISIONS: usize = 2000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// An integrand together with what is known about its behaviour.
///
/// `evaluate` must be a pure function. For semi-infinite integration the
/// envelope `|f(t)| <= envelope * t^growth * exp(-decay_rate * t)` must hold
/// for all `t >= 1`.
pub struct IntegrandSpec<'a> {
    evaluate: Box<dyn Fn(f64) -> f64 + Sync + 'a>,
    pub decay_rate: f64,
    /// Leading power of `t` as `t -> 0+`.
    pub origin_order: f64,
    pub growth: f64,
    pub envelope: f64,
}

impl<'a> IntegrandSpec<'a> {
    pub fn new(f: impl Fn(f64) -> f64 + Sync + 'a) -> Self {
        Self {
            evaluate: Box::new(f),
            decay_rate: 0.0,
            origin_order: 0.0,
            growth: 0.0,
            envelope: 1.0,
        }
    }

    /// Declares `|f(t)| <= envelope * t^growth * exp(-rate * t)` for `t >= 1`.
    pub fn with_decay(mut self, rate: f64, growth: f64, envelope: f64) -> Self {
        self.decay_rate = rate;
        self.growth = growth;
        self.envelope = envelope;
        self
    }

    pub fn with_origin_order(mut self, order: f64) -> Self {
        self.origin_order = order;
        self
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.evaluate)(t)
    }

    fn validate(&self) -> Result<()> {
        if !(self.origin_order > -1.0) {
            return Err(domain(format!(
                "integrand origin order {} is not integrable",
                self.origin_order
            )));
        }
        if !(self.decay_rate >= 0.0) || !(self.envelope >= 0.0) || !(self.growth >= 0.0) {
            return Err(domain("integrand envelope must be non-negative"));
        }
        Ok(())
    }

    /// Upper bound on ∫_T^∞ |f| from the envelope, valid for T >= 1 with
    /// rate·T > growth.
    pub fn tail_bound(&self, t: f64) -> f64 {
        let r = self.decay_rate;
        let p = self.growth;
        if t < 1.0 || r * t <= p {
            return f64::INFINITY;
        }
        self.envelope * (p * t.ln() - r * t).exp() / (r - p / t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    if !fc.is_finite() {
        return Err(domain(format!("integrand is not finite at t = {center}")));
    }
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        if !f1.is_finite() || !f2.is_finite() {
            return Err(domain(format!(
                "integrand is not finite near t = {}",
                if f1.is_finite() {
                    center + dx
                } else {
                    center - dx
                }
            )));
        }
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Segment { a, b, value, error })
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn adaptive<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    breaks: &[f64],
    tol: f64,
) -> Result<QuadratureResult> {
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        heap.push(gauss_kronrod(f, w[0], w[1])?);
        evaluations += 15;
    }
    let total_error = |heap: &BinaryHeap<Segment>| neumaier_sum(heap.iter().map(|s| s.error));
    let mut splits = 0;
    loop {
        let err = total_error(&heap);
        if err <= tol {
            break;
        }
        let worst = heap.peek().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        let cannot_split = !(mid > worst.a && mid < worst.b)
            || (worst.b - worst.a).abs() <= 1e3 * f64::EPSILON * worst.a.abs().max(worst.b.abs());
        if splits >= MAX_SUBDIVISIONS || cannot_split {
            let value = neumaier_sum(heap.iter().map(|s| s.value));
            return Err(Error::Convergence {
                best: value,
                error: err,
            });
        }
        let worst = heap.pop().expect("non-empty");
        let left = gauss_kronrod(f, worst.a, mid)?;
        let right = gauss_kronrod(f, mid, worst.b)?;
        evaluations += 30;
        splits += 1;
        // Both halves at the rounding floor with no improvement: further
        // bisection cannot reduce the estimate.
        let floor_hit = left.error + right.error >= worst.error
            && left.error + right.error
                <= 100.0 * f64::EPSILON * (left.value.abs() + right.value.abs());
        heap.push(left);
        heap.push(right);
        if floor_hit {
            break;
        }
    }
    let value = neumaier_sum(heap.iter().map(|s| s.value));
    let error_estimate = total_error(&heap);
    Ok(QuadratureResult {
        value,
        error_estimate,
        evaluations,
    })
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("tolerance must be positive, got {tol}")))
    }
}

/// ∫_a^b f(t) dt.
pub fn integrate_finite(f: &IntegrandSpec, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    f.validate()?;
    check_tol(tol)?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(domain(format!(
            "integration interval [{a}, {b}] is empty or unbounded"
        )));
    }
    if a == 0.0 && f.origin_order < 0.0 {
        // t = u², dt = 2u du removes the integrable singularity at 0.
        let g = |u: f64| 2.0 * u * f.eval(u * u);
        return adaptive(&g, &[0.0, b.sqrt()], tol);
    }
    adaptive(&|t| f.eval(t), &[a, b], tol)
}

/// ∫_0^∞ f(t) dt, using the declared envelope to cut the range at a finite
/// T whose tail bound is at most tol/2.
pub fn integrate_semi_infinite(f: &IntegrandSpec, tol: f64) -> Result<QuadratureResult> {
    f.validate()?;
    check_tol(tol)?;
    if !(f.decay_rate > 0.0) {
        return Err(domain(
            "semi-infinite integration needs a positive decay rate",
        ));
    }
    let r = f.decay_rate;
    let mut t_cut = (2.0 * f.growth / r).max(1.0);
    let mut tail = f.tail_bound(t_cut);
    let mut doublings = 0;
    while !(tail <= 0.5 * tol) {
        t_cut *= 2.0;
        tail = f.tail_bound(t_cut);
        doublings += 1;
        if doublings > 200 {
            return Err(Error::Convergence {
                best: f64::NAN,
                error: tail,
            });
        }
    }
    let singular = f.origin_order < 0.0;
    let upper = if singular { t_cut.sqrt() } else { t_cut };
    // geometric breakpoints toward the origin
    let mut breaks = vec![upper];
    let mut p = upper;
    while p > 0.5 && breaks.len() < 40 {
        p *= 0.5;
        breaks.push(p);
    }
    breaks.push(0.0);
    breaks.reverse();
    let inner = 0.5 * tol;
    let res = if singular {
        adaptive(&|u: f64| 2.0 * u * f.eval(u * u), &breaks, inner)
    } else {
        adaptive(&|t: f64| f.eval(t), &breaks, inner)
    };
    match res {
        Ok(q) => Ok(QuadratureResult {
            value: q.value,
            error_estimate: q.error_estimate + tail,
            evaluations: q.evaluations,
        }),
        Err(Error::Convergence { best, error }) => Err(Error::Convergence {
            best,
            error: error + tail,
        }),
        Err(e) => Err(e),
    }
}
