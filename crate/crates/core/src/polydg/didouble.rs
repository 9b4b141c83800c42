use crate::dd::{DoubleDouble, DD_EPSILON};
use crate::error::{domain, Error, Result};
use crate::eval::{EvalResult, Method};
use crate::specfun::{em_tail, Precision, BERNOULLI_CAPACITY};

fn binomial_row(m: usize) -> Vec<f64> {
    let mut row = vec![1.0; m + 1];
    for i in 1..m {
        row[i] = row[i - 1] * (m - i + 1) as f64 / i as f64;
    }
    row
}

/// ∫_K^∞ dt / ((t+1)²(t+x)) with S = K+1 and d = x−1.
fn tail_integral(s: DoubleDouble, d: DoubleDouble) -> DoubleDouble {
    let v = d / s;
    if v.abs().to_f64() < 0.1 {
        // (1/S²) Σ_{m≥2} (−v)^{m−2}/m
        let mut acc = DoubleDouble::ZERO;
        for m in (2..=40).rev() {
            acc = acc * -v + DoubleDouble::from(m as f64).recip();
        }
        acc / s.square()
    } else {
        (d * s).recip() - v.ln_1p() / d.square()
    }
}

/// Σ_{k≥0} 1/((k+1)²(x+k)).
fn cubic_sum(x: f64, prec: Precision) -> (DoubleDouble, f64) {
    let xd = DoubleDouble::from(x);
    let k0 = prec.shift_target(3.0).ceil() as usize;
    let mut head = DoubleDouble::ZERO;
    for k in (0..k0).rev() {
        let kp1 = DoubleDouble::from((k + 1) as f64);
        head += (kp1.square() * (xd + k as f64)).recip();
    }
    let s = DoubleDouble::from((k0 + 1) as f64);
    let v = xd + k0 as f64;
    let orders = 2 * BERNOULLI_CAPACITY;
    let g = crate::specfun::euler_maclaurin_power_table(s, 2.0, orders);
    let h = crate::specfun::euler_maclaurin_power_table(v, 1.0, orders);
    let integral = tail_integral(s, xd - 1.0);
    let tail = em_tail(integral, g[0] * h[0], |j| {
        let m = 2 * j - 1;
        let row = binomial_row(m);
        let mut d = DoubleDouble::ZERO;
        for i in 0..=m {
            d += g[i] * h[m - i] * row[i];
        }
        (d, d.abs().to_f64())
    });
    let rounding = 8.0 * (k0 as f64 + 4.0) * DD_EPSILON * head.abs().to_f64();
    (head + tail.sum, tail.error + rounding)
}

/// Di-double gamma ψ₂(x) = −½log(2π) + (1+γ)x + ½ − Σ_{k≥0} (x−1)²/((k+1)(x+k)).
///
/// The series is split as (x−1)²ζ(2) plus a remainder whose terms decay
/// like k⁻³.
pub fn psi2_didouble(x: f64, prec: Precision) -> Result<EvalResult> {
    prec.validate()?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("di-double gamma needs x > 0, got x = {x}")));
    }
    let xd = DoubleDouble::from(x);
    let c = xd - 1.0;
    let zeta2 = DoubleDouble::PI.square() / 6.0;
    let (s3, e3) = cubic_sum(x, prec);
    let c2 = c.square();
    let c3 = c2 * c;
    let series = c2 * zeta2 - c3 * s3;
    let linear = (DoubleDouble::EULER_GAMMA + 1.0) * xd;
    let constant = DoubleDouble::from(0.5) - DoubleDouble::LN_2PI * 0.5;
    let value = constant + linear - series;
    let scale =
        (c2 * zeta2).abs().to_f64() + (c3 * s3).abs().to_f64() + linear.abs().to_f64() + 1.0;
    let error = c3.abs().to_f64() * e3 + 8.0 * DD_EPSILON * scale;
    if !prec.accepts(error, value.abs().to_f64()) {
        return Err(Error::Convergence {
            best: value.to_f64(),
            error,
        });
    }
    Ok(EvalResult::new(value, error, Method::Series))
}
