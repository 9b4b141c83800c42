use crate::dd::{DoubleDouble, DD_EPSILON};
use crate::error::{Error, Result};
use crate::eval::{EvalResult, Method};
use crate::polydg::{sign, PolyDoubleArg};
use crate::specfun::{em_tail, factorial, Precision, BERNOULLI_CAPACITY};

/// S_q(x) = Σ_{k≥0} (1+k)/(x+k)^q for q ≥ 3, with its error estimate.
///
/// Terms are summed directly until x+k reaches the shift target, and the
/// rest is an Euler-Maclaurin tail of f(t) = (x+t)^{1-q} + (1-x)(x+t)^{-q}.
pub fn series_sum(q: u32, x: f64, prec: Precision) -> Result<(DoubleDouble, f64)> {
    let target = prec.shift_target(q as f64);
    let m = (target - x).ceil().max(0.0) as usize;
    if m > prec.max_terms {
        return Err(Error::Convergence {
            best: f64::NAN,
            error: f64::INFINITY,
        });
    }
    let xd = DoubleDouble::from(x);
    let qi = q as i32;
    let mut head = DoubleDouble::ZERO;
    for k in (0..m).rev() {
        head += (xd + k as f64).powi(-qi) * (1.0 + k as f64);
    }
    let u = xd + m as f64;
    let c = DoubleDouble::ONE - xd;
    let inv_u = u.recip();
    // g_s^(i)(u) for s = q-1 and s = q, i = 0..=2·capacity
    let orders = 2 * BERNOULLI_CAPACITY;
    let mut g1 = Vec::with_capacity(orders + 1);
    let mut g2 = Vec::with_capacity(orders + 1);
    let mut a = u.powi(1 - qi);
    let mut b = a * inv_u;
    for i in 0..=orders {
        g1.push(a);
        g2.push(b);
        a = a * inv_u * (-((q - 1) as f64 + i as f64));
        b = b * inv_u * (-(q as f64 + i as f64));
    }
    let integral = g1[0] * u / (q as f64 - 2.0) + c * g2[0] * u / (q as f64 - 1.0);
    let f0 = g1[0] + c * g2[0];
    let c_abs = c.abs().to_f64();
    let tail = em_tail(integral, f0, |j| {
        let i = 2 * j - 1;
        let d = g1[i] + c * g2[i];
        (d, g1[i].abs().to_f64() + c_abs * g2[i].abs().to_f64())
    });
    let sum = head + tail.sum;
    let rounding = 4.0 * (q as f64 + m as f64 + 4.0) * DD_EPSILON * head.to_f64().abs();
    Ok((sum, tail.error + rounding))
}

/// ψ₂⁽ⁿ⁾(x) = (−1)^{n+1} n! Σ_{k≥0} (1+k)/(x+k)^{n+1}.
pub fn psi2_series(arg: PolyDoubleArg, prec: Precision) -> Result<EvalResult> {
    arg.validate()?;
    prec.validate()?;
    let (s, err) = series_sum(arg.n + 1, arg.x, prec)?;
    let f = factorial(arg.n as usize);
    let value = s * f * sign(arg.n + 1);
    let error = err * f.to_f64() + 2.0 * DD_EPSILON * value.abs().to_f64();
    if !prec.accepts(error, value.abs().to_f64()) {
        return Err(Error::Convergence {
            best: value.to_f64(),
            error,
        });
    }
    Ok(EvalResult::new(value, error, Method::Series))
}
