use crate::dd::{DoubleDouble, DD_EPSILON};
use crate::error::{domain, Error, Result};
use crate::eval::{EvalResult, Method};
use crate::specfun::bernoulli::BERNOULLI_CAPACITY;
use crate::specfun::euler_maclaurin::{em_tail, power_derivative_table};
use crate::specfun::Precision;

/// Σ_{k≥0}(k+a)^(-s): direct sum up to the shift target, then an
/// Euler-Maclaurin tail. Returns value and error estimate.
pub(crate) fn zeta_sum(s: u32, a: DoubleDouble, target: f64) -> (DoubleDouble, f64) {
    let m = (target - a.to_f64()).ceil().max(0.0) as usize;
    let si = s as i32;
    let mut head = DoubleDouble::ZERO;
    for k in (0..m).rev() {
        head += (a + k as f64).powi(-si);
    }
    let u = a + m as f64;
    let derivs = power_derivative_table(u, s as f64, 2 * BERNOULLI_CAPACITY);
    let integral = u * derivs[0] / (s as f64 - 1.0);
    let tail = em_tail(integral, derivs[0], |j| {
        let d = derivs[2 * j - 1];
        (d, d.abs().to_f64())
    });
    let value = head + tail.sum;
    let rounding = 4.0 * (s as f64 + m as f64 + 4.0) * DD_EPSILON * head.to_f64().abs();
    (value, tail.error + rounding)
}

/// Hurwitz zeta ζ(s, a) = Σ_{k≥0} (k+a)^(-s) for integer s ≥ 2 and a > 0.
pub fn hurwitz_zeta(s: u32, a: f64, prec: Precision) -> Result<EvalResult> {
    prec.validate()?;
    if s < 2 {
        return Err(domain(format!("hurwitz_zeta requires s >= 2, got s = {s}")));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(domain(format!("hurwitz_zeta requires a > 0, got a = {a}")));
    }
    let (value, error) = zeta_sum(s, DoubleDouble::from(a), prec.shift_target(s as f64));
    if !prec.accepts(error, value.abs().to_f64()) {
        return Err(Error::Convergence {
            best: value.to_f64(),
            error,
        });
    }
    Ok(EvalResult::new(value, error, Method::EulerMaclaurin))
}

#[cfg(test)]
mod tests {
    use super::*;

    const ZETA3: DoubleDouble = DoubleDouble::from_parts(1.2020569031595942, 4.875891010379532e-17);

    #[test]
    fn zeta_two_and_three() {
        let p = Precision::default();
        let z2 = hurwitz_zeta(2, 1.0, p).unwrap();
        let exact = DoubleDouble::PI.square() / 6.0;
        assert!((z2.value - exact).abs().to_f64() < 1e-30);
        assert!((z2.to_f64() - 1.6449340668).abs() < 1e-10);
        let z2b = hurwitz_zeta(2, 2.0, p).unwrap();
        assert!((z2b.value - (exact - 1.0)).abs().to_f64() < 1e-30);
        let z3 = hurwitz_zeta(3, 1.0, p).unwrap();
        assert!((z3.value - ZETA3).abs().to_f64() < 1e-30);
    }

    #[test]
    fn large_argument_needs_no_shift() {
        let p = Precision::default();
        let z = hurwitz_zeta(2, 1e6, p).unwrap();
        // ζ(2, a) = 1/a + 1/(2a²) + 1/(6a³) - ...
        let a = 1e6;
        let approx = 1.0 / a + 0.5 / (a * a) + 1.0 / (6.0 * a * a * a);
        assert!(((z.to_f64() - approx) / approx).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        let p = Precision::default();
        assert!(matches!(hurwitz_zeta(1, 1.0, p), Err(Error::Domain(_))));
        assert!(matches!(hurwitz_zeta(2, 0.0, p), Err(Error::Domain(_))));
        assert!(matches!(hurwitz_zeta(2, -1.0, p), Err(Error::Domain(_))));
    }

    #[test]
    fn decreasing_in_a() {
        let p = Precision::default();
        for s in 2..6 {
            let mut prev = f64::INFINITY;
            for i in 0..40 {
                let a = 0.05 * 1.3f64.powi(i);
                let v = hurwitz_zeta(s, a, p).unwrap().to_f64();
                assert!(v < prev);
                prev = v;
            }
        }
    }
}
