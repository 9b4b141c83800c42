use crate::dd::{DoubleDouble, DD_EPSILON};
use crate::error::{domain, Error, Result};
use crate::eval::{EvalResult, Method};
use crate::specfun::{zeta_sum_dd, Precision};

/// log G(x) for the Barnes G function from the Weierstrass product
///
/// G(1+z) = (2π)^{z/2} e^{−(z+(1+γ)z²)/2} Π_{k≥1} (1+z/k)^k e^{−z+z²/(2k)}
///
/// with z = x−1. The product is taken up to K and the remaining factors are
/// summed through Σ_{j≥3} (−1)^{j+1} zʲ ζ(j−1, K+1)/j.
pub fn log_barnes_g(x: f64, prec: Precision) -> Result<EvalResult> {
    prec.validate()?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("log Barnes G needs x > 0, got x = {x}")));
    }
    let z = DoubleDouble::from(x) - 1.0;
    let zf = z.to_f64();
    let kmax = (4.0 * zf.abs()).ceil() as usize + 20;
    if kmax > prec.max_terms {
        return Err(Error::Convergence {
            best: f64::NAN,
            error: f64::INFINITY,
        });
    }
    let z2 = z.square();
    let mut prod = DoubleDouble::ZERO;
    let mut abs_acc = 0.0;
    for k in (1..=kmax).rev() {
        let kd = DoubleDouble::from(k as f64);
        let t = kd * (z / kd).ln_1p() - z + z2 / (kd * 2.0);
        prod += t;
        abs_acc += (z.abs().to_f64()) * 4.0;
    }
    // tail over k > K
    let a = DoubleDouble::from((kmax + 1) as f64);
    let mut tail = DoubleDouble::ZERO;
    let mut zj = z2;
    let mut omitted = 0.0;
    let mut tail_err = 0.0;
    for j in 3..=200u32 {
        zj *= z;
        let (zeta, zerr) = zeta_sum_dd(j - 1, a, prec.shift_target((j - 1) as f64));
        let term = zj * zeta / j as f64;
        let term = if j % 2 == 1 { term } else { -term };
        tail += term;
        tail_err += zj.abs().to_f64() * zerr / j as f64;
        omitted = term.abs().to_f64();
        if omitted <= 1e-34 * (prod + tail).abs().to_f64().max(1e-300) {
            break;
        }
    }
    // terms shrink at least geometrically with ratio |z|/(K+1) ≤ 1/4
    let trunc = omitted * 4.0 / 3.0;
    let head = z * DoubleDouble::LN_2PI * 0.5 - (z + (DoubleDouble::EULER_GAMMA + 1.0) * z2) * 0.5;
    let value = head + prod + tail;
    let scale = head.abs().to_f64() + prod.abs().to_f64() + abs_acc;
    let error = trunc + tail_err + 8.0 * DD_EPSILON * scale;
    if !prec.accepts(error, value.abs().to_f64()) {
        return Err(Error::Convergence {
            best: value.to_f64(),
            error,
        });
    }
    Ok(EvalResult::new(value, error, Method::WeierstrassProduct))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::log_gamma;
    use proptest::prelude::*;

    #[test]
    fn integer_values() {
        let p = Precision::default();
        for (x, expected) in [(1.0, 0.0), (2.0, 0.0), (3.0, 0.0)] {
            let v = log_barnes_g(x, p).unwrap();
            assert!((v.to_f64() - expected).abs() < 1e-25, "x={x}: {v}");
        }
        let v = log_barnes_g(4.0, p).unwrap();
        assert!((v.value - DoubleDouble::LN_2).abs().to_f64() < 1e-28);
        // G(6) = 1!·2!·3!·4! = 288
        let v = log_barnes_g(6.0, p).unwrap();
        assert!((v.value - DoubleDouble::from(288.0).ln()).abs().to_f64() < 1e-27);
    }

    #[test]
    fn half_integer_value() {
        // log G(1/2) = 1/24·ln 2 + 3/2·ζ'(−1) − 1/4·ln π, with ζ'(−1) = −0.16542114370045092921
        let p = Precision::default();
        let zp = -0.165_421_143_700_450_93;
        let expected = 2f64.ln() / 24.0 + 1.5 * zp - 0.25 * std::f64::consts::PI.ln();
        let v = log_barnes_g(0.5, p).unwrap();
        assert!((v.to_f64() - expected).abs() < 1e-15, "{v} {expected}");
    }

    proptest! {
        #[test]
        fn functional_equation(x in 0.05f64..60.0) {
            let x = (x * 512.0).round() / 512.0;
            let p = Precision::default();
            let a = log_barnes_g(x + 1.0, p).unwrap();
            let b = log_barnes_g(x, p).unwrap();
            let g = log_gamma(x).unwrap();
            let r = (a.value - b.value - g.value).abs().to_f64();
            prop_assert!(r <= a.error + b.error + g.error + 1e-12, "{r:e}");
            prop_assert!(r < 1e-12);
        }
    }
}
