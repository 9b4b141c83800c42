use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::eval::{EvalResult, Method};
use crate::polydg::{sign, PolyDoubleArg};
use crate::quadrature::{integrate_semi_infinite, IntegrandSpec};

/// The density m̃(t) = tⁿ/(1−e^{−t})² of the Laplace representation of
/// (−1)^{n+1}ψ₂⁽ⁿ⁾.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Psi2Kernel {
    pub n: u32,
}

impl Psi2Kernel {
    pub fn new(n: u32) -> Self {
        Self { n }
    }

    /// tⁿ/(1−e^{−t})², with its limit at t = 0.
    pub fn value(&self, t: f64) -> f64 {
        if t == 0.0 {
            return if self.n == 2 { 1.0 } else { 0.0 };
        }
        let q = t / -(-t).exp_m1();
        t.powi(self.n as i32 - 2) * q * q
    }

    /// e^{−xt}·m̃(t) with the envelope needed for semi-infinite quadrature.
    pub fn laplace_integrand(&self, x: f64) -> IntegrandSpec<'static> {
        let k = *self;
        // for t ≥ 1: (1−e^{−t})^{−2} ≤ (1−e^{−1})^{−2}
        let c = (1.0 - (-1f64).exp()).powi(-2);
        IntegrandSpec::new(move |t| {
            if t == 0.0 {
                k.value(0.0)
            } else {
                let q = -(-t).exp_m1();
                t.powi(k.n as i32) * (-x * t).exp() / (q * q)
            }
        })
        .with_decay(x, k.n as f64, c)
        .with_origin_order(k.n as f64 - 2.0)
    }
}

/// ψ₂⁽ⁿ⁾(x) = (−1)^{n+1} ∫₀^∞ e^{−xt} tⁿ/(1−e^{−t})² dt by quadrature.
pub fn psi2_integral(arg: PolyDoubleArg, tol: f64) -> Result<EvalResult> {
    arg.validate()?;
    let spec = Psi2Kernel::new(arg.n).laplace_integrand(arg.x);
    let s = sign(arg.n + 1);
    match integrate_semi_infinite(&spec, tol) {
        Ok(q) => Ok(EvalResult::new(
            DoubleDouble::from(s * q.value),
            q.error_estimate,
            Method::Integral,
        )),
        Err(Error::Convergence { best, error }) => Err(Error::Convergence {
            best: s * best,
            error,
        }),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polydg::psi2_series;
    use crate::specfun::Precision;

    #[test]
    fn kernel_is_positive_and_nondecreasing() {
        for n in 2..=8 {
            let k = Psi2Kernel::new(n);
            let mut prev = k.value(0.0);
            for i in 1..=5000 {
                let t = i as f64 * 0.01;
                let v = k.value(t);
                assert!(v > 0.0);
                assert!(v >= prev, "n={n} t={t}");
                // equivalent analytic condition eᵗ > 1 + 2t/n
                assert!(t.exp() > 1.0 + 2.0 * t / n as f64);
                prev = v;
            }
        }
    }

    #[test]
    fn matches_series() {
        let p = Precision::default();
        for (n, x) in [(2, 1.0), (3, 2.0), (5, 0.5), (6, 0.3), (4, 10.0)] {
            let arg = PolyDoubleArg::new(n, x).unwrap();
            let s = psi2_series(arg, p).unwrap();
            let q = psi2_integral(arg, 1e-10).unwrap();
            let d = (s.value - q.value).abs().to_f64();
            assert!(
                d <= q.error + s.error,
                "n={n} x={x}: {d:e} vs {:e}",
                q.error
            );
            assert!(d <= 1e-8, "n={n} x={x}: {d:e}");
        }
    }

    #[test]
    fn large_argument_leading_terms() {
        let q = psi2_integral(PolyDoubleArg::new(2, 50.0).unwrap(), 1e-12).unwrap();
        let approx = -1.0 / 50.0 - 1.0 / 2500.0;
        assert!((q.to_f64() - approx).abs() < 1e-5);
    }
}
