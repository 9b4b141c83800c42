//! The poly-double gamma functions ψ₂⁽ⁿ⁾(x) (n ≥ 2), the di-double gamma
//! ψ₂(x) and log G(x) for the Barnes G function.

mod asymptotic;
mod barnes;
mod didouble;
mod integral;
mod relation;
mod series;

pub use asymptotic::{
    bernoulli_remainder, psi2_asymptotic, psi2_asymptotic_next, sigma_terms, AsymptoticParams,
};
pub use barnes::log_barnes_g;
pub use didouble::psi2_didouble;
pub use integral::{psi2_integral, Psi2Kernel};
pub use relation::{psi2_from_polygamma, psi2_zeta_form};
pub use series::{psi2_series, series_sum};

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Result};
use crate::eval::{EvalResult, Method};
use crate::specfun::{polygamma, Precision};

/// Order n ≥ 2 and argument x > 0 of ψ₂⁽ⁿ⁾(x).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolyDoubleArg {
    pub n: u32,
    pub x: f64,
}

impl PolyDoubleArg {
    pub fn new(n: u32, x: f64) -> Result<Self> {
        let arg = Self { n, x };
        arg.validate()?;
        Ok(arg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(domain(format!(
                "poly-double gamma needs n >= 2, got n = {}",
                self.n
            )));
        }
        if !(self.x > 0.0) || !self.x.is_finite() {
            return Err(domain(format!(
                "poly-double gamma needs x > 0, got x = {}",
                self.x
            )));
        }
        Ok(())
    }
}

pub(crate) fn sign(k: u32) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// ψ₂⁽ⁿ⁾(x) by the requested method.
///
/// `Auto` sums the series directly when `x <= prec.shift_threshold` or
/// `n >= 8`; otherwise it uses the recurrence-shifted asymptotic expansion
/// with six Bernoulli terms, falling back to the series if that expansion
/// cannot meet the tolerance.
pub fn psi2_eval(arg: PolyDoubleArg, method: Method, prec: Precision) -> Result<EvalResult> {
    arg.validate()?;
    prec.validate()?;
    match method {
        Method::Series => psi2_series(arg, prec),
        Method::PolygammaRelation => psi2_from_polygamma(arg, prec),
        Method::ZetaClosedForm => psi2_zeta_form(arg, prec),
        Method::Integral => psi2_integral(arg, prec.abs_tol.max(1e-13)),
        Method::Asymptotic => psi2_asymptotic(arg, AsymptoticParams::default()),
        Method::Auto => {
            if arg.x <= prec.shift_threshold || arg.n >= 8 {
                return psi2_series(arg, prec);
            }
            let params = AsymptoticParams {
                shift_to: prec.shift_threshold,
                ..AsymptoticParams::default()
            };
            match psi2_asymptotic(arg, params) {
                Ok(r) if prec.accepts(r.error, r.value.abs().to_f64()) => Ok(r),
                _ => psi2_series(arg, prec),
            }
        }
        other => Err(invalid(format!(
            "method {other} does not evaluate the poly-double gamma"
        ))),
    }
}

/// Residual ψ₂⁽ⁿ⁾(x+1) + ψ⁽ⁿ⁾(x) − ψ₂⁽ⁿ⁾(x) with the combined error of
/// the three evaluations.
pub fn recurrence_residual(arg: PolyDoubleArg, prec: Precision) -> Result<(f64, f64)> {
    let next = psi2_series(PolyDoubleArg::new(arg.n, arg.x + 1.0)?, prec)?;
    let here = psi2_series(arg, prec)?;
    let pg = polygamma(arg.n, arg.x, prec)?;
    let r = next.value + pg.value - here.value;
    Ok((r.to_f64(), next.error + here.error + pg.error))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argument_validation() {
        assert!(PolyDoubleArg::new(1, 1.0).is_err());
        assert!(PolyDoubleArg::new(2, 0.0).is_err());
        assert!(PolyDoubleArg::new(2, f64::INFINITY).is_err());
        assert!(PolyDoubleArg::new(2, 0.5).is_ok());
    }

    #[test]
    fn auto_dispatch() {
        let p = Precision::default();
        let r = psi2_eval(PolyDoubleArg::new(5, 0.1).unwrap(), Method::Auto, p).unwrap();
        assert_eq!(r.method, Method::Series);
        let s = psi2_series(PolyDoubleArg::new(5, 0.1).unwrap(), p).unwrap();
        assert_eq!(r.value, s.value);

        let r = psi2_eval(PolyDoubleArg::new(2, 1.0).unwrap(), Method::Auto, p).unwrap();
        assert!((r.to_f64() + std::f64::consts::PI.powi(2) / 3.0).abs() < 1e-14);

        let arg = PolyDoubleArg::new(3, 40.0).unwrap();
        let r = psi2_eval(arg, Method::Auto, p).unwrap();
        assert_eq!(r.method, Method::Asymptotic);
        let s = psi2_series(arg, p).unwrap();
        assert!((r.value - s.value).abs().to_f64() < 1e-14);

        let arg = PolyDoubleArg::new(9, 40.0).unwrap();
        assert_eq!(
            psi2_eval(arg, Method::Auto, p).unwrap().method,
            Method::Series
        );
    }

    #[test]
    fn recurrence_example() {
        // ψ₂⁽²⁾(3) = ψ₂⁽²⁾(2) − ψ⁽²⁾(2)
        let p = Precision::default();
        let v = psi2_eval(PolyDoubleArg::new(2, 3.0).unwrap(), Method::Auto, p).unwrap();
        assert!((v.to_f64() + 0.4816405210).abs() < 1e-9, "{}", v);
    }

    #[test]
    fn every_method_agrees_at_a_point() {
        let p = Precision::default();
        let arg = PolyDoubleArg::new(4, 2.5).unwrap();
        let s = psi2_series(arg, p).unwrap();
        for m in [
            Method::PolygammaRelation,
            Method::ZetaClosedForm,
            Method::Integral,
            Method::Asymptotic,
            Method::Auto,
        ] {
            let r = psi2_eval(arg, m, p).unwrap();
            let d = (r.value - s.value).abs().to_f64();
            assert!(
                d <= r.error + s.error + 1e-12,
                "{m}: {d:e} vs {:e}",
                r.error
            );
        }
        assert!(psi2_eval(arg, Method::Stirling, p).is_err());
    }
}
