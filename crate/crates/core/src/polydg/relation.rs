use crate::dd::{DoubleDouble, DD_EPSILON};
use crate::error::Result;
use crate::eval::{EvalResult, Method};
use crate::polydg::{sign, PolyDoubleArg};
use crate::specfun::{factorial, hurwitz_zeta, polygamma, Precision};

/// ψ₂⁽ⁿ⁾(x) = −n ψ⁽ⁿ⁻¹⁾(x) + (1−x) ψ⁽ⁿ⁾(x).
pub fn psi2_from_polygamma(arg: PolyDoubleArg, prec: Precision) -> Result<EvalResult> {
    arg.validate()?;
    let a = polygamma(arg.n - 1, arg.x, prec)?;
    let b = polygamma(arg.n, arg.x, prec)?;
    let c = DoubleDouble::ONE - arg.x;
    let first = a.value * -(arg.n as f64);
    let second = c * b.value;
    let value = first + second;
    let error = arg.n as f64 * a.error
        + c.abs().to_f64() * b.error
        + 4.0 * DD_EPSILON * (first.abs().to_f64() + second.abs().to_f64());
    Ok(EvalResult::new(value, error, Method::PolygammaRelation))
}

/// ψ₂⁽ⁿ⁾(x) = (−1)^{n+1} n! (ζ(n, x) + (1−x) ζ(n+1, x)).
pub fn psi2_zeta_form(arg: PolyDoubleArg, prec: Precision) -> Result<EvalResult> {
    arg.validate()?;
    let z1 = hurwitz_zeta(arg.n, arg.x, prec)?;
    let z2 = hurwitz_zeta(arg.n + 1, arg.x, prec)?;
    let c = DoubleDouble::ONE - arg.x;
    let f = factorial(arg.n as usize);
    let inner = z1.value + c * z2.value;
    let value = inner * f * sign(arg.n + 1);
    let error = f.to_f64() * (z1.error + c.abs().to_f64() * z2.error)
        + 4.0 * DD_EPSILON * f.to_f64() * (z1.value.abs().to_f64() + (c * z2.value).abs().to_f64());
    Ok(EvalResult::new(value, error, Method::ZetaClosedForm))
}
