use crate::dd::{DoubleDouble, DD_EPSILON};
use crate::error::{domain, Error, Result};
use crate::eval::{EvalResult, Method};
use crate::specfun::bernoulli::{factorial, BernoulliTable, BERNOULLI_CAPACITY};
use crate::specfun::zeta::zeta_sum;
use crate::specfun::Precision;

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} requires x > 0, got x = {x}")))
    }
}

/// Asymptotic Bernoulli sum Σ_{j≥1} c_j(A) with c_j = B_{2j}·w_j(A); stops
/// at the first term that grows or becomes negligible. Returns
/// (sum, first omitted magnitude).
fn asymptotic_bernoulli_sum<F>(mut term: F) -> (DoubleDouble, f64)
where
    F: FnMut(usize, DoubleDouble) -> DoubleDouble,
{
    let table = BernoulliTable::global();
    let mut sum = DoubleDouble::ZERO;
    let mut prev = f64::INFINITY;
    for j in 1..=BERNOULLI_CAPACITY / 2 {
        let t = term(j, table.get(2 * j).expect("within capacity"));
        let mag = t.abs().to_f64();
        if mag > prev {
            return (sum, prev);
        }
        if mag <= 1e-34 * sum.abs().to_f64().max(1e-300) {
            return (sum, mag);
        }
        sum += t;
        prev = mag;
    }
    (sum, prev)
}

/// Digamma ψ(x) = Γ′(x)/Γ(x).
pub fn digamma(x: f64, prec: Precision) -> Result<EvalResult> {
    prec.validate()?;
    check_positive("digamma", x)?;
    let m = (prec.shift_target(0.0) - x).ceil().max(0.0) as usize;
    let mut head = DoubleDouble::ZERO;
    for k in (0..m).rev() {
        head += (DoubleDouble::from(x) + k as f64).recip();
    }
    let a = DoubleDouble::from(x) + m as f64;
    let inv_a2 = a.square().recip();
    let mut pow = DoubleDouble::ONE;
    // ψ(A) = ln A − 1/(2A) − Σ B_{2j}/(2j A^{2j})
    let (corr, omitted) = asymptotic_bernoulli_sum(|j, b| {
        pow *= inv_a2;
        b * pow / (2 * j) as f64
    });
    let ln_a = a.ln();
    let value = ln_a - a.recip() * 0.5 - corr - head;
    let rounding =
        8.0 * (m as f64 + 8.0) * DD_EPSILON * (ln_a.abs().to_f64() + head.abs().to_f64());
    let error = omitted + rounding;
    if !prec.accepts(error, value.abs().to_f64()) {
        return Err(Error::Convergence {
            best: value.to_f64(),
            error,
        });
    }
    Ok(EvalResult::new(value, error, Method::RecurrenceAsymptotic))
}

/// Polygamma ψ⁽ⁿ⁾(x); n = 0 is the digamma function.
///
/// For n ≥ 1 the argument is shifted upward by the recurrence
/// ψ⁽ⁿ⁾(x) = ψ⁽ⁿ⁾(x+1) − (−1)ⁿ n!/x^{n+1} and the asymptotic series in
/// Bernoulli numbers is summed at the shifted point.
pub fn polygamma(n: u32, x: f64, prec: Precision) -> Result<EvalResult> {
    if n == 0 {
        return digamma(x, prec);
    }
    prec.validate()?;
    check_positive("polygamma", x)?;
    let (value, error) = polygamma_dd(n, DoubleDouble::from(x), prec);
    if !prec.accepts(error, value.abs().to_f64()) {
        return Err(Error::Convergence {
            best: value.to_f64(),
            error,
        });
    }
    Ok(EvalResult::new(value, error, Method::RecurrenceAsymptotic))
}

/// ψ⁽ⁿ⁾(a) for n ≥ 1 at a double-double argument, with its error estimate.
pub(crate) fn polygamma_dd(n: u32, a: DoubleDouble, prec: Precision) -> (DoubleDouble, f64) {
    debug_assert!(n >= 1);
    let (z, zerr) = zeta_sum(n + 1, a, prec.shift_target(n as f64 + 1.0));
    let f = factorial(n as usize);
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    let value = z * f * sign;
    (
        value,
        zerr * f.to_f64() + 4.0 * DD_EPSILON * value.abs().to_f64(),
    )
}

/// ln Γ(x) for x > 0 by Stirling's series after an upward shift.
pub fn log_gamma(x: f64) -> Result<EvalResult> {
    log_gamma_with(x, Precision::default())
}

fn log_gamma_with(x: f64, prec: Precision) -> Result<EvalResult> {
    prec.validate()?;
    check_positive("log_gamma", x)?;
    let m = (prec.shift_target(0.0) - x).ceil().max(0.0) as usize;
    let mut prod = DoubleDouble::ONE;
    for k in 0..m {
        prod *= DoubleDouble::from(x) + k as f64;
    }
    let a = DoubleDouble::from(x) + m as f64;
    let inv_a = a.recip();
    let inv_a2 = inv_a.square();
    let mut pow = inv_a;
    // Σ B_{2j} / (2j(2j−1) A^{2j−1})
    let (corr, omitted) = asymptotic_bernoulli_sum(|j, b| {
        let t = b * pow / ((2 * j) * (2 * j - 1)) as f64;
        pow *= inv_a2;
        t
    });
    let ln_a = a.ln();
    let main = (a - 0.5) * ln_a - a + DoubleDouble::LN_2PI * 0.5;
    let ln_prod = if m > 0 { prod.ln() } else { DoubleDouble::ZERO };
    let value = main + corr - ln_prod;
    let rounding = 8.0
        * DD_EPSILON
        * ((a * ln_a).abs().to_f64() + a.to_f64() + ln_prod.abs().to_f64() + m as f64);
    let error = omitted + rounding;
    Ok(EvalResult::new(value, error, Method::Stirling))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const ZETA3: DoubleDouble = DoubleDouble::from_parts(1.2020569031595942, 4.875891010379532e-17);

    fn p() -> Precision {
        Precision::default()
    }

    #[test]
    fn digamma_at_one_and_half() {
        let d1 = digamma(1.0, p()).unwrap();
        assert!((d1.value + DoubleDouble::EULER_GAMMA).abs().to_f64() < 1e-30);
        // ψ(1/2) = −γ − 2 ln 2
        let dh = digamma(0.5, p()).unwrap();
        let expected = -DoubleDouble::EULER_GAMMA - DoubleDouble::LN_2 * 2.0;
        assert!((dh.value - expected).abs().to_f64() < 1e-29);
    }

    #[test]
    fn polygamma_examples() {
        let z2 = DoubleDouble::PI.square() / 6.0;
        let t = polygamma(1, 1.0, p()).unwrap();
        assert!((t.value - z2).abs().to_f64() < 1e-29);
        let t2 = polygamma(2, 1.0, p()).unwrap();
        assert!((t2.value + ZETA3 * 2.0).abs().to_f64() < 1e-29);
        assert!((t2.to_f64() + 2.4041138063).abs() < 1e-10);
        let t22 = polygamma(2, 2.0, p()).unwrap();
        assert!(((t22.value - t2.value) - 2.0).abs().to_f64() < 1e-29);
    }

    #[test]
    fn polygamma_domain() {
        assert!(matches!(polygamma(3, 0.0, p()), Err(Error::Domain(_))));
        assert!(matches!(polygamma(0, -2.0, p()), Err(Error::Domain(_))));
        assert!(matches!(log_gamma(0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn log_gamma_examples() {
        assert!(log_gamma(1.0).unwrap().value.abs().to_f64() < 1e-30);
        assert!(log_gamma(2.0).unwrap().value.abs().to_f64() < 1e-30);
        let l3 = log_gamma(3.0).unwrap();
        assert!((l3.value - DoubleDouble::LN_2).abs().to_f64() < 1e-30);
        // Γ(1/2) = √π
        let lh = log_gamma(0.5).unwrap();
        assert!((lh.value - DoubleDouble::LN_PI * 0.5).abs().to_f64() < 1e-30);
    }

    #[test]
    fn log_gamma_large_argument() {
        // ln Γ(1e6) = 12815504.569147612...
        let l = log_gamma(1e6).unwrap();
        assert!((l.to_f64() - 12815504.569147612).abs() < 1e-8);
        assert!(l.error < 1e-12);
    }

    #[test]
    fn polygamma_limit_form() {
        for n in 1..=6u32 {
            let x = 1e4;
            let v = polygamma(n, x, p()).unwrap().to_f64();
            let limit = if n % 2 == 1 { 1.0 } else { -1.0 } * factorial(n as usize - 1).to_f64();
            let scaled = v * x.powi(n as i32);
            assert!(((scaled - limit) / limit).abs() < 1e-2);
        }
    }

    proptest! {
        #[test]
        fn polygamma_recurrence(n in 1u32..=8, lx in (0.1f64).ln()..(100f64).ln()) {
            // dyadic so that x + 1 is exact
            let x = (lx.exp() * 1024.0).round() / 1024.0;
            let a = polygamma(n, x + 1.0, p()).unwrap();
            let b = polygamma(n, x, p()).unwrap();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let step = DoubleDouble::from(x).powi(-(n as i32 + 1)) * factorial(n as usize) * sign;
            let resid = (a.value - b.value - step).abs().to_f64();
            prop_assert!(resid <= 10.0 * 1e-12 * b.value.abs().to_f64().max(1.0));
            prop_assert!(resid <= a.error + b.error + 1e-28 * b.value.abs().to_f64().max(1.0),
                "resid {resid:e} errors {:e} {:e} value {}", a.error, b.error, b.value);
        }

        #[test]
        fn log_gamma_recurrence(x in 0.5f64..1e3) {
            let a = log_gamma(x + 1.0).unwrap();
            let b = log_gamma(x).unwrap();
            let resid = (a.value - b.value - DoubleDouble::from(x).ln()).abs().to_f64();
            prop_assert!(resid < 1e-12, "{resid}");
        }
    }
}
