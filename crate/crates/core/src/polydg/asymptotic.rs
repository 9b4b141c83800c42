use serde::{Deserialize, Serialize};

use crate::dd::{DoubleDouble, DD_EPSILON};
use crate::error::{domain, invalid, Error, Result};
use crate::eval::{EvalResult, Method};
use crate::polydg::{sign, PolyDoubleArg};
use crate::quadrature::{integrate_semi_infinite, IntegrandSpec};
use crate::specfun::{factorial, polygamma_dd, BernoulliTable, Precision, BERNOULLI_CAPACITY};

/// Controls for the Bernoulli expansion of ψ₂⁽ⁿ⁾(y+1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticParams {
    /// Number N of Bernoulli terms B₂..B_{2N}.
    pub terms: usize,
    /// Evaluate the exact remainder integral instead of bounding it.
    pub include_remainder: bool,
    /// Absolute tolerance of the remainder quadrature.
    pub quad_tol: f64,
    /// Expansion point y is raised to at least this value by the recurrence.
    pub shift_to: f64,
}

impl Default for AsymptoticParams {
    fn default() -> Self {
        Self {
            terms: 6,
            include_remainder: false,
            quad_tol: 1e-12,
            shift_to: 12.0,
        }
    }
}

impl AsymptoticParams {
    pub fn with_remainder(terms: usize) -> Self {
        Self {
            terms,
            include_remainder: true,
            shift_to: 1.0,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.terms < 1 || self.terms > BERNOULLI_CAPACITY / 2 {
            return Err(invalid(format!(
                "number of Bernoulli terms must lie in 1..={}, got {}",
                BERNOULLI_CAPACITY / 2,
                self.terms
            )));
        }
        if !(self.quad_tol > 0.0) {
            return Err(invalid("remainder quadrature tolerance must be positive"));
        }
        if !(self.shift_to > 0.0) || !self.shift_to.is_finite() {
            return Err(invalid("expansion shift target must be positive"));
        }
        Ok(())
    }
}

/// t/(eᵗ−1) − Σ_{k=0}^{2N} Bₖ tᵏ/k!, the remainder of the Bernoulli
/// generating function after 2N+1 terms.
pub fn bernoulli_remainder(t: f64, terms: usize) -> f64 {
    if t < 2.0 {
        remainder_series(t, terms)
    } else {
        remainder_direct(t, terms)
    }
}

// convergent tail Σ_{k>2N} Bₖ tᵏ/k!, radius 2π
fn remainder_series(t: f64, terms: usize) -> f64 {
    let table = BernoulliTable::global();
    let mut s = 0.0;
    let mut k = BERNOULLI_CAPACITY;
    while k > 2 * terms {
        if k.is_multiple_of(2) {
            s += table.over_factorial(k).expect("within capacity").to_f64() * t.powi(k as i32);
        }
        k -= 1;
    }
    s
}

fn remainder_direct(t: f64, terms: usize) -> f64 {
    let table = BernoulliTable::global();
    let td = DoubleDouble::from(t);
    let gen = if t > 700.0 {
        DoubleDouble::ZERO
    } else {
        td / td.exp_m1()
    };
    let mut poly = DoubleDouble::ZERO;
    for k in (0..=2 * terms).rev() {
        poly = poly * td + table.over_factorial(k).expect("within capacity");
    }
    (gen - poly).to_f64()
}

/// Derived Bernoulli corrections (−1)ⁿ Σ_{k=0}^{N−1} B_{2k+2}(2k+n)!/((2k+2)! y^{2k+n+1}),
/// one entry per k.
pub fn sigma_terms(n: u32, y: f64, terms: usize) -> Vec<f64> {
    sigma_terms_dd(n, DoubleDouble::from(y), terms)
        .into_iter()
        .map(DoubleDouble::to_f64)
        .collect()
}

fn sigma_terms_dd(n: u32, y: DoubleDouble, terms: usize) -> Vec<DoubleDouble> {
    let table = BernoulliTable::global();
    let inv_y = y.recip();
    let s = sign(n);
    (0..terms)
        .map(|k| {
            let coeff = table.over_factorial(2 * k + 2).expect("within capacity")
                * factorial(2 * k + n as usize);
            coeff * inv_y.powi((2 * k) as i32 + n as i32 + 1) * s
        })
        .collect()
}

/// ψ₂⁽ⁿ⁾(y+1) = −yψ⁽ⁿ⁾(y+1) − (n+1)ψ⁽ⁿ⁻¹⁾(y+1)
///   + (−1)ⁿ[(n−2)!/y^{n−1} − (n−1)!/(2yⁿ)] + σ + τ
fn expansion(n: u32, y: DoubleDouble, params: AsymptoticParams) -> Result<EvalResult> {
    params.validate()?;
    let yf = y.to_f64();
    if !(yf > 0.0) || !yf.is_finite() {
        return Err(domain(format!(
            "expansion point must be positive, got {yf}"
        )));
    }
    let prec = Precision::default();
    let y1 = y + 1.0;
    let (pn, en) = polygamma_dd(n, y1, prec);
    let (pm, em) = polygamma_dd(n - 1, y1, prec);
    let s = sign(n);
    let inv_y = y.recip();
    let a = -(y * pn);
    let b = pm * -((n + 1) as f64);
    let c = factorial(n as usize - 2) * inv_y.powi(n as i32 - 1) * s;
    let d = factorial(n as usize - 1) * inv_y.powi(n as i32) * (-0.5 * s);
    let sig = sigma_terms_dd(n, y, params.terms);
    let sigma: DoubleDouble = sig.iter().copied().sum();
    let mut value = a + b + c + d + sigma;
    let scale = a.abs().to_f64()
        + b.abs().to_f64()
        + c.abs().to_f64()
        + d.abs().to_f64()
        + sigma.abs().to_f64();
    let mut error = yf * en + (n + 1) as f64 * em + 16.0 * DD_EPSILON * scale;
    if params.include_remainder {
        let terms = params.terms;
        let table = BernoulliTable::global();
        let envelope = 1.0
            + (0..=2 * terms)
                .map(|k| {
                    table
                        .over_factorial(k)
                        .expect("within capacity")
                        .abs()
                        .to_f64()
                })
                .sum::<f64>();
        let ni = n as i32;
        let spec = IntegrandSpec::new(move |t: f64| {
            if t == 0.0 {
                return 0.0;
            }
            t.powi(ni - 2) * (-yf * t).exp() * bernoulli_remainder(t, terms)
        })
        .with_decay(yf, (n as usize - 2 + 2 * terms) as f64, envelope)
        .with_origin_order((n as usize + 2 * terms) as f64);
        let q = integrate_semi_infinite(&spec, params.quad_tol).map_err(|e| match e {
            Error::Convergence { best, error: qe } => Error::Convergence {
                best: (value + s * best).to_f64(),
                error: error + qe,
            },
            other => other,
        })?;
        value += s * q.value;
        error += q.error_estimate;
    } else {
        // The remainder has the sign of, and is bounded by, the first
        // omitted Bernoulli term.
        let k = params.terms;
        let omitted = if 2 * k + 2 <= BERNOULLI_CAPACITY {
            let coeff = table_coeff(2 * k + 2) * factorial(2 * k + n as usize);
            (coeff * inv_y.powi((2 * k) as i32 + n as i32 + 1))
                .abs()
                .to_f64()
        } else {
            sig.last().map(|v| v.abs().to_f64()).unwrap_or(0.0)
        };
        error += omitted;
    }
    Ok(EvalResult::new(value, error, Method::Asymptotic))
}

fn table_coeff(k: usize) -> DoubleDouble {
    BernoulliTable::global()
        .over_factorial(k)
        .expect("within capacity")
}

/// ψ₂⁽ⁿ⁾(x+1) from the Bernoulli expansion at y = x, without any shift.
pub fn psi2_asymptotic_next(arg: PolyDoubleArg, params: AsymptoticParams) -> Result<EvalResult> {
    arg.validate()?;
    expansion(arg.n, DoubleDouble::from(arg.x), params)
}

/// ψ₂⁽ⁿ⁾(x) from the Bernoulli expansion of ψ₂⁽ⁿ⁾(y+1) at y = x−1.
///
/// If y is below `params.shift_to` it is raised by whole steps m and
/// ψ₂⁽ⁿ⁾(x) = ψ₂⁽ⁿ⁾(x+m) + Σ_{i<m} ψ⁽ⁿ⁾(x+i) restores the value.
pub fn psi2_asymptotic(arg: PolyDoubleArg, params: AsymptoticParams) -> Result<EvalResult> {
    arg.validate()?;
    params.validate()?;
    let x = DoubleDouble::from(arg.x);
    let y0 = x - 1.0;
    let m = (params.shift_to - y0.to_f64()).ceil().max(0.0) as usize;
    let mut r = expansion(arg.n, y0 + m as f64, params)?;
    let prec = Precision::default();
    for i in 0..m {
        let (p, e) = polygamma_dd(arg.n, x + i as f64, prec);
        r.value += p;
        r.error += e;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polydg::psi2_series;

    fn series(n: u32, x: f64) -> EvalResult {
        psi2_series(PolyDoubleArg::new(n, x).unwrap(), Precision::default()).unwrap()
    }

    #[test]
    fn expansion_at_ten_gives_value_at_eleven() {
        let arg = PolyDoubleArg::new(3, 10.0).unwrap();
        let r = psi2_asymptotic_next(arg, AsymptoticParams::with_remainder(4)).unwrap();
        let s = series(3, 11.0);
        assert!((r.value - s.value).abs().to_f64() < 1e-9);
    }

    #[test]
    fn identity_with_remainder() {
        for n in 2..=5 {
            for &x in &[1.0, 1.5, 3.0, 7.25, 20.0] {
                for terms in [2, 4, 6] {
                    let arg = PolyDoubleArg::new(n, x).unwrap();
                    let r = psi2_asymptotic(arg, AsymptoticParams::with_remainder(terms)).unwrap();
                    let s = series(n, x);
                    let d = (r.value - s.value).abs().to_f64();
                    assert!(d < 1e-9, "n={n} x={x} N={terms}: {d:e}");
                    assert!(
                        d <= r.error + s.error,
                        "n={n} x={x} N={terms}: {d:e} {:e}",
                        r.error
                    );
                }
            }
        }
    }

    #[test]
    fn truncated_expansion_error_bound_holds() {
        for n in 2..=6 {
            for &x in &[13.0, 20.0, 55.5, 400.0] {
                for terms in [1, 3, 6] {
                    let arg = PolyDoubleArg::new(n, x).unwrap();
                    let params = AsymptoticParams {
                        terms,
                        ..AsymptoticParams::default()
                    };
                    let r = psi2_asymptotic(arg, params).unwrap();
                    let s = series(n, x);
                    let d = (r.value - s.value).abs().to_f64();
                    assert!(
                        d <= r.error + s.error,
                        "n={n} x={x} N={terms}: {d:e} > {:e}",
                        r.error
                    );
                }
            }
        }
    }

    #[test]
    fn large_argument_scaling() {
        let params = AsymptoticParams {
            terms: 3,
            ..AsymptoticParams::default()
        };
        let x = 1e4;
        let r = psi2_asymptotic(PolyDoubleArg::new(2, x).unwrap(), params).unwrap();
        let scaled = x * r.to_f64();
        assert!((scaled - (-1.0 - 1.0 / x)).abs() < 1e-7);
        assert!(((scaled + 1.0).abs() - 1e-4).abs() < 1e-6);
        let x = 4e4;
        let r = psi2_asymptotic(PolyDoubleArg::new(2, x).unwrap(), params).unwrap();
        assert!((x * r.to_f64() + 1.0).abs() < 1e-4);
    }

    #[test]
    fn remainder_branches_agree() {
        for terms in [1, 2, 4, 6] {
            for t in [0.5, 1.5, 2.0, 2.5] {
                let a = remainder_series(t, terms);
                let b = remainder_direct(t, terms);
                assert!((a - b).abs() <= 1e-14 * a.abs(), "N={terms} t={t}: {a} {b}");
            }
        }
    }

    #[test]
    fn params_are_validated() {
        let bad = AsymptoticParams {
            terms: 0,
            ..AsymptoticParams::default()
        };
        assert!(psi2_asymptotic(PolyDoubleArg::new(2, 3.0).unwrap(), bad).is_err());
        let bad = AsymptoticParams {
            terms: 40,
            ..AsymptoticParams::default()
        };
        assert!(bad.validate().is_err());
    }
}
