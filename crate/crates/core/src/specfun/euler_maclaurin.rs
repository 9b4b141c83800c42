use crate::dd::{DoubleDouble, DD_EPSILON};
use crate::specfun::bernoulli::{BernoulliTable, BERNOULLI_CAPACITY};

/// Result of an Euler-Maclaurin tail evaluation.
#[derive(Debug, Clone, Copy)]
pub struct EmTail {
    pub sum: DoubleDouble,
    /// Truncation plus rounding error estimate.
    pub error: f64,
    /// Number of Bernoulli correction terms used.
    pub terms: usize,
}

/// Σ_{k≥0} f(u+k) from the integral ∫_u^∞ f, the endpoint value f(u) and
/// odd derivatives at u.
///
/// `odd_derivative(j)` returns `(f^(2j-1)(u), w)` where `w` bounds the
/// magnitude of the same derivative summed over completely monotone parts of
/// `f`. For such `f` the remainder after the last included correction is
/// bounded by the first omitted one, which is what `error` reports.
pub fn em_tail<F>(integral: DoubleDouble, f0: DoubleDouble, mut odd_derivative: F) -> EmTail
where
    F: FnMut(usize) -> (DoubleDouble, f64),
{
    let table = BernoulliTable::global();
    let mut sum = integral + f0 * 0.5;
    let mut abs_sum = integral.abs().to_f64() + 0.5 * f0.abs().to_f64();
    let mut prev_mag = f64::INFINITY;
    let mut omitted = 0.0;
    let mut used = 0;
    for j in 1..=BERNOULLI_CAPACITY / 2 {
        let coeff = table.over_factorial(2 * j).expect("within capacity");
        let (d, w) = odd_derivative(j);
        let mag = coeff.abs().to_f64() * w;
        if mag > prev_mag {
            omitted = prev_mag;
            break;
        }
        if mag <= 1e-34 * sum.abs().to_f64() {
            omitted = mag;
            break;
        }
        let term = coeff * d;
        sum -= term;
        abs_sum += term.abs().to_f64();
        prev_mag = mag;
        omitted = mag;
        used = j;
    }
    let rounding = 4.0 * (used as f64 + 4.0) * DD_EPSILON * abs_sum;
    EmTail {
        sum,
        error: omitted + rounding,
        terms: used,
    }
}

/// `f^(m)(u)` for `f(t) = (t + c)^(-s)` evaluated at `t` with `v = t + c`,
/// returned as successive values for m = 0, 1, 2, ...
pub(crate) struct PowerDerivatives {
    current: DoubleDouble,
    inv_v: DoubleDouble,
    s: f64,
    m: usize,
}

impl PowerDerivatives {
    pub(crate) fn new(v: DoubleDouble, s: f64) -> Self {
        let inv_v = v.recip();
        let current = if s.fract() == 0.0 && s.abs() < 2e9 {
            inv_v.powi(s as i32)
        } else {
            (-(v.ln() * s)).exp()
        };
        Self {
            current,
            inv_v,
            s,
            m: 0,
        }
    }

    /// Returns f^(m)(u) and advances to m+1.
    pub(crate) fn next_value(&mut self) -> DoubleDouble {
        let out = self.current;
        self.current = self.current * self.inv_v * (-(self.s + self.m as f64));
        self.m += 1;
        out
    }
}

/// Table of f^(0..=max_order)(u) for f(t) = (v)^(-s), v = t + c.
pub(crate) fn power_derivative_table(
    v: DoubleDouble,
    s: f64,
    max_order: usize,
) -> Vec<DoubleDouble> {
    let mut g = PowerDerivatives::new(v, s);
    (0..=max_order).map(|_| g.next_value()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_of_inverse_squares() {
        // Σ_{k≥0} 1/(13+k)^2 = ζ(2) − Σ_{k=1}^{12} 1/k²
        let u = DoubleDouble::from(13.0);
        let derivs = power_derivative_table(u, 2.0, 2 * BERNOULLI_CAPACITY);
        let integral = u.recip();
        let tail = em_tail(integral, derivs[0], |j| {
            let d = derivs[2 * j - 1];
            (d, d.abs().to_f64())
        });
        let mut head = DoubleDouble::ZERO;
        for k in 1..13 {
            head += DoubleDouble::from(k as f64).square().recip();
        }
        let zeta2 = DoubleDouble::PI.square() / 6.0;
        let expected = zeta2 - head;
        assert!(
            (tail.sum - expected).abs().to_f64() < 1e-30,
            "{:?}",
            tail.sum - expected
        );
        assert!(tail.error < 1e-30);
    }

    #[test]
    fn power_derivatives_match_closed_form() {
        let v = DoubleDouble::from(3.0);
        let d = power_derivative_table(v, 2.5, 3);
        let base = 3f64.powf(-2.5);
        assert!((d[0].to_f64() - base).abs() < 1e-15 * base);
        assert!((d[1].to_f64() + 2.5 * base / 3.0).abs() < 1e-15 * base);
        assert!((d[3].to_f64() + 2.5 * 3.5 * 4.5 * base / 27.0).abs() < 1e-14 * base);
    }
}
