use std::sync::LazyLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};

/// Highest Bernoulli index kept in the table.
pub const BERNOULLI_CAPACITY: usize = 64;

const FACTORIAL_CAPACITY: usize = 170;

/// Exact Bernoulli numbers B₀..B₆₄ (convention B₁ = −1/2) with
/// double-double images of Bₖ and Bₖ/k!.
pub struct BernoulliTable {
    exact: Vec<BigRational>,
    values: Vec<DoubleDouble>,
    over_factorial: Vec<DoubleDouble>,
}

static TABLE: LazyLock<BernoulliTable> =
    LazyLock::new(|| BernoulliTable::build(BERNOULLI_CAPACITY));

static FACTORIALS: LazyLock<Vec<DoubleDouble>> = LazyLock::new(|| {
    let mut f = BigInt::one();
    let mut out = Vec::with_capacity(FACTORIAL_CAPACITY + 1);
    out.push(DoubleDouble::ONE);
    for k in 1..=FACTORIAL_CAPACITY {
        f *= BigInt::from(k);
        out.push(rational_to_dd(&BigRational::from_integer(f.clone())));
    }
    out
});

/// Nearest double-double to an exact rational.
pub(crate) fn rational_to_dd(r: &BigRational) -> DoubleDouble {
    let hi = r.to_f64().unwrap_or(f64::NAN);
    if !hi.is_finite() {
        return DoubleDouble::from_f64(hi);
    }
    let rest = r - BigRational::from_float(hi).expect("finite");
    DoubleDouble::new(hi, rest.to_f64().unwrap_or(0.0))
}

fn binomial_row(q: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one(); q + 1];
    for i in 1..q {
        row[i] = &row[i - 1] * BigInt::from(q - i + 1) / BigInt::from(i);
    }
    row
}

impl BernoulliTable {
    fn build(capacity: usize) -> Self {
        let mut exact: Vec<BigRational> = Vec::with_capacity(capacity + 1);
        exact.push(BigRational::one());
        for q in 1..=capacity {
            // Σ_{i=0}^{q} C(q+1, i) Bᵢ = 0
            let row = binomial_row(q + 1);
            let mut acc = BigRational::zero();
            for (i, b) in exact.iter().enumerate() {
                acc += BigRational::from_integer(row[i].clone()) * b;
            }
            exact.push(-acc / BigRational::from_integer(BigInt::from(q + 1)));
        }
        let values = exact.iter().map(rational_to_dd).collect();
        let mut fact = BigInt::one();
        let mut over_factorial = Vec::with_capacity(capacity + 1);
        for (k, b) in exact.iter().enumerate() {
            if k > 0 {
                fact *= BigInt::from(k);
            }
            over_factorial.push(rational_to_dd(
                &(b / BigRational::from_integer(fact.clone())),
            ));
        }
        Self {
            exact,
            values,
            over_factorial,
        }
    }

    /// Shared table, built on first use.
    pub fn global() -> &'static BernoulliTable {
        &TABLE
    }

    pub fn capacity(&self) -> usize {
        self.exact.len() - 1
    }

    fn check(&self, k: usize) -> Result<()> {
        if k > self.capacity() {
            Err(Error::Range {
                index: k,
                capacity: self.capacity(),
            })
        } else {
            Ok(())
        }
    }

    pub fn exact(&self, k: usize) -> Result<&BigRational> {
        self.check(k)?;
        Ok(&self.exact[k])
    }

    pub fn get(&self, k: usize) -> Result<DoubleDouble> {
        self.check(k)?;
        Ok(self.values[k])
    }

    /// Bₖ / k!
    pub fn over_factorial(&self, k: usize) -> Result<DoubleDouble> {
        self.check(k)?;
        Ok(self.over_factorial[k])
    }
}

/// Bₖ rounded to `f64`.
pub fn bernoulli(k: usize) -> Result<f64> {
    BernoulliTable::global().get(k).map(DoubleDouble::to_f64)
}

/// k! in double-double, exact up to 27! and correctly rounded beyond.
pub fn factorial(k: usize) -> DoubleDouble {
    if k > FACTORIAL_CAPACITY {
        return DoubleDouble::from_f64(f64::INFINITY);
    }
    FACTORIALS[k]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(0).unwrap(), 1.0);
        assert_eq!(bernoulli(1).unwrap(), -0.5);
        assert_eq!(bernoulli(3).unwrap(), 0.0);
        assert!((bernoulli(2).unwrap() - 1.0 / 6.0).abs() < 1e-17);
        assert!((bernoulli(4).unwrap() + 1.0 / 30.0).abs() < 1e-17);
        let b12 = BernoulliTable::global().exact(12).unwrap();
        assert_eq!(*b12, BigRational::new((-691).into(), 2730.into()));
    }

    #[test]
    fn odd_indices_vanish() {
        let t = BernoulliTable::global();
        for j in 1..=(BERNOULLI_CAPACITY - 1) / 2 {
            assert!(t.exact(2 * j + 1).unwrap().is_zero());
        }
    }

    #[test]
    fn defining_recurrence_holds() {
        let t = BernoulliTable::global();
        for q in 1..t.capacity() {
            let row = binomial_row(q + 1);
            let mut acc = BigRational::zero();
            for (i, c) in row.iter().enumerate().take(q + 1) {
                acc += BigRational::from_integer(c.clone()) * t.exact(i).unwrap();
            }
            assert!(acc.is_zero(), "q = {q}");
        }
    }

    #[test]
    fn capacity_is_enforced() {
        assert_eq!(
            bernoulli(BERNOULLI_CAPACITY + 1),
            Err(Error::Range {
                index: BERNOULLI_CAPACITY + 1,
                capacity: BERNOULLI_CAPACITY
            })
        );
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0).to_f64(), 1.0);
        assert_eq!(factorial(5).to_f64(), 120.0);
        let f25 = factorial(25);
        // 25! = 15511210043330985984000000
        assert_eq!(f25.hi(), 1.5511210043330986e25);
        let back = f25 / factorial(24);
        assert!((back - 25.0).abs().to_f64() < 1e-28);
    }
}
