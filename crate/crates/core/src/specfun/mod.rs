//! Bernoulli numbers, factorials, Hurwitz zeta, digamma/polygamma and
//! log-gamma with explicit absolute error estimates.

mod bernoulli;
mod euler_maclaurin;
mod gamma;
mod zeta;

pub use bernoulli::{bernoulli, factorial, BernoulliTable, BERNOULLI_CAPACITY};
pub(crate) use euler_maclaurin::power_derivative_table as euler_maclaurin_power_table;
pub use euler_maclaurin::{em_tail, EmTail};
pub(crate) use gamma::polygamma_dd;
pub use gamma::{digamma, log_gamma, polygamma};
pub use zeta::hurwitz_zeta;
pub(crate) use zeta::zeta_sum as zeta_sum_dd;

use serde::{Deserialize, Serialize};

use crate::dd::DoubleDouble;
use crate::error::{invalid, Result};

/// Accuracy controls shared by every evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Precision {
    /// Target absolute error.
    pub abs_tol: f64,
    /// Cap on directly summed series terms.
    pub max_terms: usize,
    /// Argument size above which asymptotic expansions are used.
    pub shift_threshold: f64,
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            max_terms: 100_000,
            shift_threshold: 12.0,
        }
    }
}

impl Precision {
    pub fn with_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !self.abs_tol.is_finite() {
            return Err(invalid(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if self.max_terms < 16 {
            return Err(invalid(format!(
                "max_terms must be at least 16, got {}",
                self.max_terms
            )));
        }
        if !(self.shift_threshold >= 8.0) || !self.shift_threshold.is_finite() {
            return Err(invalid(format!(
                "shift_threshold must be at least 8, got {}",
                self.shift_threshold
            )));
        }
        Ok(())
    }

    /// Argument to which a power-law sum of order `s` is shifted before its
    /// Euler-Maclaurin tail is used.
    pub(crate) fn shift_target(&self, s: f64) -> f64 {
        self.shift_threshold.max(12.0 + 0.5 * s)
    }

    /// Whether `err` is acceptable for a value of magnitude `mag`.
    pub(crate) fn accepts(&self, err: f64, mag: f64) -> bool {
        err <= self.abs_tol * mag.max(1.0)
    }
}

/// Mathematical constants at double-double precision.
#[derive(Debug, Clone, Copy)]
pub struct Constants {
    pub euler_gamma: DoubleDouble,
    pub log_two_pi: DoubleDouble,
    pub pi: DoubleDouble,
}

pub const CONSTANTS: Constants = Constants {
    euler_gamma: DoubleDouble::EULER_GAMMA,
    log_two_pi: DoubleDouble::LN_2PI,
    pi: DoubleDouble::PI,
};
