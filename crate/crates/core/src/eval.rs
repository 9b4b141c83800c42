use serde::{Deserialize, Serialize};
use std::fmt;

use crate::dd::DoubleDouble;

/// Evaluation strategy that produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Series,
    PolygammaRelation,
    ZetaClosedForm,
    Integral,
    Asymptotic,
    Auto,
    EulerMaclaurin,
    RecurrenceAsymptotic,
    WeierstrassProduct,
    Stirling,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::PolygammaRelation => "polygamma-relation",
            Method::ZetaClosedForm => "zeta-closed-form",
            Method::Integral => "integral",
            Method::Asymptotic => "asymptotic",
            Method::Auto => "auto",
            Method::EulerMaclaurin => "euler-maclaurin",
            Method::RecurrenceAsymptotic => "recurrence-asymptotic",
            Method::WeierstrassProduct => "weierstrass-product",
            Method::Stirling => "stirling",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A function value with an absolute error estimate and the method used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: DoubleDouble,
    pub error: f64,
    pub method: Method,
}

impl EvalResult {
    pub fn new(value: DoubleDouble, error: f64, method: Method) -> Self {
        Self {
            value,
            error,
            method,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

impl fmt::Display for EvalResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:.15e} (+/- {:.1e}, {})",
            self.value.to_f64(),
            self.error,
            self.method
        )
    }
}
