//! Poly-double gamma functions ψ₂⁽ⁿ⁾(x), the di-double gamma ψ₂(x) and
//! log Barnes G, evaluated by several independent methods with explicit
//! error estimates, plus numerical verification of the inequalities and
//! complete-monotonicity properties these functions satisfy.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dd;
pub mod error;
pub mod eval;
pub mod polydg;
pub mod quadrature;
pub mod specfun;
pub mod verify;

pub use dd::DoubleDouble;
pub use error::{Error, Result};
pub use eval::{EvalResult, Method};
