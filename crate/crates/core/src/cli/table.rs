//! Numeric tables behind the `figure` and `limit` subcommands.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::polydg::{psi2_eval, PolyDoubleArg};
use crate::specfun::{factorial, Precision};
use crate::verify::{f_derivative, lemma_i1, psi2_approx, Grid, Psi2Orders};
use crate::Method;

/// Column headers and rows of f64 values.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    /// CSV with a header row; values carry 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format!("{v:.16e}")))?;
        }
        w.flush()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.headers.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

fn build<F>(headers: &[&str], xs: Vec<f64>, f: F) -> Result<Table>
where
    F: Fn(f64) -> Result<Vec<f64>> + Sync,
{
    let rows = xs
        .par_iter()
        .map(|&x| {
            let mut row = vec![x];
            row.extend(f(x)?);
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        headers: headers.iter().map(|h| h.to_string()).collect(),
        rows,
    })
}

/// 400 linear points on (0.05, 4]: the left end itself is skipped.
fn plot_range() -> Vec<f64> {
    let step = (4.0 - 0.05) / 400.0;
    (1..=400)
        .map(|i| {
            if i == 400 {
                4.0
            } else {
                0.05 + step * i as f64
            }
        })
        .collect()
}

fn f_table(omega: f64, negate: bool, prec: Precision) -> Result<Table> {
    let headers: &[&str] = if negate {
        &["x", "minus_F", "d1", "d2", "d3", "d4"]
    } else {
        &["x", "F", "d1", "d2", "d3", "d4"]
    };
    let s = if negate { -1.0 } else { 1.0 };
    build(headers, plot_range(), |x| {
        let t = Psi2Orders::new(x, 2, 8, prec)?;
        Ok((0..=4)
            .map(|k| s * f_derivative(3, omega, k, &t).to_f64())
            .collect())
    })
}

pub const FIGURE_IDS: std::ops::RangeInclusive<u8> = 1..=6;

/// Data for figure `id`.
pub fn figure_table(id: u8, prec: Precision) -> Result<Table> {
    match id {
        1 => build(
            &["x", "d0", "d1", "d2", "d3", "d4", "d5"],
            plot_range(),
            |x| {
                (3..=8)
                    .map(|q| psi2_approx(q, x, prec).map(|a| a.to_f64()))
                    .collect()
            },
        ),
        2 => build(&["x", "lhs", "rhs"], plot_range(), |x| {
            let p = |y| psi2_approx(2, y, prec);
            let (a, b, c) = (p(x)?, p(x + 1.0)?, p(x + 2.0)?);
            Ok(vec![(b * b).to_f64(), (a * c).to_f64()])
        }),
        3 => {
            let g = Grid::logarithmic(1.0, 40_000.0, 200)?;
            build(&["x", "x_psi2_2"], g.points(), |x| {
                let v = psi2_eval(PolyDoubleArg::new(2, x)?, Method::Auto, prec)?;
                Ok(vec![(v.value * x).to_f64()])
            })
        }
        4 => {
            let g = Grid::linear(1.01, 1.99, 100)?;
            build(&["a", "I1_n3", "I1_n4"], g.points(), |a| {
                Ok(vec![
                    lemma_i1(3, a, 1e-12)?.value,
                    lemma_i1(4, a, 1e-12)?.value,
                ])
            })
        }
        5 => f_table(0.25, false, prec),
        6 => f_table(0.75, true, prec),
        _ => Err(invalid(format!("figure id must lie in 1..=6, got {id}"))),
    }
}

/// Target of x^{n−1}·ψ₂⁽ⁿ⁾(x) as x → ∞.
pub fn limit_target(n: u32) -> f64 {
    let s = if n % 2 == 1 { 1.0 } else { -1.0 };
    s * factorial(n as usize - 2).to_f64()
}

/// x^{n−1}·ψ₂⁽ⁿ⁾(x) on `count` logarithmic points of [1, x_max], with the
/// limit and the deviation from it.
pub fn limit_table(n: u32, x_max: f64, count: usize, prec: Precision) -> Result<Table> {
    PolyDoubleArg::new(n, 1.0)?;
    if !(x_max > 1.0) || !x_max.is_finite() {
        return Err(invalid(format!("x-max must exceed 1, got {x_max}")));
    }
    let g = Grid::logarithmic(1.0, x_max, count)?;
    let target = limit_target(n);
    build(&["x", "scaled", "limit", "deviation"], g.points(), |x| {
        let v = psi2_eval(PolyDoubleArg::new(n, x)?, Method::Auto, prec)?;
        let scaled = (v.value * crate::DoubleDouble::from(x).powi(n as i32 - 1)).to_f64();
        Ok(vec![scaled, target, (scaled - target).abs()])
    })
}
