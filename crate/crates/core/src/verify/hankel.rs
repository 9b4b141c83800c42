//! Hankel determinants of derivative orders,
//! D(y) = det[ψ₂⁽ⁿ⁺⁽ⁱ⁺ˡ⁾ʲ⁾(y)]_{i,l=0..m}, of order m+1.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dd::{DoubleDouble, DD_EPSILON};
use crate::error::{domain, invalid, Result};
use crate::specfun::Precision;
use crate::verify::checks::sign;
use crate::verify::{Approx, CheckReport, Grid, Psi2Orders, ReportBuilder, Witness};

/// Largest accepted m (matrix order m+1).
pub const MAX_HANKEL_ORDER: u32 = 4;

/// Condition estimates above this are flagged in the report.
const ILL_CONDITIONED: f64 = 1e24;

/// Base order n, stride j and size parameter m (matrix order m+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HankelParams {
    pub n: u32,
    pub j: u32,
    pub m: u32,
}

impl HankelParams {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(domain(format!("Hankel check needs n >= 2, got {}", self.n)));
        }
        if self.j < 1 {
            return Err(invalid("Hankel stride j must be at least 1"));
        }
        if self.m < 1 || self.m > MAX_HANKEL_ORDER {
            return Err(invalid(format!(
                "Hankel size m must lie in 1..={MAX_HANKEL_ORDER}, got {}",
                self.m
            )));
        }
        Ok(())
    }

    /// (−1)^{(n+1)(m+1)}
    pub fn sign_factor(&self) -> f64 {
        sign((self.n + 1) * (self.m + 1))
    }

    /// Highest order needed for derivatives up to `depth`.
    pub fn max_order(&self, depth: u32) -> u32 {
        self.n + 2 * self.m * self.j + depth
    }
}

/// Determinant with an absolute error bound and the componentwise
/// condition number Σ|aᵢₗ·Cᵢₗ| / |det| (C the cofactor matrix).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Determinant {
    pub value: Approx,
    pub condition: f64,
}

/// Determinant of the Hankel matrix whose row i is differentiated
/// `shifts[i]` times (each differentiation raises every order in the row by
/// one). `t` must cover the orders used.
pub fn hankel_determinant(p: &HankelParams, shifts: &[u32], t: &Psi2Orders) -> Determinant {
    let size = (p.m + 1) as usize;
    debug_assert_eq!(shifts.len(), size);
    let entries: Vec<Vec<Approx>> = (0..size)
        .map(|i| {
            (0..size)
                .map(|l| t.get(p.n + (i + l) as u32 * p.j + shifts[i]))
                .collect()
        })
        .collect();
    determinant(&entries)
}

// LU factorization with scaled partial pivoting; returns the factors, the
// row permutation and the determinant.
fn lu(entries: &[Vec<Approx>]) -> (Vec<Vec<DoubleDouble>>, Vec<usize>, DoubleDouble) {
    let size = entries.len();
    let mut a: Vec<Vec<DoubleDouble>> = entries
        .iter()
        .map(|r| r.iter().map(|v| v.value).collect())
        .collect();
    let mut perm: Vec<usize> = (0..size).collect();
    let mut scale: Vec<f64> = a
        .iter()
        .map(|r| r.iter().map(|v| v.abs().to_f64()).fold(0.0, f64::max))
        .collect();
    let mut det = DoubleDouble::ONE;
    for c in 0..size {
        let piv = (c..size)
            .max_by(|&x, &y| {
                let vx = a[x][c].abs().to_f64() / scale[x].max(f64::MIN_POSITIVE);
                let vy = a[y][c].abs().to_f64() / scale[y].max(f64::MIN_POSITIVE);
                vx.total_cmp(&vy)
            })
            .expect("nonempty range");
        if piv != c {
            a.swap(piv, c);
            scale.swap(piv, c);
            perm.swap(piv, c);
            det = -det;
        }
        let pivot = a[c][c];
        if pivot.to_f64() == 0.0 {
            return (a, perm, DoubleDouble::ZERO);
        }
        det *= pivot;
        let (top, rest) = a.split_at_mut(c + 1);
        let prow = &top[c];
        for row in rest {
            let f = row[c] / pivot;
            row[c] = f;
            for (x, &v) in row[c + 1..].iter_mut().zip(&prow[c + 1..]) {
                *x -= f * v;
            }
        }
    }
    (a, perm, det)
}

// column l of A⁻¹ from the LU factors
fn solve_unit(lu: &[Vec<DoubleDouble>], perm: &[usize], l: usize) -> Vec<DoubleDouble> {
    let size = lu.len();
    let mut y: Vec<DoubleDouble> = perm
        .iter()
        .map(|&p| {
            if p == l {
                DoubleDouble::ONE
            } else {
                DoubleDouble::ZERO
            }
        })
        .collect();
    for i in 0..size {
        for k in 0..i {
            let v = lu[i][k] * y[k];
            y[i] -= v;
        }
    }
    for i in (0..size).rev() {
        for k in i + 1..size {
            let v = lu[i][k] * y[k];
            y[i] -= v;
        }
        y[i] /= lu[i][i];
    }
    y
}

fn determinant(entries: &[Vec<Approx>]) -> Determinant {
    let size = entries.len();
    let (factors, perm, det) = lu(entries);
    if det.to_f64() == 0.0 {
        // Hadamard-type bound when no inverse is available
        let norm: Vec<f64> = entries
            .iter()
            .map(|r| r.iter().map(|a| a.to_f64().powi(2)).sum::<f64>().sqrt())
            .collect();
        let mut err = 8.0 * (size as f64).powi(3) * DD_EPSILON * norm.iter().product::<f64>();
        for (i, r) in entries.iter().enumerate() {
            let others: f64 = norm
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, v)| v)
                .product();
            err += r.iter().map(|a| a.error).sum::<f64>() * others;
        }
        return Determinant {
            value: Approx::new(det, err),
            condition: f64::INFINITY,
        };
    }
    // cofactor C_il = det·(A⁻¹)_li; first-order error Σ δa_il |C_il|
    let d = det.abs().to_f64();
    let (mut err, mut weight) = (0.0, 0.0);
    for l in 0..size {
        let col = solve_unit(&factors, &perm, l);
        for (i, row) in entries.iter().enumerate() {
            let c = col[i].abs().to_f64() * d;
            err += row[l].error * c;
            weight += row[l].abs_f64() * c;
        }
    }
    err += 8.0 * (size as f64).powi(3) * DD_EPSILON * weight;
    Determinant {
        value: Approx::new(det, err),
        condition: weight / d,
    }
}

// all ways to write k as an ordered sum of `parts` non-negative integers
fn compositions(k: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for first in 0..=k {
        for mut rest in compositions(k - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn multinomial(k: u32, parts: &[u32]) -> f64 {
    let fact = |v: u32| (1..=v).fold(1.0, |acc, i| acc * i as f64);
    parts.iter().fold(fact(k), |acc, &p| acc / fact(p))
}

/// k-th derivative of D(y): Σ over row distributions (k₀..k_m) of
/// k!/(k₀!…k_m!)·det(row i differentiated kᵢ times).
pub fn hankel_derivative(p: &HankelParams, k: u32, t: &Psi2Orders) -> Determinant {
    let size = (p.m + 1) as usize;
    let mut total = Approx::exact(0.0);
    let mut cond: f64 = 0.0;
    for comp in compositions(k, size) {
        // two rows with equal order sequences give an exactly zero determinant
        let starts: Vec<u32> = comp
            .iter()
            .enumerate()
            .map(|(i, s)| i as u32 * p.j + s)
            .collect();
        if (1..size).any(|i| starts[..i].contains(&starts[i])) {
            continue;
        }
        let d = hankel_determinant(p, &comp, t);
        total = total + d.value.scale(multinomial(k, &comp));
        cond = cond.max(d.condition);
    }
    Determinant {
        value: total,
        condition: cond,
    }
}

/// (−1)^k·(−1)^{(n+1)(m+1)}·D⁽ᵏ⁾(y) > 0 for k = 0..=depth at every grid point.
pub fn check_hankel_cm(
    params: HankelParams,
    depth: u32,
    grid: &Grid,
    prec: Precision,
) -> Result<CheckReport> {
    params.validate()?;
    grid.validate()?;
    prec.validate()?;
    let p = params;
    let s = p.sign_factor();
    let mut b = ReportBuilder::new("hankel", prec.abs_tol);
    b.param("n", p.n)
        .param("j", p.j)
        .param("m", p.m)
        .param("depth", depth)
        .grid("grid", grid);
    b.param("matrix_order", p.m + 1);
    b.summary("sign_factor", s);
    let pts = grid.points();
    let rows: Vec<(Vec<Witness>, f64)> = pts
        .par_iter()
        .map(
            |&y| match Psi2Orders::new(y, p.n, p.max_order(depth), prec) {
                Ok(t) => {
                    let mut worst: f64 = 0.0;
                    let ws = (0..=depth)
                        .map(|k| {
                            let d = hankel_derivative(&p, k, &t);
                            worst = worst.max(d.condition);
                            let signed = d.value.scale(s * sign(k));
                            Witness::positive(vec![y], format!("(-1)^k sign D^(k), k={k}"), signed)
                        })
                        .collect();
                    (ws, worst)
                }
                Err(e) => (
                    vec![Witness::failure(vec![y], "evaluation", &e.to_string())],
                    0.0,
                ),
            },
        )
        .collect();
    let worst = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    b.summary("max_condition", worst);
    if worst > ILL_CONDITIONED {
        b.note(format!(
            "ill-conditioned determinant: componentwise condition estimate {worst:.3e}"
        ));
    }
    b.extend(rows.into_iter().flat_map(|r| r.0));
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    #[test]
    fn two_by_two_at_one() {
        let hp = HankelParams { n: 2, j: 1, m: 1 };
        let t = Psi2Orders::new(1.0, 2, 4, p()).unwrap();
        let d = hankel_determinant(&hp, &[0, 0], &t);
        assert!(
            (d.value.to_f64() - 33.438_95).abs() < 1e-4,
            "{}",
            d.value.to_f64()
        );
        assert_eq!(hp.sign_factor(), 1.0);
    }

    #[test]
    fn elimination_matches_cofactor_expansion() {
        let hp = HankelParams { n: 2, j: 1, m: 2 };
        let t = Psi2Orders::new(0.7, 2, 8, p()).unwrap();
        let d = hankel_determinant(&hp, &[0, 0, 0], &t).value.to_f64();
        let e = |i: u32, l: u32| t.get(2 + i + l).to_f64();
        let cof = e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
            - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
        assert!((d - cof).abs() <= 1e-10 * cof.abs(), "{d} vs {cof}");
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let hp = HankelParams { n: 3, j: 1, m: 1 };
        let y = 1.2;
        let h = 1e-4;
        let det_at = |y: f64| {
            let t = Psi2Orders::new(y, 3, 6, p()).unwrap();
            hankel_determinant(&hp, &[0, 0], &t).value.to_f64()
        };
        let t = Psi2Orders::new(y, 3, 6, p()).unwrap();
        let exact = hankel_derivative(&hp, 1, &t).value.to_f64();
        let fd = (det_at(y + h) - det_at(y - h)) / (2.0 * h);
        assert!((fd - exact).abs() < 1e-6 * exact.abs(), "{fd} vs {exact}");
    }

    #[test]
    fn default_cases_pass() {
        let g = Grid::logarithmic(0.05, 50.0, 25).unwrap();
        for n in [2, 3] {
            for j in [1, 2] {
                for m in [1, 2, 3] {
                    let r = check_hankel_cm(HankelParams { n, j, m }, 1, &g, p()).unwrap();
                    assert!(
                        r.passed,
                        "n={n} j={j} m={m}: {:?}",
                        r.counterexamples.first()
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_large_orders() {
        let g = Grid::default_grid();
        assert!(check_hankel_cm(HankelParams { n: 2, j: 1, m: 5 }, 1, &g, p()).is_err());
        assert!(check_hankel_cm(HankelParams { n: 1, j: 1, m: 1 }, 1, &g, p()).is_err());
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(2, 3).len(), 6);
        assert_eq!(multinomial(2, &[1, 1, 0]), 2.0);
    }
}
