//! Check dispatch by id and the default suite.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::specfun::Precision;
use crate::verify::{
    check_F_cm, check_G_convexity, check_cauchy_schwarz, check_cm, check_hankel_cm, check_lemma_I1,
    check_ratio_bounds, check_subadditivity, check_turan, CheckReport, FParams, GParams, Grid,
    HankelParams, SubAddParams,
};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_917;

/// Sampled pairs for the additivity part of the G check.
const G_PAIRS: usize = 100;

/// One check with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "kebab-case")]
pub enum CheckRequest {
    Cm {
        n: u32,
        depth: u32,
        grid: Grid,
    },
    Turan {
        n: u32,
        grid: Grid,
    },
    Ratio {
        n: u32,
        grid: Grid,
    },
    #[serde(rename = "F-cm")]
    FCm {
        params: FParams,
        grid: Grid,
    },
    #[serde(rename = "lemma-I1")]
    LemmaI1 {
        n: u32,
        grid: Grid,
        tol: f64,
    },
    Subadditivity {
        params: SubAddParams,
        seed: u64,
    },
    #[serde(rename = "G-convexity")]
    GConvexity {
        params: GParams,
        grid: Grid,
        seed: u64,
    },
    Hankel {
        params: HankelParams,
        depth: u32,
        grid: Grid,
    },
    CauchySchwarz {
        n: u32,
        grid: Grid,
    },
}

/// Ids accepted by [`run_check`] and the CLI.
pub fn check_ids() -> &'static [&'static str] {
    &[
        "cm",
        "turan",
        "ratio",
        "F-cm",
        "lemma-I1",
        "subadditivity",
        "G-convexity",
        "hankel",
        "cauchy-schwarz",
    ]
}

impl CheckRequest {
    pub fn id(&self) -> &'static str {
        match self {
            Self::Cm { .. } => "cm",
            Self::Turan { .. } => "turan",
            Self::Ratio { .. } => "ratio",
            Self::FCm { .. } => "F-cm",
            Self::LemmaI1 { .. } => "lemma-I1",
            Self::Subadditivity { .. } => "subadditivity",
            Self::GConvexity { .. } => "G-convexity",
            Self::Hankel { .. } => "hankel",
            Self::CauchySchwarz { .. } => "cauchy-schwarz",
        }
    }
}

pub fn run_check(req: &CheckRequest, prec: Precision) -> Result<CheckReport> {
    match req {
        CheckRequest::Cm { n, depth, grid } => check_cm(*n, *depth, grid, prec),
        CheckRequest::Turan { n, grid } => check_turan(*n, grid, prec),
        CheckRequest::Ratio { n, grid } => check_ratio_bounds(*n, grid, prec),
        CheckRequest::FCm { params, grid } => check_F_cm(*params, grid, prec),
        CheckRequest::LemmaI1 { n, grid, tol } => check_lemma_I1(*n, grid, *tol),
        CheckRequest::Subadditivity { params, seed } => check_subadditivity(*params, *seed, prec),
        CheckRequest::GConvexity { params, grid, seed } => {
            check_G_convexity(*params, grid, G_PAIRS, *seed, prec)
        }
        CheckRequest::Hankel {
            params,
            depth,
            grid,
        } => check_hankel_cm(*params, *depth, grid, prec),
        CheckRequest::CauchySchwarz { n, grid } => check_cauchy_schwarz(*n, grid, prec),
    }
}

/// Grid on which the ratio bounds are checked, reaching far enough right
/// to see the limit.
pub fn ratio_grid() -> Grid {
    Grid::logarithmic(0.05, 1e4, 200).expect("valid grid")
}

pub fn lemma_grid() -> Grid {
    Grid::linear(1.01, 1.99, 100)
        .and_then(|g| g.with_extra(&[0.1, 5.0, 20.0]))
        .expect("valid grid")
}

/// The requests making up the default suite.
pub fn default_requests(seed: u64) -> Vec<CheckRequest> {
    let grid = Grid::default_grid();
    let mut out = Vec::new();
    for n in 2..=6 {
        out.push(CheckRequest::Cm {
            n,
            depth: 6,
            grid: grid.clone(),
        });
    }
    for n in 2..=6 {
        out.push(CheckRequest::Turan {
            n,
            grid: grid.clone(),
        });
    }
    for n in 3..=6 {
        out.push(CheckRequest::Ratio {
            n,
            grid: ratio_grid(),
        });
    }
    for n in [3, 4, 5] {
        let base = FParams {
            n,
            omega: 0.0,
            depth: 6,
        };
        for omega in [base.lower_constant(), base.upper_constant()] {
            out.push(CheckRequest::FCm {
                params: FParams { omega, ..base },
                grid: grid.clone(),
            });
        }
    }
    for n in [3, 4] {
        out.push(CheckRequest::LemmaI1 {
            n,
            grid: lemma_grid(),
            tol: 1e-10,
        });
    }
    for n in [2, 3] {
        for r in [0, 1, 2] {
            out.push(CheckRequest::Subadditivity {
                params: SubAddParams {
                    n,
                    r,
                    m: 2.0,
                    samples: 200,
                },
                seed,
            });
        }
    }
    for n in [3u32, 4] {
        let nf = n as f64;
        for r in [-1.0 / (nf - 1.0) - 0.1, -1.0 / (2.0 * (nf + 1.0)), 1.0] {
            out.push(CheckRequest::GConvexity {
                params: GParams { n, r },
                grid: grid.clone(),
                seed,
            });
        }
    }
    for n in [2, 3] {
        for j in [1, 2] {
            for m in [1, 2, 3] {
                out.push(CheckRequest::Hankel {
                    params: HankelParams { n, j, m },
                    depth: 1,
                    grid: grid.clone(),
                });
            }
        }
    }
    for n in 3..=6 {
        out.push(CheckRequest::CauchySchwarz {
            n,
            grid: grid.clone(),
        });
    }
    out
}

/// Runs the default suite; reports come back in request order.
pub fn run_suite(seed: u64, prec: Precision) -> Result<Vec<CheckReport>> {
    prec.validate()?;
    default_requests(seed)
        .par_iter()
        .map(|r| run_check(r, prec))
        .collect()
}

/// Parses a check id, accepting any case.
pub fn canonical_id(id: &str) -> Result<&'static str> {
    check_ids()
        .iter()
        .find(|c| c.eq_ignore_ascii_case(id))
        .copied()
        .ok_or_else(|| {
            invalid(format!(
                "unknown check id '{id}'; known: {}",
                check_ids().join(", ")
            ))
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn request_round_trip() {
        for r in default_requests(7) {
            let s = serde_json::to_string(&r).unwrap();
            assert!(s.contains(&format!("\"id\":\"{}\"", r.id())), "{s}");
            let back: CheckRequest = serde_json::from_str(&s).unwrap();
            assert_eq!(back, r);
        }
    }

    #[test]
    fn every_id_is_in_the_default_suite() {
        let reqs = default_requests(DEFAULT_SEED);
        for id in check_ids() {
            assert!(reqs.iter().any(|r| r.id() == *id), "{id}");
        }
        assert_eq!(canonical_id("f-CM").unwrap(), "F-cm");
        assert!(canonical_id("nope").is_err());
    }
}
