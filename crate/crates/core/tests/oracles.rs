//! Reference values computed independently at 40 digits, and randomized
//! invariants.

#![allow(clippy::excessive_precision)]

use polydouble::polydg::{log_barnes_g, psi2_didouble, psi2_eval, psi2_series, PolyDoubleArg};
use polydouble::specfun::{hurwitz_zeta, log_gamma, polygamma, Precision};
use polydouble::Method;
use proptest::prelude::*;

fn p() -> Precision {
    Precision::default()
}

fn close(got: f64, want: f64, rel: f64) {
    let tol = rel * want.abs().max(1.0);
    assert!(
        (got - want).abs() <= tol,
        "got {got:e}, want {want:e} (tol {tol:e})"
    );
}

const PSI2N: [(u32, f64, f64); 8] = [
    (2, 0.3, -77.18150470432369068),
    (2, 2.5, -0.62640943473787862544),
    (3, 0.75, 20.848727782725568834),
    (4, 1.25, -9.0347288772701507016),
    (5, 3.0, 0.26899574093659762828),
    (6, 10.0, -0.00039431313301251178243),
    (3, 100.0, 0.00010202520048991802069),
    (2, 12.5, -0.086847428466591971792),
];

#[test]
fn poly_double_gamma_reference_values() {
    for (n, x, want) in PSI2N {
        let arg = PolyDoubleArg::new(n, x).unwrap();
        for m in [
            Method::Series,
            Method::PolygammaRelation,
            Method::ZetaClosedForm,
            Method::Auto,
        ] {
            let r = psi2_eval(arg, m, p()).unwrap();
            close(r.to_f64(), want, 1e-13);
        }
        let r = psi2_eval(arg, Method::Integral, p()).unwrap();
        close(r.to_f64(), want, 1e-9);
    }
}

#[test]
fn di_double_gamma_and_barnes_g() {
    for (x, psi2, log_g) in [
        (0.5, -0.32347788131385162089, -0.5054330544896953828),
        (2.5, 1.603542170728995338, -0.053850349200240518071),
        (7.0, -4.0784288788939427175, 10.450452222917991924),
    ] {
        close(psi2_didouble(x, p()).unwrap().to_f64(), psi2, 1e-12);
        close(log_barnes_g(x, p()).unwrap().to_f64(), log_g, 1e-12);
    }
}

#[test]
fn classical_special_functions() {
    close(
        polygamma(1, 0.5, p()).unwrap().to_f64(),
        4.9348022005446793094,
        1e-14,
    );
    close(
        polygamma(3, 2.25, p()).unwrap().to_f64(),
        0.32454400918839602279,
        1e-14,
    );
    close(
        polygamma(5, 20.0, p()).unwrap().to_f64(),
        8.4842662061582300714e-6,
        1e-14,
    );
    close(
        hurwitz_zeta(2, 0.5, p()).unwrap().to_f64(),
        4.9348022005446793094,
        1e-14,
    );
    close(
        hurwitz_zeta(3, 4.5, p()).unwrap().to_f64(),
        0.030778410660513847274,
        1e-14,
    );
    close(
        hurwitz_zeta(7, 1.25, p()).unwrap().to_f64(),
        0.21345519957167514795,
        1e-14,
    );
    close(
        log_gamma(3.0).unwrap().to_f64(),
        std::f64::consts::LN_2,
        1e-15,
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recurrence_holds(n in 2u32..7, x in 0.05f64..30.0) {
        let here = psi2_series(PolyDoubleArg::new(n, x).unwrap(), p()).unwrap();
        let next = psi2_series(PolyDoubleArg::new(n, x + 1.0).unwrap(), p()).unwrap();
        let pg = polygamma(n, x, p()).unwrap();
        let r = (next.value + pg.value - here.value).abs().to_f64();
        prop_assert!(r <= 1e-12 * here.to_f64().abs().max(1.0), "residual {r:e}");
    }

    #[test]
    fn sign_pattern(n in 2u32..9, x in 0.05f64..200.0) {
        let v = psi2_series(PolyDoubleArg::new(n, x).unwrap(), p()).unwrap().to_f64();
        prop_assert!(v != 0.0);
        prop_assert_eq!(v > 0.0, n % 2 == 1);
    }

    #[test]
    fn methods_agree(n in 2u32..7, x in 0.2f64..40.0) {
        let arg = PolyDoubleArg::new(n, x).unwrap();
        let s = psi2_eval(arg, Method::Series, p()).unwrap().to_f64();
        let z = psi2_eval(arg, Method::ZetaClosedForm, p()).unwrap().to_f64();
        let a = psi2_eval(arg, Method::Auto, p()).unwrap().to_f64();
        prop_assert!((s - z).abs() <= 1e-12 * s.abs().max(1.0));
        prop_assert!((s - a).abs() <= 1e-12 * s.abs().max(1.0));
    }

    #[test]
    fn barnes_g_functional_equation(x in 0.1f64..15.0) {
        // G(x+1) = Γ(x) G(x)
        let a = log_barnes_g(x + 1.0, p()).unwrap().to_f64();
        let b = log_barnes_g(x, p()).unwrap().to_f64() + log_gamma(x).unwrap().to_f64();
        prop_assert!((a - b).abs() <= 1e-11 * a.abs().max(1.0), "{a} vs {b}");
    }
}
