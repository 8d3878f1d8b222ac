use super::testfn::Zero;
use super::*;
use crate::report::Status;

fn grid() -> QuadratureGrid {
    QuadratureGrid::new(Window::default(), 64).unwrap()
}

/// `a²(1 + b²)` on a rectangle: after the Haar density the integrand is a
/// polynomial, so the rule must be exact.
struct Polynomial {
    lo: f64,
    hi: f64,
}

impl TestFunction for Polynomial {
    fn eval(&self, g: AxB) -> f64 {
        g.a * g.a * (1.0 + g.b * g.b)
    }
    fn a_support(&self) -> Option<(f64, f64)> {
        Some((self.lo, self.hi))
    }
    fn b_support(&self, _: f64) -> Option<(f64, f64)> {
        Some((-1.0, 1.0))
    }
}

#[test]
fn gauss_legendre_integrates_polynomials_exactly() {
    let (x, w) = gauss_legendre(8);
    assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    // ∫_{-1}^{1} x^{14} dx = 2/15, degree 14 ≤ 2·8 - 1.
    let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
    assert!((m - 2.0 / 15.0).abs() < 1e-14);
    let (x1, w1) = gauss_legendre(1);
    assert_eq!((x1[0], w1[0]), (0.0, 2.0));
}

#[test]
fn haar_density_is_applied() {
    // a² (1 + b²) a⁻² over [1, 3] × [-1, 1] = 2 · (2 + 2/3).
    let v = grid().haar_integrate(&Polynomial { lo: 1.0, hi: 3.0 }).unwrap();
    assert!((v - 2.0 * (8.0 / 3.0)).abs() < 1e-12, "{v}");
    assert_eq!(grid().haar_integrate(&Zero).unwrap(), 0.0);
}

#[test]
fn group_law() {
    let g = AxB::new(2.0, 3.0);
    let h = AxB::new(0.5, -1.0);
    let x = 1.7;
    assert!((g.compose(h).apply(x) - g.apply(h.apply(x))).abs() < 1e-14);
    let e = g.compose(g.inverse());
    assert!((e.a - 1.0).abs() < 1e-15 && e.b.abs() < 1e-15);
}

#[test]
fn support_escaping_the_window_is_an_error() {
    let far = Bump::new(7.5, 0.0, 0.9, 0.5);
    assert!(matches!(grid().haar_integrate(&far), Err(Error::SupportEscapesWindow(_))));
    let small = QuadratureGrid::new(Window { a_min: 0.5, a_max: 2.0, b_min: -1.0, b_max: 1.0 }, 16).unwrap();
    assert!(matches!(check_haar_left_invariance(&small, 1e-8), Err(Error::SupportEscapesWindow(_))));
}

#[test]
fn window_parses() {
    let w: Window = "0.125, 8, -8, 8".parse().unwrap();
    assert_eq!(w, Window::default());
    assert!("1,0.5,-1,1".parse::<Window>().is_err());
    assert!("1,2,3".parse::<Window>().is_err());
}

#[test]
fn calibration_picks_inverse_a_and_rejects_a() {
    let g = grid();
    let cal = calibrate_modular(&g, 1e-8).unwrap();
    assert_eq!(cal.chosen, ModularCandidate::InverseA);
    assert_eq!(cal.rejected, ModularCandidate::A);
    assert!(cal.residual <= 1e-8, "{cal:?}");
    assert!(cal.rejected_residual >= 1e-2, "{cal:?}");
}

#[test]
fn calibration_survives_a_coarse_rule() {
    // Support-adapted nodes move with the translation, so even a 2-point rule
    // separates the candidates.
    let coarse = QuadratureGrid::new(Window::default(), 2).unwrap();
    assert_eq!(calibrate_modular(&coarse, 1e-8).unwrap().chosen, ModularCandidate::InverseA);
}

#[test]
fn wrong_modular_function_breaks_the_inversion_identity() {
    let g = grid();
    assert!(check_modular_inverse(&g, ModularCandidate::InverseA, 1e-8).unwrap().is_pass());
    let wrong = check_modular_inverse(&g, ModularCandidate::A, 1e-8).unwrap();
    assert_eq!(wrong.status, Status::Fail);
}

#[test]
fn wrong_modular_function_breaks_the_exchange_formula() {
    let g = grid();
    assert!(check_exchange_group(&g, ModularCandidate::InverseA, 1e-8).unwrap().is_pass());
    assert_eq!(check_exchange_group(&g, ModularCandidate::A, 1e-8).unwrap().status, Status::Fail);
    let uni = check_exchange_group_unimodular(&g, 1e-2).unwrap();
    assert!(uni.is_pass(), "{}", uni.summary_line());
}

#[test]
fn palm_at_identity_of_the_regular_flow_is_a_point_mass() {
    // ξ(ω) = δ_ω makes θ_g⁻¹ω = e always, so Q_e(u) = u(e).
    let g = grid();
    for f in bumps() {
        let q = palm_at_identity(&g, &f).unwrap();
        assert!((q - f.eval(AxB::IDENTITY)).abs() < 1e-12, "{q}");
    }
}

#[test]
fn full_suite_passes_with_default_config() {
    let reports = run_axb_suite(&AxbConfig::default()).unwrap();
    assert_eq!(reports.len(), 10);
    for r in &reports {
        assert!(r.is_pass(), "{}", r.summary_line());
    }
}

#[test]
fn homomorphism_is_seed_deterministic() {
    let c = AxbConfig::default();
    let a = check_modular_homomorphism(ModularCandidate::InverseA, &c);
    let b = check_modular_homomorphism(ModularCandidate::InverseA, &c);
    assert_eq!(a.residual.to_f64(), b.residual.to_f64());
    assert!(a.is_pass());
}
