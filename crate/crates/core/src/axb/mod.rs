//! The ax+b group acting on itself: Haar measure, the modular function, and
//! the group forms of the Palm and exchange identities, checked by quadrature.
//!
//! Elements are `(a, b)` with `a > 0`, acting on the line by `x ↦ ax + b`, so
//! `(a, b)∘(c, d) = (ac, ad + b)`. Left Haar measure is taken as
//! `a⁻² da db`; this is verified, not assumed.

mod quadrature;
pub mod testfn;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

pub use quadrature::{gauss_legendre, QuadratureGrid};
use testfn::{Bump, Inverse, LeftShift, Product, RightShift, TestFunction, Weighted};

use crate::error::{Error, Result};
use crate::report::{CheckReport, Threshold};

/// An element `x ↦ ax + b` of the ax+b group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxB {
    pub a: f64,
    pub b: f64,
}

impl AxB {
    pub const IDENTITY: AxB = AxB { a: 1.0, b: 0.0 };

    pub fn new(a: f64, b: f64) -> Self {
        AxB { a, b }
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(self, other: AxB) -> AxB {
        AxB::new(self.a * other.a, self.a * other.b + self.b)
    }

    pub fn inverse(self) -> AxB {
        AxB::new(1.0 / self.a, -self.b / self.a)
    }

    pub fn apply(self, x: f64) -> f64 {
        self.a * x + self.b
    }
}

/// The rectangle `[a_min, a_max] × [b_min, b_max]` that integrands must live in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub a_min: f64,
    pub a_max: f64,
    pub b_min: f64,
    pub b_max: f64,
}

impl Default for Window {
    fn default() -> Self {
        Window { a_min: 0.125, a_max: 8.0, b_min: -8.0, b_max: 8.0 }
    }
}

impl std::str::FromStr for Window {
    type Err = Error;

    /// `a_min,a_max,b_min,b_max`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidInstance(format!("window {s:?}: {e}")))?;
        match parts[..] {
            [a_min, a_max, b_min, b_max] if a_min > 0.0 && a_min < a_max && b_min < b_max => {
                Ok(Window { a_min, a_max, b_min, b_max })
            }
            _ => Err(Error::InvalidInstance(format!("window {s:?} must be a_min,a_max,b_min,b_max with 0 < a_min"))),
        }
    }
}

/// The two conventions for the modular function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModularCandidate {
    /// `Δ(a, b) = a`.
    A,
    /// `Δ(a, b) = 1/a`.
    InverseA,
}

impl ModularCandidate {
    pub fn eval(self, g: AxB) -> f64 {
        match self {
            ModularCandidate::A => g.a,
            ModularCandidate::InverseA => 1.0 / g.a,
        }
    }

    pub fn other(self) -> Self {
        match self {
            ModularCandidate::A => ModularCandidate::InverseA,
            ModularCandidate::InverseA => ModularCandidate::A,
        }
    }
}

/// Outcome of choosing the modular function by the right-translation identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub chosen: ModularCandidate,
    pub residual: f64,
    pub rejected: ModularCandidate,
    pub rejected_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxbConfig {
    pub order: usize,
    pub window: Window,
    /// Relative tolerance for identities that should hold.
    pub tolerance: f64,
    /// Minimum relative residual for identities that should fail.
    pub discrimination: f64,
    /// Pairs sampled for the homomorphism property.
    pub samples: usize,
    pub seed: u64,
}

impl Default for AxbConfig {
    fn default() -> Self {
        AxbConfig { order: 64, window: Window::default(), tolerance: 1e-8, discrimination: 1e-2, samples: 1000, seed: 0 }
    }
}

/// `|l - r| / max(|l|, |r|)`, and `0` when both vanish.
pub fn relative_residual(l: f64, r: f64) -> f64 {
    let scale = l.abs().max(r.abs());
    if scale == 0.0 {
        0.0
    } else {
        (l - r).abs() / scale
    }
}

/// Worst case over a family of `(lhs, rhs)` pairs, reported with its sides.
#[derive(Debug, Clone, Copy, Default)]
struct Worst {
    lhs: f64,
    rhs: f64,
    residual: f64,
}

impl Worst {
    fn push(&mut self, lhs: f64, rhs: f64) {
        let r = relative_residual(lhs, rhs);
        if r >= self.residual {
            *self = Worst { lhs, rhs, residual: r };
        }
    }

    fn report(self, name: &str, tolerance: f64, mode: Threshold) -> CheckReport {
        CheckReport::real(name, self.lhs, self.rhs, self.residual, tolerance, mode)
    }
}

/// Test bumps used throughout; all stay inside the default window under the
/// translations in [`shifts`] and under inversion.
pub fn bumps() -> Vec<Bump> {
    vec![Bump::new(1.0, 0.0, 0.5, 0.8), Bump::new(2.0, 1.0, 0.9, 1.0), Bump::new(0.8, -1.5, 0.3, 0.6).scaled(2.5)]
}

/// Generic group elements used as translations.
pub fn shifts() -> Vec<AxB> {
    vec![AxB::new(1.5, 0.3), AxB::new(0.7, -0.4), AxB::new(2.0, 1.0), AxB::new(0.6, 0.8)]
}

/// `∫ f(hg) λ(dg) = ∫ f(g) λ(dg)`.
pub fn check_haar_left_invariance(grid: &QuadratureGrid, tolerance: f64) -> Result<CheckReport> {
    let mut worst = Worst::default();
    for f in bumps() {
        let base = grid.haar_integrate(&f)?;
        for h in shifts() {
            worst.push(grid.haar_integrate(&LeftShift { h, f })?, base);
        }
    }
    Ok(worst.report("axb.haar_left_invariance", tolerance, Threshold::AtMost))
}

fn modular_residual(grid: &QuadratureGrid, delta: ModularCandidate) -> Result<Worst> {
    let mut worst = Worst::default();
    for f in bumps() {
        let base = grid.haar_integrate(&f)?;
        for h in shifts() {
            worst.push(grid.haar_integrate(&RightShift { h, f })?, delta.eval(h.inverse()) * base);
        }
    }
    Ok(worst)
}

/// Picks the candidate satisfying `∫ f(gh) λ(dg) = Δ(h⁻¹) ∫ f dλ`. Fails if
/// neither candidate is within `tolerance`.
pub fn calibrate_modular(grid: &QuadratureGrid, tolerance: f64) -> Result<Calibration> {
    let a = modular_residual(grid, ModularCandidate::A)?.residual;
    let inv = modular_residual(grid, ModularCandidate::InverseA)?.residual;
    let (chosen, residual, rejected_residual) =
        if a <= inv { (ModularCandidate::A, a, inv) } else { (ModularCandidate::InverseA, inv, a) };
    if residual > tolerance {
        return Err(Error::Calibration(format!(
            "best candidate {chosen:?} has residual {residual:e} > {tolerance:e}; check the Haar density"
        )));
    }
    Ok(Calibration { chosen, residual, rejected: chosen.other(), rejected_residual })
}

/// The calibrated and the rejected candidate against the right-translation
/// identity, as a passing and a discrimination report.
pub fn check_modular(grid: &QuadratureGrid, cal: &Calibration, config: &AxbConfig) -> Result<Vec<CheckReport>> {
    let chosen = modular_residual(grid, cal.chosen)?
        .report("axb.modular", config.tolerance, Threshold::AtMost)
        .with_note(format!("calibrated {:?}", cal.chosen));
    let rejected = modular_residual(grid, cal.rejected)?
        .report("axb.modular_rejected_candidate", config.discrimination, Threshold::AtLeast)
        .with_note(format!("rejected {:?}", cal.rejected));
    Ok(vec![chosen, rejected])
}

/// `∫ f(g⁻¹) λ(dg) = ∫ Δ(g⁻¹) f(g) λ(dg)`.
pub fn check_modular_inverse(grid: &QuadratureGrid, delta: ModularCandidate, tolerance: f64) -> Result<CheckReport> {
    let mut worst = Worst::default();
    for f in bumps() {
        let lhs = grid.haar_integrate(&Inverse { f })?;
        let rhs = grid.haar_integrate(&Weighted { f, w: |g: AxB| delta.eval(g.inverse()) })?;
        worst.push(lhs, rhs);
    }
    Ok(worst.report("axb.modular_inverse", tolerance, Threshold::AtMost))
}

fn random_element(rng: &mut Xoshiro256PlusPlus, window: &Window) -> AxB {
    let (lo, hi) = (window.a_min.ln(), window.a_max.ln());
    AxB::new(rng.gen_range(lo..hi).exp(), rng.gen_range(window.b_min..window.b_max))
}

/// `|Δ(gh) - Δ(g)Δ(h)| ≤ 1e-10` on `samples` seeded pairs from the window.
pub fn check_modular_homomorphism(delta: ModularCandidate, config: &AxbConfig) -> CheckReport {
    const TOLERANCE: f64 = 1e-10;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(config.seed);
    let mut worst = (0.0, 0.0, 0.0);
    for _ in 0..config.samples {
        let g = random_element(&mut rng, &config.window);
        let h = random_element(&mut rng, &config.window);
        let (l, r) = (delta.eval(g.compose(h)), delta.eval(g) * delta.eval(h));
        if (l - r).abs() >= worst.2 {
            worst = (l, r, (l - r).abs());
        }
    }
    CheckReport::real("axb.modular_homomorphism", worst.0, worst.1, worst.2, TOLERANCE, Threshold::AtMost)
}

/// `κ_{s,t} = δ_{ts⁻¹}`: (i) `(gt)s⁻¹ = g(ts⁻¹)`, (ii) `(ts⁻¹)s = t`, and
/// (iii) total mass one, on seeded triples. Pure group algebra, no quadrature.
pub fn check_kernel_properties(config: &AxbConfig) -> CheckReport {
    const TOLERANCE: f64 = 1e-12;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(config.seed ^ 0x5eed);
    let dist = |x: AxB, y: AxB| relative_residual(x.a, y.a).max((x.b - y.b).abs() / x.b.abs().max(y.b.abs()).max(1.0));
    let mut worst = 0.0f64;
    for _ in 0..config.samples {
        let g = random_element(&mut rng, &config.window);
        let s = random_element(&mut rng, &config.window);
        let t = random_element(&mut rng, &config.window);
        let atom = t.compose(s.inverse());
        worst = worst.max(dist(g.compose(t).compose(s.inverse()), g.compose(atom)));
        worst = worst.max(dist(atom.compose(s), t));
    }
    CheckReport::real("axb.kernel_properties", 1.0, 1.0, worst, TOLERANCE, Threshold::AtMost)
}

/// `μ_s = Δ(s⁻¹) λ`, where `∫ f dμ_s = ∫ f(gs) λ(dg)`.
pub fn check_orbit_measure(grid: &QuadratureGrid, delta: ModularCandidate, tolerance: f64) -> Result<CheckReport> {
    let mut worst = Worst::default();
    for f in bumps() {
        let base = grid.haar_integrate(&f)?;
        for s in shifts() {
            worst.push(grid.haar_integrate(&RightShift { h: s, f })?, delta.eval(s.inverse()) * base);
        }
    }
    Ok(worst.report("axb.orbit_measure", tolerance, Threshold::AtMost))
}

/// Separable test functions `f(ω, g) = Σ u_i(ω) v_i(g)` on `Ω×G = G×G`.
pub fn separable_family() -> Vec<(Bump, Bump)> {
    let b = bumps();
    vec![(b[0], b[1]), (b[1], b[2]), (b[0].scaled(-0.5), b[2]), (b[2], b[0])]
}

/// `ω ↦ u(θ_ω⁻¹ ω) v(ω)`: the flow-shifted argument is evaluated with group
/// operations; the support is that of `v`.
struct Collapsed<U, V> {
    u: U,
    v: V,
}

impl<U: TestFunction, V: TestFunction> TestFunction for Collapsed<U, V> {
    fn eval(&self, w: AxB) -> f64 {
        let v = self.v.eval(w);
        if v == 0.0 {
            0.0
        } else {
            self.u.eval(w.inverse().compose(w)) * v
        }
    }

    fn a_support(&self) -> Option<(f64, f64)> {
        self.v.a_support()
    }

    fn b_support(&self, a: f64) -> Option<(f64, f64)> {
        self.v.b_support(a)
    }
}

/// The Palm measure at `e` of `ξ(ω) = δ_ω` under `P = λ`, from the explicit
/// formula `Q_e(u) = ∫∫ u(θ_g⁻¹ ω) w(t) κ_{e,t}(dg) ξ(ω, dt) P(dω)` with
/// `κ_{e,t} = δ_{t e⁻¹}` and `∫ w dμ_e = 1`.
fn palm_at_identity(grid: &QuadratureGrid, u: &dyn TestFunction) -> Result<f64> {
    let raw = Bump::new(2.0, 1.0, 0.9, 1.0);
    let norm = grid.haar_integrate(&raw)?;
    struct Integrand<'a> {
        u: &'a dyn TestFunction,
        w: Bump,
        norm: f64,
    }
    impl TestFunction for Integrand<'_> {
        fn eval(&self, t: AxB) -> f64 {
            let g = t.compose(AxB::IDENTITY.inverse());
            self.u.eval(g.inverse().compose(t)) * self.w.eval(t) / self.norm
        }
        fn a_support(&self) -> Option<(f64, f64)> {
            self.w.a_support()
        }
        fn b_support(&self, a: f64) -> Option<(f64, f64)> {
            self.w.b_support(a)
        }
    }
    grid.haar_integrate(&Integrand { u, w: raw, norm })
}

/// Skew factorization on `Ω = G`, `θ_g ω = gω`, `P = λ`, `ξ(ω) = δ_ω`:
/// `E_P ∫ f(θ_g⁻¹, g) ξ(dg) = E_{Q_e} ∫ f(θ_e, g) λ(dg)`.
pub fn check_skew_factorization(grid: &QuadratureGrid, tolerance: f64) -> Result<CheckReport> {
    let (mut lhs, mut rhs) = (0.0, 0.0);
    let mut scale = 0.0f64;
    for (u, v) in separable_family() {
        let l = grid.haar_integrate(&Collapsed { u, v })?;
        let r = palm_at_identity(grid, &u)? * grid.haar_integrate(&v)?;
        scale = scale.max(l.abs()).max(r.abs());
        lhs += l;
        rhs += r;
    }
    let residual = if scale == 0.0 { 0.0 } else { (lhs - rhs).abs() / scale };
    Ok(CheckReport::real("axb.skew_factorization", lhs, rhs, residual, tolerance, Threshold::AtMost))
}

/// Both sides of the group exchange formula for `ξ(ω) = λ`, `η(ω) = δ_ω`
/// (so `Q_ξ = λ`, `Q_η = δ_e`):
/// `∫ f(g⁻¹, g⁻¹) Δ(g⁻¹) λ(dg) = ∫ f(ω, ω) λ(dω)`.
fn exchange_sides(grid: &QuadratureGrid, delta: impl Fn(AxB) -> f64 + Copy + Send + Sync) -> Result<(f64, f64, f64)> {
    let (mut lhs, mut rhs) = (0.0, 0.0);
    let mut scale = 0.0f64;
    for (u, v) in separable_family() {
        let diag = Product { f: u, g: v };
        let l = grid.haar_integrate(&Weighted { f: Inverse { f: &diag }, w: move |g: AxB| delta(g.inverse()) })?;
        let r = grid.haar_integrate(&diag)?;
        scale = scale.max(l.abs()).max(r.abs());
        lhs += l;
        rhs += r;
    }
    let residual = if scale == 0.0 { 0.0 } else { (lhs - rhs).abs() / scale };
    Ok((lhs, rhs, residual))
}

/// The exchange formula on the group with the calibrated `Δ`.
pub fn check_exchange_group(grid: &QuadratureGrid, delta: ModularCandidate, tolerance: f64) -> Result<CheckReport> {
    let (l, r, res) = exchange_sides(grid, move |g| delta.eval(g))?;
    Ok(CheckReport::real("axb.exchange_group", l, r, res, tolerance, Threshold::AtMost))
}

/// The same identity with `Δ ≡ 1`; must fail by at least `discrimination`.
pub fn check_exchange_group_unimodular(grid: &QuadratureGrid, discrimination: f64) -> Result<CheckReport> {
    let (l, r, res) = exchange_sides(grid, |_| 1.0)?;
    Ok(CheckReport::real("axb.exchange_group_unimodular", l, r, res, discrimination, Threshold::AtLeast))
}

/// Every ax+b check, in a fixed order.
pub fn run_axb_suite(config: &AxbConfig) -> Result<Vec<CheckReport>> {
    let grid = QuadratureGrid::new(config.window, config.order)?;
    let cal = calibrate_modular(&grid, config.tolerance)?;
    let mut out = vec![check_haar_left_invariance(&grid, config.tolerance)?];
    out.extend(check_modular(&grid, &cal, config)?);
    out.push(check_modular_inverse(&grid, cal.chosen, config.tolerance)?);
    out.push(check_modular_homomorphism(cal.chosen, config));
    out.push(check_kernel_properties(config));
    out.push(check_orbit_measure(&grid, cal.chosen, config.tolerance)?);
    out.push(check_skew_factorization(&grid, config.tolerance)?);
    out.push(check_exchange_group(&grid, cal.chosen, config.tolerance)?);
    out.push(check_exchange_group_unimodular(&grid, config.discrimination)?);
    Ok(out)
}

#[cfg(test)]
mod tests;
