//! Gauss–Legendre rules and support-adapted integration against left Haar
//! measure `a⁻² da db`.

use super::testfn::TestFunction;
use super::{AxB, Window};
use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Roots are found by Newton's method on the three-term recurrence, starting
/// from the Chebyshev-like guess `cos(π(i - 1/4)/(n + 1/2))`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "quadrature order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let prev = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * p - prev) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// A Gauss–Legendre rule of a fixed order together with the window that all
/// integrands must be supported in.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub window: Window,
    pub order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    pub fn new(window: Window, order: usize) -> Result<Self> {
        if !(window.a_min > 0.0 && window.a_min < window.a_max && window.b_min < window.b_max) {
            return Err(Error::InvalidInstance(format!("degenerate quadrature window {window:?}")));
        }
        if order == 0 {
            return Err(Error::InvalidInstance("quadrature order must be positive".into()));
        }
        let (nodes, weights) = gauss_legendre(order);
        Ok(QuadratureGrid { window, order, nodes, weights })
    }

    /// `∫ f(x) dx` over `[lo, hi]`.
    pub fn integrate_1d(&self, lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let (mid, half) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
    }

    fn escapes(&self, what: &str, lo: f64, hi: f64, min: f64, max: f64) -> Result<()> {
        let slack = 1e-12 * (max - min);
        if lo < min - slack || hi > max + slack {
            return Err(Error::SupportEscapesWindow(format!("{what} support [{lo}, {hi}] not inside [{min}, {max}]")));
        }
        Ok(())
    }

    /// `∫ f dλ` with `λ(da, db) = a⁻² da db`, iterated over the exact support
    /// of `f`: outer rule on the `a`-support, inner rule on the `b`-support at
    /// each outer node. Fails if the support leaves the window.
    pub fn haar_integrate(&self, f: &dyn TestFunction) -> Result<f64> {
        let Some((alo, ahi)) = f.a_support() else {
            return Ok(0.0);
        };
        let w = &self.window;
        self.escapes("a", alo, ahi, w.a_min, w.a_max)?;
        let mut inner_err = None;
        let total = self.integrate_1d(alo, ahi, |a| {
            let Some((blo, bhi)) = f.b_support(a) else {
                return 0.0;
            };
            if let Err(e) = self.escapes("b", blo, bhi, w.b_min, w.b_max) {
                inner_err.get_or_insert(e);
                return 0.0;
            }
            self.integrate_1d(blo, bhi, |b| f.eval(AxB::new(a, b))) / (a * a)
        });
        match inner_err {
            Some(e) => Err(e),
            None => Ok(total),
        }
    }
}
