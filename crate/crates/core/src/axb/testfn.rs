//! Compactly supported test functions on the ax+b group with exact supports.

use super::AxB;

/// A bounded function on the group that knows its support: the `a`-interval
/// and, for each `a`, the `b`-interval outside of which it vanishes.
pub trait TestFunction: Send + Sync {
    fn eval(&self, g: AxB) -> f64;
    /// `None` for the zero function.
    fn a_support(&self) -> Option<(f64, f64)>;
    fn b_support(&self, a: f64) -> Option<(f64, f64)>;
}

/// `exp(-1/(1-x²))` on `(-1, 1)`, zero elsewhere.
pub fn mollifier(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - x * x)).exp()
    }
}

/// A product of one-dimensional mollifiers centered at `(a0, b0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: AxB,
    pub ra: f64,
    pub rb: f64,
    pub height: f64,
}

impl Bump {
    /// Radii must lie in `(0, 1]` and the `a`-support must stay positive.
    pub fn new(a0: f64, b0: f64, ra: f64, rb: f64) -> Self {
        assert!(ra > 0.0 && ra <= 1.0 && rb > 0.0 && rb <= 1.0, "bump radii must lie in (0, 1]");
        assert!(a0 - ra > 0.0, "bump support must stay in a > 0");
        Bump { center: AxB::new(a0, b0), ra, rb, height: 1.0 }
    }

    pub fn scaled(self, height: f64) -> Self {
        Bump { height, ..self }
    }
}

impl TestFunction for Bump {
    fn eval(&self, g: AxB) -> f64 {
        self.height * mollifier((g.a - self.center.a) / self.ra) * mollifier((g.b - self.center.b) / self.rb)
    }

    fn a_support(&self) -> Option<(f64, f64)> {
        (self.height != 0.0).then(|| (self.center.a - self.ra, self.center.a + self.ra))
    }

    fn b_support(&self, a: f64) -> Option<(f64, f64)> {
        let (lo, hi) = self.a_support()?;
        (lo < a && a < hi).then(|| (self.center.b - self.rb, self.center.b + self.rb))
    }
}

/// The zero function.
#[derive(Debug, Clone, Copy, Default)]
pub struct Zero;

impl TestFunction for Zero {
    fn eval(&self, _: AxB) -> f64 {
        0.0
    }

    fn a_support(&self) -> Option<(f64, f64)> {
        None
    }

    fn b_support(&self, _: f64) -> Option<(f64, f64)> {
        None
    }
}

/// `x ↦ f(hx)`.
pub struct LeftShift<F> {
    pub h: AxB,
    pub f: F,
}

impl<F: TestFunction> TestFunction for LeftShift<F> {
    fn eval(&self, g: AxB) -> f64 {
        self.f.eval(self.h.compose(g))
    }

    fn a_support(&self) -> Option<(f64, f64)> {
        let (lo, hi) = self.f.a_support()?;
        Some((lo / self.h.a, hi / self.h.a))
    }

    fn b_support(&self, a: f64) -> Option<(f64, f64)> {
        // h·(a, b) = (h.a a, h.a b + h.b)
        let (lo, hi) = self.f.b_support(self.h.a * a)?;
        Some(((lo - self.h.b) / self.h.a, (hi - self.h.b) / self.h.a))
    }
}

/// `x ↦ f(xh)`.
pub struct RightShift<F> {
    pub h: AxB,
    pub f: F,
}

impl<F: TestFunction> TestFunction for RightShift<F> {
    fn eval(&self, g: AxB) -> f64 {
        self.f.eval(g.compose(self.h))
    }

    fn a_support(&self) -> Option<(f64, f64)> {
        let (lo, hi) = self.f.a_support()?;
        Some((lo / self.h.a, hi / self.h.a))
    }

    fn b_support(&self, a: f64) -> Option<(f64, f64)> {
        // (a, b)·h = (a h.a, a h.b + b)
        let (lo, hi) = self.f.b_support(a * self.h.a)?;
        Some((lo - a * self.h.b, hi - a * self.h.b))
    }
}

/// `x ↦ f(x⁻¹)`.
pub struct Inverse<F> {
    pub f: F,
}

impl<F: TestFunction> TestFunction for Inverse<F> {
    fn eval(&self, g: AxB) -> f64 {
        self.f.eval(g.inverse())
    }

    fn a_support(&self) -> Option<(f64, f64)> {
        let (lo, hi) = self.f.a_support()?;
        Some((1.0 / hi, 1.0 / lo))
    }

    fn b_support(&self, a: f64) -> Option<(f64, f64)> {
        // (a, b)⁻¹ = (1/a, -b/a)
        let (lo, hi) = self.f.b_support(1.0 / a)?;
        Some((-a * hi, -a * lo))
    }
}

/// The pointwise product `f·g`, supported on the intersection.
pub struct Product<F, G> {
    pub f: F,
    pub g: G,
}

fn intersect(x: Option<(f64, f64)>, y: Option<(f64, f64)>) -> Option<(f64, f64)> {
    let ((a, b), (c, d)) = (x?, y?);
    let (lo, hi) = (a.max(c), b.min(d));
    (lo < hi).then_some((lo, hi))
}

impl<F: TestFunction, G: TestFunction> TestFunction for Product<F, G> {
    fn eval(&self, x: AxB) -> f64 {
        self.f.eval(x) * self.g.eval(x)
    }

    fn a_support(&self) -> Option<(f64, f64)> {
        intersect(self.f.a_support(), self.g.a_support())
    }

    fn b_support(&self, a: f64) -> Option<(f64, f64)> {
        intersect(self.f.b_support(a), self.g.b_support(a))
    }
}

/// `x ↦ w(x) f(x)` for a continuous weight `w`; the support is that of `f`.
pub struct Weighted<F, W> {
    pub f: F,
    pub w: W,
}

impl<F: TestFunction, W: Fn(AxB) -> f64 + Send + Sync> TestFunction for Weighted<F, W> {
    fn eval(&self, x: AxB) -> f64 {
        let v = self.f.eval(x);
        if v == 0.0 {
            0.0
        } else {
            v * (self.w)(x)
        }
    }

    fn a_support(&self) -> Option<(f64, f64)> {
        self.f.a_support()
    }

    fn b_support(&self, a: f64) -> Option<(f64, f64)> {
        self.f.b_support(a)
    }
}

impl<T: TestFunction + ?Sized> TestFunction for &T {
    fn eval(&self, g: AxB) -> f64 {
        (**self).eval(g)
    }

    fn a_support(&self) -> Option<(f64, f64)> {
        (**self).a_support()
    }

    fn b_support(&self, a: f64) -> Option<(f64, f64)> {
        (**self).b_support(a)
    }
}
