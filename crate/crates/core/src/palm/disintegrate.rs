//! Random measures and transport kernels obtained from one random measure on `S×S`.

use super::{RandomMeasure, RandomPairMeasure, RandomTransportKernel};
use crate::measure::FiniteMeasure;

/// `ξ`, `η` and kernels `γ, δ` with `ξ(ds) γ(s, dt) = M(ds, dt) = η(dt) δ(t, ds)`
/// pointwise in `ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportQuadruple {
    pub xi: RandomMeasure,
    pub eta: RandomMeasure,
    pub gamma: RandomTransportKernel,
    pub delta: RandomTransportKernel,
}

/// Splits `M` into its marginals and the conditional kernels. Where a marginal
/// vanishes the kernel is the zero measure, which keeps covariance intact.
pub fn disintegrate_random_pair_measure(m: &RandomPairMeasure) -> TransportQuadruple {
    let omega = m.omega_size();
    let n = if omega == 0 { 0 } else { m.at(0).points() };
    let mut xi = Vec::with_capacity(omega);
    let mut eta = Vec::with_capacity(omega);
    let mut gamma = Vec::with_capacity(omega);
    let mut delta = Vec::with_capacity(omega);
    for w in 0..omega {
        let pair = m.at(w);
        let first = pair.first_marginal();
        let second = pair.second_marginal();
        let mut g = vec![FiniteMeasure::zero(n); n];
        let mut d = vec![FiniteMeasure::zero(n); n];
        for (s, t, x) in pair.support() {
            g[s].set(t, x / first.get(s));
            d[t].set(s, x / second.get(t));
        }
        xi.push(first);
        eta.push(second);
        gamma.push(g);
        delta.push(d);
    }
    TransportQuadruple {
        xi: RandomMeasure::new(xi).expect("marginals share a size"),
        eta: RandomMeasure::new(eta).expect("marginals share a size"),
        gamma: RandomTransportKernel::new(gamma),
        delta: RandomTransportKernel::new(delta),
    }
}
