//! The stochastic layer: a finite sample space `Ω` with a flow, invariant
//! random measures and transport kernels, Campbell measures and Palm pairs.
//!
//! The same group acts on `S` and on `Ω`; the flow `θ_g` is the action on `Ω`,
//! so `θ_g⁻¹ω` is `flow(inv(g), ω)`.

mod campbell;
mod disintegrate;
mod exchange;
mod mecke;
mod mtp;

use num::Zero;

pub use campbell::{check_inversion, check_palm_quasi, check_refined_campbell, check_trivial_group_reduction};
pub use disintegrate::{disintegrate_random_pair_measure, TransportQuadruple};
pub use exchange::{
    check_exchange, check_exchange_group, check_exchange_points, check_last_t_star, check_transport_formula,
    TransportInput,
};
pub use mecke::{check_char_palm, check_mecke_converse, check_mecke_forward, reconstruct_p};
pub use mtp::{check_mtp_set_form, check_mtp_two_measures, check_mtp_weighted, MtpInput};

use crate::action::GroupAction;
use crate::error::{Error, Result};
use crate::measure::{is_invariant, orbit_weights, FiniteMeasure, OrbitMeasure, PairMeasure};
use crate::rational::Rational;
use crate::report::{CheckReport, Tally};

/// `Ω` with its flow and an invariant weight measure `P` (not normalized).
#[derive(Debug, Clone)]
pub struct FlowSystem {
    flow: GroupAction,
    p: FiniteMeasure,
}

impl FlowSystem {
    /// Rejects a `P` that is not flow invariant.
    pub fn new(flow: GroupAction, p: FiniteMeasure) -> Result<Self> {
        if p.len() != flow.points() {
            return Err(Error::InvalidMeasure(format!("P has {} weights, Omega has {} points", p.len(), flow.points())));
        }
        let rep = is_invariant(&flow, &p);
        if !rep.is_pass() {
            return Err(Error::NotInvariant(format!("P is not flow invariant: {}", rep.summary_line())));
        }
        Ok(FlowSystem { flow, p })
    }

    pub fn flow(&self) -> &GroupAction {
        &self.flow
    }

    pub fn size(&self) -> usize {
        self.flow.points()
    }

    pub fn p(&self) -> &FiniteMeasure {
        &self.p
    }

    /// `θ_g ω`.
    pub fn shift(&self, g: usize, omega: usize) -> usize {
        self.flow.act(g, omega)
    }

    /// `θ_g⁻¹ ω`.
    pub fn shift_back(&self, g: usize, omega: usize) -> usize {
        self.flow.act(self.flow.group().inv(g), omega)
    }

    /// `P∘θ_g⁻¹ = P` on generators.
    pub fn check_stationarity(&self) -> CheckReport {
        is_invariant(&self.flow, &self.p).renamed("palm.stationarity")
    }
}

/// A kernel from `Ω` to measures on `S`: one [`FiniteMeasure`] per `ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomMeasure {
    xi: Vec<FiniteMeasure>,
}

impl RandomMeasure {
    pub fn new(xi: Vec<FiniteMeasure>) -> Result<Self> {
        if let Some(n) = xi.first().map(FiniteMeasure::len) {
            if xi.iter().any(|m| m.len() != n) {
                return Err(Error::InvalidMeasure("random measure values have different sizes".into()));
            }
        }
        Ok(RandomMeasure { xi })
    }

    pub fn zero(omega: usize, points: usize) -> Self {
        RandomMeasure { xi: vec![FiniteMeasure::zero(points); omega] }
    }

    /// The deterministic random measure `ξ(ω) = m`.
    pub fn constant(omega: usize, m: &FiniteMeasure) -> Self {
        RandomMeasure { xi: vec![m.clone(); omega] }
    }

    pub fn at(&self, omega: usize) -> &FiniteMeasure {
        &self.xi[omega]
    }

    pub fn get(&self, omega: usize, s: usize) -> &Rational {
        self.xi[omega].get(s)
    }

    pub fn omega_size(&self) -> usize {
        self.xi.len()
    }

    pub fn values(&self) -> &[FiniteMeasure] {
        &self.xi
    }
}

/// A kernel from `Ω×S` to measures on `S`: `γ(ω, s, ·)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomTransportKernel {
    gamma: Vec<Vec<FiniteMeasure>>,
}

impl RandomTransportKernel {
    pub fn new(gamma: Vec<Vec<FiniteMeasure>>) -> Self {
        RandomTransportKernel { gamma }
    }

    /// `γ(ω, s, ·) = η(ω, ·)`, ignoring `s`.
    pub fn from_random_measure(eta: &RandomMeasure, points: usize) -> Self {
        RandomTransportKernel { gamma: eta.values().iter().map(|m| vec![m.clone(); points]).collect() }
    }

    /// `γ(ω, s, ·) = δ_s`.
    pub fn identity(omega: usize, points: usize) -> Self {
        RandomTransportKernel {
            gamma: (0..omega).map(|_| (0..points).map(|s| FiniteMeasure::dirac(points, s)).collect()).collect(),
        }
    }

    pub fn at(&self, omega: usize, s: usize) -> &FiniteMeasure {
        &self.gamma[omega][s]
    }

    pub fn at_mut(&mut self, omega: usize, s: usize) -> &mut FiniteMeasure {
        &mut self.gamma[omega][s]
    }

    pub fn omega_size(&self) -> usize {
        self.gamma.len()
    }
}

/// A kernel from `Ω` to measures on `S×S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomPairMeasure {
    m: Vec<PairMeasure>,
}

impl RandomPairMeasure {
    pub fn new(m: Vec<PairMeasure>) -> Self {
        RandomPairMeasure { m }
    }

    pub fn at(&self, omega: usize) -> &PairMeasure {
        &self.m[omega]
    }

    pub fn at_mut(&mut self, omega: usize) -> &mut PairMeasure {
        &mut self.m[omega]
    }

    pub fn omega_size(&self) -> usize {
        self.m.len()
    }
}

/// A supporting measure `ν` on `S` with a kernel `Q` from `S` to `Ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PalmPair {
    pub nu: FiniteMeasure,
    /// `q[s]` is `Q_s`, a measure on `Ω`.
    pub q: Vec<FiniteMeasure>,
}

impl PalmPair {
    /// `ν*` with respect to `k ≡ 1` (the result does not depend on `k`).
    pub fn nu_star(&self, action: &GroupAction) -> OrbitMeasure {
        orbit_weights(action, &self.nu, &action.properness_witness())
    }

    /// `ν ⊗ Q` as a measure on `Ω×S`, `[ω][s]`.
    pub fn joint(&self) -> Vec<Vec<Rational>> {
        let omega = self.q.first().map_or(0, FiniteMeasure::len);
        let mut out = vec![vec![Rational::zero(); self.nu.len()]; omega];
        for (s, n) in self.nu.support() {
            for (w, q) in self.q[s].support() {
                out[w][s] = n * q;
            }
        }
        out
    }
}

/// `C_ξ({ω}×{s}) = P({ω}) ξ(ω,{s})`, indexed `[ω][s]`.
pub fn campbell(flow: &FlowSystem, xi: &RandomMeasure) -> Vec<Vec<Rational>> {
    (0..flow.size())
        .map(|w| {
            let p = flow.p().get(w);
            xi.at(w).weights().iter().map(|x| p * x).collect()
        })
        .collect()
}

/// The Palm pair with `ν = C_ξ(Ω×·)` and `Q_s = C_ξ(·×{s}) / ν({s})`
/// (the zero measure where `ν({s}) = 0`).
pub fn palm_pair(flow: &FlowSystem, xi: &RandomMeasure) -> PalmPair {
    let c = campbell(flow, xi);
    let points = xi.at(0).len();
    let omega = flow.size();
    let mut nu = FiniteMeasure::zero(points);
    for row in &c {
        for (s, x) in row.iter().enumerate() {
            nu.add(s, x);
        }
    }
    let q = (0..points)
        .map(|s| {
            let total = nu.get(s);
            let mut qs = FiniteMeasure::zero(omega);
            if !total.is_zero() {
                for (w, row) in c.iter().enumerate() {
                    qs.set(w, &row[s] / total);
                }
            }
            qs
        })
        .collect();
    PalmPair { nu, q }
}

/// `ξ(θ_g ω, {gs}) = ξ(ω, {s})` on generators.
pub fn check_covariance(action: &GroupAction, omega: &GroupAction, xi: &RandomMeasure) -> CheckReport {
    let mut t = Tally::new();
    for &g in action.group().generator_indices() {
        for w in 0..omega.points() {
            let gw = omega.act(g, w);
            for s in 0..action.points() {
                t.compare(&[("g", g), ("omega", w), ("s", s)], xi.get(gw, action.act(g, s)), xi.get(w, s));
            }
        }
    }
    t.finish("palm.random_measure_covariance")
}

/// `γ(θ_g ω, gs, {gt}) = γ(ω, s, {t})` on generators.
pub fn check_kernel_covariance(action: &GroupAction, omega: &GroupAction, gamma: &RandomTransportKernel) -> CheckReport {
    let mut t = Tally::new();
    for &g in action.group().generator_indices() {
        for w in 0..omega.points() {
            let gw = omega.act(g, w);
            for s in 0..action.points() {
                let moved = gamma.at(gw, action.act(g, s));
                let base = gamma.at(w, s);
                for u in 0..action.points() {
                    t.compare(&[("g", g), ("omega", w), ("s", s), ("t", u)], moved.get(action.act(g, u)), base.get(u));
                }
            }
        }
    }
    t.finish("palm.kernel_covariance")
}

/// `M(θ_g ω)({(gs, gt)}) = M(ω)({(s, t)})` on generators.
pub fn check_pair_covariance(action: &GroupAction, omega: &GroupAction, m: &RandomPairMeasure) -> CheckReport {
    let mut t = Tally::new();
    for &g in action.group().generator_indices() {
        for w in 0..omega.points() {
            let moved = m.at(omega.act(g, w));
            let base = m.at(w);
            for s in 0..action.points() {
                for u in 0..action.points() {
                    t.compare(
                        &[("g", g), ("omega", w), ("s", s), ("t", u)],
                        moved.get(action.act(g, s), action.act(g, u)),
                        base.get(s, u),
                    );
                }
            }
        }
    }
    t.finish("palm.pair_covariance")
}

/// `C_ξ(θ_g ω, gs) = C_ξ(ω, s)` on generators.
pub fn check_campbell_invariance(action: &GroupAction, flow: &FlowSystem, xi: &RandomMeasure) -> CheckReport {
    let c = campbell(flow, xi);
    let mut t = Tally::new();
    for &g in action.group().generator_indices() {
        for (w, row) in c.iter().enumerate() {
            let gw = flow.shift(g, w);
            for (s, x) in row.iter().enumerate() {
                t.compare(&[("g", g), ("omega", w), ("s", s)], &c[gw][action.act(g, s)], x);
            }
        }
    }
    t.finish("palm.campbell_invariance")
}

/// `ν` invariant and `Q_{gs}({θ_g ω}) = Q_s({ω})` on generators.
pub fn check_pair_invariance(action: &GroupAction, omega: &GroupAction, pair: &PalmPair) -> CheckReport {
    let mut t = Tally::new();
    for &g in action.group().generator_indices() {
        for s in 0..action.points() {
            let gs = action.act(g, s);
            t.compare(&[("g", g), ("s", s)], pair.nu.get(gs), pair.nu.get(s));
            for w in 0..omega.points() {
                t.compare(&[("g", g), ("s", s), ("omega", w)], pair.q[gs].get(omega.act(g, w)), pair.q[s].get(w));
            }
        }
    }
    t.finish("palm.pair_invariance")
}

/// `C_ξ = ν ⊗ Q` cell by cell on `Ω×S`.
pub fn check_pair_disintegration(flow: &FlowSystem, xi: &RandomMeasure, pair: &PalmPair) -> CheckReport {
    let c = campbell(flow, xi);
    let joint = pair.joint();
    let mut t = Tally::new();
    for (w, row) in c.iter().enumerate() {
        for (s, x) in row.iter().enumerate() {
            t.compare(&[("omega", w), ("s", s)], x, &joint[w][s]);
        }
    }
    t.finish("palm.pair_disintegration")
}

/// The first failing precondition, turned into a precondition failure of `name`.
pub(crate) fn gate_all(name: &str, pres: &[CheckReport]) -> Option<CheckReport> {
    pres.iter().find_map(|p| CheckReport::gate(name, p))
}

/// Builds an invariant random measure from values at `Ω`-orbit representatives.
///
/// Each value is first averaged over the stabilizer of its representative
/// `ω̂` (making it equivariant under that stabilizer), then transported:
/// `ξ(gω̂, {gs}) = ρ(s)`. Representatives must cover every `Ω`-orbit.
pub fn extend_equivariant(
    action: &GroupAction,
    flow: &GroupAction,
    reps: &[(usize, FiniteMeasure)],
) -> Result<RandomMeasure> {
    let n = action.points();
    let mut xi: Vec<Option<FiniteMeasure>> = vec![None; flow.points()];
    for (rep, rho) in reps {
        if *rep >= flow.points() || rho.len() != n {
            return Err(Error::InvalidMeasure(format!("representative {rep} out of range or wrong size")));
        }
        let stab = flow.stabilizer_coset(*rep, *rep);
        let c = Rational::new(1.into(), stab.len().into());
        let mut avg = FiniteMeasure::zero(n);
        for &h in stab {
            for (s, x) in rho.support() {
                avg.add(action.act(h, s), &(x * &c));
            }
        }
        for w in flow.orbits().members(*rep) {
            let g = flow.transporter(*rep, *w).expect("same orbit");
            let mut m = FiniteMeasure::zero(n);
            for (s, x) in avg.support() {
                m.set(action.act(g, s), x.clone());
            }
            xi[*w] = Some(m);
        }
    }
    let values = xi
        .into_iter()
        .enumerate()
        .map(|(w, m)| m.ok_or_else(|| Error::InvalidMeasure(format!("no representative covers omega {w}"))))
        .collect::<Result<Vec<_>>>()?;
    RandomMeasure::new(values)
}

/// Pair-measure version of [`extend_equivariant`] (diagonal action on `S×S`).
pub fn extend_equivariant_pairs(
    action: &GroupAction,
    flow: &GroupAction,
    reps: &[(usize, PairMeasure)],
) -> Result<RandomPairMeasure> {
    let n = action.points();
    let mut out: Vec<Option<PairMeasure>> = vec![None; flow.points()];
    for (rep, rho) in reps {
        if *rep >= flow.points() || rho.points() != n {
            return Err(Error::InvalidMeasure(format!("representative {rep} out of range or wrong size")));
        }
        let stab = flow.stabilizer_coset(*rep, *rep);
        let c = Rational::new(1.into(), stab.len().into());
        let mut avg = PairMeasure::zero(n);
        for &h in stab {
            for (s, t, x) in rho.support() {
                avg.add(action.act(h, s), action.act(h, t), &(x * &c));
            }
        }
        for w in flow.orbits().members(*rep) {
            let g = flow.transporter(*rep, *w).expect("same orbit");
            let mut m = PairMeasure::zero(n);
            for (s, t, x) in avg.support() {
                m.set(action.act(g, s), action.act(g, t), x.clone());
            }
            out[*w] = Some(m);
        }
    }
    let values = out
        .into_iter()
        .enumerate()
        .map(|(w, m)| m.ok_or_else(|| Error::InvalidMeasure(format!("no representative covers omega {w}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(RandomPairMeasure::new(values))
}

/// Orbit ids of the diagonal action on `Ω × S^k`, for a tuple encoded
/// row-major as `ω·n^k + s_1·n^(k-1) + ...`.
pub(crate) fn product_orbit_ids(action: &GroupAction, flow: &GroupAction, k: u32) -> Vec<usize> {
    let n = action.points();
    let block = n.pow(k);
    let total = flow.points() * block;
    let mut ids = vec![usize::MAX; total];
    let mut next = 0;
    let apply = |g: usize, code: usize| -> usize {
        let (w, mut rest) = (code / block, code % block);
        let mut out = 0;
        let mut scale = block;
        for _ in 0..k {
            scale /= n;
            let s = rest / scale;
            rest %= scale;
            out += action.act(g, s) * scale;
        }
        flow.act(g, w) * block + out
    };
    for start in 0..total {
        if ids[start] != usize::MAX {
            continue;
        }
        ids[start] = next;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &g in action.group().generator_indices() {
                let y = apply(g, x);
                if ids[y] == usize::MAX {
                    ids[y] = next;
                    stack.push(y);
                }
            }
        }
        next += 1;
    }
    ids
}

/// `Q_s({ω : ξ(ω) = 0})` summed with `ν`: the mass that the candidate puts on
/// the null set of `ξ`.
pub(crate) fn null_set_mass(pair: &PalmPair, xi: &RandomMeasure) -> Option<(usize, usize, Rational)> {
    for (s, n) in pair.nu.support() {
        for (w, q) in pair.q[s].support() {
            if xi.at(w).is_zero() {
                return Some((s, w, n * q));
            }
        }
    }
    None
}
