//! Least-energy solutions of the reduced equation
//! `−ε²Δ_g v + (v − v^p)|s|^{−η} = 0` on `I' × [0, π/2]` with Neumann data,
//! computed by Nehari-constrained descent over axisymmetric fields `v(s, t)`.

mod banded;
mod grid;
mod io;
mod operator;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{test_function_value, TestFunctionParams};
use crate::geometry::{ProblemParams, ReducedGeometry, Side};
use crate::ground_state::GroundState;
use crate::hopf::ReducedField;
use crate::nonlinear::source;
use crate::scalar::Real;

pub use banded::BandedCholesky;
pub use grid::{FieldInterpolant, GridSpec, SolutionField};
pub use io::GridSnapshot;
pub use operator::{laplace_beltrami, nehari_scale_with, Discretization};

/// Initial guess for the descent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedKind {
    /// Gaussian bump on a boundary component at the seed latitude.
    Bump(Side),
    /// Cut-off ground state `Z` centred on a boundary pole.
    TestFunction(Side),
}

impl std::fmt::Display for SeedKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SeedKind::Bump(side) => write!(f, "bump-{side}"),
            SeedKind::TestFunction(side) => write!(f, "z-{side}"),
        }
    }
}

impl std::str::FromStr for SeedKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (kind, side) = s
            .split_once('-')
            .ok_or_else(|| Error::config(format!("seed `{s}` is not of the form kind-side")))?;
        let side: Side = side.parse()?;
        match kind {
            "bump" => Ok(SeedKind::Bump(side)),
            "z" => Ok(SeedKind::TestFunction(side)),
            other => Err(Error::config(format!("unknown seed kind `{other}`"))),
        }
    }
}

/// The set of initial guesses and their shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedSpec {
    pub seeds: Vec<SeedKind>,
    /// Polar angle `t̂` of the bump centres.
    pub latitude: f64,
    /// Bump width in units of `ε√κ`.
    pub width: f64,
}

impl Default for SeedSpec {
    fn default() -> Self {
        Self {
            seeds: vec![
                SeedKind::Bump(Side::Inner),
                SeedKind::Bump(Side::Outer),
                SeedKind::TestFunction(Side::Inner),
            ],
            latitude: 0.0,
            width: 1.0,
        }
    }
}

/// Stopping rule and grid of the descent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Stop once `‖g‖_ε ≤ tol · ‖v‖_ε` for the Sobolev gradient `g`.
    pub tol: f64,
    pub max_iter: usize,
    pub grid: GridSpec,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 50_000,
            grid: GridSpec::default(),
        }
    }
}

/// Location class of the global maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeakSide {
    Inner,
    Outer,
    Interior,
}

impl PeakSide {
    pub fn name(self) -> &'static str {
        match self {
            PeakSide::Inner => "inner",
            PeakSide::Outer => "outer",
            PeakSide::Interior => "interior",
        }
    }

    pub fn boundary(self) -> Option<Side> {
        match self {
            PeakSide::Inner => Some(Side::Inner),
            PeakSide::Outer => Some(Side::Outer),
            PeakSide::Interior => None,
        }
    }
}

impl std::fmt::Display for PeakSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Global maximum of a field and its classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakInfo {
    pub s: f64,
    pub t: f64,
    pub value: f64,
    pub index: (usize, usize),
    pub side: PeakSide,
    /// Discrete local maxima with value above 1.
    pub local_maxima: usize,
    /// Distance from the peak to `∂M` in units of `ε`.
    pub boundary_distance: f64,
    /// Set when the field has no isolated peak (constant field).
    pub degenerate: bool,
}

/// Outcome of the descent from one seed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedOutcome {
    pub seed: SeedKind,
    pub level: Option<f64>,
    pub iterations: usize,
    pub peak_side: Option<PeakSide>,
    pub error: Option<String>,
}

/// Least-energy solution found over the seed set.
#[derive(Debug, Clone)]
pub struct MpResult<T> {
    pub field: SolutionField<T>,
    /// Reduced `ε` of the run.
    pub eps: T,
    /// `Γ_ε` of the converged field.
    pub level: T,
    pub peak: PeakInfo,
    /// Max nodal residual of the discrete equation, relative to the weight.
    pub residual: T,
    pub iterations: usize,
    /// `Γ_ε` after every accepted step.
    pub history: Vec<f64>,
    pub seed: SeedKind,
    pub outcomes: Vec<SeedOutcome>,
    /// `(1/2 − 1/(p+1)) ∫ |s|^{−η} dv_g`, the level of `v ≡ 1`.
    pub constant_level: T,
}

struct Descent<T> {
    values: Vec<T>,
    level: T,
    iterations: usize,
    history: Vec<f64>,
}

/// `Γ_ε` of a field.
pub fn energy<T: Real>(field: &SolutionField<T>, params: &ProblemParams<T>, geom: &ReducedGeometry<T>) -> Result<T> {
    let disc = Discretization::for_field(field, geom)?;
    Ok(disc.energy(&field.values, params.eps, params.p))
}

/// Factor `t*` placing `t*·field` on the Nehari set.
pub fn nehari_scale<T: Real>(
    field: &SolutionField<T>,
    params: &ProblemParams<T>,
    geom: &ReducedGeometry<T>,
) -> Result<T> {
    let disc = Discretization::for_field(field, geom)?;
    nehari_scale_with(&disc, &field.values, params.eps, params.p)
}

/// Grid of a run: graded nodes and the zero field.
pub fn build_grid<T: Real>(
    params: &ProblemParams<T>,
    spec: &GridSpec,
) -> Result<(ReducedGeometry<T>, SolutionField<T>)> {
    let geom = ReducedGeometry::new(params)?;
    let s = spec.s_nodes(&geom, params.eps)?;
    let t = spec.t_nodes(&geom, params.eps)?;
    let n = s.len() * t.len();
    let field = SolutionField::new(s, t, vec![T::zero(); n], &geom)?;
    Ok((geom, field))
}

fn seed_values<T: Real>(
    kind: SeedKind,
    spec: &SeedSpec,
    field: &SolutionField<T>,
    geom: &ReducedGeometry<T>,
    params: &ProblemParams<T>,
    ground: &mut Option<GroundState<T>>,
) -> Result<Vec<T>> {
    let eps = params.eps;
    let mut out = Vec::with_capacity(field.values.len());
    match kind {
        SeedKind::Bump(side) => {
            let s0 = geom.boundary_s(side);
            let f0 = geom.warp(s0);
            let t0 = T::lit(spec.latitude);
            let width = T::lit(spec.width) * eps * geom.kappa(side).sqrt();
            if !(width > T::zero()) || !(t0 >= T::zero() && t0 <= T::FRAC_PI_2()) {
                return Err(Error::config("seed width must be positive and latitude in [0, π/2]"));
            }
            for &s in &field.s {
                for &t in &field.t {
                    let (ds, dt) = ((s - s0) / width, f0 * (t - t0) / width);
                    out.push((-(ds * ds + dt * dt) * T::lit(0.5)).exp());
                }
            }
        }
        SeedKind::TestFunction(side) => {
            if ground.is_none() {
                *ground = Some(GroundState::compute(2 * geom.n + 1, params.p, T::one())?);
            }
            let gs = ground.as_ref().expect("ground state computed above");
            let tf = TestFunctionParams::new(geom, gs, side, eps, T::one())?;
            for &s in &field.s {
                for &t in &field.t {
                    out.push(test_function_value(&tf, geom, s, t));
                }
            }
        }
    }
    Ok(out)
}

fn descend<T: Real>(
    disc: &Discretization<T>,
    chol: &BandedCholesky<T>,
    seed: Vec<T>,
    eps: T,
    p: T,
    opts: &SolverOptions,
) -> Result<Descent<T>> {
    let scale_to_nehari = |v: Vec<T>| -> Result<Vec<T>> {
        let k = nehari_scale_with(disc, &v, eps, p)
            .map_err(|_| Error::Seed("descent collapsed onto the zero field".into()))?;
        Ok(v.into_iter().map(|x| x * k).collect())
    };
    let mut v = scale_to_nehari(seed)?;
    let mut level = disc.energy(&v, eps, p);
    let mut history = vec![level.as_f64()];
    let tol = T::lit(opts.tol);
    let slack = T::lit(1e-13);
    let mut tau = T::one();
    for iteration in 0..opts.max_iter {
        // Sobolev gradient g = v − (ε²K + W)^{−1} W f(v).
        let mut g: Vec<T> = v
            .iter()
            .zip(&disc.weighted_mass)
            .map(|(x, w)| *w * source(*x, p))
            .collect();
        chol.solve_in_place(&mut g);
        for (gk, vk) in g.iter_mut().zip(&v) {
            *gk = *vk - *gk;
        }
        let g_norm = disc.eps_norm_sq(&g, eps).sqrt();
        if g_norm <= tol * disc.eps_norm_sq(&v, eps).sqrt() {
            return Ok(Descent {
                values: v,
                level,
                iterations: iteration,
                history,
            });
        }
        loop {
            let trial: Vec<T> = v.iter().zip(&g).map(|(x, d)| (*x - tau * *d).max(T::zero())).collect();
            let trial = scale_to_nehari(trial)?;
            let trial_level = disc.energy(&trial, eps, p);
            if trial_level <= level + slack * level.abs() {
                v = trial;
                level = trial_level;
                history.push(level.as_f64());
                break;
            }
            tau = tau * T::lit(0.5);
            if tau < T::lit(1e-12) {
                return Err(Error::solver(
                    format!("line search stalled at gradient norm {g_norm:e}"),
                    history,
                ));
            }
        }
        tau = (tau * T::lit(2.0)).min(T::one());
    }
    Err(Error::solver(
        format!("no convergence within {} iterations", opts.max_iter),
        history,
    ))
}

/// Lowest Nehari level reached from the seed set, with its field and peak.
pub fn solve_mountain_pass<T: Real>(
    params: &ProblemParams<T>,
    opts: &SolverOptions,
    seeds: &SeedSpec,
) -> Result<MpResult<T>> {
    if seeds.seeds.is_empty() {
        return Err(Error::config("at least one seed is required"));
    }
    let (geom, grid) = build_grid(params, &opts.grid)?;
    let (eps, p) = (params.eps, params.p);
    let disc = Discretization::for_field(&grid, &geom)?;
    let chol = disc.factor_shifted(eps)?;
    let mut ground = None;
    let mut best: Option<(SeedKind, Descent<T>)> = None;
    let mut outcomes = Vec::new();
    let mut first_error = None;
    for &kind in &seeds.seeds {
        let run = seed_values(kind, seeds, &grid, &geom, params, &mut ground)
            .and_then(|v0| descend(&disc, &chol, v0, eps, p, opts));
        match run {
            Ok(d) => {
                let peak = locate_peak(&grid.with_values(d.values.clone()), eps);
                outcomes.push(SeedOutcome {
                    seed: kind,
                    level: Some(d.level.as_f64()),
                    iterations: d.iterations,
                    peak_side: Some(peak.side),
                    error: None,
                });
                if best.as_ref().is_none_or(|(_, b)| d.level < b.level) {
                    best = Some((kind, d));
                }
            }
            Err(e) => {
                outcomes.push(SeedOutcome {
                    seed: kind,
                    level: None,
                    iterations: 0,
                    peak_side: None,
                    error: Some(e.to_string()),
                });
                first_error.get_or_insert(e);
            }
        }
    }
    let (seed, d) = match best {
        Some(b) => b,
        None => return Err(first_error.expect("every seed failed with an error")),
    };
    let field = grid.with_values(d.values);
    let residual = disc
        .residual(&field.values, eps, p)
        .into_iter()
        .fold(T::zero(), |m, r| m.max(r.abs()));
    let weight_total: T = disc.weighted_mass.iter().copied().sum();
    let constant_level = (T::lit(0.5) - T::one() / (p + T::one())) * weight_total;
    Ok(MpResult {
        peak: locate_peak(&field, eps),
        field,
        eps,
        level: d.level,
        residual,
        iterations: d.iterations,
        history: d.history,
        seed,
        outcomes,
        constant_level,
    })
}

/// Global maximum (ties to the lexicographically smallest node), its side,
/// the number of discrete local maxima above 1 and the distance to `∂M`.
pub fn locate_peak<T: Real>(field: &SolutionField<T>, eps: T) -> PeakInfo {
    let (n_s, n_t) = (field.n_s(), field.n_t());
    let v = &field.values;
    let mut arg = 0;
    for k in 1..v.len() {
        if v[k] > v[arg] {
            arg = k;
        }
    }
    let min = v.iter().copied().fold(T::infinity(), T::min);
    let degenerate = v[arg] - min <= T::lit(1e-12) * v[arg].abs().max(T::min_positive_value());
    let mut local_maxima = 0;
    for i in 0..n_s {
        for j in 0..n_t {
            let k = i * n_t + j;
            if v[k] <= T::one() {
                continue;
            }
            // Ties go to the earlier node so plateaus count once.
            let earlier = [(i > 0).then(|| k - n_t), (j > 0).then(|| k - 1)];
            let later = [(i + 1 < n_s).then(|| k + n_t), (j + 1 < n_t).then(|| k + 1)];
            let is_max =
                earlier.iter().flatten().all(|&m| v[k] > v[m]) && later.iter().flatten().all(|&m| v[k] >= v[m]);
            if is_max {
                local_maxima += 1;
            }
        }
    }
    let (i, j) = (arg / n_t, arg % n_t);
    let side = if i == 0 {
        PeakSide::Inner
    } else if i + 1 == n_s {
        PeakSide::Outer
    } else {
        PeakSide::Interior
    };
    let s = field.s[i];
    let dist = (s - field.s[0]).min(field.s[n_s - 1] - s) / eps;
    PeakInfo {
        s: s.as_f64(),
        t: field.t[j].as_f64(),
        value: v[arg].as_f64(),
        index: (i, j),
        side,
        local_maxima,
        boundary_distance: dist.as_f64(),
        degenerate,
    }
}

/// Exponential fit `v ≈ C exp(−c d/ε)` along the boundary geodesic from a
/// boundary peak, `d = f(s*)|t − t*|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayProfile {
    pub amplitude: f64,
    pub rate: f64,
    pub points: usize,
}

/// Fits the decay away from a boundary peak using nodes with
/// `v/v(P) ∈ [1e−8, 1e−2]`. Returns `None` for an interior peak.
pub fn decay_profile<T: Real>(result: &MpResult<T>, geom: &ReducedGeometry<T>) -> Result<Option<DecayProfile>> {
    if result.peak.side == PeakSide::Interior {
        return Ok(None);
    }
    let field = &result.field;
    let (i, j0) = result.peak.index;
    let peak = field.at(i, j0);
    let f = geom.warp(field.s[i]);
    let (lo, hi) = (T::lit(1e-8) * peak, T::lit(1e-2) * peak);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for j in 0..field.n_t() {
        let v = field.at(i, j);
        if v >= lo && v <= hi {
            xs.push((f * (field.t[j] - field.t[j0]).abs() / result.eps).as_f64());
            ys.push(v.as_f64().ln());
        }
    }
    if xs.len() < 3 {
        return Err(Error::Fit(format!("only {} nodes in the decay window", xs.len())));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Fit("decay window has no spread".into()));
    }
    let slope = sxy / sxx;
    Ok(Some(DecayProfile {
        amplitude: (my - slope * mx).exp(),
        rate: -slope,
        points: xs.len(),
    }))
}

/// Relative sup-norm distance on the half ball `|y| ≤ radius` between the
/// rescaled field `v(P + εy)` and the ground state `U` matched to the
/// boundary weight, with `y = (depth, tangential distance)` in Fermi
/// coordinates about the peak.
pub fn peak_profile_error<T: Real>(
    result: &MpResult<T>,
    geom: &ReducedGeometry<T>,
    ground: &GroundState<T>,
    radius: T,
) -> Result<T> {
    let side = result
        .peak
        .side
        .boundary()
        .ok_or_else(|| Error::domain("peak profile comparison needs a boundary peak"))?;
    let kappa = geom.kappa(side);
    let gs = if (ground.kappa - kappa).abs() <= T::lit(1e-14) * kappa {
        ground.clone()
    } else {
        ground.with_kappa(kappa)?
    };
    let interp = result.field.interpolant()?;
    let s0 = geom.boundary_s(side);
    let f0 = geom.warp(s0);
    let t0 = T::lit(result.peak.t);
    let orient = geom.depth_orientation(side);
    let n = 48;
    let mut worst = T::zero();
    let u_max = gs.profile.peak();
    for a in 0..=n {
        for b in 0..=n {
            let y_d = radius * T::from_count(a) / T::from_count(n);
            let y_t = radius * T::from_count(b) / T::from_count(n);
            let r = (y_d * y_d + y_t * y_t).sqrt();
            if r > radius {
                continue;
            }
            let s = s0 + orient * result.eps * y_d;
            let t = t0 + result.eps * y_t / f0;
            let diff = (interp.value(s, t) - gs.profile.eval(r).0).abs();
            worst = worst.max(diff);
        }
    }
    Ok(worst / u_max)
}
