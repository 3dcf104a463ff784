//! Subcommands. Each writes its data files through [`Outputs`] and returns
//! whether its numerical checks passed.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use hopfspike::expansion::{expansion_report, TestFunctionParams};
use hopfspike::geometry::{energy_direct, energy_reduced, Pullback};
use hopfspike::ground_state::{decay_fit, verify_identities, GroundState};
use hopfspike::hopf::{act, annulus_residual, embed, lift, reduced_residual, SpherePoint};
use hopfspike::solver::{
    decay_profile, locate_peak, peak_profile_error, solve_mountain_pass, DecayProfile, GridSnapshot, GridSpec,
    MpResult, PeakInfo, PeakSide, SeedKind, SeedOutcome, SeedSpec, SolutionField, SolverOptions,
};
use hopfspike::{Error, ModalProfile, ProblemParams, ReducedGeometry, Side};

use crate::manifest::{FileRecord, Outputs};

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Radial ground state of ΔV − V + V^p = 0 and its integral identities.
    GroundState(GroundStateArgs),
    /// Annulus versus reduced energies of seeded random radial profiles.
    ReduceCheck(ReduceCheckArgs),
    /// Boundary energy expansion of the cut-off ground state and its order test.
    Expansion(ExpansionArgs),
    /// Least-energy solution of the reduced problem.
    Solve(SolveArgs),
    /// Peak side of the least-energy solution over a list of α.
    ConcentrationScan(ScanArgs),
    /// Lift a solved field to the annulus and check it there.
    Lift(LiftArgs),
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(args_override_self = true)]
pub struct GroundStateArgs {
    /// Space dimension d.
    #[arg(long)]
    pub dim: u32,
    /// Exponent of the nonlinearity, 1 < p < (d+2)/(d−2).
    #[arg(long)]
    pub p: f64,
    /// Weight κ of −ΔU + (U − U^p)/κ = 0.
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    /// Largest accepted identity residual.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

/// Annulus `{a < |x| < b}` in `R^{2N+2}` and the power `p`.
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ProblemArgs {
    /// Complex dimension N of the quotient CP^N.
    #[arg(long = "N", default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 2.0)]
    pub b: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
}

impl ProblemArgs {
    fn params(&self, alpha: f64, eps: f64) -> Result<ProblemParams<f64>> {
        Ok(ProblemParams::new(self.n, self.a, self.b, alpha, eps, self.p)?)
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(args_override_self = true)]
pub struct ReduceCheckArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    /// Annulus ε; also the width of the profiles' boundary layer.
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 20)]
    pub profiles: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(args_override_self = true)]
pub struct ExpansionArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    /// Boundary component carrying the test function.
    #[arg(long, default_value = "inner")]
    pub side: Side,
    /// Dilation t of the test function.
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Reduced ε values of the order test.
    #[arg(long, value_delimiter = ',', default_value = "0.08,0.04,0.02")]
    pub eps_list: Vec<f64>,
    #[arg(long, default_value_t = 3.2)]
    pub ratio_min: f64,
    #[arg(long, default_value_t = 4.8)]
    pub ratio_max: f64,
    /// Largest accepted residual of the curvature identity.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SolverArgs {
    /// Grid cells per ε at the boundaries (at least 10).
    #[arg(long, default_value_t = 20.0)]
    pub cells_per_eps: f64,
    #[arg(long, default_value_t = 1.05)]
    pub growth: f64,
    /// Largest cell in units of ε.
    #[arg(long, default_value_t = 2.0)]
    pub max_cell: f64,
    /// Seeds as kind-side with kind in {bump, z}.
    #[arg(long, value_delimiter = ',', default_value = "bump-inner,bump-outer,z-inner")]
    pub seeds: Vec<String>,
    /// Polar angle of the bump seeds.
    #[arg(long, default_value_t = 0.0)]
    pub latitude: f64,
    /// Bump width in units of ε√κ.
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    /// Relative Sobolev-gradient tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 50_000)]
    pub max_iter: usize,
}

impl SolverArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            grid: GridSpec {
                cells_per_eps: self.cells_per_eps,
                growth: self.growth,
                max_cell: self.max_cell,
            },
        }
    }

    fn seed_spec(&self) -> Result<SeedSpec> {
        let seeds = self
            .seeds
            .iter()
            .map(|s| s.parse::<SeedKind>())
            .collect::<hopfspike::Result<Vec<_>>>()?;
        Ok(SeedSpec {
            seeds,
            latitude: self.latitude,
            width: self.width,
        })
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(args_override_self = true)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    /// ε of the reduced equation on I' × CP^N.
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(args_override_self = true)]
pub struct ScanArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
    pub alpha_list: Vec<f64>,
    /// ε of the reduced equation on I' × CP^N.
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(args_override_self = true)]
pub struct LiftArgs {
    /// ACL1 field written by `solve`, with its `.json` sidecar alongside.
    #[arg(long)]
    pub field: PathBuf,
    /// Random points for the residual comparison.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Random (point, angle) pairs for the fixed-point scan.
    #[arg(long, default_value_t = 10_000)]
    pub orbit_samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Finite-difference step of both residuals.
    #[arg(long, default_value_t = 1e-4)]
    pub step: f64,
    /// Accepted ratio of annulus to reduced residual.
    #[arg(long, default_value_t = 10.0)]
    pub factor: f64,
}

/// Result of a command: verdict, summary lines and the inputs it read.
pub struct Outcome {
    pub passed: bool,
    pub lines: Vec<String>,
}

/// Files a command reads, recorded in the manifest.
pub fn inputs(cmd: &Command) -> Result<Vec<FileRecord>> {
    match cmd {
        Command::Lift(args) => {
            let meta = sidecar_path(&args.field);
            Ok(vec![
                FileRecord::of(&args.field, args.field.display().to_string())?,
                FileRecord::of(&meta, meta.display().to_string())?,
            ])
        }
        _ => Ok(Vec::new()),
    }
}

pub fn run(cmd: &Command, out: &mut Outputs) -> Result<Outcome> {
    match cmd {
        Command::GroundState(a) => ground_state(a, out),
        Command::ReduceCheck(a) => reduce_check(a, out),
        Command::Expansion(a) => expansion(a, out),
        Command::Solve(a) => solve(a, out),
        Command::ConcentrationScan(a) => scan(a, out),
        Command::Lift(a) => lift_check(a, out),
    }
}

fn ground_state(args: &GroundStateArgs, out: &mut Outputs) -> Result<Outcome> {
    let gs = GroundState::compute(args.dim, args.p, args.kappa)?;
    out.write_with("profile.csv", |w| gs.profile.write_csv(w))?;
    let mut lines = vec![
        format!("V(0) = {:.16e}", gs.profile.peak()),
        format!("energy = {:.16e}", gs.energy),
    ];
    let passed = if args.dim >= 2 {
        let report = verify_identities(&gs)?;
        out.write_json("identities.json", &report)?;
        lines.push(format!("max identity residual = {:.3e}", report.max_residual()));
        lines.push(format!(
            "printed dilation identity residual = {:.3e}",
            report.pohozaev_printed
        ));
        report.max_residual() < args.tol
    } else {
        lines.push("identities need a half space of dimension ≥ 2; skipped".into());
        true
    };
    Ok(Outcome { passed, lines })
}

#[derive(Serialize)]
struct ReductionRow {
    index: usize,
    direct: f64,
    reduced: f64,
    relative: f64,
}

#[derive(Serialize)]
struct ReductionReport<'a> {
    params: &'a ReduceCheckArgs,
    rows: Vec<ReductionRow>,
    max_relative: f64,
}

fn reduce_check(args: &ReduceCheckArgs, out: &mut Outputs) -> Result<Outcome> {
    let params = args.problem.params(args.alpha, args.eps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut rows = Vec::with_capacity(args.profiles);
    for index in 0..args.profiles {
        let draws: [f64; 8] = rng.gen();
        let u = ModalProfile::from_draws(params.a, params.b, params.eps, draws)?;
        let direct = energy_direct(&u, &params)?;
        let reduced = energy_reduced(&Pullback::new(&u, params.n), &params)?;
        rows.push(ReductionRow {
            index,
            direct,
            reduced,
            relative: ((direct - reduced) / direct).abs(),
        });
    }
    let max_relative = rows.iter().map(|r| r.relative).fold(0.0, f64::max);
    out.write_with("reduction.csv", |w| {
        use std::io::Write;
        writeln!(w, "index,direct,reduced,relative")?;
        for r in &rows {
            writeln!(
                w,
                "{},{:.16e},{:.16e},{:.16e}",
                r.index, r.direct, r.reduced, r.relative
            )?;
        }
        Ok(())
    })?;
    out.write_json(
        "reduction.json",
        &ReductionReport {
            params: args,
            rows,
            max_relative,
        },
    )?;
    Ok(Outcome {
        passed: max_relative < args.tol,
        lines: vec![format!(
            "max relative discrepancy over {} profiles = {max_relative:.3e}",
            args.profiles
        )],
    })
}

fn expansion(args: &ExpansionArgs, out: &mut Outputs) -> Result<Outcome> {
    let first = *args
        .eps_list
        .first()
        .ok_or_else(|| Error::Config("eps-list is empty".into()))?;
    let params = args.problem.params(args.alpha, first)?;
    let geom = ReducedGeometry::new(&params)?;
    let gs = GroundState::compute(2 * params.n + 1, params.p, 1.0)?;
    let tf = TestFunctionParams::new(&geom, &gs, args.side, first, args.t)?;
    let report = expansion_report(&tf, &geom, &args.eps_list)?;
    out.write_with("sweep.csv", |w| report.write_sweep_csv(w))?;
    out.write_with("orders.csv", |w| report.write_orders_csv(w))?;
    out.write_json("expansion.json", &report)?;
    let ratios_ok = report
        .ratios
        .iter()
        .all(|r| (args.ratio_min..=args.ratio_max).contains(r));
    let argmax_ok = (report.argmax_t - 1.0).abs() <= report.t_step;
    let curvature_ok = report.curvature_residual < args.tol;
    Ok(Outcome {
        passed: ratios_ok && argmax_ok && curvature_ok,
        lines: vec![
            format!("Richardson ratios = {:?}", report.ratios),
            format!(
                "ratios with the printed first-order terms = {:?}",
                report.ratios_printed
            ),
            format!("argmax_t I1 = {} (step {})", report.argmax_t, report.t_step),
            format!("curvature identity residual = {:.3e}", report.curvature_residual),
        ],
    })
}

/// Parameters stored next to a field snapshot.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldMeta {
    pub n: u32,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub p: f64,
    /// Reduced ε.
    pub eps: f64,
}

fn sidecar_path(field: &Path) -> PathBuf {
    field.with_extension("json")
}

#[derive(Serialize)]
struct SideLevels {
    inner: f64,
    outer: f64,
}

#[derive(Serialize)]
struct SolveReport {
    meta: FieldMeta,
    annulus_eps: f64,
    eta: f64,
    grid: (usize, usize),
    level: f64,
    /// `ε^{−(2N+1)}` times the level.
    scaled_level: f64,
    /// Half-space ground-state energies for the two boundary weights.
    limit_levels: SideLevels,
    constant_level: f64,
    peak: PeakInfo,
    peak_tie_break: &'static str,
    residual: f64,
    iterations: usize,
    seed: String,
    outcomes: Vec<SeedOutcome>,
    decay: Option<DecayProfile>,
    reference_decay_rate: Option<f64>,
    profile_error: Option<f64>,
}

fn solve_one(
    problem: &ProblemArgs,
    alpha: f64,
    eps: f64,
    solver: &SolverArgs,
    gs: &GroundState<f64>,
) -> Result<(MpResult<f64>, SolveReport)> {
    let params = problem.params(alpha, eps)?;
    let geom = ReducedGeometry::new(&params)?;
    let result = solve_mountain_pass(&params, &solver.options(), &solver.seed_spec()?)?;
    let boundary = result.peak.side.boundary();
    let (reference_decay_rate, profile_error) = match boundary {
        Some(side) => {
            let matched = gs.with_kappa(geom.kappa(side))?;
            (
                Some(decay_fit(&matched.profile)?.1),
                Some(peak_profile_error(&result, &geom, &matched, 3.0)?),
            )
        }
        None => (None, None),
    };
    let decay = decay_profile(&result, &geom).ok().flatten();
    let dim = 2 * params.n as i32 + 1;
    let report = SolveReport {
        meta: FieldMeta {
            n: params.n,
            a: params.a,
            b: params.b,
            alpha,
            p: params.p,
            eps,
        },
        annulus_eps: ReducedGeometry::annulus_eps(params.n, alpha, eps),
        eta: geom.eta,
        grid: (result.field.n_s(), result.field.n_t()),
        level: result.level,
        scaled_level: result.level / eps.powi(dim),
        limit_levels: SideLevels {
            inner: gs.with_kappa(geom.kappa_inner)?.energy,
            outer: gs.with_kappa(geom.kappa_outer)?.energy,
        },
        constant_level: result.constant_level,
        peak: result.peak,
        peak_tie_break: "lexicographically smallest (s, t) node",
        residual: result.residual,
        iterations: result.iterations,
        seed: result.seed.to_string(),
        outcomes: result.outcomes.clone(),
        decay,
        reference_decay_rate,
        profile_error,
    };
    Ok((result, report))
}

fn write_solution(out: &mut Outputs, stem: &str, result: &MpResult<f64>, report: &SolveReport) -> Result<()> {
    let snap = GridSnapshot::from_field(&result.field);
    out.write_with(&format!("{stem}.bin"), |w| snap.write_binary(w))?;
    out.write_json(&format!("{stem}.json"), &report.meta)?;
    out.write_with(&format!("{stem}.csv"), |w| snap.write_csv(w))?;
    Ok(())
}

fn solve(args: &SolveArgs, out: &mut Outputs) -> Result<Outcome> {
    let gs = GroundState::compute(2 * args.problem.n + 1, args.problem.p, 1.0)?;
    let (result, report) = solve_one(&args.problem, args.alpha, args.eps, &args.solver, &gs)?;
    write_solution(out, "field", &result, &report)?;
    out.write_with("history.csv", |w| {
        use std::io::Write;
        writeln!(w, "step,level")?;
        for (k, e) in result.history.iter().enumerate() {
            writeln!(w, "{k},{e:.16e}")?;
        }
        Ok(())
    })?;
    out.write_json("result.json", &report)?;
    let peak = &result.peak;
    let limit = match peak.side {
        PeakSide::Outer => report.limit_levels.outer,
        _ => report.limit_levels.inner,
    };
    Ok(Outcome {
        passed: result.level > 0.0 && peak.value >= 1.0 && !peak.degenerate,
        lines: vec![
            format!("peak side = {} at (s, t) = ({}, {})", peak.side, peak.s, peak.t),
            format!(
                "peak value = {:.6}, local maxima above 1 = {}",
                peak.value, peak.local_maxima
            ),
            format!(
                "level = {:.10e}, eps^-(2N+1) level = {:.6}, limit = {:.6}",
                result.level, report.scaled_level, limit
            ),
            format!("residual = {:.3e}, iterations = {}", result.residual, result.iterations),
        ],
    })
}

#[derive(Serialize)]
struct ScanRow {
    alpha: f64,
    eta: f64,
    expected: PeakSide,
    side: PeakSide,
    level: f64,
    scaled_level: f64,
    peak_value: f64,
    local_maxima: usize,
    boundary_distance: f64,
    residual: f64,
}

/// Side predicted for the least-energy spike: inner while the weight
/// exponent is positive, outer from the threshold on.
fn expected_side(eta: f64) -> PeakSide {
    if eta > 0.0 {
        PeakSide::Inner
    } else {
        PeakSide::Outer
    }
}

fn scan(args: &ScanArgs, out: &mut Outputs) -> Result<Outcome> {
    if args.alpha_list.is_empty() {
        return Err(Error::Config("alpha-list is empty".into()).into());
    }
    let gs = GroundState::compute(2 * args.problem.n + 1, args.problem.p, 1.0)?;
    let mut rows = Vec::new();
    for (k, &alpha) in args.alpha_list.iter().enumerate() {
        let (result, report) = solve_one(&args.problem, alpha, args.eps, &args.solver, &gs)?;
        write_solution(out, &format!("field_{k}"), &result, &report)?;
        out.write_json(&format!("result_{k}.json"), &report)?;
        rows.push(ScanRow {
            alpha,
            eta: report.eta,
            expected: expected_side(report.eta),
            side: result.peak.side,
            level: result.level,
            scaled_level: report.scaled_level,
            peak_value: result.peak.value,
            local_maxima: result.peak.local_maxima,
            boundary_distance: result.peak.boundary_distance,
            residual: result.residual,
        });
    }
    out.write_with("scan.csv", |w| {
        use std::io::Write;
        writeln!(
            w,
            "alpha,eta,expected,side,level,scaled_level,peak_value,local_maxima,boundary_distance,residual"
        )?;
        for r in &rows {
            writeln!(
                w,
                "{:.16e},{:.16e},{},{},{:.16e},{:.16e},{:.16e},{},{:.16e},{:.16e}",
                r.alpha,
                r.eta,
                r.expected,
                r.side,
                r.level,
                r.scaled_level,
                r.peak_value,
                r.local_maxima,
                r.boundary_distance,
                r.residual
            )?;
        }
        Ok(())
    })?;
    out.write_json("scan.json", &rows)?;
    let passed = rows
        .iter()
        .all(|r| r.side == r.expected && r.local_maxima == 1 && r.boundary_distance == 0.0);
    let lines = rows
        .iter()
        .map(|r| {
            format!(
                "alpha = {:<6} side = {:<8} expected = {:<8} maxima = {}",
                r.alpha, r.side, r.expected, r.local_maxima
            )
        })
        .collect();
    Ok(Outcome { passed, lines })
}

#[derive(Serialize)]
struct LiftReport {
    meta: FieldMeta,
    samples: usize,
    orbit_spread: f64,
    max_annulus_residual: f64,
    max_reduced_residual: f64,
    residual_ratio: f64,
    concentration_value: f64,
    antipodal_value: f64,
    antipodal_ratio: f64,
    orbit_samples: usize,
    fixed_points: usize,
    max_orbit_distance_error: f64,
}

fn lift_check(args: &LiftArgs, out: &mut Outputs) -> Result<Outcome> {
    let meta_path = sidecar_path(&args.field);
    let meta: FieldMeta = serde_json::from_str(
        &fs::read_to_string(&meta_path).with_context(|| format!("reading {}", meta_path.display()))?,
    )
    .map_err(|e| Error::Format(format!("{}: {e}", meta_path.display())))?;
    let bytes = fs::read(&args.field).with_context(|| format!("reading {}", args.field.display()))?;
    let snap = GridSnapshot::read_binary(&bytes[..])?;
    let params = ProblemParams::new(meta.n, meta.a, meta.b, meta.alpha, meta.eps, meta.p)?;
    let geom = ReducedGeometry::new(&params)?;
    let field = SolutionField::new(snap.s, snap.t, snap.values, &geom)?;
    let interp = field.interpolant()?;
    let peak = locate_peak(&field, meta.eps);
    let n = meta.n as usize;
    let h = args.step;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let phases = |rng: &mut ChaCha8Rng| (0..=n).map(|_| rng.gen::<f64>() * 2.0 * PI).collect::<Vec<_>>();
    let other_angles = |rng: &mut ChaCha8Rng, t: f64| {
        let mut v = vec![t];
        v.extend((1..n).map(|_| rng.gen::<f64>() * FRAC_PI_2));
        v
    };

    // Residuals at random interior points, half of them near the peak orbit.
    let margin_s = (40.0 * h * geom.warp(geom.s_max)).max(0.01);
    let margin_t = 40.0 * h;
    let f_peak = geom.warp(peak.s);
    let mut rows = Vec::with_capacity(args.samples);
    let mut spread = 0.0_f64;
    for k in 0..args.samples {
        let (s, t) = if k % 2 == 0 {
            let ds = rng.gen::<f64>() * 5.0 * meta.eps;
            let dt = (rng.gen::<f64>() * 2.0 - 1.0) * 5.0 * meta.eps / f_peak;
            let s = match peak.side {
                PeakSide::Outer => peak.s - ds,
                _ => peak.s + ds,
            };
            (s, peak.t + dt)
        } else {
            (
                geom.s_min + rng.gen::<f64>() * geom.length(),
                rng.gen::<f64>() * FRAC_PI_2,
            )
        };
        let s = s.clamp(geom.s_min + margin_s, geom.s_max - margin_s);
        let t = t.clamp(margin_t, FRAC_PI_2 - margin_t);
        let r = hopfspike::geometry::r_of_s(s, meta.n)?;
        let pt = SpherePoint::new(r, other_angles(&mut rng, t), phases(&mut rng))?;
        let x = embed(&pt)?;
        let annulus = annulus_residual(&interp, &params, &geom, &x, h)?;
        let reduced = reduced_residual(&interp, &params, &geom, s, t, h);
        let base = lift(&interp, &pt, &geom)?;
        for _ in 0..4 {
            let tau = rng.gen::<f64>() * 2.0 * PI;
            spread = spread.max((lift(&interp, &act(&pt, tau), &geom)? - base).abs());
        }
        rows.push((s, t, annulus, reduced));
    }
    let max_annulus = rows.iter().map(|r| r.2.abs()).fold(0.0, f64::max);
    let max_reduced = rows.iter().map(|r| r.3.abs()).fold(0.0, f64::max);

    // Concentration orbit against the antipodal orbit in CP^N.
    let r_peak = hopfspike::geometry::r_of_s(peak.s, meta.n)?;
    let on = SpherePoint::new(r_peak, other_angles(&mut rng, peak.t), phases(&mut rng))?;
    let opposite = SpherePoint::new(r_peak, other_angles(&mut rng, FRAC_PI_2 - peak.t), phases(&mut rng))?;
    let concentration_value = lift(&interp, &on, &geom)?;
    let antipodal_value = lift(&interp, &opposite, &geom)?;

    // Fixed points of the circle action: |T_τ x − x| = 2|x| |sin(τ/2)| > 0.
    let mut fixed_points = 0;
    let mut distance_error = 0.0_f64;
    for _ in 0..args.orbit_samples {
        let r = params.a + rng.gen::<f64>() * (params.b - params.a);
        let t = rng.gen::<f64>() * FRAC_PI_2;
        let pt = SpherePoint::new(r, other_angles(&mut rng, t), phases(&mut rng))?;
        let tau = rng.gen::<f64>() * 2.0 * PI;
        if tau == 0.0 {
            continue;
        }
        let (x, y) = (embed(&pt)?, embed(&act(&pt, tau))?);
        let dist = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let expected = 2.0 * r * (tau / 2.0).sin().abs();
        if dist <= 1e-12 * r {
            fixed_points += 1;
        }
        distance_error = distance_error.max((dist - expected).abs() / r);
    }

    out.write_with("lift_samples.csv", |w| {
        use std::io::Write;
        writeln!(w, "s,t,annulus_residual,reduced_residual")?;
        for (s, t, a, r) in &rows {
            writeln!(w, "{s:.16e},{t:.16e},{a:.16e},{r:.16e}")?;
        }
        Ok(())
    })?;
    let report = LiftReport {
        meta,
        samples: args.samples,
        orbit_spread: spread,
        max_annulus_residual: max_annulus,
        max_reduced_residual: max_reduced,
        residual_ratio: max_annulus / max_reduced,
        concentration_value,
        antipodal_value,
        antipodal_ratio: concentration_value / antipodal_value.abs(),
        orbit_samples: args.orbit_samples,
        fixed_points,
        max_orbit_distance_error: distance_error,
    };
    out.write_json("lift.json", &report)?;
    let passed =
        spread == 0.0 && max_annulus <= args.factor * max_reduced && report.antipodal_ratio > 1e3 && fixed_points == 0;
    Ok(Outcome {
        passed,
        lines: vec![
            format!("orbit value spread = {spread:e}"),
            format!("max annulus residual = {max_annulus:.3e}, max reduced residual = {max_reduced:.3e}"),
            format!("concentration / antipodal value = {:.3e}", report.antipodal_ratio),
            format!("fixed points in {} samples = {fixed_points}", args.orbit_samples),
        ],
    })
}
