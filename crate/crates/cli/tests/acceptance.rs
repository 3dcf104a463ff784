//! Acceptance run: one PASS/FAIL line per criterion. Library checks for the
//! ground-state oracles, the `hopfspike` binary for everything that writes
//! a manifest, and a replay of every manifest at the end.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use serde_json::Value;

use hopfspike::expansion::curvature_functional;
use hopfspike::ground_state::{verify_identities, GroundState};
use hopfspike::{ProblemParams, ReducedGeometry, Side};

struct Run {
    code: Option<i32>,
    stdout: String,
    seconds: f64,
}

struct Harness {
    root: tempfile::TempDir,
    manifests: Vec<PathBuf>,
    failures: usize,
}

impl Harness {
    fn dir(&self, name: &str) -> PathBuf {
        self.root.path().join(name)
    }

    fn run(&mut self, out: &str, args: &[&str]) -> Run {
        let dir = self.dir(out);
        let clock = Instant::now();
        let o = Command::new(env!("CARGO_BIN_EXE_hopfspike"))
            .arg("--out")
            .arg(&dir)
            .args(args)
            .env_remove("HOPFSPIKE_OUT")
            .output()
            .expect("binary runs");
        let manifest = dir.join("manifest.json");
        if manifest.exists() && !args.contains(&"replay") {
            self.manifests.push(manifest);
        }
        Run {
            code: o.status.code(),
            stdout: String::from_utf8_lossy(&o.stdout).into_owned(),
            seconds: clock.elapsed().as_secs_f64(),
        }
    }

    fn report(&mut self, id: u32, name: &str, passed: bool, detail: String) {
        if !passed {
            self.failures += 1;
        }
        println!("[{}] {id:>2} {name}: {detail}", if passed { "PASS" } else { "FAIL" });
    }
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

fn reduction(h: &mut Harness) {
    let cases: [(&str, &str, &str); 2] = [("1", "2", "0"), ("2", "1.5", "1")];
    let mut worst = 0.0_f64;
    let mut ok = true;
    let mut seconds = 0.0;
    for (n, p, alpha) in cases {
        let out = format!("reduce_n{n}");
        let r = h.run(
            &out,
            &[
                "reduce-check",
                "--N",
                n,
                "--p",
                p,
                "--alpha",
                alpha,
                "--profiles",
                "20",
                "--seed",
                n,
            ],
        );
        seconds += r.seconds;
        ok &= r.code == Some(0);
        if r.code == Some(0) {
            worst = worst.max(num(&json(&h.dir(&out).join("reduction.json"))["max_relative"]));
        }
    }
    let passed = ok && worst < 1e-6 && seconds < 10.0;
    h.report(
        1,
        "reduction equivalence",
        passed,
        format!("max |J_direct − J_reduced|/|J_direct| = {worst:.2e} over N ∈ {{1, 2}}, {seconds:.1} s"),
    );
}

fn identities(h: &mut Harness) {
    let clock = Instant::now();
    let mut worst = 0.0_f64;
    let mut printed = f64::INFINITY;
    let mut error = None;
    for (d, p) in [(3, 2.0), (3, 3.0), (5, 2.0)] {
        for kappa in [1.0, 2.0] {
            match GroundState::compute(d, p, kappa).and_then(|gs| verify_identities(&gs)) {
                Ok(r) => {
                    worst = worst.max(r.max_residual());
                    printed = printed.min(r.pohozaev_printed.abs());
                }
                Err(e) => error = Some(e.to_string()),
            }
        }
    }
    let seconds = clock.elapsed().as_secs_f64();
    let passed = error.is_none() && worst < 1e-6 && seconds < 30.0;
    h.report(
        2,
        "ground-state identities",
        passed,
        match error {
            Some(e) => e,
            None => format!(
                "max residual = {worst:.2e}; sign-flipped dilation form residual ≥ {printed:.3} (nonzero), {seconds:.1} s"
            ),
        },
    );
    let r = h.run("ground_state", &["ground-state", "--dim", "3", "--p", "2"]);
    if r.code != Some(0) {
        h.report(2, "ground-state command", false, r.stdout);
    }
}

fn soliton(h: &mut Harness) {
    let detail = GroundState::compute(1, 3.0, 1.0).map(|gs| {
        let v = &gs.profile;
        let r_end = v.r_end();
        let samples = 20_000;
        let err = (0..=samples)
            .map(|k| r_end * k as f64 / samples as f64)
            .map(|x| (v.eval(x).0 - 2f64.sqrt() / x.cosh()).abs())
            .fold(0.0, f64::max);
        (err, r_end)
    });
    match detail {
        Ok((err, r_end)) => h.report(
            3,
            "1D soliton",
            err < 1e-8,
            format!("sup |V − √2 sech| on [0, {r_end:.1}] = {err:.2e}"),
        ),
        Err(e) => h.report(3, "1D soliton", false, e.to_string()),
    }
}

fn curvature(h: &mut Harness) {
    let run = || -> hopfspike::Result<f64> {
        let params = ProblemParams::<f64>::new(1, 1.0, 2.0, 0.0, 0.05, 2.0)?;
        let geom = ReducedGeometry::new(&params)?;
        let base = GroundState::compute(3, 2.0, 1.0)?;
        let mut worst = 0.0_f64;
        for side in [Side::Inner, Side::Outer] {
            let gs = base.with_kappa(geom.kappa(side))?;
            let (value, closed) = curvature_functional(side, &gs, &geom)?;
            worst = worst.max(((value - closed) / closed).abs());
        }
        Ok(worst)
    };
    match run() {
        Ok(worst) => h.report(
            4,
            "curvature functional identity",
            worst < 1e-6,
            format!("max relative residual over both boundary weights = {worst:.2e}"),
        ),
        Err(e) => h.report(4, "curvature functional identity", false, e.to_string()),
    }
}

fn expansion(h: &mut Harness) {
    let r = h.run("expansion", &["expansion", "--eps-list", "0.08,0.04,0.02"]);
    let report = json(&h.dir("expansion").join("expansion.json"));
    let ratios: Vec<f64> = report["ratios"].as_array().unwrap().iter().map(num).collect();
    let printed: Vec<f64> = report["ratios_printed"].as_array().unwrap().iter().map(num).collect();
    let argmax = num(&report["argmax_t"]);
    let step = num(&report["t_step"]);
    let passed = r.code == Some(0)
        && ratios.len() == 2
        && ratios.iter().all(|x| (3.2..=4.8).contains(x))
        && (argmax - 1.0).abs() <= step
        && r.seconds < 60.0;
    h.report(
        5,
        "energy expansion order",
        passed,
        format!(
            "Richardson ratios {ratios:.3?} (printed first-order terms give {printed:.3?}); argmax_t I₁ = {argmax} (step {step}); {:.1} s",
            r.seconds
        ),
    );
}

const ALPHAS: [&str; 4] = ["0", "1", "2", "3"];

fn threshold(h: &mut Harness) {
    let r = h.run(
        "scan",
        &[
            "concentration-scan",
            "--N",
            "1",
            "--a",
            "1",
            "--b",
            "2",
            "--p",
            "2",
            "--eps",
            "0.05",
            "--alpha-list",
            "0,1,2,3",
        ],
    );
    if r.code.is_none() || !h.dir("scan").join("scan.json").exists() {
        h.report(6, "concentration threshold", false, r.stdout);
        return;
    }
    let rows = json(&h.dir("scan").join("scan.json"));
    let rows = rows.as_array().unwrap();
    let sides: Vec<&str> = rows.iter().map(|r| r["side"].as_str().unwrap()).collect();
    let maxima: Vec<u64> = rows.iter().map(|r| r["local_maxima"].as_u64().unwrap()).collect();
    let distance = rows.iter().map(|r| num(&r["boundary_distance"])).fold(0.0, f64::max);
    let passed = sides == ["inner", "inner", "outer", "outer"]
        && maxima.iter().all(|&m| m == 1)
        && distance == 0.0
        && r.seconds < 600.0;
    h.report(
        6,
        "concentration threshold",
        passed,
        format!(
            "α = {ALPHAS:?} → {sides:?}; local maxima {maxima:?}; max boundary distance {distance}; {:.1} s",
            r.seconds
        ),
    );
}

fn level_asymptotics(h: &mut Harness) {
    let mut scaled = Vec::new();
    let mut limit = f64::NAN;
    for eps in ["0.2", "0.1"] {
        let out = format!("solve_eps{eps}");
        let r = h.run(&out, &["solve", "--alpha", "0", "--eps", eps]);
        if r.code != Some(0) {
            h.report(7, "level asymptotics", false, format!("solve at ε = {eps} failed"));
            return;
        }
        scaled.push(num(&json(&h.dir(&out).join("result.json"))["scaled_level"]));
    }
    let mut within = Vec::new();
    for k in 0..ALPHAS.len() {
        let path = h.dir("scan").join(format!("result_{k}.json"));
        if !path.exists() {
            h.report(7, "level asymptotics", false, "scan results missing".into());
            return;
        }
        let res = json(&path);
        let side = res["peak"]["side"].as_str().unwrap_or("interior").to_string();
        let gamma = num(&res["limit_levels"][&side]);
        let level = num(&res["scaled_level"]);
        if k == 0 {
            scaled.push(level);
            limit = gamma;
        }
        within.push((level - gamma).abs() / gamma);
    }
    let gaps: Vec<f64> = scaled.iter().map(|c| c - limit).collect();
    let decreasing = scaled.windows(2).all(|w| w[1] < w[0]);
    let passed = decreasing && within.iter().all(|&w| w < 0.1);
    h.report(
        7,
        "level asymptotics",
        passed,
        format!(
            "α = 0: ε^-3 c_ε at ε = 0.2, 0.1, 0.05 = {scaled:.3?}, Γ(V;κ) = {limit:.3}, gaps {gaps:.3?}; relative gap at ε = 0.05 for α = {ALPHAS:?}: {within:.3?}"
        ),
    );
}

fn peak_profile(h: &mut Harness) {
    let errors: Vec<f64> = (0..ALPHAS.len())
        .map(|k| {
            let path = h.dir("scan").join(format!("result_{k}.json"));
            if path.exists() {
                num(&json(&path)["profile_error"])
            } else {
                f64::NAN
            }
        })
        .collect();
    let passed = errors.iter().all(|&e| e < 0.1);
    h.report(
        8,
        "peak profile",
        passed,
        format!("relative sup error on the 3ε half ball at ε = 0.05 for α = {ALPHAS:?}: {errors:.4?}"),
    );
}

fn lift(h: &mut Harness) {
    let field = h.dir("scan").join("field_0.bin");
    let r = h.run(
        "lift",
        &[
            "lift",
            "--field",
            field.to_str().unwrap(),
            "--samples",
            "1000",
            "--orbit-samples",
            "10000",
            "--factor",
            "10",
        ],
    );
    let path = h.dir("lift").join("lift.json");
    if !path.exists() {
        h.report(9, "lift", false, r.stdout);
        return;
    }
    let rep = json(&path);
    let spread = num(&rep["orbit_spread"]);
    let ratio = num(&rep["residual_ratio"]);
    let fixed = rep["fixed_points"].as_u64().unwrap_or(u64::MAX);
    let antipodal = num(&rep["antipodal_ratio"]);
    let passed = r.code == Some(0) && spread == 0.0 && ratio <= 10.0 && fixed == 0;
    h.report(
        9,
        "lift",
        passed,
        format!(
            "orbit spread {spread}; annulus/reduced residual ratio {ratio:.3} (max annulus {:.2e}); fixed points {fixed}/10000; concentration/antipodal {antipodal:.1e}",
            num(&rep["max_annulus_residual"])
        ),
    );
}

fn reproducibility(h: &mut Harness) {
    let manifests = h.manifests.clone();
    let mut identical = 0;
    let mut differing = Vec::new();
    for (k, m) in manifests.iter().enumerate() {
        let r = h.run(&format!("replay_{k}"), &["replay", m.to_str().unwrap()]);
        if r.code == Some(0) && r.stdout.contains("REPLAY IDENTICAL") {
            identical += 1;
        } else {
            differing.push(m.parent().unwrap().file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    h.report(
        10,
        "reproducibility",
        differing.is_empty() && !manifests.is_empty(),
        format!(
            "{identical}/{} manifests replay byte-identically; differing {differing:?}",
            manifests.len()
        ),
    );
}

fn main() {
    // Accept and ignore libtest flags passed by `cargo test`.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut h = Harness {
        root: tempfile::tempdir().unwrap(),
        manifests: Vec::new(),
        failures: 0,
    };
    reduction(&mut h);
    identities(&mut h);
    soliton(&mut h);
    curvature(&mut h);
    expansion(&mut h);
    threshold(&mut h);
    level_asymptotics(&mut h);
    peak_profile(&mut h);
    lift(&mut h);
    reproducibility(&mut h);
    println!("acceptance: {} criteria failed", h.failures);
    if h.failures > 0 {
        std::process::exit(1);
    }
}
