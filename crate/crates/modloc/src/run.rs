//! Mode execution: config in, report and data files out.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use modloc_core::analytic::{AnalyticVector, Sign};
use modloc_core::conventions;
use modloc_core::flap::{
    cauchy_quadrature, cauchy_tube_reconstruct, epstein_bound_check_with, epstein_cauchy_probe, fl_transform, geometric, hormander_cone_estimate, linspace,
    pws_check_with, pws_ray_ratio, support_from_growth, SampledDistribution, TestFunction, TubeGrid,
};
use modloc_core::localization::{
    boundary_condition_check, boundary_function, factorization_residual, growth_check_u, localize, membership_test, GrowthProbe,
};
use modloc_core::modular::{continue_boost, gaussian_battery, s_op, tomita_check_with, Backend, Source as Src, REL_BACKENDS};
use modloc_core::regions::{support_function, PolyRegion};
use modloc_core::shell::WaveFunction;
use modloc_core::{Error, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Mode, RunConfig, TubeFunctionSpec, TubeGridConfig, Vector};
use crate::error::{CoreContext, RunError};
use crate::formats::{self, wavefunction_csv, DistributionJson, RegionJson};
use crate::report::{self, num, nums, Check};

/// One run: the mode, its parsed config, the directory relative paths in
/// the config resolve against, and command-line overrides.
#[derive(Debug, Clone)]
pub struct Invocation {
    pub mode: Mode,
    pub config: RunConfig,
    pub base_dir: PathBuf,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

impl Invocation {
    pub fn from_file(mode: Mode, path: &Path) -> Result<Invocation, RunError> {
        let config = crate::config::load(path)?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Invocation { mode, config, base_dir, seed: None, tol: None })
    }
}

/// Report plus data files (name, contents), not yet written anywhere.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub files: Vec<(String, String)>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Outcome {
    /// Writes `report.json` and the data files into `dir`, each atomically.
    pub fn write(&self, dir: &Path) -> Result<(), RunError> {
        std::fs::create_dir_all(dir).map_err(|e| RunError::io(dir, e))?;
        formats::write_atomic(&dir.join("report.json"), report::to_pretty(&self.report).as_bytes())?;
        for (name, body) in &self.files {
            formats::write_atomic(&dir.join(name), body.as_bytes())?;
        }
        Ok(())
    }

    /// 0 when every check passed, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            2
        }
    }
}

struct ModeOutput {
    checks: Vec<Check>,
    result: Value,
    files: Vec<(String, String)>,
    pairing: &'static str,
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    base: &'a Path,
    seed: u64,
    tol: f64,
}

pub fn execute(inv: &Invocation) -> Result<Outcome, RunError> {
    let cfg = &inv.config;
    if let Some(m) = cfg.mode {
        if m != inv.mode {
            return Err(RunError::invalid("mode", format!("config is for `{}` but `{}` was requested", m.name(), inv.mode.name())));
        }
    }
    let tol = crate::config::resolve_tol(inv.mode, cfg, inv.tol)?;
    let ctx = Ctx { cfg, base: &inv.base_dir, seed: inv.seed.unwrap_or(cfg.seed), tol };
    let out = match inv.mode {
        Mode::Tomita => tomita(&ctx)?,
        Mode::Localize => localize_mode(&ctx)?,
        Mode::Boundary => boundary(&ctx)?,
        Mode::Pws => pws(&ctx)?,
        Mode::Hormander => hormander(&ctx)?,
        Mode::Epstein => epstein(&ctx)?,
        Mode::SupportEstimate => support_estimate(&ctx)?,
        Mode::Cauchy => cauchy(&ctx)?,
    };
    let pass = out.checks.iter().all(|c| c.pass);
    let report = json!({
        "metadata": report::metadata(),
        "mode": inv.mode.name(),
        "seed": ctx.seed,
        "tol": num(tol),
        "config": serde_json::to_value(cfg).expect("config serializes"),
        "conventions": report::conventions(out.pairing),
        "checks": out.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        "result": out.result,
        "files": out.files.iter().map(|f| f.0.clone()).collect::<Vec<_>>(),
        "pass": pass,
    });
    Ok(Outcome { report, files: out.files, checks: out.checks, pass })
}

fn section<'a, T>(s: &'a Option<T>, name: &str) -> Result<&'a T, RunError> {
    s.as_ref().ok_or_else(|| RunError::invalid(name, "section required for this mode"))
}

fn white_noise(grid: &std::sync::Arc<modloc_core::shell::MassShellGrid>, seed: u64) -> WaveFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..grid.len()).map(|_| C64::new(rng.gen::<f64>() - 0.5, 0.0)).collect();
    WaveFunction::new(grid.clone(), samples).expect("length matches")
}

fn tomita(ctx: &Ctx) -> Result<ModeOutput, RunError> {
    let c = &ctx.cfg.tomita;
    let grid = ctx.cfg.grid.build()?;
    let frame = c.frame.build("tomita.frame")?;
    let j_frame = match &c.j_frame {
        Some(f) => f.build("tomita.j_frame")?,
        None => frame,
    };
    if c.signs.is_empty() {
        return Err(RunError::invalid("tomita.signs", "needs at least one sign"));
    }
    if !(c.backend_tol > 0.0) {
        return Err(RunError::invalid("tomita.backend_tol", "must be positive"));
    }
    let battery: Vec<AnalyticVector> = match &c.battery {
        None => gaussian_battery(grid.clone()),
        Some(specs) => {
            if specs.is_empty() {
                return Err(RunError::invalid("tomita.battery", "needs at least one vector"));
            }
            specs
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let field = format!("tomita.battery[{i}]");
                    s.family(&field)?.map(|f| AnalyticVector::from_family(f, grid.clone())).ok_or_else(|| RunError::invalid(field, "needs a closed-form vector"))
                })
                .collect::<Result<_, _>>()?
        }
    };
    let reports = c
        .signs
        .par_iter()
        .map(|&s| tomita_check_with(&frame, &j_frame, s.into(), &battery))
        .collect::<Result<Vec<_>, _>>()
        .ctx("tomita")?;
    let mut checks = Vec::new();
    for r in &reports {
        for rel in &r.relations {
            let bound = if rel.name == REL_BACKENDS { c.backend_tol } else { ctx.tol };
            checks.push(Check::at_most(format!("{} [{}]", rel.name, r.sign.symbol()), rel.residual, bound));
        }
    }
    let mut noise = Value::Null;
    if c.noise_control {
        let w = white_noise(&grid, ctx.seed);
        let r = continue_boost(Src::Sampled(&w), &frame, C64::new(0.0, PI / 2.0), Backend::Spectral);
        let (rejected, detail) = match r {
            Err(Error::NotInDomain { tail_ratio }) => (true, json!({"error": "NotInDomain", "tail_ratio": num(tail_ratio)})),
            Err(e) => (false, json!({"error": e.to_string()})),
            Ok(_) => (false, json!({"error": null})),
        };
        checks.push(Check::holds("white noise rejected with NotInDomain", rejected));
        noise = detail;
    }
    // plot data: norm of the continued first battery member across the strip
    let mut profile = Vec::new();
    for k in 0..=16 {
        let y = PI * k as f64 / 16.0;
        let v = continue_boost(Src::Analytic(&battery[0]), &frame, C64::new(0.0, y), Backend::ClosedForm).ctx("strip profile")?;
        profile.push(vec![y, v.values.norm()]);
    }
    Ok(ModeOutput {
        checks,
        result: json!({
            "battery_size": battery.len(),
            "j_frame": report::frame(&j_frame),
            "reports": reports.iter().map(report::modular_report).collect::<Vec<_>>(),
            "noise_control": noise,
        }),
        files: vec![("strip_profile.csv".into(), formats::series_csv(&["im_tau", "norm"], &profile))],
        pairing: conventions::PAIRING_EUCLIDEAN,
    })
}

fn unit(w: WaveFunction, field: &str) -> Result<WaveFunction, RunError> {
    let n = w.norm();
    if !(n > 0.0 && n.is_finite()) {
        return Err(RunError::invalid(field, "vector has zero or non-finite norm"));
    }
    Ok(w.scale(C64::new(1.0 / n, 0.0)))
}

fn localize_mode(ctx: &Ctx) -> Result<ModeOutput, RunError> {
    let c = &ctx.cfg.localize;
    let grid = ctx.cfg.grid.build()?;
    let family = c.family.build("localize.family", ctx.base)?;
    let sign: Sign = c.sign.into();
    if c.max_iter == 0 {
        return Err(RunError::invalid("localize.max_iter", "must be positive"));
    }
    let prepare = |spec: &crate::config::VectorSpec, field: &str| -> Result<WaveFunction, RunError> {
        let w = spec.build(field, &grid, ctx.base)?.samples();
        if c.normalize {
            unit(w, field)
        } else {
            Ok(w)
        }
    };
    let phi = prepare(&c.input, "localize.input")?;
    let r = localize(&family, sign, &phi, ctx.tol, c.max_iter, c.method.into()).ctx("localize")?;
    let worst = r.residuals.iter().fold(0.0f64, |m, &x| m.max(x));
    let mut checks = vec![
        Check::at_most("max per-wedge residual", worst, ctx.tol),
        Check::holds("converged within max_iter", r.converged),
    ];
    let m = membership_test(&family, sign, &r.projected, ctx.tol).ctx("membership")?;
    checks.push(Check::holds("result is a member of every wedge subspace", m.member));
    checks.push(Check::above("result norm", r.projected.norm(), 10.0 * ctx.tol));
    let rotated = r.projected.scale(C64::new(0.0, 1.0));
    let mi = membership_test(&family, sign, &rotated, ctx.tol).ctx("membership")?;
    checks.push(Check::holds("i * result is not a member", !mi.member));
    let mut combo_json = Value::Null;
    if let Some(spec) = &c.combine_with {
        let psi = prepare(spec, "localize.combine_with")?;
        let r2 = localize(&family, sign, &psi, ctx.tol, c.max_iter, c.method.into()).ctx("localize")?;
        let combo = r.projected.scale(C64::new(-0.6, 0.0)).add(&r2.projected.scale(C64::new(0.4, 0.0))).ctx("combination")?;
        let mc = membership_test(&family, sign, &combo, ctx.tol).ctx("membership")?;
        checks.push(Check::holds("second input converged", r2.converged));
        checks.push(Check::holds("-0.6 x + 0.4 y is a member", mc.member));
        combo_json = json!({
            "second": report::localization_result(&r2, ""),
            "combination_residuals": nums(&mc.residuals.iter().map(|x| x.1).collect::<Vec<_>>()),
        });
    }
    let history: Vec<Vec<f64>> = r.residual_history.iter().enumerate().map(|(i, &x)| vec![i as f64, x]).collect();
    Ok(ModeOutput {
        checks,
        result: json!({
            "localization": report::localization_result(&r, "projected.csv"),
            "family_region": report::region(&family.region),
            "membership_residuals": nums(&m.residuals.iter().map(|x| x.1).collect::<Vec<_>>()),
            "i_multiple_residuals": nums(&mi.residuals.iter().map(|x| x.1).collect::<Vec<_>>()),
            "combination": combo_json,
        }),
        files: vec![
            ("projected.csv".into(), wavefunction_csv(&r.projected)),
            ("residual_history.csv".into(), formats::series_csv(&["iteration", "residual"], &history)),
        ],
        pairing: conventions::PAIRING_EUCLIDEAN,
    })
}

fn src(v: &Vector) -> Src<'_> {
    match v {
        Vector::Analytic(a) => Src::Analytic(a),
        Vector::Sampled(w) => Src::Sampled(w),
    }
}

fn boundary(ctx: &Ctx) -> Result<ModeOutput, RunError> {
    let c = &ctx.cfg.boundary;
    let grid = ctx.cfg.grid.build()?;
    let l = c.frame.build("boundary.frame")?;
    let sign: Sign = c.sign.into();
    if c.stride == 0 || c.tube_stride == 0 {
        return Err(RunError::invalid("boundary.stride", "strides must be positive"));
    }
    let v = c.vector.build("boundary.vector", &grid, ctx.base)?;
    let psi = if c.member {
        match &v {
            Vector::Analytic(a) => Vector::Analytic(a.add(&a.s_op(&l, sign).ctx("s")?).ctx("member")?),
            Vector::Sampled(w) => Vector::Sampled(w.add(&s_op(&l, sign, Src::Sampled(w), Backend::Spectral).ctx("s")?).ctx("member")?),
        }
    } else {
        v
    };
    let ipsi = match &psi {
        Vector::Analytic(a) => Vector::Analytic(a.scale(C64::new(0.0, 1.0))),
        Vector::Sampled(w) => Vector::Sampled(w.scale(C64::new(0.0, 1.0))),
    };
    let mut points: Vec<(usize, usize)> = (0..grid.transverse.len()).flat_map(|t| (0..grid.n_theta).step_by(c.stride).map(move |j| (j, t))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    for _ in 0..c.random_points {
        points.push((rng.gen_range(0..grid.n_theta), rng.gen_range(0..grid.transverse.len())));
    }
    let taus: Vec<C64> = match &c.taus {
        Some(t) => {
            if t.is_empty() || t.iter().any(|z| !(z[1].abs() <= PI) || !z[0].is_finite()) {
                return Err(RunError::invalid("boundary.taus", "need finite entries with |Im τ| <= π"));
            }
            t.iter().map(|z| C64::new(z[0], z[1])).collect()
        }
        None => [-0.4, -0.2, 0.0, 0.2, 0.4].iter().flat_map(|&re| (0..5).map(move |k| C64::new(re, sign.value() * PI * k as f64 / 4.0))).collect(),
    };
    let bc = boundary_condition_check(src(&psi), l.a, &l.lambda, sign, &points).ctx("boundary condition")?;
    let mut checks = vec![Check::at_most("boundary condition residual", bc.max_residual, ctx.tol)];
    let mut control = Value::Null;
    if c.control {
        let bad = boundary_condition_check(src(&ipsi), l.a, &l.lambda, sign, &points).ctx("boundary condition")?;
        checks.push(Check::above("i * psi boundary residual", bad.max_residual, c.control_min));
        control = num(bad.max_residual);
    }
    let tube_points: Vec<(usize, usize)> = points.iter().copied().step_by(c.tube_stride).collect();
    let sample = boundary_function(src(&psi), l.a, &l.lambda, &taus, &tube_points).ctx("boundary function")?;
    let shell = sample.shell_residual(grid.mass);
    let fact = factorization_residual(src(&psi), &sample).ctx("factorization")?;
    checks.push(Check::at_most("tube points on the complex mass shell", shell, 1e-8));
    checks.push(Check::at_most("factorization u = e^{i<zeta,a>} r_+", fact, c.factorization_tol));
    let mut growth = Value::Null;
    if let Some(g) = &c.growth {
        let region = match &g.region {
            Some(r) => RegionJson::resolve(r, "boundary.growth.region", ctx.base)?,
            None => PolyRegion::point(&l.a.0),
        };
        if region.dim != 4 {
            return Err(RunError::invalid("boundary.growth.region", "must be four-dimensional"));
        }
        if g.n_lambda == 0 || g.n_height == 0 || g.stride == 0 {
            return Err(RunError::invalid("boundary.growth", "n_lambda, n_height and stride must be positive"));
        }
        let mut probe = GrowthProbe::uniform(g.n_lambda, g.lambda_max, g.n_height, g.stride);
        probe.n_declared = g.n_declared;
        let r1 = growth_check_u(src(&psi), l.a, &l.lambda, sign, &region, &probe).ctx("growth")?;
        let r2 = growth_check_u(src(&psi), l.a, &l.lambda, sign, &region, &probe.doubled()).ctx("growth")?;
        let drift = if r1.c == 0.0 && r2.c == 0.0 { 0.0 } else { (r2.c / r1.c - 1.0).abs() };
        checks.push(Check::holds("growth bound finite", r1.pass && r2.pass));
        checks.push(Check::at_most("growth constant drift under probe doubling", drift, 0.2));
        growth = json!({"base": report::bound_report(&r1), "doubled": report::bound_report(&r2), "region": report::region(&region)});
    }
    let rows: Vec<Vec<f64>> = points.iter().zip(&bc.residuals).map(|(&(j, t), &r)| vec![grid.theta(j), t as f64, r]).collect();
    Ok(ModeOutput {
        checks,
        result: json!({
            "frame": report::frame(&l),
            "sign": sign.symbol(),
            "member_constructed": c.member,
            "n_points": points.len(),
            "boundary_max_residual": num(bc.max_residual),
            "i_multiple_max_residual": control,
            "tube": {"n_taus": taus.len(), "n_points": sample.points.len(), "shell_residual": num(shell), "factorization_residual": num(fact)},
            "growth": growth,
        }),
        files: vec![
            ("tube_sample.csv".into(), formats::tube_sample_csv(&sample)),
            ("boundary_residuals.csv".into(), formats::series_csv(&["theta", "t", "residual"], &rows)),
        ],
        pairing: conventions::PAIRING_MINKOWSKI,
    })
}

fn unit_directions(dim: usize) -> Vec<Vec<f64>> {
    if dim == 2 {
        return (0..8).map(|k| {
            let a = PI * k as f64 / 4.0;
            vec![a.cos(), a.sin()]
        }).collect();
    }
    (0..dim)
        .flat_map(|i| {
            [1.0, -1.0].into_iter().map(move |s| {
                let mut v = vec![0.0; dim];
                v[i] = s;
                v
            })
        })
        .collect()
}

struct GridDefaults {
    xi_max: f64,
    n_xi: usize,
    directions: Vec<Vec<f64>>,
    r_min: f64,
    r_max: f64,
    n_r: usize,
}

fn tube_grid(g: &TubeGridConfig, dim: usize, d: GridDefaults, field: &str) -> Result<TubeGrid, RunError> {
    let grid = TubeGrid {
        dim,
        xi_max: g.xi_max.unwrap_or(d.xi_max),
        n_xi: g.n_xi.unwrap_or(d.n_xi),
        directions: g.directions.clone().unwrap_or(d.directions),
        r_min: g.r_min.unwrap_or(d.r_min),
        r_max: g.r_max.unwrap_or(d.r_max),
        n_r: g.n_r.unwrap_or(d.n_r),
        norm: g.norm.into(),
    };
    if !(grid.xi_max >= 0.0 && grid.xi_max.is_finite()) || grid.n_xi == 0 {
        return Err(RunError::invalid(format!("{field}.xi_max"), "need xi_max >= 0 and n_xi >= 1"));
    }
    if grid.directions.is_empty() || grid.directions.iter().any(|v| v.len() != dim || v.iter().any(|x| !x.is_finite())) {
        return Err(RunError::invalid(format!("{field}.directions"), format!("need finite directions with {dim} components")));
    }
    if !(grid.r_min > 0.0 && grid.r_max >= grid.r_min && grid.r_max.is_finite()) {
        return Err(RunError::invalid(format!("{field}.r_min"), "need 0 < r_min <= r_max"));
    }
    Ok(grid)
}

fn pws(ctx: &Ctx) -> Result<ModeOutput, RunError> {
    let c = section(&ctx.cfg.pws, "pws")?;
    let u = DistributionJson::resolve(&c.distribution, "pws.distribution", ctx.base)?;
    if !u.is_compact() {
        return Err(RunError::invalid("pws.distribution", "needs bounded support"));
    }
    let mut checked = u.clone();
    if let Some(h) = &c.check_hull {
        let hull = RegionJson::resolve(h, "pws.check_hull", ctx.base)?;
        if hull.dim != u.dim {
            return Err(RunError::invalid("pws.check_hull", "dimension differs from the distribution"));
        }
        checked.hull = hull;
    }
    let defaults = GridDefaults { xi_max: 10.0, n_xi: 41, directions: unit_directions(u.dim), r_min: 0.5, r_max: 50.0, n_r: 12 };
    let grid = tube_grid(&c.grid, u.dim, defaults, "pws.grid")?;
    let r = pws_check_with(&checked, &grid, ctx.tol).ctx("pws")?;
    let checks = vec![Check::holds("C finite and stable under grid doubling", r.pass)];
    let mut files = Vec::new();
    let mut ray = Value::Null;
    if let Some(p) = &c.ray_probe {
        if p.eta.len() != u.dim || p.radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(RunError::invalid("pws.ray_probe", format!("eta needs {} components and radii must be finite and >= 0", u.dim)));
        }
        let ratios = p.radii.par_iter().map(|&r| pws_ray_ratio(&u, &checked.hull, &p.eta, r)).collect::<Result<Vec<_>, _>>().ctx("ray probe")?;
        let rows: Vec<Vec<f64>> = p.radii.iter().zip(&ratios).map(|(&r, &q)| vec![r, q]).collect();
        files.push(("ray_ratio.csv".into(), formats::series_csv(&["r", "ratio"], &rows)));
        ray = json!({"eta": nums(&p.eta), "radii": nums(&p.radii), "ratios": nums(&ratios)});
    }
    Ok(ModeOutput {
        checks,
        result: json!({
            "bound": report::bound_report(&r),
            "hull": report::region(&checked.hull),
            "declared_hull": report::region(&u.hull),
            "order": u.order,
            "ray_probe": ray,
        }),
        files,
        pairing: conventions::PAIRING_EUCLIDEAN,
    })
}

fn axis(dim: usize, i: usize, s: f64) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[i] = s;
    v
}

fn hormander(ctx: &Ctx) -> Result<ModeOutput, RunError> {
    let c = section(&ctx.cfg.hormander, "hormander")?;
    let u = DistributionJson::resolve(&c.distribution, "hormander.distribution", ctx.base)?;
    let gamma = hormander_cone_estimate(&u).ctx("hormander")?;
    let mut intervals = Vec::new();
    for i in 0..u.dim {
        let hi = support_function(&gamma, &axis(u.dim, i, 1.0)).ctx("support function")?;
        let lo = -support_function(&gamma, &axis(u.dim, i, -1.0)).ctx("support function")?;
        intervals.push([lo, hi]);
    }
    let mut checks = Vec::new();
    if let Some(expect) = &c.expect {
        if expect.len() != u.dim {
            return Err(RunError::invalid("hormander.expect", format!("need {} intervals", u.dim)));
        }
        for (i, (want, got)) in expect.iter().zip(&intervals).enumerate() {
            for (k, side) in ["lo", "hi"].iter().enumerate() {
                let (w, g) = (want[k].value(), got[k]);
                let err = if w.is_infinite() || g.is_infinite() {
                    if w == g {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    (w - g).abs()
                };
                checks.push(Check::at_most(format!("axis {i} {side} endpoint"), err, ctx.tol));
            }
        }
    }
    Ok(ModeOutput {
        checks,
        result: json!({
            "gamma": report::region(&gamma),
            "intervals": intervals.iter().map(|iv| nums(iv)).collect::<Vec<_>>(),
        }),
        files: Vec::new(),
        pairing: conventions::PAIRING_EUCLIDEAN,
    })
}

fn epstein(ctx: &Ctx) -> Result<ModeOutput, RunError> {
    let c = section(&ctx.cfg.epstein, "epstein")?;
    c.function.validate("epstein.function")?;
    let dim = c.function.dim();
    let cone = c.cone.build(dim, "epstein.cone")?;
    let diag = |v: f64| vec![v; dim];
    let defaults = GridDefaults {
        xi_max: 100.0,
        n_xi: if dim == 1 { 2001 } else { 101 },
        directions: linspace(0.5, 2.0, 7).into_iter().map(diag).collect(),
        r_min: 1.0,
        r_max: 1.0,
        n_r: 0,
    };
    let grid = tube_grid(&c.grid, dim, defaults, "epstein.grid")?;
    let f = |z: &[C64]| c.function.eval(z);
    let r = epstein_bound_check_with(&f, &cone, &grid, c.n_declared, ctx.tol).map_err(|e| RunError::invalid("epstein.grid.directions", e.to_string()))?;
    let mut checks = vec![Check::holds("C finite and stable under doubling the xi extent", r.pass)];
    if let Some(n) = c.n_max {
        checks.push(Check::at_most("N_est", r.n_est, n));
    }
    let mut files = Vec::new();
    let mut probe_json = Value::Null;
    if let Some(p) = &c.probe {
        let dir = p.direction.clone().unwrap_or_else(|| vec![1.0; dim]);
        if dir.len() != dim || p.tests.is_empty() || !(p.eta0 > 0.0) {
            return Err(RunError::invalid("epstein.probe", format!("need a direction with {dim} components, eta0 > 0 and at least one test function")));
        }
        let tests: Vec<TestFunction> = p.tests.iter().map(|&t| t.into()).collect();
        let probe = epstein_cauchy_probe(&f, &dir, p.eta0, p.steps, &tests).ctx("cauchy probe")?;
        checks.push(Check::holds("boundary-convergence increments finite and nonincreasing", probe.pass));
        let mut headers = vec!["step".to_string(), "eta".to_string()];
        headers.extend(p.tests.iter().map(|t| format!("{t:?}").to_lowercase()));
        let n_inc = probe.increments.iter().map(Vec::len).max().unwrap_or(0);
        let rows: Vec<Vec<f64>> = (0..n_inc)
            .map(|k| {
                let mut row = vec![k as f64, probe.heights.get(k + 1).copied().unwrap_or(f64::NAN)];
                row.extend(probe.increments.iter().map(|inc| inc.get(k).copied().unwrap_or(f64::NAN)));
                row
            })
            .collect();
        let h: Vec<&str> = headers.iter().map(String::as_str).collect();
        files.push(("cauchy_probe.csv".into(), formats::series_csv(&h, &rows)));
        probe_json = json!({
            "direction": nums(&dir),
            "heights": nums(&probe.heights),
            "increments": probe.increments.iter().map(|v| nums(v)).collect::<Vec<_>>(),
            "pass": probe.pass,
        });
    }
    Ok(ModeOutput {
        checks,
        result: json!({"bound": report::bound_report(&r), "probe": probe_json}),
        files,
        pairing: conventions::PAIRING_EUCLIDEAN,
    })
}

enum Transform<'a> {
    Dist(&'a SampledDistribution),
    Func(&'a TubeFunctionSpec),
}

impl Transform<'_> {
    fn eval(&self, z: &[C64]) -> C64 {
        match self {
            Transform::Dist(u) => fl_transform(u, z).unwrap_or(C64::new(f64::NAN, f64::NAN)),
            Transform::Func(f) => f.eval(z),
        }
    }
}

fn support_estimate(ctx: &Ctx) -> Result<ModeOutput, RunError> {
    let c = section(&ctx.cfg.support_estimate, "support-estimate")?;
    let dist = match &c.distribution {
        Some(d) => Some(DistributionJson::resolve(d, "support-estimate.distribution", ctx.base)?),
        None => None,
    };
    let (t, dim) = match (&dist, &c.function) {
        (Some(u), None) => (Transform::Dist(u), u.dim),
        (None, Some(f)) => {
            f.validate("support-estimate.function")?;
            (Transform::Func(f), f.dim())
        }
        _ => return Err(RunError::invalid("support-estimate", "give exactly one of `distribution` and `function`")),
    };
    let expected = match (&c.expect_hull, &dist) {
        (Some(h), _) => Some(RegionJson::resolve(h, "support-estimate.expect_hull", ctx.base)?),
        (None, Some(u)) => Some(u.hull.clone()),
        (None, None) => None,
    };
    let directions = c.directions.clone().unwrap_or_else(|| unit_directions(dim));
    if directions.is_empty() || directions.iter().any(|d| d.len() != dim) {
        return Err(RunError::invalid("support-estimate.directions", format!("need directions with {dim} components")));
    }
    let rc = &c.radii;
    if !(rc.lo > 0.0 && rc.hi > rc.lo && rc.n >= 4) {
        return Err(RunError::invalid("support-estimate.radii", "need 0 < lo < hi and n >= 4"));
    }
    let radii = geometric(rc.lo, rc.hi, rc.n);
    let f = |z: &[C64]| t.eval(z);
    let est = support_from_growth(&f, &directions, &radii).ctx("support-estimate")?;
    let mut checks = Vec::new();
    let mut want = Vec::new();
    if let Some(k) = &expected {
        if k.dim != dim {
            return Err(RunError::invalid("support-estimate.expect_hull", "dimension differs from the transform"));
        }
        for (i, (d, h)) in directions.iter().zip(&est.values).enumerate() {
            let w = support_function(k, d).ctx("support function")?;
            let err = (h - w).abs() / w.abs().max(1.0);
            checks.push(Check::at_most(format!("direction {i} support value"), err, ctx.tol));
            want.push(w);
        }
    }
    let mut rows = Vec::new();
    for (i, d) in directions.iter().enumerate() {
        for &r in &radii {
            let z: Vec<C64> = d.iter().map(|x| C64::new(0.0, r * x)).collect();
            rows.push(vec![i as f64, r, f(&z).norm().ln()]);
        }
    }
    Ok(ModeOutput {
        checks,
        result: json!({
            "directions": directions.iter().map(|d| nums(d)).collect::<Vec<_>>(),
            "estimated": nums(&est.values),
            "expected": if expected.is_some() { nums(&want) } else { Value::Null },
            "region": report::region(&est.region),
            "radii": nums(&radii),
        }),
        files: vec![("growth.csv".into(), formats::series_csv(&["direction", "r", "log_abs"], &rows))],
        pairing: conventions::PAIRING_EUCLIDEAN,
    })
}

fn cauchy(ctx: &Ctx) -> Result<ModeOutput, RunError> {
    let c = section(&ctx.cfg.cauchy, "cauchy")?;
    c.function.validate("cauchy.function")?;
    let n = c.function.dim();
    if !(n == 1 || n == 2) || c.lower.len() != n || c.upper.len() != n {
        return Err(RunError::invalid("cauchy", "the function, lower and upper need matching dimension 1 or 2"));
    }
    if c.lower.iter().zip(&c.upper).any(|(lo, hi)| !(lo < hi)) {
        return Err(RunError::invalid("cauchy.lower", "each lower line must lie below the upper line"));
    }
    let mut targets: Vec<Vec<C64>> = Vec::new();
    for (i, t) in c.targets.iter().enumerate() {
        if t.len() != n {
            return Err(RunError::invalid(format!("cauchy.targets[{i}]"), format!("need {n} coordinates")));
        }
        targets.push(t.iter().map(|z| C64::new(z[0], z[1])).collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    for _ in 0..c.random_targets {
        let z = (0..n)
            .map(|j| {
                let w = c.upper[j] - c.lower[j];
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(c.lower[j] + 0.25 * w..c.upper[j] - 0.25 * w))
            })
            .collect();
        targets.push(z);
    }
    if targets.is_empty() {
        return Err(RunError::invalid("cauchy.targets", "need at least one target (or random_targets > 0)"));
    }
    let f = |z: &[C64]| c.function.eval(z);
    let ladder: Vec<usize> = std::iter::successors(Some(8usize), |m| Some(m * 2)).take_while(|&m| m <= c.samples).collect();
    struct Row {
        exact: C64,
        value: Option<C64>,
        estimate: f64,
        errors: Vec<f64>,
    }
    let rows = targets
        .par_iter()
        .map(|t| -> Result<Row, RunError> {
            let exact = f(t);
            let (value, estimate) = match cauchy_tube_reconstruct(&f, &c.lower, &c.upper, t, c.samples) {
                Ok(e) => (Some(e.value), e.error_estimate),
                Err(Error::InsufficientSampling { estimate }) => (None, estimate),
                Err(e) => return Err(RunError::invalid("cauchy", e.to_string())),
            };
            let errors = if c.halving {
                ladder.iter().map(|&m| cauchy_quadrature(&f, &c.lower, &c.upper, t, m).map(|v| (v - exact).norm())).collect::<Result<Vec<_>, _>>().ctx("cauchy")?
            } else {
                Vec::new()
            };
            Ok(Row { exact, value, estimate, errors })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut checks = Vec::new();
    let mut csv_rows = Vec::new();
    let mut out = Vec::new();
    for (i, (t, r)) in targets.iter().zip(&rows).enumerate() {
        checks.push(Check::holds(format!("target {i} sampling sufficient"), r.value.is_some()));
        let err = r.value.map(|v| (v - r.exact).norm()).unwrap_or(f64::INFINITY);
        checks.push(Check::at_most(format!("target {i} reconstruction error"), err, ctx.tol));
        if c.halving {
            // once the error reaches roundoff level there is nothing left to halve
            let floor = 1e-12 * r.exact.norm().max(1.0);
            let worst = r.errors.windows(2).filter(|w| w[0] > floor).map(|w| w[1] / w[0]).fold(0.0f64, f64::max);
            checks.push(Check::at_most(format!("target {i} error ratio per doubling"), worst, 0.5));
        }
        for (&m, &e) in ladder.iter().zip(&r.errors) {
            csv_rows.push(vec![i as f64, m as f64, e]);
        }
        out.push(json!({
            "target": t.iter().map(|z| report::complex(*z)).collect::<Vec<_>>(),
            "exact": report::complex(r.exact),
            "value": r.value.map(report::complex),
            "error": num(err),
            "self_estimate": num(r.estimate),
            "ladder_errors": nums(&r.errors),
        }));
    }
    Ok(ModeOutput {
        checks,
        result: json!({"samples": c.samples, "ladder": ladder, "targets": out, "kernel_power": modloc_core::flap::CAUCHY_KERNEL_POWER}),
        files: vec![("cauchy_convergence.csv".into(), formats::series_csv(&["target", "samples", "error"], &csv_rows))],
        pairing: conventions::PAIRING_EUCLIDEAN,
    })
}
