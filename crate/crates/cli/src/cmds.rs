//! The seven experiment subcommands.

use std::io::Write;
use std::path::PathBuf;

use num_complex::Complex64;

use fatoulab::algebra::{homogeneous_part, parse_poly, BivarPoly};
use fatoulab::dynamics::{
    classify_grid_checked, classify_orbit, iterate, julia_probe_siegel_circle, CPoint, GridParams,
    PlanarMap, SliceSpec, VerdictKind,
};
use fatoulab::exec::ExecMode;
use fatoulab::monodromy::{continue_loop, report_line, CuspParams};
use fatoulab::parabolic::{
    char_directions, domination_stats, germ_at, local_normal_form, petal_convergence_test,
    petal_exit_test, CharDirections, NormalForm,
};
use fatoulab::siegel::{alpha_track, build_linearizer, calibrate_halfplane, reciprocal_recursion_check};
use fatoulab::util::coprime;
use fatoulab::GOLDEN_MEAN;

use crate::config::{
    parse_complex, parse_curve_param, parse_floats, FileConfig, Resolved,
};
use crate::{CliError, MapArgs};

pub struct Ctx {
    pub out: PathBuf,
    pub no_timestamp: bool,
    pub mode: ExecMode,
}

impl Ctx {
    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    /// Write a text report whose first line names the config hash.
    fn write_report(&self, name: &str, resolved: &Resolved, body: &str) -> Result<(), CliError> {
        let mut out = String::new();
        out.push_str(&format!("config_hash={}\n", resolved.hash()));
        out.push_str(body);
        std::fs::write(self.path(name), out)?;
        Ok(())
    }

    /// Write the run record (`<cmd>.meta`).
    fn write_meta(&self, resolved: &Resolved) -> Result<(), CliError> {
        let mut out = String::new();
        out.push_str(&resolved.record_lines());
        out.push_str(&resolved.result_lines());
        out.push_str(&format!("config_hash={}\n", resolved.hash()));
        if !self.no_timestamp {
            let secs = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            out.push_str(&format!("timestamp={secs}\n"));
        }
        std::fs::write(self.path(&format!("{}.meta", resolved.section)), out)?;
        Ok(())
    }
}

/// Resolve the map-family flags into a `PlanarMap`.
fn build_map(res: &mut Resolved, args: &MapArgs) -> Result<PlanarMap, CliError> {
    let family = res.value(args.family.clone(), "family", "skew-siegel".to_string())?;
    match family.as_str() {
        "skew-siegel" => {
            let theta = res.value(args.theta, "theta", GOLDEN_MEAN)?;
            Ok(PlanarMap::skew_siegel(theta))
        }
        "cusp" => {
            let p = res.value(args.p, "p", 2)?;
            let q = res.value(args.q, "q", 3)?;
            let k = res.value(args.k, "k", 2)?;
            Ok(PlanarMap::cusp(p, q, k)?)
        }
        "tangent-id" => {
            let g = res.value(args.g_poly.clone(), "g-poly", "z".to_string())?;
            let p_fun = res.value(args.p_poly.clone(), "p-poly", "1".to_string())?;
            let q_fun = res.value(args.q_poly.clone(), "q-poly", "0".to_string())?;
            let k = res.value(args.k, "k", 2)?;
            Ok(PlanarMap::tangent_identity(
                parse_poly(&g)?,
                parse_poly(&p_fun)?,
                parse_poly(&q_fun)?,
                k,
            )?)
        }
        "generic" => {
            let pz = args
                .pz
                .clone()
                .ok_or_else(|| CliError::Config("generic family needs --pz".into()))?;
            let pw = args
                .pw
                .clone()
                .ok_or_else(|| CliError::Config("generic family needs --pw".into()))?;
            res.note_str("pz", &pz);
            res.note_str("pw", &pw);
            Ok(PlanarMap::generic(parse_poly(&pz)?, parse_poly(&pw)?))
        }
        other => Err(CliError::Config(format!("unknown family {other:?}"))),
    }
}

fn parse_point(text: &str) -> Result<CPoint, CliError> {
    let v = parse_floats(text, 4)?;
    Ok((Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3])))
}

fn curve_base(map: &PlanarMap, t: Complex64) -> Result<CPoint, CliError> {
    match map.family {
        fatoulab::dynamics::MapFamily::Cusp { p, q, .. } => Ok((t.powu(q), t.powu(p))),
        _ => Err(CliError::Config(
            "curve parameter t=... requires the cusp family".into(),
        )),
    }
}

fn default_target(map: &PlanarMap) -> Option<BivarPoly> {
    match &map.family {
        fatoulab::dynamics::MapFamily::SkewSiegel { .. } => Some(BivarPoly::var_w()),
        _ => map.tangent_data().map(|(g, ..)| g),
    }
}

/// Auto budget for petal convergence: a fixed multiple of the parabolic
/// clock at the inner seed radius, clamped to a tractable range.
fn auto_budget(k: u32, eps: f64) -> usize {
    let km1 = (k - 1) as f64;
    let clock = 1.0 / (km1 * (0.4 * eps).powf(km1));
    (40.0 * clock) as usize
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_orbit(
    ctx: &Ctx,
    file_cfg: FileConfig,
    map_args: MapArgs,
    seed: Option<String>,
    seed_on_curve: Option<String>,
    n: Option<usize>,
    target: Option<String>,
    tol: Option<f64>,
) -> Result<(), CliError> {
    let mut res = Resolved::new("orbit", file_cfg);
    let map = build_map(&mut res, &map_args)?;
    let n = res.value(n, "n", 1000)?;
    let tol = res.value(tol, "tol", 1e-3)?;
    let seed_text = res.optional(seed, "seed");
    let curve_text = res.optional(seed_on_curve, "seed-on-curve");
    let seed_pt: CPoint = match (seed_text, curve_text) {
        (Some(s), None) => {
            let parts: Vec<&str> = s.split(',').collect();
            match parts.len() {
                2 => (parse_complex(&s)?, Complex64::new(0.0, 0.0)),
                4 => parse_point(&s)?,
                _ => {
                    return Err(CliError::Config(format!(
                        "--seed wants 2 or 4 comma-separated floats, got {s:?}"
                    )))
                }
            }
        }
        (None, Some(t)) => curve_base(&map, parse_curve_param(&t)?)?,
        (None, None) => (Complex64::new(0.05, 0.0), Complex64::new(0.0, 0.0)),
        (Some(_), Some(_)) => {
            return Err(CliError::Config(
                "--seed and --seed-on-curve are mutually exclusive".into(),
            ))
        }
    };
    res.note_str(
        "resolved-seed",
        &format!(
            "{},{},{},{}",
            seed_pt.0.re, seed_pt.0.im, seed_pt.1.re, seed_pt.1.im
        ),
    );
    let target_poly = match res.optional(target, "target") {
        Some(text) => Some(parse_poly(&text)?),
        None => default_target(&map),
    };

    let orbit = iterate(&map, seed_pt, n)?;
    let mut csv = Vec::new();
    writeln!(csv, "# config_hash={}", res.hash())?;
    orbit.write_csv(&mut csv)?;
    std::fs::write(ctx.path("orbit.csv"), csv)?;

    let mut summary = String::new();
    summary.push_str(&format!("points={}\n", orbit.len()));
    summary.push_str(&format!("escaped={}\n", orbit.escaped));
    if let Some(t) = &target_poly {
        let verdict = classify_orbit(&map, seed_pt, t, n.max(1), tol)?;
        summary.push_str(&format!(
            "verdict={}\n",
            match verdict.kind {
                VerdictKind::ConvergesToTarget => "converges_to_target",
                VerdictKind::Escapes => "escapes",
                VerdictKind::Undecided => "undecided",
            }
        ));
        summary.push_str(&format!("steps_used={}\n", verdict.steps_used));
        summary.push_str(&format!("final_distance={}\n", verdict.final_distance));
        if let Some(dir) = verdict.tangent_direction {
            summary.push_str(&format!(
                "tangent_direction={},{},{},{}\n",
                dir.v1.re, dir.v1.im, dir.v2.re, dir.v2.im
            ));
        }
    }
    ctx.write_report("orbit_summary.txt", &res, &summary)?;
    ctx.write_meta(&res)
}

pub fn cmd_chardirs(
    ctx: &Ctx,
    file_cfg: FileConfig,
    map_args: MapArgs,
    t: Option<String>,
    base: Option<String>,
    fk1: Option<String>,
    fk2: Option<String>,
) -> Result<(), CliError> {
    let mut res = Resolved::new("chardirs", file_cfg);
    let fk1 = res.optional(fk1, "fk1");
    let fk2 = res.optional(fk2, "fk2");
    let (forms, k) = match (fk1, fk2) {
        (Some(a), Some(b)) => {
            let pa = parse_poly(&a)?;
            let pb = parse_poly(&b)?;
            let deg = pa
                .degree()
                .or(pb.degree())
                .ok_or_else(|| CliError::Config("zero leading forms".into()))?;
            let fa = homogeneous_part(&pa, deg);
            let fb = homogeneous_part(&pb, deg);
            if fa.to_poly() != pa || fb.to_poly() != pb {
                return Err(CliError::Config(
                    "--fk1/--fk2 must be homogeneous of equal degree".into(),
                ));
            }
            ((fa, fb), deg)
        }
        (None, None) => {
            let map = build_map(&mut res, &map_args)?;
            let base_pt = match (res.optional(t, "t"), res.optional(base, "base")) {
                (Some(tv), None) => curve_base(&map, parse_curve_param(&tv)?)?,
                (None, Some(b)) => parse_point(&b)?,
                _ => {
                    return Err(CliError::Config(
                        "chardirs needs exactly one of --t or --base (or --fk1/--fk2)".into(),
                    ))
                }
            };
            let germ = germ_at(&map, base_pt)?;
            ((germ.fk.0, germ.fk.1), germ.k)
        }
        _ => {
            return Err(CliError::Config(
                "--fk1 and --fk2 must be given together".into(),
            ))
        }
    };
    let mut body = String::new();
    body.push_str(&format!("order={k}\n"));
    match char_directions(&forms)? {
        CharDirections::Dicritical => body.push_str("dicritical=true\n"),
        CharDirections::Directions(dirs) => {
            body.push_str("dicritical=false\n");
            body.push_str(&format!("count={}\n", dirs.len()));
            for (i, d) in dirs.iter().enumerate() {
                body.push_str(&format!(
                    "dir{i}: v={},{},{},{} lambda={},{} degenerate={} multiplicity={}\n",
                    d.v.v1.re,
                    d.v.v1.im,
                    d.v.v2.re,
                    d.v.v2.im,
                    d.lambda_char.re,
                    d.lambda_char.im,
                    d.degenerate,
                    d.multiplicity
                ));
            }
        }
    }
    ctx.write_report("chardirs.txt", &res, &body)?;
    ctx.write_meta(&res)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_petals(
    ctx: &Ctx,
    file_cfg: FileConfig,
    map_args: MapArgs,
    t: Option<String>,
    base: Option<String>,
    seeds: Option<usize>,
    budget: Option<usize>,
    exit_budget: Option<usize>,
    m: Option<u32>,
) -> Result<(), CliError> {
    let mut res = Resolved::new("petals", file_cfg);
    let map = build_map(&mut res, &map_args)?;
    let base_pt = match (res.optional(t, "t"), res.optional(base, "base")) {
        (Some(tv), None) => curve_base(&map, parse_curve_param(&tv)?)?,
        (None, Some(b)) => parse_point(&b)?,
        (None, None) => curve_base(&map, Complex64::new(0.6, 0.0))?,
        _ => {
            return Err(CliError::Config(
                "--t and --base are mutually exclusive".into(),
            ))
        }
    };
    let n_seeds = res.value(seeds, "seeds", 64usize)?;
    let budget_flag = res.value(budget, "budget", 0usize)?;
    let exit_budget = res.value(exit_budget, "exit-budget", 100_000usize)?;
    let only_m = res.value(m, "m", 0u32)?;

    let nf: NormalForm = local_normal_form(&map, base_pt)?;
    let mut body = String::new();
    for spec in &nf.petals {
        if only_m != 0 && spec.m != only_m {
            continue;
        }
        let budget = if budget_flag == 0 {
            auto_budget(spec.k, spec.epsilon).clamp(20_000, 20_000_000)
        } else {
            budget_flag
        };
        body.push_str(&format!(
            "base={},{},{},{}\n",
            spec.base.0.re, spec.base.0.im, spec.base.1.re, spec.base.1.im
        ));
        body.push_str(&format!("k={}\n", spec.k));
        body.push_str(&format!("m={}\n", spec.m));
        body.push_str(&format!("epsilon={}\n", spec.epsilon));
        body.push_str(&format!(
            "theta0={}\n",
            spec.theta(Complex64::new(0.0, 0.0))
        ));
        body.push_str(&format!("budget={budget}\n"));
        let ratio = domination_stats(&map, &nf.chart, spec);
        body.push_str(&format!("domination_ratio={ratio}\n"));
        body.push_str(&format!(
            "domination_ok={}\n",
            ratio > fatoulab::parabolic::DOMINATION_FACTOR
        ));
        match petal_convergence_test(&map, &nf.chart, spec, n_seeds, budget, ctx.mode) {
            Ok(report) => {
                body.push_str(&format!(
                    "converged={}/{}\n",
                    report.converged_count(),
                    report.seeds.len()
                ));
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                let mut amp: f64 = 0.0;
                for s in &report.seeds {
                    lo = lo.min(s.rate_exponent);
                    hi = hi.max(s.rate_exponent);
                    amp = amp.max(s.amplitude_rel_err);
                }
                body.push_str(&format!("rate_exponent_min={lo}\n"));
                body.push_str(&format!("rate_exponent_max={hi}\n"));
                body.push_str(&format!("rate_target={}\n", report.rate_target()));
                body.push_str(&format!("amplitude_rel_err_max={amp}\n"));
            }
            Err(e) => body.push_str(&format!("convergence_error={e}\n")),
        }
        match petal_exit_test(&map, &nf.chart, spec, n_seeds, exit_budget, ctx.mode) {
            Ok(exit) => {
                body.push_str(&format!("exited={}/{}\n", exit.exited, exit.total));
                body.push_str(&format!("exited_x_face={}\n", exit.exited_x_face));
                body.push_str(&format!("exited_u_face={}\n", exit.exited_u_face));
                body.push_str(&format!("max_exit_step={}\n", exit.max_exit_step));
            }
            Err(e) => body.push_str(&format!("exit_error={e}\n")),
        }
        body.push('\n');
    }
    ctx.write_report("petals.txt", &res, &body)?;
    ctx.write_meta(&res)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_monodromy(
    ctx: &Ctx,
    file_cfg: FileConfig,
    p_max: Option<u32>,
    q_max: Option<u32>,
    k_min: Option<u32>,
    k_max: Option<u32>,
    t0: Option<String>,
    steps: Option<usize>,
    verify_refine: Option<bool>,
) -> Result<(), CliError> {
    let mut res = Resolved::new("monodromy", file_cfg);
    let p_max = res.value(p_max, "p-max", 7u32)?;
    let q_max = res.value(q_max, "q-max", 7u32)?;
    let k_min = res.value(k_min, "k-min", 2u32)?;
    let k_max = res.value(k_max, "k-max", 6u32)?;
    let t0 = parse_complex(&res.value(t0, "t0", "1,0".to_string())?)?;
    let steps_flag = res.value(steps, "steps", 0usize)?;
    let verify = res.value(verify_refine, "verify-refine", true)?;

    // Enumerate the sweep first, then run the loops in parallel; results
    // merge back in enumeration order.
    enum Entry {
        Skip(u32, u32),
        Run(CuspParams, usize),
    }
    let mut entries = Vec::new();
    for p in 1..=p_max {
        for q in (p + 1)..=q_max {
            if !coprime(p, q) {
                entries.push(Entry::Skip(p, q));
                continue;
            }
            for k in k_min..=k_max {
                let params = CuspParams::new(p, q, k)
                    .map_err(|e| CliError::Config(e.to_string()))?;
                let steps = if steps_flag == 0 {
                    (8 * k * p * q) as usize
                } else {
                    steps_flag
                };
                entries.push(Entry::Run(params, steps));
            }
        }
    }
    let lines = fatoulab::exec::map_indices(ctx.mode, entries.len(), |i| match &entries[i] {
        Entry::Skip(p, q) => Ok(format!("# skip p={p} q={q}: not coprime\n")),
        Entry::Run(params, steps) => {
            let report = continue_loop(params, t0, *steps)?;
            if verify {
                let fine = continue_loop(params, t0, steps * 2)?;
                if fine.permutation != report.permutation {
                    return Err(fatoulab::Error::Precondition(format!(
                        "loop refinement changed the permutation at (p,q,k)=({},{},{})",
                        params.p, params.q, params.k
                    )));
                }
            }
            Ok(format!("{}\n", report_line(&report)))
        }
    });
    let mut body = String::new();
    body.push_str("p,q,k,shift_predicted,shift_observed,cycles,match\n");
    for line in lines {
        body.push_str(&line.map_err(CliError::from)?);
    }
    ctx.write_report("monodromy.csv", &res, &body)?;
    ctx.write_meta(&res)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_basin(
    ctx: &Ctx,
    file_cfg: FileConfig,
    map_args: MapArgs,
    slice_base: Option<String>,
    slice_e1: Option<String>,
    slice_e2: Option<String>,
    extent: Option<String>,
    resolution: Option<String>,
    budget: Option<usize>,
    tol: Option<f64>,
    petal_at: Option<String>,
) -> Result<(), CliError> {
    let mut res = Resolved::new("basin", file_cfg);
    let map = build_map(&mut res, &map_args)?;
    let base = parse_point(&res.value(slice_base, "slice-base", "0.05,0,0,0".to_string())?)?;
    let e1 = parse_point(&res.value(slice_e1, "slice-e1", "0,0,1,0".to_string())?)?;
    let e2 = parse_point(&res.value(slice_e2, "slice-e2", "0,0,0,1".to_string())?)?;
    let ext = parse_floats(
        &res.value(extent, "extent", "-0.0003,0.0001,-0.0002,0.0002".to_string())?,
        4,
    )?;
    let rs = parse_floats(&res.value(resolution, "res", "64,64".to_string())?, 2)?;
    let budget = res.value(budget, "budget", 1000usize)?;
    let tol = res.value(tol, "tol", 1e-3)?;
    let petal_text = res.optional(petal_at, "petal-at");

    let slice = SliceSpec {
        base,
        e1,
        e2,
        s_range: (ext[0], ext[1]),
        t_range: (ext[2], ext[3]),
    };
    let params = GridParams {
        nx: rs[0] as usize,
        ny: rs[1] as usize,
        budget,
        tol,
    };
    let target = default_target(&map)
        .ok_or_else(|| CliError::Config("basin needs a family with a target".into()))?;
    let petal_ctx = match petal_text {
        Some(t) => {
            let base_pt = curve_base(&map, parse_curve_param(&t)?)?;
            Some(local_normal_form(&map, base_pt)?)
        }
        None => None,
    };
    let grid = classify_grid_checked(
        &map,
        &slice,
        &params,
        &target,
        petal_ctx.as_ref(),
        ctx.mode,
        0.01,
    )?;

    let mut ppm = Vec::new();
    grid.write_ppm(&mut ppm, &res.hash())?;
    std::fs::write(ctx.path("basin.ppm"), ppm)?;

    // Sidecar metadata doubles as the run record. Window and resolution are
    // config; cell statistics are results and stay out of the hash.
    res.note_result(
        "window",
        &format!("{},{},{},{}", ext[0], ext[1], ext[2], ext[3]),
    );
    res.note_result("resolution", &format!("{},{}", params.nx, params.ny));
    res.note_result("failed_fraction", &grid.failed_fraction().to_string());
    let (mut conv, mut esc, mut und) = (0usize, 0usize, 0usize);
    for c in &grid.cells {
        match c.kind {
            fatoulab::dynamics::CellKind::Converges => conv += 1,
            fatoulab::dynamics::CellKind::Escapes => esc += 1,
            _ => und += 1,
        }
    }
    res.note_result("cells_converges", &conv.to_string());
    res.note_result("cells_escapes", &esc.to_string());
    res.note_result("cells_undecided_or_failed", &und.to_string());
    ctx.write_meta(&res)
}

pub fn cmd_siegel(
    ctx: &Ctx,
    file_cfg: FileConfig,
    theta: Option<f64>,
    order: Option<u32>,
    z0: Option<String>,
    w0: Option<String>,
    n_max: Option<usize>,
) -> Result<(), CliError> {
    let mut res = Resolved::new("siegel", file_cfg);
    let theta = res.value(theta, "theta", GOLDEN_MEAN)?;
    let order = res.value(order, "order", 50u32)?;
    let z0 = parse_complex(&res.value(z0, "z0", "0.05,0".to_string())?)?;
    let n_max = res.value(n_max, "n-max", 10_000usize)?;
    let w0_text = res.optional(w0, "w0");

    let series = build_linearizer(theta, order)?;
    let mut lin_csv = Vec::new();
    writeln!(lin_csv, "# config_hash={}", res.hash())?;
    series.write_coeffs(&mut lin_csv)?;
    std::fs::write(ctx.path("linearizer.csv"), lin_csv)?;

    let mut body = String::new();
    body.push_str(&format!("theta={theta}\n"));
    body.push_str(&format!("order={order}\n"));
    body.push_str(&format!("radius_estimate={}\n", series.radius_estimate));
    body.push_str(&format!(
        "residual_at_half_radius={}\n",
        series.residual_at_half_radius
    ));

    if z0.norm() > series.radius_estimate {
        return Err(CliError::Config(format!(
            "|z0| = {} exceeds the certified radius {}",
            z0.norm(),
            series.radius_estimate
        )));
    }
    let track = alpha_track(theta, z0, n_max)?;
    body.push_str(&format!("z0={},{}\n", z0.re, z0.im));
    body.push_str(&format!("n_max={n_max}\n"));
    body.push_str(&format!("sup_dev={}\n", track.sup_dev));
    body.push_str(&format!(
        "sup_dev_over_z0_sq={}\n",
        track.sup_dev / z0.norm_sqr().max(1e-300)
    ));

    let map = PlanarMap::skew_siegel(theta);
    let halfplane = calibrate_halfplane(&map, z0)?;
    body.push_str(&format!("halfplane_k={}\n", halfplane.k_const));
    let w0 = match w0_text {
        Some(text) => parse_complex(&text)?,
        None => 1.0 / (halfplane.boundary_point(0.4) * 1.5),
    };
    body.push_str(&format!("w0={},{}\n", w0.re, w0.im));
    let recip = reciprocal_recursion_check(&map, z0, w0, n_max)?;
    body.push_str(&format!("fitted_c={}\n", recip.fitted_c));
    body.push_str(&format!("max_dn_un={}\n", recip.max_dn_un));
    body.push_str(&format!("median_dn_un={}\n", recip.median_dn_un));
    body.push_str(&format!(
        "consistency_rel_err={}\n",
        recip.consistency_rel_err
    ));

    // Qualitative instability probe near the invariant circle; the probe
    // point must sit inside the certified rotation radius of the w-factor
    // map w -> lambda^{-1} w + w^3 (rotation number 1 - theta).
    let w_series = build_linearizer(1.0 - theta, order)?;
    body.push_str(&format!(
        "w_factor_radius_estimate={}\n",
        w_series.radius_estimate
    ));
    let probe_w0 = Complex64::new((0.5 * w_series.radius_estimate).min(0.1), 0.0);
    body.push_str(&format!("probe_w0={},{}\n", probe_w0.re, probe_w0.im));
    let probe = julia_probe_siegel_circle(
        &map,
        probe_w0,
        Complex64::new(1e-6, 0.0),
        n_max.min(1_000_000),
    )?;
    body.push_str(&format!(
        "probe_separation_max={}\n",
        probe.separation_max
    ));
    body.push_str(&format!("probe_sensitive={}\n", probe.sensitive));

    ctx.write_report("siegel_report.txt", &res, &body)?;
    ctx.write_meta(&res)
}

pub fn cmd_extend_check(
    ctx: &Ctx,
    file_cfg: FileConfig,
    map_args: MapArgs,
) -> Result<(), CliError> {
    let mut res = Resolved::new("extend-check", file_cfg);
    let map = build_map(&mut res, &map_args)?;
    let extends = map.extends_to_projective_plane();
    let body = format!("extends={extends}\n");
    ctx.write_report("extend.txt", &res, &body)?;
    ctx.write_meta(&res)
}
