//! The end-to-end pipeline: direction set -> vanishing function ->
//! perturbation -> table -> invariant curves -> singular points -> spectrum,
//! with every cross-check recorded and a single pass/fail verdict.

use std::f64::consts::PI;
use std::path::Path;

use anyhow::{Context, Result};
use billiard_core::billiard::{apply_map, find_diameters, PhasePoint};
use billiard_core::curves::{
    invariance_residual, singular_points, CurveBranch, CurveSample, SingularClass,
};
use billiard_core::spectrum::{classify, StabilityClass};
use billiard_core::table::{choose_string_length, StringTable};
use billiard_core::trig::unit;
use billiard_core::twist::{
    corner_slopes, curve_from_energy, CriticalKind, PeriodicPotential, PotentialNode, TwistSystem,
};
use billiard_core::vanishing::{
    build_g, recover_perturbation_with, RecoverOptions,
};

use crate::config::{RunConfig, StringLength, TwistConfig};
use crate::report::{
    DiameterReport, ResidualReport, RunSummary, SingularReport, SpectrumReport, TableHeader,
    TwistCornerReport, TwistSummary, VerificationReport,
};
use crate::{report, svg};

pub struct PipelineOutput {
    pub summary: RunSummary,
    pub passed: bool,
}

fn class_name(c: StabilityClass) -> &'static str {
    match c {
        StabilityClass::Hyperbolic => "hyperbolic",
        StabilityClass::Parabolic => "parabolic",
        StabilityClass::Elliptic => "elliptic",
    }
}

fn singular_class_name(c: SingularClass) -> &'static str {
    match c {
        SingularClass::Transversal => "transversal",
        SingularClass::Tangential => "tangential",
        SingularClass::ContinuumBoundary => "continuum-boundary",
    }
}

/// Build the table described by the configuration.
pub fn build_table(config: &RunConfig) -> Result<(StringTable, TableHeader)> {
    let spec = config.direction_spec()?;
    let g = build_g(&spec, config.variant_enum()).context("building the vanishing function")?;
    let opts = RecoverOptions {
        grid: config.grid.max(billiard_core::vanishing::FIT_GRID),
        degree: config.fit_degree,
        reconstruction_tol: config.tolerances.reconstruction,
        keep_bump_geometry: config.backend == "bump",
    };
    let pd = recover_perturbation_with(&g, opts).context("recovering the perturbation")?;
    let ell = match config.string_length {
        StringLength::Fixed(v) => v,
        StringLength::Auto(_) => choose_string_length(&pd, config.tau),
    };
    let coefficients = pd
        .f
        .half_spectrum()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 0.0)
        .map(|(k, a)| (k, a.re, a.im))
        .collect();
    let header = TableHeader {
        tau: config.tau,
        string_length: ell,
        translation: [pd.c.x, pd.c.y],
        coefficients,
        backend: config.backend.clone(),
        variant: config.variant.clone(),
        fit_residual: pd.fit_residual,
        projection_defect: pd.projection_defect,
        reconstruction_defect: pd.reconstruction_defect,
        route_discrepancy: pd.route_discrepancy,
    };
    let table = StringTable::new(pd, config.tau, ell).context("string construction")?;
    Ok((table, header))
}

/// Interior consistency checks of the constructed table.
fn verify_table(table: &StringTable, config: &RunConfig) -> VerificationReport {
    let n = 2048;
    let mut s_agreement = 0.0f64;
    let mut h_anti = 0.0f64;
    let mut hdot_defect = 0.0f64;
    let delta = 1e-5;
    for j in 0..n {
        let t = 2.0 * PI * j as f64 / n as f64;
        s_agreement = s_agreement.max((table.s_of_t(t) - table.s_direct(t)).abs());
        let f = table.fields(t);
        let f_pi = table.fields(t + PI);
        h_anti = h_anti.max((f.h + f_pi.h).abs());
        // hdot + g = 0 with the finite-difference budget of the oracle itself
        let hd_fd = (table.fields(t + delta).h - table.fields(t - delta).h) / (2.0 * delta);
        let budget = f.hddd.abs() * delta * delta / 6.0 + 1e-11;
        let defect = ((hd_fd + f.g).abs() - budget).max(0.0);
        hdot_defect = hdot_defect.max(defect);
    }
    let tangent_agreement = table.derivative_agreement(512);
    // the perturbed inner body keeps constant width by construction
    let mut width_lo = f64::INFINITY;
    let mut width_hi = f64::NEG_INFINITY;
    for j in 0..256 {
        let t = PI * j as f64 / 256.0 + PI / 2.0;
        let chord = table.inner_point(t) - table.inner_point(t + PI);
        let w = chord.dot(unit(t).perp() * -1.0);
        width_lo = width_lo.min(w);
        width_hi = width_hi.max(w);
    }
    let width_spread = width_hi - width_lo;

    let mut failures = Vec::new();
    let tol = &config.tolerances;
    if s_agreement > tol.s_route_agreement {
        failures.push(format!(
            "s-route agreement {s_agreement:e} over budget {:e}",
            tol.s_route_agreement
        ));
    }
    if hdot_defect > tol.hdot_plus_g {
        failures.push(format!(
            "hdot + g defect {hdot_defect:e} over budget {:e}",
            tol.hdot_plus_g
        ));
    }
    if h_anti > 1e-10 {
        failures.push(format!("h antisymmetry defect {h_anti:e} over 1e-10"));
    }
    if tangent_agreement > tol.tangent_agreement {
        failures.push(format!(
            "analytic/fd tangent disagreement {tangent_agreement:e} over {:e}",
            tol.tangent_agreement
        ));
    }
    if width_spread > 1e-10 {
        failures.push(format!("inner body width spread {width_spread:e} over 1e-10"));
    }
    VerificationReport {
        s_route_agreement: s_agreement,
        hdot_plus_g_defect: hdot_defect,
        h_antisymmetry: h_anti,
        tangent_agreement,
        inner_width_spread: width_spread,
        checks_passed: failures.is_empty(),
        failures,
    }
}

/// Run everything and write the report bundle.
pub fn run_pipeline(config: &RunConfig, out: &Path, emit_svg: bool) -> Result<PipelineOutput> {
    std::fs::create_dir_all(out)
        .with_context(|| format!("creating output directory {}", out.display()))?;
    let (table, header) = build_table(config)?;
    let mut verification = verify_table(&table, config);

    // ---- diameters ----
    let diam = find_diameters(&table);
    let mut diameters = Vec::new();
    let mut spectrum = Vec::new();
    for d in &diam.diameters {
        match classify(&table, d.t0) {
            Ok(s) => {
                diameters.push(DiameterReport {
                    t0: d.t0,
                    d: d.chord,
                    h: d.h,
                    hddot: d.hdd,
                    class: class_name(s.class).into(),
                });
                spectrum.push(SpectrumReport {
                    t0: s.t0,
                    k1: s.k1,
                    k2: s.k2,
                    d: s.chord,
                    i1: s.i1,
                    i2: s.i2,
                    trace: s.trace_fd,
                    trace_formula: s.trace_formula,
                    eigenvalues: [s.eigenvalues.0, s.eigenvalues.1],
                    eigenvalues_real: s.eigenvalues_real,
                    class: class_name(s.class).into(),
                });
            }
            Err(e) => {
                verification.failures.push(format!("classification at t0 = {}: {e}", d.t0));
                verification.checks_passed = false;
            }
        }
    }

    // ---- singular points ----
    let singular = match singular_points(&table) {
        Ok(s) => s,
        Err(e) => {
            verification.failures.push(format!("singular-point classification: {e}"));
            verification.checks_passed = false;
            billiard_core::curves::SingularSet::default()
        }
    };
    let singular_reports: Vec<SingularReport> = singular
        .points
        .iter()
        .map(|p| SingularReport {
            t0: p.t0,
            left_slope: p.left_slope,
            right_slope: p.right_slope,
            sddot: p.sddot,
            class: singular_class_name(p.class).into(),
        })
        .collect();

    // ---- invariance residuals ----
    let residual = |branch| invariance_residual(&table, branch, config.grid);
    let residuals = ResidualReport {
        lambda_plus_t2: residual(CurveBranch::Plus)?,
        lambda_minus_t2: residual(CurveBranch::Minus)?,
        spliced_max_t: residual(CurveBranch::SplicedMax)?,
        spliced_min_t: residual(CurveBranch::SplicedMin)?,
        budget: config.tolerances.invariance_residual,
    };
    for (name, value) in [
        ("lambda_plus under T^2", residuals.lambda_plus_t2),
        ("lambda_minus under T^2", residuals.lambda_minus_t2),
        ("spliced max under T", residuals.spliced_max_t),
        ("spliced min under T", residuals.spliced_min_t),
    ] {
        if value > residuals.budget {
            verification
                .failures
                .push(format!("invariance residual {name} = {value:e} over {:e}", residuals.budget));
            verification.checks_passed = false;
        }
    }

    let summary = RunSummary {
        table: header,
        diameters,
        plateaus: diam.plateaus.clone(),
        full_circle_continuum: diam.full_circle,
        singular_points: singular_reports,
        min_singular_gap: singular.min_gap,
        spectrum,
        residuals,
        verification,
    };

    // ---- exports ----
    let n = config.grid;
    let mut table_rows = Vec::with_capacity(n);
    for j in 0..n {
        let t = 2.0 * PI * j as f64 / n as f64;
        let p = table.boundary(t);
        table_rows.push(vec![
            t,
            p.x,
            p.y,
            table.s_of_t(t),
            table.h_of_t(t),
            table.g_of_t(t),
            table.curvature_analytic(t),
        ]);
    }
    report::write_csv(
        &out.join("table.csv"),
        &["t", "gamma_x", "gamma_y", "s", "h", "g", "curvature"],
        &table_rows,
    )?;
    let sample = CurveSample::sample(&table, n)?;
    let curve_rows: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            vec![
                sample.grid[j],
                sample.lambda_plus[j],
                sample.lambda_minus[j],
                sample.spliced_max[j],
            ]
        })
        .collect();
    report::write_csv(
        &out.join("curves.csv"),
        &["t", "lambda_plus", "lambda_minus", "spliced"],
        &curve_rows,
    )?;
    let spectrum_rows: Vec<Vec<f64>> = summary
        .spectrum
        .iter()
        .map(|s| vec![s.t0, s.eigenvalues[0].abs().max(s.eigenvalues[1].abs())])
        .collect();
    report::write_csv(&out.join("spectrum.csv"), &["t0", "max_eigenvalue"], &spectrum_rows)?;

    report::write_json(&out.join("table.json"), &summary.table)?;
    report::write_json(&out.join("diameters.json"), &summary.diameters)?;
    report::write_json(&out.join("singular_points.json"), &summary.singular_points)?;
    report::write_json(&out.join("spectrum.json"), &summary.spectrum)?;
    report::write_json(&out.join("summary.json"), &summary)?;

    if emit_svg {
        svg::table_figure(&table, &out.join("table.svg"))?;
        svg::phase_figure(&sample, &singular.points, &out.join("phase.svg"))?;
    }

    let passed = summary.verification.checks_passed;
    Ok(PipelineOutput { summary, passed })
}

/// Dump a single orbit as CSV rows (iteration, t, theta, x, y).
pub fn dump_orbit(
    table: &StringTable,
    start: PhasePoint,
    steps: usize,
    path: &Path,
) -> Result<()> {
    let mut rows = Vec::with_capacity(steps + 1);
    let mut p = start;
    for i in 0..=steps {
        let pos = table.boundary(p.t);
        rows.push(vec![i as f64, p.t, p.theta, pos.x, pos.y]);
        if i < steps {
            p = apply_map(table, p, 1)
                .map_err(|e| anyhow::anyhow!("orbit step {i} failed: {e}"))?;
        }
    }
    report::write_csv(path, &["iteration", "t", "theta", "x", "y"], &rows)
}

/// Sweep the perturbation amplitude and compare singular-point locations;
/// the zero set of g does not move with tau, so the locations must agree.
pub fn run_sweep(config: &RunConfig, out: &Path, emit_svg: bool) -> Result<bool> {
    std::fs::create_dir_all(out)?;
    let mut all_passed = true;
    let mut location_sets: Vec<(f64, Vec<f64>)> = Vec::new();
    for (i, factor) in config.sweep_factors.iter().enumerate() {
        let mut sub = config.clone();
        sub.tau = config.tau * factor;
        let dir = out.join(format!("sweep_{i}"));
        let result = run_pipeline(&sub, &dir, emit_svg)?;
        all_passed &= result.passed;
        let locations: Vec<f64> = result
            .summary
            .singular_points
            .iter()
            .filter(|p| p.class == "transversal")
            .map(|p| p.t0)
            .collect();
        location_sets.push((sub.tau, locations));
    }
    // compare all non-degenerate runs pairwise
    let nonzero: Vec<&(f64, Vec<f64>)> =
        location_sets.iter().filter(|(tau, _)| *tau != 0.0).collect();
    let mut max_shift = 0.0f64;
    let mut consistent = true;
    for pair in nonzero.windows(2) {
        let (a, b) = (&pair[0].1, &pair[1].1);
        if a.len() != b.len() {
            consistent = false;
            continue;
        }
        for (x, y) in a.iter().zip(b) {
            max_shift = max_shift.max((x - y).abs());
        }
    }
    let passed = all_passed && consistent && max_shift < 1e-6;
    #[derive(serde::Serialize)]
    struct SweepReport {
        taus: Vec<f64>,
        locations: Vec<Vec<f64>>,
        max_location_shift: f64,
        consistent_counts: bool,
        passed: bool,
    }
    report::write_json(
        &out.join("sweep_report.json"),
        &SweepReport {
            taus: location_sets.iter().map(|(t, _)| *t).collect(),
            locations: location_sets.iter().map(|(_, l)| l.clone()).collect(),
            max_location_shift: max_shift,
            consistent_counts: consistent,
            passed,
        },
    )?;
    Ok(passed)
}

/// The twist-example track: potential, corners, conservation, invariance.
pub fn run_twist(config: &TwistConfig, out: &Path, emit_svg: bool) -> Result<bool> {
    std::fs::create_dir_all(out)?;
    let nodes: Vec<PotentialNode> = config
        .nodes
        .iter()
        .enumerate()
        .map(|(i, &x)| PotentialNode {
            x,
            degenerate: config.degenerate.get(i).copied().unwrap_or(false),
        })
        .collect();
    let pot = PeriodicPotential::build(&nodes)
        .map_err(|e| anyhow::anyhow!("building potential: {e}"))?;
    let sys = TwistSystem::new(config.a, config.b);
    let energy = (config.b * config.b) as f64 * pot.level();
    let curve = curve_from_energy(&pot, config.b, energy)
        .map_err(|e| anyhow::anyhow!("energy curve: {e}"))?;

    // corner report
    let mut corners = Vec::new();
    for c in pot.critical_points() {
        let (l, r) = if c.kind == CriticalKind::Maximum {
            corner_slopes(&pot, config.b, c.x).map_err(|e| anyhow::anyhow!("slopes: {e}"))?
        } else {
            (0.0, 0.0)
        };
        corners.push(TwistCornerReport {
            x: c.x,
            kind: match c.kind {
                CriticalKind::Maximum => "maximum".into(),
                CriticalKind::Minimum => "minimum".into(),
            },
            second_derivative: c.second_derivative,
            degenerate: c.degenerate,
            left_slope: l,
            right_slope: r,
        });
    }

    // conservation over 100 unit times
    let start = (0.06, 0.9);
    let k0 = sys.reduced_energy(&pot, start.0, start.1);
    let end = sys.flow_reduced(&pot, start, 100.0, config.step);
    let drift = (sys.reduced_energy(&pot, end.0, end.1) - k0).abs();

    // invariance of the curve under the time-1 map
    let mut deviation = 0.0f64;
    let bf = config.b as f64;
    let af = config.a as f64;
    for j in 0..48 {
        let bx0 = j as f64 / 48.0;
        if pot.critical_points().iter().any(|c| (c.x - bx0).abs() < 0.03) {
            continue;
        }
        let bp0 = curve.momentum(bx0);
        let (x1, p1) = sys.time_one_map(&pot, bx0 / bf, (bp0 + af) / bf, 0.0, config.step);
        let (bx1, bp1) = sys.reduce(x1, p1, 1.0);
        let wrapped = bx1 - bx1.floor();
        deviation = deviation.max((bp1 - curve.momentum(wrapped)).abs());
    }

    let samples = curve.sample(config.samples);
    let rows: Vec<Vec<f64>> = samples.iter().map(|&(x, p)| vec![x, p]).collect();
    report::write_csv(&out.join("twist_curve.csv"), &["x", "p"], &rows)?;

    let passed = drift < 1e-8 && deviation < 1e-6;
    let summary = TwistSummary {
        a: config.a,
        b: config.b,
        level: pot.level(),
        energy,
        corners,
        energy_drift_100: drift,
        curve_invariance_deviation: deviation,
        checks_passed: passed,
    };
    report::write_json(&out.join("twist_summary.json"), &summary)?;
    report::write_json(&out.join("twist_corners.json"), &summary.corners)?;

    if emit_svg {
        let corner_xs: Vec<f64> = pot
            .critical_points()
            .iter()
            .filter(|c| c.kind == CriticalKind::Maximum && !c.degenerate)
            .map(|c| c.x)
            .collect();
        svg::twist_figure(&samples, &corner_xs, &out.join("twist.svg"))?;
    }
    Ok(passed)
}
