use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::json;
use trunclap_core::eigenbound::{mu_upper_bound_report, scan_points, write_scan_csv, MIN_GRID};
use trunclap_core::fd::{flatness_probe, solve_dirichlet, sup_error, Axis, BoxSpec, FlatnessStats, SolveConfig};
use trunclap_core::models::{
    make_halfline_tanh, make_plain_tanh, make_radial_closed_form, make_tanh_profile, nonlinearity_listing,
    parse_nonlinearity, Nonlinearity, Profile1D, Reaction,
};
use trunclap_core::radial::{check_ordering, integrate_ivp, quadrature_agreement, residual_of_radial, OrderingViolation};
use trunclap_core::viscosity::{default_grid, uniform_grid, verify_and_analyze, VerdictReport};
use trunclap_core::{CatalogEntry, Status};

use crate::args::{CatalogArgs, EigenboundArgs, FdArgs, Format, RadialArgs, VerifyArgs};
use crate::expectations::{ExpectationTable, Expected};
use crate::output::{emit, emit_json};
use crate::usage;

const ORACLE_TOLERANCE: f64 = 1e-6;
const RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Serialize)]
struct VerifyOutput {
    #[serde(flatten)]
    report: VerdictReport,
    expected: Expected,
    matches_expectation: bool,
}

pub fn verify(a: &VerifyArgs) -> Result<bool> {
    let entry = CatalogEntry::parse(&a.candidate).map_err(|e| usage(e.to_string()))?;
    let k = match (entry, a.k) {
        (CatalogEntry::RadialClosed { k, .. }, Some(flag)) if flag != k as usize => {
            return Err(usage(format!("--k {flag} disagrees with k = {k} in '{}'", a.candidate)));
        }
        (CatalogEntry::RadialClosed { k, .. }, _) => k as usize,
        (_, flag) => flag.unwrap_or(1),
    };
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(usage("--tol must be positive"));
    }
    let candidate = entry.candidate(a.ambient_dim, k).map_err(|e| usage(e.to_string()))?;
    let grid = match (a.grid_start, a.grid_end, a.grid_step) {
        (None, None, None) => default_grid(entry.kind()),
        (s, e, h) => {
            let fallback = default_grid(entry.kind());
            let start = s.unwrap_or(fallback[0]);
            let end = e.unwrap_or(*fallback.last().expect("default grid is nonempty"));
            let step = h.unwrap_or(0.01);
            uniform_grid(start, end, step).map_err(|e| usage(e.to_string()))?
        }
    };
    let expected = ExpectationTable::bundled()?.lookup(entry.family())?;
    let report = verify_and_analyze(&candidate, &grid, a.tol)?;
    let matches = report.subsolution == expected.subsolution
        && report.supersolution == expected.supersolution
        && report.solution == expected.solution;

    match a.output.format {
        Format::Json => emit_json(
            a.output.out.as_deref(),
            &VerifyOutput { report: report.clone(), expected, matches_expectation: matches },
        )?,
        Format::Csv => {
            let mut buf = csv::Writer::from_writer(Vec::new());
            buf.write_record(["t", "residual", "property", "status", "rule"])?;
            for w in &report.witnesses {
                let residual = w.residual.map(|r| r.to_string()).unwrap_or_default();
                let property = serde_json::to_value(w.property)?;
                let status = serde_json::to_value(w.status)?;
                buf.write_record([
                    w.t.to_string(),
                    residual,
                    property.as_str().unwrap_or_default().to_string(),
                    status.as_str().unwrap_or_default().to_string(),
                    w.rule.clone(),
                ])?;
            }
            let bytes = buf.into_inner().context("flushing CSV")?;
            emit(a.output.out.as_deref(), |w| w.write_all(&bytes))?;
        }
    }
    if !matches {
        eprintln!(
            "verdict {}/{}/{} differs from expected {}/{}/{}",
            label(report.subsolution),
            label(report.supersolution),
            label(report.solution),
            label(expected.subsolution),
            label(expected.supersolution),
            label(expected.solution)
        );
    }
    Ok(matches)
}

fn label(s: Status) -> &'static str {
    if s.is_pass() {
        "pass"
    } else {
        "fail"
    }
}

#[derive(Serialize)]
struct RadialOutput {
    nonlinearity: String,
    alpha: f64,
    k: usize,
    #[serde(rename = "N")]
    ambient_dim: usize,
    step: f64,
    rmax: f64,
    samples: usize,
    v_at_rmax: f64,
    monotone_decreasing: bool,
    positive: bool,
    ordering_holds: bool,
    ordering_violations: usize,
    first_ordering_violation: Option<OrderingViolation>,
    quadrature_sup_error: Option<f64>,
    closed_form_sup_error: Option<f64>,
    oracle_agreement: bool,
    residual: Option<f64>,
    notes: Vec<String>,
}

pub fn radial(a: &RadialArgs) -> Result<bool> {
    let f = parse_nonlinearity(&a.nonlinearity).map_err(|e| usage(e.to_string()))?;
    if a.k == 0 {
        return Err(usage("--k must be at least 1"));
    }
    if !(a.alpha > 0.0 && a.alpha <= f.delta()) {
        return Err(usage(format!("--alpha must lie in (0, {}] for {}", f.delta(), f.name())));
    }
    if !(a.step > 0.0 && a.step.is_finite()) || !(a.rmax >= 1.0 && a.rmax.is_finite()) {
        return Err(usage("--step must be positive and --rmax at least 1"));
    }
    let ambient_dim = a.ambient_dim.unwrap_or(a.k + 1);
    if ambient_dim <= a.k {
        return Err(usage(format!("--N {ambient_dim} must exceed --k {}", a.k)));
    }

    let run = integrate_ivp(&f, a.alpha, a.k, a.step, a.rmax)?;
    let mut notes = Vec::new();
    let ordering = check_ordering(&run, &f);
    let quadrature = match quadrature_agreement(&run, &f) {
        Ok(e) => Some(e),
        Err(e) => {
            notes.push(format!("quadrature inverse unavailable: {e}"));
            None
        }
    };
    let closed_form = closed_form_error(&f, a.alpha, a.k, &run)?;
    let residual = match residual_of_radial(&run, &f, ambient_dim) {
        Ok(r) => Some(r),
        Err(e) => {
            notes.push(format!("PDE residual not evaluated: {e}"));
            None
        }
    };
    let oracle_agreement = quadrature.is_some_and(|e| e <= ORACLE_TOLERANCE)
        && closed_form.map_or(true, |e| e <= ORACLE_TOLERANCE);
    let out = RadialOutput {
        nonlinearity: f.name().to_string(),
        alpha: a.alpha,
        k: a.k,
        ambient_dim,
        step: a.step,
        rmax: a.rmax,
        samples: run.samples.len(),
        v_at_rmax: run.diagnostics.tail_below,
        monotone_decreasing: run.diagnostics.monotone_decreasing,
        positive: run.diagnostics.positive,
        ordering_holds: ordering.holds,
        ordering_violations: ordering.violations.len(),
        first_ordering_violation: ordering.violations.first().copied(),
        quadrature_sup_error: quadrature,
        closed_form_sup_error: closed_form,
        oracle_agreement,
        residual,
        notes,
    };
    let ok = out.oracle_agreement
        && out.ordering_holds
        && out.monotone_decreasing
        && out.positive
        && out.residual.is_some_and(|r| r <= RESIDUAL_TOLERANCE);

    match a.output.format {
        Format::Json => emit_json(a.output.out.as_deref(), &out)?,
        Format::Csv => {
            emit(a.output.out.as_deref(), |w| run.write_csv(w))?;
            eprintln!("{}", serde_json::to_string(&out)?);
        }
    }
    Ok(ok)
}

fn closed_form_error(f: &Nonlinearity, alpha: f64, k: usize, run: &trunclap_core::radial::RadialRun) -> Result<Option<f64>> {
    if f.reaction() != Reaction::AllenCahn {
        return Ok(None);
    }
    let exact = make_radial_closed_form(alpha, k as u32)?;
    Ok(Some(
        run.samples
            .iter()
            .map(|s| (s.v - exact.value(s.r)).abs())
            .fold(0.0, f64::max),
    ))
}

pub fn eigenbound(a: &EigenboundArgs) -> Result<bool> {
    if a.n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    if a.grid < MIN_GRID {
        return Err(usage(format!("--grid must be at least {MIN_GRID}")));
    }
    let cert = mu_upper_bound_report(a.n, a.grid);
    match a.output.format {
        Format::Json => match &cert {
            Ok(c) => emit_json(a.output.out.as_deref(), c)?,
            Err(e) => emit_json(a.output.out.as_deref(), &json!({"n": a.n, "grid": a.grid, "certified": false, "error": e.to_string()}))?,
        },
        Format::Csv => {
            let points = scan_points(a.n, a.grid)?;
            emit(a.output.out.as_deref(), |w| write_scan_csv(&points, w))?;
        }
    }
    match cert {
        Ok(_) => Ok(true),
        Err(e) => {
            eprintln!("certificate not emitted: {e}");
            Ok(false)
        }
    }
}

/// Boundary data for the `fd` subcommand.
enum Boundary {
    /// One-dimensional profile of `y`; `exact` when it solves the equation.
    ProfileY { profile: Profile1D, exact: bool },
    Zero,
    RampX { slope: f64 },
}

impl Boundary {
    fn parse(name: &str, f: &Nonlinearity) -> Result<Self> {
        let allen_cahn = f.reaction() == Reaction::AllenCahn;
        let (head, arg) = match name.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (name, None),
        };
        let number = |a: Option<&str>| -> Result<f64> {
            a.context("missing parameter")?.trim().parse::<f64>().map_err(|e| usage(format!("'{name}': {e}")))
        };
        Ok(match head {
            "halfline-tanh-y" if arg.is_none() => Self::ProfileY { profile: make_halfline_tanh(), exact: allen_cahn },
            "plain-tanh-y" if arg.is_none() => Self::ProfileY { profile: make_plain_tanh(), exact: false },
            "tanh-shifted-y" => Self::ProfileY {
                profile: make_tanh_profile(number(arg).map_err(|e| usage(e.to_string()))?).map_err(|e| usage(e.to_string()))?,
                exact: allen_cahn,
            },
            "zero" if arg.is_none() => Self::Zero,
            "ramp-x" => Self::RampX { slope: number(arg).map_err(|e| usage(e.to_string()))? },
            _ => return Err(usage(format!("unknown boundary data '{name}'"))),
        })
    }

    fn value(&self, x: f64, y: f64) -> f64 {
        match self {
            Self::ProfileY { profile, .. } => profile.value(y),
            Self::Zero => 0.0,
            Self::RampX { slope } => slope * x,
        }
    }

    fn is_exact(&self) -> bool {
        match self {
            Self::ProfileY { exact, .. } => *exact,
            Self::Zero => true,
            Self::RampX { .. } => false,
        }
    }
}

#[derive(Serialize)]
struct FlatnessSummary {
    sup: f64,
    mean: f64,
}

impl From<FlatnessStats> for FlatnessSummary {
    fn from(s: FlatnessStats) -> Self {
        Self { sup: s.sup, mean: s.mean }
    }
}

#[derive(Serialize)]
struct FdOutput {
    boundary: String,
    nonlinearity: String,
    #[serde(rename = "box")]
    bounds: [f64; 4],
    h: f64,
    nx: usize,
    ny: usize,
    config: SolveConfig,
    tau: f64,
    iterations: usize,
    converged: bool,
    final_update: f64,
    residual: f64,
    min: f64,
    max: f64,
    flatness_x: FlatnessSummary,
    flatness_y: FlatnessSummary,
    /// Interior sup error against the boundary profile when that profile is an exact solution.
    manufactured_sup_error: Option<f64>,
    exploratory: bool,
}

pub fn fd(a: &FdArgs) -> Result<bool> {
    let f = parse_nonlinearity(&a.nonlinearity).map_err(|e| usage(e.to_string()))?;
    let boundary = Boundary::parse(&a.boundary, &f)?;
    let bounds = match *a.bounds.as_slice() {
        [lo, hi] => [lo, hi, lo, hi],
        [xl, xh, yl, yh] => [xl, xh, yl, yh],
        _ => return Err(usage("--box takes 2 or 4 numbers")),
    };
    if !(a.h > 0.0) || a.radius == 0 || !(a.threshold > 0.0) {
        return Err(usage("--h and --threshold must be positive and --radius at least 1"));
    }
    let cfg = SolveConfig {
        tau: a.tau,
        max_iterations: a.max_iter,
        threshold: a.threshold,
        stencil_radius: a.radius,
    };
    let spec = BoxSpec { x_lo: bounds[0], x_hi: bounds[1], y_lo: bounds[2], y_hi: bounds[3], h: a.h };
    let out = solve_dirichlet(&f, spec, |x, y| boundary.value(x, y), &cfg).map_err(|e| match e {
        trunclap_core::Error::InvalidInput(m) => usage(m),
        other => other.into(),
    })?;
    let field = &out.field;
    let min = field.values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = field.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let flat_x = flatness_probe(field, Axis::X);
    let manufactured = boundary.is_exact().then(|| sup_error(field, |x, y| boundary.value(x, y)));
    let flat_ok = manufactured.map_or(true, |e| flat_x.sup <= 2.0 * e + 1e-12);
    let report = FdOutput {
        boundary: a.boundary.clone(),
        nonlinearity: f.name().to_string(),
        bounds,
        h: a.h,
        nx: field.nx,
        ny: field.ny,
        config: cfg,
        tau: out.tau,
        iterations: out.iterations,
        converged: out.converged,
        final_update: out.final_update,
        residual: out.residual,
        min,
        max,
        flatness_x: flat_x.into(),
        flatness_y: flatness_probe(field, Axis::Y).into(),
        manufactured_sup_error: manufactured,
        exploratory: !boundary.is_exact(),
    };
    match a.output.format {
        Format::Json => emit_json(a.output.out.as_deref(), &report)?,
        Format::Csv => {
            emit(a.output.out.as_deref(), |w| field.write_csv(w))?;
            eprintln!("{}", serde_json::to_string(&report)?);
        }
    }
    if !out.converged {
        eprintln!("not converged after {} iterations (last update {:e})", out.iterations, out.final_update);
    }
    Ok(out.converged && flat_ok)
}

pub fn catalog(a: &CatalogArgs) -> Result<bool> {
    let table = ExpectationTable::bundled()?;
    match a.output.format {
        Format::Json => emit_json(
            a.output.out.as_deref(),
            &json!({
                "candidates": CatalogEntry::listing(),
                "nonlinearities": nonlinearity_listing(),
                "expectations": table,
            }),
        )?,
        Format::Csv => {
            let mut buf = csv::Writer::from_writer(Vec::new());
            buf.write_record(["kind", "name", "subsolution", "supersolution", "solution"])?;
            for name in CatalogEntry::listing() {
                let family = name.split(':').next().unwrap_or(name);
                let e = table.lookup(family)?;
                buf.write_record(["candidate", name, label(e.subsolution), label(e.supersolution), label(e.solution)])?;
            }
            for name in nonlinearity_listing() {
                buf.write_record(["nonlinearity", name, "", "", ""])?;
            }
            let bytes = buf.into_inner().context("flushing CSV")?;
            emit(a.output.out.as_deref(), |w| w.write_all(&bytes))?;
        }
    }
    Ok(true)
}
