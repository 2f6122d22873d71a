//! Collapsing domains with bounded principal eigenvalue for `P⁻₁`.
//!
//! `Qₙ = {0 < (nx+y)/2 < π, −π/2 < (nx−y)/2 < π/2}` shrinks to a segment as `n → ∞`, yet the
//! function `wₙ = −(sin nx + sin y)` is negative inside, vanishes on the boundary and satisfies
//! `P⁻₁(D²wₙ) + wₙ ≤ 0`. By the maximum principle characterisation of `μ₁⁻` that forces
//! `μ₁⁻(Qₙ) ≤ 1`. Here the inequality is checked on sample grids; the result is a
//! grid-evidence certificate, not a proof.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::operator::{pminus_k, SymmetricMatrix};

/// Strip-coordinate margin for a sample to count as interior.
pub const INTERIOR_MARGIN: f64 = 1e-9;
pub const INEQUALITY_TOLERANCE: f64 = 1e-12;
pub const MIN_GRID: usize = 50;
pub const MIN_AREA_SAMPLES: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DomainQn {
    pub n: u32,
}

impl DomainQn {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return invalid("n must be a positive integer");
        }
        Ok(Self { n })
    }

    /// `((nx+y)/2, (nx−y)/2)`
    pub fn strip_coordinates(&self, x: f64, y: f64) -> (f64, f64) {
        let nx = self.n as f64 * x;
        (0.5 * (nx + y), 0.5 * (nx - y))
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (s, t) = self.strip_coordinates(x, y);
        s > 0.0 && s < PI && t > -FRAC_PI_2 && t < FRAC_PI_2
    }

    /// Inside by at least [`INTERIOR_MARGIN`] in both strip coordinates.
    pub fn is_interior(&self, x: f64, y: f64) -> bool {
        let (s, t) = self.strip_coordinates(x, y);
        s >= INTERIOR_MARGIN
            && s <= PI - INTERIOR_MARGIN
            && t >= -FRAC_PI_2 + INTERIOR_MARGIN
            && t <= FRAC_PI_2 - INTERIOR_MARGIN
    }

    /// `(x_min, x_max, y_min, y_max)`; exact, since the vertices of the rectangle are known.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        let n = self.n as f64;
        (-FRAC_PI_2 / n, 1.5 * PI / n, -FRAC_PI_2, 1.5 * PI)
    }

    /// `2π²/n`, from the Jacobian of the strip coordinates.
    pub fn exact_area(&self) -> f64 {
        2.0 * PI * PI / self.n as f64
    }

    /// Point `(x, y)` for strip coordinates `(s, t)`.
    pub fn from_strip(&self, s: f64, t: f64) -> (f64, f64) {
        ((s + t) / self.n as f64, s - t)
    }
}

pub fn w_n(n: u32, x: f64, y: f64) -> f64 {
    -((n as f64 * x).sin() + y.sin())
}

pub fn hessian_w_n(n: u32, x: f64, y: f64) -> SymmetricMatrix {
    let nf = n as f64;
    SymmetricMatrix::diagonal(&[nf * nf * (nf * x).sin(), y.sin()])
        .expect("sines are finite for finite input")
}

/// Which branch of the sign analysis bounds `P⁻₁(D²wₙ)` at a sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// `sin nx > 0`, `sin y > 0`: `min(n² sin nx, sin y) ≤ sin y ≤ −wₙ`
    A,
    /// `sin nx ≤ 0 ≤ sin y`: `n² sin nx ≤ sin nx ≤ −wₙ`
    B,
    /// `sin y ≤ 0 ≤ sin nx`: `P⁻₁ = sin y ≤ −wₙ`
    C,
    /// On both sine zero lines; the B and C chains both hold.
    Both,
}

pub fn classify(n: u32, x: f64, y: f64) -> Option<Region> {
    let sn = (n as f64 * x).sin();
    let sy = y.sin();
    match (sn, sy) {
        _ if sn > 0.0 && sy > 0.0 => Some(Region::A),
        _ if sn == 0.0 && sy == 0.0 => Some(Region::Both),
        _ if sn <= 0.0 && sy >= 0.0 => Some(Region::B),
        _ if sn >= 0.0 && sy <= 0.0 => Some(Region::C),
        _ => None,
    }
}

/// Checks every link of the region's inequality chain, with slack `tol` per link.
pub fn chain_holds(region: Region, n: u32, x: f64, y: f64, tol: f64) -> bool {
    let nf = n as f64;
    let sn = (nf * x).sin();
    let sy = y.sin();
    let minus_w = -w_n(n, x, y);
    let p1 = (nf * nf * sn).min(sy);
    let b_chain = p1 <= nf * nf * sn + tol && nf * nf * sn <= sn + tol && sn <= minus_w + tol;
    let c_chain = p1 <= sy + tol && sy <= minus_w + tol;
    match region {
        Region::A => p1 <= sy + tol && sy <= minus_w + tol,
        Region::B => b_chain,
        Region::C => c_chain,
        Region::Both => b_chain && c_chain,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RegionCounts {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub both: usize,
}

impl RegionCounts {
    pub fn total(&self) -> usize {
        self.a + self.b + self.c + self.both
    }

    /// A, B and C each received at least one sample.
    pub fn all_exercised(&self) -> bool {
        self.a > 0 && self.b > 0 && self.c > 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenScanReport {
    pub n: u32,
    pub grid: usize,
    pub bounding_box: [f64; 4],
    pub interior_samples: usize,
    /// `max P⁻₁(D²wₙ) + wₙ` over interior samples.
    pub max_residual: f64,
    pub argmax: [f64; 2],
    pub regions: RegionCounts,
    pub chains_hold: bool,
    /// `max wₙ` over interior samples; negative when the sign check passes.
    pub max_w_interior: f64,
    pub w_negative_interior: bool,
    /// `max |wₙ|` over points placed exactly on the four boundary edges.
    pub boundary_max_abs_w: f64,
    pub estimated_area: f64,
}

/// One interior sample of a scan, for plotting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanPoint {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub residual: f64,
    pub region: Region,
}

fn grid_axis(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect()
}

/// Every interior sample of an `m × m` vertex grid over the bounding box.
pub fn scan_points(n: u32, grid: usize) -> Result<Vec<ScanPoint>> {
    let dom = DomainQn::new(n)?;
    if grid < MIN_GRID {
        return invalid(format!("grid must be at least {MIN_GRID} per axis, got {grid}"));
    }
    let (x0, x1, y0, y1) = dom.bounding_box();
    let xs = grid_axis(x0, x1, grid);
    let ys = grid_axis(y0, y1, grid);
    let rows: Vec<Result<Vec<ScanPoint>>> = ys
        .par_iter()
        .map(|&y| {
            let mut row = Vec::new();
            for &x in &xs {
                if !dom.is_interior(x, y) {
                    continue;
                }
                let w = w_n(n, x, y);
                let residual = pminus_k(&hessian_w_n(n, x, y), 1)? + w;
                let region = classify(n, x, y).ok_or_else(|| {
                    Error::InvalidInput(format!("interior sample ({x}, {y}) fits no region"))
                })?;
                row.push(ScanPoint { x, y, w, residual, region });
            }
            Ok(row)
        })
        .collect();
    let mut out = Vec::new();
    for row in rows {
        out.extend(row?);
    }
    Ok(out)
}

fn boundary_max_abs_w(dom: &DomainQn, m: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m {
        let u = i as f64 / (m - 1) as f64;
        let s = PI * u;
        let t = -FRAC_PI_2 + PI * u;
        for (ss, tt) in [(0.0, t), (PI, t), (s, -FRAC_PI_2), (s, FRAC_PI_2)] {
            let (x, y) = dom.from_strip(ss, tt);
            worst = worst.max(w_n(dom.n, x, y).abs());
        }
    }
    worst
}

/// Checks `P⁻₁(D²wₙ) + wₙ ≤ 1e−12` at every interior sample of a `grid × grid` scan.
///
/// Fails with the first (row-major) violating sample as witness.
pub fn scan_inequality(n: u32, grid: usize) -> Result<EigenScanReport> {
    let dom = DomainQn::new(n)?;
    let points = scan_points(n, grid)?;
    let mut regions = RegionCounts::default();
    let mut max_residual = f64::NEG_INFINITY;
    let mut argmax = [f64::NAN; 2];
    let mut max_w = f64::NEG_INFINITY;
    let mut chains_hold = true;
    for p in &points {
        if p.residual > INEQUALITY_TOLERANCE {
            return Err(Error::InequalityViolated {
                x: p.x,
                y: p.y,
                residual: p.residual,
            });
        }
        if p.residual > max_residual {
            max_residual = p.residual;
            argmax = [p.x, p.y];
        }
        max_w = max_w.max(p.w);
        chains_hold &= chain_holds(p.region, n, p.x, p.y, INEQUALITY_TOLERANCE);
        match p.region {
            Region::A => regions.a += 1,
            Region::B => regions.b += 1,
            Region::C => regions.c += 1,
            Region::Both => regions.both += 1,
        }
    }
    if points.is_empty() {
        return invalid("scan produced no interior samples");
    }
    let (x0, x1, y0, y1) = dom.bounding_box();
    Ok(EigenScanReport {
        n,
        grid,
        bounding_box: [x0, x1, y0, y1],
        interior_samples: points.len(),
        max_residual,
        argmax,
        regions,
        chains_hold,
        max_w_interior: max_w,
        w_negative_interior: max_w < 0.0,
        boundary_max_abs_w: boundary_max_abs_w(&dom, grid),
        estimated_area: area_estimate(n, MIN_AREA_SAMPLES)?,
    })
}

/// Midpoint-rule area of `Qₙ` with about `samples` cells over the bounding box.
pub fn area_estimate(n: u32, samples: usize) -> Result<f64> {
    let dom = DomainQn::new(n)?;
    if samples < MIN_AREA_SAMPLES {
        return invalid(format!("need at least {MIN_AREA_SAMPLES} samples, got {samples}"));
    }
    let m = (samples as f64).sqrt().ceil() as usize;
    let (x0, x1, y0, y1) = dom.bounding_box();
    let (dx, dy) = ((x1 - x0) / m as f64, (y1 - y0) / m as f64);
    let inside: usize = (0..m)
        .into_par_iter()
        .map(|j| {
            let y = y0 + (j as f64 + 0.5) * dy;
            (0..m)
                .filter(|&i| dom.contains(x0 + (i as f64 + 0.5) * dx, y))
                .count()
        })
        .sum();
    Ok(inside as f64 * dx * dy)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenCertificate {
    pub n: u32,
    /// Upper bound on `μ₁⁻(Qₙ)`.
    pub mu_upper_bound: f64,
    pub kind: &'static str,
    pub statements: Vec<String>,
    pub scan: EigenScanReport,
}

pub const CERTIFICATE_KIND: &str = "grid-evidence certificate";

/// Runs the scan and, if every check passes, emits the `μ₁⁻(Qₙ) ≤ 1` certificate.
pub fn mu_upper_bound_report(n: u32, grid: usize) -> Result<EigenCertificate> {
    let scan = scan_inequality(n, grid)?;
    if !scan.w_negative_interior {
        return invalid(format!("w_n is not negative at every interior sample (max {})", scan.max_w_interior));
    }
    if !scan.chains_hold {
        return invalid("a sampled point does not satisfy its region's inequality chain");
    }
    if scan.boundary_max_abs_w > INEQUALITY_TOLERANCE {
        return invalid(format!("w_n does not vanish on the boundary (max {})", scan.boundary_max_abs_w));
    }
    let statements = vec![
        format!("w_{n} < 0 at all {} interior samples (max {:e})", scan.interior_samples, scan.max_w_interior),
        format!("|w_{n}| <= {:e} on the boundary of Q_{n}", scan.boundary_max_abs_w),
        format!(
            "P1-(D^2 w_{n}) + w_{n} <= {:e} at all interior samples (max {:e})",
            INEQUALITY_TOLERANCE, scan.max_residual
        ),
        "maximum principle below mu_1^- then forces mu_1^-(Q_n) <= 1".to_string(),
    ];
    Ok(EigenCertificate {
        n,
        mu_upper_bound: 1.0,
        kind: CERTIFICATE_KIND,
        statements,
        scan,
    })
}

/// Writes `x,y,w,residual,region` rows.
pub fn write_scan_csv<W: std::io::Write>(points: &[ScanPoint], mut out: W) -> std::io::Result<()> {
    writeln!(out, "x,y,w,residual,region")?;
    for p in points {
        let region = match p.region {
            Region::A => "a",
            Region::B => "b",
            Region::C => "c",
            Region::Both => "both",
        };
        writeln!(out, "{},{},{},{},{}", p.x, p.y, p.w, p.residual, region)?;
    }
    Ok(())
}
