//! Wide-stencil monotone finite differences for `P⁻₁(D²u) + f(u) = 0` on rectangles.
//!
//! `λ₁(D²u)` is the minimal second directional derivative, approximated by the smallest
//! centred second difference over a set of lattice directions. The explicit pseudo-time
//! iteration `u ← u + τ(λ₁ʰ(u) + f(u))` is monotone for `τ ≤ 1/(2/h² + sup|f'|)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::models::{Nonlinearity, Reaction};

fn gcd(a: i32, b: i32) -> i32 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Lattice directions `(a, b)` with coprime coordinates and `max(|a|, |b|) ≤ radius`, one per
/// line through the origin, ordered by length and then angle.
pub fn lattice_stencil(radius: u32) -> Result<Vec<(i32, i32)>> {
    if radius == 0 {
        return invalid("stencil radius must be at least 1");
    }
    let r = radius as i32;
    let mut dirs = Vec::new();
    for a in 0..=r {
        for b in -r..=r {
            if (a == 0 && b <= 0) || gcd(a, b) != 1 {
                continue;
            }
            dirs.push((a, b));
        }
    }
    dirs.sort_by_key(|&(a, b)| (a * a + b * b, -b, a));
    Ok(dirs)
}

/// Uniform grid on `[x0, x0 + (nx−1)h] × [y0, y0 + (ny−1)h]`; the outer ring is the boundary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridField2D {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    pub x0: f64,
    pub y0: f64,
    pub values: Vec<f64>,
    pub boundary: Vec<bool>,
    pub stencil: Vec<(i32, i32)>,
}

impl GridField2D {
    pub fn new(nx: usize, ny: usize, h: f64, x0: f64, y0: f64, radius: u32) -> Result<Self> {
        if nx < 3 || ny < 3 {
            return invalid(format!("grid needs at least 3x3 points, got {nx}x{ny}"));
        }
        if !(h > 0.0 && h.is_finite() && x0.is_finite() && y0.is_finite()) {
            return invalid("grid spacing and origin must be finite, spacing positive");
        }
        let mut boundary = vec![false; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                boundary[j * nx + i] = i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
            }
        }
        Ok(Self {
            nx,
            ny,
            h,
            x0,
            y0,
            values: vec![0.0; nx * ny],
            boundary,
            stencil: lattice_stencil(radius)?,
        })
    }

    /// Grid on the box `[x_lo, x_hi] × [y_lo, y_hi]` with spacing `h`.
    pub fn on_box(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64, h: f64, radius: u32) -> Result<Self> {
        if !(x_hi > x_lo && y_hi > y_lo) {
            return invalid("box must have positive extent");
        }
        let count = |len: f64| (len / h).round() as usize + 1;
        Self::new(count(x_hi - x_lo), count(y_hi - y_lo), h, x_lo, y_lo, radius)
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.h
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.h
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.index(i, j)]
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        self.boundary[self.index(i, j)]
    }

    /// Fills every node from `u(x, y)`.
    pub fn fill(&mut self, u: impl Fn(f64, f64) -> f64) {
        for j in 0..self.ny {
            for i in 0..self.nx {
                let v = u(self.x(i), self.y(j));
                let idx = self.index(i, j);
                self.values[idx] = v;
            }
        }
    }

    fn interior_indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..self.ny - 1).flat_map(move |j| (1..self.nx - 1).map(move |i| (i, j)))
    }

    /// Writes `x,y,u` rows in row-major order.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x,y,u")?;
        for j in 0..self.ny {
            for i in 0..self.nx {
                writeln!(out, "{},{},{}", self.x(i), self.y(j), self.get(i, j))?;
            }
        }
        Ok(())
    }
}

fn lambda1_at(values: &[f64], field: &GridField2D, i: usize, j: usize) -> f64 {
    let (nx, ny) = (field.nx as i64, field.ny as i64);
    let (ii, jj) = (i as i64, j as i64);
    let center = values[j * field.nx + i];
    let h2 = field.h * field.h;
    let mut best = f64::INFINITY;
    for &(a, b) in &field.stencil {
        let (a, b) = (a as i64, b as i64);
        let (ip, jp, im, jm) = (ii + a, jj + b, ii - a, jj - b);
        if ip < 0 || ip >= nx || im < 0 || im >= nx || jp < 0 || jp >= ny || jm < 0 || jm >= ny {
            continue;
        }
        let up = values[(jp * nx + ip) as usize];
        let down = values[(jm * nx + im) as usize];
        let d2 = (up - 2.0 * center + down) / (h2 * (a * a + b * b) as f64);
        best = best.min(d2);
    }
    best
}

/// `min_e (u(x+he) − 2u(x) + u(x−he)) / (h²|e|²)` over the stencil directions that fit.
pub fn discrete_lambda1(field: &GridField2D, i: usize, j: usize) -> Result<f64> {
    if i == 0 || j == 0 || i >= field.nx - 1 || j >= field.ny - 1 {
        return invalid(format!("({i}, {j}) is not an interior node"));
    }
    Ok(lambda1_at(&field.values, field, i, j))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolveConfig {
    /// Pseudo-time step; `None` picks `0.9·(h²/2)/(1 + h²·sup|f'|)`.
    pub tau: Option<f64>,
    pub max_iterations: usize,
    /// Stop once `max |u_new − u_old| ≤ threshold`.
    pub threshold: f64,
    pub stencil_radius: u32,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            tau: None,
            max_iterations: 200_000,
            threshold: 1e-10,
            stencil_radius: 2,
        }
    }
}

/// `sup |f'|` on the range the iteration is expected to visit.
fn reaction_lipschitz(f: &Nonlinearity) -> f64 {
    match f.reaction() {
        Reaction::Linear { slope } => slope.abs(),
        _ => f.sup_abs_fprime(-1.0, 1.0),
    }
}

/// Largest monotone pseudo-time step, `1/(2/h² + sup|f'|)`.
pub fn monotone_tau_bound(h: f64, f: &Nonlinearity) -> f64 {
    1.0 / (2.0 / (h * h) + reaction_lipschitz(f))
}

pub fn default_tau(h: f64, f: &Nonlinearity) -> f64 {
    0.9 * (0.5 * h * h) / (1.0 + h * h * reaction_lipschitz(f))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveOutcome {
    pub field: GridField2D,
    pub iterations: usize,
    pub final_update: f64,
    pub converged: bool,
    pub tau: f64,
    /// `max |λ₁ʰ(u) + f(u)|` over interior nodes of the returned field.
    pub residual: f64,
}

/// Rectangle and spacing of a Dirichlet problem.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoxSpec {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
    pub h: f64,
}

impl BoxSpec {
    pub fn square(lo: f64, hi: f64, h: f64) -> Self {
        Self { x_lo: lo, x_hi: hi, y_lo: lo, y_hi: hi, h }
    }
}

/// Transfinite (Coons) blend of the boundary ring into the interior.
fn coons_fill(field: &mut GridField2D) {
    let (nx, ny) = (field.nx, field.ny);
    let g = |f: &GridField2D, i: usize, j: usize| f.values[j * nx + i];
    let mut out = field.values.clone();
    for j in 1..ny - 1 {
        let eta = j as f64 / (ny - 1) as f64;
        for i in 1..nx - 1 {
            let xi = i as f64 / (nx - 1) as f64;
            let edges = (1.0 - xi) * g(field, 0, j)
                + xi * g(field, nx - 1, j)
                + (1.0 - eta) * g(field, i, 0)
                + eta * g(field, i, ny - 1);
            let corners = (1.0 - xi) * (1.0 - eta) * g(field, 0, 0)
                + xi * (1.0 - eta) * g(field, nx - 1, 0)
                + (1.0 - xi) * eta * g(field, 0, ny - 1)
                + xi * eta * g(field, nx - 1, ny - 1);
            out[j * nx + i] = edges - corners;
        }
    }
    field.values = out;
}

fn fixed_point_residual(field: &GridField2D, f: &Nonlinearity) -> f64 {
    field
        .interior_indices()
        .map(|(i, j)| (lambda1_at(&field.values, field, i, j) + f.f(field.get(i, j))).abs())
        .fold(0.0, f64::max)
}

/// Damped explicit iteration to a fixed point of `λ₁ʰ(u) + f(u) = 0` with `u = g` on the ring.
///
/// Sweeps are Jacobi-style: every node is updated from the previous iterate. A run that hits
/// `max_iterations` returns its last iterate with `converged = false`.
pub fn solve_dirichlet(
    f: &Nonlinearity,
    spec: BoxSpec,
    boundary: impl Fn(f64, f64) -> f64,
    cfg: &SolveConfig,
) -> Result<SolveOutcome> {
    let mut field = GridField2D::on_box(spec.x_lo, spec.x_hi, spec.y_lo, spec.y_hi, spec.h, cfg.stencil_radius)?;
    let h = field.h;
    let bound = monotone_tau_bound(h, f);
    let tau = match cfg.tau {
        None => default_tau(h, f),
        Some(t) if t > 0.0 && t <= bound => t,
        Some(t) => {
            return invalid(format!("tau = {t} violates the monotone bound (0, {bound}]"));
        }
    };
    if !(cfg.threshold > 0.0) {
        return invalid("convergence threshold must be positive");
    }
    let allen_cahn = f.reaction() == Reaction::AllenCahn;
    for j in 0..field.ny {
        for i in 0..field.nx {
            if !field.is_boundary(i, j) {
                continue;
            }
            let g = boundary(field.x(i), field.y(j));
            if !g.is_finite() || (allen_cahn && g.abs() >= 1.0) {
                return Err(Error::InvalidInput(format!(
                    "boundary value {g} at ({}, {}) is not finite or not inside (-1, 1)",
                    field.x(i),
                    field.y(j)
                )));
            }
            let idx = field.index(i, j);
            field.values[idx] = g;
        }
    }
    coons_fill(&mut field);

    let nx = field.nx;
    let mut next = field.values.clone();
    let mut iterations = 0;
    let mut update = f64::INFINITY;
    while iterations < cfg.max_iterations {
        let current = &field.values;
        let grid = &field;
        update = next
            .par_chunks_mut(nx)
            .enumerate()
            .skip(1)
            .take(grid.ny - 2)
            .map(|(j, row)| {
                let mut worst: f64 = 0.0;
                for (i, slot) in row.iter_mut().enumerate().skip(1).take(nx - 2) {
                    let u = current[j * nx + i];
                    let new = u + tau * (lambda1_at(current, grid, i, j) + f.f(u));
                    worst = worst.max((new - u).abs());
                    *slot = new;
                }
                worst
            })
            .reduce(|| 0.0, f64::max);
        std::mem::swap(&mut field.values, &mut next);
        iterations += 1;
        if !update.is_finite() {
            return Err(Error::BlowUp { last_r: iterations as f64 });
        }
        if update <= cfg.threshold {
            break;
        }
    }
    let residual = fixed_point_residual(&field, f);
    Ok(SolveOutcome {
        converged: update <= cfg.threshold,
        field,
        iterations,
        final_update: update,
        tau,
        residual,
    })
}

/// `max |u − exact|` over interior nodes.
pub fn sup_error(field: &GridField2D, exact: impl Fn(f64, f64) -> f64) -> f64 {
    field
        .interior_indices()
        .map(|(i, j)| (field.get(i, j) - exact(field.x(i), field.y(j))).abs())
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonOutcome {
    pub passed: bool,
    /// `max (u₁ − u₂)`; nonpositive when the solutions are ordered.
    pub max_violation: f64,
    pub witness: Option<(usize, usize)>,
    pub converged: bool,
}

pub const COMPARISON_SLACK: f64 = 1e-8;

/// Solves with boundary data `g₁ ≤ g₂` and checks `u₁ ≤ u₂ + 1e−8` at every node.
pub fn discrete_comparison_test(
    f: &Nonlinearity,
    spec: BoxSpec,
    lower: impl Fn(f64, f64) -> f64,
    upper: impl Fn(f64, f64) -> f64,
    cfg: &SolveConfig,
) -> Result<ComparisonOutcome> {
    let probe = GridField2D::on_box(spec.x_lo, spec.x_hi, spec.y_lo, spec.y_hi, spec.h, cfg.stencil_radius)?;
    for j in 0..probe.ny {
        for i in 0..probe.nx {
            if probe.is_boundary(i, j) {
                let (x, y) = (probe.x(i), probe.y(j));
                if lower(x, y) > upper(x, y) {
                    return invalid(format!("boundary data not ordered at ({x}, {y})"));
                }
            }
        }
    }
    let a = solve_dirichlet(f, spec, &lower, cfg)?;
    let b = solve_dirichlet(f, spec, &upper, cfg)?;
    let mut max_violation = f64::NEG_INFINITY;
    let mut witness = None;
    for j in 0..a.field.ny {
        for i in 0..a.field.nx {
            let d = a.field.get(i, j) - b.field.get(i, j);
            if d > max_violation {
                max_violation = d;
                witness = Some((i, j));
            }
        }
    }
    let passed = max_violation <= COMPARISON_SLACK;
    Ok(ComparisonOutcome {
        passed,
        max_violation,
        witness: if passed { None } else { witness },
        converged: a.converged && b.converged,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlatnessStats {
    pub axis: Axis,
    /// Oscillation `max − min` along each grid line parallel to `axis`.
    pub per_line: Vec<f64>,
    pub sup: f64,
    pub mean: f64,
}

/// Variation of the field along `axis`: zero means the field depends only on the other
/// coordinate.
pub fn flatness_probe(field: &GridField2D, axis: Axis) -> FlatnessStats {
    let osc = |vals: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        hi - lo
    };
    let per_line: Vec<f64> = match axis {
        Axis::X => (0..field.ny)
            .map(|j| osc(&mut (0..field.nx).map(|i| field.get(i, j))))
            .collect(),
        Axis::Y => (0..field.nx)
            .map(|i| osc(&mut (0..field.ny).map(|j| field.get(i, j))))
            .collect(),
    };
    let sup = per_line.iter().copied().fold(0.0, f64::max);
    let mean = per_line.iter().sum::<f64>() / per_line.len() as f64;
    FlatnessStats { axis, per_line, sup, mean }
}
