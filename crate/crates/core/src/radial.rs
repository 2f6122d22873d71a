//! Positive radial solutions through the reduction `v'(r) + (r/k) f(v(r)) = 0`, `v(0) = α`.
//!
//! Two independent routes compute `v`: a fixed-step RK4 trajectory and the quadrature form
//! `v(r) = F⁻¹(r²/2k)` with `F(s) = ∫_s^α du/f(u)`. Whenever `v'' ≥ v'/r`, the Hessian of
//! `v(|x|)` has its `k` smallest eigenvalues equal to `v'/r`, and the ODE is exactly the PDE.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::models::Nonlinearity;
use crate::operator::{pminus_k, SymmetricMatrix};

pub const DEFAULT_STEP: f64 = 1e-3;
pub const ORDERING_TOLERANCE: f64 = 1e-9;

/// `σ = log(α/s)` is not pushed past this; `α·e^(−σ)` would underflow.
const SIGMA_MAX: f64 = 700.0;
const SIMPSON_TOLERANCE: f64 = 1e-14;
const SIMPSON_MAX_DEPTH: u32 = 50;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadialSample {
    pub r: f64,
    pub v: f64,
    pub vp: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadialDiagnostics {
    pub monotone_decreasing: bool,
    pub positive: bool,
    pub ordering_holds: bool,
    /// `v(rmax)`
    pub tail_below: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadialRun {
    pub nonlinearity: String,
    pub alpha: f64,
    pub k: usize,
    pub step: f64,
    pub rmax: f64,
    pub samples: Vec<RadialSample>,
    pub diagnostics: RadialDiagnostics,
}

impl RadialRun {
    /// `v''` from the ODE: `v'' = −(1/k)(f(v) + r f'(v) v')`.
    pub fn second_derivative(&self, f: &Nonlinearity, s: &RadialSample) -> f64 {
        -(f.f(s.v) + s.r * f.fprime(s.v) * s.vp) / self.k as f64
    }

    /// Writes `r,v,vp` rows.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "r,v,vp")?;
        for s in &self.samples {
            writeln!(out, "{},{},{}", s.r, s.v, s.vp)?;
        }
        Ok(())
    }
}

fn check_window(f: &Nonlinearity, alpha: f64, k: usize) -> Result<()> {
    if k == 0 {
        return invalid("operator index k must be at least 1");
    }
    if !(alpha > 0.0 && alpha <= f.delta()) {
        return invalid(format!(
            "alpha = {alpha} outside the admissible window (0, {}] of {}",
            f.delta(),
            f.name()
        ));
    }
    Ok(())
}

/// Classical RK4 for the radial IVP on the uniform grid `r_i = i·step`, `i·step` up to `rmax`.
///
/// The window is closed at `δ`: `f` is still nondecreasing on `[0, δ]`, which is all the
/// monotonicity argument needs, and the closed-form family includes `α = δ` for `u − u³`.
pub fn integrate_ivp(
    f: &Nonlinearity,
    alpha: f64,
    k: usize,
    step: f64,
    rmax: f64,
) -> Result<RadialRun> {
    check_window(f, alpha, k)?;
    integrate_ivp_unchecked(f, alpha, k, step, rmax)
}

/// [`integrate_ivp`] without the `α ≤ δ` window check, for exploring initial values outside it.
pub fn integrate_ivp_unchecked(
    f: &Nonlinearity,
    alpha: f64,
    k: usize,
    step: f64,
    rmax: f64,
) -> Result<RadialRun> {
    if k == 0 {
        return invalid("operator index k must be at least 1");
    }
    if !(step > 0.0 && step.is_finite()) {
        return invalid(format!("step must be positive, got {step}"));
    }
    if !(rmax >= 1.0 && rmax.is_finite()) {
        return invalid(format!("rmax must be at least 1, got {rmax}"));
    }
    if !alpha.is_finite() {
        return invalid("alpha must be finite");
    }
    let kf = k as f64;
    let rhs = |r: f64, v: f64| -(r / kf) * f.f(v);
    let n = ((rmax / step) - 1e-9).ceil() as usize;

    let mut samples = Vec::with_capacity(n + 1);
    let mut v = alpha;
    samples.push(RadialSample { r: 0.0, v, vp: 0.0 });
    for i in 0..n {
        let r = i as f64 * step;
        let k1 = rhs(r, v);
        let k2 = rhs(r + 0.5 * step, v + 0.5 * step * k1);
        let k3 = rhs(r + 0.5 * step, v + 0.5 * step * k2);
        let k4 = rhs(r + step, v + step * k3);
        v += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        let r_next = (i + 1) as f64 * step;
        if !v.is_finite() {
            return Err(Error::BlowUp { last_r: r });
        }
        samples.push(RadialSample {
            r: r_next,
            v,
            vp: rhs(r_next, v),
        });
    }

    let mut run = RadialRun {
        nonlinearity: f.name().to_string(),
        alpha,
        k,
        step,
        rmax,
        diagnostics: RadialDiagnostics {
            monotone_decreasing: samples.windows(2).all(|w| w[1].v < w[0].v),
            positive: samples.iter().all(|s| s.v > 0.0),
            ordering_holds: false,
            tail_below: samples.last().map_or(alpha, |s| s.v),
        },
        samples,
    };
    run.diagnostics.ordering_holds = check_ordering(&run, f).holds;
    Ok(run)
}

fn simpson_step(g: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = g(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(
    g: &impl Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let (lm, flm, left) = simpson_step(g, a, fa, m, fm);
    let (rm, frm, right) = simpson_step(g, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        // Richardson extrapolation of the two Simpson levels
        return left + right + delta / 15.0;
    }
    adaptive_simpson(g, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
        + adaptive_simpson(g, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
}

fn integrate(g: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (fa, fb) = (g(a), g(b));
    let (m, fm, whole) = simpson_step(g, a, fa, b, fb);
    adaptive_simpson(g, a, fa, b, fb, m, fm, whole, tol, SIMPSON_MAX_DEPTH)
}

/// Inverts `F(s) = ∫_s^α du/f(u)` for a fixed `(f, α, k)`.
///
/// With `u = α·e^(−σ)` the integral becomes `G(σ) = ∫_0^σ u/f(u) dσ'`, whose integrand tends
/// to `1/f'(0)` as `u → 0` instead of blowing up. `G` is tabulated on unit intervals of `σ`
/// and refined with safeguarded Newton steps inside the bracketing interval.
pub struct QuadratureInverse<'a> {
    f: &'a Nonlinearity,
    alpha: f64,
    k: usize,
    /// `G(j)` for `j = 0, 1, …`
    table: Vec<f64>,
    exhausted: bool,
}

impl<'a> QuadratureInverse<'a> {
    pub fn new(f: &'a Nonlinearity, alpha: f64, k: usize) -> Result<Self> {
        check_window(f, alpha, k)?;
        Ok(Self {
            f,
            alpha,
            k,
            table: vec![0.0],
            exhausted: false,
        })
    }

    fn integrand(&self, sigma: f64) -> f64 {
        let u = self.alpha * (-sigma).exp();
        u / self.f.f(u)
    }

    fn g_from(&self, a: f64, b: f64) -> f64 {
        integrate(&|s| self.integrand(s), a, b, SIMPSON_TOLERANCE)
    }

    /// Extends the table until it reaches `target` or `σ_max`.
    fn extend_to(&mut self, target: f64) -> Result<()> {
        while !self.exhausted && *self.table.last().unwrap() < target {
            let j = (self.table.len() - 1) as f64;
            if j + 1.0 > SIGMA_MAX {
                self.exhausted = true;
                break;
            }
            let piece = self.g_from(j, j + 1.0);
            if !(piece.is_finite() && piece > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "1/f is not positive and finite on (0, {}] for {}",
                    self.alpha,
                    self.f.name()
                )));
            }
            let last = *self.table.last().unwrap();
            self.table.push(last + piece);
        }
        Ok(())
    }

    /// `v(r)`.
    pub fn invert(&mut self, r: f64) -> Result<f64> {
        if !(r >= 0.0 && r.is_finite()) {
            return invalid(format!("radius must be finite and >= 0, got {r}"));
        }
        let target = r * r / (2.0 * self.k as f64);
        if target == 0.0 {
            return Ok(self.alpha);
        }
        self.extend_to(target)?;
        let top = *self.table.last().unwrap();
        if top < target {
            // F stays bounded: the profile would reach zero at a finite radius
            return Err(Error::OutOfRange {
                r,
                r_max: (2.0 * self.k as f64 * top).sqrt(),
            });
        }
        let j = self.table.partition_point(|&g| g < target).max(1) - 1;
        let (lo0, base) = (j as f64, self.table[j]);
        let (mut lo, mut hi) = (lo0, lo0 + 1.0);
        let mut sigma = lo0 + 0.5;
        for _ in 0..100 {
            let value = base + self.g_from(lo0, sigma) - target;
            if value > 0.0 {
                hi = sigma;
            } else {
                lo = sigma;
            }
            let newton = sigma - value / self.integrand(sigma);
            let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if (next - sigma).abs() <= 1e-15 * (1.0 + sigma) || hi - lo <= 1e-15 * (1.0 + sigma) {
                sigma = next;
                break;
            }
            sigma = next;
        }
        Ok(self.alpha * (-sigma).exp())
    }
}

/// `v_α(r) = F⁻¹(r²/2k)` for a single radius.
pub fn quadrature_inverse(f: &Nonlinearity, alpha: f64, k: usize, r: f64) -> Result<f64> {
    QuadratureInverse::new(f, alpha, k)?.invert(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrderingViolation {
    pub r: f64,
    pub vpp: f64,
    pub vp_over_r: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderingReport {
    pub holds: bool,
    pub violations: Vec<OrderingViolation>,
}

/// Checks `v''(r) ≥ v'(r)/r` (to `1e−9`) at every sample with `r > 0`.
pub fn check_ordering(run: &RadialRun, f: &Nonlinearity) -> OrderingReport {
    let violations: Vec<OrderingViolation> = run
        .samples
        .iter()
        .filter(|s| s.r > 0.0)
        .filter_map(|s| {
            let vpp = run.second_derivative(f, s);
            let vp_over_r = s.vp / s.r;
            (vpp < vp_over_r - ORDERING_TOLERANCE).then_some(OrderingViolation { r: s.r, vpp, vp_over_r })
        })
        .collect();
    OrderingReport {
        holds: violations.is_empty(),
        violations,
    }
}

/// `max |P⁻ₖ(D²u) + f(u)|` over the run for `u(x) = v(|x|)` in `ℝᴺ`.
pub fn residual_of_radial(run: &RadialRun, f: &Nonlinearity, ambient_dim: usize) -> Result<f64> {
    if run.k >= ambient_dim {
        return invalid(format!(
            "operator index k = {} must satisfy k <= N-1 = {}",
            run.k,
            ambient_dim.saturating_sub(1)
        ));
    }
    if let Some(v) = check_ordering(run, f).violations.first() {
        return Err(Error::ReductionInvalid { r: v.r });
    }
    let mut worst: f64 = 0.0;
    for s in &run.samples {
        let vpp = run.second_derivative(f, s);
        let eig = if s.r == 0.0 {
            vec![vpp; ambient_dim]
        } else {
            let mut e = vec![s.vp / s.r; ambient_dim];
            e[0] = vpp;
            e
        };
        let h = SymmetricMatrix::diagonal(&eig)?;
        worst = worst.max((pminus_k(&h, run.k)? + f.f(s.v)).abs());
    }
    Ok(worst)
}

/// Largest `|v_RK4 − v_quadrature|` over the samples of `run`.
pub fn quadrature_agreement(run: &RadialRun, f: &Nonlinearity) -> Result<f64> {
    let mut inv = QuadratureInverse::new(f, run.alpha, run.k)?;
    let mut worst: f64 = 0.0;
    for s in &run.samples {
        worst = worst.max((inv.invert(s.r)? - s.v).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{make_allen_cahn, make_power_family, ALLEN_CAHN_DELTA};

    fn closed_form(alpha: f64, k: f64, r: f64) -> f64 {
        1.0 / (1.0 + (r * r / k + ((1.0 - alpha * alpha) / (alpha * alpha)).ln()).exp()).sqrt()
    }

    #[test]
    fn rk4_matches_allen_cahn_closed_form() {
        let f = make_allen_cahn();
        let run = integrate_ivp(&f, 0.5, 1, 1e-3, 2.0).unwrap();
        let at_one = run.samples[1000];
        assert!((at_one.r - 1.0).abs() < 1e-12);
        let exact = 1.0 / (1.0 + 3.0 * std::f64::consts::E).sqrt();
        assert!((at_one.v - exact).abs() < 1e-6);
        assert!((at_one.v - closed_form(0.5, 1.0, 1.0)).abs() < 1e-12);
    }

    #[test]
    fn initial_data() {
        let f = make_allen_cahn();
        let run = integrate_ivp(&f, 0.4, 2, 1e-3, 1.0).unwrap();
        let s0 = run.samples[0];
        assert_eq!((s0.r, s0.v, s0.vp), (0.0, 0.4, 0.0));
        assert!((run.second_derivative(&f, &s0) + f.f(0.4) / 2.0).abs() < 1e-15);
        assert!(run.samples.windows(2).all(|w| w[1].r > w[0].r));
        assert_eq!(run.samples.len(), 1001);
    }

    #[test]
    fn window_and_parameter_errors() {
        let f = make_allen_cahn();
        assert!(integrate_ivp(&f, 0.6, 1, 1e-3, 5.0).is_err());
        assert!(integrate_ivp(&f, 0.0, 1, 1e-3, 5.0).is_err());
        assert!(integrate_ivp(&f, 0.3, 1, 0.0, 5.0).is_err());
        assert!(integrate_ivp(&f, 0.3, 1, 1e-3, 0.5).is_err());
        assert!(integrate_ivp(&f, 0.3, 0, 1e-3, 5.0).is_err());
        assert!(integrate_ivp(&f, ALLEN_CAHN_DELTA, 1, 1e-3, 5.0).is_ok());
    }

    #[test]
    fn blow_up_is_reported() {
        // f(u) = -u grows the solution like exp(r^2/2k); overflows well before r = 30
        let f = crate::models::Nonlinearity::linear(-1.0);
        let err = integrate_ivp_unchecked(&f, 0.5, 1, 1e-2, 60.0).unwrap_err();
        assert!(matches!(err, Error::BlowUp { last_r } if last_r > 20.0 && last_r < 60.0));
    }

    #[test]
    fn quadrature_inverse_examples() {
        let ac = make_allen_cahn();
        assert_eq!(quadrature_inverse(&ac, 0.3, 1, 0.0).unwrap(), 0.3);
        let v = quadrature_inverse(&ac, 0.5, 1, 1.0).unwrap();
        assert!((v - closed_form(0.5, 1.0, 1.0)).abs() < 1e-12, "{v}");
        let lin = make_power_family(1.0, 0.0, 2.0).unwrap();
        let v = quadrature_inverse(&lin, 0.3, 2, 2.0).unwrap();
        assert!((v - 0.3 * (-1.0f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn quadrature_far_field_stays_accurate() {
        let ac = make_allen_cahn();
        let mut inv = QuadratureInverse::new(&ac, 0.1, 1).unwrap();
        for r in [3.0, 7.0, 10.0] {
            let exact = closed_form(0.1, 1.0, r);
            let got = inv.invert(r).unwrap();
            assert!(((got - exact) / exact).abs() < 1e-9, "r={r}: {got} vs {exact}");
        }
    }

    #[test]
    fn quadrature_range_is_capped() {
        // G(sigma) = sigma for f(u) = u; v would underflow beyond r = sqrt(2 * 700)
        let f = make_power_family(1.0, 0.0, 2.0).unwrap();
        let err = quadrature_inverse(&f, 0.5, 1, 40.0).unwrap_err();
        assert!(matches!(err, Error::OutOfRange { .. }));
    }

    #[test]
    fn ordering_for_linear_reaction_holds() {
        let f = make_power_family(1.0, 0.0, 2.0).unwrap();
        let run = integrate_ivp(&f, 0.3, 2, 1e-3, 5.0).unwrap();
        let report = check_ordering(&run, &f);
        assert!(report.holds);
        for s in run.samples.iter().skip(1).step_by(250) {
            let gap = run.second_derivative(&f, s) - s.vp / s.r;
            let exact = s.v * s.r * s.r / 4.0;
            assert!((gap - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn residual_of_radial_examples() {
        let ac = make_allen_cahn();
        let run = integrate_ivp(&ac, 0.5, 1, 1e-3, 10.0).unwrap();
        assert!(residual_of_radial(&run, &ac, 3).unwrap() <= 1e-8);
        assert!(residual_of_radial(&run, &ac, 1).is_err());
        let lin = make_power_family(1.0, 0.0, 2.0).unwrap();
        let run = integrate_ivp(&lin, 0.3, 2, 1e-3, 5.0).unwrap();
        assert!(residual_of_radial(&run, &lin, 3).unwrap() <= 1e-8);
        assert!(residual_of_radial(&run, &lin, 2).is_err());
    }

    #[test]
    fn csv_layout() {
        let ac = make_allen_cahn();
        let run = integrate_ivp(&ac, 0.5, 1, 0.5, 1.0).unwrap();
        let mut buf = Vec::new();
        run.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("r,v,vp"));
        assert_eq!(lines.next(), Some("0,0.5,0"));
        assert_eq!(text.lines().count(), 4);
    }
}
