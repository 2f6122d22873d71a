//! Reaction terms and explicit candidate profiles.
//!
//! A [`Profile1D`] is a piecewise-smooth function of one variable built from a small set of
//! closed-form [`Shape`]s. Junctions between pieces are classified once, at construction: a
//! jump in the first derivative larger than [`CORNER_THRESHOLD`] makes a [`Corner`], anything
//! smaller is a weak junction that is checked classically from both sides.

use std::f64::consts::SQRT_2;
use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::operator::SymmetricMatrix;

/// `1/√3`, the monotonicity window of `u − u³`.
pub const ALLEN_CAHN_DELTA: f64 = 0.577_350_269_189_625_7;

/// Slope jumps above this are corners.
pub const CORNER_THRESHOLD: f64 = 1e-9;

/// Classical evaluations closer than this to a singular point are refused.
pub const CORNER_CLEARANCE: f64 = 1e-7;

const CONTINUITY_TOLERANCE: f64 = 1e-12;
const DELTA_SAMPLES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Reaction {
    /// `u − u³`
    AllenCahn,
    /// `a·u + b·|u|^(γ−1)·u`
    Power { a: f64, b: f64, gamma: f64 },
    /// `slope·u`; covers `f ≡ 0` and the dissipative `f(u) = −u`.
    Linear { slope: f64 },
}

/// A reaction term `f` together with its derivative and monotonicity window `δ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Nonlinearity {
    name: String,
    reaction: Reaction,
    delta: f64,
}

impl Nonlinearity {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn reaction(&self) -> Reaction {
        self.reaction
    }

    /// Radius of the window `(−δ, δ)` on which `f` is nondecreasing and positive on `(0, δ)`.
    /// Zero for terms that do not satisfy those assumptions at all.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn f(&self, u: f64) -> f64 {
        match self.reaction {
            Reaction::AllenCahn => u - u * u * u,
            Reaction::Power { a, b, gamma } => a * u + b * u.abs().powf(gamma - 1.0) * u,
            Reaction::Linear { slope } => slope * u,
        }
    }

    pub fn fprime(&self, u: f64) -> f64 {
        match self.reaction {
            Reaction::AllenCahn => 1.0 - 3.0 * u * u,
            Reaction::Power { a, b, gamma } => a + b * gamma * u.abs().powf(gamma - 1.0),
            Reaction::Linear { slope } => slope,
        }
    }

    /// `sup |f'|` sampled on `[lo, hi]`.
    pub fn sup_abs_fprime(&self, lo: f64, hi: f64) -> f64 {
        let n = 2000;
        (0..=n)
            .map(|i| self.fprime(lo + (hi - lo) * i as f64 / n as f64).abs())
            .fold(0.0, f64::max)
    }

    /// `f ≡ 0`. Not an admissible radial nonlinearity (`δ = 0`).
    pub fn zero() -> Self {
        Self::linear(0.0)
    }

    /// `f(u) = slope·u`, with `δ = 1` when `slope > 0` and `δ = 0` otherwise.
    pub fn linear(slope: f64) -> Self {
        Self {
            name: if slope == 0.0 { "zero".into() } else { format!("linear:{slope}") },
            reaction: Reaction::Linear { slope },
            delta: if slope > 0.0 { 1.0 } else { 0.0 },
        }
    }
}

impl fmt::Display for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

pub fn make_allen_cahn() -> Nonlinearity {
    Nonlinearity {
        name: "allen-cahn".into(),
        reaction: Reaction::AllenCahn,
        delta: ALLEN_CAHN_DELTA,
    }
}

/// `f(u) = a·u + b·|u|^(γ−1)·u` with `δ ≤ 1` found by bisection.
///
/// `δ` is the largest value for which `f' ≥ 0` on a 10⁴-point sample of `[−δ, δ]` and `f > 0`
/// on the positive half of that sample.
pub fn make_power_family(a: f64, b: f64, gamma: f64) -> Result<Nonlinearity> {
    if !(a.is_finite() && b.is_finite() && gamma.is_finite()) {
        return invalid("power family parameters must be finite");
    }
    if a <= 0.0 {
        return invalid(format!("power family needs a > 0, got {a}"));
    }
    if gamma <= 1.0 {
        return invalid(format!("power family needs gamma > 1, got {gamma}"));
    }
    let mut nl = Nonlinearity {
        name: format!("power:{a},{b},{gamma}"),
        reaction: Reaction::Power { a, b, gamma },
        delta: 0.0,
    };
    let admissible = |d: f64| {
        (0..DELTA_SAMPLES).all(|i| {
            let u = -d + 2.0 * d * i as f64 / (DELTA_SAMPLES - 1) as f64;
            nl.fprime(u) >= 0.0 && (u <= 0.0 || nl.f(u) > 0.0)
        })
    };
    let delta = if admissible(1.0) {
        1.0
    } else {
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if admissible(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    if delta <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "no window (0, delta) on which {} is nondecreasing and positive",
            nl.name
        )));
    }
    nl.delta = delta;
    Ok(nl)
}

/// Closed-form smooth building block of a profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum Shape {
    Constant { value: f64 },
    /// `sign · tanh((t − shift)/√2)`
    Tanh { sign: f64, shift: f64 },
    /// `(1 + exp(t²/k + log((1 − α²)/α²)))^(−1/2)`
    AllenCahnRadial { alpha: f64, k: u32 },
}

/// `(q, s) = (E/(1+E), 1/(1+E))` for `E = exp(g)`, without overflow.
fn logistic_pair(g: f64) -> (f64, f64) {
    if g >= 0.0 {
        let e = (-g).exp();
        (1.0 / (1.0 + e), e / (1.0 + e))
    } else {
        let e = g.exp();
        (e / (1.0 + e), 1.0 / (1.0 + e))
    }
}

impl Shape {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Shape::Constant { value } => value,
            Shape::Tanh { sign, shift } => sign * ((t - shift) / SQRT_2).tanh(),
            Shape::AllenCahnRadial { alpha, k } => {
                let (_, s) = logistic_pair(radial_exponent(alpha, k, t));
                s.sqrt()
            }
        }
    }

    pub fn d1(&self, t: f64) -> f64 {
        match *self {
            Shape::Constant { .. } => 0.0,
            Shape::Tanh { sign, shift } => {
                let w = ((t - shift) / SQRT_2).tanh();
                sign * (1.0 - w * w) / SQRT_2
            }
            Shape::AllenCahnRadial { alpha, k } => {
                let (q, s) = logistic_pair(radial_exponent(alpha, k, t));
                -(t / k as f64) * q * s.sqrt()
            }
        }
    }

    pub fn d2(&self, t: f64) -> f64 {
        match *self {
            Shape::Constant { .. } => 0.0,
            Shape::Tanh { sign, shift } => {
                let w = ((t - shift) / SQRT_2).tanh();
                sign * (w * w * w - w)
            }
            Shape::AllenCahnRadial { alpha, k } => {
                let k = k as f64;
                let (q, s) = logistic_pair(radial_exponent(alpha, k as u32, t));
                -(q * s.sqrt() / k) * (1.0 + (2.0 * t * t / k) * (s - 0.5 * q))
            }
        }
    }
}

fn radial_exponent(alpha: f64, k: u32, t: f64) -> f64 {
    t * t / k as f64 + ((1.0 - alpha * alpha) / (alpha * alpha)).ln()
}

/// One smooth piece on the open interval `(lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub shape: Shape,
}

/// A kink of a profile: equal one-sided values, distinct one-sided slopes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Corner {
    pub t0: f64,
    pub value: f64,
    pub slope_left: f64,
    pub slope_right: f64,
}

impl Corner {
    /// `s⁺ > s⁻`: no smooth function touches from above.
    pub fn is_convex(&self) -> bool {
        self.slope_right - self.slope_left > CORNER_THRESHOLD
    }

    /// `s⁺ < s⁻`: no smooth function touches from below.
    pub fn is_concave(&self) -> bool {
        self.slope_left - self.slope_right > CORNER_THRESHOLD
    }

    pub fn is_weak(&self) -> bool {
        !self.is_convex() && !self.is_concave()
    }
}

/// Piecewise-C² function on the real line.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Profile1D {
    pieces: Vec<Piece>,
    corners: Vec<Corner>,
    junctions: Vec<Corner>,
}

impl Profile1D {
    /// Assembles a profile from pieces that tile the line in increasing order.
    pub fn from_pieces(pieces: Vec<Piece>) -> Result<Self> {
        let (first, last) = match (pieces.first(), pieces.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return invalid("a profile needs at least one piece"),
        };
        if first.lo != f64::NEG_INFINITY || last.hi != f64::INFINITY {
            return invalid("pieces must cover the whole real line");
        }
        let mut corners = Vec::new();
        let mut junctions = Vec::new();
        for w in pieces.windows(2) {
            let (left, right) = (&w[0], &w[1]);
            if left.hi != right.lo || !(left.lo < left.hi) {
                return invalid(format!("pieces do not tile the line at {}", left.hi));
            }
            let t0 = left.hi;
            let (vl, vr) = (left.shape.value(t0), right.shape.value(t0));
            if (vl - vr).abs() > CONTINUITY_TOLERANCE {
                return invalid(format!("profile is discontinuous at {t0}: {vl} vs {vr}"));
            }
            let c = Corner {
                t0,
                value: vl,
                slope_left: left.shape.d1(t0),
                slope_right: right.shape.d1(t0),
            };
            if c.is_weak() {
                junctions.push(c);
            } else {
                corners.push(c);
            }
        }
        Ok(Self { pieces, corners, junctions })
    }

    pub fn smooth(shape: Shape) -> Self {
        Self {
            pieces: vec![Piece {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
                shape,
            }],
            corners: Vec::new(),
            junctions: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn constant(value: f64) -> Self {
        Self::smooth(Shape::Constant { value })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn corners(&self) -> &[Corner] {
        &self.corners
    }

    /// Junctions whose slope jump is below [`CORNER_THRESHOLD`].
    pub fn junctions(&self) -> &[Corner] {
        &self.junctions
    }

    pub fn is_cornerless(&self) -> bool {
        self.corners.is_empty()
    }

    /// Corners and weak junctions, sorted by location.
    pub fn singular_points(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.corners.iter().chain(&self.junctions).map(|c| c.t0).collect();
        pts.sort_by(f64::total_cmp);
        pts
    }

    fn nearest_singular(&self, t: f64) -> Option<f64> {
        self.corners
            .iter()
            .chain(&self.junctions)
            .map(|c| c.t0)
            .find(|t0| (t - t0).abs() < CORNER_CLEARANCE)
    }

    fn piece_index(&self, t: f64) -> usize {
        self.pieces.iter().position(|p| t < p.hi).unwrap_or(self.pieces.len() - 1)
    }

    /// Continuous everywhere, so evaluation at a junction is well defined.
    pub fn value(&self, t: f64) -> f64 {
        self.pieces[self.piece_index(t)].shape.value(t)
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        self.check_clear(t)?;
        Ok(self.pieces[self.piece_index(t)].shape.d1(t))
    }

    pub fn second_derivative(&self, t: f64) -> Result<f64> {
        self.check_clear(t)?;
        Ok(self.pieces[self.piece_index(t)].shape.d2(t))
    }

    /// One-sided second derivatives `(v''(t0⁻), v''(t0⁺))` at a piece boundary.
    pub fn one_sided_second_derivatives(&self, t0: f64) -> Result<(f64, f64)> {
        let i = self
            .pieces
            .windows(2)
            .position(|w| w[0].hi == t0)
            .ok_or_else(|| Error::InvalidInput(format!("{t0} is not a piece boundary")))?;
        Ok((self.pieces[i].shape.d2(t0), self.pieces[i + 1].shape.d2(t0)))
    }

    fn check_clear(&self, t: f64) -> Result<()> {
        match self.nearest_singular(t) {
            Some(t0) => Err(Error::OnCorner { t, t0 }),
            None => Ok(()),
        }
    }
}

/// Three-piece profile `−tanh((t+c)/√2)`, `0`, `tanh((t−c)/√2)` with plateau `[−c, c]`.
///
/// For `c = 0` the plateau is empty and the two outer pieces meet in a single convex corner
/// at the origin with slopes `∓1/√2`.
pub fn make_tanh_profile(c: f64) -> Result<Profile1D> {
    if !c.is_finite() || c < 0.0 {
        return invalid(format!("plateau half-width must be finite and >= 0, got {c}"));
    }
    let left = Shape::Tanh { sign: -1.0, shift: -c };
    let right = Shape::Tanh { sign: 1.0, shift: c };
    let pieces = if c == 0.0 {
        vec![
            Piece { lo: f64::NEG_INFINITY, hi: 0.0, shape: left },
            Piece { lo: 0.0, hi: f64::INFINITY, shape: right },
        ]
    } else {
        vec![
            Piece { lo: f64::NEG_INFINITY, hi: -c, shape: left },
            Piece { lo: -c, hi: c, shape: Shape::Constant { value: 0.0 } },
            Piece { lo: c, hi: f64::INFINITY, shape: right },
        ]
    };
    Profile1D::from_pieces(pieces)
}

/// `tanh(t/√2)` for `t ≥ 0`, zero otherwise.
pub fn make_halfline_tanh() -> Profile1D {
    Profile1D::from_pieces(vec![
        Piece { lo: f64::NEG_INFINITY, hi: 0.0, shape: Shape::Constant { value: 0.0 } },
        Piece { lo: 0.0, hi: f64::INFINITY, shape: Shape::Tanh { sign: 1.0, shift: 0.0 } },
    ])
    .expect("halfline profile is continuous")
}

/// `tanh(t/√2)` on the whole line.
pub fn make_plain_tanh() -> Profile1D {
    Profile1D::smooth(Shape::Tanh { sign: 1.0, shift: 0.0 })
}

/// Closed-form positive radial solution for `u − u³` with `v(0) = α`.
pub fn make_radial_closed_form(alpha: f64, k: u32) -> Result<Profile1D> {
    if !(alpha > 0.0 && alpha <= ALLEN_CAHN_DELTA) {
        return invalid(format!("alpha must lie in (0, 1/sqrt(3)], got {alpha}"));
    }
    if k == 0 {
        return invalid("operator index k must be at least 1");
    }
    Ok(Profile1D::smooth(Shape::AllenCahnRadial { alpha, k }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateKind {
    /// `u(x) = v(x_N)`
    OneDimensional,
    /// `u(x) = v(|x|)`
    Radial,
}

/// A profile embedded in `ℝᴺ` and paired with the equation `P⁻ₖ(D²u) + f(u) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Candidate {
    pub name: String,
    pub kind: CandidateKind,
    pub profile: Profile1D,
    pub ambient_dim: usize,
    pub op_index: usize,
    pub nonlinearity: Nonlinearity,
}

impl Candidate {
    pub fn new(
        name: impl Into<String>,
        kind: CandidateKind,
        profile: Profile1D,
        ambient_dim: usize,
        op_index: usize,
        nonlinearity: Nonlinearity,
    ) -> Result<Self> {
        if ambient_dim < 2 {
            return invalid(format!("ambient dimension must be at least 2, got {ambient_dim}"));
        }
        if op_index == 0 || op_index >= ambient_dim {
            return invalid(format!(
                "operator index k = {op_index} must satisfy 1 <= k <= N-1 = {}",
                ambient_dim - 1
            ));
        }
        if kind == CandidateKind::Radial {
            if !(profile.corners().is_empty() && profile.junctions().is_empty()) {
                return Err(Error::Unsupported(
                    "radial candidates with kinks on spheres are not supported".into(),
                ));
            }
            let slope = profile.derivative(0.0)?;
            if slope.abs() > 1e-12 {
                return Err(Error::Singular(format!("radial profile has v'(0) = {slope} != 0")));
            }
        }
        Ok(Self {
            name: name.into(),
            kind,
            profile,
            ambient_dim,
            op_index,
            nonlinearity,
        })
    }

    /// Point of `ℝᴺ` at which the profile parameter equals `t`.
    pub fn point(&self, t: f64) -> Vec<f64> {
        let mut x = vec![0.0; self.ambient_dim];
        match self.kind {
            CandidateKind::OneDimensional => x[self.ambient_dim - 1] = t,
            CandidateKind::Radial => x[0] = t,
        }
        x
    }
}

/// Hessian of the embedded candidate at `x`.
///
/// One-dimensional candidates give `diag(0, …, 0, v''(x_N))`. Radial candidates give
/// `v''(r) x̂x̂ᵀ + (v'(r)/r)(I − x̂x̂ᵀ)`, and `v''(0)·I` at the origin.
pub fn hessian_of_candidate(c: &Candidate, x: &[f64]) -> Result<SymmetricMatrix> {
    let n = c.ambient_dim;
    if x.len() != n {
        return invalid(format!("point has {} coordinates, expected {n}", x.len()));
    }
    match c.kind {
        CandidateKind::OneDimensional => {
            let mut d = vec![0.0; n];
            d[n - 1] = c.profile.second_derivative(x[n - 1])?;
            SymmetricMatrix::diagonal(&d)
        }
        CandidateKind::Radial => {
            let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let vpp = c.profile.second_derivative(r)?;
            if r == 0.0 {
                return SymmetricMatrix::diagonal(&vec![vpp; n]);
            }
            let tangential = c.profile.derivative(r)? / r;
            let mut rows = vec![vec![0.0; n]; n];
            for (i, row) in rows.iter_mut().enumerate() {
                for (j, entry) in row.iter_mut().enumerate() {
                    let radial = x[i] * x[j] / (r * r);
                    let id = if i == j { 1.0 } else { 0.0 };
                    *entry = vpp * radial + tangential * (id - radial);
                }
            }
            // symmetrize exactly; the products above can differ in the last bit
            for i in 0..n {
                for j in 0..i {
                    rows[i][j] = rows[j][i];
                }
            }
            SymmetricMatrix::from_rows(&rows)
        }
    }
}

/// Named members of the built-in catalog.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum CatalogEntry {
    HalflineTanh,
    PlainTanh,
    TanhShifted { c: f64 },
    RadialClosed { alpha: f64, k: u32 },
    Zero,
}

fn parse_numbers(args: &str, expected: usize, name: &str) -> Result<Vec<f64>> {
    let vals: Vec<f64> = args
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidInput(format!("bad parameters in '{name}': {e}")))?;
    if vals.len() != expected {
        return invalid(format!("'{name}' expects {expected} parameter(s), got {}", vals.len()));
    }
    Ok(vals)
}

fn parse_index(v: f64, name: &str) -> Result<u32> {
    if v.fract() != 0.0 || v < 1.0 || v > u32::MAX as f64 {
        return invalid(format!("'{name}': k must be a positive integer, got {v}"));
    }
    Ok(v as u32)
}

impl CatalogEntry {
    /// Parses names such as `halfline-tanh`, `tanh-shifted:1` or `radial-closed:0.5,1`.
    pub fn parse(name: &str) -> Result<Self> {
        let (head, args) = match name.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (name, None),
        };
        match (head, args) {
            ("halfline-tanh", None) => Ok(Self::HalflineTanh),
            ("plain-tanh", None) => Ok(Self::PlainTanh),
            ("zero", None) => Ok(Self::Zero),
            ("tanh-shifted", Some(a)) => {
                let v = parse_numbers(a, 1, name)?;
                Ok(Self::TanhShifted { c: v[0] })
            }
            ("radial-closed", Some(a)) => {
                let v = parse_numbers(a, 2, name)?;
                Ok(Self::RadialClosed { alpha: v[0], k: parse_index(v[1], name)? })
            }
            _ => invalid(format!("unknown candidate '{name}'")),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Self::HalflineTanh => "halfline-tanh",
            Self::PlainTanh => "plain-tanh",
            Self::TanhShifted { .. } => "tanh-shifted",
            Self::RadialClosed { .. } => "radial-closed",
            Self::Zero => "zero",
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::TanhShifted { c } => format!("tanh-shifted:{c}"),
            Self::RadialClosed { alpha, k } => format!("radial-closed:{alpha},{k}"),
            other => other.family().to_string(),
        }
    }

    pub fn kind(&self) -> CandidateKind {
        match self {
            Self::RadialClosed { .. } => CandidateKind::Radial,
            _ => CandidateKind::OneDimensional,
        }
    }

    pub fn profile(&self) -> Result<Profile1D> {
        match *self {
            Self::HalflineTanh => Ok(make_halfline_tanh()),
            Self::PlainTanh => Ok(make_plain_tanh()),
            Self::TanhShifted { c } => make_tanh_profile(c),
            Self::RadialClosed { alpha, k } => make_radial_closed_form(alpha, k),
            Self::Zero => Ok(Profile1D::zero()),
        }
    }

    /// Candidate for `P⁻ₖ(D²u) + u − u³ = 0` in `ℝᴺ`.
    pub fn candidate(&self, ambient_dim: usize, op_index: usize) -> Result<Candidate> {
        Candidate::new(
            self.name(),
            self.kind(),
            self.profile()?,
            ambient_dim,
            op_index,
            make_allen_cahn(),
        )
    }

    /// Representative names listed by the CLI `catalog` command.
    pub fn listing() -> Vec<&'static str> {
        vec!["halfline-tanh", "plain-tanh", "tanh-shifted:c", "radial-closed:alpha,k", "zero"]
    }
}

/// Parses `allen-cahn`, `power:a,b,gamma`, `linear:s` or `zero`.
pub fn parse_nonlinearity(name: &str) -> Result<Nonlinearity> {
    let (head, args) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    match (head, args) {
        ("allen-cahn", None) => Ok(make_allen_cahn()),
        ("zero", None) => Ok(Nonlinearity::zero()),
        ("power", Some(a)) => {
            let v = parse_numbers(a, 3, name)?;
            make_power_family(v[0], v[1], v[2])
        }
        ("linear", Some(a)) => Ok(Nonlinearity::linear(parse_numbers(a, 1, name)?[0])),
        _ => invalid(format!("unknown nonlinearity '{name}'")),
    }
}

pub fn nonlinearity_listing() -> Vec<&'static str> {
    vec!["allen-cahn", "power:a,b,gamma", "linear:s", "zero"]
}
