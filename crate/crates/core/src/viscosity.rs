//! Viscosity verification of embedded profiles for `P⁻ₖ(D²u) + f(u) = 0`.
//!
//! Away from kinks a candidate is classical and the residual `P⁻ₖ(D²u) + f(u)` is evaluated
//! directly: a subsolution needs `residual ≥ −tol`, a supersolution `residual ≤ tol`. At a
//! corner the test-function classes are decided by the slope gap alone:
//!
//! * convex corner (`s⁺ > s⁻`): nothing touches from above, so the subsolution test is vacuous.
//!   Any lower test has a tangential maximum there, so `λ_{N−1}(D²φ) ≤ 0` and `P⁻ₖ(D²φ) ≤ 0`
//!   for `k ≤ N−1`; the flat linear test reaches `P⁻ₖ = 0`. The supersolution test therefore
//!   passes exactly when `f(value) ≤ tol`.
//! * concave corner (`s⁺ < s⁻`): nothing touches from below. Upper tests with flat tangential
//!   part and arbitrarily negative normal curvature exist, so the subsolution test fails.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{hessian_of_candidate, Candidate, CandidateKind, Corner, CORNER_CLEARANCE};
use crate::operator::pminus_k;

pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Largest number of smooth-region witnesses kept per failing property.
pub const MAX_SMOOTH_WITNESSES: usize = 8;

const PLATEAU_TOLERANCE: f64 = 1e-12;
const MONOTONE_SLACK: f64 = 1e-14;

pub const RULE_SMOOTH: &str = "smooth: classical residual";
pub const RULE_WEAK_CORNER: &str = "weak-corner: two-sided classical residual";
pub const RULE_CONVEX_SUB: &str = "convex-corner: no upper test function (vacuous)";
pub const RULE_CONVEX_SUPER: &str =
    "convex-corner: tangential maximum of lower tests gives lambda_(N-1) <= 0 (Courant-Fischer); flat test needs f(value) <= tol";
pub const RULE_CONVEX_SUPER_DERIVED: &str =
    "convex-corner: flat tangential lower test forces P_k = 0 > -f(value) (derived rule)";
pub const RULE_CONCAVE_SUB: &str =
    "concave-corner: upper test with unbounded negative normal curvature drives P_k below -f(value)";
pub const RULE_CONCAVE_SUPER: &str = "concave-corner: no lower test function (vacuous)";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Smooth,
    CornerLeft,
    CornerRight,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualSample {
    /// Profile parameter: `x_N` for one-dimensional candidates, `|x|` for radial ones.
    pub t: f64,
    pub point: Vec<f64>,
    pub residual: f64,
    pub side: Side,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Status::Pass
    }

    fn and(self, other: Status) -> Status {
        Status::from_bool(self.is_pass() && other.is_pass())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Subsolution,
    Supersolution,
}

/// Evidence for one property at one location, tagged with the rule that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub t: f64,
    pub residual: Option<f64>,
    pub rule: String,
    pub property: Property,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub subsolution: Status,
    pub supersolution: Status,
    pub solution: Status,
    pub witnesses: Vec<Witness>,
    pub tolerance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CornerKind {
    Convex,
    Concave,
    Weak,
}

/// Outcome of the corner rules at one kink (or of the two-sided check at a weak junction).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CornerCheck {
    pub corner: Corner,
    pub kind: CornerKind,
    pub subsolution: Status,
    pub supersolution: Status,
    pub witnesses: Vec<Witness>,
    /// Populated only for weak junctions.
    pub samples: Vec<ResidualSample>,
}

fn residual_at(c: &Candidate, point: &[f64], value: f64) -> Result<f64> {
    let h = hessian_of_candidate(c, point)?;
    Ok(pminus_k(&h, c.op_index)? + c.nonlinearity.f(value))
}

/// Classical residuals `P⁻ₖ(D²u) + f(u)` on a grid of profile parameters.
pub fn scan_smooth_residuals(c: &Candidate, grid: &[f64]) -> Result<Vec<ResidualSample>> {
    grid.par_iter()
        .map(|&t| {
            if !t.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite grid point {t}")));
            }
            if c.kind == CandidateKind::Radial && t < 0.0 {
                return Err(Error::InvalidInput(format!("radial grid point r = {t} < 0")));
            }
            let point = c.point(t);
            let residual = residual_at(c, &point, c.profile.value(t))?;
            Ok(ResidualSample {
                t,
                point,
                residual,
                side: Side::Smooth,
            })
        })
        .collect()
}

/// Applies the corner rules at `corner`.
pub fn check_corner(c: &Candidate, corner: &Corner, tol: f64) -> Result<CornerCheck> {
    if c.kind == CandidateKind::Radial {
        return Err(Error::Unsupported("corner rules on spheres".into()));
    }
    let t = corner.t0;
    let witness = |property, status, rule: &str, residual| Witness {
        t,
        residual,
        rule: rule.to_string(),
        property,
        status,
    };
    if corner.is_weak() {
        let (left, right) = c.profile.one_sided_second_derivatives(t)?;
        let f = c.nonlinearity.f(corner.value);
        let mut samples = Vec::with_capacity(2);
        for (side, vpp) in [(Side::CornerLeft, left), (Side::CornerRight, right)] {
            let mut d = vec![0.0; c.ambient_dim];
            d[c.ambient_dim - 1] = vpp;
            let h = crate::operator::SymmetricMatrix::diagonal(&d)?;
            samples.push(ResidualSample {
                t,
                point: c.point(t),
                residual: pminus_k(&h, c.op_index)? + f,
                side,
            });
        }
        let sub = Status::from_bool(samples.iter().all(|s| s.residual >= -tol));
        let sup = Status::from_bool(samples.iter().all(|s| s.residual <= tol));
        let worst_low = samples.iter().map(|s| s.residual).fold(f64::INFINITY, f64::min);
        let worst_high = samples.iter().map(|s| s.residual).fold(f64::NEG_INFINITY, f64::max);
        return Ok(CornerCheck {
            corner: *corner,
            kind: CornerKind::Weak,
            subsolution: sub,
            supersolution: sup,
            witnesses: vec![
                witness(Property::Subsolution, sub, RULE_WEAK_CORNER, Some(worst_low)),
                witness(Property::Supersolution, sup, RULE_WEAK_CORNER, Some(worst_high)),
            ],
            samples,
        });
    }

    let fv = c.nonlinearity.f(corner.value);
    let (kind, sub, sup, witnesses) = if corner.is_convex() {
        let sup = Status::from_bool(fv <= tol);
        let rule = if sup.is_pass() { RULE_CONVEX_SUPER } else { RULE_CONVEX_SUPER_DERIVED };
        (
            CornerKind::Convex,
            Status::Pass,
            sup,
            vec![
                witness(Property::Subsolution, Status::Pass, RULE_CONVEX_SUB, None),
                witness(Property::Supersolution, sup, rule, Some(fv)),
            ],
        )
    } else {
        (
            CornerKind::Concave,
            Status::Fail,
            Status::Pass,
            vec![
                witness(Property::Subsolution, Status::Fail, RULE_CONCAVE_SUB, None),
                witness(Property::Supersolution, Status::Pass, RULE_CONCAVE_SUPER, None),
            ],
        )
    };
    Ok(CornerCheck {
        corner: *corner,
        kind,
        subsolution: sub,
        supersolution: sup,
        witnesses,
        samples: Vec::new(),
    })
}

/// Uniform grid `start, start + step, …` up to and including `end` (within rounding).
pub fn uniform_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && start.is_finite() && end.is_finite() && end >= start) {
        return Err(Error::InvalidInput(format!(
            "bad grid [{start}, {end}] with step {step}"
        )));
    }
    let n = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

/// Default scan: `[−20, 20]` at step `1e−2` for one-dimensional candidates, `[1e−3, 20]` for
/// radial ones.
pub fn default_grid(kind: CandidateKind) -> Vec<f64> {
    match kind {
        CandidateKind::OneDimensional => uniform_grid(-20.0, 20.0, 1e-2),
        CandidateKind::Radial => uniform_grid(1e-3, 20.0, 1e-2),
    }
    .expect("default grid parameters are valid")
}

fn smooth_witnesses(samples: &[ResidualSample], property: Property, tol: f64) -> Vec<Witness> {
    let violation = |s: &ResidualSample| match property {
        Property::Subsolution => -tol - s.residual,
        Property::Supersolution => s.residual - tol,
    };
    let mut failing: Vec<&ResidualSample> = samples.iter().filter(|s| violation(s) > 0.0).collect();
    failing.sort_by(|a, b| violation(b).total_cmp(&violation(a)).then(a.t.total_cmp(&b.t)));
    failing
        .into_iter()
        .take(MAX_SMOOTH_WITNESSES)
        .map(|s| Witness {
            t: s.t,
            residual: Some(s.residual),
            rule: RULE_SMOOTH.to_string(),
            property,
            status: Status::Fail,
        })
        .collect()
}

/// Full verdict: smooth scan on the grid points clear of kinks, plus the corner rules.
pub fn verify(c: &Candidate, grid: &[f64], tol: f64) -> Result<Verdict> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::InvalidInput(format!("tolerance must be finite and >= 0, got {tol}")));
    }
    let singular = c.profile.singular_points();
    let clear: Vec<f64> = grid
        .iter()
        .copied()
        .filter(|t| singular.iter().all(|t0| (t - t0).abs() >= CORNER_CLEARANCE))
        .collect();
    let samples = scan_smooth_residuals(c, &clear)?;

    let mut witnesses = Vec::new();
    let mut sub = Status::from_bool(samples.iter().all(|s| s.residual >= -tol));
    let mut sup = Status::from_bool(samples.iter().all(|s| s.residual <= tol));

    let mut kinks: Vec<&Corner> = c.profile.corners().iter().chain(c.profile.junctions()).collect();
    kinks.sort_by(|a, b| a.t0.total_cmp(&b.t0));
    for corner in kinks {
        let check = check_corner(c, corner, tol)?;
        sub = sub.and(check.subsolution);
        sup = sup.and(check.supersolution);
        witnesses.extend(check.witnesses);
    }
    witnesses.extend(smooth_witnesses(&samples, Property::Subsolution, tol));
    witnesses.extend(smooth_witnesses(&samples, Property::Supersolution, tol));

    Ok(Verdict {
        subsolution: sub,
        supersolution: sup,
        solution: sub.and(sup),
        witnesses,
        tolerance: tol,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignPattern {
    Zero,
    Positive,
    Nonnegative,
    Negative,
    Nonpositive,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Constant,
    Nondecreasing,
    Nonincreasing,
    NonMonotone,
}

/// Longest run of sampled zeros.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Plateau {
    pub lo: f64,
    pub hi: f64,
    pub reaches_left_end: bool,
    pub reaches_right_end: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlagStatus {
    Consistent,
    Violated,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsistencyFlag {
    pub check: &'static str,
    pub status: FlagStatus,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureReport {
    pub min: f64,
    pub max: f64,
    pub sign: SignPattern,
    pub monotonicity: Monotonicity,
    pub plateau: Option<Plateau>,
    pub flags: Vec<ConsistencyFlag>,
}

impl StructureReport {
    pub fn has_violation(&self) -> bool {
        self.flags.iter().any(|f| f.status == FlagStatus::Violated)
    }
}

pub const FLAG_SUB_NONNEGATIVE: &str = "subsolution-nonnegative";
pub const FLAG_NO_POSITIVE_SUPER: &str = "no-positive-supersolution";
pub const FLAG_MONOTONE_PLATEAU: &str = "monotone-supersolution-left-plateau";

fn longest_zero_run(grid: &[f64], values: &[f64]) -> Option<Plateau> {
    let mut best: Option<(usize, usize)> = None;
    let mut start = None;
    for i in 0..=values.len() {
        let zero = i < values.len() && values[i].abs() <= PLATEAU_TOLERANCE;
        match (zero, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                if best.map_or(true, |(bs, be)| i - s > be - bs) {
                    best = Some((s, i));
                }
                start = None;
            }
            _ => {}
        }
    }
    best.map(|(s, e)| Plateau {
        lo: grid[s],
        hi: grid[e - 1],
        reaches_left_end: s == 0,
        reaches_right_end: e == values.len(),
    })
}

/// Sign, monotonicity and zero-plateau structure of a candidate on `grid`, with the
/// consistency checks that one-dimensional verdicts must satisfy:
///
/// * a subsolution is nonnegative;
/// * no positive function is a supersolution;
/// * a nonnegative nondecreasing supersolution vanishes on a left half-line.
pub fn analyze_profile_structure(
    c: &Candidate,
    verdict: &Verdict,
    grid: &[f64],
) -> Result<StructureReport> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty grid".into()));
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    let values: Vec<f64> = sorted.iter().map(|&t| c.profile.value(t)).collect();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let sign = if min.abs() <= PLATEAU_TOLERANCE && max.abs() <= PLATEAU_TOLERANCE {
        SignPattern::Zero
    } else if min > 0.0 {
        SignPattern::Positive
    } else if min >= -PLATEAU_TOLERANCE {
        SignPattern::Nonnegative
    } else if max < 0.0 {
        SignPattern::Negative
    } else if max <= PLATEAU_TOLERANCE {
        SignPattern::Nonpositive
    } else {
        SignPattern::Mixed
    };

    let nondecreasing = values.windows(2).all(|w| w[1] >= w[0] - MONOTONE_SLACK);
    let nonincreasing = values.windows(2).all(|w| w[1] <= w[0] + MONOTONE_SLACK);
    let monotonicity = match (nondecreasing, nonincreasing) {
        (true, true) => Monotonicity::Constant,
        (true, false) => Monotonicity::Nondecreasing,
        (false, true) => Monotonicity::Nonincreasing,
        (false, false) => Monotonicity::NonMonotone,
    };
    let plateau = longest_zero_run(&sorted, &values);

    let tol = verdict.tolerance;
    let one_d = c.kind == CandidateKind::OneDimensional;
    let na = |check, note: &str| ConsistencyFlag {
        check,
        status: FlagStatus::NotApplicable,
        note: note.to_string(),
    };
    let flag = |check, ok: bool, good: &str, bad: &str| ConsistencyFlag {
        check,
        status: if ok { FlagStatus::Consistent } else { FlagStatus::Violated },
        note: if ok { good } else { bad }.to_string(),
    };

    let mut flags = Vec::with_capacity(3);
    if !one_d {
        for check in [FLAG_SUB_NONNEGATIVE, FLAG_NO_POSITIVE_SUPER, FLAG_MONOTONE_PLATEAU] {
            flags.push(na(check, "radial candidate"));
        }
    } else {
        flags.push(if verdict.subsolution.is_pass() {
            flag(
                FLAG_SUB_NONNEGATIVE,
                min >= -tol,
                "subsolution is nonnegative",
                "subsolution takes negative values: engine or profile bug",
            )
        } else {
            na(FLAG_SUB_NONNEGATIVE, "subsolution test failed")
        });
        flags.push(if verdict.supersolution.is_pass() {
            flag(
                FLAG_NO_POSITIVE_SUPER,
                min <= 0.0,
                "supersolution attains a nonpositive value",
                "positive one-dimensional supersolution: engine or profile bug",
            )
        } else {
            na(FLAG_NO_POSITIVE_SUPER, "supersolution test failed")
        });
        flags.push(if verdict.supersolution.is_pass() && min >= -tol && nondecreasing {
            flag(
                FLAG_MONOTONE_PLATEAU,
                plateau.is_some_and(|p| p.reaches_left_end),
                "zero plateau reaches the left end of the scan",
                "nondecreasing nonnegative supersolution without a left zero plateau",
            )
        } else {
            na(FLAG_MONOTONE_PLATEAU, "not a nonnegative nondecreasing supersolution")
        });
    }

    Ok(StructureReport {
        min,
        max,
        sign,
        monotonicity,
        plateau,
        flags,
    })
}

/// Serializable bundle of a verification run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictReport {
    pub candidate: String,
    #[serde(rename = "N")]
    pub ambient_dim: usize,
    pub k: usize,
    pub tol: f64,
    pub subsolution: Status,
    pub supersolution: Status,
    pub solution: Status,
    pub witnesses: Vec<Witness>,
    pub structure: StructureReport,
}

impl VerdictReport {
    pub fn new(c: &Candidate, verdict: Verdict, structure: StructureReport) -> Self {
        Self {
            candidate: c.name.clone(),
            ambient_dim: c.ambient_dim,
            k: c.op_index,
            tol: verdict.tolerance,
            subsolution: verdict.subsolution,
            supersolution: verdict.supersolution,
            solution: verdict.solution,
            witnesses: verdict.witnesses,
            structure,
        }
    }
}

/// `verify` followed by `analyze_profile_structure` on the same grid.
pub fn verify_and_analyze(c: &Candidate, grid: &[f64], tol: f64) -> Result<VerdictReport> {
    let verdict = verify(c, grid, tol)?;
    let structure = analyze_profile_structure(c, &verdict, grid)?;
    Ok(VerdictReport::new(c, verdict, structure))
}
