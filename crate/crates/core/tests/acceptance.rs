//! End-to-end acceptance suite. Prints one `[PASS]`/`[FAIL]` line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use rand::Rng;
use serde_json::{json, Value};

use common::{allen_cahn_radial, linear_radial, oracle_pminus, random_psd, random_symmetric, rng};
use trunclap_core::eigenbound::{area_estimate, mu_upper_bound_report, DomainQn};
use trunclap_core::fd::{discrete_comparison_test, solve_dirichlet, sup_error, BoxSpec, SolveConfig};
use trunclap_core::models::{make_allen_cahn, make_halfline_tanh, Nonlinearity, ALLEN_CAHN_DELTA};
use trunclap_core::operator::add_rank_one_top;
use trunclap_core::radial::{check_ordering, integrate_ivp, residual_of_radial, QuadratureInverse};
use trunclap_core::viscosity::{default_grid, verify_and_analyze, Monotonicity, SignPattern, DEFAULT_TOLERANCE};
use trunclap_core::{pminus_k, CandidateKind, CatalogEntry, Status};

struct Outcome {
    pass: bool,
    summary: String,
    report: Value,
}

type Criterion = fn() -> Outcome;

fn check(failures: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        failures.push(what());
    }
}

fn finish(failures: Vec<String>, summary: String, report: Value) -> Outcome {
    let pass = failures.is_empty();
    let summary = if pass { summary } else { format!("{summary}; {}", failures.join("; ")) };
    Outcome { pass, summary, report }
}

fn c1_operator_oracle() -> Outcome {
    let mut rng = rng(1);
    let mut failures = Vec::new();
    let mut worst_oracle: f64 = 0.0;
    let mut worst_ellip: f64 = f64::NEG_INFINITY;
    let mut worst_rank_one: f64 = 0.0;
    for trial in 0..1000 {
        let n = 2 + trial % 5;
        let m = random_symmetric(&mut rng, n, 1.0);
        for k in 1..=n {
            let err = (pminus_k(&m, k).unwrap() - oracle_pminus(&m, k)).abs();
            worst_oracle = worst_oracle.max(err);
        }
        let y = m.add(&random_psd(&mut rng, n, 1.0)).unwrap();
        let t = rng.gen_range(0.0..10.0);
        let lifted = add_rank_one_top(&m, t).unwrap();
        for k in 1..=n {
            worst_ellip = worst_ellip.max(pminus_k(&m, k).unwrap() - pminus_k(&y, k).unwrap());
            if k < n {
                worst_rank_one =
                    worst_rank_one.max((pminus_k(&lifted, k).unwrap() - pminus_k(&m, k).unwrap()).abs());
            }
        }
    }
    check(&mut failures, worst_oracle <= 1e-10, || format!("oracle error {worst_oracle:e}"));
    check(&mut failures, worst_ellip <= 1e-10, || format!("ellipticity violation {worst_ellip:e}"));
    check(&mut failures, worst_rank_one <= 1e-10, || format!("rank-one drift {worst_rank_one:e}"));
    finish(
        failures,
        format!(
            "1000 matrices: max |pminus - oracle| = {worst_oracle:.2e}, max P(X)-P(X+PSD) = {worst_ellip:.2e}, max rank-one drift = {worst_rank_one:.2e}"
        ),
        json!({"oracle": worst_oracle, "ellipticity": worst_ellip, "rank_one": worst_rank_one}),
    )
}

fn c2_catalog_verdicts() -> Outcome {
    let grid = default_grid(CandidateKind::OneDimensional);
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    let mut runs = 0;
    let names = ["halfline-tanh", "tanh-shifted:0.5", "tanh-shifted:1", "tanh-shifted:2", "plain-tanh", "zero"];
    for name in names {
        let entry = CatalogEntry::parse(name).unwrap();
        for n in [2usize, 3, 5] {
            for k in 1..n {
                let r = verify_and_analyze(&entry.candidate(n, k).unwrap(), &grid, DEFAULT_TOLERANCE).unwrap();
                runs += 1;
                let ok = if name == "plain-tanh" {
                    let negative_witness = r
                        .witnesses
                        .iter()
                        .any(|w| w.status == Status::Fail && w.t < 0.0 && w.residual.is_some_and(|x| x < -DEFAULT_TOLERANCE));
                    let positive_side_clean = r.witnesses.iter().all(|w| w.status == Status::Pass || w.t < 0.0);
                    r.subsolution == Status::Fail
                        && r.supersolution == Status::Pass
                        && negative_witness
                        && positive_side_clean
                } else {
                    r.solution == Status::Pass
                };
                check(&mut failures, ok, || format!("{name} N={n} k={k} gave {:?}/{:?}", r.subsolution, r.supersolution));
                rows.push(json!({"candidate": name, "N": n, "k": k, "sub": r.subsolution, "super": r.supersolution, "witnesses": r.witnesses.len()}));
            }
        }
    }
    finish(failures, format!("{runs} verifications match the expected verdicts"), Value::Array(rows))
}

fn c3_meta_tests() -> Outcome {
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    let one_d = default_grid(CandidateKind::OneDimensional);
    let radial = default_grid(CandidateKind::Radial);
    let names = [
        "halfline-tanh",
        "plain-tanh",
        "tanh-shifted:0",
        "tanh-shifted:0.5",
        "tanh-shifted:1",
        "tanh-shifted:2",
        "zero",
        "radial-closed:0.1,1",
        "radial-closed:0.5,1",
        "radial-closed:0.5,2",
    ];
    let (mut sub_checked, mut cornerless_checked, mut plateau_checked) = (0, 0, 0);
    for name in names {
        let entry = CatalogEntry::parse(name).unwrap();
        let grid = if entry.kind() == CandidateKind::Radial { &radial } else { &one_d };
        for n in [2usize, 3] {
            let k = match entry {
                CatalogEntry::RadialClosed { k, .. } => k as usize,
                _ => 1,
            };
            if k >= n {
                continue;
            }
            let c = entry.candidate(n, k).unwrap();
            let r = verify_and_analyze(&c, grid, DEFAULT_TOLERANCE).unwrap();
            let s = &r.structure;
            if r.subsolution.is_pass() {
                sub_checked += 1;
                check(&mut failures, s.min >= -1e-12, || format!("{name}: subsolution with min {}", s.min));
            }
            let nonzero = s.sign != SignPattern::Zero;
            if entry.kind() == CandidateKind::OneDimensional && c.profile.is_cornerless() && nonzero {
                cornerless_checked += 1;
                check(&mut failures, !r.solution.is_pass(), || format!("{name}: cornerless nonzero solution"));
            }
            let nonneg = matches!(s.sign, SignPattern::Zero | SignPattern::Nonnegative | SignPattern::Positive);
            let nondecreasing = matches!(s.monotonicity, Monotonicity::Constant | Monotonicity::Nondecreasing);
            if entry.kind() == CandidateKind::OneDimensional && r.supersolution.is_pass() && nonneg && nondecreasing {
                plateau_checked += 1;
                let left = s.plateau.is_some_and(|p| p.reaches_left_end);
                check(&mut failures, left, || format!("{name}: no left zero plateau"));
            }
            check(&mut failures, !s.has_violation(), || format!("{name}: structure flag violated"));
            rows.push(json!({"candidate": name, "N": n, "sub": r.subsolution, "super": r.supersolution, "structure": s}));
        }
    }
    check(&mut failures, sub_checked > 0 && cornerless_checked > 0 && plateau_checked > 0, || {
        "a structural check had no applicable candidate".into()
    });
    finish(
        failures,
        format!(
            "nonnegativity on {sub_checked} subsolutions, non-solution on {cornerless_checked} cornerless profiles, left plateau on {plateau_checked} monotone supersolutions"
        ),
        Value::Array(rows),
    )
}

fn c4_radial_agreement() -> Outcome {
    let f = make_allen_cahn();
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    let mut worst_residual: f64 = 0.0;
    for alpha in [0.1, 0.3, 0.5, ALLEN_CAHN_DELTA] {
        for k in [1usize, 2] {
            let run = integrate_ivp(&f, alpha, k, 1e-3, 10.0).unwrap();
            let mut inv = QuadratureInverse::new(&f, alpha, k).unwrap();
            let (mut rk_vs_exact, mut q_vs_exact, mut rk_vs_q): (f64, f64, f64) = (0.0, 0.0, 0.0);
            for s in &run.samples {
                let exact = allen_cahn_radial(alpha, k as f64, s.r);
                let q = inv.invert(s.r).unwrap();
                rk_vs_exact = rk_vs_exact.max((s.v - exact).abs());
                q_vs_exact = q_vs_exact.max((q - exact).abs());
                rk_vs_q = rk_vs_q.max((s.v - q).abs());
            }
            let pair = rk_vs_exact.max(q_vs_exact).max(rk_vs_q);
            worst = worst.max(pair);
            check(&mut failures, pair <= 1e-6, || format!("alpha={alpha} k={k}: sup error {pair:e}"));
            let ordering = check_ordering(&run, &f);
            check(&mut failures, ordering.holds, || format!("alpha={alpha} k={k}: ordering v'' >= v'/r fails at {} samples", ordering.violations.len()));
            let residual = residual_of_radial(&run, &f, 3).unwrap();
            worst_residual = worst_residual.max(residual);
            check(&mut failures, residual <= 1e-8, || format!("alpha={alpha} k={k}: residual {residual:e}"));
            rows.push(json!({"alpha": alpha, "k": k, "rk4_vs_exact": rk_vs_exact, "quad_vs_exact": q_vs_exact, "rk4_vs_quad": rk_vs_q, "residual_N3": residual}));
        }
    }
    let run = integrate_ivp(&f, 0.5, 1, 1e-3, 10.0).unwrap();
    let v1 = run.samples[1000].v;
    let target = 1.0 / (1.0 + 3.0 * std::f64::consts::E).sqrt();
    check(&mut failures, (run.samples[1000].r - 1.0).abs() < 1e-12 && (v1 - target).abs() <= 1e-6, || {
        format!("v(1) = {v1}, expected {target}")
    });
    finish(
        failures,
        format!("8 runs: max pairwise sup error {worst:.2e}, max residual (N=3) {worst_residual:.2e}, v(1) = {v1:.8}"),
        json!({"runs": rows, "v1": v1}),
    )
}

fn c5_linear_oracle() -> Outcome {
    let f = Nonlinearity::linear(1.0);
    let alpha = 0.5;
    let sup_err = |k: usize, step: f64| {
        let run = integrate_ivp(&f, alpha, k, step, 10.0).unwrap();
        run.samples
            .iter()
            .map(|s| (s.v - linear_radial(alpha, k as f64, s.r)).abs())
            .fold(0.0, f64::max)
    };
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    for k in [1usize, 2] {
        let e = sup_err(k, 1e-3);
        check(&mut failures, e <= 1e-8, || format!("k={k}: sup error {e:e} at step 1e-3"));
        // above the roundoff floor the fourth-order rate must show
        let (coarse, fine) = (sup_err(k, 4e-3), sup_err(k, 2e-3));
        check(&mut failures, coarse / fine >= 8.0, || format!("k={k}: ratio {} for 4e-3 -> 2e-3", coarse / fine));
        rows.push(json!({"k": k, "err_1e-3": e, "err_4e-3": coarse, "err_2e-3": fine}));
    }
    let (e1, e2) = (sup_err(1, 1e-3), sup_err(1, 5e-4));
    check(&mut failures, e1 / e2 >= 8.0, || format!("k=1: halving 1e-3 gives ratio {}", e1 / e2));
    finish(
        failures,
        format!("sup error at 1e-3: {e1:.2e} (k=1); halving ratio {:.1}", e1 / e2),
        json!({"runs": rows, "halving_ratio_k1": e1 / e2}),
    )
}

fn c6_eigenbound() -> Outcome {
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    let mut worst: f64 = f64::NEG_INFINITY;
    for n in [1u32, 2, 5, 10] {
        match mu_upper_bound_report(n, 200) {
            Ok(cert) => {
                let scan = &cert.scan;
                worst = worst.max(scan.max_residual);
                check(&mut failures, scan.regions.all_exercised(), || format!("n={n}: regions {:?}", scan.regions));
                check(&mut failures, scan.w_negative_interior, || format!("n={n}: w not negative"));
                check(&mut failures, cert.mu_upper_bound == 1.0, || format!("n={n}: bound {}", cert.mu_upper_bound));
                let exact = DomainQn::new(n).unwrap().exact_area();
                let est = area_estimate(n, 100_000).unwrap();
                check(&mut failures, (est / exact - 1.0).abs() <= 0.01, || format!("n={n}: area {est} vs {exact}"));
                // Jacobian oracle: (s, t) ↦ ((s+t)/n, s−t) has |det| = 2/n on a π × π square
                check(&mut failures, (exact - PI * PI * 2.0 / n as f64).abs() < 1e-12, || format!("n={n}: area formula"));
                rows.push(json!({"n": n, "certificate": cert, "area_estimate": est}));
            }
            Err(e) => failures.push(format!("n={n}: {e}")),
        }
    }
    finish(
        failures,
        format!("n in {{1,2,5,10}} certified, max residual {worst:.2e}"),
        Value::Array(rows),
    )
}

fn c7_fd() -> Outcome {
    let f = make_allen_cahn();
    let p = make_halfline_tanh();
    let mut failures = Vec::new();
    let mut errors = Vec::new();
    let mut solves = Vec::new();
    for (h, radius) in [(0.05, 2u32), (0.025, 3)] {
        let cfg = SolveConfig { stencil_radius: radius, ..SolveConfig::default() };
        let out = solve_dirichlet(&f, BoxSpec::square(-2.0, 2.0, h), |_, y| p.value(y), &cfg).unwrap();
        let err = sup_error(&out.field, |_, y| p.value(y));
        check(&mut failures, out.converged, || format!("h={h}: not converged"));
        errors.push(err);
        solves.push(json!({"h": h, "radius": radius, "iterations": out.iterations, "sup_error": err, "final_update": out.final_update}));
    }
    check(&mut failures, errors[0] <= 0.05, || format!("sup error {} at h=0.05", errors[0]));
    check(&mut failures, errors[1] < errors[0], || format!("error did not decrease: {errors:?}"));

    let mut rng = rng(20);
    let mut comparisons = Vec::new();
    for (idx, reaction) in [Nonlinearity::zero(), Nonlinearity::linear(-1.0)].iter().enumerate() {
        for seed in 0..20 {
            let coeffs: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.5..1.5)).collect();
            let lift = rng.gen_range(0.0..0.5);
            let bump = rng.gen_range(0.0..0.5);
            let c = coeffs.clone();
            let g1 = move |x: f64, y: f64| c[0] * (c[1] * x).sin() + c[2] * (c[3] * y).cos() + c[4] * x * y + c[5];
            let g2 = {
                let g1 = g1.clone();
                move |x: f64, y: f64| g1(x, y) + lift + bump * (x * y).sin().powi(2)
            };
            let out = discrete_comparison_test(reaction, BoxSpec::square(-1.0, 1.0, 0.1), g1, g2, &SolveConfig::default())
                .unwrap();
            check(&mut failures, out.passed && out.converged, || format!("comparison {idx}/{seed}: {out:?}"));
            comparisons.push(json!({"f": reaction.name(), "seed": seed, "max_violation": out.max_violation}));
        }
    }
    finish(
        failures,
        format!(
            "sup error {:.2e} (h=0.05, R=2) -> {:.2e} (h=0.025, R=3); 40 ordered comparisons pass",
            errors[0], errors[1]
        ),
        json!({"solves": solves, "comparisons": comparisons}),
    )
}

const CRITERIA: [(&str, Criterion); 7] = [
    ("C1 operator oracle equivalence", c1_operator_oracle),
    ("C2 catalog verdicts", c2_catalog_verdicts),
    ("C3 structural meta-tests", c3_meta_tests),
    ("C4 radial agreement", c4_radial_agreement),
    ("C5 analytic ODE oracle", c5_linear_oracle),
    ("C6 eigenvalue bound", c6_eigenbound),
    ("C7 finite-difference manufactured solution", c7_fd),
];

fn main() {
    let mut all_pass = true;
    let mut first_reports = Vec::new();
    for (label, criterion) in CRITERIA {
        let start = Instant::now();
        let out = criterion();
        let elapsed = start.elapsed().as_secs_f64();
        println!("[{}] {label} ({elapsed:.2} s): {}", if out.pass { "PASS" } else { "FAIL" }, out.summary);
        all_pass &= out.pass;
        first_reports.push(serde_json::to_string(&out.report).expect("reports serialize"));
    }

    let start = Instant::now();
    let mut mismatched = Vec::new();
    for ((label, criterion), first) in CRITERIA.iter().zip(&first_reports) {
        let again = serde_json::to_string(&criterion().report).expect("reports serialize");
        if &again != first {
            mismatched.push(label.split_whitespace().next().unwrap_or(label));
        }
    }
    let bytes: usize = first_reports.iter().map(String::len).sum();
    let det_pass = mismatched.is_empty();
    all_pass &= det_pass;
    println!(
        "[{}] C8 determinism ({:.2} s): {}",
        if det_pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64(),
        if det_pass {
            format!("rerun of C1-C7 reproduced {bytes} report bytes exactly")
        } else {
            format!("reports differ for {}", mismatched.join(", "))
        }
    );

    if !all_pass {
        std::process::exit(1);
    }
}
