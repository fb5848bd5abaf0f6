//! Acceptance suite. One test per criterion; each prints a single
//! `criterion N: PASS|FAIL ...` line before asserting.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use std::process::Command;

use flexling::approx::{
    build_rulebase_from_function, containment_probe, containment_rate, refine_study, space_report,
    Evaluator, StudyOptions,
};
use flexling::baseline::{
    cri_compose, discretize, mamdani, mamdani_pipeline, zadeh_implication, Grid,
};
use flexling::inference::{at_method, degree_inference, natural_inference};
use flexling::rules::{FlexibleRule, Polarity};
use flexling::values::{make_flexible_value, make_triangular_partition, FlexibleValue, Interval, Universe};
use flexling_cli::config::load_config;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn report(n: u32, ok: bool, detail: String) {
    println!("criterion {n}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn canonical_rule() -> FlexibleRule {
    load_config(&fixture("canonical.json")).unwrap().rules["R"].clone()
}

/// Random value on `u` with the knot ordering respected; beta > 1 only when
/// the peak is interior to a core of positive width.
fn random_value(rng: &mut ChaCha8Rng, name: &str, u: &Universe) -> FlexibleValue {
    let mut steps = [0.0; 6];
    for s in &mut steps {
        *s = rng.gen_range(0.05..4.0);
    }
    let core_w = if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.05..4.0) };
    let span: f64 = steps.iter().sum::<f64>() + core_w;
    let s_lo = u.lo() + rng.gen_range(0.1..(u.width() - span - 0.1));
    let e_lo = s_lo + steps[0];
    let c_lo = e_lo + steps[1];
    let c_hi = c_lo + core_w;
    let e_hi = c_hi + steps[2];
    let s_hi = e_hi + steps[3];
    let peak = if core_w > 0.0 { c_lo + rng.gen_range(0.1..0.9) * core_w } else { c_lo };
    let beta = if core_w > 0.0 && rng.gen_bool(0.5) { rng.gen_range(1.0..3.0) } else { 1.0 };
    make_flexible_value(
        name,
        u,
        Interval::new(s_lo, s_hi),
        Interval::new(c_lo, c_hi),
        peak,
        beta,
        Some(Interval::new(e_lo, e_hi)),
    )
    .unwrap()
}

fn random_rule(rng: &mut ChaCha8Rng) -> FlexibleRule {
    let u = Universe::new("U", 0.0, 40.0).unwrap();
    let v = Universe::new("V", 0.0, 40.0).unwrap();
    let a = random_value(rng, "A", &u);
    let b = random_value(rng, "B", &v);
    let polarity = if rng.gen_bool(0.5) { Polarity::Increasing } else { Polarity::Decreasing };
    FlexibleRule::single("R", a, b, polarity)
}

#[test]
fn criterion_1_orientation_sensitivity() {
    let rule = canonical_rule();
    let left = degree_inference(&rule, 4.0).unwrap().numeric.unwrap();
    let right = degree_inference(&rule, 6.0).unwrap().numeric.unwrap();
    let grid = Grid::new(rule.consequent().universe(), 1001).unwrap();
    let m_left = mamdani_pipeline(std::slice::from_ref(&rule), 4.0, &grid).unwrap();
    let m_right = mamdani_pipeline(std::slice::from_ref(&rule), 6.0, &grid).unwrap();
    let tol = 2.0 * grid.spacing();
    let ok = (left - 40.0).abs() <= 1e-9
        && (right - 60.0).abs() <= 1e-9
        && (m_left - m_right).abs() <= tol
        && (m_left - 50.0).abs() <= tol
        && (m_right - 50.0).abs() <= tol;
    report(
        1,
        ok,
        format!("degree 4->{left} 6->{right}; mamdani 4->{m_left} 6->{m_right} (tol {tol})"),
    );
}

#[test]
fn criterion_2_extended_core_containment() {
    const N: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut degree_hits, mut at_hits, mut degree_cases) = (0usize, 0usize, 0usize);
    for _ in 0..N {
        let rule = random_rule(&mut rng);
        let a = rule.condition().unwrap();
        let e = a.extended_core();
        let x0 = rng.gen_range(e.lo..=e.hi);
        if at_method(&rule, x0).unwrap().contained() {
            at_hits += 1;
        }
        if a.consistency(x0) > 0.5 {
            degree_cases += 1;
            if degree_inference(&rule, x0).unwrap().contained() {
                degree_hits += 1;
            }
        }
    }

    // generated rulebases, rate over 10^4 inputs each
    let xu = Universe::new("x", 0.0, TAU).unwrap();
    let yu = Universe::new("y", -2.0, 2.0).unwrap();
    let rb = build_rulebase_from_function(|x| x.sin() + 0.3 * (3.0 * x).cos(), &xu, &yu, 13).unwrap();
    let at_rate = containment_rate(Evaluator::At, &rb.rules, N, 42).unwrap();
    let degree_rate = containment_rate(Evaluator::Degree, &rb.rules, N, 42).unwrap();

    // crafted two-rule base where the centroid escapes both extended cores
    let cfg = load_config(&fixture("mamdani_escape.json")).unwrap();
    let rules: Vec<FlexibleRule> = cfg.rules.values().cloned().collect();
    let mamdani_ev = Evaluator::Mamdani { grid_points: cfg.grid_points };
    let mamdani_rate = containment_rate(mamdani_ev, &rules, N, cfg.seed).unwrap();
    let probe = containment_probe(mamdani_ev, &rules, 4.9).unwrap();
    let flexible_on_fixture = containment_rate(Evaluator::At, &rules, N, cfg.seed).unwrap();

    let ok = at_hits == N
        && degree_hits == degree_cases
        && degree_cases > N / 2
        && at_rate == 1.0
        && degree_rate == 1.0
        && flexible_on_fixture == 1.0
        && mamdani_rate < 1.0
        && !probe.contained;
    report(
        2,
        ok,
        format!(
            "random rules at {at_hits}/{N}, degree {degree_hits}/{degree_cases}; rulebase at {at_rate} degree {degree_rate}; \
             fixture mamdani rate {mamdani_rate}, x0=4.9 -> y={:?} contained={}",
            probe.y, probe.contained
        ),
    );
}

#[test]
fn criterion_3_truth_ranges() {
    const N: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut violations = Vec::new();
    let mut near_true_checked = 0usize;
    for i in 0..N {
        let rule = random_rule(&mut rng);
        let a = rule.condition().unwrap();
        let s = a.support();
        let x0 = rng.gen_range(s.lo - 1.0..=s.hi + 1.0);
        let t = a.consistency(x0);
        if t > 0.5 {
            near_true_checked += 1;
            let (_, nt) = natural_inference(&rule, &[x0]).unwrap().unwrap();
            let d = degree_inference(&rule, x0).unwrap().truth;
            let at = at_method(&rule, x0).unwrap().truth;
            for tr in [nt, d, at] {
                if !(tr.value() > 0.5 && tr.value() <= tr.beta()) {
                    violations.push(format!("case {i}: near-true degree {}", tr.value()));
                }
            }
        } else if natural_inference(&rule, &[x0]).unwrap().is_some()
            || degree_inference(&rule, x0).is_ok()
        {
            violations.push(format!("case {i}: fired on degree {t}"));
        }
        let grid = Grid::new(rule.consequent().universe(), 51).unwrap();
        if let Ok(out) = mamdani(std::slice::from_ref(&rule), x0, &grid) {
            let in_unit = |d: f64| (0.0..=1.0).contains(&d);
            if !in_unit(out.firing) || !out.aggregate.degrees().iter().all(|&d| in_unit(d)) {
                violations.push(format!("case {i}: fuzzy degree outside [0,1]"));
            }
        }
    }
    report(
        3,
        violations.is_empty() && near_true_checked > 1000,
        format!("{near_true_checked} near-true cases, {} violations {:?}", violations.len(), violations.first()),
    );
}

/// Sup-min composition of the Zadeh relation evaluated cell by cell.
fn oracle_cri(fact: &[f64], a: &[f64], b: &[f64]) -> Vec<f64> {
    b.iter()
        .map(|&bj| {
            let mut best = 0.0f64;
            for (fi, ai) in fact.iter().zip(a) {
                let r = f64::max(1.0 - ai, f64::min(*ai, bj));
                best = best.max(f64::min(*fi, r));
            }
            best
        })
        .collect()
}

#[test]
fn criterion_4_cri_correctness() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut max_dev = 0.0f64;
    let mut zadeh_mismatch = 0usize;
    for _ in 0..50 {
        let rule = random_rule(&mut rng);
        let fact_value = random_value(&mut rng, "F", rule.condition().unwrap().universe());
        let gx = Grid::new(rule.condition().unwrap().universe(), 51).unwrap();
        let gy = Grid::new(rule.consequent().universe(), 51).unwrap();
        let a = discretize(rule.condition().unwrap(), &gx).unwrap();
        let b = discretize(rule.consequent(), &gy).unwrap();
        let fact = discretize(&fact_value, &gx).unwrap();
        let r = zadeh_implication(&a, &b);
        for (i, ai) in a.degrees().iter().enumerate() {
            for (j, bj) in b.degrees().iter().enumerate() {
                if r.get(i, j) != (1.0 - ai).max(ai.min(*bj)) {
                    zadeh_mismatch += 1;
                }
            }
        }
        let got = cri_compose(&fact, &r).unwrap();
        let want = oracle_cri(fact.degrees(), a.degrees(), b.degrees());
        for (g, w) in got.degrees().iter().zip(&want) {
            max_dev = max_dev.max((g - w).abs());
        }
    }
    report(
        4,
        max_dev <= 1e-12 && zadeh_mismatch == 0,
        format!("max |cri - oracle| = {max_dev:e}, zadeh cell mismatches = {zadeh_mismatch}"),
    );
}

#[test]
fn criterion_5_space_ordering() {
    let rep = space_report(&canonical_rule()).unwrap();
    let canonical_ok = (rep.area_extcore_product - 122.5).abs() <= 1e-9
        && (rep.area_support_product - 360.0).abs() <= 1e-9
        && (rep.area_implication_region - 760.0).abs() <= 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = 0usize;
    for _ in 0..1000 {
        let rule = random_rule(&mut rng);
        let a = rule.condition().unwrap();
        assert!(a.support().width() < a.universe().width());
        let r = space_report(&rule).unwrap();
        if !(r.area_extcore_product <= r.area_support_product
            && r.area_support_product <= r.area_implication_region)
        {
            bad += 1;
        }
    }
    report(
        5,
        canonical_ok && bad == 0,
        format!(
            "canonical {} / {} / {}; ordering violations {bad}/1000",
            rep.area_extcore_product, rep.area_support_product, rep.area_implication_region
        ),
    );
}

#[test]
fn criterion_6_universal_approximation_trend() {
    let schedule = [5, 9, 17, 33];
    let opts = StudyOptions::default();
    let xu = Universe::new("x", 0.0, TAU).unwrap();
    let yu = Universe::new("y", -1.0, 1.0).unwrap();
    let sin_rows = refine_study(f64::sin, &xu, &yu, &schedule, Evaluator::Interpolation, opts).unwrap();
    let ratios: Vec<f64> = sin_rows
        .windows(2)
        .map(|w| w[0].sup_error / w[1].sup_error)
        .collect();
    let decreasing = sin_rows.windows(2).all(|w| w[1].sup_error < w[0].sup_error);
    let ratios_ok = ratios.iter().all(|&r| r >= 3.0);

    let iu = Universe::new("x", 0.0, 10.0).unwrap();
    let id_rows = refine_study(|x| x, &iu, &iu, &schedule, Evaluator::Interpolation, opts).unwrap();
    let identity_ok = id_rows.iter().all(|r| r.sup_error <= 1e-12);

    let sups: Vec<f64> = sin_rows.iter().map(|r| r.sup_error).collect();
    report(
        6,
        decreasing && ratios_ok && identity_ok,
        format!(
            "sin sup errors {sups:?}, step ratios {ratios:?} (need >= 3), strictly decreasing {decreasing}; identity exact {identity_ok}"
        ),
    );
}

#[test]
fn criterion_7_partition_complementarity() {
    let mut worst = 0.0f64;
    for (lo, hi) in [(0.0, 10.0), (-3.0, 7.5), (0.0, TAU), (100.0, 1000.0)] {
        let u = Universe::new("U", lo, hi).unwrap();
        for n in 2..=25 {
            let p = make_triangular_partition(&u, n).unwrap();
            for k in 0..1000 {
                let x = lo + (hi - lo) * k as f64 / 999.0;
                let sum: f64 = p.values().iter().map(|v| v.membership(x)).sum();
                worst = worst.max((sum - 1.0).abs());
            }
        }
    }
    report(7, worst <= 1e-9, format!("max |sum - 1| = {worst:e}"));
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_flexling"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_8_determinism() {
    let config = fixture("canonical.json");
    let config = config.to_str().unwrap();
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        let compare = run_cli(&["compare", "-c", config, "--rule", "R", "--x0", "3,4,5,6,7", "--out", out]);
        let approx = run_cli(&[
            "approx", "-c", config, "--function", "sin", "--schedule", "5,9,17", "--evaluator", "parallel",
            "--seed", "7", "--out", out,
        ]);
        assert!(compare.status.success() && approx.status.success());
        let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
        outputs.push((read("compare_R.csv"), read("approx_sin_parallel.csv"), compare.stdout, approx.stdout));
    }
    let ok = outputs[0] == outputs[1] && !outputs[0].0.is_empty() && !outputs[0].1.is_empty();
    report(
        8,
        ok,
        format!("compare csv {} bytes, approx csv {} bytes, identical across runs: {ok}", outputs[0].0.len(), outputs[0].1.len()),
    );
}
