//! Acceptance criteria, one line each. Exits non-zero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use dfspec::fixtures::{compare_columns, default_fixture_dir, load_fixture, Column, FixtureRow, Tolerances};
use dfspec::hft::{convergence_slopes, default_slope_ladder, hft_fd_check, state_report, StepPolicy};
use dfspec::oracle::{solve_potential, solve_radial, RadialGrid};
use dfspec::quantize::{
    action_integral_analytic, action_integral_numeric, master_integral_closed, master_integral_numeric,
    proper_rule_residual, riccati_ground,
};
use dfspec::spectrum::{energy, n_max};
use dfspec::units::AMU_EV;
use dfspec::{builtin_registry, CentrifugalMode, MoleculeParams, QuantumState, Registry};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn mol<'a>(reg: &'a Registry, name: &str) -> &'a MoleculeParams {
    reg.get(name).expect("builtin molecule")
}

fn fixtures(reg: &Registry) -> Vec<(MoleculeParams, Vec<FixtureRow>)> {
    let dir = default_fixture_dir();
    reg.iter()
        .map(|m| (m.clone(), load_fixture(&dir, &m.name).expect("fixture")))
        .collect()
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            out.passed = false;
            out.detail = format!("{}; runtime {:.2?} exceeds {:.0?}", out.detail, elapsed, limit);
        }
    }
    (out, elapsed)
}

fn energy_reproduction(reg: &Registry) -> Outcome {
    let tol = Tolerances::default();
    let mut cells = 0;
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for (m, rows) in fixtures(reg) {
        let rep = compare_columns(&m, &rows, &tol, &[Column::Energy]).expect("bound cells");
        cells += rep.rows;
        worst = worst.max(rep.max_for(Column::Energy));
        bad.extend(rep.offenders.iter().map(|o| o.to_string()));
    }
    let anchors = [
        ("ScH", 0, 0, -2.145149306),
        ("CO", 1, 5, -10.78600845),
        ("I2", 3, 0, -1.462957037),
    ];
    for (name, n, l, e) in anchors {
        let got = energy(mol(reg, name), QuantumState::new(n, l)).unwrap();
        if (got - e).abs() > 1e-6 {
            bad.push(format!("anchor {name} ({n},{l}) = {got}"));
        }
    }
    outcome(
        cells == 336 && bad.is_empty(),
        format!("{cells} cells, max |dE| = {worst:.2e} eV, {} failures", bad.len()),
    )
}

fn expectation_reproduction(reg: &Registry) -> Outcome {
    let tol = Tolerances::default();
    let mut cells = 0;
    let mut worst = [0.0f64; 4];
    let mut fails = [0usize; 4];
    let mut first_p2 = None;
    let cols = [Column::R2, Column::Potential, Column::Kinetic, Column::P2];
    for (m, rows) in fixtures(reg) {
        let rep = compare_columns(&m, &rows, &tol, &cols).expect("bound cells");
        cells += rep.rows;
        for (i, &c) in cols.iter().enumerate() {
            worst[i] = worst[i].max(rep.max_for(c));
            fails[i] += rep.offenders_in(c).count();
        }
        if first_p2.is_none() {
            first_p2 = rep.offenders_in(Column::P2).next().map(|o| o.to_string());
        }
    }
    let mut detail = format!(
        "{cells} cells; max dev r2 {:.2e} rel, V {:.2e} eV, T {:.2e} eV, p2 {:.2e} rel; out of tolerance r2 {}, V {}, T {}, p2 {}",
        worst[0], worst[1], worst[2], worst[3], fails[0], fails[1], fails[2], fails[3]
    );
    if let Some(example) = first_p2 {
        detail.push_str(&format!(" (e.g. {example})"));
    }
    outcome(cells == 336 && fails.iter().all(|&f| f == 0), detail)
}

fn identity_suite(reg: &Registry) -> Outcome {
    let mut states = 0;
    let mut worst_sum: f64 = 0.0;
    let mut worst_p2: f64 = 0.0;
    for m in reg {
        for l in 0..=10 {
            let Some(top) = n_max(m, l).unwrap() else { continue };
            for n in 0..=top {
                let r = state_report(m, QuantumState::new(n, l)).unwrap();
                states += 1;
                worst_sum = worst_sum.max(((r.kinetic + r.potential - r.energy) / r.energy).abs());
                let p2 = 2.0 * m.mu * AMU_EV * r.kinetic;
                worst_p2 = worst_p2.max(((r.p2_natural - p2) / p2).abs());
            }
        }
    }
    outcome(
        worst_sum <= 1e-10 && worst_p2 <= 1e-12,
        format!("{states} bound states; max |T+V-E|/|E| = {worst_sum:.2e}, max p2 identity = {worst_p2:.2e}"),
    )
}

fn hft_oracle(reg: &Registry) -> Outcome {
    let policy = StepPolicy::default();
    let ladder = default_slope_ladder();
    let mut worst: f64 = 0.0;
    let mut slope_range = (f64::INFINITY, f64::NEG_INFINITY);
    let mut errors = 0;
    for m in reg {
        for n in 0..=3 {
            for l in 0..=5 {
                let s = QuantumState::new(n, l);
                match hft_fd_check(m, s, &policy) {
                    Ok(r) => worst = worst.max(r.max()),
                    Err(_) => errors += 1,
                }
                match convergence_slopes(m, s, &ladder, 3) {
                    Ok(sl) => {
                        for v in [sl.depth, sl.mu, sl.l] {
                            slope_range.0 = slope_range.0.min(v);
                            slope_range.1 = slope_range.1.max(v);
                        }
                    }
                    Err(_) => errors += 1,
                }
            }
        }
    }
    let slopes_ok = (slope_range.0 - 2.0).abs() <= 0.2 && (slope_range.1 - 2.0).abs() <= 0.2;
    outcome(
        worst <= 1e-6 && slopes_ok && errors == 0,
        format!(
            "336 states; max residual {worst:.2e}; slopes in [{:.3}, {:.3}]; {errors} errors",
            slope_range.0, slope_range.1
        ),
    )
}

fn quantization_rule(reg: &Registry) -> Outcome {
    let mut worst_rule: f64 = 0.0;
    let mut worst_quad: f64 = 0.0;
    for name in ["ScH", "CO", "H2", "I2"] {
        let m = mol(reg, name);
        for l in [0, 2, 5] {
            for n in 0..=3 {
                worst_rule = worst_rule.max(proper_rule_residual(m, n, l).unwrap().abs());
                let e = energy(m, QuantumState::new(n, l)).unwrap();
                let num = action_integral_numeric(m, l, e).unwrap().value;
                let ana = action_integral_analytic(m, l, e).unwrap();
                worst_quad = worst_quad.max((num - ana).abs());
            }
        }
    }
    // the bare master integral on a spread of turning-point pairs
    let mut worst_master: f64 = 0.0;
    let mut seed = 0x2545_f491_4f6c_dd1du64;
    let mut uniform = || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        (seed >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..5 {
        let a = 0.01 + 2.0 * uniform();
        let b = a + 3.0 * uniform();
        let (num, _) = master_integral_numeric(a, b);
        worst_master = worst_master.max((num - master_integral_closed(a, b)).abs());
    }
    outcome(
        worst_rule <= 1e-6 && worst_quad <= 1e-8 && worst_master <= 1e-8,
        format!(
            "48 states; max |J_n - J_0 - n pi| = {worst_rule:.2e}; quadrature vs closed form {worst_quad:.2e} (actions), {worst_master:.2e} (bare integral)"
        ),
    )
}

fn riccati_check(reg: &Registry) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut worst_coef: f64 = 0.0;
    for m in reg {
        for l in 0..=2 {
            let g = riccati_ground(m, l).unwrap();
            worst = worst.max(g.max_relative_residual(100).unwrap());
            for c in g.coefficient_residuals() {
                worst_coef = worst_coef.max(c);
            }
        }
    }
    outcome(
        worst <= 1e-8,
        format!("42 ground states; max relative residual {worst:.2e}; coefficient matching {worst_coef:.2e}"),
    )
}

fn oracle_cross_check(reg: &Registry) -> Outcome {
    let mut worst_exact: f64 = 0.0;
    let mut worst_approx: f64 = 0.0;
    let mut problems = Vec::new();
    for name in ["H2", "HCl", "ScH", "I2"] {
        let m = mol(reg, name);
        let spec = solve_radial(m, 0, CentrifugalMode::Exact, &RadialGrid::default_for(m), 4).unwrap();
        if !spec.complete {
            problems.push(format!("{name}: fewer than 4 bound states"));
        }
        for (n, sol) in spec.solutions.iter().enumerate() {
            let e = energy(m, QuantumState::new(n as u32, 0)).unwrap();
            worst_exact = worst_exact.max((sol.eigenvalue - e).abs());
        }
    }
    let sch = mol(reg, "ScH");
    for l in 0..=5 {
        let spec = solve_radial(sch, l, CentrifugalMode::Approx, &RadialGrid::default_for(sch), 4).unwrap();
        for (n, sol) in spec.solutions.iter().enumerate() {
            let e = energy(sch, QuantumState::new(n as u32, l)).unwrap();
            worst_approx = worst_approx.max((sol.eigenvalue - e).abs());
        }
    }

    // particle in a box of length 2 with kappa = 1/2
    let (kappa, length) = (0.5, 2.0);
    let exact: Vec<f64> = (1..=3)
        .map(|k| f64::from(k * k) * PI * PI * kappa / (length * length))
        .collect();
    let mut grid = RadialGrid::new(1.0, 1.0 + length, 1000).unwrap();
    let mut errors = Vec::new();
    for _ in 0..3 {
        let sols = solve_potential(&grid, kappa, |_| 0.0, 3).unwrap();
        errors.push(
            sols.iter()
                .zip(&exact)
                .map(|(s, e)| (s.eigenvalue - e).abs())
                .collect::<Vec<_>>(),
        );
        grid = grid.refined();
    }
    let mut box_slopes = Vec::new();
    for k in 0..3 {
        for w in errors.windows(2) {
            box_slopes.push((w[0][k] / w[1][k]).log2());
        }
    }
    let box_ok = box_slopes.iter().all(|s| (s - 2.0).abs() <= 0.2);
    let (lo, hi) = box_slopes
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &s| (a.min(s), b.max(s)));
    let finest = errors.last().unwrap().iter().cloned().fold(0.0, f64::max);

    outcome(
        worst_exact <= 1e-3 && worst_approx <= 1e-3 && box_ok && problems.is_empty(),
        format!(
            "exact-mode l=0 max |dE| = {worst_exact:.2e} eV; ScH approx-mode l<=5 max |dE| = {worst_approx:.2e} eV; box slopes in [{lo:.3}, {hi:.3}], finest error {finest:.2e}{}",
            if problems.is_empty() { String::new() } else { format!("; {}", problems.join(", ")) }
        ),
    )
}

fn monotonicity(reg: &Registry) -> Outcome {
    let mut violations = Vec::new();
    for m in reg {
        let grid: Vec<Vec<_>> = (0..=3)
            .map(|n| {
                (0..=5)
                    .map(|l| state_report(m, QuantumState::new(n, l)).unwrap())
                    .collect()
            })
            .collect();
        let mut check = |a: &dfspec::StateReport, b: &dfspec::StateReport| {
            let rising = [
                ("E", a.energy, b.energy),
                ("V", a.potential, b.potential),
                ("T", a.kinetic, b.kinetic),
                ("p2", a.p2_paper, b.p2_paper),
            ];
            for (what, x, y) in rising {
                if y.partial_cmp(&x) != Some(std::cmp::Ordering::Greater) {
                    violations.push(format!("{} {what} ({},{})->({},{})", m.name, a.n, a.l, b.n, b.l));
                }
            }
            if b.r2.partial_cmp(&a.r2) != Some(std::cmp::Ordering::Less) {
                violations.push(format!("{} r2 ({},{})->({},{})", m.name, a.n, a.l, b.n, b.l));
            }
        };
        for n in 0..=3 {
            for l in 0..=5 {
                if n < 3 {
                    check(&grid[n][l], &grid[n + 1][l]);
                }
                if l < 5 {
                    check(&grid[n][l], &grid[n][l + 1]);
                }
            }
        }
    }
    let mut detail = format!("14 molecules x 24 states; {} violations", violations.len());
    if let Some(v) = violations.first() {
        detail.push_str(&format!(" (first: {v})"));
    }
    outcome(violations.is_empty(), detail)
}

fn main() -> ExitCode {
    let reg = builtin_registry();
    type Criterion = fn(&Registry) -> Outcome;
    let criteria: [(&str, Criterion, Option<Duration>); 8] = [
        ("energy reproduction", energy_reproduction, Some(Duration::from_secs(1))),
        (
            "expectation reproduction",
            expectation_reproduction,
            Some(Duration::from_secs(1)),
        ),
        ("identity suite", identity_suite, None),
        ("Hellmann-Feynman finite differences", hft_oracle, None),
        (
            "proper quantization rule",
            quantization_rule,
            Some(Duration::from_secs(10)),
        ),
        ("Riccati ground state", riccati_check, None),
        (
            "finite-difference oracle",
            oracle_cross_check,
            Some(Duration::from_secs(120)),
        ),
        ("monotonicity", monotonicity, None),
    ];

    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let (out, elapsed) = timed(*limit, || run(&reg));
        let tag = if out.passed { "PASS" } else { "FAIL" };
        println!("criterion {} {tag} {name} [{:.2?}]: {}", i + 1, elapsed, out.detail);
        if !out.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
