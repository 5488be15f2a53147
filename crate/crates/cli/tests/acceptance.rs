//! Acceptance suite. Every criterion runs in sequence, prints one PASS/FAIL
//! line, and the test fails if any criterion fails. Run with
//! `cargo test -p adaptroot-cli --test acceptance -- --nocapture`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use adaptroot_core::knapsack::{h_eval, phi_eval, KnapsackDual};
use adaptroot_core::oracle::{bisect, bracket_inside};
use adaptroot_core::pellet::Trinomial;
use adaptroot_core::secular::{bns_initial_point, BnsApproximant, Method, SecularProblem, TransformedApproximant};
use adaptroot_core::steps::{Halley, Newton, Secant};
use adaptroot_core::{estimate_order, iterate, FnScalar, ScalarFunction, SolverConfig, Termination};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("{what} took {elapsed:?}, limit {limit:?}"))
    }
}

/// Bisection between the two poles bounding root `i`.
fn secular_oracle(p: &SecularProblem, i: usize) -> f64 {
    let br = bracket_inside(p, p.d()[i], p.d()[i + 1]).unwrap();
    bisect(p, br, 0.0).unwrap()
}

fn random_secular(rng: &mut ChaCha8Rng, n: usize) -> SecularProblem {
    let mut d: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
    d.sort_by(f64::total_cmp);
    d.dedup();
    let b = (0..d.len()).map(|_| rng.gen_range(1e-3..1.0)).collect();
    SecularProblem::new(b, d).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let f = FnScalar::new(|x| x * x - 2.0)
        .with_deriv1(|x| 2.0 * x)
        .with_deriv2(|_| 2.0);
    let cfg = SolverConfig {
        f_tol: 0.0,
        step_tol: 1e-15,
        ..SolverConfig::default()
    };
    let root = std::f64::consts::SQRT_2;
    let q = |t| estimate_order(&t, root).map(|e| e.q).map_err(|e| e.to_string());
    let newton = q(iterate(&f, Newton::new(&f), 1.5, &cfg).unwrap())?;
    let secant = q(iterate(&f, Secant::new(&f, 1.5), 1.4, &cfg).unwrap())?;
    let halley = q(iterate(&f, Halley::new(&f), 1.5, &cfg).unwrap())?;
    let elapsed = start.elapsed();
    ensure!((1.8..=2.2).contains(&newton), "newton order {newton}");
    ensure!((1.5..=1.75).contains(&secant), "secant order {secant}");
    ensure!((2.7..=3.3).contains(&halley), "halley order {halley}");
    within(elapsed, Duration::from_millis(100), "classic runs")?;
    Ok(format!("newton {newton:.3}, secant {secant:.3}, halley {halley:.3} in {elapsed:?}"))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cfg = SolverConfig::default();
    let problems: Vec<SecularProblem> = (0..200)
        .map(|_| {
            let n = rng.gen_range(4..=128);
            random_secular(&mut rng, n)
        })
        .collect();
    let start = Instant::now();
    let mut solved = Vec::new();
    for p in &problems {
        for method in [Method::Bns, Method::Transformed] {
            solved.push((p, method, p.solve_all_roots(method, &cfg).unwrap()));
        }
    }
    let elapsed = start.elapsed();
    let mut roots = 0;
    let mut worst: f64 = 0.0;
    for (p, method, results) in solved {
        for r in results {
            let r = r.map_err(|e| format!("{method}: {e}"))?;
            let i = r.index;
            ensure!(r.shifted.termination == Termination::Converged, "{method} root {i}: {}", r.shifted.termination);
            let width = p.d()[i + 1] - p.d()[i];
            ensure!(
                r.shifted.xs().all(|x| x > 0.0 && x < width),
                "{method} root {i}: iterate outside (0, {width})"
            );
            if method == Method::Bns {
                let xs: Vec<f64> = r.shifted.xs().collect();
                ensure!(xs.windows(2).all(|w| w[0] < w[1]), "bns root {i}: iterates not increasing");
            }
            let e = rel(r.root().unwrap(), secular_oracle(p, i));
            ensure!(e <= 1e-10, "{method} root {i}: relative error {e}");
            worst = worst.max(e);
            roots += 1;
        }
    }
    within(elapsed, Duration::from_secs(5), "solving")?;
    Ok(format!("{roots} roots, worst relative error {worst:.1e}, solve time {elapsed:?}"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut worst_g: f64 = f64::INFINITY;
    let mut worst_big: f64 = f64::INFINITY;
    for fit in 0..50 {
        let n = rng.gen_range(3..=24);
        let p = random_secular(&mut rng, n);
        let i = rng.gen_range(0..p.n() - 1);
        let task = p.task(i).unwrap();
        let dr = task.right_pole();

        // g ≥ f on (x̄, D)
        let x_bar = dr * rng.gen_range(0.01..0.99);
        let g = BnsApproximant::fit(&task, x_bar).unwrap();
        for s in 1..=64 {
            let x = x_bar + (dr - x_bar) * s as f64 / 65.0;
            let f = task.eval_f(x).unwrap();
            let slack = (g.eval(x) - f) / (1.0 + f.abs());
            worst_g = worst_g.min(slack);
            ensure!(slack >= -1e-10, "fit {fit}: g < f at x = {x} (slack {slack})");
        }

        // G ≤ F between the transformed pole and the root
        let root_z = 1.0 / (secular_oracle(&p, i) - p.d()[i]);
        let pole = task.transformed_pole();
        let z_bar = pole + (root_z - pole) * rng.gen_range(0.05..3.0);
        let big_g = TransformedApproximant::fit(&task, z_bar).unwrap();
        for s in 1..=64 {
            let z = pole + (root_z - pole) * s as f64 / 64.0;
            let f = task.eval_transformed(z).unwrap();
            let slack = (f - big_g.eval(z)) / (1.0 + f.abs());
            worst_big = worst_big.min(slack);
            ensure!(slack >= -1e-10, "fit {fit}: G > F at z = {z} (slack {slack})");
        }
    }
    Ok(format!("50 fits each; min slack g−f {worst_g:.1e}, F−G {worst_big:.1e}"))
}

fn witness() -> SecularProblem {
    SecularProblem::new(vec![4.0, 0.5, 1e-7, 1e-7], vec![-1.0, 0.0, 1.0, 1.0 + 1e-8]).unwrap()
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let p = witness();
    let i = 1;
    let cfg = SolverConfig::default();
    let root = secular_oracle(&p, i);
    let gap = p.d()[i + 1] - p.d()[i];
    ensure!(p.d()[i + 1] - root <= 1e-6 * gap, "root is {} from the right pole", p.d()[i + 1] - root);

    let task = p.task(i).unwrap();
    let x0 = bns_initial_point(&task).unwrap();
    let newton = iterate(&task, Newton::new(&task), x0, &cfg.scaled(1.0)).unwrap();
    ensure!(
        newton.termination == Termination::LeftDomain && newton.steps <= 5,
        "plain Newton ended {} after {} steps",
        newton.termination,
        newton.steps
    );
    let mut iters = Vec::new();
    for method in [Method::Bns, Method::Transformed] {
        let r = p.solve_root(i, method, &cfg).unwrap();
        ensure!(r.shifted.converged() && r.iterations() <= 25, "{method}: {} after {}", r.shifted.termination, r.iterations());
        ensure!(rel(r.root().unwrap(), root) <= 1e-10, "{method}: root mismatch");
        iters.push(r.iterations());
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_millis(100), "witness")?;
    Ok(format!(
        "Newton left (0, D) after {} steps (to x = {:.3}); bns {} and transformed {} iterations",
        newton.steps,
        newton.escaped.unwrap_or(f64::NAN),
        iters[0],
        iters[1]
    ))
}

/// φ by bisection on the closed form of h, which is decreasing.
fn phi_oracle(u: f64) -> f64 {
    let h = |y: f64| 1.0 - (1.0 + 1.0 / y) * (-1.0 / y).exp() - u;
    let (mut lo, mut hi) = (1e-3, 1.0);
    while h(lo) < 0.0 {
        lo *= 0.5;
    }
    while h(hi) > 0.0 {
        hi *= 2.0;
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

fn knapsack_oracle(p: &KnapsackDual) -> f64 {
    let f = FnScalar::new(|x| {
        p.alpha().iter().zip(p.beta()).map(|(&a, &b)| a * phi_oracle(b * x)).sum::<f64>() - p.budget()
    });
    let g = p.gamma();
    let mut lo = 1e-3 * g;
    // f falls from +inf at 0 to limit − K < 0 at γ
    while f.eval(lo).unwrap() <= 0.0 {
        lo *= 0.5;
    }
    let mut hi = g * (1.0 - 1e-6);
    while f.eval(hi).unwrap() >= 0.0 {
        hi = g - 0.5 * (g - hi);
    }
    bisect(&f, adaptroot_core::oracle::Bracket::new(lo, hi).unwrap(), 0.0).unwrap()
}

fn random_knapsack(rng: &mut ChaCha8Rng) -> KnapsackDual {
    let n = rng.gen_range(1..=32);
    let alpha: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
    let beta: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..10.0)).collect();
    let probe = KnapsackDual::new(alpha.clone(), beta.clone(), 1.0).unwrap();
    let limit = probe.check_feasible(&SolverConfig::default()).unwrap().limit;
    let sum: f64 = alpha.iter().sum();
    KnapsackDual::new(alpha, beta, limit + rng.gen_range(0.02..1.0) * sum).unwrap()
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let cfg = SolverConfig::default();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for inst in 0..100 {
        let p = random_knapsack(&mut rng);
        let g = p.gamma();
        let lf = |t: f64| p.eval_lf(t, &cfg).unwrap().0;
        for s in 1..=50 {
            let x = g * s as f64 / 51.0;
            let h = 1e-3 * g.min(x).min(g - x);
            let d2 = lf(x + h) - 2.0 * lf(x) + lf(x - h);
            let scale = lf(x).abs() + p.budget();
            ensure!(d2 >= -1e-8 * scale, "instance {inst}: Lf concave at {x} ({d2})");
        }
        let t = p.solve(&cfg).map_err(|e| e.to_string())?;
        ensure!(t.converged(), "instance {inst}: {}", t.termination);
        let oracle = knapsack_oracle(&p);
        let e = rel(t.root.unwrap(), oracle);
        ensure!(e <= 1e-10, "instance {inst}: relative error {e}");
        worst = worst.max(e);
        let xs: Vec<f64> = t.xs().collect();
        ensure!(xs.windows(2).all(|w| w[0] < w[1]), "instance {inst}: iterates not increasing");
        // with one term the start is the root itself; allow its rounding
        ensure!(
            xs[0] <= oracle * (1.0 + 4.0 * f64::EPSILON),
            "instance {inst} (n = {}): x0 = {} right of the root {oracle}",
            p.alpha().len(),
            xs[0]
        );
    }
    let mut worst_rt: f64 = 0.0;
    for _ in 0..100 {
        let x = rng.gen_range(0.0..1.0);
        if x == 0.0 {
            continue;
        }
        let y = phi_eval(x, &cfg).unwrap().y;
        let err = (h_eval(y).unwrap() - x).abs();
        ensure!(err <= 1e-12, "round trip at {x}: {err}");
        worst_rt = worst_rt.max(err);
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5), "knapsack")?;
    Ok(format!("100 instances, worst relative error {worst:.1e}, round trip {worst_rt:.1e}, {elapsed:?}"))
}

fn trinomial_oracle(t: &Trinomial) -> (f64, f64) {
    let xmin = t.to_x(t.applicability().z0);
    let mut hi = 2.0 * xmin;
    while t.eval_x(hi) <= 0.0 {
        hi *= 2.0;
    }
    let r1 = bisect(t, adaptroot_core::oracle::Bracket::new(0.0, xmin).unwrap(), 0.0).unwrap();
    let r2 = bisect(t, adaptroot_core::oracle::Bracket::new(xmin, hi).unwrap(), 0.0).unwrap();
    (r1, r2)
}

fn criterion_6() -> Outcome {
    let cfg = SolverConfig::default();
    let cubic = Trinomial::new(1.0, 3.0, 1.0, 3, 1).unwrap();
    let pair = cubic.solve_radii(&cfg).map_err(|e| e.to_string())?;
    let (c1, c2) = (2.0 * 80f64.to_radians().cos(), 2.0 * 40f64.to_radians().cos());
    ensure!((pair.r1 - c1).abs() <= 1e-10 && (pair.r2 - c2).abs() <= 1e-10, "cubic radii {} {}", pair.r1, pair.r2);

    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    while count < 100 {
        let lu = |r: &mut ChaCha8Rng| 10f64.powf(r.gen_range(-3.0..3.0));
        let n = rng.gen_range(3..=64);
        let k = rng.gen_range(1..n);
        let t = Trinomial::new(lu(&mut rng), lu(&mut rng), lu(&mut rng), n, k).unwrap();
        let app = t.applicability();
        if !(app.applicable && app.f_min.abs() > 1e-6 * t.scale()) {
            continue;
        }
        count += 1;
        let pair = t.solve_radii(&cfg).map_err(|e| format!("{t:?}: {e}"))?;
        let (r1, r2) = trinomial_oracle(&t);
        let e = rel(pair.r1, r1).max(rel(pair.r2, r2));
        ensure!(e <= 1e-10, "{t:?}: relative error {e}");
        worst = worst.max(e);
        for (trace, branch) in [
            (&pair.trace_lower, adaptroot_core::pellet::Branch::Lower),
            (&pair.trace_upper, adaptroot_core::pellet::Branch::Upper),
        ] {
            let tol = cfg.f_tol * t.branch_scale(branch);
            for &(z, fz) in &trace.iterates {
                ensure!(fz <= tol, "{t:?}: F({z}) = {fz} above the interval tolerance {tol}");
            }
        }
        let z0 = app.z0;
        let d = t.deriv_z(z0);
        ensure!(d.abs() <= 1e-10 * t.scale() / z0, "{t:?}: F'(z0) = {d}");
    }
    Ok(format!("cubic radii exact to 1e-10; 100 random trinomials, worst relative error {worst:.1e}"))
}

fn criterion_7() -> Outcome {
    let cfg = SolverConfig {
        f_tol: 0.0,
        ..SolverConfig::default()
    };
    let mut report = Vec::new();

    let p = SecularProblem::new(vec![0.5, 0.3, 0.8, 0.4], vec![0.0, 1.0, 2.5, 4.0]).unwrap();
    for method in [Method::Bns, Method::Transformed] {
        let mut min_q = f64::INFINITY;
        for i in 0..3 {
            let root = secular_oracle(&p, i);
            let (lo, hi) = (p.d()[i], p.d()[i + 1]);
            ensure!((root - lo).min(hi - root) >= 0.1 * (hi - lo), "secular root {i} too close to a pole");
            let r = p.solve_root(i, method, &cfg).unwrap();
            let q = estimate_order(&r.trace(), root).map_err(|e| format!("{method} root {i}: {e}"))?.q;
            min_q = min_q.min(q);
        }
        ensure!(min_q >= 1.7, "{method} order {min_q}");
        report.push(format!("{method} {min_q:.2}"));
    }

    let k = KnapsackDual::new(vec![1.0, 0.5, 2.0], vec![1.0, 3.0, 0.5], 5.0).unwrap();
    let root = knapsack_oracle(&k);
    ensure!(root >= 0.1 * k.gamma() && k.gamma() - root >= 0.1 * k.gamma(), "knapsack root near an end");
    let q = estimate_order(&k.solve(&cfg).unwrap(), root).map_err(|e| e.to_string())?.q;
    ensure!(q >= 1.7, "knapsack order {q}");
    report.push(format!("knapsack {q:.2}"));

    let t = Trinomial::new(1.0, 3.0, 1.0, 5, 2).unwrap();
    let pair = t.solve_radii(&cfg).unwrap();
    let (r1, r2) = trinomial_oracle(&t);
    let z0 = t.applicability().z0;
    let (z1, z2) = (r1 * r1, r2 * r2);
    ensure!(z0 - z1 >= 0.1 * (z2 - z1) && z2 - z0 >= 0.1 * (z2 - z1), "trinomial start near a root");
    let ql = estimate_order(&pair.trace_lower, z1).map_err(|e| e.to_string())?.q;
    let qu = estimate_order(&pair.trace_upper, z2).map_err(|e| e.to_string())?.q;
    ensure!(ql.min(qu) >= 1.7, "trinomial orders {ql} {qu}");
    report.push(format!("trinomial {:.2}", ql.min(qu)));
    Ok(report.join(", "))
}

fn fixtures() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    files
}

fn field<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    line.split_whitespace().find_map(|kv| kv.strip_prefix(key)?.strip_prefix('='))
}

fn criterion_8() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_adaptroot");
    let dir = tempfile::tempdir().unwrap();
    let files = fixtures();
    ensure!(!files.is_empty(), "no fixtures");
    let mut roots = 0;
    let mut bns_traces = 0;
    for file in &files {
        let text = std::fs::read_to_string(file).unwrap();
        let kind = ["secular", "knapsack", "trinomial", "pellet"]
            .into_iter()
            .find(|k| text.contains(&format!("\"{k}\"")))
            .unwrap();
        let name = file.file_stem().unwrap().to_string_lossy().into_owned();
        let trace = dir.path().join(format!("{name}.csv"));
        let mut cmd = Command::new(bin);
        cmd.args(["solve", kind]).arg(file).arg("--verify").arg("--trace").arg(&trace);
        if kind == "secular" {
            cmd.args(["--method", "bns"]);
        }
        let out = cmd.output().unwrap();
        let stdout = String::from_utf8_lossy(&out.stdout);
        ensure!(
            out.status.code() == Some(0),
            "{name}: exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        );
        for line in stdout.lines() {
            let e: f64 = field(line, "rel_err").ok_or(format!("{name}: no rel_err in `{line}`"))?.parse().unwrap();
            ensure!(e <= 1e-10, "{name}: {line}");
            roots += 1;
        }
        if kind == "secular" {
            let written: Vec<PathBuf> = std::fs::read_dir(dir.path())
                .unwrap()
                .map(|e| e.unwrap().path())
                .filter(|p| p.file_name().unwrap().to_string_lossy().starts_with(&name))
                .collect();
            ensure!(!written.is_empty(), "{name}: no trace written");
            for path in written {
                let csv = std::fs::read_to_string(&path).unwrap();
                let xs: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
                ensure!(xs.windows(2).all(|w| w[0] < w[1]), "{}: x column not increasing", path.display());
                bns_traces += 1;
            }
        }
    }
    Ok(format!("{} fixtures, {roots} verified roots, {bns_traces} monotone BNS traces", files.len()))
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("1 classic orders", criterion_1),
        ("2 secular correctness", criterion_2),
        ("3 domination", criterion_3),
        ("4 Newton-failure witness", criterion_4),
        ("5 knapsack", criterion_5),
        ("6 pellet", criterion_6),
        ("7 convergence orders", criterion_7),
        ("8 end-to-end CLI", criterion_8),
    ];
    let start = Instant::now();
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                println!("FAIL criterion {name}: {why}");
                failed.push(name);
            }
        }
    }
    let total = start.elapsed();
    println!("acceptance wall time {total:?}");
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
    assert!(total < Duration::from_secs(15), "suite took {total:?}");
}
