use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use adaptroot_core::secular::{Method, SecularProblem};
use adaptroot_core::SolverConfig;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_adaptroot"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(line: &'a str, key: &str) -> &'a str {
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(key)?.strip_prefix('='))
        .unwrap_or_else(|| panic!("no {key} in `{line}`"))
}

fn write_tmp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn golden_secular_root_line() {
    let f = fixture("secular_golden.json");
    let o = run(&["solve", "secular", f.to_str().unwrap(), "--method", "bns", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let line = out.lines().next().unwrap();
    assert_eq!(field(line, "root"), "3.8196601125010515e-1");
    let closed = (3.0 - 5f64.sqrt()) / 2.0;
    let root: f64 = field(line, "root").parse().unwrap();
    assert!(((root - closed) / closed).abs() <= 1e-12);
    assert!(field(line, "rel_err").parse::<f64>().unwrap() <= 1e-12);
}

#[test]
fn trinomial_cubic_roots() {
    let f = fixture("trinomial_cubic.json");
    let o = run(&["solve", "trinomial", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let roots: Vec<f64> = out.lines().map(|l| field(l, "root").parse().unwrap()).collect();
    // x³ − 3x + 1 has positive roots 2cos 80° and 2cos 40°
    let expected = [2.0 * 80f64.to_radians().cos(), 2.0 * 40f64.to_radians().cos()];
    assert_eq!(roots.len(), 2);
    for (r, e) in roots.iter().zip(expected) {
        assert!((r - e).abs() < 1e-12, "{r} vs {e}");
    }
}

#[test]
fn negative_weight_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_tmp(&dir, "bad.json", r#"{"kind":"secular","payload":{"b":[1,-0.5,1],"d":[0,1,2]}}"#);
    let o = run(&["solve", "secular", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("b[j] must be positive"));
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let junk = write_tmp(&dir, "junk.json", "{ not json");
    assert_eq!(run(&["solve", "secular", junk.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["solve", "secular", missing.to_str().unwrap()]).status.code(), Some(2));
    let f = fixture("knapsack.json");
    // kind on the command line disagrees with the file
    assert_eq!(run(&["solve", "secular", f.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["solve", "knapsack", f.to_str().unwrap(), "--method", "bns"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "nonsense", f.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn infeasible_and_inapplicable_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let k = write_tmp(&dir, "k.json", r#"{"kind":"knapsack","payload":{"alpha":[1,1],"beta":[2,1],"budget":0.5}}"#);
    let o = run(&["solve", "knapsack", k.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("infeasible"));
    let t = write_tmp(&dir, "t.json", r#"{"kind":"trinomial","payload":{"a":1,"b":1,"c":1,"n":3,"k":1}}"#);
    assert_eq!(run(&["solve", "trinomial", t.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn non_convergence_exits_3() {
    let f = fixture("secular_five.json");
    let o = run(&["solve", "secular", f.to_str().unwrap(), "--max-iters", "1", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("termination=MaxIters"));
}

#[test]
fn roots_match_library_bit_for_bit() {
    let f = fixture("secular_five.json");
    let p = SecularProblem::new(vec![0.5, 0.3, 0.8, 0.4, 0.05], vec![0.0, 1.0, 2.5, 4.0, 4.1]).unwrap();
    for method in Method::ALL {
        let o = run(&["solve", "secular", f.to_str().unwrap(), "--method", method.name(), "--jobs", "3"]);
        assert_eq!(o.status.code(), Some(0));
        let out = stdout(&o);
        let lib = p.solve_all_roots(method, &SolverConfig::default()).unwrap();
        for (line, r) in out.lines().zip(lib) {
            let cli: f64 = field(line, "root").parse().unwrap();
            assert_eq!(cli.to_bits(), r.unwrap().root().unwrap().to_bits(), "{method}: {line}");
        }
    }
}

#[test]
fn parallel_output_is_in_index_order() {
    let f = fixture("secular_five.json");
    let serial = stdout(&run(&["solve", "secular", f.to_str().unwrap()]));
    let parallel = stdout(&run(&["solve", "secular", f.to_str().unwrap(), "--jobs", "4"]));
    assert_eq!(serial, parallel);
    let idx: Vec<usize> = serial.lines().map(|l| field(l, "index").parse().unwrap()).collect();
    assert_eq!(idx, vec![0, 1, 2, 3]);
}

#[test]
fn root_selection() {
    let f = fixture("secular_five.json");
    let out = stdout(&run(&["solve", "secular", f.to_str().unwrap(), "--root", "2"]));
    assert_eq!(out.lines().count(), 1);
    assert_eq!(field(out.lines().next().unwrap(), "index"), "2");
    assert_eq!(run(&["solve", "secular", f.to_str().unwrap(), "--root", "4"]).status.code(), Some(2));
}

#[test]
fn trace_files() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("trace.csv");
    let f = fixture("secular_five.json");
    let o = run(&["solve", "secular", f.to_str().unwrap(), "--trace", base.to_str().unwrap(), "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!base.exists());
    for i in 0..4 {
        let csv = std::fs::read_to_string(dir.path().join(format!("trace-{i}.csv"))).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("iter,x,f_x,abs_err,rel_err"));
        let xs: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
        assert!(xs.windows(2).all(|w| w[0] < w[1]), "trace {i}");
        assert!(csv.ends_with('\n'));
    }

    // one root: the path is used as given, without oracle columns
    let single = dir.path().join("one.csv");
    let w = fixture("secular_witness.json");
    let o = run(&["solve", "secular", w.to_str().unwrap(), "--trace", single.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&single).unwrap();
    assert!(csv.starts_with("iter,x,f_x\n"));
}

#[test]
fn samples_show_domination() {
    let f = fixture("secular_golden.json");
    let o = run(&[
        "samples",
        "secular",
        f.to_str().unwrap(),
        "--range",
        "0.01:0.99",
        "--samples",
        "98",
        "--fit-point",
        "0.25",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("x,f_x,g_x,n_x"));
    let mut rows = 0;
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let scale = 1.0 + v[1].abs();
        // g ≥ f to the right of the fit point
        if v[0] >= 0.25 {
            assert!(v[2] >= v[1] - 1e-12 * scale, "{line}");
        }
        rows += 1;
    }
    assert_eq!(rows, 99);
}

#[test]
fn samples_skip_poles_and_reject_bad_ranges() {
    let f = fixture("secular_five.json");
    let out = stdout(&run(&["samples", "secular", f.to_str().unwrap(), "--range", "0:4.1", "--samples", "41"]));
    for line in out.lines().skip(1) {
        let x: f64 = line.split(',').next().unwrap().parse().unwrap();
        assert!([0.0, 1.0, 2.5, 4.0, 4.1].iter().all(|d| (x - d).abs() >= 1e-9), "{line}");
    }
    assert_eq!(run(&["samples", "secular", f.to_str().unwrap(), "--range", "2:1"]).status.code(), Some(2));
    assert_eq!(run(&["samples", "secular", f.to_str().unwrap(), "--range", "1:1"]).status.code(), Some(2));
    assert_eq!(run(&["samples", "secular", f.to_str().unwrap(), "--range", "x"]).status.code(), Some(2));
}

#[test]
fn trinomial_samples_change_sign_twice() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("s.csv");
    let f = fixture("trinomial_cubic.json");
    let o = run(&[
        "samples",
        "trinomial",
        f.to_str().unwrap(),
        "--range",
        "0:2",
        "--samples",
        "200",
        "--fit-point",
        "1",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(out_path).unwrap();
    let f: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    let changes = f.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
    assert_eq!(changes, 2);
}

#[test]
fn compare_shows_newton_failure_on_witness() {
    let f = fixture("secular_witness.json");
    let o = run(&["compare", "secular", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let header: Vec<&str> = out.lines().next().unwrap().split_whitespace().collect();
    assert_eq!(header, ["root", "bns", "transformed", "newton"]);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split_whitespace().collect();
    assert_eq!(row[0], "1");
    assert!(row[1].parse::<usize>().unwrap() <= 25);
    assert!(row[2].parse::<usize>().unwrap() <= 25);
    assert!(row[3].contains(':'), "newton should not converge: {}", row[3]);
}

#[test]
fn compare_other_kinds() {
    let k = stdout(&run(&["compare", "knapsack", fixture("knapsack.json").to_str().unwrap()]));
    assert!(k.starts_with("root") && k.contains("convexified"));
    let t = stdout(&run(&["compare", "trinomial", fixture("trinomial_cubic.json").to_str().unwrap()]));
    assert_eq!(t.lines().count(), 3);
    let p = run(&["compare", "pellet", fixture("pellet.json").to_str().unwrap()]);
    assert_eq!(p.status.code(), Some(2));
}
