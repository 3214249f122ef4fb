use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kuranishi"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Dumps a bundled example into a fresh file and returns its path.
fn example(name: &str) -> PathBuf {
    let o = run(&["examples", "dump", name]);
    assert_eq!(o.status.code(), Some(0));
    let dir = std::env::temp_dir().join(format!("kuranishi-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("{name}.spec"));
    std::fs::write(&path, &o.stdout).unwrap();
    path
}

#[test]
fn examples_list() {
    let o = run(&["examples", "list"]);
    assert_eq!(o.status.code(), Some(0));
    let names: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert!(names.contains(&"circle".to_string()));
    assert!(names.contains(&"obstruction".to_string()));
    assert_eq!(run(&["examples", "dump", "nope"]).status.code(), Some(2));
}

#[test]
fn circle_validates() {
    let p = example("circle");
    let o = run(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("result: ok"));
}

#[test]
fn broken_jacobi_is_reported() {
    let f = fixture("broken_jacobi.spec");
    let o = run(&["validate", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("graded Jacobi [x, x, x]"), "{out}");
    let o = run(&["validate", f.to_str().unwrap(), "--output", "json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\"graded Jacobi\""));
    // the pipelines refuse it too
    assert_eq!(run(&["deform", f.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(
        run(&["kuranishi", f.to_str().unwrap()]).status.code(),
        Some(1)
    );
}

#[test]
fn bad_contraction_is_reported() {
    let f = fixture("bad_contraction.spec");
    let o = run(&["validate", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("nabla∘pi = id − (dh + hd)"), "{out}");
    assert!(!out.contains("h∘h"), "{out}");
}

#[test]
fn empty_dgla_is_fine() {
    let f = fixture("empty.spec");
    for cmd in ["validate", "deform", "kuranishi"] {
        let o = run(&[cmd, f.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{cmd}");
    }
}

#[test]
fn parse_errors_exit_2() {
    let f = fixture("malformed.spec");
    let o = run(&["validate", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 5"));
    assert_eq!(
        run(&["kuranishi", "/definitely/not/here.spec"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["deform", f.to_str().unwrap(), "--max-degree", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn circle_kuranishi_text() {
    let p = example("circle");
    let o = run(&[
        "kuranishi",
        p.to_str().unwrap(),
        "--max-degree",
        "6",
        "--output",
        "text",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("inverse[u] = -v^2 - v^4 - 2*v^6\n"), "{out}");
    assert!(out.contains("F[u] = u + u^2 + v^2\n"), "{out}");
}

#[test]
fn output_is_deterministic() {
    for name in ["circle", "fourterm", "obstruction"] {
        let p = example(name);
        let p = p.to_str().unwrap();
        for cmd in ["deform", "kuranishi"] {
            let a = run(&[cmd, p, "--max-degree", "5"]);
            let b = run(&[cmd, p, "--max-degree", "5"]);
            let s = run(&[cmd, p, "--max-degree", "5", "--sequential"]);
            assert_eq!(a.status.code(), Some(0), "{name} {cmd}");
            assert_eq!(a.stdout, b.stdout);
            assert_eq!(a.stdout, s.stdout);
        }
    }
}

#[test]
fn raising_the_order_extends_the_series() {
    let p = example("circle");
    let p = p.to_str().unwrap();
    let parse = |n: &str| -> serde_json::Value {
        serde_json::from_slice(&run(&["kuranishi", p, "--max-degree", n]).stdout).unwrap()
    };
    let lo = parse("6");
    let hi = parse("8");
    let lo_vals = lo["inverse"]["gamma_values"].as_array().unwrap();
    let hi_vals = hi["inverse"]["gamma_values"].as_array().unwrap();
    assert!(hi_vals.len() > lo_vals.len());
    assert_eq!(&hi_vals[..lo_vals.len()], &lo_vals[..]);
    assert!(hi["inverse"]["series"][1]["series"]
        .as_str()
        .unwrap()
        .starts_with(lo["inverse"]["series"][1]["series"].as_str().unwrap()));
}
