use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn lcong() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lcong"))
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn config(p: u64, m: usize, n: usize, d: &str, f: &str, run: &str) -> String {
    format!("[problem]\np = {p}\nm = {m}\nn = {n}\nD = {d}\nf = {f}\n\n[run]\n{run}\n")
}

fn cube() -> String {
    config(2, 1, 1, "[[3]]", r#"[{ d = [3], c = "1" }]"#, "kmax = 4")
}

fn linear(p: u64, run: &str) -> String {
    config(p, 1, 1, "[[1]]", r#"[{ d = [1], c = "1" }]"#, run)
}

fn run(args: &[&str], cfg: Option<&Path>) -> Output {
    let mut c = lcong();
    c.args(args);
    if let Some(path) = cfg {
        c.arg("--config").arg(path);
    }
    c.output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn flagship_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cube.toml", &cube());

    let o = run(&["density"], Some(&cfg));
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("density = 1/2"));
    assert!(stdout(&o).contains("minimal support (2): [[1], [2]]"));

    let o = run(&["support"], Some(&cfg));
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("critical edges"));

    let out = dir.path().join("matrix.json");
    let o = run(&["matrix", "--out", out.to_str().unwrap()], Some(&cfg));
    assert_eq!(code(&o), 0);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["entries"], serde_json::json!([["0", "1"], ["1", "0"]]));

    let o = run(&["lseries"], Some(&cfg));
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("a_2 = 2") && text.contains("a_1 = 0") && text.contains("a_4 = 0"), "{text}");

    let o = run(&["curve"], Some(&cfg));
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("numerator coefficients: [1, 0, 2]"));
}

#[test]
fn verify_report_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cube.toml", &cube());
    let out = dir.path().join("r.json");
    let o = run(&["verify", "--out", out.to_str().unwrap()], Some(&cfg));
    assert_eq!(code(&o), 0);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["delta"], "1/2");
    assert_eq!(json["verdict"], "pass");
    let rows = json["variants"][0]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[2]["threshold"], 3);
}

#[test]
fn correction_controls_the_boundary_case() {
    let dir = tempfile::tempdir().unwrap();
    for p in [2, 3] {
        let on = write(dir.path(), "on.toml", &linear(p, "kmax = 4"));
        assert_eq!(code(&run(&["verify"], Some(&on))), 0);
        let off = write(dir.path(), "off.toml", &linear(p, "kmax = 4\nempty_correction = \"off\""));
        let o = run(&["verify"], Some(&off));
        assert_eq!(code(&o), 1, "{}", stdout(&o));
        assert!(stdout(&o).contains("verdict: FAIL"));
    }
}

#[test]
fn both_conventions_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "both.toml",
        &config(2, 1, 1, "[[3]]", r#"[{ d = [3], c = "1" }]"#, "kmax = 4\nsign_convention = \"both\""),
    );
    let o = run(&["verify"], Some(&cfg));
    let text = stdout(&o);
    assert!(text.contains("[proof scaling") && text.contains("[literal scaling"), "{text}");
}

#[test]
fn reports_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sq.toml",
        &config(3, 1, 2, "[[2, 0], [0, 2]]", r#"[{ d = [2, 0], c = "1" }, { d = [0, 2], c = "1" }]"#, "kmax = 4"),
    );
    let mut bodies = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(format!("r{threads}.json"));
        let o = run(&["verify", "--threads", threads, "--out", out.to_str().unwrap()], Some(&cfg));
        assert_eq!(code(&o), 0);
        bodies.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
}

#[test]
fn input_and_budget_errors() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.toml", "");
    assert_eq!(code(&run(&["verify"], Some(&empty))), 2);
    assert_eq!(code(&run(&["selftest"], Some(&empty))), 2);
    assert_eq!(code(&run(&["verify"], None)), 2);
    assert_eq!(code(&run(&["verify"], Some(&dir.path().join("missing.toml")))), 2);
    let bad = write(dir.path(), "bad.toml", &cube().replace("D = [[3]]", "D = [[3]]\nextra = 1"));
    assert_eq!(code(&run(&["verify"], Some(&bad))), 2);
    let cfg = write(dir.path(), "cube.toml", &cube());
    assert_eq!(code(&run(&["lseries", "--budget", "1"], Some(&cfg))), 3);
    assert_eq!(code(&lcong().arg("nonsense").output().unwrap()), 2);
}

#[test]
fn kmax_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cube.toml", &cube());
    let o = run(&["lseries", "--kmax", "6"], Some(&cfg));
    assert!(stdout(&o).contains("a_6 = 0"));
}

#[test]
fn selftest_and_fault_injection() {
    let o = run(&["selftest"], None);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("selftest: PASS"));
    let o = run(&["selftest", "--fault", "corrupt-lambda"], None);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("splitting-function congruences") && stdout(&o).contains("FAIL"));
}

#[test]
fn shipped_configs_verify() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let o = run(&["verify"], Some(&path));
            assert_eq!(code(&o), 0, "{}: {}", path.display(), stdout(&o));
            seen += 1;
        }
    }
    assert!(seen >= 3);
}
