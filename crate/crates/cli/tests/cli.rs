use std::path::Path;
use std::process::{Command, Output};

fn rrg(dir: &Path, args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rrg"));
    cmd.current_dir(dir).args(args);
    match threads {
        Some(t) => cmd.env("RRG_THREADS", t),
        None => cmd.env_remove("RRG_THREADS"),
    };
    cmd.output().unwrap()
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn sample_is_reproducible_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = ok(&rrg(dir.path(), &["sample", "--n", "20", "--d", "3", "--seed", "4"], None));
    let b = ok(&rrg(dir.path(), &["sample", "--n", "20", "--d", "3", "--seed", "4"], Some("3")));
    assert_eq!(a, b);
    let mut lines = a.lines();
    assert_eq!(lines.next().unwrap(), "20 3");
    assert_eq!(lines.count(), 30);

    ok(&rrg(dir.path(), &["sample", "--n", "20", "--seed", "4", "--count", "3", "--out", "graphs"], None));
    for i in 0..3 {
        assert!(dir.path().join(format!("graphs/graph_{i}.txt")).exists());
    }
    assert_eq!(std::fs::read_to_string(dir.path().join("graphs/graph_0.txt")).unwrap(), a);
    let second = ok(&rrg(dir.path(), &["sample", "--n", "20", "--seed", "4", "--index", "2"], None));
    assert_eq!(std::fs::read_to_string(dir.path().join("graphs/graph_2.txt")).unwrap(), second);
}

#[test]
fn invalid_input_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = rrg(dir.path(), &["sample", "--n", "7", "--d", "3"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("even"));

    std::fs::write(dir.path().join("bad.txt"), "4 3\n0 1\n").unwrap();
    let out = rrg(dir.path(), &["resolvent", "--graph", "bad.txt", "--z-re", "0", "--z-im", "1", "--report", "q"], None);
    assert_eq!(out.status.code(), Some(2));

    std::fs::write(dir.path().join("c.toml"), "experiment = \"sce\"\nn_list = [500]\n[grid]\nre = [2.0]\nim = [1e-5]\n").unwrap();
    let out = rrg(dir.path(), &["run", "c.toml"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("spectral domain"));
}

#[test]
fn resolvent_reports_are_json() {
    let dir = tempfile::tempdir().unwrap();
    ok(&rrg(dir.path(), &["sample", "--n", "100", "--seed", "1", "--out", "g.txt"], None));
    for report in ["ward", "rowsum", "q", "locallaw"] {
        let text = ok(&rrg(
            dir.path(),
            &["resolvent", "--graph", "g.txt", "--z-re", "1.0", "--z-im", "0.3", "--report", report, "--pairs", "10", "--radius", "2"],
            None,
        ));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(v.is_object(), "{report}: {text}");
    }
}

#[test]
fn resample_emits_a_regular_graph() {
    let dir = tempfile::tempdir().unwrap();
    ok(&rrg(dir.path(), &["sample", "--n", "200", "--seed", "2", "--out", "g.txt"], None));
    let text = ok(&rrg(dir.path(), &["resample", "--graph", "g.txt", "--o", "5", "--ell", "1", "--isolation-radius", "1"], None));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["mu"], 6);
    ok(&rrg(
        dir.path(),
        &["resample", "--graph", "g.txt", "--o", "5", "--ell", "1", "--isolation-radius", "1", "--emit", "graph", "--out", "h.txt"],
        None,
    ));
    let h = std::fs::read_to_string(dir.path().join("h.txt")).unwrap();
    assert!(h.starts_with("200 3\n"));
    assert_eq!(h.lines().count(), 301);
}

#[test]
fn experiment_output_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| -> Vec<&'static str> { vec!["experiment", "esd", "--n", "100,200", "--samples", "3", "--seed", "9", "--out", out] };
    ok(&rrg(dir.path(), &args("one.csv"), Some("1")));
    ok(&rrg(dir.path(), &args("four.csv"), Some("4")));
    let one = std::fs::read(dir.path().join("one.csv")).unwrap();
    assert_eq!(one, std::fs::read(dir.path().join("four.csv")).unwrap());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("one.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["experiment"], "esd");
    assert_eq!(manifest["config"]["n_list"], serde_json::json!([100, 200]));
    assert!(!dir.path().join("one.csv.partial").exists());
}

#[test]
fn run_uses_the_config_file_and_acceptance_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    // untagged run: exit 0 whatever the checks say
    std::fs::write(
        dir.path().join("x.toml"),
        "experiment = \"avg\"\nn_list = 100\nsamples = 2\n[grid]\nre = [1.0]\nim = [0.2]\n",
    )
    .unwrap();
    let out = rrg(dir.path(), &["run", "x.toml"], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("x.csv").exists() && dir.path().join("x.manifest.json").exists());
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS"));

    // ESD at N=30 with one sample cannot meet the KS band
    std::fs::write(dir.path().join("y.toml"), "experiment = \"esd\"\nn_list = 30\nsamples = 1\nacceptance = true\n").unwrap();
    let out = rrg(dir.path(), &["run", "y.toml"], None);
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
    assert_eq!(out.status.code(), Some(1));
}
