use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn rigidlab(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rigidlab"));
    cmd.args(args).env_remove("RIGIDLAB_THREADS");
    if let Some(t) = threads {
        cmd.env("RIGIDLAB_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rigidlab-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn census_of_triangle_on_grid() {
    let v = json(&rigidlab(&["census", "--graph-spec", "complete:3", "--points-spec", "grid:3:2"], None));
    assert_eq!(v["distinct"], 55);
    assert_eq!(v["total"], 729);
    assert_eq!(v["provenance"]["command"], "rigidlab census --graph-spec complete:3 --points-spec grid:3:2");
}

#[test]
fn output_independent_of_threads_and_runs() {
    let cases: [&[&str]; 4] = [
        &["census", "--graph-spec", "complete:3", "--points-spec", "grid:3:2"],
        &["energy", "--vertices", "2", "--points-spec", "grid:3:2"],
        &["rich", "--points-spec", "grid:3:2", "--t", "3"],
        &["colour-lemma", "--random", "4", "--n", "6", "--colours", "5", "--seed", "11"],
    ];
    for args in cases {
        let base = rigidlab(args, Some("1"));
        assert!(base.status.success(), "{args:?}");
        for t in ["1", "2", "4"] {
            assert_eq!(rigidlab(args, Some(t)).stdout, base.stdout, "{args:?} with {t} threads");
        }
        let mut with_flag = vec!["--threads", "3"];
        with_flag.extend_from_slice(args);
        let flagged = json(&rigidlab(&with_flag, None));
        let mut plain = json(&base);
        plain["provenance"]["command"] = flagged["provenance"]["command"].clone();
        assert_eq!(flagged, plain, "{args:?}");
    }
}

#[test]
fn malformed_graph_names_key() {
    let dir = scratch("badgraph");
    let g = dir.join("g.json");
    fs::write(&g, r#"{"k":2,"vertices":3,"edgez":[[0,1]]}"#).unwrap();
    let out = rigidlab(&["rigid", "--graph", g.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("edgez"));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(rigidlab(&["census", "--no-such-flag"], None).status.code(), Some(2));
    let budget = rigidlab(&["census", "--graph-spec", "complete:3", "--points-spec", "grid:5:2", "--budget", "10"], None);
    assert_eq!(budget.status.code(), Some(3));
    let audit = rigidlab(&["audit", "--points-spec", "circle-rat:12"], None);
    assert_eq!(audit.status.code(), Some(4));
    let report: serde_json::Value = serde_json::from_slice(&audit.stdout).unwrap();
    assert_eq!(report["exceeds_threshold"], true);
    assert_eq!(rigidlab(&["census", "--points-spec", "grid:2:2"], None).status.code(), Some(1));
}

#[test]
fn config_runs_are_byte_identical() {
    let dir = scratch("config");
    let cfg = dir.join("exp.json");
    fs::write(
        &cfg,
        r#"{"pipeline":"census","metric":"euclid_sq","graph_spec":"complete:3","points":"random:2:6:50:{seed}","seed":5,"output":"out.json"}"#,
    )
    .unwrap();
    let run = || {
        let out = rigidlab(&["run", cfg.to_str().unwrap()], None);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        fs::read(dir.join("out.json")).unwrap()
    };
    let first = run();
    assert_eq!(first, run());
    let v: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["provenance"]["seed"], 5);
    assert_eq!(v["config"]["points"], "random:2:6:50:{seed}");
    fs::write(&cfg, r#"{"graph_spec":"complete:3","points":"grid:3:2","budgett":5}"#).unwrap();
    let bad = rigidlab(&["run", cfg.to_str().unwrap()], None);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("budgett"));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn csv_histogram_and_generated_points() {
    let out = rigidlab(&["census", "--graph-spec", "complete:2", "--points-spec", "line:3", "--format", "csv"], None);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "fibre_size,fibres\n2,1\n3,1\n4,1\n");
    let out = rigidlab(&["gen", "grid", "2"], None);
    let v = json(&out);
    assert_eq!(v["d"], 2);
    assert_eq!(v["points"].as_array().unwrap().len(), 4);
}

#[test]
fn fit_from_csv() {
    let dir = scratch("fit");
    let f = dir.join("series.csv");
    fs::write(&f, "size,count\n2,4\n3,9\n4,16\n5,25\n").unwrap();
    let v = json(&rigidlab(&["fit", "--input", f.to_str().unwrap()], None));
    assert!((v["slope"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    fs::remove_dir_all(dir).unwrap();
}
