use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use podar::commands::calibrate::DriverRecord;
use podar_core::experiment::{build_grid_scenarios, GridConfig};

fn podar(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_podar"))
        .args(args)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .env_remove("PODAR_OUT_DIR")
        .output()
        .expect("spawn podar");
    // a diagnostic is printed exactly when the command fails
    assert_eq!(
        !out.status.success(),
        !out.stderr.is_empty(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn tree(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                files.insert(
                    p.strip_prefix(dir).unwrap().to_path_buf(),
                    std::fs::read(&p).unwrap(),
                );
            }
        }
    }
    files
}

const SPEC: &str = r#"
[[driver]]
id = "P1"
horizon = 5
k = 1.2
a = 1.0
b = 2.0

[[driver]]
id = "P2"
horizon = 3
k = 0.8
a = 0.6
b = 2.8
"#;

fn synth(dir: &Path) -> PathBuf {
    let spec = write(dir, "spec.toml", SPEC);
    let out = dir.join("synth");
    assert!(podar(&["synth", "--spec", s(&spec), "--out", s(&out)])
        .status
        .success());
    out
}

fn records(dir: &Path) -> Vec<DriverRecord> {
    podar::commands::calibrate::load_records(dir).unwrap()
}

#[test]
fn synthetic_round_trip_recovers_ground_truth() {
    let tmp = tempfile::tempdir().unwrap();
    let syn = synth(tmp.path());
    let cal = tmp.path().join("cal");
    let out = podar(&[
        "calibrate",
        "--signals",
        s(&syn.join("signals.csv")),
        "--kind",
        "subjective",
        "--out",
        s(&cal),
    ]);
    assert!(out.status.success());

    let truth: serde_json::Value =
        serde_json::from_slice(&std::fs::read(syn.join("ground_truth.json")).unwrap()).unwrap();
    let recs = records(&cal);
    assert_eq!(recs.len(), 2);
    for (rec, t) in recs.iter().zip(truth.as_array().unwrap()) {
        assert_eq!(rec.driver, t["id"].as_str().unwrap());
        assert_eq!(rec.best.horizon, t["horizon"].as_f64().unwrap());
        assert_eq!(rec.candidates.len(), 7);
        let eff = &t["effective"];
        for (got, key) in [(rec.best.k, "k"), (rec.best.a, "a"), (rec.best.b, "b")] {
            let want = eff[key].as_f64().unwrap();
            assert!(
                (got - want).abs() <= 0.02 * want,
                "{} {key}: {got} vs {want}",
                rec.driver
            );
        }
    }
    let summary = std::fs::read_to_string(cal.join("summary.csv")).unwrap();
    assert_eq!(
        summary.lines().next(),
        Some("driver,horizon,k,a,b,r_squared")
    );
    assert_eq!(summary.lines().count(), 3);
    let temporal = std::fs::read_to_string(cal.join("curves_temporal.csv")).unwrap();
    assert_eq!(temporal.lines().count(), 142);
    assert!(temporal.starts_with("t,P1,P2\n0,1.00000,1.00000\n"));
    assert_eq!(
        std::fs::read_to_string(cal.join("curves_spatial.csv"))
            .unwrap()
            .lines()
            .count(),
        152
    );
    for f in [
        "manifest.json",
        "params/P1.toml",
        "params/P2.toml",
        "results/P1.json",
    ] {
        assert!(cal.join(f).exists(), "{f}");
    }
}

#[test]
fn calibrated_parameters_reproduce_stored_predictions() {
    let tmp = tempfile::tempdir().unwrap();
    let syn = synth(tmp.path());
    let cal = tmp.path().join("cal");
    let signals = syn.join("signals.csv");
    let args = [
        "calibrate",
        "--signals",
        s(&signals),
        "--kind",
        "subjective",
        "--out",
        s(&cal),
        "--iters",
        "3000",
        "--horizons",
        "4,5",
    ];
    assert!(podar(&args).status.success());
    let rec = &records(&cal)[0];
    let set = build_grid_scenarios(&GridConfig::default()).unwrap();
    let params = cal.join("params/P1.toml");
    for i in [0usize, 5, 16, 40, 71, 76] {
        let c = set.cells[i];
        let scene = write(
            tmp.path(),
            "scene.toml",
            &format!("[host]\nvelocity = [25.0, 0.0]\n\n[[objects]]\nid = \"O{}\"\nposition = [{:?}, {:?}]\n", c.id, c.longitudinal, c.lateral),
        );
        let out = podar(&[
            "evaluate",
            "--scene",
            s(&scene),
            "--params",
            s(&params),
            "--json",
        ]);
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(
            v["final_podar"].as_f64().unwrap(),
            rec.best.predicted[i],
            "obstacle {}",
            c.id
        );
    }
}

#[test]
fn missing_input_fails_without_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("out");
    let out = podar(&[
        "calibrate",
        "--signals",
        s(&tmp.path().join("nope.csv")),
        "--kind",
        "objective",
        "--out",
        s(&out_dir),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.csv"));
    assert!(!out_dir.exists());

    // a bad grid file is caught before any fitting or writing
    let syn = synth(tmp.path());
    let grid = write(tmp.path(), "grid.toml", "lateral = [0.0]\n");
    let out = podar(&[
        "calibrate",
        "--signals",
        s(&syn.join("signals.csv")),
        "--grid",
        s(&grid),
        "--kind",
        "subjective",
        "--out",
        s(&out_dir),
    ]);
    assert!(!out.status.success());
    assert!(!out_dir.exists());
}

#[test]
fn out_dir_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write(tmp.path(), "spec.toml", SPEC);
    let dir = tmp.path().join("env-out");
    let out = Command::new(env!("CARGO_BIN_EXE_podar"))
        .args(["synth", "--spec", s(&spec)])
        .env("PODAR_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.join("signals.csv").exists());
}

#[test]
fn synth_is_byte_identical_and_rejects_bad_specs() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write(
        tmp.path(),
        "spec.toml",
        &SPEC.replace("b = 2.0", "b = 2.0\nsigma = 0.02\nseed = 11"),
    );
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(podar(&["synth", "--spec", s(&spec), "--out", s(&a)])
        .status
        .success());
    assert!(podar(&["synth", "--spec", s(&spec), "--out", s(&b)])
        .status
        .success());
    let (ta, tb) = (tree(&a), tree(&b));
    assert_eq!(ta.len(), 3);
    assert_eq!(ta, tb);

    let bad = write(
        tmp.path(),
        "bad.toml",
        &SPEC.replace("b = 2.0", "b = 2.0\nsigma = -0.1"),
    );
    let c = tmp.path().join("c");
    let out = podar(&["synth", "--spec", s(&bad), "--out", s(&c)]);
    assert!(!out.status.success());
    assert!(!c.exists());
}

const SCENE_175: &str =
    "[host]\nvelocity = [25.0, 0.0]\n\n[[objects]]\nid = \"O6\"\nposition = [175.0, 0.0]\n";

fn final_podar(scene: &Path, params: &Path) -> f64 {
    let out = podar(&[
        "evaluate",
        "--scene",
        s(scene),
        "--params",
        s(params),
        "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    v["final_podar"].as_f64().unwrap()
}

#[test]
fn evaluate_forward_checks() {
    let tmp = tempfile::tempdir().unwrap();
    let scene = write(tmp.path(), "scene.toml", SCENE_175);
    let p7 = write(
        tmp.path(),
        "p7.toml",
        "horizon = 7\nk = 1.0\na = 0.774\nb = 2.617\n",
    );
    let p6 = write(
        tmp.path(),
        "p6.toml",
        "horizon = 7\nk = 1.0\na = 1.446\nb = 1.399\n",
    );
    assert!(final_podar(&scene, &p7) > final_podar(&scene, &p6));

    let p7x2 = write(
        tmp.path(),
        "p7x2.toml",
        "horizon = 7\nk = 2.0\na = 0.774\nb = 2.617\n",
    );
    assert_eq!(final_podar(&scene, &p7x2), 2.0 * final_podar(&scene, &p7));

    let out_dir = tmp.path().join("ev");
    let out = podar(&[
        "evaluate",
        "--scene",
        s(&scene),
        "--params",
        s(&p7),
        "--out",
        s(&out_dir),
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("final_podar "), "{text}");
    assert!(text.contains("argmax_object O6"));
    let csv = std::fs::read_to_string(out_dir.join("breakdown.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 71);

    let empty = write(tmp.path(), "empty.toml", "[host]\nvelocity = [25.0, 0.0]\n");
    let out = podar(&["evaluate", "--scene", s(&empty), "--params", s(&p7)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no objects"));
}

fn relabel(src: &Path, dst: &Path, kind: &str) {
    std::fs::create_dir_all(dst.join("results")).unwrap();
    for mut rec in records(src) {
        rec.kind = kind.parse().unwrap();
        rec.best.kind = rec.kind;
        std::fs::write(
            dst.join(format!("results/{}.json", rec.driver)),
            serde_json::to_vec(&rec).unwrap(),
        )
        .unwrap();
    }
}

#[test]
fn report_on_identical_results() {
    let tmp = tempfile::tempdir().unwrap();
    let syn = synth(tmp.path());
    let cal = tmp.path().join("cal");
    let signals = syn.join("signals.csv");
    let args = [
        "calibrate",
        "--signals",
        s(&signals),
        "--kind",
        "subjective",
        "--out",
        s(&cal),
        "--iters",
        "2000",
        "--horizons",
        "3",
    ];
    assert!(podar(&args).status.success());
    let obj = tmp.path().join("obj");
    relabel(&cal, &obj, "objective");

    let rep = tmp.path().join("rep");
    let out = podar(&[
        "report",
        "--objective",
        s(&obj),
        "--subjective",
        s(&cal),
        "--out",
        s(&rep),
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("correlation_a 1.00000\ncorrelation_b 1.00000\n"),
        "{text}"
    );
    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(rep.join("comparison.json")).unwrap()).unwrap();
    assert_eq!(json["comparison"]["a"]["correlation"].as_f64(), Some(1.0));
    let thresholds = std::fs::read_to_string(rep.join("thresholds.csv")).unwrap();
    assert!(thresholds
        .starts_with("driver,kind,omega_t_at_2s,omega_t_at_3s,omega_d_at_1m,omega_d_at_2m\n"));
    assert_eq!(thresholds.lines().count(), 5);

    let custom = tmp.path().join("rep2");
    podar(&[
        "report",
        "--objective",
        s(&obj),
        "--subjective",
        s(&cal),
        "--out",
        s(&custom),
        "--times",
        "1.5",
        "--distances",
        "0.5",
    ]);
    assert!(std::fs::read_to_string(custom.join("thresholds.csv"))
        .unwrap()
        .starts_with("driver,kind,omega_t_at_1.5s,omega_d_at_0.5m\n"));

    // wrong kind and driver mismatch are both rejected
    let out = podar(&[
        "report",
        "--objective",
        s(&cal),
        "--subjective",
        s(&cal),
        "--out",
        s(&tmp.path().join("x")),
    ]);
    assert!(!out.status.success());
    std::fs::remove_file(obj.join("results/P2.json")).unwrap();
    let out = podar(&[
        "report",
        "--objective",
        s(&obj),
        "--subjective",
        s(&cal),
        "--out",
        s(&tmp.path().join("y")),
    ]);
    assert!(!out.status.success());
    assert!(!tmp.path().join("y").exists());
}
