use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn flagcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagcert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn check_exit_codes() {
    let cube = data("cube3.json");
    assert_eq!(
        flagcert(&["check", "--mode", "vaaler", &cube])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        flagcert(&["check", "--mode", "rogers", &cube])
            .status
            .code(),
        Some(0)
    );
    let shrunk = flagcert(&["check", &data("shrunk_cube.json")]);
    assert_eq!(shrunk.status.code(), Some(1));
    assert!(stdout(&shrunk).contains("FAIL"));
    assert_eq!(
        flagcert(&["check", &data("malformed.json")]).status.code(),
        Some(2)
    );
    assert_eq!(
        flagcert(&["check", &data("missing.json")]).status.code(),
        Some(2)
    );
}

#[test]
fn check_json_report() {
    let out = flagcert(&["check", "--format", "json", &data("hexagon.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["mode"], "vaaler");
    assert_eq!(report["entries"].as_array().unwrap().len(), 12);
}

#[test]
fn certify_volume_and_surface() {
    let cube = data("cube3.json");
    let out = flagcert(&["certify", "volume", &cube]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("total: 8\n"), "{text}");
    assert!(text.contains("bound: 8\n"));
    assert!(text.contains("result: pass"));

    let out = flagcert(&["certify", "surface", "--format", "json", &cube]);
    assert_eq!(out.status.code(), Some(0));
    let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((cert["total"].as_f64().unwrap() - 24.0).abs() < 1e-9);
    assert_eq!(cert["claimed_bound"], 24.0);
    assert_eq!(cert["simplices"].as_array().unwrap().len(), 48);

    let path = scratch("cube3_cert.json");
    let out = flagcert(&["certify", "volume", "--out", path.to_str().unwrap(), &cube]);
    assert_eq!(out.status.code(), Some(0));
    let cert: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(cert["pass"], true);
    assert_eq!(cert["kind"], "volume");
}

#[test]
fn certify_failure_and_unsupported() {
    assert_eq!(
        flagcert(&["certify", "volume", &data("shrunk_cube.json")])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        flagcert(&["certify", "surface", &data("cube4.json")])
            .status
            .code(),
        Some(3)
    );
    let out = flagcert(&["certify", "surface", "--experimental", &data("cube4.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("EXPERIMENTAL"));
}

#[test]
fn section_outputs() {
    let out = flagcert(&["section", &data("hexagon.json")]);
    assert_eq!(out.status.code(), Some(0));
    let poly: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(poly["dim"], 2);
    assert!((poly["volume"].as_f64().unwrap() - 3.0 * 3f64.sqrt()).abs() < 1e-9);

    let a = flagcert(&["section", "--random", "2", "5", "--seed", "7"]);
    let b = flagcert(&["section", "--random", "2", "5", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = flagcert(&["section", "--random", "2", "5", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);

    assert_eq!(
        flagcert(&["section", "--random", "3", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(flagcert(&["section"]).status.code(), Some(2));
}

#[test]
fn subdivide_exports() {
    let triples = scratch("cube3_triples.json");
    let off = scratch("cube3.off");
    let out = flagcert(&[
        "subdivide",
        "--samples",
        "2000",
        "--out",
        triples.to_str().unwrap(),
        "--off",
        off.to_str().unwrap(),
        &data("cube3.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("simplices: 48"));
    let list: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&triples).unwrap()).unwrap();
    assert_eq!(list.as_array().unwrap().len(), 48);
    assert!(std::fs::read_to_string(&off)
        .unwrap()
        .starts_with("OFF\n192 192 0\n"));

    let out = flagcert(&["subdivide", "--samples", "500", &data("hexagon.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("simplices: 12"));
    assert_eq!(
        flagcert(&["subdivide", &data("malformed.json")])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn curve_csv() {
    let out = flagcert(&["curve", "--steps", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,area_integral,area_girard,ratio"));
    let rows: Vec<Vec<f64>> = lines
        .clone()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 100);
    for w in rows.windows(2) {
        assert!(w[1][3] > w[0][3]);
    }
    for r in &rows {
        assert!((r[1] - r[2]).abs() < 1e-8);
    }
    assert!(
        text.ends_with("\n")
            && text
                .lines()
                .last()
                .unwrap()
                .starts_with("# verdict: increasing")
    );

    let single = flagcert(&["curve", "--steps", "1", "--t-min", "0.5", "--t-max", "0.5"]);
    assert_eq!(single.status.code(), Some(0));
    assert_eq!(stdout(&single).lines().count(), 3);
    assert_eq!(flagcert(&["curve", "--c", "2.0"]).status.code(), Some(2));
}

#[test]
fn lemma_commands() {
    let out = flagcert(&["lemma", "obtuse", &data("triple120.json")]);
    assert_eq!(out.status.code(), Some(0));
    let out = flagcert(&[
        "lemma",
        "obtuse",
        "--k",
        "3",
        "--n",
        "4",
        "--samples",
        "500",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("failures: 0"));

    let ok = flagcert(&[
        "lemma",
        "contraction",
        "--beta",
        "2,2,2",
        "--samples",
        "200",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = flagcert(&[
        "lemma",
        "contraction",
        "--beta",
        "1,1,1",
        "--gamma",
        "2,1,1",
    ]);
    assert_eq!(bad.status.code(), Some(2));
    let random = flagcert(&[
        "lemma",
        "contraction",
        "--dim",
        "4",
        "--pairs",
        "20",
        "--samples",
        "50",
    ]);
    assert_eq!(random.status.code(), Some(0));
}

#[test]
fn identical_config_is_byte_identical() {
    let hex = data("hexagon.json");
    for args in [
        vec!["certify", "volume", "--format", "json", hex.as_str()],
        vec![
            "subdivide",
            "--samples",
            "1000",
            "--seed",
            "3",
            hex.as_str(),
        ],
        vec!["lemma", "obtuse", "--samples", "200", "--seed", "9"],
        vec!["curve", "--steps", "20"],
    ] {
        let a = flagcert(&args);
        let b = flagcert(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn zero_samples_rejected() {
    assert_eq!(
        flagcert(&["subdivide", "--samples", "0", &data("cube3.json")])
            .status
            .code(),
        Some(2)
    );
}
