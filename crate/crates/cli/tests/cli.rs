use std::path::PathBuf;
use std::process::{Command, Output};

fn cubicnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubicnet")).args(args).output().unwrap()
}

/// Fresh scratch directory per test.
fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("cubicnet-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn chamber(o: &Output) -> String {
    let v: serde_json::Value = serde_json::from_str(&stdout(o)).unwrap();
    v["chamber"].as_str().unwrap().to_string()
}

#[test]
fn classify_reports_the_chamber() {
    let o = cubicnet(&["classify", "--t", "0.5,0.3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(chamber(&o), "CC");
}

#[test]
fn malformed_flag_is_a_configuration_error() {
    assert_eq!(cubicnet(&["classify", "--t", "abc"]).status.code(), Some(2));
}

#[test]
fn invalid_tolerance_is_a_configuration_error() {
    let d = scratch("tol");
    let cfg = d.join("run.json");
    std::fs::write(&cfg, r#"{"tolerances": {"quad_tol": -1.0}}"#).unwrap();
    let o = cubicnet(&["classify", "--t", "0.5,0.3", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_config_field_is_a_configuration_error() {
    let d = scratch("unknown");
    let cfg = d.join("run.json");
    std::fs::write(&cfg, r#"{"thetaa": 0.1}"#).unwrap();
    let o = cubicnet(&["classify", "--t", "0.5,0.3", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn degenerate_parameter_is_an_engine_error() {
    let o = cubicnet(&["classify", "--t", "0,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn config_file_overrides_flags() {
    let d = scratch("override");
    let cfg = d.join("run.json");
    std::fs::write(&cfg, r#"{"differential": {"form": "normalized", "alpha": [1.0, 0.0], "t": [0.5, 0.1]}}"#).unwrap();
    let o = cubicnet(&["classify", "--t", "0.5,0.3", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(chamber(&o), "CD");
}

#[test]
fn network_outputs_are_byte_identical() {
    let d = scratch("determinism");
    let mut outputs = vec![];
    for run in 0..2 {
        let (svg, json) = (d.join(format!("n{run}.svg")), d.join(format!("n{run}.json")));
        let o = cubicnet(&[
            "--json",
            json.to_str().unwrap(),
            "network",
            "--t",
            "0.5,0.5",
            "--theta",
            "0.2",
            "--svg",
            svg.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push((std::fs::read(svg).unwrap(), std::fs::read(json).unwrap()));
    }
    assert!(!outputs[0].0.is_empty() && !outputs[0].1.is_empty());
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn degree_one_svg_has_eight_rays() {
    let d = scratch("d1");
    let svg = d.join("d1.svg");
    let o = cubicnet(&["network", "--coeffs", "0,0;1,0", "--theta", "0.53", "--svg", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(svg).unwrap();
    assert_eq!(text.matches("<path id=\"t").count(), 8);
}

#[test]
fn wall_cache_is_written_and_reused() {
    let d = scratch("cache");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_cubicnet"))
            .args(["walls", "--k", "3", "--samples", "4"])
            .env("CUBICNET_CACHE_DIR", &d)
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let files: Vec<PathBuf> = std::fs::read_dir(&d).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 1);
    let name = files[0].file_name().unwrap().to_str().unwrap().to_string();
    assert!(name.starts_with("wall-") && name.ends_with(".json"));
    // A tampered entry is served as is, which shows the cache was consulted.
    let tampered = r#"{"k": 3, "samples": 4, "points": [[0.5, 0.123]]}"#;
    std::fs::write(&files[0], tampered).unwrap();
    let second = run();
    let v: serde_json::Value = serde_json::from_str(&stdout(&second)).unwrap();
    assert_eq!(v["points"], serde_json::json!([[0.5, 0.123]]));
}
