use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const R: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn idmps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idmps"))
        .args(args)
        .env_remove("IDMPS_RANK_TOL")
        .output()
        .unwrap()
}

fn idmps_env(args: &[&str], tol: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idmps"))
        .args(args)
        .env("IDMPS_RANK_TOL", tol)
        .output()
        .unwrap()
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout))
    })
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn ghz_file(dir: &TempDir) -> PathBuf {
    let mut data = vec!["[0.0,0.0]".to_string(); 8];
    data[0] = format!("[{R},0.0]");
    data[7] = format!("[{R},0.0]");
    write(dir, "ghz.json", &format!(r#"{{"version":1,"shape":[2,2,2],"data":[{}]}}"#, data.join(",")))
}

fn random_file(dir: &TempDir, shape: &[usize]) -> PathBuf {
    let len: usize = shape.iter().product();
    let data: Vec<String> = (0..len)
        .map(|k| format!("[{},{}]", (k as f64 * 1.3).sin(), (k as f64 * 0.7 + 0.2).cos()))
        .collect();
    let shape: Vec<String> = shape.iter().map(|d| d.to_string()).collect();
    write(
        dir,
        "random.json",
        &format!(r#"{{"version":1,"shape":[{}],"data":[{}]}}"#, shape.join(","), data.join(",")),
    )
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn ghz_vidal_report() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("ghz.mps.json");
    let o = idmps(&["decompose", s(&ghz_file(&dir)), "--form", "vidal", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&o);
    assert_eq!(r["bond_dims"], serde_json::json!([2, 2]));
    for cut in r["spectra"].as_array().unwrap() {
        let v = floats(cut);
        assert_eq!(v.len(), 2);
        assert!(v.iter().all(|x| (x - R).abs() < 1e-12));
    }
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(file["form"], "vidal");
    assert_eq!(file["bonds"].as_array().unwrap().len(), 2);
}

#[test]
fn product_state_has_unit_bonds_in_every_form() {
    let dir = TempDir::new().unwrap();
    // |1> ⊗ |0> ⊗ |2>
    let mut data = ["[0,0]"; 2 * 2 * 3];
    data[6 + 2] = "[1,0]";
    let input = write(&dir, "prod.json", &format!(r#"{{"version":1,"shape":[2,2,3],"data":[{}]}}"#, data.join(",")));
    for form in ["left", "right", "mixed:1", "mixed:2", "vidal"] {
        let out = dir.path().join("p.mps.json");
        let o = idmps(&["decompose", s(&input), "--form", form, "--out", s(&out)]);
        assert_eq!(code(&o), 0);
        assert_eq!(report(&o)["bond_dims"], serde_json::json!([1, 1]), "{form}");
    }
}

#[test]
fn malformed_input_exits_one_with_clean_stdout() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"version":1,"shape":[2,2],"data":[[1,0],[0,0],[0,0]]}"#);
    let out = dir.path().join("x.json");
    let o = idmps(&["decompose", s(&bad), "--out", s(&out)]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
    assert!(!out.exists());

    let o = idmps(&["decompose", s(&dir.path().join("missing.json")), "--out", s(&out)]);
    assert_eq!(code(&o), 1);
    let o = idmps(&["decompose", s(&ghz_file(&dir)), "--form", "sideways", "--out", s(&out)]);
    assert_eq!(code(&o), 1);
    let o = idmps(&["decompose", "--bogus-flag"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn zero_tensor_is_a_numerical_failure() {
    let dir = TempDir::new().unwrap();
    let zero = write(&dir, "zero.json", r#"{"version":1,"shape":[2,2],"data":[[0,0],[0,0],[0,0],[0,0]]}"#);
    let o = idmps(&["decompose", s(&zero), "--out", s(&dir.path().join("z.json"))]);
    assert_eq!(code(&o), 2);
    assert!(o.stdout.is_empty());
}

#[test]
fn decompose_then_reconstruct() {
    let dir = TempDir::new().unwrap();
    let input = ghz_file(&dir);
    let mps = dir.path().join("g.mps.json");
    let back = dir.path().join("g.back.json");
    for form in ["left", "right", "mixed:1", "vidal"] {
        assert_eq!(code(&idmps(&["decompose", s(&input), "--form", form, "--out", s(&mps)])), 0);
        let o = idmps(&["reconstruct", s(&mps), "--out", s(&back), "--reference", s(&input)]);
        assert_eq!(code(&o), 0);
        let r = report(&o);
        assert!(r["reference_residual"].as_f64().unwrap() <= 1e-10, "{form}");
        assert!(r["round_trip_residual"].as_f64().unwrap() <= 1e-10, "{form}");
        assert!((r["norm"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn truncation_flags_reach_the_report() {
    let dir = TempDir::new().unwrap();
    let input = ghz_file(&dir);
    let mps = dir.path().join("g1.mps.json");
    let o = idmps(&["decompose", s(&input), "--form", "vidal", "--max-bond", "1", "--out", s(&mps)]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["bond_dims"], serde_json::json!([1, 1]));
    // the sweep drops one branch at the first cut; the second has nothing left
    let errors = floats(&r["truncation_errors"]);
    assert!((errors[0] - R).abs() < 1e-10);
    assert_eq!(errors[1], 0.0);
    assert!(errors[1].is_sign_positive());
    let back = dir.path().join("g1.back.json");
    let o = idmps(&["reconstruct", s(&mps), "--out", s(&back), "--reference", s(&input)]);
    // one GHZ branch survives: ‖ψ − ψ̃‖ = 1/√2
    assert!((report(&o)["reference_residual"].as_f64().unwrap() - R).abs() < 1e-10);
}

#[test]
fn single_site_reconstruct_reproduces_the_data() {
    let dir = TempDir::new().unwrap();
    let mps = write(
        &dir,
        "one.mps.json",
        r#"{"version":1,"form":"unknown","sites":[{"phys_dim":3,"left_dim":1,"right_dim":1,"data":[[0.1,-0.2],[0.30000000000000004,0],[1e-300,5]]}]}"#,
    );
    let out = dir.path().join("one.json");
    assert_eq!(code(&idmps(&["reconstruct", s(&mps), "--out", s(&out)])), 0);
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(t["shape"], serde_json::json!([3]));
    let data: Vec<Vec<f64>> = serde_json::from_value(t["data"].clone()).unwrap();
    assert_eq!(data, vec![vec![0.1, -0.2], vec![0.30000000000000004, 0.0], vec![1e-300, 5.0]]);
}

#[test]
fn corrupted_dims_exit_one() {
    let dir = TempDir::new().unwrap();
    let mps = dir.path().join("r.mps.json");
    assert_eq!(code(&idmps(&["decompose", s(&random_file(&dir, &[2, 3, 2])), "--form", "left", "--out", s(&mps)])), 0);
    let mut f: Value = serde_json::from_str(&std::fs::read_to_string(&mps).unwrap()).unwrap();
    let left = f["sites"][1]["left_dim"].as_u64().unwrap();
    f["sites"][1]["left_dim"] = (left + 1).into();
    std::fs::write(&mps, f.to_string()).unwrap();
    let o = idmps(&["reconstruct", s(&mps), "--out", s(&dir.path().join("x.json"))]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
    assert_eq!(code(&idmps(&["verify", s(&mps)])), 1);
}

#[test]
fn verify_dispatch_and_failures() {
    let dir = TempDir::new().unwrap();
    let input = random_file(&dir, &[2, 3, 3]);
    let mps = dir.path().join("v.mps.json");

    assert_eq!(code(&idmps(&["decompose", s(&input), "--form", "left", "--out", s(&mps)])), 0);
    let o = idmps(&["verify", s(&mps)]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["passed"], true);
    assert_eq!(r["report"]["kind"], "normalization");
    // the input is not normalized, so asking for it fails
    assert_eq!(code(&idmps(&["verify", s(&mps), "--normalized"])), 3);

    // (2A)†(2A) = 4I: residual 3 at the scaled site
    let mut f: Value = serde_json::from_str(&std::fs::read_to_string(&mps).unwrap()).unwrap();
    for z in f["sites"][0]["data"].as_array_mut().unwrap() {
        for part in z.as_array_mut().unwrap() {
            *part = (part.as_f64().unwrap() * 2.0).into();
        }
    }
    let scaled = dir.path().join("scaled.json");
    std::fs::write(&scaled, f.to_string()).unwrap();
    let o = idmps(&["verify", s(&scaled)]);
    assert_eq!(code(&o), 3);
    let r = report(&o);
    assert_eq!(r["passed"], false);
    assert_eq!(r["report"]["worst_site"], 0);
    assert!((r["report"]["residuals"][0].as_f64().unwrap() - 3.0).abs() < 1e-10);

    assert_eq!(code(&idmps(&["decompose", s(&input), "--form", "vidal", "--out", s(&mps)])), 0);
    let o = idmps(&["verify", s(&mps), "--tol", "1e-8"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["report"]["kind"], "vidal");

    assert_eq!(code(&idmps(&["decompose", s(&input), "--form", "mixed:1", "--out", s(&mps)])), 0);
    assert_eq!(code(&idmps(&["verify", s(&mps)])), 0);

    // nothing claimed, nothing to verify
    let mut f: Value = serde_json::from_str(&std::fs::read_to_string(&mps).unwrap()).unwrap();
    f["form"] = "unknown".into();
    std::fs::write(&mps, f.to_string()).unwrap();
    let o = idmps(&["verify", s(&mps)]);
    assert_eq!(code(&o), 3);
    assert!(o.stdout.is_empty());
}

#[test]
fn rank_tol_from_environment() {
    let dir = TempDir::new().unwrap();
    // spectrum (0.8, 0.6) across the only cut
    let input = write(&dir, "two.json", r#"{"version":1,"shape":[2,2],"data":[[0.8,0],[0,0],[0,0],[0.6,0]]}"#);
    let out = dir.path().join("two.mps.json");
    let o = idmps_env(&["decompose", s(&input), "--out", s(&out)], "0.5");
    assert_eq!(report(&o)["bond_dims"], serde_json::json!([2]));
    let o = idmps_env(&["decompose", s(&input), "--out", s(&out)], "0.8");
    assert_eq!(report(&o)["bond_dims"], serde_json::json!([1]));
    let o = idmps_env(&["decompose", s(&input), "--out", s(&out)], "lots");
    assert_eq!(code(&o), 1);
}

#[test]
fn oscillator_examples() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("osc.mps.json");
    let csv_path = dir.path().join("osc.csv");
    let o = idmps(&[
        "oscillator", "--n", "1", "--omega-tilde", "1", "--theta", "0.4", "--phi", "-0.3", "--varphi", "1.1",
        "--cutoff", "8", "--out", s(&out), "--csv", s(&csv_path),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&o);
    assert_eq!(r["bond_dims"], serde_json::json!([2, 2]));
    assert!((floats(&r["alphas"]).iter().sum::<f64>() - 1.0).abs() < 1e-12);

    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["which", "a", "b", "index", "magnitude"]);
    let lane: Vec<f64> = reader
        .records()
        .map(|r| r.unwrap())
        .filter(|r| &r[0] == "A1" && &r[1] == "0")
        .map(|r| r[4].parse().unwrap())
        .collect();
    assert_eq!(lane.len(), 8);
    assert!((lane[0] - 1.0).abs() < 1e-14);
    assert!(lane[1..].iter().all(|m| m.abs() < 1e-14));

    // the written MPS is readable by the other commands
    let back = dir.path().join("osc.dense.json");
    assert_eq!(code(&idmps(&["reconstruct", s(&out), "--out", s(&back)])), 0);
}

#[test]
fn oscillator_ground_state_and_bad_params() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.json");
    let o = idmps(&[
        "oscillator", "--n", "0", "--omega-tilde", "2", "--theta", "0", "--phi", "0", "--varphi", "0", "--cutoff", "4",
        "--out", s(&out),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["bond_dims"], serde_json::json!([1, 1]));

    let base = ["oscillator", "--n", "1", "--theta", "0", "--phi", "0", "--varphi", "0", "--out", s(&out)];
    let o = idmps(&[&base[..], &["--omega-tilde", "1", "--cutoff", "1"]].concat());
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
    let o = idmps(&[&base[..], &["--omega-tilde", "0", "--cutoff", "4"]].concat());
    assert_eq!(code(&o), 1);
    let o = idmps(&[&base[..], &["--omega-tilde", "1"]].concat());
    assert_eq!(code(&o), 1, "missing cutoff");
}

#[test]
fn oscillator_config_file() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "osc.toml", "n = 2\nomega_tilde = 1.0\ntheta = 0.3\nphi = 0.2\nvarphi = -0.5\ncutoff = 5\n");
    let out = dir.path().join("c.json");
    let o = idmps(&["oscillator", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["n"], 2);
    assert_eq!(r["bond_dims"], serde_json::json!([3, 3]));
    // flags override the file
    let o = idmps(&["oscillator", "--config", s(&cfg), "--n", "1", "--out", s(&out)]);
    assert_eq!(report(&o)["bond_dims"], serde_json::json!([2, 2]));

    let bad = write(&dir, "bad.toml", "n = 2\ncolour = 3\n");
    assert_eq!(code(&idmps(&["oscillator", "--config", s(&bad), "--out", s(&out)])), 1);
}
