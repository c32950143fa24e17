use std::path::Path;
use std::process::{Command, Output};

use meinardus_cli::{parse_complex, parse_grid, recognize_rational, GlobalOpts, RunConfig, Format};
use serde_json::Value;

fn exe(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_meinardus"));
    cmd.args(args).env_remove("MEINARDUS_CACHE");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = exe(args, &[]);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--output", "json"]);
    serde_json::from_str(&stdout(&a)).unwrap()
}

#[test]
fn count_examples() {
    assert_eq!(stdout(&["count", "ones", "10"]).lines().last(), Some("10,42"));
    let plane: Vec<String> = stdout(&["count", "plane", "3"]).lines().skip(2).map(String::from).collect();
    assert_eq!(plane, ["1,1", "2,3", "3,6"]);
    assert_eq!(stdout(&["count", "--preset", "so5", "--n", "5"]).lines().last(), Some("5,3"));
    let j = json(&["count", "ones", "5", "--method", "oracle"]);
    assert_eq!(j["values"][5], "7");
}

#[test]
fn compare_ratio_approaches_one() {
    let j = json(&["compare", "ones", "1000,10000"]);
    let rows = j["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    let gaps: Vec<f64> = rows.iter().map(|r| (r["ratio"].as_f64().unwrap() - 1.0).abs()).collect();
    assert!(gaps.windows(2).all(|p| p[1] < p[0]), "{gaps:?}");
    assert!((j["model"]["C"].as_f64().unwrap() - 1.0 / (4.0 * 3f64.sqrt())).abs() < 1e-15);
}

#[test]
fn compare_slope_row() {
    let csv = stdout(&["compare", "polygonal:3", "--n-grid", "1000,8000"]);
    let last = csv.lines().last().unwrap();
    let slope: f64 = last.strip_prefix("slope,,,,").unwrap().parse().unwrap();
    assert!((slope + 1.0 / 3.0).abs() < 0.15, "{slope}");
    assert_eq!(csv.lines().next(), Some("n,p_f_n,p_hat,ratio,log_error"));
}

#[test]
fn constants_examples() {
    let ones = json(&["constants", "ones"]);
    assert!((ones["exp_terms"][0]["A"].as_f64().unwrap() - std::f64::consts::PI * (2.0f64 / 3.0).sqrt()).abs() < 1e-14);
    assert_eq!(ones["b_rational"], "1");
    let plane = json(&["constants", "plane"]);
    let z3 = 1.2020569031595942854f64;
    assert!((plane["exp_terms"][0]["A"].as_f64().unwrap() - 3.0 * z3.cbrt() / 2f64.powf(2.0 / 3.0)).abs() < 1e-14);
    let so5 = json(&["constants", "so5"]);
    assert_eq!(so5["b_rational"], "7/12");
    assert!((so5["b"].as_f64().unwrap() - 7.0 / 12.0).abs() < 1e-15);
    let exps: Vec<&str> = so5["exp_terms"].as_array().unwrap().iter().map(|t| t["exponent_rational"].as_str().unwrap()).collect();
    assert_eq!(exps, ["1/3", "2/9", "1/9", "0"]);
}

#[test]
fn zeta_examples() {
    let pk = json(&["zeta", "pk", "--k", "4", "--s", "1.3"]);
    assert!((pk["value"][0].as_f64().unwrap() - 1.3054778090727808).abs() < 1e-12);
    let d = json(&["zeta", "so5", "2", "--method", "direct"]);
    let m = json(&["zeta", "so5", "2", "--method", "mb"]);
    assert_eq!(d["method"], "DirectSum");
    assert_eq!(m["method"], "MellinBarnes");
    let gap = (d["value"][0].as_f64().unwrap() - m["value"][0].as_f64().unwrap()).abs();
    assert!(gap <= d["err_estimate"].as_f64().unwrap() + m["err_estimate"].as_f64().unwrap());
    let z0 = json(&["zeta", "so5", "0", "--method", "mb"]);
    assert!((z0["value"][0].as_f64().unwrap() - 0.375).abs() < 1e-4);
}

#[test]
fn saddle_and_cauchy() {
    let s = json(&["saddle", "ones", "1000"]);
    assert!((s["rho"].as_f64().unwrap() - s["rho_asymptotic"].as_f64().unwrap()).abs() < 1e-5);
    let c = json(&["cauchy", "so5", "80"]);
    let exact = stdout(&["count", "so5", "80"]);
    assert_eq!(exact.lines().last().unwrap(), format!("80,{}", c["nearest"].as_str().unwrap()));
}

fn code_and_error(args: &[&str]) -> (i32, Value) {
    let out = exe(args, &[]);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap_or(Value::Null);
    (out.status.code().unwrap(), err)
}

#[test]
fn exit_codes() {
    let (code, e) = code_and_error(&["count", "nope", "3"]);
    assert_eq!((code, e["error"].as_str()), (2, Some("unknown_preset")));
    let (code, _) = code_and_error(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, _) = code_and_error(&["compare", "plane", "1000,30000"]);
    assert_eq!(code, 2);
    let (code, _) = code_and_error(&["count", "ones", "10", "--tol", "0.1"]);
    assert_eq!(code, 2);
    let (code, e) = code_and_error(&["zeta", "so5", "0.5", "--method", "direct"]);
    assert_eq!((code, e["error"].as_str()), (3, Some("pole")));
    let (code, e) = code_and_error(&["zeta", "so5", "0.3333333", "--method", "mb"]);
    assert_eq!((code, e["error"].as_str()), (3, Some("pole")));
}

fn cache_files(dir: &Path) -> usize {
    std::fs::read_dir(dir).map(|d| d.count()).unwrap_or(0)
}

#[test]
fn cache_directory_precedence() {
    let flag = tempfile::tempdir().unwrap();
    let env = tempfile::tempdir().unwrap();
    let env_s = env.path().to_str().unwrap();
    let out = exe(&["count", "plane", "40", "--cache-dir", flag.path().to_str().unwrap()], &[("MEINARDUS_CACHE", env_s)]);
    assert!(out.status.success());
    assert_eq!((cache_files(flag.path()), cache_files(env.path())), (1, 0));
    let out = exe(&["count", "plane", "40"], &[("MEINARDUS_CACHE", env_s)]);
    assert!(out.status.success());
    assert_eq!(cache_files(env.path()), 1);
    // A second run reads the table back and prints the same bytes.
    let again = exe(&["count", "plane", "40"], &[("MEINARDUS_CACHE", env_s)]);
    assert_eq!(again.stdout, out.stdout);
    // Corrupt the cached file: the run must fail rather than print bad data.
    let entry = std::fs::read_dir(env.path()).unwrap().next().unwrap().unwrap().path();
    let mut bytes = std::fs::read(&entry).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 0x55;
    std::fs::write(&entry, bytes).unwrap();
    let bad = exe(&["count", "plane", "40"], &[("MEINARDUS_CACHE", env_s)]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn lspec_file_drives_explicit_presets() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("w.txt");
    std::fs::write(&table, "1 1\n2 1\n3 1\ntail ones\n").unwrap();
    let spec = dir.path().join("ones.json");
    let ones = stdout(&["constants", "ones", "--output", "json"]);
    let v: Value = serde_json::from_str(&ones).unwrap();
    let lspec = serde_json::json!({
        "positive_poles": [{ "at": "1", "residue": 1.0 }],
        "lstar_poles": ["1", "0", "-1"],
        "l0": v["L0"],
        "l0_prime": v["L0_prime"],
        "r": "3/2",
    });
    std::fs::write(&spec, lspec.to_string()).unwrap();
    let preset = format!("explicit:{}", table.display());
    let with = json(&["constants", &preset, "--lspec", spec.to_str().unwrap()]);
    assert_eq!(with["exp_terms"], v["exp_terms"]);
    let (code, _) = code_and_error(&["constants", &preset]);
    assert_eq!(code, 2);
}

#[test]
fn grid_formats() {
    assert_eq!(parse_grid("10,1000,log3").unwrap(), vec![10, 100, 1000]);
    assert_eq!(parse_grid("100,130,10").unwrap(), vec![100, 110, 120, 130]);
    assert_eq!(parse_grid("2000,5000,10000,20000").unwrap(), vec![2000, 5000, 10000, 20000]);
    assert_eq!(parse_grid("1000,10000").unwrap().len(), 10);
    assert!(parse_grid("5").is_err());
    assert!(parse_grid("0,10").is_err());
    assert!(parse_grid("1.5,10").is_err());
}

#[test]
fn complex_and_rational_parsing() {
    assert_eq!(parse_complex("0.5,-2").unwrap(), meinardus::C64::new(0.5, -2.0));
    assert_eq!(parse_complex("3").unwrap(), meinardus::C64::new(3.0, 0.0));
    assert!(parse_complex("1,2,3").is_err());
    assert_eq!(recognize_rational(7.0 / 12.0, 1000, 1e-12).unwrap().to_string(), "7/12");
    assert!(recognize_rational(std::f64::consts::PI, 100, 1e-12).is_none());
}

#[test]
fn config_checks_tolerance_and_cache() {
    let g = GlobalOpts { output: Format::Csv, tol: 1e-8, cache_dir: None, threads: 1, lspec: None };
    let cfg = RunConfig::from_opts(&g, Some("/tmp/x".into())).unwrap();
    assert_eq!(cfg.cache_dir.as_deref(), Some(Path::new("/tmp/x")));
    let g2 = GlobalOpts { cache_dir: Some("/tmp/y".into()), ..g.clone() };
    assert_eq!(RunConfig::from_opts(&g2, Some("/tmp/x".into())).unwrap().cache_dir.as_deref(), Some(Path::new("/tmp/y")));
    assert!(RunConfig::from_opts(&GlobalOpts { tol: 0.0, ..g.clone() }, None).is_err());
    assert!(RunConfig::from_opts(&GlobalOpts { tol: 1e-3, ..g }, None).is_err());
}
