use rigid_cocycles::cli::{dispatch, main_with, parse_config_text, Command, Opts, RunConfig};
use rigid_cocycles::quadforms::{intersection, BinaryQF, Cusp};
use rigid_cocycles::Error;
use serde_json::Value;
use std::path::PathBuf;
use std::process::Output;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cocycle-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str], cache: Option<&PathBuf>) -> Output {
    let mut cmd = std::process::Command::new(env!("CARGO_BIN_EXE_cocycle"));
    cmd.args(args).env_remove("COCYCLE_CACHE_DIR").env("RUST_LOG", "warn");
    if let Some(dir) = cache {
        cmd.env("COCYCLE_CACHE_DIR", dir);
    }
    cmd.output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn identity_check_succeeds() {
    assert_eq!(main_with(["cocycle", "identity-check", "--kmax", "10"]), 0);
}

#[test]
fn residue_verification_passes() {
    let out = run(&["verify-residue", "--p", "3", "--k", "3", "--D", "13", "--prec", "10"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["criteria"].as_array().unwrap().len(), 1);
}

#[test]
fn even_weight_is_a_config_error() {
    let out = run(&["eval-j", "--k", "2"], None);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"], "ConfigInvalid");
    assert_eq!(v["field"], "k");
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(run(&["forms", "--D", "16"], None).status.code(), Some(2));
    assert_eq!(run(&["forms", "--p", "4"], None).status.code(), Some(2));
    assert_eq!(run(&["kappa", "--r", "1/2", "--s", "1/2"], None).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"], None).status.code(), Some(2));
    let out = run(&["eval-j", "--z", "7"], None);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["field"], "z");
}

#[test]
fn forms_output() {
    let out = run(&["forms", "--D", "13"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["count"], 12);
    for f in v["forms"].as_array().unwrap() {
        assert_eq!(f["disc"], 13);
        let (a, b, c) = (f["a"].as_i64().unwrap(), f["b"].as_i64().unwrap(), f["c"].as_i64().unwrap());
        assert!(a * c < 0 && b * b - 4 * a * c == 13);
    }
}

#[test]
fn intersect_output() {
    let v = json(&run(&["intersect", "--form", "3,1,-1", "--r", "0", "--s", "inf", "--p", "3"], None));
    let want = intersection(&BinaryQF::new(3, 1, -1), &Cusp::from_int(0), &Cusp::infinity()).unwrap();
    assert_ne!(want, 0);
    assert_eq!(v["intersection"], want);
    assert!(v["padic_intersection"].is_i64());
    let v = json(&run(&["intersect", "--form", "1,1,-3", "--r", "0", "--s", "inf"], None));
    assert!(v["padic_intersection"].is_null());
}

#[test]
fn output_is_deterministic() {
    let args = ["eval-j", "--p", "3", "--k", "3", "--D", "13", "--prec", "6", "--z", "1,1"];
    let a = run(&args, None);
    let b = run(&args, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert!(v["value"].as_str().unwrap().starts_with('('));
    assert!(v["prec"].as_i64().unwrap() >= 6);
}

#[test]
fn cache_does_not_change_results() {
    let dir = scratch("cache");
    let args = ["kappa", "--D", "37", "--r", "-2/5", "--s", "7/3", "--prec", "8"];
    let cold = run(&args, None);
    let first = run(&args, Some(&dir));
    let warm = run(&args, Some(&dir));
    assert_eq!(cold.status.code(), Some(0));
    assert_eq!(cold.stdout, first.stdout);
    assert_eq!(cold.stdout, warm.stdout);
    assert!(std::fs::read_dir(&dir).unwrap().next().is_some(), "cache directory left empty");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn omega_writes_csv() {
    let dir = scratch("csv");
    let path = dir.join("omega.csv");
    let out = run(&["omega", "--D-max", "20", "--csv", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out)["rows"].as_array().unwrap().len();
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("D,scale_num,spoly"));
    assert_eq!(lines.count(), rows);
    assert!(text.contains("\n13,13^(5/2),"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_file_parsing() {
    let m = parse_config_text("# run\np = 5\nD = 21 # comment\n\nz = 1,1\n").unwrap();
    assert_eq!(m.get("p").map(String::as_str), Some("5"));
    assert_eq!(m.get("D").map(String::as_str), Some("21"));
    assert_eq!(m.get("z").map(String::as_str), Some("1,1"));
    assert_eq!(m.len(), 3);
    assert!(matches!(parse_config_text("colour = red"), Err(Error::ConfigInvalid { field, .. }) if field == "colour"));
    assert!(matches!(parse_config_text("p 5"), Err(Error::ConfigInvalid { .. })));
}

#[test]
fn flags_override_config_file() {
    let dir = scratch("config");
    let path = dir.join("run.conf");
    std::fs::write(&path, "p = 5\nk = 5\nD = 21\n").unwrap();
    let opts = Opts { config: Some(path.clone()), k: Some(3), ..Opts::default() };
    let cfg = RunConfig::resolve(&opts).unwrap();
    assert_eq!((cfg.p, cfg.k, cfg.d.to_string()), (5, 3, "21".to_string()));
    assert_eq!(cfg.prec, 10);

    std::fs::write(&path, "p = 3\nwidth = 4\n").unwrap();
    let out = run(&["forms", "--config", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["field"], "width");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn dispatch_reports_pass_flag() {
    let opts = Opts { kmax: Some(6), ..Opts::default() };
    let cfg = RunConfig::resolve(&opts).unwrap();
    let out = dispatch(Command::IdentityCheck, &cfg).unwrap();
    assert!(out.pass);
    assert_eq!(out.json["pass"], Value::Bool(true));
    let out = dispatch(Command::Bounds, &RunConfig { depth: 3, ..cfg }).unwrap();
    assert!(out.pass);
    assert_eq!(out.json["depth"], 3);
}
