use std::path::PathBuf;
use std::process::{Command, Output};

fn data(rel: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    root.join(rel).display().to_string()
}

fn prismal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prismal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("prismal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn version_lists_identity_map() {
    let o = prismal(&["--version"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("identity map v1"), "{s}");
    assert!(s.contains("iminve"));
}

#[test]
fn check_subset_passes() {
    let out = tmp("iminve.json");
    let o = prismal(&[
        "check",
        "--suite",
        "iminve",
        "--max-dim",
        "3",
        "--json",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let reports: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let reports = reports.as_array().unwrap();
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|r| r["identity"] == "iminve" && r["passed"] == true));
}

#[test]
fn check_with_user_map() {
    let o = prismal(&[
        "check",
        "--suite",
        "bord",
        "--max-dim",
        "2",
        "--complex",
        &data("strip/complex.json"),
        "--morphism",
        &data("strip/morphism.json"),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("relative"));
}

#[test]
fn corrupted_complex_is_a_validation_error() {
    let bad = tmp("bad-complex.json");
    std::fs::write(&bad, r#"{"vertices":[1,2],"maximal_simplices":[[1,3]]}"#).unwrap();
    let o = prismal(&[
        "check",
        "--suite",
        "bord",
        "--complex",
        bad.to_str().unwrap(),
        "--morphism",
        &data("strip/morphism.json"),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("validation error"));
}

#[test]
fn unparsable_file_is_a_validation_error() {
    let bad = tmp("garbage.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let o = prismal(&[
        "sheaf",
        "--complex",
        bad.to_str().unwrap(),
        "--morphism",
        &data("strip/morphism.json"),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn strip_sheaves_match_golden_dump() {
    let out = tmp("strip-sheaf.json");
    let o = prismal(&[
        "sheaf",
        "--complex",
        &data("strip/complex.json"),
        "--morphism",
        &data("strip/morphism.json"),
        "--dump-sheaf",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let got: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let golden: serde_json::Value = serde_json::from_str(include_str!("golden/strip-sheaf.json")).unwrap();
    assert_eq!(got, golden);
}

#[test]
fn identity_map_sheaves() {
    let o = prismal(&["sheaf", "--fixture", "identity-triangle"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("preimages rebuilt from products: match"));
}

#[test]
fn loaded_sheaves_are_checked() {
    let o = prismal(&["sheaf", "--load", &data("sheaves/product-prism.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = prismal(&["sheaf", "--load", &data("sheaves/missing-cell.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("product characterization: fails"));
}

fn primitive(dir: &str, form: &str, extra: &[&str]) -> (Output, PathBuf) {
    let out = tmp(&format!("{dir}-{form}"));
    let complex = data(&format!("{dir}/complex.json"));
    let morphism = data(&format!("{dir}/morphism.json"));
    let form = data(&format!("{dir}/{form}"));
    let mut args = vec![
        "primitive",
        "--complex",
        &complex,
        "--morphism",
        &morphism,
        "--form",
        &form,
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    (prismal(&args), out)
}

#[test]
fn strip_primitive_succeeds_with_oracle() {
    let (o, out) = primitive("strip", "form.json", &["--check-horizontal", "--oracle-eps", "1e-4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let summary = &file["summary"];
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["nonzero_residuals"], 0);
    assert!(summary["oracle_checks"].as_u64().unwrap() > 0);
    assert!(summary["oracle_max_error"].as_f64().unwrap() <= 1e-6);
    let prisms = file["prisms"].as_array().unwrap();
    assert!(prisms
        .iter()
        .all(|p| p.get("h").is_some() && p.get("h_s").is_some() && p.get("c").is_some()));
}

#[test]
fn primitive_output_is_deterministic() {
    let (_, a) = primitive(
        "tetrahedra",
        "form.json",
        &["--check-horizontal", "--oracle-eps", "1e-4", "--seed", "7"],
    );
    let first = std::fs::read_to_string(&a).unwrap();
    let (_, b) = primitive(
        "tetrahedra",
        "form.json",
        &["--check-horizontal", "--oracle-eps", "1e-4", "--seed", "7"],
    );
    assert_eq!(first, std::fs::read_to_string(&b).unwrap());
}

#[test]
fn exact_form_below_top_degree() {
    let (o, _) = primitive("five-simplex", "exact.json", &["--check-horizontal"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn non_exact_form_exits_two() {
    let (o, _) = primitive("five-simplex", "not-exact.json", &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("exactness error") && err.contains("residual"), "{err}");
}
