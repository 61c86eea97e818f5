use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ekac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ekac"))
        .args(args)
        .env("EKAC_WORKERS", "2")
        .output()
        .expect("spawn ekac")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const CONFIG: &str = r#"
polynomial = "T^2"
m_max = 4
seed = 99

[input]
kind = "all-integers"
x = 20000

[[functions]]
kind = "omega"
"#;

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.toml");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn lists_presets() {
    let o = ekac(&["presets"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["thm11-omega", "cor1-omega-square", "ex2-product-classes", "thm15-shifted"] {
        assert!(text.lines().any(|l| l == name), "{text}");
    }
}

#[test]
fn verify_is_deterministic_and_passes() {
    let a = ekac(&["verify"]);
    let b = ekac(&["verify"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("all checks passed"));
}

#[test]
fn verify_reports_witness_when_perturbed() {
    let o = ekac(&["verify", "--perturb-h"]);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    assert!(text.contains("FAIL"));
    assert!(text.contains("witness: ") && text.contains("r="), "{text}");
}

#[test]
fn rejects_negative_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), &CONFIG.replace("T^2", "T1-T2").replace("[[functions]]\nkind = \"omega\"", "[[functions]]\nkind = \"omega\"\n\n[[functions]]\nkind = \"omega\""));
    let o = ekac(&["stats", "--config", &path]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn usage_errors_are_configuration_errors() {
    assert_eq!(ekac(&["stats"]).status.code(), Some(1));
    assert_eq!(ekac(&["stats", "--preset", "no-such-preset"]).status.code(), Some(1));
    assert_eq!(ekac(&["--bogus"]).status.code(), Some(1));
}

#[test]
fn malformed_toml_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "polynomial = \"T\"\n[input]\nkind = \"all-integers\"\nx = 5 5\n");
    let o = ekac(&["stats", "--config", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn missing_config_file_is_io_error() {
    let o = ekac(&["stats", "--config", "/nonexistent/run.toml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn experiment_writes_outputs_with_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), CONFIG);
    let out = dir.path().join("out");
    let o = ekac(&["experiment", "--config", &path, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));

    let moments = fs::read_to_string(out.join("moments.csv")).unwrap();
    let mut lines = moments.lines();
    let hash_line = lines.next().unwrap();
    assert!(hash_line.starts_with("# config_sha256=") && hash_line.len() == "# config_sha256=".len() + 64);
    assert_eq!(lines.next(), Some("# seed=99"));
    assert_eq!(lines.next(), Some("m,M_m,C_m,ratio,predicted"));
    assert_eq!(lines.count(), 5);

    let hist = fs::read_to_string(out.join("histogram.csv")).unwrap();
    assert!(hist.lines().any(|l| l == "bin_lo,bin_hi,count"));
    let total: u64 = hist
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("bin"))
        .map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 20_000);

    let fit: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("fit.json")).unwrap()).unwrap();
    assert_eq!(fit["n"], 20_000);
    assert_eq!(fit["seed"], 99);
    assert_eq!(fit["approximate"], false);
    let stats: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("stats.json")).unwrap()).unwrap();
    assert_eq!(stats["config_sha256"], fit["config_sha256"]);
    assert_eq!(stats["polynomial"], "T1^2");
}

#[test]
fn moments_match_between_worker_counts() {
    let one = ekac(&["moments", "--preset", "thm11-omega", "--x", "50000", "--workers", "1"]);
    let four = ekac(&["moments", "--preset", "thm11-omega", "--x", "50000", "--workers", "4"]);
    assert!(one.status.success() && four.status.success());
    let rows = |o: &Output| -> Vec<Vec<f64>> {
        stdout(o)
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with('m'))
            .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
            .collect()
    };
    for (a, b) in rows(&one).iter().zip(rows(&four)) {
        for (u, v) in a.iter().zip(&b) {
            assert!((u - v).abs() <= 1e-9 * u.abs().max(v.abs()).max(1e-300), "{u} vs {v}");
        }
    }
}

#[test]
fn seed_flag_is_recorded() {
    let o = ekac(&["stats", "--preset", "thm11-omega", "--x", "10000", "--seed", "5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 5);
    assert_eq!(v["x"], 10_000);
}
