use std::path::Path;
use std::process::{Command, Output};

fn tool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spiral-dirac")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn static_example_has_twelve_rows() {
    let out = tool(&[
        "spectrum-static", "--m", "0", "--r0", "1", "--beta", "0,1", "--n", "0..2", "--l", "0", "--s", "+1",
        "--methods", "exact,asymptotic",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,l,s,zeta,beta,omega,r0_eff,rho0,method,branch,zero_used,energy,small_x0_flag");
    assert_eq!(lines.len(), 13);
    // jointly sorted by method first
    assert!(lines[1..7].iter().all(|l| l.contains(",exact,")));
    assert!(lines[7..].iter().all(|l| l.contains(",asymptotic,")));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "run.toml", "m = 1\nr0 = 2\nn = \"0..1\"\n");
    let file = tool(&["spectrum-static", "--config", &config]);
    let flagged = tool(&["spectrum-static", "--config", &config, "--r0", "3"]);
    assert!(file.status.success() && flagged.status.success());
    assert!(stdout(&file).contains(",2.0000000000000000e0,"));
    assert!(stdout(&flagged).contains(",3.0000000000000000e0,"));
    assert!(!stdout(&flagged).contains(",2.0000000000000000e0,"));
}

#[test]
fn config_errors_exit_one_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", "m = 1\nr0 = 1\nradius = 4\n");
    let out = tool(&["spectrum-static", "--config", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`radius`"));

    let out = tool(&["spectrum-rotating", "--m", "1", "--omega", "0.1", "--r0", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`r0`"));

    assert_eq!(tool(&["spectrum-static", "--m", "1", "--r0", "1", "--omega", "0.1"]).status.code(), Some(1));
    assert_eq!(tool(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn io_errors_exit_three() {
    let out = tool(&["spectrum-static", "--m", "1", "--r0", "1", "--out", "/nonexistent/dir/t.csv"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/dir/t.csv"));
    let out = tool(&["spectrum-static", "--config", "/nonexistent/run.toml"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn rotating_rows_carry_light_cone_radius() {
    let out = tool(&["spectrum-rotating", "--m", "1", "--omega", "0.2", "--beta", "0,1,4.9", "--n", "0..1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    for record in reader.records() {
        let record = record.unwrap();
        let beta: f64 = record[4].parse().unwrap();
        let omega: f64 = record[5].parse().unwrap();
        let r0_eff: f64 = record[6].parse().unwrap();
        let expected = (1.0 - beta * beta * omega * omega).sqrt() / omega;
        assert!((r0_eff - expected).abs() <= 1e-14 * expected);
    }
}

#[test]
fn massless_nonrel_rows_report_mass_required() {
    let out = tool(&["spectrum-static", "--m", "0", "--r0", "1", "--methods", "nonrelativistic", "--n", "0..2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().skip(1).all(|l| l.contains("error: parameter error: mass required")));
}

#[test]
fn verify_quick_passes_and_perturbation_fails() {
    let out = tool(&["verify", "--level", "quick"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("0 failed"));

    let out = tool(&["verify", "--level", "quick", "--perturb-zeros", "0.01"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).lines().any(|l| l.starts_with("FAIL shooting vs zero")));
}

#[test]
fn verify_full_reports_convergence_order() {
    let out = tool(&["verify", "--level", "full"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let line = text.lines().find(|l| l.contains("convergence order of structure equation")).unwrap();
    let order: f64 = line.rsplit(": ").next().unwrap().parse().unwrap();
    assert!((order - 2.0).abs() < 0.2);
}

#[test]
fn wavefunction_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.csv");
    let out = tool(&[
        "wavefunction", "--n", "2", "--l", "1", "--s", "-1", "--beta", "0.3", "--r0", "1.5", "--samples", "3000",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,re_u,im_u,abs_u"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3000);
    assert!((rows[2999][0] - 1.5).abs() < 1e-15);
    for row in &rows {
        assert!((row[1].hypot(row[2]) - row[3]).abs() < 1e-12);
    }

    let rotating = tool(&["wavefunction", "--n", "1", "--omega", "0.5", "--beta", "1", "--samples", "1000"]);
    assert!(rotating.status.success());
    let both = tool(&["wavefunction", "--omega", "0.5", "--r0", "1"]);
    assert_eq!(both.status.code(), Some(1));
}

#[test]
fn zeros_listing() {
    let out = tool(&["zeros", "--nu", "1", "--count", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("k,zero,mcmahon\n1,3.8317059702075"));
    assert_eq!(tool(&["zeros", "--nu", "-1"]).status.code(), Some(1));
}

#[test]
fn json_lines_output() {
    let out = tool(&["spectrum-static", "--m", "1", "--r0", "1", "--n", "0..1", "--format", "json-lines"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2);
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(first["method"], "exact");
    assert!(first["energy"].as_f64().unwrap() > 1.0);
}
