use std::process::{Command, Output};

fn trigap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trigap")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn airy_scan_writes_csv() {
    let o = trigap(&["airy-scan", "--s", "0", "--kappa-min", "0", "--kappa-max", "4", "--steps", "5"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "kappa,f_mid,f_width");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("0,0.18377629847393"));
}

#[test]
fn scan_writes_csv() {
    let o = trigap(&["scan", "--grid", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "s,mu_hat2_upper,mu_bar3_lo,mu_bar3_hi,mu3_transferred_lo");
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "0");
    assert!(first[2].parse::<f64>().unwrap() < 23.7245 && first[3].parse::<f64>().unwrap() > 23.7244);
}

#[test]
fn oracle_subcommands_emit_json() {
    let o = trigap(&["oracle", "fd", "--problem", "3", "--s", "0", "--k", "2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let e = v["eigs"].as_array().unwrap();
    assert_eq!(e.len(), 2);
    assert!((e[0].as_f64().unwrap() - 7.441).abs() < 1e-2);

    let o = trigap(&["oracle", "fem", "--s", "0", "--t", "1", "--level", "4", "--k", "2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["eigs"][0].as_f64().unwrap() - 24.674).abs() < 0.05 * 24.674);

    let o = trigap(&["oracle", "fd", "--problem", "2", "--s", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn prove_exit_codes() {
    let dir = std::env::temp_dir().join(format!("trigap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cert = dir.join("weak.json");
    let o = trigap(&["prove", "--n-basis", "2", "--ns", "4", "--out", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(v["verdict"], "NotProven");
    assert!(trigap(&["verify", "--cert", cert.to_str().unwrap()]).status.success());
    // a not-proven certificate cannot back a sandwich check
    let o = trigap(&["oracle", "check", "--cert", cert.to_str().unwrap(), "--s", "0.2", "--t", "0.01", "--level", "4"]);
    assert_eq!(o.status.code(), Some(1));

    let o = trigap(&["prove", "--threshold", "30", "--ns", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["error"]["stage"], "airy");
    std::fs::remove_dir_all(&dir).ok();
}
