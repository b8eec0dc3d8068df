use std::fs;
use std::process::{Command, Output};

use otto_cli::output::parse_csv;

fn otto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_otto"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    parse_csv(text).2
}

fn column(text: &str, name: &str) -> Vec<f64> {
    let (_, header, rows) = parse_csv(text);
    let i = header.iter().position(|h| h == name).expect("column present");
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn exit_codes() {
    assert_eq!(otto(&["cycle"]).status.code(), Some(0));
    assert_eq!(otto(&["figure", "5"]).status.code(), Some(2));
    assert_eq!(otto(&["cycle", "--u", "1.5"]).status.code(), Some(2));
    assert_eq!(otto(&["cycle", "--tol", "1e-3"]).status.code(), Some(2));
    assert_eq!(otto(&["nonsense"]).status.code(), Some(2));
    assert_eq!(otto(&["cycle", "--config", "/nonexistent/x.cfg"]).status.code(), Some(1));
    // non-engine spec is informational
    let o = otto(&["cycle", "--beta-c", "0.5", "--beta-h", "0.5", "--u", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("is_engine true"));
    // relaxation that cannot converge is a numerical failure
    let o = otto(&["relax", "--medium", "oscillator", "--n", "1", "--n-max", "10", "--trunc-eps", "1e-3", "--tol", "1e-9"]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn occupation_schema_and_values() {
    let o = otto(&["occupation", "--x", "1", "--u", "0,0.5", "--tol", "1e-10"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let (_, header, _) = parse_csv(&text);
    assert_eq!(header.join(","), "x,u,N,planck,band_oracle,abs_diff");
    let n = column(&text, "N");
    let planck = column(&text, "planck");
    let oracle = column(&text, "band_oracle");
    assert_eq!(n[0], planck[0]);
    assert!((n[1] - 0.545_100).abs() < 1e-6);
    assert!((n[1] - oracle[1]).abs() < 1e-10);
}

#[test]
fn cycle_report() {
    let o = otto(&["cycle", "--medium", "oscillator"]);
    let text = stdout(&o);
    let w: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("W_out"))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((w - 0.388_582).abs() < 1e-5);
    let residual: f64 = text
        .lines()
        .find_map(|l| l.split_once("conservation |W_AB+Q_H+W_CD+Q_C| = "))
        .unwrap()
        .1
        .parse()
        .unwrap();
    assert!(residual < 1e-12);

    let o = otto(&["cycle", "--medium", "qubit", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ledger"]["eta"], 0.5);
    for field in ["e_a", "e_b", "e_c", "e_d", "w_ab", "q_h", "w_cd", "q_c", "w_out", "is_engine"] {
        assert!(!v["ledger"][field].is_null(), "{field}");
    }
    assert_eq!(v["config"]["medium"], "qubit");
}

#[test]
fn figure_schemas_and_rerun() {
    let dir = tempfile::tempdir().unwrap();
    for (which, header, rows) in [
        ("1", "eta,beta_ratio,u,W_out,engine", 99 * 19 * 3),
        ("2", "beta_ratio,u,eta_mw,eta_carnot,eta_ca,engine", 19 * 3),
        ("3", "eta,beta_ratio,u,W_out,engine", 99 * 19 * 3),
        ("4", "beta_ratio,u,eta_mw,eta_carnot,eta_ca,engine", 19 * 3),
    ] {
        let a = dir.path().join(format!("fig{which}a.csv"));
        let b = dir.path().join(format!("fig{which}b.csv"));
        for p in [&a, &b] {
            let o = otto(&["figure", which, "--out", p.to_str().unwrap()]);
            assert!(o.status.success());
        }
        let (ta, tb) = (fs::read_to_string(&a).unwrap(), fs::read_to_string(&b).unwrap());
        assert_eq!(ta, tb, "byte-identical rerun");
        assert!(ta.starts_with("# schema_version=1\n"));
        assert!(ta.contains("# config_sha256="));
        let (_, h, r) = parse_csv(&ta);
        assert_eq!(h.join(","), header);
        assert_eq!(r.len(), rows);
    }
}

#[test]
fn figure_four_at_rest_is_curzon_ahlborn() {
    let text = stdout(&otto(&["figure", "4", "--u", "0"]));
    let mw = column(&text, "eta_mw");
    let ca = column(&text, "eta_ca");
    for (a, b) in mw.iter().zip(&ca) {
        assert!((a - b).abs() < 1e-9);
    }
    let text = stdout(&otto(&["figure", "2", "--u", "0"]));
    for (a, b) in column(&text, "eta_mw").iter().zip(&column(&text, "eta_ca")) {
        assert!(a >= b);
    }
}

#[test]
fn config_file_reproduces_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fig.cfg");
    fs::write(&cfg, "# figure 3 at two velocities\ncommand = figure\nwhich = 3\nu = 0, 0.5\n").unwrap();
    let from_file = stdout(&otto(&["figure", "--config", cfg.to_str().unwrap()]));
    let from_flags = stdout(&otto(&["figure", "3", "--u", "0,0.5"]));
    assert_eq!(from_file, from_flags);
    assert!(from_file.contains("# config: u=0,0.5\n"));
}

#[test]
fn optimize_reports() {
    let text = stdout(&otto(&["optimize", "--u", "1e-8"]));
    let eta: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("numeric eta*"))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((eta - 0.5).abs() < 1e-6);

    let q: serde_json::Value =
        serde_json::from_slice(&otto(&["optimize", "--medium", "qubit", "--u", "0", "--json"]).stdout).unwrap();
    let o: serde_json::Value =
        serde_json::from_slice(&otto(&["optimize", "--u", "0", "--json"]).stdout).unwrap();
    assert!(q["numeric"]["eta_star"].as_f64().unwrap() >= o["numeric"]["eta_star"].as_f64().unwrap());

    let o = otto(&["optimize", "--beta-h", "1", "--u", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("not an engine"));
}

#[test]
fn efftemp_table() {
    let text = stdout(&otto(&["efftemp", "--u", "0"]));
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("qubit ") || l.starts_with("oscillator "))
        .collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.contains("0.250000") && r.ends_with("true")));
    assert!(text.contains("verdict: consistent"));

    let text = stdout(&otto(&["efftemp"]));
    assert_eq!(text.matches("0.262763").count(), 4);
    assert!(text.contains("verdict: no effective temperature"));
}

#[test]
fn relax_outputs() {
    let o = otto(&["relax", "--tol", "1e-6", "--n", "0.5"]);
    assert!(o.status.success());
    let note = String::from_utf8(o.stderr.clone()).unwrap();
    let t: f64 = note
        .split_whitespace()
        .find_map(|w| w.strip_prefix("t_relax="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((t - 6.21).abs() < 0.01);
    assert_eq!(parse_csv(&stdout(&o)).1.join(","), "time,p_excited,re_coh,im_coh");

    let text = stdout(&otto(&["relax", "--medium", "oscillator", "--n", "1"]));
    let last = data_rows(&text).pop().unwrap();
    for (n, p) in last[1..].iter().enumerate() {
        let p: f64 = p.parse().unwrap();
        assert!((p - 0.5f64.powi(n as i32 + 1)).abs() < 1e-8);
    }

    let o = otto(&["relax", "--initial", "steady"]);
    assert_eq!(data_rows(&stdout(&o)).len(), 1);
    assert!(String::from_utf8(o.stderr).unwrap().contains("t_relax=0 "));
}
