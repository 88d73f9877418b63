use std::path::Path;
use std::process::{Command, Output};

use csg_core::transform::{bits_from_mask, qubo_energy, read_qubo_json, read_qubo_text};
use serde_json::Value;

fn csg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = csg(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn without_timing(report: &str) -> String {
    let mut v: Value = serde_json::from_str(report).unwrap();
    v.as_object_mut().unwrap().remove("timing");
    v.to_string()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_writes_every_coalition() {
    let text = ok(&["gen", "--agents", "3", "--dist", "normal", "--seed", "7"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["n"], 3);
    assert_eq!(v["values"].as_object().unwrap().len(), 7);
    assert_eq!(
        text,
        ok(&["gen", "--agents", "3", "--dist", "normal", "--seed", "7"])
    );
}

#[test]
fn exact_methods_agree_on_a_saved_game() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("game.json");
    ok(&[
        "gen",
        "--agents",
        "3",
        "--dist",
        "mu",
        "--seed",
        "2",
        "--out",
        path(&game),
    ]);
    let value = |method: &str| -> f64 {
        let v: Value =
            serde_json::from_str(&ok(&["solve", "--game", path(&game), "--method", method]))
                .unwrap();
        assert_eq!(v["feasible"], true);
        v["best_value"].as_f64().unwrap()
    };
    let dp = value("dp");
    assert_eq!(dp, value("enum"));
    assert!((dp - value("qubo-brute")).abs() <= 1e-9 * dp.abs().max(1.0));
}

#[test]
fn solve_reports_are_reproducible() {
    for method in ["sa", "qaoa"] {
        let args = [
            "solve", "--agents", "2", "--dist", "weibull", "--seed", "4", "--method", method,
        ];
        let a = ok(&args);
        assert_eq!(without_timing(&a), without_timing(&ok(&args)), "{method}");
    }
}

#[test]
fn qaoa_fixed_depth() {
    let v: Value = serde_json::from_str(&ok(&[
        "solve", "--agents", "2", "--method", "qaoa", "--p", "2", "--shots", "64",
    ]))
    .unwrap();
    assert_eq!(v["metadata"]["p_min"], 2);
    assert_eq!(v["metadata"]["p_max"], 2);
    assert_eq!(v["metadata"]["result"]["p"], 2);
    let counts = v["metadata"]["result"]["counts"].as_object().unwrap();
    assert_eq!(
        counts.values().map(|c| c.as_u64().unwrap()).sum::<u64>(),
        64
    );
}

#[test]
fn exports_read_back() {
    let dir = tempfile::tempdir().unwrap();
    let text = dir.path().join("q.txt");
    let json = dir.path().join("q.json");
    let ising = dir.path().join("i.json");
    let base = [
        "export", "--agents", "3", "--dist", "laplace", "--seed", "1",
    ];
    for (format, file) in [
        ("qubo-text", &text),
        ("qubo-json", &json),
        ("ising-json", &ising),
    ] {
        let mut args = base.to_vec();
        args.extend(["--format", format, "--out", path(file)]);
        ok(&args);
    }
    let a = read_qubo_text(std::io::BufReader::new(std::fs::File::open(&text).unwrap())).unwrap();
    let b = read_qubo_json(std::fs::File::open(&json).unwrap()).unwrap();
    for mask in 0..1u64 << 7 {
        let x = bits_from_mask(mask, 7);
        assert_eq!(qubo_energy(&a, &x).unwrap(), qubo_energy(&b, &x).unwrap());
    }
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&ising).unwrap()).unwrap();
    assert_eq!(v["m"], 7);
}

#[test]
fn analyze_default_table() {
    let csv = ok(&["analyze"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "n,p,s_mode,s,ip_cost,idp_boss_cost,bilpq_gates,log10_ip,log10_idp,log10_bilpq"
    );
    assert_eq!(lines.len(), 1 + 63 * 4 * 3);
    assert!(lines.contains(&"14,50,min,16383,11112006825558016,4782969,4112133,16.045792499495331,6.6796975660752738,6.6140671527362436"));
}

#[test]
fn bench_grid_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench");
    let args = [
        "bench",
        "--methods",
        "sa,dp",
        "--agents",
        "2..3",
        "--dists",
        "normal,F",
        "--seeds",
        "2",
        "--out",
        path(&out),
    ];
    ok(&args);
    let files = std::fs::read_dir(&out).unwrap().count();
    assert_eq!(files, 2 * 2 * 2 * 2 + 1);
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 17);
    assert!(summary
        .lines()
        .skip(1)
        .all(|l| l.split(',').nth(7) == Some("true")));
    assert!(out.join("sa-F-n3-seed1.json").exists());
}

#[test]
fn bench_flushes_partial_results() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench");
    let result = csg(&[
        "bench",
        "--methods",
        "sa,enum",
        "--agents",
        "2",
        "--dists",
        "abu",
        "--exclude",
        "3",
        "--out",
        path(&out),
    ]);
    assert_eq!(result.status.code(), Some(2));
    assert!(out.join("sa-ABU-n2-seed0.json").exists());
    assert!(!out.join("enum-ABU-n2-seed0.json").exists());
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary
        .lines()
        .any(|l| l.starts_with("enum,ABU,2,0,") && l.ends_with(",config")));
}

#[test]
fn errors_are_one_json_line_with_exit_codes() {
    for (args, code, kind) in [
        (
            vec![
                "solve", "--agents", "3", "--dist", "cauchy", "--method", "dp",
            ],
            2,
            "config",
        ),
        (
            vec!["solve", "--agents", "25", "--method", "dp"],
            3,
            "resource-limit",
        ),
        (
            vec!["solve", "--agents", "5", "--method", "qaoa"],
            3,
            "resource-limit",
        ),
        (
            vec![
                "solve",
                "--agents",
                "2",
                "--method",
                "sa",
                "--exclude",
                "1,3",
            ],
            4,
            "infeasible",
        ),
        (
            vec!["solve", "--agents", "2", "--method", "sa", "--lambda", "-1"],
            2,
            "config",
        ),
        (
            vec!["solve", "--agents", "2", "--method", "annealing"],
            2,
            "config",
        ),
        (vec!["frobnicate"], 2, "config"),
    ] {
        let out = csg(&args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        let stderr = String::from_utf8(out.stderr).unwrap();
        assert_eq!(stderr.lines().count(), 1);
        let v: Value = serde_json::from_str(stderr.trim()).unwrap();
        assert_eq!(v["error"], kind);
    }
}

#[test]
fn malformed_game_file_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("bad.json");
    std::fs::write(&game, "{\n  \"n\": 2,\n  \"values\": {\"1\": 1.0,,}\n}\n").unwrap();
    let out = csg(&["solve", "--game", path(&game), "--method", "dp"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_str(String::from_utf8(out.stderr).unwrap().trim()).unwrap();
    assert_eq!(v["error"], "parse");
    assert!(v["message"].as_str().unwrap().contains("line 3"), "{v}");

    std::fs::write(&game, "{\"n\": 2, \"values\": [1, 2, 3]}").unwrap();
    let out = csg(&["solve", "--game", path(&game), "--method", "dp"]);
    let v: Value = serde_json::from_str(String::from_utf8(out.stderr).unwrap().trim()).unwrap();
    assert_eq!(v["error"], "schema");
}
