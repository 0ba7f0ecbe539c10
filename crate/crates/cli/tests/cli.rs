use std::process::{Command, Output};

fn derange(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_derange"))
        .args(args)
        .env_remove("DERANGE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn exact_lambda_prints_fifteen_digits() {
    let o = derange(&["exact", "lambda", "--theta", "1", "--n", "10"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "0.367879464285714");
    let o = derange(&[
        "exact", "lambda", "--theta", "1", "--n", "4", "--method", "altsum",
    ]);
    assert_eq!(stdout(&o).trim(), "0.375");
}

#[test]
fn exact_pmf() {
    let o = derange(&[
        "exact",
        "pmf",
        "--what",
        "cycle-count",
        "--theta",
        "1",
        "--n",
        "6",
        "--j",
        "2",
        "--r",
        "0",
    ]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 160.0 / 265.0).abs() < 1e-14);
    let o = derange(&[
        "exact",
        "pmf",
        "--what",
        "num-cycles",
        "--theta",
        "1",
        "--n",
        "4",
        "--r",
        "2",
    ]);
    assert_eq!(stdout(&o).trim(), "0.333333333333333");
    let o = derange(&[
        "exact",
        "pmf",
        "--what",
        "single-cycle",
        "--theta",
        "1",
        "--n",
        "10",
    ]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 0.272).abs() < 5e-4);
    // cycle-count needs --j
    assert_eq!(
        code(&derange(&[
            "exact",
            "pmf",
            "--what",
            "cycle-count",
            "--theta",
            "1",
            "--n",
            "6"
        ])),
        1
    );
}

fn cycles_of(perm: &[usize]) -> Vec<usize> {
    let n = perm.len();
    let mut seen = vec![false; n + 1];
    let mut lens = Vec::new();
    for s in 1..=n {
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x - 1];
            len += 1;
        }
        if len > 0 {
            lens.push(len);
        }
    }
    lens
}

#[test]
fn sample_jsonl_permutations_are_one_based() {
    for method in ["chain", "feller", "poisson"] {
        let o = derange(&[
            "sample",
            "--method",
            method,
            "--theta",
            "2",
            "--n",
            "12",
            "--reps",
            "50",
            "--seed",
            "3",
            "--emit",
            "permutation",
        ]);
        assert_eq!(code(&o), 0);
        let text = stdout(&o);
        assert_eq!(text.lines().count(), 50);
        for line in text.lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            let lengths: Vec<usize> = serde_json::from_value(v["lengths"].clone()).unwrap();
            let perm: Vec<usize> = serde_json::from_value(v["perm"].clone()).unwrap();
            let mut sorted = perm.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (1..=12).collect::<Vec<_>>());
            assert!(perm.iter().enumerate().all(|(i, &x)| x != i + 1));
            assert_eq!(cycles_of(&perm), lengths);
        }
    }
}

#[test]
fn sample_formats() {
    let o = derange(&[
        "sample", "--method", "chain", "--theta", "1", "--n", "9", "--reps", "20", "--seed", "1",
    ]);
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let l: Vec<usize> = serde_json::from_value(v["lengths"].clone()).unwrap();
        assert_eq!(l.iter().sum::<usize>(), 9);
    }
    let o = derange(&[
        "sample", "--method", "chain", "--theta", "1", "--n", "9", "--reps", "20", "--seed", "1",
        "--emit", "counts",
    ]);
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let total: u64 = v["counts"]
            .as_object()
            .unwrap()
            .iter()
            .map(|(j, c)| j.parse::<u64>().unwrap() * c.as_u64().unwrap())
            .sum();
        assert_eq!(total, 9);
    }
    let o = derange(&[
        "sample", "--method", "chain", "--theta", "1", "--n", "6", "--reps", "4", "--seed", "1",
        "--emit", "counts", "--format", "csv",
    ]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "sample,c_2,c_3,c_4,c_5,c_6");
    assert_eq!(lines.count(), 4);
    let o = derange(&[
        "sample", "--method", "chain", "--theta", "1", "--n", "6", "--reps", "4", "--seed", "1",
        "--format", "csv",
    ]);
    assert!(stdout(&o).starts_with("sample,lengths\n0,"));
}

#[test]
fn seed_from_environment() {
    let args = [
        "sample", "--method", "chain", "--theta", "1.5", "--n", "30", "--reps", "10",
    ];
    let from_env = Command::new(env!("CARGO_BIN_EXE_derange"))
        .args(args)
        .env("DERANGE_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(code(&from_env), 0);
    let mut with_flag = args.to_vec();
    with_flag.extend(["--seed", "42"]);
    assert_eq!(stdout(&from_env), stdout(&derange(&with_flag)));
    // the flag wins over the environment
    let overridden = Command::new(env!("CARGO_BIN_EXE_derange"))
        .args(&with_flag[..with_flag.len() - 1])
        .arg("43")
        .env("DERANGE_SEED", "42")
        .output()
        .unwrap();
    assert_ne!(stdout(&overridden), stdout(&from_env));
    // no seed at all is a usage error
    assert_eq!(code(&derange(&args)), 1);
}

#[test]
fn estimate_reports_json() {
    let o = derange(&[
        "estimate",
        "--stat",
        "single_cycle",
        "--method",
        "chain",
        "--theta",
        "1",
        "--n",
        "10",
        "--reps",
        "20000",
        "--seed",
        "5",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let point = v["point"].as_f64().unwrap();
    let se = v["std_error"].as_f64().unwrap();
    assert!((point - 0.2718).abs() < 4.0 * se + 1e-3);
    assert_eq!(v["reps"], 20000);
    assert_eq!(
        code(&derange(&[
            "estimate", "--stat", "nope", "--method", "chain", "--theta", "1", "--n", "10",
            "--reps", "5", "--seed", "5"
        ])),
        1
    );
}

#[test]
fn table_output() {
    let args = [
        "table",
        "--id",
        "4",
        "--reps",
        "2000",
        "--seed",
        "9",
        "--no-timings",
    ];
    let a = derange(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&derange(&args)));
    let text = stdout(&a);
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("n,θ = 0.5 sim,θ = 0.5 exact,θ = 0.5 asymp"));
    assert_eq!(text.lines().count(), 4);
    let md = derange(&[
        "table", "--id", "5", "--reps", "500", "--seed", "9", "--format", "md",
    ]);
    assert!(stdout(&md).lines().any(|l| l.starts_with("| ∞ |")));
    assert_eq!(
        code(&derange(&[
            "table", "--id", "7", "--reps", "10", "--seed", "1"
        ])),
        1
    );
    assert_eq!(
        code(&derange(&[
            "table", "--id", "12", "--reps", "10", "--seed", "1"
        ])),
        1
    );
}

#[test]
fn verify_suite() {
    let o = derange(&["verify", "--max-n", "8", "--theta-list", "0.5,2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).trim_end().ends_with("total violations: 0"));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&derange(&[])), 1);
    assert_eq!(code(&derange(&["--help"])), 0);
    assert_eq!(
        code(&derange(&["exact", "lambda", "--theta", "-1", "--n", "5"])),
        1
    );
    assert_eq!(
        code(&derange(&["exact", "lambda", "--theta", "x", "--n", "5"])),
        1
    );
    let guard = derange(&[
        "sample",
        "--method",
        "feller",
        "--theta",
        "50",
        "--n",
        "200",
        "--reps",
        "1",
        "--seed",
        "1",
        "--max-draws",
        "100000",
    ]);
    assert_eq!(code(&guard), 3);
    assert!(!guard.stderr.is_empty());
}
