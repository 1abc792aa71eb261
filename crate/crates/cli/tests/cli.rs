use std::process::{Command, Output};

fn qspeedup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qspeedup"))
        .args(args)
        .env_remove("QSPEEDUP_MAX_FAMILY")
        .output()
        .expect("failed to spawn qspeedup")
}

fn stdout(args: &[&str]) -> String {
    let out = qspeedup(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn amplitudes(line: &str) -> Vec<(f64, f64)> {
    let body = line.split_once('\t').unwrap().1;
    body.split(") (")
        .map(|pair| {
            let pair = pair.trim_matches(|c| c == '(' || c == ')');
            let (re, im) = pair.split_once(", ").unwrap();
            (re.parse().unwrap(), im.parse().unwrap())
        })
        .collect()
}

#[test]
fn rule_row_for_deutsch() {
    assert_eq!(stdout(&["rule", "--family", "deutsch"]), "deutsch\tbalanced\t2\t1\t0\t1\tPASS\n");
}

#[test]
fn rule_rows_for_the_search_family() {
    assert_eq!(stdout(&["rule", "--family", "grover2"]), "grover2\tlocation\t3\t1\t0\t1\tPASS\n");
    assert_eq!(
        stdout(&["rule", "--family", "grover2", "--mode", "row"]),
        "grover2\tlocation\t3\t1\t12\t1\tPASS\n"
    );
}

#[test]
fn grover2_final_state() {
    let out = stdout(&["simulate", "--family", "grover2", "--emit", "state"]);
    let psi2 = out.lines().find(|l| l.starts_with("psi2\t")).unwrap();
    let amps = amplitudes(psi2);
    assert_eq!(amps.len(), 32);
    // nonzero only on x = k, with V antisymmetric
    let r = 0.5 / 2f64.sqrt();
    for k in 0..4 {
        for x in 0..4 {
            for v in 0..2 {
                let (re, im) = amps[(k * 4 + x) * 2 + v];
                let expected = if x == k { r } else { 0.0 };
                assert!((re.abs() - expected).abs() < 1e-6 && im.abs() < 1e-6, "k={k} x={x} v={v}");
            }
        }
    }
}

#[test]
fn printed_states_are_normalized() {
    for family in ["deutsch", "dj2", "bv2", "simon2", "grover2", "grover3", "grover4", "minute", "perm"] {
        let out = stdout(&["simulate", "--family", family]);
        assert_eq!(out.lines().count(), 3);
        for line in out.lines() {
            let total: f64 = amplitudes(line).iter().map(|(re, im)| re * re + im * im).sum();
            assert!((total - 1.0).abs() < 1e-6, "{family}: {total}");
        }
    }
}

#[test]
fn steps_limit_the_stages() {
    let out = stdout(&["simulate", "--family", "deutsch", "--steps", "0"]);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("psi0\t"));
}

#[test]
fn deutsch_distribution_table() {
    let out = stdout(&["simulate", "--family", "deutsch", "--emit", "table"]);
    assert_eq!(
        out,
        "# deutsch psi2\nk\t0\t1\n00\t1.000000\t0.000000\n01\t0.000000\t1.000000\n10\t0.000000\t1.000000\n11\t1.000000\t0.000000\n"
    );
}

#[test]
fn deutsch_history_table() {
    let out = stdout(&["histories", "--family", "deutsch", "--emit", "table"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 17);
    assert_eq!(lines[1], "#1.1\tf(0)=0\tf(1)\t0\t00\t0\t+1\t|00>|1>|0>\t|00>|1>|0>");
    assert_eq!(lines[2], "#1.2\tf(0)=0\tf(1)\t0\t00\t1\t-1\t|00>|1>|1>\t|00>|1>|1>");
}

#[test]
fn deep_histories_are_a_domain_error() {
    let out = qspeedup(&["histories", "--family", "grover4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("depth 1"));
}

#[test]
fn deutsch_readout_is_hadamard() {
    let out = stdout(&["synthesize", "--family", "deutsch"]);
    assert_eq!(
        out,
        "(0.707107, 0.000000)\t(0.707107, 0.000000)\n(0.707107, 0.000000)\t(-0.707107, 0.000000)\n0 -> 0\n1 -> 1\n"
    );
}

#[test]
fn single_query_search_cannot_be_synthesized_for_n4() {
    let out = qspeedup(&["synthesize", "--family", "grover4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("separation"));
}

#[test]
fn grover_iterations() {
    let out = stdout(&["grover", "--n", "4"]);
    assert!(out.contains("\n3\t0.961319\n"), "{out}");
    assert!(out.ends_with("queries\t3\n"));
}

#[test]
fn simon_is_reproducible_per_seed() {
    let a = stdout(&["simon", "--n", "3", "--seed", "11"]);
    assert_eq!(a, stdout(&["simon", "--n", "3", "--seed", "11"]));
    assert!(a.starts_with("seed\t11\n"));
}

#[test]
fn unknown_family_is_a_usage_error() {
    let out = qspeedup(&["simulate", "--family", "nosuch"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(qspeedup(&["rule", "--family", "deutsch", "--bogus"]).status.code(), Some(2));
    assert_eq!(qspeedup(&["rule"]).status.code(), Some(2));
}

#[test]
fn capacity_is_a_domain_error_unless_raised() {
    let out = qspeedup(&["rule", "--family", "dj3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("capacity"));
    let raised = Command::new(env!("CARGO_BIN_EXE_qspeedup"))
        .args(["rule", "--family", "dj3"])
        .env("QSPEEDUP_MAX_FAMILY", "128")
        .output()
        .unwrap();
    assert!(raised.status.success());
    assert!(String::from_utf8_lossy(&raised.stdout).starts_with("dj3\tbalanced\t5\t1\t"));
}

#[test]
fn family_files_are_accepted() {
    let dir = std::env::temp_dir().join(format!("qspeedup-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("deutsch.fam");
    std::fs::write(
        &path,
        "family deutsch\nx_bits 1\nv_bits 1\nsolution_bits 1\n\
         k 00 : 0 0 ; solution 0\nk 01 : 0 1 ; solution 1\nk 10 : 1 0 ; solution 1\nk 11 : 1 1 ; solution 0\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(stdout(&["rule", "--file", p]), stdout(&["rule", "--family", "deutsch"]));

    std::fs::write(&path, "family broken\nx_bits 1\nv_bits 1\nsolution_bits 1\nk 00 : 0 ; solution 0\n").unwrap();
    let out = qspeedup(&["rule", "--file", p]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 5"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn identical_commands_give_identical_bytes() {
    for args in [
        &["simulate", "--family", "perm"][..],
        &["histories", "--family", "dj2"][..],
        &["synthesize", "--family", "grover2"][..],
    ] {
        assert_eq!(qspeedup(args).stdout, qspeedup(args).stdout);
    }
}

#[test]
fn report_lists_criteria_and_table() {
    let out = qspeedup(&["report", "--all"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("family\tproblem\tclassical_depth\tadvanced_depth\texcluded_half_count\tquantum_queries\tverdict\n"));
    assert!(text.contains("\ngrover3\tlocation\t7\t1\t0\t2\tFAIL\n"));
    assert!(text.contains("criterion 4b PASS"));
    // exit status tracks the criteria, and the entropy criterion is red
    let all_pass = !text.lines().any(|l| l.starts_with("criterion") && l.contains(" FAIL "));
    assert_eq!(out.status.success(), all_pass);
}
