mod common;

use common::{cyclodiff, cyclodiff_env, scratch, verify_pair};

#[test]
fn ds_check_m16_3_json() {
    let r = cyclodiff(&["ds", "check", "--q", "16", "--m", "3", "--modified"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["verdict"], "difference_set");
    assert_eq!(v["family"], "M16_3");
    assert_eq!(v["params"]["k"], 6);
    assert_eq!(v["params"]["lambda"], 2);
    assert_eq!(v["methods_agreeing"].as_array().unwrap().len(), 4);
}

#[test]
fn ds_check_negative_is_not_a_discrepancy() {
    let r = cyclodiff(&["ds", "check", "--q", "29", "--m", "4", "--modified"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["verdict"], "not_difference_set");
    let r = cyclodiff(&["ds", "check", "--q", "29", "--m", "4"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["verdict"], "infeasible_params");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(cyclodiff(&["bogus"]).code, 1);
    assert_eq!(cyclodiff(&["ds", "check", "--q", "12", "--m", "2"]).code, 1);
    assert_eq!(cyclodiff(&["ds", "check", "--q", "13", "--m", "5"]).code, 1);
    assert_eq!(cyclodiff(&["gb", "solve", "--m", "6", "--limits", "nonsense=3"]).code, 1);
    assert_eq!(cyclodiff(&["--help"]).code, 0);
}

#[test]
fn ds_scan_even_m10_has_no_hits() {
    let r = cyclodiff(&["ds", "scan", "--m", "10", "--even", "--q-max", "50000"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let table = r.json();
    let rows = table.as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|e| e["verdict"] != "difference_set" || e["n"].as_u64().unwrap() <= 1));
}

#[test]
fn sys_gen_parse_round_trip_is_byte_identical() {
    for gen in [
        vec!["sys", "gen", "--m", "8", "--level", "g"],
        vec!["sys", "gen", "--m", "6", "--level", "ghat", "--theta", "1"],
        vec!["sys", "gen", "--m", "8", "--level", "g", "--planar"],
    ] {
        let path = scratch("gen.txt");
        let p = path.to_str().unwrap();
        let first = cyclodiff(&[gen.as_slice(), &["-o", p]].concat());
        assert_eq!(first.code, 0, "{}", first.stderr);
        let parsed = cyclodiff(&["sys", "parse", "--system", p]);
        assert_eq!(parsed.code, 0, "{}", parsed.stderr);
        assert_eq!(parsed.stdout, std::fs::read_to_string(&path).unwrap(), "{gen:?}");
        let _ = std::fs::remove_file(path);
    }
}

#[test]
fn verify_exit_codes() {
    let ok = verify_pair(&["sys", "gen", "--m", "6", "--level", "g"], &["sys", "explicit", "--m", "6"], "exact");
    assert_eq!(ok.code, 0, "{}", ok.stderr);
    assert_eq!(ok.json()["all_zero"], true);

    let scaled = verify_pair(
        &["sys", "gen", "--m", "8", "--level", "g"],
        &["sys", "from-field", "--q", "73", "--m", "8"],
        "scaled",
    );
    assert_eq!(scaled.code, 0, "{}", scaled.stderr);

    // Not a difference set: the residual is a discrepancy.
    let bad = verify_pair(
        &["sys", "gen", "--m", "4", "--level", "g"],
        &["sys", "from-field", "--q", "29", "--m", "4"],
        "numeric",
    );
    assert_eq!(bad.code, 2);
}

#[test]
fn bridge_lands_on_the_ghat_system() {
    let sol = scratch("g.json");
    let s = sol.to_str().unwrap();
    assert_eq!(cyclodiff(&["sys", "explicit", "--m", "6", "-o", s]).code, 0);
    let r = cyclodiff(&["sys", "bridge", "--m", "6", "--theta", "0", "--solution", s]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let ghat = r.json();
    assert_eq!(ghat["level"], "ghat");
    let _ = std::fs::remove_file(sol);
}

#[test]
fn gb_solve_text_line() {
    let r = cyclodiff(&["--format", "text", "gb", "solve", "--m", "6", "--theta", "1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let mut lines = r.stdout.lines();
    assert_eq!(lines.next(), Some("F 6 1 : -1, 0, 7"));
    assert_eq!(lines.next(), Some("fixture match"));
    let stats: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert!(stats["s_pairs"].as_u64().unwrap() > 0);
}

#[test]
fn gb_solve_is_seed_independent() {
    for seed in ["0", "3", "99"] {
        let r = cyclodiff(&["--seed", seed, "gb", "solve", "--m", "6", "--theta", "0", "--strategy", "seeded"]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        assert_eq!(r.json()["squarefree"], serde_json::json!(["-4", "0", "1"]));
    }
}

#[test]
fn limits_from_env_and_flag_give_undecided() {
    let flag = cyclodiff(&["gb", "solve", "--m", "6", "--limits", "pairs=1"]);
    assert_eq!(flag.code, 1);
    assert_eq!(flag.json()["status"], "undecided");
    let env = cyclodiff_env(&["gb", "solve", "--m", "6"], &[("CYCLODIFF_LIMITS", "pairs=1")]);
    assert_eq!(env.code, 1);
    assert_eq!(env.json()["status"], "undecided");
}

#[test]
fn gb_table_m6_matches() {
    let r = cyclodiff(&["gb", "table", "--m", "6"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn gb_table_m16_reports_the_product_discrepancy() {
    let r = cyclodiff(&["--format", "text", "gb", "table", "--m", "16", "--fixtures-only"]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("extra 4*x^2 + 3"), "{}", r.stdout);
}

#[test]
fn probe_zero_m6() {
    for theta in ["0", "1"] {
        let r = cyclodiff(&["gb", "probe-zero", "--m", "6", "--theta", theta]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        assert_eq!(r.json()["outcome"], "empty");
    }
}

#[test]
fn planar_m8() {
    let r = cyclodiff(&["sys", "planar", "--m", "8"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["v"], 73);
    assert_eq!(v["two_in_h"], true);
    assert_eq!(v["h_is_one"], true);
    assert_eq!(v["planar_residual_zero"], true);
}

#[test]
fn sums_and_field_info() {
    let r = cyclodiff(&["field", "info", "--p", "2", "--e", "4"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let j = cyclodiff(&["sums", "jacobi", "--q", "7", "--m", "2", "--s", "1", "--t", "1"]);
    assert_eq!(j.code, 0, "{}", j.stderr);
    let g = cyclodiff(&["sums", "gauss", "--q", "13", "--m", "4", "--s", "1", "--numeric"]);
    assert_eq!(g.code, 0, "{}", g.stderr);
}

#[test]
fn output_file_matches_stdout() {
    let path = scratch("check.json");
    let p = path.to_str().unwrap();
    let args = ["ds", "check", "--q", "37", "--m", "4"];
    let to_file = cyclodiff(&[&args[..], &["-o", p]].concat());
    assert_eq!(to_file.code, 0);
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), cyclodiff(&args).stdout);
    let _ = std::fs::remove_file(path);
}
