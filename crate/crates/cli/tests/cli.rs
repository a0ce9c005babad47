use std::process::{Command, Output};

use ramroot_cli::report::{ConvergeReport, Number, SeriesReport, SolveReport, TableReport};
use ramroot_core::{make_rational, TerminationReason};

fn ramroot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramroot")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_cos_fixed_order_two() {
    let o = ramroot(&["solve", "--problem", "cos_fixed", "--order", "2", "--mode", "float"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for v in ["0.66666666666667", "0.73903926244631", "0.73908513321515", "0.73908513321516"] {
        assert!(out.contains(v), "{v} missing from\n{out}");
    }
}

#[test]
fn solve_newton_on_cubic() {
    let o = ramroot(&["solve", "--problem", "cubic_2_5", "--order", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let report: SolveReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report.termination, TerminationReason::ResidualMet);
    let Number::Float(root) = report.root else { panic!("float root expected") };
    assert!((root - 2.094_551_481_542_326_6).abs() <= 2.0 * f64::EPSILON * root);
    assert_eq!(report.root_decimal, "2.09455148154233");
}

#[test]
fn exit_codes() {
    let usage = ramroot(&["solve", "--problem", "cos_fixed", "--order", "0"]);
    assert_eq!(usage.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&usage.stderr).contains("order"));

    assert_eq!(ramroot(&["solve", "--problem", "nope", "-n", "1"]).status.code(), Some(1));
    assert_eq!(ramroot(&["solve", "-n", "1"]).status.code(), Some(1));
    assert_eq!(ramroot(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(ramroot(&["--help"]).status.code(), Some(0));

    let limit = ramroot(&["solve", "--problem", "cos_fixed", "-n", "1", "--max-iter", "2"]);
    assert_eq!(limit.status.code(), Some(2));

    let flat = ramroot(&["solve", "--poly", "1,0,1", "--start", "0", "-n", "1"]);
    assert_eq!(flat.status.code(), Some(3));

    let exact = ramroot(&["solve", "--poly", "-4,0,1", "--start", "2", "-n", "3", "--mode", "rational"]);
    assert_eq!(exact.status.code(), Some(0));

    let rational_cos = ramroot(&["solve", "--problem", "cos_fixed", "-n", "1", "--mode", "rational", "--start", "1"]);
    assert_eq!(rational_cos.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&rational_cos.stderr).contains("rational mode"));
}

#[test]
fn sqrt2_convergents_with_digits() {
    let o = ramroot(&[
        "converge",
        "--problem",
        "sqrt",
        "--m",
        "2",
        "--a",
        "2",
        "--c",
        "1",
        "--mode",
        "rational",
        "--nmax",
        "12",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: ConvergeReport = serde_json::from_slice(&o.stdout).unwrap();
    let tail: Vec<(Number, u32)> =
        report.convergents[4..].iter().map(|r| (r.value.clone().unwrap(), r.digits.unwrap())).collect();
    let expect = [
        (99, 70, 3),
        (239, 169, 4),
        (577, 408, 4),
        (1393, 985, 5),
        (3363, 2378, 7),
        (8119, 5741, 7),
        (19601, 13860, 8),
        (47321, 33461, 9),
    ];
    for ((value, digits), (p, q, d)) in tail.iter().zip(expect) {
        assert_eq!(*value, Number::Exact(make_rational(p, q).unwrap()));
        assert_eq!(*digits, d, "{p}/{q}");
    }
}

#[test]
fn slow_sin_half_convergent() {
    let o = ramroot(&["converge", "--problem", "sin_half", "--nmax", "23", "--format", "json"]);
    let report: ConvergeReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report.convergents.len(), 23);
    assert_eq!(report.convergents[22].decimal.as_deref(), Some("1.49730038909589"));

    let o = ramroot(&["converge", "--problem", "cubic_2_5", "--nmax", "1"]);
    assert!(stdout(&o).contains("2.10000000000000"));
}

#[test]
fn series_examples() {
    let o = ramroot(&["series", "--coeffs", "1,0,1", "--n", "10", "--digits", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let last = out.lines().rfind(|l| l.trim_start().starts_with('9')).unwrap();
    assert!(last.contains("0.684211") && last.contains("13/19"), "{last}");

    let o = ramroot(&["series", "--coeffs", "1", "--n", "5", "--format", "json"]);
    let report: SeriesReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(report.convergents.iter().all(|c| c.value == Some(Number::Exact(make_rational(1, 1).unwrap()))));

    let o = ramroot(&["series", "--coeffs", "5,-6", "--n", "20", "--mode", "float", "--format", "json"]);
    let report: SeriesReport = serde_json::from_slice(&o.stdout).unwrap();
    let Some(Number::Float(last)) = report.convergents.last().unwrap().value else { panic!() };
    assert!((last - 1.0 / 3.0).abs() < 1e-3);
    assert!(!report.suspicious);
}

#[test]
fn table4_grid() {
    let o = ramroot(&["tables", "--table", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let report: TableReport = serde_json::from_slice(&o.stdout).unwrap();
    let TableReport::Float { rows, max_deviation, all_match, .. } = report else { panic!("float table") };
    assert!(all_match);
    assert!(max_deviation <= 1e-13);
    assert_eq!(rows.len(), 5);
    assert_eq!(rows.iter().flat_map(|r| &r.cells).filter(|c| c.published.is_some()).count(), 14);
}

#[test]
fn table3_and_table1() {
    let o = ramroot(&["tables", "--table", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("8,exp3,1.09861228866811"));
    assert!(out.contains("9,exp3,1.09861228866811"));

    let o = ramroot(&["tables", "--table", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let TableReport::Rational { rows, all_met, .. } = serde_json::from_slice(&o.stdout).unwrap() else { panic!() };
    assert!(all_met);
    assert_eq!(rows[0].label, "cbrt(9)");
    assert!(rows[0].first_n_meeting_target.is_some());
    assert_eq!(rows[0].exact_fraction_n, Some(5));

    // a scan budget too small to meet the targets is a row failure
    assert_eq!(ramroot(&["tables", "--table", "1", "--nmax", "2"]).status.code(), Some(2));
    assert_eq!(ramroot(&["tables", "--table", "5"]).status.code(), Some(1));
}

#[test]
fn order_estimates() {
    let o = ramroot(&["order", "--problem", "cos_fixed", "--n", "1..3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let report: ramroot_cli::report::OrderReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report.rows.len(), 3);
    for r in &report.rows {
        let p = r.empirical_order.unwrap();
        assert!((p - r.expected as f64).abs() < 0.5, "n={}: {p}", r.n);
        assert!(!r.flagged);
    }
    assert_eq!(ramroot(&["order", "--problem", "cubic_2_5", "--n", "1"]).status.code(), Some(0));
    assert_eq!(ramroot(&["order", "--problem", "cos_fixed", "--n", "3..1"]).status.code(), Some(1));
}

#[test]
fn json_round_trips_and_formats_agree() {
    let base = ["converge", "--problem", "logvalue", "--b", "2", "--mode", "rational", "--nmax", "6"];
    let json_out = ramroot(&[&base[..], &["--format", "json"]].concat());
    let text: String = String::from_utf8(json_out.stdout).unwrap();
    let report: ConvergeReport = serde_json::from_str(&text).unwrap();
    assert_eq!(ramroot_cli::report::json(&report) + "\n", text);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["convergents"][4]["value"], serde_json::json!({"num": "375", "den": "541"}));

    let csv_out = stdout(&ramroot(&[&base[..], &["--format", "csv"]].concat()));
    let text_out = stdout(&ramroot(&base));
    for row in &report.convergents {
        let decimal = row.decimal.as_deref().unwrap();
        assert!(csv_out.contains(decimal) && text_out.contains(decimal), "{decimal}");
        let fraction = row.value.as_ref().unwrap().raw();
        assert!(csv_out.contains(&fraction) && text_out.contains(&fraction), "{fraction}");
    }
}
