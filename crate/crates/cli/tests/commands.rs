use cube_mu_cli::document::{Payload, ReportDocument, TableRows};
use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cube-mu"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn set_file(content: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

fn document(out: &Output) -> ReportDocument {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    ReportDocument::from_json(&text).unwrap_or_else(|e| panic!("{e}: {text}"))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn analyze_sphere_3_1() {
    let f = set_file("n=3\nsphere 3 1\n");
    let out = run(&["analyze", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc = document(&out);
    assert_eq!(doc.schema_version, "1");
    let Payload::Analysis(a) = &doc.results else { panic!("wrong payload") };
    assert_eq!(cube_mu::rational::to_string(&a.energy_ratio), "7/3");
    assert_eq!(a.multiplicity_bound, 3);
    assert!((a.mu_lower.value - 7.0 / 3.0).abs() < 1e-6);
    assert!(a.mu_lower.value <= a.mu_upper.best + 1e-8);
    assert_eq!(a.mu_upper.best, 3.0);
    assert!(!doc.provenance.is_empty());
}

#[test]
fn analyze_explicit_lines_match_directive() {
    let a = set_file("n=3\nsphere 3 1\n");
    let b = set_file("n=3\n100\n010\n001\n");
    let da = document(&run(&["analyze", a.path().to_str().unwrap()]));
    let db = document(&run(&["analyze", b.path().to_str().unwrap()]));
    assert_eq!(da.results, db.results);
}

#[test]
fn analyze_zero_set_is_trivial() {
    let f = set_file("n=4\n0000\n");
    let out = run(&["analyze", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let Payload::Analysis(a) = document(&out).results else { panic!("wrong payload") };
    assert_eq!(a.size, 1);
    assert_eq!(a.energy.to_string(), "1");
    assert_eq!(cube_mu::rational::to_string(&a.energy_ratio), "1/1");
    assert_eq!(a.multiplicity_bound, 1);
    assert_eq!(a.mu_lower.value, 1.0);
    assert_eq!(a.mu_upper.best, 1.0);
    // the constant function: full support, singleton spectrum
    let u = a.uncertainty.unwrap();
    assert_eq!((u.support, u.spectrum_support, u.product), (16, 1, 16));
}

#[test]
fn malformed_line_names_the_line() {
    let f = set_file("n=3\n100\n01\n");
    let out = run(&["analyze", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());

    let dup = set_file("n=2\n10\n10\n");
    let out = run(&["analyze", dup.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("duplicate"));
}

#[test]
fn missing_file_is_usage_error() {
    let out = run(&["analyze", "/nonexistent/set.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dense_cap_violation_names_stage() {
    let f = set_file("n=8\nsphere 8 1\n");
    let out = run(&["--dense-cap", "4", "analyze", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("uncertainty") || stderr(&out).contains("mu_"), "{}", stderr(&out));
}

#[test]
fn sphere_table_4_2() {
    let out = run(&["sphere-table", "4", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let Payload::SphereTable(t) = document(&out).results else { panic!("wrong payload") };
    let TableRows::Exact(rows) = &t.rows else { panic!("expected exact rows") };
    let s: Vec<String> = rows.iter().map(|r| cube_mu::rational::to_string(&r.s_t)).collect();
    assert_eq!(s, ["1/1", "8/3", "1/1"]);
    assert_eq!(cube_mu::rational::to_string(&t.footer.r), "14/3");
    assert!(t.footer.psi.is_some());
}

#[test]
fn sphere_table_k0_and_footer() {
    let Payload::SphereTable(t) = document(&run(&["sphere-table", "7", "0"])).results else {
        panic!("wrong payload")
    };
    let TableRows::Exact(rows) = &t.rows else { panic!("expected exact rows") };
    assert_eq!(rows.len(), 1);
    assert_eq!(cube_mu::rational::to_string(&rows[0].s_t), "1/1");
    assert_eq!(t.footer.argmax, None);

    let Payload::SphereTable(t) = document(&run(&["sphere-table", "12", "4"])).results else {
        panic!("wrong payload")
    };
    assert!((t.footer.t1 - 2.43845).abs() < 1e-5);
    assert_eq!(t.footer.argmax, Some(2));

    let out = run(&["sphere-table", "12", "4", "--values", "float", "--from", "1", "--to", "2"]);
    let Payload::SphereTable(t) = document(&out).results else { panic!("wrong payload") };
    let TableRows::Float(rows) = &t.rows else { panic!("expected float rows") };
    assert_eq!(rows.iter().map(|r| r.t).collect::<Vec<_>>(), [1, 2]);
    assert!((rows[0].s_t - 512.0 / 33.0).abs() < 1e-12);
}

#[test]
fn sphere_table_rejects_k_above_n() {
    let out = run(&["sphere-table", "4", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn sphere_table_csv_quotes_and_rationals() {
    let out = run(&["--format", "csv", "sphere-table", "4", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kind,t,s_t,ratio_to_prev,cumulative"));
    assert_eq!(lines.next(), Some("row,0,1/1,,1/1"));
    assert_eq!(lines.next(), Some("row,1,8/3,8/3,11/3"));
    assert!(text.contains("footer,r,14/3,,"));
}

#[test]
fn scan_to_6_has_every_cell() {
    let out = run(&["scan", "6", "--starts", "8"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let Payload::Scan(records) = document(&out).results else { panic!("wrong payload") };
    assert!(records.len() >= 9);
    let cells: Vec<(u32, u32)> = records.iter().map(|r| (r.n, r.k)).collect();
    let expected: Vec<(u32, u32)> =
        (2..=6).flat_map(|n| (1..=n / 2).map(move |k| (n, k))).collect();
    assert_eq!(cells, expected);
    assert!(records.iter().all(|r| r.gap >= -1e-8));
}

#[test]
fn verify_core_passes() {
    let out = run(&["verify", "core"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc = document(&out);
    let Payload::Verify(s) = &doc.results else { panic!("wrong payload") };
    assert!(s.passed && s.hard_failures == 0 && s.hard_checks > 0);
}

#[test]
fn verify_is_deterministic_and_thread_independent() {
    let a = run(&["verify", "bounds", "--seed", "7"]);
    let b = run(&["verify", "bounds", "--seed", "7"]);
    let c = run(&["--threads", "1", "verify", "bounds", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let d = run(&["verify", "bounds", "--seed", "8"]);
    assert_ne!(a.stdout, d.stdout);
}

#[test]
fn unknown_suite_is_usage_error() {
    let out = run(&["verify", "everything"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_round_trips() {
    for args in [
        &["verify", "asymptotics"][..],
        &["sphere-table", "9", "3"],
        &["sphere-table", "9", "3", "--values", "float"],
        &["scan", "4", "--starts", "4"],
    ] {
        let out = run(args);
        let text = String::from_utf8(out.stdout).unwrap();
        let doc = ReportDocument::from_json(&text).unwrap();
        assert_eq!(doc.to_json().unwrap(), text, "{args:?}");
    }
    let f = set_file("n=4\nball 4 1\n");
    let text = String::from_utf8(run(&["analyze", f.path().to_str().unwrap()]).stdout).unwrap();
    let doc = ReportDocument::from_json(&text).unwrap();
    assert_eq!(doc.to_json().unwrap(), text);
}

#[test]
fn verify_csv_has_check_columns() {
    let out = run(&["--format", "csv", "verify", "sphere"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(&out.stdout[..]);
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        ["subject", "check", "lhs", "relation", "rhs", "passed", "severity", "provenance"]
    );
    let rows: Vec<_> = reader.records().collect::<Result<_, _>>().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.len() == 8));
}
