use std::io::Write;

use sumlab_cli::{load_table_csv, CliError};
use sumlab_core::FunctionId;

fn csv_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn data_error(text: &str, bound: f64) -> String {
    match load_table_csv(csv_file(text).path(), bound) {
        Err(CliError::Data(msg)) => msg,
        other => panic!("expected a data error, got {other:?}"),
    }
}

#[test]
fn two_rows() {
    let f = csv_file("k,value\n1,1\n2,-1\n");
    let table = load_table_csv(f.path(), 1.0).unwrap();
    assert_eq!(table.len(), 2);
    assert_eq!(table.values(), &[1, -1]);
    assert_eq!(table.spec().alphabet, vec![-1, 1]);
    assert!(matches!(table.spec().id, FunctionId::Custom(_)));
}

#[test]
fn gap_reports_file_row() {
    let msg = data_error("k,value\n1,1\n2,0\n4,1\n", 1.0);
    assert!(msg.contains("row 4"), "{msg}");
    assert!(msg.contains("expected k = 3"), "{msg}");
}

#[test]
fn bound_violation() {
    let msg = data_error("k,value\n1,7\n", 1.0);
    assert!(msg.contains("row 2") && msg.contains("exceeds the declared bound"), "{msg}");
    assert!(load_table_csv(csv_file("k,value\n1,7\n").path(), 7.0).is_ok());
}

#[test]
fn non_integer_value() {
    let msg = data_error("k,value\n1,1\n2,0.5\n", 1.0);
    assert!(msg.contains("row 3") && msg.contains("not an integer"), "{msg}");
}

#[test]
fn header_and_empty_input() {
    assert!(data_error("n,f\n1,1\n", 1.0).contains("row 1"));
    assert!(data_error("k,value\n", 1.0).contains("no data rows"));
    assert!(data_error("k,value\n0,1\n", 1.0).contains("expected k = 1"));
}

#[test]
fn invalid_bound_is_usage_error() {
    let f = csv_file("k,value\n1,1\n");
    assert!(matches!(load_table_csv(f.path(), f64::NAN), Err(CliError::Usage(_))));
}

#[test]
fn missing_file_is_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = load_table_csv(&dir.path().join("absent.csv"), 1.0).unwrap_err();
    assert_eq!(err.exit_code(), 3);
}
