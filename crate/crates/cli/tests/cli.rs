use std::fs;
use std::process::{Command, Output};

use cantor_cli::{parse_config, ExperimentConfig};
use cantor_core::{DigitSpec, Frequency};
use proptest::prelude::*;

fn cantor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cantor"))
        .args(args)
        .env_remove(cantor_cli::report::OUT_DIR_VAR)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn enumerate_prints_csv_rows() {
    let out = cantor(&["enumerate", "--cantor", "b=3;D=0,2", "--count", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "experiment,cantor,n,k,digit_sum");
    let ks: Vec<&str> = lines[1..].iter().map(|l| l.rsplit(',').nth(1).unwrap()).collect();
    assert_eq!(ks, ["0", "2", "6", "8", "18"]);
    assert!(!text.contains('\r'));
}

#[test]
fn periodic_frequency_has_unit_magnitude() {
    let out = cantor(&["weyl", "--cantor", "b=3;D=0,2", "--alpha", "1/2", "--N", "4096"]);
    assert_eq!(out.status.code(), Some(0));
    let row = stdout(&out).lines().nth(1).unwrap().to_string();
    assert_eq!(row.rsplit(',').next(), Some("1.0"));
}

#[test]
fn exit_codes_separate_usage_from_hypotheses() {
    assert_eq!(cantor(&["enumerate", "--cantor", "b=3;D=0"]).status.code(), Some(1));
    assert_eq!(cantor(&["enumerate", "--cantor", "b=3;D=0,2", "--bogus", "1"]).status.code(), Some(1));
    assert_eq!(cantor(&["paircorr", "--cantor", "b=7;D=0,1,3"]).status.code(), Some(1));
    let violated = cantor(&["moddist", "--cantor", "b=3;D=0,2", "--q", "3", "--quantity", "digit-sum"]);
    assert_eq!(violated.status.code(), Some(2));
    let no_kernel = cantor(&["vdc-poly", "--cantor", "b=3;D=0,2"]);
    assert_eq!(no_kernel.status.code(), Some(2));
    assert_eq!(cantor(&["--help"]).status.code(), Some(0));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = ["paircorr", "--cantor", "b=7;D=0,1,3", "--seed", "11", "--draws", "4", "--N", "512"];
    let (a, b) = (cantor(&args), cantor(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let other =
        cantor(&["paircorr", "--cantor", "b=7;D=0,1,3", "--seed", "12", "--draws", "4", "--N", "512"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn out_dir_receives_csv_and_json_mirror() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cantor"))
        .args(["energy", "--cantor", "b=7;D=0,1,3", "--levels", "2"])
        .env(cantor_cli::report::OUT_DIR_VAR, dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv_text = fs::read_to_string(dir.path().join("energy.csv")).unwrap();
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("energy.json")).unwrap()).unwrap();

    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    let columns: Vec<String> =
        json["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap().to_string()).collect();
    assert_eq!(header, columns);
    let rows = json["rows"].as_array().unwrap();
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), rows.len());
    for (record, row) in records.iter().zip(rows) {
        for (name, cell) in header.iter().zip(record.iter()) {
            assert_eq!(row[name].as_str(), Some(cell));
        }
    }
    let energy = header.iter().position(|h| h == "energy").unwrap();
    assert_eq!(&records[0][energy], "225");
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    fs::write(&path, "# members of the middle-thirds set\nb=3\nD=0,2\ncount=3\n").unwrap();
    let path = path.to_str().unwrap();
    let from_file = stdout(&cantor(&["enumerate", "--config", path]));
    assert_eq!(from_file.lines().count(), 4);
    let overridden = stdout(&cantor(&["enumerate", "--config", path, "--count", "6"]));
    assert_eq!(overridden.lines().count(), 7);
    let set = stdout(&cantor(&["enumerate", "--config", path, "--set", "start=2"]));
    assert_eq!(set.lines().nth(1).unwrap(), "enumerate,\"b=3;D=0,2\",2,6,2");
}

#[test]
fn config_errors_report_positions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    fs::write(&path, "b=3\nD=0,2\nalpha=1/0\n").unwrap();
    let out = cantor(&["weyl", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3, column 7"));
}

fn frequency() -> impl Strategy<Value = Frequency> {
    prop_oneof![
        (-50i64..50, 1u64..60).prop_map(|(p, q)| Frequency::rational(p, q)),
        (0.0f64..1.0).prop_map(Frequency::real),
    ]
}

fn spec() -> impl Strategy<Value = DigitSpec> {
    (3u32..12).prop_flat_map(|base| {
        proptest::sample::subsequence((0..base as i64).collect::<Vec<_>>(), 2..=base as usize)
            .prop_map(move |digits| DigitSpec { base, digits })
    })
}

proptest! {
    #[test]
    fn configs_round_trip(
        cantor in proptest::option::of(spec()),
        seed in proptest::option::of(any::<u64>()),
        alpha in proptest::option::of(frequency()),
        beta in proptest::option::of(frequency()),
        n in proptest::option::of(1u64..1_000_000),
    ) {
        let mut config = ExperimentConfig { cantor, seed, alpha, beta, ..Default::default() };
        if let Some(n) = n {
            config.params.insert("N".into(), n.to_string());
        }
        let text = config.to_string();
        prop_assert_eq!(parse_config(&text).unwrap(), config);
    }
}
