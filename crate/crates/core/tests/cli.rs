use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nlstring::app::{config_from_header, CONFIG_PREFIX};
use nlstring::config::RunConfig;
use nlstring::table::read_csv;

fn nlstring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlstring")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn body_without_timestamp(text: &str) -> String {
    text.lines().filter(|l| !l.starts_with("# timestamp")).collect::<Vec<_>>().join("\n")
}

fn header_lines(text: &str) -> Vec<String> {
    text.lines().filter_map(|l| l.strip_prefix("# ")).map(str::to_owned).collect()
}

#[test]
fn spectrum_of_single_mode_pair() {
    let out = nlstring(&["spectrum", "-s", "quantum.cutoff=1", "-s", "quantum.max_phonons=1", "-s", "gamma=0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let (header, columns, rows) = read_csv(&text).unwrap();
    assert!(!header.is_empty());
    let col = columns.iter().position(|c| c == "eigenvalue").unwrap();
    let values: Vec<f64> = rows.iter().map(|r| r[col].parse().unwrap()).collect();
    assert_eq!(values.len(), 3);
    for (v, e) in values.iter().zip([0.0, 1.0, 1.0]) {
        assert!((v - e).abs() < 1e-12);
    }
}

#[test]
fn rates_follow_selection_rules() {
    let out = nlstring(&["rates", "--initial", "3", "-s", "gamma=0.01", "-s", "quantum.cutoff=5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let (_, columns, rows) = read_csv(&text).unwrap();
    let idx = |name: &str| columns.iter().position(|c| c == name).unwrap();
    let triples: Vec<(i32, i32, i32)> = rows
        .iter()
        .map(|r| (r[idx("p")].parse().unwrap(), r[idx("q")].parse().unwrap(), r[idx("r")].parse().unwrap()))
        .collect();
    assert_eq!(triples, [(1, 1, 1)]);
    assert!(rows[0][idx("rate")].parse::<f64>().unwrap() > 0.0);
}

#[test]
fn classical_runs_are_byte_identical() {
    let path = scratch("classical.csv");
    let arg = format!("output.path={}", path.display());
    let run = || {
        let out = nlstring(&["classical", "-s", "classical.t_end=0.2", "-s", "gamma=0.05", "-s", &arg]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read_to_string(&path).unwrap()
    };
    let first = run();
    let second = run();
    assert!(first.lines().count() > 5);
    assert_eq!(body_without_timestamp(&first), body_without_timestamp(&second));
}

#[test]
fn header_reproduces_the_configuration() {
    let cfg_path = scratch("run.cfg");
    std::fs::write(&cfg_path, "# small run\ngamma = 0.02\nquantum.cutoff = 2\nquantum.initial = [1, -1]\noutput.format = json\n").unwrap();
    let out_path = scratch("evolve.json");
    let arg = format!("output.path={}", out_path.display());
    let out = nlstring(&["evolve", "-c", cfg_path.to_str().unwrap(), "-s", "quantum.steps=3", "-s", &arg]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    let header: Vec<String> = json["header"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_owned())
        .collect();
    let parsed = config_from_header(&header).unwrap();

    let mut expect = nlstring::config::load_config(&cfg_path).unwrap();
    expect.apply_overrides(&["quantum.steps=3", arg.as_str()]).unwrap();
    assert_eq!(parsed, expect);
    assert!(header.iter().any(|l| l.starts_with(CONFIG_PREFIX)));
    assert!(json["rows"].as_array().is_some_and(|r| !r.is_empty()));

    let csv_path = scratch("evolve.csv");
    let arg = format!("output.path={}", csv_path.display());
    let out = nlstring(&["evolve", "-c", cfg_path.to_str().unwrap(), "-s", "output.format=csv", "-s", &arg]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let parsed = config_from_header(&header_lines(&csv)).unwrap();
    assert_eq!(parsed.output.path.as_deref(), Some(csv_path.as_path()));
    assert_eq!(parsed.params, expect.params);
    let reparsed = RunConfig::parse(&parsed.to_text(), "echo").unwrap();
    assert_eq!(reparsed, parsed);
}

#[test]
fn exit_codes_distinguish_failures() {
    let bad_key = nlstring(&["spectrum", "-s", "no.such.key=1"]);
    assert_eq!(bad_key.status.code(), Some(2));
    let record = String::from_utf8(bad_key.stderr).unwrap();
    assert!(record.starts_with("error kind=config code=2 message="), "{record}");

    let missing = nlstring(&["spectrum", "-c", "/nonexistent/run.cfg"]);
    assert_eq!(missing.status.code(), Some(2));

    let unstable = nlstring(&["classical", "-s", "classical.dt=1", "-s", "classical.t_end=2"]);
    assert_eq!(unstable.status.code(), Some(2));

    let too_large = nlstring(&["spectrum", "-s", "quantum.cutoff=12", "-s", "quantum.max_phonons=5"]);
    assert_eq!(too_large.status.code(), Some(3));
    assert!(String::from_utf8(too_large.stderr).unwrap().starts_with("error kind=numeric code=3"));
}

#[test]
fn thread_cap_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_nlstring"))
        .args(["emission", "-s", "emission.resolution=8"])
        .env("NLSTRING_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_nlstring"))
        .args(["emission"])
        .env("NLSTRING_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
