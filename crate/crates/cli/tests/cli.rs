use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use nilcalc::corpus::{BUNDLED, FAMILIES};
use nilcalc::{corpus_generate, parse_algebra, resolve_source, run_command, AnalysisReport, CliError, Command as Cmd, Config};

fn nilcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilcalc")).args(args).output().expect("binary runs")
}

fn corpus_path(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(format!("{name}.json")).display().to_string()
}

fn schema() -> jsonschema::Validator {
    let text = include_str!("../schema/report.schema.json");
    jsonschema::validator_for(&serde_json::from_str(text).unwrap()).expect("schema compiles")
}

fn assert_valid(v: &jsonschema::Validator, report: &Value) {
    let errors: Vec<String> = v.iter_errors(report).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

const PARAMS: [(&str, &[&str]); 8] = [
    ("heisenberg", &["1", "2", "3", "4"]),
    ("complex-heisenberg", &["1", "2"]),
    ("heisenberg-product", &["1", "1,1", "1,2,3"]),
    ("quotient-chain", &["2", "3", "4", "6"]),
    ("free-step2", &["2", "3", "4"]),
    ("engel", &[""]),
    ("upper-triangular", &["1", "2", "3", "4"]),
    ("mohsen-of", &["heisenberg:1", "engel", "quotient-chain:3", "free-step2:3"]),
];

#[test]
fn every_family_round_trips_through_the_parser() {
    assert_eq!(PARAMS.len(), FAMILIES.len());
    for (family, params) in PARAMS {
        for p in params {
            let param = (!p.is_empty()).then_some(*p);
            let doc = corpus_generate(family, param).unwrap();
            let parsed = parse_algebra(&doc.to_pretty_json()).unwrap_or_else(|e| panic!("{family} {p}: {e}"));
            assert!(parsed.algebra.validate().is_empty());
            assert_eq!(parsed.document, doc);
            assert_eq!(parsed.document.fingerprint(), doc.fingerprint());
        }
    }
}

#[test]
fn family_documents_have_expected_shapes() {
    let h2 = parse_algebra(&corpus_generate("heisenberg", Some("2")).unwrap().to_pretty_json()).unwrap();
    assert_eq!(h2.algebra.dim(), 5);
    assert_eq!(h2.algebra.dim() - h2.algebra.center().dim(), 4);
    let f3 = corpus_generate("free-step2", Some("3")).unwrap();
    assert_eq!(f3.dimension, 6);
    let u3 = parse_algebra(&corpus_generate("upper-triangular", Some("3")).unwrap().to_pretty_json()).unwrap();
    assert_eq!((u3.algebra.dim(), u3.algebra.center().dim()), (6, 1));
    let m = corpus_generate("mohsen-of", Some(&corpus_path("heisenberg-1"))).unwrap();
    assert_eq!(m.dimension, 7);
    assert!(matches!(corpus_generate("nonesuch", None), Err(CliError::Usage(_))));
    assert!(matches!(corpus_generate("quotient-chain", None), Err(CliError::Usage(_))));
}

#[test]
fn bundled_documents_parse() {
    for (name, text) in BUNDLED {
        let p = parse_algebra(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(p.algebra.validate().is_empty());
    }
    let e = parse_algebra(BUNDLED.iter().find(|(n, _)| *n == "engel").unwrap().1).unwrap();
    assert_eq!((e.algebra.dim(), e.algebra.step()), (4, Some(3)));
}

#[test]
fn toml_front_end_matches_json() {
    let toml = r#"
name = "heisenberg-1"
dimension = 3
weights = [1, 1, 2]
names = ["X1", "Y1", "Z"]

[[brackets]]
i = 1
j = 2
k = 3
coeff = "1"
"#;
    let from_toml = parse_algebra(toml).unwrap();
    let from_json = parse_algebra(BUNDLED[0].1).unwrap();
    assert_eq!(from_toml.document.fingerprint(), from_json.document.fingerprint());
}

#[test]
fn malformed_documents_are_rejected_with_locations() {
    let zero_den = r#"{"name": "h", "dimension": 3, "weights": [1, 1, 2], "brackets": [{"i": 1, "j": 2, "k": 3, "coeff": "1/0"}]}"#;
    assert!(matches!(parse_algebra(zero_den), Err(CliError::Parse { .. })));
    match parse_algebra("{\n  \"name\": \"h\",\n  \"dimension\": three\n}") {
        Err(CliError::Parse { line: Some(3), column: Some(c), .. }) => assert!(c > 1),
        other => panic!("{other:?}"),
    }
    match parse_algebra("name = \"h\"\ndimension = [\n") {
        Err(CliError::Parse { line: Some(l), .. }) => assert!(l >= 2),
        other => panic!("{other:?}"),
    }
    let unknown = r#"{"name": "h", "dimension": 1, "weights": [1], "brackets": [], "extra": 1}"#;
    assert!(matches!(parse_algebra(unknown), Err(CliError::Parse { .. })));
    let grading = r#"{"name": "h", "dimension": 3, "weights": [1, 1, 3], "brackets": [{"i": 1, "j": 2, "k": 3, "coeff": "1"}]}"#;
    match parse_algebra(grading) {
        Err(CliError::Invalid(d)) => assert!(d.iter().any(|x| x.to_string().contains("grading"))),
        other => panic!("{other:?}"),
    }
    let out_of_range = r#"{"name": "h", "dimension": 2, "weights": [1, 1], "brackets": [{"i": 1, "j": 2, "k": 3, "coeff": "1"}]}"#;
    assert!(matches!(parse_algebra(out_of_range), Err(CliError::Parse { .. })));
}

fn all_reports() -> Vec<AnalysisReport> {
    let config = Config { resolution: 8, ..Config::default() };
    let mut out = Vec::new();
    for name in ["heisenberg-1", "complex-heisenberg-1", "quotient-chain-4", "engel", "free-step2-3", "heisenberg-1-shifted", "engel-imaginary"] {
        let source = format!("bundled:{name}");
        let p = resolve_source(&source).unwrap();
        for cmd in Cmd::ALL {
            if cmd == Cmd::CorpusRegression {
                continue;
            }
            if let Ok(r) = run_command(cmd, Some(&p), Some(&source), &config) {
                out.push(r);
            }
        }
    }
    out.push(run_command(Cmd::MaslovDemo, None, None, &config).unwrap());
    out.push(run_command(Cmd::CorpusRegression, None, None, &config).unwrap());
    out
}

#[test]
fn reports_validate_against_schema_and_round_trip() {
    let v = schema();
    let reports = all_reports();
    let names: std::collections::BTreeSet<&str> = reports.iter().map(|r| r.command.name.as_str()).collect();
    assert_eq!(names.len(), Cmd::ALL.len(), "{names:?}");
    for r in &reports {
        let text = r.to_json();
        assert_valid(&v, &serde_json::from_str(&text).unwrap());
        let back = AnalysisReport::from_json(&text).unwrap();
        assert_eq!(&back, r);
        assert_eq!(back.to_json(), text);
    }
}

#[test]
fn schema_rejects_tampered_reports() {
    let v = schema();
    let r = run_command(Cmd::Orbits, Some(&resolve_source("bundled:engel").unwrap()), None, &Config::default()).unwrap();
    let mut bad: Value = serde_json::to_value(&r).unwrap();
    bad["results"]["reason"] = Value::from("because");
    assert!(!v.is_valid(&bad));
    let mut bad: Value = serde_json::to_value(&r).unwrap();
    bad["algebra"]["fingerprint"] = Value::from("xyz");
    assert!(!v.is_valid(&bad));
}

#[test]
fn binary_reports_are_deterministic() {
    let h1 = corpus_path("heisenberg-1");
    for args in [
        vec!["orbits", "--algebra", &h1],
        vec!["stratify", "--family", "complex-heisenberg", "--param", "1", "--resolution", "30", "--seed", "7"],
        vec!["maslov-demo", "--resolution", "10", "--seed", "2"],
        vec!["helliptic", "--family", "heisenberg", "--param", "2", "--resolution", "3"],
    ] {
        let a = nilcalc(&args);
        let b = nilcalc(&args);
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn json_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = nilcalc(&["polarize", "--family", "quotient-chain", "--param", "4", "--json", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let r = AnalysisReport::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r.results["codimension"], 2);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| nilcalc(args).status.code();
    assert_eq!(code(&["validate", "--algebra", &corpus_path("engel")]), Some(0));
    assert_eq!(code(&["validate", "--algebra", "bundled:engel"]), Some(0));
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(code(&["orbits"]), Some(1));
    assert_eq!(code(&["orbits", "--family", "nonesuch"]), Some(1));
    assert_eq!(code(&["orbits", "--family", "heisenberg", "--xi", "1,2"]), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"name": "h", "dimension": 3, "weights": [1, 1, 3], "brackets": [{"i": 1, "j": 2, "k": 3, "coeff": "1"}]}"#).unwrap();
    let o = nilcalc(&["validate", "--algebra", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("grading"));
    std::fs::write(&bad, "{\"name\": ").unwrap();
    assert_eq!(code(&["validate", "--algebra", bad.to_str().unwrap()]), Some(2));
    assert_eq!(code(&["corpus-regression"]), Some(0));
}

#[test]
fn orbit_reports_match_known_answers() {
    let h1 = run_command(Cmd::Orbits, Some(&resolve_source("bundled:heisenberg-1").unwrap()), None, &Config::default()).unwrap();
    assert_eq!(h1.results["pfaffian"]["polynomial"], "xi_Z");
    assert_eq!(h1.results["witness"]["covector"], serde_json::json!(["0", "0", "1"]));
    let engel = run_command(Cmd::Orbits, Some(&resolve_source("bundled:engel").unwrap()), None, &Config::default()).unwrap();
    assert_eq!(engel.results["message"], "no flat orbits: odd codimension of center");
}

#[test]
fn regression_table_is_well_formed() {
    let entries = nilcalc::commands::expectations().unwrap();
    let mut ids = std::collections::BTreeSet::new();
    for e in &entries {
        assert!(ids.insert(e.id.clone()), "duplicate id {}", e.id);
        assert!(["literature", "derived", "textbook"].contains(&e.provenance.as_str()), "{}", e.id);
        assert!(Cmd::parse(&e.command).is_some(), "{}", e.id);
        assert!(e.path.starts_with('/'), "{}", e.id);
    }
}
