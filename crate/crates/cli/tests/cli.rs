use serde_json::Value;
use ulrich_cli::{run_with, EXIT_FAILED, EXIT_OK, EXIT_USAGE};

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn call(args: &str, env: Option<&str>) -> Output {
    let argv = std::iter::once("ulrich".to_string()).chain(args.split_whitespace().map(String::from));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, env, &mut out, &mut err);
    Output { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", o.stdout))
}

fn schema() -> jsonschema::JSONSchema {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/report.schema.json")).unwrap();
    let value: Value = serde_json::from_str(&text).unwrap();
    jsonschema::JSONSchema::options()
        .with_draft(jsonschema::Draft::Draft202012)
        .compile(&value)
        .expect("schema compiles")
}

#[test]
fn verify_small_config() {
    let o = call("verify --e 1 --b 5 --k 5 --r 2", None);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["result"]["passed"], true);
    let verdicts = &v["result"]["report"]["verdicts"];
    assert_eq!(verdicts["ulrich"], true);
    assert_eq!(verdicts["hom"], 1);
    assert_eq!(verdicts["ext1"], 18);
    assert_eq!(verdicts["ext2"], 0);
    assert_eq!(v["run"]["seed"], 42);
}

#[test]
fn invalid_k_is_usage_error() {
    let o = call("verify --e 1 --b 5 --k 9 --r 2", None);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("k < 2b - 4e"), "{}", o.stderr);
    assert!(o.stdout.is_empty());
}

#[test]
fn validate_config_reports_violation() {
    let o = call("validate-config --e 0 --b 4 --k 4 --r 2", None);
    assert_eq!(o.code, EXIT_FAILED);
    let v = json(&o);
    assert_eq!(v["result"]["valid"], false);
    assert_eq!(v["result"]["violated"], "b - e < k");
    let o = call("validate-config --e 0 --b 4 --k 5 --r 2", None);
    assert_eq!(o.code, EXIT_OK);
}

#[test]
fn search_lines_e0() {
    let o = call("search-lines --e 0 --b 4", None);
    assert_eq!(o.code, EXIT_OK);
    let v = json(&o);
    let found: Vec<(i64, i64)> = v["result"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["a"].as_i64().unwrap(), c["b"].as_i64().unwrap()))
        .collect();
    assert_eq!(found, vec![(2, 7), (5, 3)]);
}

#[test]
fn help_and_unknown_commands() {
    assert_eq!(call("--help", None).code, EXIT_OK);
    assert_eq!(call("frobnicate", None).code, EXIT_USAGE);
    assert_eq!(call("cohomology --e 1 --a x --b 0", None).code, EXIT_USAGE);
}

#[test]
fn env_field_override() {
    let o = call("verify --e 0 --b 4 --k 5 --r 2 --no-ext", Some("q"));
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(json(&o)["result"]["report"]["field"], "q");
    let o = call("verify --e 0 --b 4 --k 5 --r 2 --no-ext --field fp:101", Some("q"));
    assert_eq!(json(&o)["result"]["report"]["field"], "fp:101");
    let o = call("verify --e 0 --b 4 --k 5 --r 2", Some("nonsense"));
    assert_eq!(o.code, EXIT_USAGE);
}

#[test]
fn output_is_deterministic() {
    let a = call("verify --e 1 --b 6 --k 6 --r 3 --seed 7", None);
    let b = call("verify --e 1 --b 6 --k 6 --r 3 --seed 7", None);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.ends_with('\n'));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = call(&format!("--out {} cohomology --e 1 --a -3 --b -4", path.display()), None);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["table"]["h2"], 3);
}

#[test]
fn sweep_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let args = |p: &std::path::Path| format!("sweep --e 0..1 --r 2..4 --b 4,5 --k 5 --seeds 1 --csv {}", p.display());
    let o = call(&args(&p1), None);
    assert_eq!(o.code, EXIT_OK, "{}\n{}", o.stdout, o.stderr);
    let v = json(&o);
    assert_eq!(v["result"]["failed"], 0);
    assert!(v["result"]["skipped"].as_u64().unwrap() > 0, "k=5 is invalid for e=1, b=4");
    call(&args(&p2), None);
    let (c1, c2) = (std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    assert_eq!(c1, c2);
    let text = String::from_utf8(c1).unwrap();
    assert_eq!(text.lines().next().unwrap().split(',').count(), 21);
}

#[test]
fn every_report_matches_schema() {
    let schema = schema();
    let commands = [
        "cohomology --e 2 --a 1 --b -5",
        "validate-config --e 1 --b 5 --k 5 --r 2",
        "validate-config --e 1 --b 5 --k 9 --r 2",
        "presentation --e 1 --b 5 --k 5 --r 3",
        "presentation --e 0 --b 4 --k 5 --r 1",
        "verify --e 0 --b 4 --k 5 --r 2",
        "verify --e 0 --b 4 --k 5 --r 2 --no-ext --field q",
        "verify --e 0 --b 4 --k 5 --r 1",
        "search-lines --e 1 --b 5 --box 10",
        "moduli-dim --r 3 --e 0 --b 4",
        "moduli-dim --r 2 --e 1 --b 5 --with-ext --k 5",
        "scroll --e 0 --b 4 --k 5 slope --r 3",
        "scroll --e 1 --b 5 --k 5 slope --r 2",
        "scroll --e 0 check-a --tmax 1",
        "scroll --e 1 check-a --tmax 1 --bmax 6",
        "scroll --e 0 --b 4 --k 5 chow 1,0,0 1,0,0 0,1,0",
        "sweep --e 0 --r 2 --b 4 --seeds 1",
    ];
    for c in commands {
        let o = call(c, None);
        assert!(o.code == EXIT_OK || o.code == EXIT_FAILED, "{c}: {}", o.stderr);
        let v = json(&o);
        let msgs: Vec<String> = match schema.validate(&v) {
            Ok(()) => Vec::new(),
            Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
        };
        assert!(msgs.is_empty(), "{c}: {msgs:?}");
    }
    let bogus = serde_json::json!({ "run": { "command": "verify" }, "result": {} });
    assert!(!schema.is_valid(&bogus));
}
