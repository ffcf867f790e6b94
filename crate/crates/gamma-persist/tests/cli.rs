use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gamma-persist"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn bar(lower: &str, upper: &str, lc: bool, uc: bool) -> Value {
    json!({"lower": lower, "upper": upper, "lower_closed": lc, "upper_closed": uc})
}

fn barcode(bars: Vec<Value>) -> Value {
    json!({"schema": "gamma-persist/1", "bars": bars})
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn distance_of_closed_intervals() {
    let d = TempDir::new().unwrap();
    let f = write(d.path(), "f.json", &barcode(vec![bar("0", "2", true, true)]));
    let g = write(d.path(), "g.json", &barcode(vec![bar("0", "3", true, true)]));
    let v = stdout_json(&run(&["distance", f.to_str().unwrap(), g.to_str().unwrap()]));
    assert_eq!(v["lower"], "1");
    assert_eq!(v["upper"], "1");
    assert_eq!(v["exact"], true);
}

#[test]
fn output_is_deterministic() {
    let d = TempDir::new().unwrap();
    let f = write(d.path(), "f.json", &barcode(vec![bar("0", "2", true, false), bar("-1", "+inf", false, false)]));
    let g = write(d.path(), "g.json", &barcode(vec![bar("1", "1", true, true)]));
    let args = ["--decimal", "convolve", f.to_str().unwrap(), g.to_str().unwrap()];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "gamma-persist/1");
    assert_eq!(v["bars"][0]["lower_decimal"].as_str().unwrap().len(), "1.000000".len());
}

#[test]
fn decompose_round_trips_through_zigzag() {
    let d = TempDir::new().unwrap();
    let b = barcode(vec![bar("0", "1", true, false), bar("0", "2", true, false), bar("1/2", "1/2", true, true)]);
    let f = write(d.path(), "b.json", &b);
    let z = d.path().join("z.json");
    let o = run(&["decompose", f.to_str().unwrap(), "--to-zigzag", "-o", z.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let back = stdout_json(&run(&["decompose", z.to_str().unwrap()]));
    let norm = |v: &Value| {
        let mut bars: Vec<(String, String)> =
            v["bars"].as_array().unwrap().iter().map(|b| (b["lower"].to_string(), b["upper"].to_string())).collect();
        bars.sort();
        bars
    };
    assert_eq!(norm(&back), norm(&b));
}

#[test]
fn exit_codes() {
    let d = TempDir::new().unwrap();
    // malformed input
    let bad = d.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(run(&["gammafy", bad.to_str().unwrap()]).status.code(), Some(2));
    // missing schema
    let noschema = write(d.path(), "n.json", &json!({"bars": []}));
    assert_eq!(run(&["gammafy", noschema.to_str().unwrap()]).status.code(), Some(2));
    // usage
    assert_eq!(run(&["no-such-verb"]).status.code(), Some(2));
    // domain: convolving two unbounded-in-opposite-directions bars is not proper
    let f = write(d.path(), "f.json", &barcode(vec![bar("-inf", "0", false, false)]));
    let g = write(d.path(), "g.json", &barcode(vec![bar("0", "+inf", false, false)]));
    let o = run(&["convolve", f.to_str().unwrap(), g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(err["error"]["kind"].is_string());
}

#[test]
fn stratify_reports_incompatible_hyperplane() {
    let d = TempDir::new().unwrap();
    let cone = write(d.path(), "c.json", &json!({"schema": "gamma-persist/1", "dim": 2, "rays": [["-1", "0"], ["0", "-1"]]}));
    let spec = json!({
        "schema": "gamma-persist/1",
        "arrangement": {"dim": 2, "hyperplanes": [{"normal": ["1", "0"], "offset": "0"}, {"normal": ["1", "-1"], "offset": "0"}]},
        "support": [{"dim": 2, "constraints": [
            {"normal": ["-1", "0"], "offset": "0", "strict": false}, {"normal": ["1", "0"], "offset": "1", "strict": false},
            {"normal": ["0", "-1"], "offset": "0", "strict": false}, {"normal": ["0", "1"], "offset": "1", "strict": false}
        ]}]
    });
    let s = write(d.path(), "s.json", &spec);
    let o = run(&["stratify", "--cone", cone.to_str().unwrap(), "--spec", s.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["index"], 1);
}

#[test]
fn render_draws_every_bar() {
    let d = TempDir::new().unwrap();
    let f = write(d.path(), "f.json", &barcode(vec![bar("0", "1", true, false), bar("0", "+inf", true, false), bar("2", "3", false, true)]));
    let o = run(&["render", f.to_str().unwrap()]);
    assert!(o.status.success());
    let svg = String::from_utf8(o.stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("stroke-width=\"3\"").count(), 3, "{svg}");
}
