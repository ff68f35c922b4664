use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asp-lambda"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim_end().to_string()
}

fn fixture(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = run(&all);
    let v: Value = serde_json::from_slice(&o.stdout).expect("one JSON document");
    (o.status.code().unwrap(), v)
}

#[test]
fn golden_outputs() {
    let cases: &[(&[&str], &str)] = &[
        (&["order", "(e -> t)"], "1"),
        (&["order", "((e -> t) -> t)"], "2"),
        (&["type", r"\x.fly(x)"], "(e -> l)"),
        (&["apply", r"\x.(x@X <- bird(X).)", r"\x.fly(x)"], "fly(X) <- bird(X)."),
        (&["invl", "bird(tweety).", r"\z.z"], r"\v.v@(bird(tweety).)"),
        (&["normalize", r"(\x.p(x))@a"], "p(a)"),
    ];
    for (args, want) in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout(&o), *want, "{args:?}");
    }
}

#[test]
fn inverse_reports_case_in_json() {
    let (code, v) = json(&["invl", "fly(tweety) <- bird(tweety).", "tweety"]);
    assert_eq!(code, 0);
    assert_eq!(v["v"], 1);
    assert_eq!(v["ok"], true);
    assert_eq!(v["case"], "L2");
    let f = v["result"].as_str().unwrap();
    let back = run(&["apply", f, "tweety"]);
    assert_eq!(stdout(&back), "fly(tweety) <- bird(tweety).");
}

#[test]
fn json_document_has_stable_shape() {
    let (_, v) = json(&["parse", "p(a)."]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    assert_eq!(keys.len(), 5);
    for k in ["v", "ok", "result", "case", "diagnostics"] {
        assert!(keys.contains(&k), "{k} missing");
    }
    assert!(v["case"].is_null());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["invr", "p(a).", r"\x.q(x)"]).status.code(), Some(1));
    assert_eq!(run(&["parse", "p(a"]).status.code(), Some(3));
    assert_eq!(run(&["type", "p(a) or -"]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["parse", "@/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(run(&["invl", r"(\x.p(x))@a", "a"]).status.code(), Some(3));
}

#[test]
fn null_inverse_prints_null() {
    let o = run(&["invr", "p(a).", r"\x.q(x)"]);
    assert_eq!(stdout(&o), "null");
    let (code, v) = json(&["invr", "p(a).", r"\x.q(x)"]);
    assert_eq!(code, 1);
    assert_eq!(v["ok"], false);
    assert!(v["result"].is_null());
}

#[test]
fn arguments_can_come_from_files() {
    let dir = std::env::temp_dir().join(format!("asp-lambda-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("h.txt");
    std::fs::write(&path, "fly(X) <- bird(X), not -fly(X).\n").unwrap();
    let at = format!("@{}", path.display());
    let o = run(&["parse", &at]);
    assert_eq!(stdout(&o), "fly(X) <- bird(X), not -fly(X).");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn parse_output_is_a_fixpoint() {
    for src in [
        r"\x.\y.(x@y <- p(y).)",
        "p(a) or q(a) <- not r(a), -s(a).",
        r"\w.(-w@X <- bird(X).)",
        r"\v.v@(bird(tweety).)",
    ] {
        let once = stdout(&run(&["parse", src]));
        let twice = stdout(&run(&["parse", &once]));
        assert_eq!(once, twice, "{src}");
    }
}

#[test]
fn answer_sets_of_fixtures() {
    let o = run(&["answersets", &fixture("asp/even_loop.lp")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);
    let o = run(&["answersets", &fixture("asp/most_birds_fly.lp")]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    assert!(out.contains("fly(tweety)") && out.contains("bird(tweety)"), "{out}");
}

#[test]
fn derive_learns_missing_words() {
    let (code, v) = json(&["derive", &fixture("derive/all.json")]);
    assert_eq!(code, 0, "{v}");
    let learned = v["result"]["learned"].as_object().unwrap();
    let mut words: Vec<&str> = learned.keys().map(|k| k.as_str()).collect();
    words.sort();
    assert_eq!(words, ["are", "do not", "most"]);
    assert_eq!(v["result"]["trace"].as_array().unwrap().len(), 6);
}

#[test]
fn oracle_check_agrees_on_a_small_case() {
    let o = run(&[
        "oracle-check",
        "p(a) <- q(a).",
        "a",
        "--side",
        "l",
        "--depth",
        "4",
        "--type",
        "(e -> t)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("agree: yes"));
}
