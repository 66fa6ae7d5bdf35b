use std::collections::BTreeSet;
use std::process::{Command, Output};

use combinekit::CombinationVerdict;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_combinekit")).args(args).env_remove("COMBINEKIT_CONFIG").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(o).trim()).unwrap()
}

/// Just enough of DOT for our output: one digraph, node statements and
/// `a -> b [label="..."]` edges, quoted ids.
#[derive(Debug, Default)]
struct Dot {
    nodes: BTreeSet<String>,
    edges: Vec<(String, String, Option<String>)>,
}

fn quoted(s: &str) -> Option<(String, &str)> {
    let s = s.trim_start().strip_prefix('"')?;
    let end = s.find('"')?;
    Some((s[..end].to_string(), &s[end + 1..]))
}

fn parse_dot(text: &str) -> Result<Dot, String> {
    let body = text.trim();
    let open = body.find('{').ok_or("no body")?;
    if !body[..open].trim().starts_with("digraph") || !body.ends_with('}') {
        return Err("not a digraph".into());
    }
    let mut dot = Dot::default();
    for stmt in body[open + 1..body.len() - 1].split(';').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((k, v)) = stmt.split_once('=') {
            if !k.contains('"') && !k.contains('[') {
                if v.trim().is_empty() {
                    return Err(format!("empty attribute in `{stmt}`"));
                }
                continue;
            }
        }
        let (a, rest) = quoted(stmt).ok_or_else(|| format!("bad statement `{stmt}`"))?;
        let rest = rest.trim();
        if rest.is_empty() {
            dot.nodes.insert(a);
            continue;
        }
        let rest = rest.strip_prefix("->").ok_or_else(|| format!("bad edge `{stmt}`"))?;
        let (b, rest) = quoted(rest).ok_or_else(|| format!("bad edge target `{stmt}`"))?;
        let rest = rest.trim();
        let label = if rest.is_empty() {
            None
        } else {
            let inner = rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or("bad attribute list")?;
            let v = inner.trim().strip_prefix("label=").ok_or("unknown attribute")?;
            Some(quoted(v).ok_or("unquoted label")?.0)
        };
        if !dot.nodes.contains(&a) || !dot.nodes.contains(&b) {
            return Err(format!("edge on undeclared node `{stmt}`"));
        }
        dot.edges.push((a, b, label));
    }
    Ok(dot)
}

#[test]
fn decide_exit_codes() {
    let o = run(&["decide", "T=P", "(and (P 3) (distinct x y))"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["sat"], true);
    let o = run(&["decide", "T=P", "(and (P 2) (P 3))"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["sat"], false);
    let o = run(&["decide", "unknown-theory", "(= x x)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown theory"));
    assert_eq!(run(&["decide", "Teq", "(and x"]).status.code(), Some(2));
}

#[test]
fn combine_examples_round_trip() {
    for (args, sat) in [
        (["combine", "T_leq_3", "T_eq_P", "(and (pred P 2) (distinct x y))", "--method", "gentle"], true),
        (["combine", "T_geq_2", "T_eq_5", "(= x x)", "--method", "smcs"], true),
        (["combine", "Teq", "T_leq_1", "(distinct x y)", "--method", "shiny"], false),
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(if sat { 0 } else { 1 }), "{args:?}");
        let v: CombinationVerdict = serde_json::from_str(stdout(&o).trim()).unwrap();
        assert_eq!(v.sat, sat);
        assert_eq!(v.witness.is_some(), sat);
        let again = serde_json::to_value(&v).unwrap();
        assert_eq!(again, json(&o));
    }
}

#[test]
fn inapplicable_method_is_an_error() {
    let o = run(&["combine", "Teq", "T_leq_3", "(= x y)", "--method", "no"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(err.contains("Teq") && err.contains("T_leq_3"), "{err}");
}

#[test]
fn spectrum_of_worked_example() {
    let o = run(&["spectrum", "Th_of(toy)", "(pred P Q 4)", "--upto", "6", "--format", "text"]);
    assert_eq!(stdout(&o).trim(), "{5}");
    let o = run(&["spectrum", "Th_of(toy)", "(pred P Q 2)", "--upto", "6"]);
    assert_eq!(json(&o)["finite"], serde_json::json!([2]));
}

#[test]
fn lattice_is_valid_dot_with_fifteen_edges() {
    let o = run(&["lattice", "--catalog", "default"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = parse_dot(&stdout(&o)).unwrap();
    assert_eq!(dot.nodes.len(), 12);
    assert_eq!(dot.edges.len(), 15);
    assert!(dot.edges.iter().all(|(_, _, w)| w.is_some()));
    assert!(parse_dot("digraph { \"a\" -> \"b\"; }").is_err());
}

#[test]
fn brute_check_passes() {
    let o = run(&["brute-check", "--theory", "T_eq_P", "--samples", "500", "--K", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("pass"));
}

#[test]
fn diagonal_prints_a_state_per_round() {
    let o = run(&["diagonal", "--theory", "T_leq_2", "--rounds", "5"]);
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[4]["state"]["skipped"].as_array().unwrap().len(), 5);
    assert_eq!(run(&["diagonal", "--rounds", "0"]).status.code(), Some(2));
}

#[test]
fn fixed_seed_output_is_byte_identical() {
    for args in [
        vec!["classify", "T_leq_3", "--samples", "50", "--seed", "9"],
        vec!["brute-check", "--theory", "Th_of(toy)", "--samples", "50", "--seed", "4", "--format", "json"],
        vec!["diagonal", "--rounds", "8"],
    ] {
        let (a, b) = (run(&args), run(&args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn config_from_environment() {
    let dir = std::env::temp_dir().join(format!("combinekit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("reg.json");
    std::fs::write(&path, r#"{"theories": {"mine": {"kind": "T_leq_n", "n": 2}}}"#).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_combinekit"))
        .args(["decide", "mine", "(distinct x y z)"])
        .env("COMBINEKIT_CONFIG", &path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}
