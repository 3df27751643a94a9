use std::process::{Command, Output};

fn galembed<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_galembed"))
        .args(args)
        .env_remove("GALEMBED_SEEDLESS")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const R7: [&str; 6] = ["--arena", "R", "--p", "3", "--q", "7"];

fn with_r7(rest: &[&'static str]) -> Vec<&'static str> {
    let mut v = vec![rest[0]];
    v.extend(R7);
    v.extend(&rest[1..]);
    v
}

#[test]
fn solve_heisenberg() {
    let out = galembed(&with_r7(&["solve", "--gamma", "(s^3+6)", "--i", "2", "--j", "1"]));
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["verdict"], "solvable");
    assert_eq!(r["omega"], "s+6");
    assert_eq!(r["tower"], serde_json::json!(["2*(s+3)*(s+6)^-1"]));
    assert_eq!(r["group"], serde_json::json!({"i": 2, "e_label": "0"}));
    assert_eq!(r["verify"]["passed"], true);
}

#[test]
fn solve_unsolvable_exits_one() {
    let out = galembed(&with_r7(&["solve", "--gamma", "2*(s^3+6)", "--i", "2", "--j", "1"]));
    assert_eq!(out.status.code(), Some(1));
    let note = report(&out)["obstruction"]["note"].as_str().unwrap().to_string();
    assert!(note.starts_with("constant component"), "{note}");
}

#[test]
fn group_profile() {
    let out = galembed(&["group", "--p", "3", "--i", "2", "--e", "1", "--profile"]);
    assert_eq!(out.status.code(), Some(0));
    let prof = &report(&out)["profile"];
    assert_eq!(prof["order"], 27);
    assert_eq!(prof["exponent"], 9);
    assert_eq!(prof["center_size"], 3);
    let out = galembed(&["group", "--p", "3", "--i", "2", "--e", "0", "--iso-with", "2", "1"]);
    assert_eq!(report(&out)["isomorphism"]["isomorphic"], false);
}

#[test]
fn other_commands() {
    let out = galembed(&with_r7(&["norm", "--b", "t-1"]));
    assert_eq!(report(&out)["omega"], "s+6");
    let out = galembed(&with_r7(&["chain", "--gamma", "2*(t-1)"]));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["consistent"], true);
    let out = galembed(&with_r7(&["decompose", "--classes", "s,s+6"]));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["blocks"][0]["length"], 3);
    let out = galembed(&["descend", "--p", "3", "--q0", "5", "--gamma", "t-1", "--i", "2", "--j", "1"]);
    let r = report(&out);
    assert_eq!(r["omega"], "s+4");
    assert_eq!(r["transfer"]["agreement"], true);
    let out = galembed(&with_r7(&[
        "verify", "--gamma", "t-1", "--i", "2", "--j", "1", "--beta", "2*(s+3)/(s+6)",
    ]));
    assert_eq!(out.status.code(), Some(0));
    let out = galembed(&with_r7(&[
        "verify", "--gamma", "t-1", "--i", "2", "--j", "1", "--beta", "2*s*(s+3)/(s+6)",
    ]));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_input_names_the_field() {
    let out = galembed(&with_r7(&["solve", "--gamma", "0", "--i", "2", "--j", "1"]));
    assert_eq!(out.status.code(), Some(2));
    assert!(report(&out)["error"].as_str().unwrap().contains("`gamma`"));
    let out = galembed(&["solve", "--arena", "R", "--p", "4", "--q", "7", "--gamma", "t", "--i", "2", "--j", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(report(&out)["error"].as_str().unwrap().contains("`p`"));
    let out = galembed(&["solve", "--arena", "R"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seedless_flag() {
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_galembed"))
            .args(["group", "--p", "3", "--i", "1"])
            .env("GALEMBED_SEEDLESS", v)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run("1"), Some(0));
    assert_eq!(run("0"), Some(2));
}

#[test]
fn deterministic_output_and_out_file() {
    let args = with_r7(&["solve", "--gamma", "t-1", "--i", "3", "--j", "1", "--kind", "nonsplit"]);
    let a = galembed(&args);
    let b = galembed(&args);
    assert_eq!(a.stdout, b.stdout);
    let dir = std::env::temp_dir().join(format!("galembed-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let mut with_out: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    with_out.extend(["--out".to_string(), path.to_str().unwrap().to_string()]);
    let c = galembed(&with_out);
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn batch_mode() {
    let dir = std::env::temp_dir().join(format!("galembed-batch-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("jobs.jsonl");
    std::fs::write(
        &path,
        concat!(
            r#"{"command":"solve","arena":"R","p":3,"q":7,"gamma":"t-1","i":2,"j":1}"#,
            "\n",
            r#"{"command":"solve","arena":"R","p":3,"q":7,"gamma":"s","i":2,"j":1}"#,
            "\n",
            r#"{"command":"norm","arena":"R","p":3,"q":7,"b":"2"}"#,
            "\n"
        ),
    )
    .unwrap();
    let out = galembed(&["batch", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["verdict"], "solvable");
    assert!(lines[1]["error"].is_string());
    assert_eq!(lines[2]["verdict"], "unsolvable");
    std::fs::remove_dir_all(&dir).unwrap();
}
