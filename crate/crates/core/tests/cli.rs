use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use cuboid_core::{build_npc, Curve, Parametrization, Rational, SolutionPair};

fn cuboid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuboid"))
        .args(args)
        .env_remove("CUBOID_FACTOR_BUDGET")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(o).trim()).unwrap()
}

#[test]
fn point_commands() {
    let o = cuboid(&["point", "double", "--N", "5", "--x", "-4", "--y", "6"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["x"], "1681/144");

    let o = cuboid(&["point", "check", "--N", "5", "--x", "1", "--y", "1"]);
    assert_eq!(o.status.code(), Some(1));

    let o = cuboid(&["point", "mul", "-k", "3", "--N", "5", "--x", "-4", "--y", "6"]);
    assert!(o.status.success());
    let v = json(&o);
    let x: Rational = v["x"].as_str().unwrap().parse().unwrap();
    let y: Rational = v["y"].as_str().unwrap().parse().unwrap();
    assert!(Curve::new(5).unwrap().contains(&x, &y));

    let o = cuboid(&[
        "point", "add", "--N", "5", "--x", "-4", "--y", "6", "--x2", "0", "--y2", "0",
    ]);
    assert_eq!(stdout(&o).trim(), r#"{"N":5,"x":"25/4","y":"75/8"}"#);

    let o = cuboid(&["point", "reflect1", "--N", "5", "--x", "0", "--y", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn npc_generate_and_verify() {
    let o = cuboid(&[
        "npc",
        "generate",
        "--N",
        "5",
        "--X",
        "25/4",
        "--Z",
        "1681/144",
        "--param",
        "invariant",
    ]);
    assert!(o.status.success());
    let rec = stdout(&o);
    assert!(rec.starts_with(r#"{"a":9840,"b":4557,"c":3124,"d_ac":10324,"d_bc":5525,"d_s":11285"#));

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("rec.json");
    std::fs::write(&file, &rec).unwrap();
    let o = cuboid(&["npc", "verify", file.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(json(&o)["pc"], false);

    let mut child = Command::new(env!("CARGO_BIN_EXE_cuboid"))
        .args(["npc", "verify"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"a":672,"b":153,"c":105,"d_ac":680,"d_bc":185,"d_s":697}"#)
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["valid"], false);

    let o = cuboid(&["npc", "generate", "--N", "5", "--X", "25/4", "--Z", "25/4"]);
    assert_eq!(o.status.code(), Some(1));
    let o = cuboid(&[
        "npc", "generate", "--N", "5", "--X", "25/4", "--Z", "1681/144", "--param", "diagonal",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn invert_command() {
    let sides = [
        "--a", "672", "--b", "153", "--c", "104", "--dac", "680", "--dbc", "185", "--ds", "697",
    ];
    let o = cuboid(&[&["invert"][..], &sides].concat());
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["N"], 34);
    assert_eq!(v["pairs"].as_array().unwrap().len(), 4);
    assert_eq!(v["pairs"][3]["X"], "-578/81");

    let o = cuboid(&[&["invert"][..], &sides, &["--family", "first"]].concat());
    assert_eq!(json(&o)["N"], 4305);

    let o = cuboid(&[
        "invert", "--a", "672", "--b", "153", "--c", "105", "--dac", "680", "--dbc", "185", "--ds", "697",
    ]);
    assert_eq!(o.status.code(), Some(1));

    let o = cuboid(&[
        "invert",
        "--a",
        "104",
        "--b",
        "153",
        "--c",
        "672",
        "--dac",
        "185",
        "--dbc",
        "680",
        "--ds",
        "697",
        "--classify",
    ]);
    assert!(o.status.success());
    assert_eq!(json(&o)["pairs"][0]["X"], "833/16");
}

/// A cuboid whose congruent number has two prime factors just above 10^6.
fn hard_cuboid() -> [String; 6] {
    // legs u^2 - v^2 and 2uv with u, v prime give area uv(u^2 - v^2)
    let (u, v) = (1_000_033i64, 1_000_003i64);
    let (a, b, c) = (
        Rational::from(u * u - v * v),
        Rational::from(2 * u * v),
        Rational::from(u * u + v * v),
    );
    let area = &a * &b / Rational::from(2);
    let curve = Curve::new(area.numer().clone()).unwrap();
    let half_c = &c / Rational::from(2);
    let p = curve.point_from_x(&half_c.square()).unwrap();
    let pair = SolutionPair::same_parity(&p, 1, 3).unwrap();
    let npc = build_npc(&pair, Parametrization::Invariant).unwrap();
    npc.entries().map(|e| e.to_string())
}

#[test]
fn factor_budget_exhaustion_exits_3() {
    let e = hard_cuboid();
    let args = [
        "invert", "--a", &e[0], "--b", &e[1], "--c", &e[2], "--dac", &e[3], "--dbc", &e[4], "--ds", &e[5],
    ];
    let o = Command::new(env!("CARGO_BIN_EXE_cuboid"))
        .args(args)
        .env("CUBOID_FACTOR_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));

    let o = cuboid(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    // squarefree part of uv(u - v)(u + v) = 1000033 * 1000003 * 30 * 4 * 500009
    let n: u128 = 1_000_033u128 * 1_000_003 * 30 * 500_009;
    assert_eq!(json(&o)["N"].to_string(), n.to_string());
}

#[test]
fn kummer_command() {
    let o = cuboid(&[
        "kummer",
        "--N",
        "5",
        "--X",
        "25/4",
        "--Y",
        "75/8",
        "--Z",
        "1681/144",
        "--W",
        "62279/1728",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["holds"], true);
    assert_eq!(v["xi"], "5/4");

    let o = cuboid(&[
        "kummer", "--N", "5", "--X", "25/4", "--Y", "75/8", "--Z", "25/4", "--W", "75/8",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

fn write_job(dir: &Path, body: &str) -> String {
    let path = dir.join("job.json");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn search_command() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(
        dir.path(),
        r#"{"max_multiple": 5, "parametrizations": ["invariant", "second"]}"#,
    );
    let one = cuboid(&["search", &job, "--workers", "1"]);
    let four = cuboid(&["search", &job, "--workers", "4"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let lines = stdout(&one);
    assert!(lines.lines().count() > 10);
    for line in lines.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["status"], "ok");
    }

    // interrupted output resumes to the same bytes
    let out = dir.path().join("out.jsonl");
    let partial = &one.stdout[..one.stdout.len() / 2];
    std::fs::write(&out, partial).unwrap();
    let o = cuboid(&["search", &job, "--out", out.to_str().unwrap(), "--resume"]);
    assert!(o.status.success());
    assert_eq!(std::fs::read(&out).unwrap(), one.stdout);

    // seeds come from --seeds when the job has none
    let seeds = dir.path().join("seeds.jsonl");
    std::fs::write(&seeds, "{\"N\":6,\"x\":\"-3\",\"y\":\"9\"}\n").unwrap();
    let o = cuboid(&["search", &job, "--seeds", seeds.to_str().unwrap()]);
    assert!(stdout(&o).lines().all(|l| l.starts_with(r#"{"N":6,"#)));

    let missing = dir.path().join("missing.json");
    assert_eq!(cuboid(&["search", missing.to_str().unwrap()]).status.code(), Some(2));
    let bad = write_job(dir.path(), r#"{"max_multiple": 1}"#);
    assert_eq!(cuboid(&["search", &bad]).status.code(), Some(1));
    let bad_seed = write_job(
        dir.path(),
        r#"{"max_multiple": 3, "seeds": [{"N": 5, "x": "1", "y": "1"}]}"#,
    );
    assert_eq!(cuboid(&["search", &bad_seed]).status.code(), Some(1));
}

#[test]
fn output_modes() {
    let o = cuboid(&["--approx", "point", "reflect2", "--N", "5", "--x", "-4", "--y", "6"]);
    assert_eq!(json(&o)["x_approx"], "-0.55555555555555555555");
    let o = cuboid(&["point", "double", "--N", "5", "--x", "-4", "--y", "6", "--pretty"]);
    assert!(stdout(&o)
        .lines()
        .any(|l| l.starts_with("x ") && l.ends_with("1681/144")));
    assert_eq!(cuboid(&["nonsense"]).status.code(), Some(2));
    assert_eq!(cuboid(&["point", "double", "--N", "5"]).status.code(), Some(2));
}
