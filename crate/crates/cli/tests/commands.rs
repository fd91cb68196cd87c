use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::process::{Command, Output, Stdio};

fn dng(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dng")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn dng_with_input(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dng"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn solve_reports_winner() {
    let o = dng(&["solve", "cyclic:9"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("winner: P3"));
    let o = dng(&["solve", "dihedral:4"]);
    assert!(stdout(&o).contains("winner: P1"));
    assert!(stdout(&o).contains("optimal first move: "));
}

#[test]
fn solve_json_and_table() {
    let o = dng(&["solve", "cyclic:6", "--json", "--table"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["winner"], 2);
    assert_eq!(v["loser"], 3);
    assert!(v["table"].is_object());
}

#[test]
fn bad_specs_exit_two() {
    for args in [
        ["solve", "cyclic:1"],
        ["solve", "torus:3"],
        ["predict", "cyclic:x"],
        ["solve", "cyclic:401"],
    ] {
        let o = dng(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));
    }
    assert_eq!(dng(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn predict_headlines() {
    assert_eq!(
        stdout(&dng(&["predict", "cyclic:6"])).lines().next(),
        Some("Thm 2.1(6): P2")
    );
    assert_eq!(
        stdout(&dng(&["predict", "product:cyclic:2*cyclic:6"])).lines().next(),
        Some("Thm 4.4 3(b): P3")
    );
    assert!(stdout(&dng(&["predict", "perm:(1 2),(1 2 3 4)"])).contains("no closed-form prediction"));
}

#[test]
fn predict_matches_solve_on_small_families() {
    for d in [
        "cyclic:12",
        "dihedral:9",
        "product:cyclic:3*cyclic:3",
        "product:cyclic:2*cyclic:2*cyclic:2",
    ] {
        let p = stdout(&dng(&["predict", d]));
        let s = stdout(&dng(&["solve", d]));
        let predicted = p.lines().next().unwrap().rsplit(' ').next().unwrap().to_string();
        assert!(s.contains(&format!("winner: {predicted}")), "{d}: {p} vs {s}");
    }
}

#[test]
fn covering_lines() {
    assert_eq!(
        stdout(&dng(&["covering", "product:cyclic:3*cyclic:3"])).trim(),
        "OneCoverOnly: P1 cannot win"
    );
    assert_eq!(
        stdout(&dng(&["covering", "product:cyclic:2*cyclic:2"])).trim(),
        "NoCover: P3 cannot win"
    );
    let o = dng(&["covering", "cyclic:9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("covering analysis requires a noncyclic group"));
}

#[test]
fn verify_families_agree() {
    for args in [
        &["verify", "--family", "cyclic", "--max", "200"][..],
        &["verify", "--family", "dihedral", "--max", "50"],
        &["verify", "--family", "abelian", "--max", "63"],
    ] {
        let o = dng(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}\n{}", stdout(&o));
        assert!(stdout(&o).contains("result: AGREE"));
    }
}

#[test]
fn verify_writes_reproducible_reports() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let o = dng(&[
            "verify",
            "--family",
            "dihedral",
            "--max",
            "12",
            "--no-timing",
            "--out",
            path.to_str().unwrap(),
            "--cache-dir",
            dir.path().join("cache").to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().count(), 11);
    assert!(text.starts_with("descriptor,order,family,theorem,case_label,predicted,solved,agree,covering,subgroups,ms"));
    assert!(std::fs::read_dir(dir.path().join("cache")).unwrap().count() >= 10);
}

#[test]
fn verify_list_with_oracle_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = dng(&[
        "verify",
        "--family",
        "list",
        "--group",
        "perm:(1 2 3),(2 3 4)",
        "--group",
        "cyclic:16",
        "--oracle",
        "--json",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summary"]["rows"], 2);
    assert_eq!(v["summary"]["oracle_mismatches"].as_u64(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 2);
}

#[test]
fn verify_list_with_bad_descriptor_exits_two() {
    let o = dng(&["verify", "--family", "list", "--group", "cyclic:4", "--group", "nope:3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("ERROR nope:3"));
    assert_eq!(dng(&["verify", "--family", "list"]).status.code(), Some(2));
}

#[test]
fn play_z2_flows() {
    let o = dng_with_input(&["play", "cyclic:2", "--human-seats", "1"], "1\n");
    assert!(stdout(&o).contains("P1 loses, P3 wins"));
    let o = dng_with_input(&["play", "cyclic:2", "--human-seats", "1"], "0\n");
    assert!(stdout(&o).contains("P1 wins"));
    let o = dng_with_input(&["play", "dihedral:5", "--human-seats", "1,3"], "");
    assert!(o.status.success());
    assert!(stdout(&o).contains("aborted"));
    assert_eq!(
        dng_with_input(&["play", "cyclic:2", "--human-seats", "4"], "")
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn play_self_play_matches_solve() {
    let o = dng_with_input(&["play", "cyclic:9", "--human-seats", ""], "");
    assert!(stdout(&o).contains("P3 wins"), "{}", stdout(&o));
}

#[test]
fn serve_on_os_port_and_busy_port() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dng"))
        .args(["serve", "--port", "0"])
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut banner = String::new();
    BufReader::new(child.stdout.take().unwrap())
        .read_line(&mut banner)
        .unwrap();
    let addr = banner.trim().rsplit("http://").next().unwrap().to_string();
    let port: u16 = addr.rsplit(':').next().unwrap().parse().unwrap();
    assert_ne!(port, 0);

    let mut stream = TcpStream::connect(&addr).unwrap();
    write!(
        stream,
        "GET /groups/catalog HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\n\r\n"
    )
    .unwrap();
    let mut response = String::new();
    stream.read_to_string(&mut response).unwrap();
    assert!(response.starts_with("HTTP/1.1 200"));
    assert!(response.contains("\"cyclic:9\""));
    child.kill().unwrap();
    child.wait().unwrap();

    let held = TcpListener::bind("127.0.0.1:0").unwrap();
    let busy = held.local_addr().unwrap().port().to_string();
    let o = dng(&["serve", "--port", &busy]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot bind"));
}

fn http(addr: &str, request: &str) -> String {
    let mut stream = TcpStream::connect(addr).unwrap();
    stream.write_all(request.as_bytes()).unwrap();
    let mut response = String::new();
    stream.read_to_string(&mut response).unwrap();
    response
}

fn start_server(snapshot: &str) -> (std::process::Child, String, impl BufRead) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dng"))
        .args(["serve", "--port", "0", "--snapshot", snapshot])
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut reader = BufReader::new(child.stdout.take().unwrap());
    let mut line = String::new();
    loop {
        line.clear();
        reader.read_line(&mut line).unwrap();
        if line.contains("listening") {
            break;
        }
    }
    let addr = line.trim().rsplit("http://").next().unwrap().to_string();
    (child, addr, reader)
}

#[cfg(unix)]
#[test]
fn serve_snapshots_sessions_on_interrupt() {
    let dir = tempfile::tempdir().unwrap();
    let snapshot = dir.path().join("sessions.json");
    let snapshot = snapshot.to_str().unwrap();

    let (mut child, addr, mut out) = start_server(snapshot);
    let body = r#"{"descriptor":"dihedral:6","seats":["HUMAN","ENGINE","ENGINE"]}"#;
    let response = http(
        &addr,
        &format!(
            "POST /games HTTP/1.1\r\nHost: {addr}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
            body.len()
        ),
    );
    let json = &response[response.find('{').unwrap()..];
    let id = serde_json::from_str::<serde_json::Value>(json).unwrap()["id"]
        .as_str()
        .unwrap()
        .to_string();

    Command::new("kill")
        .args(["-INT", &child.id().to_string()])
        .status()
        .unwrap();
    assert!(child.wait().unwrap().success());
    let mut rest = String::new();
    out.read_to_string(&mut rest).unwrap();
    assert!(rest.contains("saved 1 sessions"));

    let (mut child, addr, _) = start_server(snapshot);
    let response = http(
        &addr,
        &format!("GET /games/{id} HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\n\r\n"),
    );
    assert!(response.starts_with("HTTP/1.1 200"));
    child.kill().unwrap();
    child.wait().unwrap();
}
