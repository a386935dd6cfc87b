use std::process::{Command, Output};

fn latidem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latidem"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn info_diamond() {
    let out = latidem(&["info", "boolean:2", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["elements"], 4);
    assert_eq!(v["height"], 2);
    assert_eq!(v["z_sizes"], serde_json::json!([0, 1, 2]));
    assert_eq!(v["complemented"], true);
}

#[test]
fn info_chain() {
    let out = latidem(&["info", "chain:3"]);
    let text = stdout(&out);
    assert!(text.contains("elements 4\n"));
    assert!(text.contains("height 3\n"));
    assert!(text.contains("complemented no\n"));
}

#[test]
fn lattice_files() {
    let dir = std::env::temp_dir().join(format!("latidem-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("diamond.txt");
    std::fs::write(&good, "elements: 0 a b 1\ncovers:\n0 a\n0 b\na 1\nb 1\n").unwrap();
    let out = latidem(&["idempotent", good.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), stdout(&latidem(&["idempotent", "boolean:2"])));

    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "elements: 0 1\ncovers:\n0 1 2\n").unwrap();
    let out = latidem(&["info", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let not_lattice = dir.join("vee.txt");
    std::fs::write(&not_lattice, "elements: 0 a b\ncovers:\n0 a\n0 b\n").unwrap();
    let out = latidem(&["info", not_lattice.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("a"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn idempotent_text() {
    let out = latidem(&["idempotent", "boolean:2"]);
    assert_eq!(stdout(&out), "+1·α_{0,a,1}\n+1·α_{0,b,1}\n-1·α_{0,1}\n");
    let out = latidem(&["idempotent", "chain:4"]);
    assert_eq!(stdout(&out), "+1·α_{0,1,2,3,4}\n");
    let out = latidem(&["idempotent", "boolean:2", "--ring", "mod:2"]);
    assert_eq!(stdout(&out), "+1·α_{0,a,1}\n+1·α_{0,b,1}\n+1·α_{0,1}\n");
}

#[test]
fn idempotent_methods_agree_byte_for_byte() {
    for input in ["pentagon", "divisor:12", "boolean:3"] {
        let direct = latidem(&["idempotent", input, "--format", "json"]);
        let original = latidem(&[
            "idempotent",
            input,
            "--format",
            "json",
            "--method",
            "original",
        ]);
        let crapo = latidem(&["idempotent", input, "--format", "json", "--crapo"]);
        assert_eq!(direct.stdout, original.stdout);
        assert_eq!(direct.stdout, crapo.stdout);
    }
}

#[test]
fn unsupported_ring() {
    let out = latidem(&["idempotent", "boolean:2", "--ring", "mod:1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mobius_values() {
    assert_eq!(stdout(&latidem(&["mobius", "boolean:2", "0", "1"])), "1\n");
    assert_eq!(stdout(&latidem(&["mobius", "boolean:2", "a", "a"])), "1\n");
    assert_eq!(
        stdout(&latidem(&["mobius", "boolean:2", "--chain", "0,a"])),
        "product 0\noracle 0\n"
    );
    assert_eq!(
        stdout(&latidem(&["mobius", "boolean:2", "--chain", "0,1"])),
        "product 1\noracle 1\n"
    );
    assert_eq!(
        latidem(&["mobius", "boolean:2", "a", "b"]).status.code(),
        Some(2)
    );
    assert_eq!(
        latidem(&["mobius", "boolean:2", "0", "q"]).status.code(),
        Some(2)
    );
    assert_eq!(
        latidem(&["mobius", "boolean:2", "--chain", "a,1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_exit_codes() {
    let out = latidem(&["verify", "boolean:2", "--checks", "idempotent,central"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert!(lines
        .iter()
        .all(|r| r["status"] == "pass" && r.get("elapsed_ms").is_none()));

    assert_eq!(
        latidem(&["verify", "boolean:2", "--checks", "nonsense"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(latidem(&["verify", "lattice:9"]).status.code(), Some(2));
}

#[test]
fn verify_sampled_mode() {
    let out = latidem(&[
        "verify",
        "partition:4",
        "--checks",
        "central",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        r["mode"],
        serde_json::json!({"kind": "sampled", "seed": 7, "count": 500})
    );

    let out = latidem(&[
        "verify",
        "boolean:2",
        "--checks",
        "central",
        "--max-endos",
        "1",
        "--samples",
        "30",
    ]);
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["mode"]["kind"], "sampled");
    assert_eq!(r["counts"]["endomorphisms"], 30);
}

#[test]
fn verify_timings_are_opt_in() {
    let out = latidem(&["verify", "chain:2", "--checks", "idempotent", "--timings"]);
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r["elapsed_ms"].is_u64());
}
