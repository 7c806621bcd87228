use std::io::Write;
use std::process::{Command, Stdio};

fn eulertrail(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_eulertrail"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn exit_codes() {
    assert_eq!(eulertrail(&["check", "-"], "a b\nb a\n").0, 0);
    assert_eq!(eulertrail(&["check", "-"], "a b\na c\n").0, 1);
    assert_eq!(eulertrail(&["check", "-"], "a\n").0, 2);
    assert_eq!(eulertrail(&["frobnicate"], "").0, 2);
    assert_eq!(eulertrail(&["count", "-"], "a b 2\nb a 2\n").0, 2, "parallel edges in simple mode");
}

#[test]
fn reads_files_and_streams_trails() {
    let path = std::env::temp_dir().join(format!("eulertrail-{}.txt", std::process::id()));
    std::fs::write(&path, "# star\na b\nb a\na c\nc a\n").unwrap();
    let p = path.to_str().unwrap();
    let (code, out, _) = eulertrail(&["enumerate", p, "--format", "trails-nodes"], "");
    assert_eq!(code, 0);
    assert_eq!(out, "a b a c a\na c a b a\n");
    let (_, out, _) = eulertrail(&["enumerate", p, "--format", "dot"], "");
    assert!(out.starts_with("digraph trie"));
    let (_, out, _) = eulertrail(&["count", p, "--counter", "brute", "--start", "b"], "");
    assert_eq!(out, "1\n");
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn bench_reports_ratio() {
    let (code, out, _) = eulertrail(&["bench", "--gen-n", "200", "--gen-cycles", "150", "--seed", "3", "--max-trails", "20"], "");
    assert_eq!(code, 0);
    assert!(out.contains("leaves=20"), "{out}");
    let ratio: f64 = out.lines().find_map(|l| l.strip_prefix("ratio=")).unwrap().parse().unwrap();
    assert!(ratio <= 50.0);
}
