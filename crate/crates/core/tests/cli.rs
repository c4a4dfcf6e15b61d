mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::sg4_text;

const BIN: &str = env!("CARGO_BIN_EXE_charp-kill");

fn charp(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN).current_dir(dir).args(args).output().expect("spawn charp-kill")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn workdir(files: &[(&str, &str)]) -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in files {
        std::fs::write(dir.path().join(name), text).unwrap();
    }
    let path = dir.path().to_path_buf();
    (dir, path)
}

#[test]
fn lc_prints_a_dimension_table() {
    let (_keep, dir) = workdir(&[("sg4.ring", &sg4_text(2))]);
    let o = charp(&dir, &["lc", "sg4.ring", "--i", "1", "--degrees", "-2..3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let table: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(table, ["t\tdim", "-2\t0", "-1\t0", "0\t0", "1\t1", "2\t0", "3\t0"]);
    assert_eq!(text.lines().filter(|l| l.starts_with("# basis t=1 #0 ")).count(), 1);
}

#[test]
fn kill_then_verify() {
    let (_keep, dir) = workdir(&[("sg4.ring", &sg4_text(2))]);
    let o = charp(&dir, &["kill", "sg4.ring", "--i", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.join("sg4.h1.kc").exists() && dir.join("sg4.h1.tower").exists());
    let o = charp(&dir, &["verify", "sg4.h1.kc", "sg4.ring"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("OK: 1 kill certificate(s) for H^1"));

    // the tower file is itself a readable description of the extension
    let tower = std::fs::read_to_string(dir.join("sg4.h1.tower")).unwrap();
    assert!(tower.lines().any(|l| l.starts_with("adjoin = Z : ")));
}

#[test]
fn top_level_kill_is_a_precondition_error() {
    let (_keep, dir) = workdir(&[("sg4.ring", &sg4_text(2))]);
    let o = charp(&dir, &["kill", "sg4.ring", "--i", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[precondition]"));
}

#[test]
fn bad_rings_are_parse_errors() {
    let (_keep, dir) = workdir(&[
        ("p4.ring", "p = 4\nvars = x, y\n"),
        ("inhom.ring", "p = 3\nvars = x, y\nideal = x^2 - y\n"),
    ]);
    for ring in ["p4.ring", "inhom.ring", "missing.ring"] {
        let o = charp(&dir, &["hilbert", ring, "--degrees", "0..2"]);
        assert_eq!(o.status.code(), Some(5), "{ring}");
        assert!(stderr(&o).starts_with("error[parse]"), "{ring}: {}", stderr(&o));
    }
    let o = charp(&dir, &["hilbert"]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn frob_reads_a_class_file_from_lc() {
    let (_keep, dir) = workdir(&[("sg4.ring", &sg4_text(3))]);
    let o = charp(&dir, &["lc", "sg4.ring", "--i", "1", "--degrees", "1..1"]);
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("# basis")).unwrap();
    let json = &line[line.find('{').unwrap()..];
    std::fs::write(dir.join("alpha.json"), json).unwrap();
    let o = charp(&dir, &["frob", "sg4.ring", "--i", "1", "--class", "alpha.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("class #0 t=1: g(T) = T^3\n"));

    let o = charp(&dir, &["frob", "sg4.ring", "--i", "1", "--auto"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("g(T) = T^3"));
}

#[test]
fn kill_with_an_explicit_class() {
    let (_keep, dir) = workdir(&[("sg4.ring", &sg4_text(2))]);
    let o = charp(&dir, &["lc", "sg4.ring", "--i", "1", "--degrees", "1..1"]);
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("# basis")).unwrap();
    std::fs::write(dir.join("alpha.json"), &line[line.find('{').unwrap()..]).unwrap();
    let o = charp(&dir, &["kill", "sg4.ring", "--i", "1", "--class", "alpha.json", "--out", "one"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = charp(&dir, &["verify", "one.kc", "sg4.ring"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn trivialize_and_verify() {
    let (_keep, dir) = workdir(&[("sg4.ring", &sg4_text(2))]);
    let o = charp(&dir, &["trivialize", "sg4.ring", "--params", "a,d", "--witness", "b^2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).lines().any(|l| l.starts_with("c1 = ")));
    let o = charp(&dir, &["verify", "sg4.triv.tc", "sg4.ring"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let o = charp(&dir, &["trivialize", "sg4.ring", "--params", "a,d", "--witness", "a*b"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tampered_and_mismatched_certificates_fail() {
    let (_keep, dir) = workdir(&[("sg4.ring", &sg4_text(2)), ("sg4b.ring", &sg4_text(3))]);
    assert_eq!(charp(&dir, &["kill", "sg4.ring", "--i", "1"]).status.code(), Some(0));
    let o = charp(&dir, &["verify", "sg4.h1.kc", "sg4b.ring"]);
    assert_eq!(o.status.code(), Some(4));
    let text = std::fs::read_to_string(dir.join("sg4.h1.kc")).unwrap();
    std::fs::write(dir.join("cut.kc"), &text[..text.len() / 2]).unwrap();
    let o = charp(&dir, &["verify", "cut.kc", "sg4.ring"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).starts_with("error[verify-fail]"));
    let o = charp(&dir, &["verify", "absent.kc", "sg4.ring"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn outputs_are_deterministic() {
    let (_keep, dir) = workdir(&[("sg4.ring", &sg4_text(3))]);
    let mut seen = Vec::new();
    for k in 0..2 {
        let prefix = format!("run{k}");
        let o = charp(&dir, &["kill", "sg4.ring", "--i", "1", "--out", &prefix]);
        assert_eq!(o.status.code(), Some(0));
        let kc = std::fs::read(dir.join(format!("{prefix}.kc"))).unwrap();
        let tower = std::fs::read(dir.join(format!("{prefix}.tower"))).unwrap();
        let lc = stdout(&charp(&dir, &["lc", "sg4.ring", "--i", "1", "--degrees", "-1..2"]));
        seen.push((kc, tower, lc));
    }
    assert_eq!(seen[0], seen[1]);
}

#[test]
fn in_process_runner_matches_exit_codes() {
    let (_keep, dir) = workdir(&[("plane.ring", "p = 5\nvars = x, y\n")]);
    let ring = dir.join("plane.ring");
    let ring = ring.to_str().unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = charp_core::cli::run(["charp-kill", "hilbert", ring, "--degrees", "0..3"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap(), "t\tdim\n0\t1\n1\t2\n2\t3\n3\t4\n");

    let prefix = dir.join("plane.h0");
    let mut out = Vec::new();
    let code = charp_core::cli::run(
        ["charp-kill", "kill", ring, "--i", "0", "--out", prefix.to_str().unwrap()],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    assert!(String::from_utf8(out).unwrap().starts_with("killed 0 class(es) of H^0; rank bound 1"));
    let kc = dir.join("plane.h0.kc");
    let code = charp_core::cli::run(["charp-kill", "verify", kc.to_str().unwrap(), ring], &mut Vec::new(), &mut err);
    assert_eq!(code, 0);
}
