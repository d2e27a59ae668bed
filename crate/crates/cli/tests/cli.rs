//! Black-box tests of the command-line interface: exit codes, output
//! determinism, and in-place formatting.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pseudosys"))
}

fn tmpdir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("pseudosys-cli-test-{}", std::process::id()));
    fs::create_dir_all(&d).unwrap();
    d
}

fn write(name: &str, content: &str) -> PathBuf {
    let p = tmpdir().join(name);
    fs::write(&p, content).unwrap();
    p
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

const SYS_A: &str = "\
system a m 1 n 1
input u0
state x0
map u0 -> x0

signal u0 dim 1
left const 0
events 0:1
right const

signal x0 dim 1
left const 0
events 1:1
right const
";

// Same input, but two-dimensional states.
const SYS_B: &str = "\
system b m 1 n 2
input u0
state x0
map u0 -> x0

signal u0 dim 1
left const 0
events 0:1
right const

signal x0 dim 2
left const 00
events 1:11
right const
";

// The only admissible input oscillates forever to the left, so no
// nonempty sub-table is a system.
const SYS_P: &str = "\
system p m 1 n 1
input u0
state x0
map u0 -> x0

signal u0 dim 1
left periodic 1/2:0 1/2:1
events 0:1
right const

signal x0 dim 1
left const 0
events 1:1
right const
";

const SIGS: &str = "\
signal u dim 1
left const 0
events 0:1
right const

signal x dim 1
left const 0
events 1/2:1
right const
";

#[test]
fn classify_succeeds_and_is_deterministic() {
    let f = write("a.txt", SYS_A);
    let run = || bin().arg("classify").arg(&f).output().unwrap();
    let (a, b) = (run(), run());
    assert_eq!(code(&a), 0);
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn parse_errors_exit_2() {
    let f = write("garbage.txt", "signal oops dim X\n");
    let out = bin().arg("classify").arg(&f).output().unwrap();
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());

    // Unknown signal names are reported on the same channel.
    let s = write("sigs.txt", SIGS);
    let out = bin()
        .args(["delay"])
        .arg(&s)
        .args(["--d", "1", "--input", "u", "--state", "nosuch"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);

    // So are unreadable files.
    let out = bin()
        .arg("classify")
        .arg(tmpdir().join("does-not-exist.txt"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn dimension_mismatch_exits_3() {
    let a = write("dim_a.txt", SYS_A);
    let b = write("dim_b.txt", SYS_B);
    let out = bin().args(["op", "intersect"]).arg(&a).arg(&b).output().unwrap();
    assert_eq!(code(&out), 3);
}

#[test]
fn missing_induced_system_exits_4() {
    let p = write("per.txt", SYS_P);
    let out = bin().args(["op", "induced"]).arg(&p).output().unwrap();
    assert_eq!(code(&out), 4);
}

#[test]
fn usage_errors_exit_64_and_help_succeeds() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(code(&out), 64);
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn delay_membership_answers() {
    let s = write("delay_sigs.txt", SIGS);
    let out = bin()
        .arg("delay")
        .arg(&s)
        .args(["--d", "1", "--input", "u", "--state", "x"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "member true\n");

    // tau = 0 is outside the window, so u is not its own response.
    let out = bin()
        .arg("delay")
        .arg(&s)
        .args(["--d", "1", "--input", "u", "--state", "u"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "member false\n");
}

#[test]
fn fmt_canonicalizes_in_place_and_is_idempotent() {
    let messy = "\
# a comment
signal  u   dim 1
left const 0
events 1/2:1   1:0
right const
";
    let f = write("messy.txt", messy);
    assert_eq!(code(&bin().arg("fmt").arg(&f).output().unwrap()), 0);
    let once = fs::read_to_string(&f).unwrap();
    assert_ne!(once, messy);
    assert_eq!(code(&bin().arg("fmt").arg(&f).output().unwrap()), 0);
    let twice = fs::read_to_string(&f).unwrap();
    assert_eq!(once, twice);

    let f = write("fmt_sys.txt", SYS_A);
    assert_eq!(code(&bin().arg("fmt").arg(&f).output().unwrap()), 0);
    let once = fs::read_to_string(&f).unwrap();
    assert_eq!(code(&bin().arg("fmt").arg(&f).output().unwrap()), 0);
    assert_eq!(once, fs::read_to_string(&f).unwrap());
}

#[test]
fn laws_json_and_text_agree_on_the_verdict() {
    let out = bin()
        .args(["laws", "--seed", "9", "--iters", "5", "--transfer-iters", "2"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("result pass"), "{text}");

    let out = bin()
        .args(["laws", "--seed", "9", "--iters", "5", "--transfer-iters", "2", "--json"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"], "pass");
    assert_eq!(v["identity"]["iterations"], 5);
}

#[test]
fn laws_time_cap_stops_early_but_passes() {
    let out = bin()
        .args(["laws", "--seed", "1", "--iters", "1000000"])
        .env("PSEUDOSYS_LAWS_TIME_CAP_MS", "200")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("result pass"), "{text}");
}
