use std::path::PathBuf;
use std::process::{Command, Output};

fn tropimod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropimod"))
        .args(args)
        .env_remove("TROPIMOD_CACHE")
        .output()
        .expect("spawn tropimod")
}

fn stdout(args: &[&str]) -> String {
    let out = tropimod(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn census_of_quartics() {
    let out = stdout(&["census", "T 4"]);
    assert!(out.contains("# total\t1278"), "{out}");
    assert!(out.contains("# nonregular\t1"));
    assert!(out.lines().any(|l| l.starts_with("(000)")));
}

#[test]
fn check_genus3_points() {
    let out = stdout(&["check", "--graph", "212", "--lengths", "1,1,1,2.5,1,1"]);
    assert!(out.starts_with("not realizable"), "{out}");
    let out = stdout(&["check", "--graph", "(212)", "--lengths", "2,2,2,3,2,2"]);
    assert!(out.starts_with("realizable"), "{out}");
    // the loop-loop graph never appears on a plane quartic
    let out = stdout(&["check", "--graph", "303", "--lengths", "1,1,1,1,1,1"]);
    assert!(out.starts_with("not realizable"));
}

#[test]
fn fractional_lengths_are_scaled() {
    let a = stdout(&["check", "--graph", "020", "--lengths", "1/2,1/3,1,1,1/2,1/4"]);
    let b = stdout(&["check", "--graph", "020", "--lengths", "6,4,12,12,6,3"]);
    assert_eq!(a, b);
}

#[test]
fn genus4_polygons() {
    let out = stdout(&["polygons", "--genus", "4"]);
    assert_eq!(out.lines().filter(|l| l.starts_with("# Q 4")).count(), 3);
    assert_eq!(out.lines().filter(|l| l.starts_with("# E 4")).count(), 6);
}

#[test]
fn count_only() {
    let out = stdout(&["triangulate", "--count-only", "T 2"]);
    assert!(out.contains("triangulations\t2"), "{out}");
    let out = stdout(&["triangulate", "--count-only", "--no-symmetry", "T 2"]);
    assert!(out.contains("triangulations\t4"), "{out}");
}

#[test]
fn count_only_resumes_from_checkpoint() {
    let dir = scratch("ckpt");
    std::fs::create_dir_all(&dir).unwrap();
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_tropimod"))
            .args(["triangulate", "--count-only", "T 3"])
            .env("TROPIMOD_CACHE", &dir)
            .output()
            .unwrap();
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    let first = run();
    assert_eq!(first, run());
    assert!(first.contains("triangulations\t"));
}

#[test]
fn transfer_is_idempotent_at_k_eq_g_plus_2() {
    let all = scratch("e22.txt");
    stdout(&["triangulate", "E 2 2", "-o", all.to_str().unwrap()]);
    let text = std::fs::read_to_string(&all).unwrap();
    let one = text.split("\n\n").find(|b| !b.trim().is_empty()).unwrap();
    let input = scratch("one.txt");
    std::fs::write(&input, format!("{one}\n")).unwrap();

    let out1 = scratch("t1.txt");
    let out2 = scratch("t2.txt");
    stdout(&["transfer", input.to_str().unwrap(), "-o", out1.to_str().unwrap()]);
    let t1 = std::fs::read_to_string(&out1).unwrap();
    assert!(t1.starts_with("polygon E 2 4"), "{t1}");
    stdout(&["transfer", out1.to_str().unwrap(), "-o", out2.to_str().unwrap()]);
    assert_eq!(t1, std::fs::read_to_string(&out2).unwrap());
}

#[test]
fn prob_is_independent_of_jobs() {
    let a = stdout(&["prob", "--genus", "3", "--samples", "3000", "--seed", "7", "--jobs", "1"]);
    let b = stdout(&["prob", "--genus", "3", "--samples", "3000", "--seed", "7", "--jobs", "3"]);
    assert_eq!(a, b);
    assert!(a.contains("graph\tprobability\tci95\tmethod\tsamples\tseed"));
    assert!(a.lines().any(|l| l.starts_with("(303)\t0.000000\t")));
}

#[test]
fn exact_genus3() {
    let out = stdout(&["prob", "--genus", "3", "--exact"]);
    assert!(out.lines().any(|l| l.starts_with("(020)\t8/15\t")), "{out}");
    assert!(out.lines().any(|l| l.starts_with("(212)\t1/3\t")));
}

#[test]
fn errors_exit_nonzero() {
    for args in [
        &["census", "nonsense"][..],
        &["census", "T 5"],
        &["check", "--graph", "999", "--lengths", "1,1,1,1,1,1"],
        &["check", "--graph", "000", "--lengths", "1,1"],
        &["prob", "--genus", "3", "--exact", "--samples", "10", "--seed", "1", "--jobs", "1", "--extended", "--output", "/nonexistent/dir/x"],
    ] {
        let out = tropimod(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"), "{args:?}");
    }
}
