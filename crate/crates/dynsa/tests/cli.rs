use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dynsa"))
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dynsa-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("DYNSA_EPOCH_POLICY").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn banana_sa_first_rank() {
    let t = scratch("banana.txt", "banana\n");
    let o = run(&["query", t.to_str().unwrap(), "--mode", "sa", "--queries", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1\t6\n");
}

#[test]
fn all_modes_after_script() {
    let t = scratch("ban2.txt", "banana");
    let s = scratch("ban2.script", "sub 1 c\nins 7 a\ndel 2\n");
    // canana -> cananaa -> cnanaa
    let text = b"cnanaa";
    let sa = dynsa::oracle::naive_sa(text);
    let lcp = dynsa::oracle::naive_lcp_array(text);
    let bwt = dynsa::oracle::naive_bwt(text);
    for mode in ["sa", "bwt", "lcp"] {
        let o = run(&["query", t.to_str().unwrap(), "--mode", mode, "--script", s.to_str().unwrap(), "--queries", "all"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let want: String = (1..=6)
            .map(|i| match mode {
                "sa" => format!("{i}\t{}\n", sa[i - 1]),
                "bwt" => format!("{i}\t{}\n", char::from(bwt[i - 1])),
                _ if i == 1 => "1\t-\n".to_string(),
                _ => format!("{i}\t{}\n", lcp[i - 1]),
            })
            .collect();
        assert_eq!(stdout(&o), want, "mode {mode}");
    }
}

#[test]
fn isa_rejects_insertions_with_exit_3() {
    let t = scratch("isa.txt", "banana");
    let s = scratch("isa.script", "sub 2 b\nins 1 a\n");
    let o = run(&["query", t.to_str().unwrap(), "--mode", "isa", "--script", s.to_str().unwrap(), "--queries", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert!(o.stdout.is_empty());
}

#[test]
fn parse_errors_exit_2_with_line() {
    let t = scratch("p.txt", "banana");
    let s = scratch("p.script", "sub 1 c\n\nsub two c\n");
    let o = run(&["query", t.to_str().unwrap(), "--mode", "sa", "--script", s.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let o = run(&["query", t.to_str().unwrap(), "--mode", "sa", "--queries", "9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn empty_query_list() {
    let t = scratch("e.txt", "banana");
    let o = run(&["query", t.to_str().unwrap(), "--mode", "isa"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}

#[test]
fn epoch_policy_from_env() {
    let t = scratch("env.txt", "abaababaabaababaababa");
    let base = run(&["query", t.to_str().unwrap(), "--mode", "isa", "--queries", "all"]);
    let o = bin()
        .args(["query", t.to_str().unwrap(), "--mode", "isa", "--queries", "all"])
        .env("DYNSA_EPOCH_POLICY", "isa_k=2,flush=1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(o.stdout, base.stdout);
    let bad = bin().args(["query", t.to_str().unwrap(), "--mode", "isa"]).env("DYNSA_EPOCH_POLICY", "bogus=1").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn fuzz_is_deterministic_and_passes() {
    let args = ["fuzz", "--seed", "5", "--n", "20..40", "--ops", "15", "--texts", "3", "--alphabet", "abc"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("PASS\tmode=isa"));
    let s = run(&["fuzz", "--mode", "sa", "--seed", "2", "--n", "30", "--ops", "10", "--texts", "2"]);
    assert_eq!(s.status.code(), Some(0));
}

#[test]
fn injected_fault_gives_repro() {
    let o = run(&["fuzz", "--seed", "9", "--n", "25", "--ops", "12", "--texts", "1", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.starts_with("FAIL\tmode=isa"));
    // one edit is enough to trigger the fault
    let edits: Vec<&str> = out.lines().filter(|l| l.starts_with("sub ")).collect();
    assert_eq!(edits.len(), 1, "{out}");
}

#[test]
fn bench_output_shape() {
    let o = run(&["bench", "--n", "", "--mode", "isa"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);
    let o = run(&["bench", "--n", "64,128", "--ops", "3", "--mode", "sa"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 3);
    assert!(out.lines().all(|l| !l.ends_with(' ') && !l.ends_with('\t')));
    assert!(out.lines().skip(1).all(|l| l.split('\t').count() == 7));
}
