use std::io::Write;
use std::process::{Command, Output};

const PAIR: &str = "a=0 b=2; a=1 b=3";

fn quadcomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadcomp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn build_two_letter_dot() {
    let o = quadcomp(&[
        "--q",
        "5",
        "--alphabet",
        PAIR,
        "build",
        "--emit",
        "m",
        "--format",
        "dot",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    for edge in [
        "\"S\" -> \"S\" [label=\"f\"]",
        "\"S\" -> \"1\" [label=\"g\"]",
        "\"1\" -> \"2\" [label=\"g\"]",
        "\"2\" -> \"3\" [label=\"f\"]",
    ] {
        assert!(dot.contains(edge), "missing {edge}");
    }
    assert_eq!(dot.matches("[label=").count(), 4);
}

#[test]
fn build_variants() {
    let o = quadcomp(&["--q", "3", "build", "--emit", "both", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let docs: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(docs[0]["kind"], "N");
    assert_eq!(docs[1]["kind"], "M");
    assert_eq!(docs[0]["states"].as_array().unwrap().len(), 7);
    let o = quadcomp(&[
        "--q",
        "5",
        "--alphabet",
        PAIR,
        "build",
        "--emit",
        "n",
        "--trim",
    ]);
    assert!(stdout(&o).starts_with("automaton N:"));
    let o = quadcomp(&["--q", "5", "--alphabet", PAIR, "build", "--minimize"]);
    assert!(stdout(&o).starts_with("automaton M: 4 states"));
}

#[test]
fn characteristic_two_is_rejected() {
    let o = quadcomp(&["--q", "4", "build"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("characteristic 2 unsupported"));
    assert!(stdout(&o).is_empty());
    let o = quadcomp(&["--p", "2", "count", "-n", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_errors_exit_two() {
    for args in [
        vec!["build"],
        vec!["--q", "6", "build"],
        vec!["--q", "5", "--alphabet", "a=0 b=9x", "build"],
        vec!["--q", "5", "--alphabet", "a=0 b=2; a=0 b=2", "build"],
        vec!["--q", "5", "--alphabet", PAIR, "test", "--word", "fz"],
        vec!["--q", "5", "test", "--poly", "1,,1"],
        vec!["--q", "5", "bogus"],
        vec!["local", "--chain", "a=0 b=1"],
    ] {
        let o = quadcomp(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stdout(&o).is_empty(), "{args:?} printed a result");
    }
}

#[test]
fn test_words_and_polynomials() {
    let cases: [(&[&str], &str, i32); 6] = [
        (
            &["--q", "5", "--alphabet", PAIR, "test", "ggf"],
            "Irreducible",
            0,
        ),
        (
            &["--q", "5", "--alphabet", PAIR, "test", "gf"],
            "Reducible(2)",
            1,
        ),
        (
            &["--q", "5", "--alphabet", PAIR, "test", ""],
            "Irreducible",
            0,
        ),
        (&["--q", "3", "test", "2,0,1,0,1"], "Irreducible", 0),
        (&["--q", "3", "test", "0,0,2,0,1"], "Reducible(1)", 1),
        (&["--q", "5", "test", "1,1,0,0,1"], "NotDecomposable(1)", 3),
    ];
    for (args, line, code) in cases {
        let o = quadcomp(args);
        assert_eq!(stdout(&o).trim(), line, "{args:?}");
        assert_eq!(o.status.code(), Some(code), "{args:?}");
    }
}

#[test]
fn count_and_enumerate() {
    let o = quadcomp(&[
        "--q",
        "5",
        "--alphabet",
        PAIR,
        "count",
        "--words",
        "-n",
        "3",
    ]);
    assert_eq!(stdout(&o), "4\n");
    let o = quadcomp(&["--q", "3", "count", "--words", "-n", "0"]);
    assert_eq!(stdout(&o), "1\n");
    let o = quadcomp(&["--q", "3", "count", "-n", "5"]);
    assert_eq!(stdout(&o), "words: 28\npolynomials: 84\n");

    let o = quadcomp(&["--q", "3", "enumerate", "-n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 6);
    assert!(stdout(&o).starts_with("2,0,1,0,1\n"));
    let o = quadcomp(&[
        "--q",
        "3",
        "enumerate",
        "-n",
        "2",
        "--annotate",
        "--innermost-first",
    ]);
    assert!(stdout(&o).starts_with("2,0,1,0,1 shift=0 word=gh\n"));
    let o = quadcomp(&[
        "--q",
        "5",
        "--alphabet",
        PAIR,
        "enumerate",
        "-n",
        "3",
        "--words",
    ]);
    assert_eq!(stdout(&o), "fff\nffg\nfgg\nggf\n");
}

#[test]
fn budget_exceeded_exits_four() {
    let o = quadcomp(&["--q", "3", "enumerate", "-n", "8", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(4));
    let o = quadcomp(&[
        "--q",
        "5",
        "--alphabet",
        "a=0 b=2; a=1 b=2; a=2 b=3",
        "freedom",
        "--search",
        "9",
        "--budget",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(4));
    let o = quadcomp(&["--q", "3", "count", "-n", "200"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn freedom_report() {
    let o = quadcomp(&["--q", "5", "--alphabet", PAIR, "freedom"]);
    assert_eq!(stdout(&o), "Free: |D_S| = |S|\n");
    let o = quadcomp(&["--q", "5", "--alphabet", "a=0 b=2; a=1 b=2", "freedom"]);
    assert_eq!(stdout(&o), "Free: |D_S| = 1\n");
    let o = quadcomp(&[
        "--q",
        "5",
        "--alphabet",
        "a=0 b=2; a=1 b=2; a=2 b=3",
        "freedom",
        "--search",
        "3",
    ]);
    let out = stdout(&o);
    assert!(out.starts_with("Unknown\n"));
    assert!(out.contains("collision") || out.contains("no collision"));
}

#[test]
fn local_verdicts() {
    let o = quadcomp(&["local", "--p", "5", "--chain", "a=0 b=7; a=1 b=3"]);
    assert_eq!(
        (stdout(&o).as_str(), o.status.code()),
        ("Irreducible\n", Some(0))
    );
    let o = quadcomp(&["local", "--p", "5", "--chain", "a=0 b=5"]);
    assert_eq!(
        (stdout(&o).as_str(), o.status.code()),
        ("PreconditionFailed\n", Some(3))
    );
    let o = quadcomp(&["local", "--chain", "p=7 N=4 a=0 b=2"]);
    assert_eq!(
        (stdout(&o).as_str(), o.status.code()),
        ("Reducible\n", Some(1))
    );
}

#[test]
fn canonicalize_and_decompose() {
    let o = quadcomp(&["--q", "3", "canonicalize", "2,0,1,0,1"]);
    assert_eq!(stdout(&o), "shift=0 word=hg\n");
    // π(hg)(x + 1)
    let o = quadcomp(&["--q", "3", "canonicalize", "1,0,1,1,1"]);
    assert_eq!(stdout(&o), "shift=1 word=hg\n");
    let o = quadcomp(&["--q", "3", "canonicalize", "0,0,2,0,1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = quadcomp(&["--q", "3", "decompose", "2,0,1,0,1"]);
    assert_eq!(stdout(&o), "a=[2,1] b=0\n");
    let o = quadcomp(&["--q", "5", "decompose", "1,1,0,0,1"]);
    assert_eq!(o.status.code(), Some(3));
    let o = quadcomp(&["--q", "5", "decompose", "1,1,1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn alphabet_file_and_extension_fields() {
    let mut path = std::env::temp_dir();
    path.push(format!("quadcomp-alphabet-{}.txt", std::process::id()));
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "# two letters\nname=f a=0 b=2\nname=g a=1 b=3").unwrap();
    drop(f);
    let o = quadcomp(&[
        "--q",
        "5",
        "--alphabet-file",
        path.to_str().unwrap(),
        "count",
        "--words",
        "-n",
        "8",
    ]);
    assert_eq!(stdout(&o), "4\n");
    std::fs::remove_file(&path).unwrap();

    let o = quadcomp(&["--p", "3", "--k", "2", "test", "[1,1],0,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn output_is_deterministic() {
    let args = ["--q", "7", "build", "--emit", "both", "--format", "json"];
    assert_eq!(quadcomp(&args).stdout, quadcomp(&args).stdout);
}
