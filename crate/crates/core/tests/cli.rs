use std::path::PathBuf;

use inversion::cli::{run, EXIT_GUARD, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK};
use inversion::{Digraph, InversionFamily};

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn inv(args: &[&str], stdin: &str) -> Output {
    let mut argv = vec!["inversion"];
    argv.extend_from_slice(args);
    let mut input = stdin.as_bytes();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(argv, &mut input, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn construct(args: &[&str]) -> String {
    let mut full = vec!["construct"];
    full.extend_from_slice(args);
    let o = inv(&full, "");
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    o.stdout
}

fn scratch_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("inversion-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn solve_counterexample() {
    let o = inv(&["solve", "-", "--max-k", "3"], &construct(&["ce-r"]));
    assert_eq!(o.code, EXIT_OK);
    let (first, rest) = o.stdout.split_once('\n').unwrap();
    assert_eq!(first, "inv = 3");
    let family = InversionFamily::parse(rest).unwrap();
    assert_eq!(family.len(), 3);
}

#[test]
fn solve_reports_exceeding() {
    let o = inv(&["solve", "-", "--max-k", "2"], &construct(&["ce-r"]));
    assert_eq!(o.code, EXIT_NEGATIVE);
    assert_eq!(o.stdout, "inv > 2\n");
}

#[test]
fn fpt_examples() {
    let o = inv(&["fpt", "-", "-k", "0"], &construct(&["transitive", "10"]));
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(o.stdout, "inv <= 0\norder: 0 1 2 3 4 5 6 7 8 9\n0\n");
    let o = inv(&["fpt", "-", "-k", "2"], &construct(&["qn", "8"]));
    assert_eq!(o.code, EXIT_NEGATIVE);
    let o = inv(&["fpt", "-", "-k", "1"], &construct(&["tau", "2", "4"]));
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("not a tournament"));
}

#[test]
fn check_round_trip() {
    let c3 = scratch_file("c3.txt", &construct(&["c3"]));
    let v5 = scratch_file("v5.txt", &construct(&["v5"]));
    let joined = construct(&["kjoin", v5.to_str().unwrap(), c3.to_str().unwrap()]);
    let joined_path = scratch_file("joined.txt", &joined);
    let fam_path = joined_path.with_file_name("joined.fam");
    let o = inv(
        &["solve", joined_path.to_str().unwrap(), "--max-k", "3", "--family-out", fam_path.to_str().unwrap()],
        "",
    );
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.starts_with("inv = 3\n"));
    let o = inv(&["check", joined_path.to_str().unwrap(), "--family", fam_path.to_str().unwrap()], "");
    assert_eq!((o.code, o.stdout.as_str()), (EXIT_OK, "decycling\n"));
    let o = inv(&["check", joined_path.to_str().unwrap(), "--family", "-"], "0\n");
    assert_eq!((o.code, o.stdout.as_str()), (EXIT_NEGATIVE, "not decycling\n"));
}

#[test]
fn constructions_parse_back() {
    for args in [
        vec!["c3"],
        vec!["transitive", "5"],
        vec!["v5"],
        vec!["ce-r"],
        vec!["qn", "6"],
        vec!["tau", "2", "8"],
        vec!["random", "7", "--seed", "42"],
    ] {
        let text = construct(&args);
        let d = Digraph::parse(&text).unwrap();
        assert_eq!(d.to_text(), text);
    }
    assert_eq!(inv(&["construct", "random", "7"], "").code, EXIT_INPUT);
    assert_eq!(inv(&["construct", "tau", "2", "7"], "").code, EXIT_INPUT);
}

#[test]
fn malformed_input_reports_position() {
    let o = inv(&["solve", "-", "--max-k", "1"], "3\n010\n0x1\n100\n");
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("line 3, column 2"), "{}", o.stderr);
    let o = inv(&["tau", "-"], "2\n01\n");
    assert_eq!(o.code, EXIT_INPUT);
    let o = inv(&["solve", "/nonexistent/file", "--max-k", "1"], "");
    assert_eq!(o.code, EXIT_INPUT);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(inv(&[], "").code, EXIT_INPUT);
    assert_eq!(inv(&["solve", "-"], "").code, EXIT_INPUT);
    let help = inv(&["--help"], "");
    assert_eq!(help.code, EXIT_OK);
    assert!(help.stdout.contains("solve"));
    assert_eq!(inv(&["experiment", "rank-tail", "4", "1", "10"], "").code, EXIT_INPUT);
}

#[test]
fn guards_exit_three() {
    let big = construct(&["transitive", "30"]);
    assert_eq!(inv(&["tau", "-"], &big).code, EXIT_GUARD);
    let o = inv(&["tau", "-", "--accept-long-runtimes"], &construct(&["transitive", "25"]));
    assert_eq!((o.code, o.stdout.as_str()), (EXIT_OK, "tau = 0\n\n"));
    assert_eq!(inv(&["solve", "-", "--max-k", "40"], &construct(&["c3"])).code, EXIT_GUARD);
    assert_eq!(inv(&["experiment", "rank-tail", "8", "1", "1", "--exhaustive"], "").code, EXIT_GUARD);
}

#[test]
fn distance_and_transversals() {
    let c3 = scratch_file("dc3.txt", &construct(&["c3"]));
    let t3 = scratch_file("dt3.txt", &construct(&["transitive", "3"]));
    let o = inv(&["distance", c3.to_str().unwrap(), t3.to_str().unwrap(), "--max-k", "2"], "");
    assert_eq!((o.code, o.stdout.as_str()), (EXIT_OK, "distance = 1\n1\n0 2\n"));
    let o = inv(&["distance", c3.to_str().unwrap(), t3.to_str().unwrap(), "--max-k", "0"], "");
    assert_eq!((o.code, o.stdout.as_str()), (EXIT_NEGATIVE, "distance > 0\n"));
    let o = inv(&["tau-prime", "-"], &construct(&["c3"]));
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.starts_with("tau' = 1\n"));
    let o = inv(&["tau", "-"], &construct(&["v5"]));
    assert!(o.stdout.starts_with("tau = 1\n"));
}

#[test]
fn rank_commands() {
    let o = inv(&["rank", "-"], "3\n110\n110\n001\n");
    assert_eq!((o.code, o.stdout.as_str()), (EXIT_OK, "rank = 2\n"));
    let r = scratch_file("r.txt", &construct(&["c3"]));
    let o = inv(&["rank", r.to_str().unwrap(), "--certificate", "-"], "1\n0 1\n");
    assert_eq!(o.stdout, "rank = 1\n3\n110\n110\n000\n");
}

#[test]
fn bounds_and_experiments() {
    let o = inv(&["bounds", "6"], "");
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("lower = 1\nupper = 2\n"));
    let o = inv(&["experiment", "random-inv", "4", "0", "0", "--exhaustive"], "");
    assert_eq!(
        o.stdout,
        "experiment,n,param,trials,hits,empirical,bound,exact\nrandom-inv,4,0,64,24,0.375,0.375,true\n"
    );
}

/// `solve` and `fpt` give the same verdict on every tournament we construct.
#[test]
fn solve_and_fpt_agree() {
    let mut corpus = vec![construct(&["c3"]), construct(&["v5"]), construct(&["ce-r"])];
    for n in 3..=8 {
        corpus.push(construct(&["qn", &n.to_string()]));
    }
    for seed in 0..6 {
        corpus.push(construct(&["random", "7", "--seed", &seed.to_string()]));
    }
    for text in &corpus {
        for k in 0..=3 {
            let ks = k.to_string();
            let exact = inv(&["solve", "-", "--max-k", &ks], text).code;
            let fpt = inv(&["fpt", "-", "-k", &ks], text).code;
            assert_eq!(exact, fpt, "k = {k}\n{text}");
        }
    }
}
