use std::fs;
use std::path::Path;

use avt::anchor::Algo;
use avt::cli::{main_with, main_with_paths, BenchRow, FastPaths, RunReport, EXIT_DATA, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};
use avt::graph::{Snapshot, Vertex};
use avt::peel::decompose;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["avt"];
    full.extend_from_slice(args);
    let code = main_with(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn gen(dir: &Path, n: &str, m: &str, t: &str, churn: &str, seed: &str) {
    let d = dir.to_str().unwrap();
    let (code, _, err) = run(&["gen", "--n", n, "--m", m, "--T", t, "--churn", churn, "--seed", seed, "--out", d]);
    assert_eq!(code, EXIT_OK, "{err}");
}

fn report(series: &Path, k: &str, l: &str, algo: &str) -> RunReport {
    let (code, out, err) = run(&["run", "--series", series.to_str().unwrap(), "--k", k, "--l", l, "--algo", algo]);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn gen_writes_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    gen(&a, "100", "300", "5", "10:20", "1");
    let mut names: Vec<String> = fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        ["base.edges", "step_0001.delta", "step_0002.delta", "step_0003.delta", "step_0004.delta"]
    );

    let b = tmp.path().join("b");
    gen(&b, "100", "300", "5", "10:20", "1");
    for name in &names {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap());
    }

    let c = tmp.path().join("c");
    gen(&c, "100", "300", "1", "10:20", "1");
    assert_eq!(fs::read_dir(&c).unwrap().count(), 1);
}

#[test]
fn run_report_is_consistent() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("s");
    gen(&dir, "100", "300", "5", "10:20", "1");
    let out = tmp.path().join("r.json");
    let (code, _, _) = run(&[
        "run", "--series", dir.to_str().unwrap(), "--k", "3", "--l", "10", "--algo", "inc", "--seed", "1",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let rep: RunReport = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(rep.solutions.len(), 5);
    assert_eq!((rep.config.k, rep.config.l, rep.config.algo, rep.config.seed), (3, 10, Algo::Inc, Some(1)));
    assert_eq!(rep.totals.followers, rep.solutions.iter().map(|r| r.followers).sum::<usize>());
    assert_eq!(
        rep.totals.candidates_probed,
        rep.solutions.iter().map(|r| r.candidates_probed).sum::<u64>()
    );
    // round trip
    let again: RunReport = serde_json::from_str(&serde_json::to_string(&rep).unwrap()).unwrap();
    assert_eq!(again, rep);
}

#[test]
fn carry_on_static_series_repeats_anchors() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("s");
    gen(&dir, "80", "240", "4", "0:0", "3");
    let rep = report(&dir, "4", "3", "carry");
    assert!(rep.solutions.iter().all(|r| r.anchors == rep.solutions[0].anchors));
}

#[test]
fn inc_probes_fewer_than_greedy_on_small_series() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("s");
    gen(&dir, "100", "300", "5", "10:20", "1");
    let g = report(&dir, "4", "2", "greedy");
    let i = report(&dir, "4", "2", "inc");
    assert!(i.totals.candidates_probed < g.totals.candidates_probed);
}

#[test]
fn solutions_satisfy_invariants() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("s");
    gen(&dir, "120", "400", "6", "10:30", "9");
    let series = avt::graph::load_series(&dir).unwrap();
    let snaps = series.snapshots();
    for algo in ["greedy", "inc", "carry"] {
        let rep = report(&dir, "4", "3", algo);
        for (r, s) in rep.solutions.iter().zip(&snaps) {
            let core = decompose(s).kcore(4);
            assert!(r.anchors.len() <= 3);
            assert!(r.anchors.iter().all(|a| !core.contains(a)));
            let followers = avt::oracle::oracle_followers(s, &r.anchors, 4);
            assert_eq!(r.followers, followers.len(), "{algo} t={}", r.t);
            assert_eq!(r.anchored_core_size, core.len() + r.anchors.len() + followers.len());
        }
    }
}

#[test]
fn bench_csv_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("s");
    gen(&dir, "100", "300", "5", "10:20", "1");
    let (code, out, _) = run(&["bench", "--series", dir.to_str().unwrap(), "--k", "3", "--l", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("t,algo,elapsed_ms,candidates_probed,followers\n"));
    let rows: Vec<BenchRow> = csv::Reader::from_reader(out.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap();
    assert_eq!(rows.len(), 10);
    let (_, again, _) = run(&["bench", "--series", dir.to_str().unwrap(), "--k", "3", "--l", "2"]);
    let rows2: Vec<BenchRow> = csv::Reader::from_reader(again.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap();
    let counters = |r: &[BenchRow]| r.iter().map(|x| (x.t, x.algo, x.candidates_probed, x.followers)).collect::<Vec<_>>();
    assert_eq!(counters(&rows), counters(&rows2));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&[]).0, EXIT_USAGE);
    assert_eq!(run(&["run", "--k", "3"]).0, EXIT_USAGE);
    assert_eq!(run(&["gen", "--n", "5", "--m", "3", "--T", "2", "--churn", "3-4", "--out", "x"]).0, EXIT_USAGE);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
    assert_eq!(run(&["--version"]).0, EXIT_OK);

    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("none");
    let (code, _, err) = run(&["run", "--series", missing.to_str().unwrap(), "--k", "3", "--l", "1"]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("error"));

    let dir = tmp.path().join("s");
    gen(&dir, "20", "30", "3", "2:4", "1");
    assert_eq!(run(&["run", "--series", dir.to_str().unwrap(), "--k", "0", "--l", "1"]).0, EXIT_DATA);
    // a malformed delta: the same deletion twice
    fs::write(dir.join("step_0002.delta"), "- 0 1\n- 0 1\n").unwrap();
    let (code, _, err) = run(&["run", "--series", dir.to_str().unwrap(), "--k", "2", "--l", "1"]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("step_0002"), "{err}");

    let (code, _, err) = run(&["gen", "--n", "4", "--m", "7", "--T", "1", "--out", tmp.path().join("g").to_str().unwrap()]);
    assert_eq!(code, EXIT_DATA, "{err}");
}

#[test]
fn verify_passes_and_is_reproducible() {
    let (code, out, _) = run(&["verify", "--seed", "42", "--cases", "60"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 3);
    assert_eq!(run(&["verify", "--seed", "42", "--cases", "60"]).1, out);
}

fn off_by_one_followers(s: &Snapshot, u: Vertex, k: u32) -> Vec<Vertex> {
    // drops the largest follower
    let mut f = avt::anchor::compute_followers(s, &decompose(s), &[], u, k).unwrap();
    f.pop();
    f
}

#[test]
fn verify_catches_injected_bug() {
    let fast = FastPaths {
        followers: off_by_one_followers,
        ..FastPaths::default()
    };
    let mut out = Vec::new();
    let code = main_with_paths(["avt", "verify", "--seed", "5", "--cases", "100"], &fast, &mut out, &mut Vec::new());
    let out = String::from_utf8(out).unwrap();
    assert_eq!(code, EXIT_VERIFY);
    assert!(out.contains("followers: FAIL"));
    assert!(out.contains("counterexample (followers)"));
    let snapshot_text: String = out
        .lines()
        .skip_while(|l| !l.starts_with("n="))
        .take_while(|l| !l.starts_with("operation"))
        .map(|l| format!("{l}\n"))
        .collect();
    let g = avt::graph::parse_snapshot(&snapshot_text).unwrap();
    let op = out.lines().find(|l| l.starts_with("operation:")).unwrap();
    let words: Vec<&str> = op.split(' ').collect();
    let u: Vertex = words[4].parse().unwrap();
    let k: u32 = words[6].trim_start_matches("k=").parse().unwrap();
    let fails = |h: &Snapshot| off_by_one_followers(h, u, k) != avt::oracle::oracle_followers(h, &[u], k);
    assert!(fails(&g));
    // no single edge can be dropped without the failure disappearing
    for e in g.edges() {
        assert!(!fails(&g.with_removed(&[e]).unwrap()), "{out}");
    }
}
