use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn opsm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opsm")).current_dir(dir).args(args).output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) {
    let out = opsm(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// g1 reads A<B<C<D, g2 B<A<D<C, g3 D<C<B<A.
fn three_rows(dir: &Path) {
    fs::write(
        dir.join("m.tsv"),
        "gene\tA\tB\tC\tD\ng1\t1\t2\t3\t4\ng2\t2\t1\t4\t3\ng3\t4\t3\t2\t1\n",
    )
    .unwrap();
}

const CLUSTER: &[&str] = &[
    "cluster", "--input", "m.tsv", "--k", "100", "--w", "4", "--min-genes", "2", "--min-exps", "2",
    "--direction", "both", "--output", "c.tsv", "--report", "r.txt",
];

#[test]
fn cluster_reports_anti_correlated_pair() {
    let dir = TempDir::new().unwrap();
    three_rows(dir.path());
    ok(dir.path(), CLUSTER);
    let text = fs::read_to_string(dir.path().join("c.tsv")).unwrap();
    let line = text.lines().find(|l| l.split('\t').nth(4) == Some("A,C")).expect(&text);
    let f: Vec<&str> = line.split('\t').collect();
    assert_eq!(f[1..4], ["3", "2", "1"]);
    assert_eq!(f[5], "g1:+,g2:+,g3:-");
}

#[test]
fn forward_only_drops_reversed_rows() {
    let dir = TempDir::new().unwrap();
    three_rows(dir.path());
    let mut args = CLUSTER.to_vec();
    args[12] = "forward";
    ok(dir.path(), &args);
    let text = fs::read_to_string(dir.path().join("c.tsv")).unwrap();
    assert!(text.lines().any(|l| l.ends_with("\tA,C\tg1:+,g2:+") && l.contains("\t0\t")), "{text}");
    assert!(!text.contains(":-"));
}

#[test]
fn oracle_agrees_with_cluster() {
    let dir = TempDir::new().unwrap();
    three_rows(dir.path());
    ok(dir.path(), CLUSTER);
    ok(
        dir.path(),
        &[
            "oracle", "--input", "m.tsv", "--w", "4", "--min-genes", "2", "--min-exps", "2", "--direction",
            "both", "--output", "o.tsv", "--report", "or.txt",
        ],
    );
    let body = |f: &str| {
        fs::read_to_string(dir.path().join(f))
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(String::from)
            .collect::<Vec<_>>()
    };
    assert_eq!(body("c.tsv"), body("o.tsv"));
}

#[test]
fn zero_window_is_rejected() {
    let dir = TempDir::new().unwrap();
    three_rows(dir.path());
    let mut args = CLUSTER.to_vec();
    args[6] = "0";
    let out = opsm(dir.path(), &args);
    assert!(!out.status.success());
    let err = stderr(&out);
    assert!(err.contains("w must be in [1, m]"), "{err}");
    assert_eq!(err.trim_end().lines().count(), 1);
    assert!(!dir.path().join("c.tsv").exists());
}

#[test]
fn bad_invocations_give_one_line() {
    let dir = TempDir::new().unwrap();
    three_rows(dir.path());
    for args in [
        vec!["cluster", "--bogus"],
        vec!["cluster", "--input", "missing.tsv", "--k", "1", "--w", "1", "--min-genes", "2", "--min-exps", "2",
             "--direction", "both", "--output", "c.tsv", "--report", "r.txt"],
        vec!["eval-probes", "--clusters", "nope.tsv", "--probe-map", "p.tsv", "--permutations", "10"],
        vec!["frobnicate"],
    ] {
        let out = opsm(dir.path(), &args);
        assert!(!out.status.success(), "{args:?}");
        let err = stderr(&out);
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("opsm: "), "{err}");
    }
}

#[test]
fn every_output_starts_with_the_header() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["synth", "--rows", "40", "--cols", "8", "--seed", "5", "--plant", "rows=0,1,2,3,4;cols=6,1,3,5;reversed=4",
            "--output", "m.tsv", "--manifest", "plant.tsv"]);
    ok(d, &["cluster", "--input", "m.tsv", "--k", "50", "--w", "8", "--min-genes", "3", "--min-exps", "3",
            "--direction", "both", "--output", "c.tsv", "--report", "r.txt"]);
    ok(d, &["summarize", "--clusters", "c.tsv", "--input", "m.tsv", "--density", "d.csv", "--output", "s.txt"]);

    let probes: String = (0..40).map(|i| format!("g{i}\tG{}\n", i / 2)).collect();
    fs::write(d.join("probes.tsv"), probes).unwrap();
    ok(d, &["eval-probes", "--clusters", "c.tsv", "--input", "m.tsv", "--probe-map", "probes.tsv",
            "--permutations", "20", "--seed", "1", "--output", "p.txt"]);

    let ann: String = (0..8).map(|i| format!("e{i}\ttissue\t{}\n", if i < 4 { "liver" } else { "brain" })).collect();
    fs::write(d.join("ann.tsv"), ann).unwrap();
    ok(d, &["eval-annotations", "--clusters", "c.tsv", "--input", "m.tsv", "--annotations", "ann.tsv",
            "--category", "tissue", "--min-exps", "2", "--seed", "2", "--output", "a.txt", "--results", "a.tsv",
            "--curve", "a.csv"]);

    fs::write(d.join("neg.txt"), "g30\ng31\ng32\n").unwrap();
    ok(d, &["eval-negatives", "--clusters", "c.tsv", "--input", "m.tsv", "--negatives", "neg.txt",
            "--permutations", "20", "--seed", "3", "--output", "n.txt", "--breakdown", "n.csv"]);

    let labels: String = (0..40).map(|i| format!("g{i}\tM{}\n", i % 3)).collect();
    fs::write(d.join("labels.tsv"), labels).unwrap();
    ok(d, &["eval-similarity", "--clusters", "c.tsv", "--input", "m.tsv", "--labels", "labels.tsv",
            "--random", "3", "--seed", "4", "--output", "l.txt", "--breakdown", "l.csv"]);

    let expected = [
        ("m.tsv", "synth", true),
        ("plant.tsv", "synth", true),
        ("c.tsv", "cluster", false),
        ("r.txt", "cluster", false),
        ("d.csv", "summarize", false),
        ("s.txt", "summarize", false),
        ("p.txt", "eval-probes", true),
        ("a.txt", "eval-annotations", true),
        ("a.tsv", "eval-annotations", true),
        ("a.csv", "eval-annotations", true),
        ("n.txt", "eval-negatives", true),
        ("n.csv", "eval-negatives", true),
        ("l.txt", "eval-similarity", true),
        ("l.csv", "eval-similarity", true),
    ];
    for (file, command, seeded) in expected {
        let text = fs::read_to_string(d.join(file)).unwrap();
        let lines: Vec<&str> = text.lines().take(3).collect();
        assert!(lines[0].starts_with("# opsm "), "{file}: {text}");
        assert!(lines[1].starts_with(&format!("# invocation: opsm {command} ")), "{file}: {text}");
        assert_eq!(lines[2].starts_with("# seed: none"), !seeded, "{file}: {text}");
    }
}

#[test]
fn synth_plant_is_found() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["synth", "--rows", "60", "--cols", "10", "--seed", "9", "--plant", "rows=3,7,11,19;cols=8,2,5,0,6;reversed=7",
            "--output", "m.tsv", "--manifest", "plant.tsv"]);
    ok(d, &["cluster", "--input", "m.tsv", "--k", "200", "--w", "10", "--min-genes", "4", "--min-exps", "5",
            "--direction", "both", "--output", "c.tsv", "--report", "r.txt"]);
    let text = fs::read_to_string(d.join("c.tsv")).unwrap();
    assert!(text.lines().any(|l| {
        let f: Vec<&str> = l.split('\t').collect();
        f.len() == 6
            && f[4] == "e8,e2,e5,e0,e6"
            && ["g3:+", "g7:-", "g11:+", "g19:+"].iter().all(|g| f[5].split(',').any(|x| x == *g))
    }), "{text}");
}

#[test]
fn missing_values_follow_policy() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fs::write(d.join("m.tsv"), "gene\tA\tB\tC\ng1\t1\t2\t3\ng2\tNA\t1\t2\ng3\t1\t2\t3\n").unwrap();
    let base = ["cluster", "--input", "m.tsv", "--k", "10", "--w", "3", "--min-genes", "2", "--min-exps", "2",
                "--direction", "forward", "--output", "c.tsv", "--report", "r.txt"];
    let out = opsm(d, &base);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("g2"), "{}", stderr(&out));
    let mut drop = base.to_vec();
    drop.extend(["--missing", "drop-rows"]);
    ok(d, &drop);
    let text = fs::read_to_string(d.join("c.tsv")).unwrap();
    assert!(!text.contains("g2:"));
    assert!(text.contains("A,B,C\tg1:+,g3:+"), "{text}");
}
