mod common;

use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Output};

use common::*;
use folkman_core::arrowing::arrows_edge_33_joined;
use folkman_core::canon::canonical_label;
use folkman_core::invariants::{clique_number, independence_number};
use folkman_core::{graph6, Graph};
use folkman_pipeline::io::read_graphs;
use serde_json::Value;

fn folkman(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_folkman"))
        .args(args)
        .output()
        .unwrap()
}

fn folkman_stdin(args: &[&str], stdin: &str) -> Output {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_folkman"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stage_json(o: &Output) -> Value {
    assert_eq!(code(o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(o)).unwrap()
}

fn labels(path: &Path) -> BTreeSet<Vec<u8>> {
    read_graphs(path)
        .unwrap()
        .iter()
        .map(canonical_label)
        .collect()
}

#[test]
fn props_reports_invariants() {
    let o = folkman(&["props", "Dhc"]);
    assert_eq!(code(&o), 0);
    let line = stdout(&o);
    for field in [
        "graph6=Dhc",
        "n=5",
        "edges=5",
        "omega=2",
        "alpha=2",
        "chi=3",
        "aut=10",
    ] {
        assert!(line.contains(field), "{line}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&folkman(&[])), 1);
    assert_eq!(code(&folkman(&["no-such-command"])), 1);
    assert_eq!(code(&folkman(&["--help"])), 0);
    assert_eq!(code(&folkman(&["stage", "no-such-stage"])), 1);
    assert_eq!(code(&folkman(&["stage", "algorithm1"])), 1);
    assert_eq!(code(&folkman(&["arrow", "/no/such/file"])), 1);

    let bad = folkman(&["props", "D~"]);
    assert_eq!(code(&bad), 2);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("graph6"));

    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c5.g6");
    std::fs::write(&input, "Dhc\n").unwrap();
    let mismatch = folkman(&["ingest", p(&input), "--expect-count", "2"]);
    assert_eq!(code(&mismatch), 3);
    let stats = folkman(&[
        "stats",
        p(&input),
        "--expect",
        p(&expected_counts()),
        "--table",
        "l15-1",
    ]);
    assert_eq!(code(&stats), 3);
    let unknown = folkman(&[
        "stats",
        p(&input),
        "--expect",
        p(&expected_counts()),
        "--table",
        "nope",
    ]);
    assert_eq!(code(&unknown), 1);
}

#[test]
fn arrow_stream_continues_past_bad_lines() {
    let o = folkman_stdin(&["arrow", "--p", "3"], "Dhc\nD~\nBw\n");
    assert_eq!(code(&o), 2);
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "Dhc true");
    assert!(lines[1].starts_with("line2 error"));
    assert_eq!(lines[2], "Bw true");
}

#[test]
fn arrow_witness_is_a_good_coloring() {
    let o = folkman_stdin(&["arrow", "--witness"], "Dhc\n");
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let fields: Vec<&str> = out.split_whitespace().collect();
    assert_eq!(fields[..2], ["Dhc", "false"]);
    assert_eq!(fields[2].len(), 5);
}

#[test]
fn ingest_dedups_filters_and_writes_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.g6");
    let c5 = Graph::cycle(5);
    let relabeled = c5.permuted(&[2, 0, 4, 1, 3]);
    let lines = [
        graph6::encode_string(&c5),
        graph6::encode_string(&relabeled),
        graph6::encode_string(&Graph::complete(5)),
    ];
    std::fs::write(&input, lines.join("\n") + "\n").unwrap();
    let out = dir.path().join("out.g6");
    let o = folkman(&[
        "ingest",
        p(&input),
        "--out",
        p(&out),
        "--filter",
        "omega<4",
        "--expect-count",
        "1",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(labels(&out), BTreeSet::from([canonical_label(&c5)]));

    let sidecar: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("out.g6.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(sidecar["records"], 3);
    assert_eq!(sidecar["distinct"], 2);
    assert_eq!(sidecar["kept"], 1);
}

#[test]
fn ingest_rejects_bad_input_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.g6");
    std::fs::write(&input, "Dhc\n\n?\x7f\n").unwrap();
    let out = dir.path().join("out.g6");
    let o = folkman(&["ingest", p(&input), "--out", p(&out)]);
    assert_eq!(code(&o), 2);
    assert!(!out.exists());
    assert!(String::from_utf8_lossy(&o.stderr).contains(":3:"));
}

#[test]
fn stats_on_empty_stream() {
    let o = folkman_stdin(&["stats"], "");
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("total 0\n"));
    let o = folkman_stdin(&["stats", "--json"], "");
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["total"], 0);
}

#[test]
fn stage_on_empty_input_reports_zero_counters() {
    let dir = tempfile::tempdir().unwrap();
    let hosts = dir.path().join("hosts.g6");
    std::fs::write(&hosts, "").unwrap();
    let role = format!("hosts={}", p(&hosts));
    let args = [
        "stage",
        "algorithm1",
        "--input",
        &role,
        "--n",
        "9",
        "--p",
        "1",
        "--s",
        "3",
        "--out-dir",
        p(dir.path()),
    ];
    let m = stage_json(&folkman(&args));
    for (name, value) in m["counters"].as_object().unwrap() {
        assert_eq!(value, 0, "{name}");
    }
    let manifest = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .any(|e| e.file_name().to_string_lossy().ends_with(".manifest.json"));
    assert!(manifest);
}

/// The lmax stage on toy sizes against a scan of every graph of that
/// order: maximal K4-free, independence number s, and K_p + G arrows.
#[test]
fn lmax_stage_matches_brute_force() {
    let dir = tempfile::tempdir().unwrap();
    let p_join = 3;
    let mut found = 0;
    for n in 6..=8usize {
        // prev = L(n-1; p), every graph that qualifies.
        let prev: Vec<Graph> = graphs(n - 1)
            .iter()
            .filter(|g| clique_number(g) < 4 && arrows_edge_33_joined(p_join, g).unwrap())
            .cloned()
            .collect();
        let prev_path = dir.path().join(format!("prev{n}.g6"));
        write_g6(&prev_path, &prev);
        for s in 1..=3usize {
            let hosts_path = dir.path().join(format!("hosts{n}-{s}.g6"));
            write_g6(&hosts_path, graphs(n - s));
            let out = dir.path().join(format!("n{n}s{s}"));
            let (h, pr) = (
                format!("hosts={}", p(&hosts_path)),
                format!("prev={}", p(&prev_path)),
            );
            let (ns, ss) = (n.to_string(), s.to_string());
            let args = [
                "stage",
                "lmax15",
                "--input",
                &h,
                "--input",
                &pr,
                "--n",
                &ns,
                "--p",
                "3",
                "--s",
                &ss,
                "--out-dir",
                p(&out),
            ];
            let m = stage_json(&folkman(&args));
            let output = m["outputs"]
                .as_array()
                .unwrap()
                .iter()
                .find(|r| r["role"] == "output")
                .unwrap();
            let got = labels(Path::new(output["path"].as_str().unwrap()));

            let want: BTreeSet<Vec<u8>> = graphs(n)
                .iter()
                .filter(|g| matches!(g.is_maximal_k4_free(), Ok(true)))
                .filter(|g| {
                    independence_number(g) == s && arrows_edge_33_joined(p_join, g).unwrap()
                })
                .map(canonical_label)
                .collect();
            assert_eq!(got, want, "n={n} s={s}");
            found += got.len();
        }
    }
    assert!(found > 0);
}

/// Output files do not depend on the worker count.
#[test]
fn digests_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let hosts = dir.path().join("hosts.g6");
    write_g6(&hosts, graphs(6));
    let role = format!("hosts={}", p(&hosts));
    let digests = |jobs: &str| -> Vec<(String, String)> {
        let out = dir.path().join(format!("j{jobs}"));
        let args = [
            "--jobs",
            jobs,
            "stage",
            "algorithm1",
            "--input",
            &role,
            "--n",
            "8",
            "--p",
            "3",
            "--s",
            "2",
            "--out-dir",
            p(&out),
        ];
        let m = stage_json(&folkman(&args));
        m["outputs"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| (r["role"].to_string(), r["sha256"].to_string()))
            .collect()
    };
    let one = digests("1");
    assert!(!one.is_empty());
    assert_eq!(one, digests("3"));
}

/// L_max(15;1;s) for s = 6 and 7 from every graph on 15 - s vertices.
/// No Sperner graphs arise: every maximal graph in L(14;1) has
/// independence number 4.
#[test]
fn lmax15_high_independence() {
    let dir = tempfile::tempdir().unwrap();
    let expect = expected_counts();
    for (s, expected) in [(6usize, 12u64), (7, 0)] {
        let hosts = dir.path().join(format!("graphs{}.g6", 15 - s));
        write_g6(&hosts, graphs(15 - s));
        let role = format!("hosts={}", p(&hosts));
        let ss = s.to_string();
        let args = [
            "stage",
            "lmax15",
            "--input",
            &role,
            "--s",
            &ss,
            "--out-dir",
            p(dir.path()),
            "--expect",
            p(&expect),
        ];
        let m = stage_json(&folkman(&args));
        assert_eq!(m["counters"]["total"], expected, "s={s}");
    }
}
