//! End-to-end runs of the installed binary: every subcommand, the
//! documented exit codes, and byte-level determinism of outputs.

use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

use mvrcg::format;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvrcg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

const GENE: &str = "# mvr-graph v1\nnodes: G1 G2 D1 D2\nG1 -> D1\nG2 -> D2\nD1 <-> D2\n";

#[test]
fn msep_answers_queries() {
    let dir = TempDir::new().unwrap();
    let gene = write(&dir, "gene.txt", GENE);
    let out = run(&["msep", "--graph", &gene, "--x", "G1", "--y", "G2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "true\n");
    let out = run(&["msep", "--graph", &gene, "--x", "G1", "--y", "G2", "--z", "D1,D2"]);
    assert_eq!(stdout(&out), "false\n");
    // data-dependent failures exit 1
    let out = run(&["msep", "--graph", &gene, "--x", "G1", "--y", "nope"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("unknown vertex"));
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["learn", "--type", "gaussian", "--alpha", "0.01", "--algo", "decomp", "--variant", "essential", "--out", "x.txt"]);
    assert_eq!(out.status.code(), Some(2), "missing --data");
    let out = run(&["msep", "--graph", "g.txt", "--x", "a", "--y", "b", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2), "unknown flag");
    let dir = TempDir::new().unwrap();
    let gene = write(&dir, "gene.txt", GENE);
    let out = run(&["tree", "--graph", &gene, "--hypergraph", &gene, "--out", &path(&dir, "t.txt")]);
    assert_eq!(out.status.code(), Some(2), "two tree sources at once");
}

#[test]
fn simulate_then_learn_round_trips() {
    let dir = TempDir::new().unwrap();
    let (g, d) = (path(&dir, "g.txt"), path(&dir, "d.csv"));
    let out = run(&[
        "simulate", "--p", "8", "--N", "2", "--k", "0.3", "--n", "2000", "--seed", "7",
        "--out-graph", &g, "--out-data", &d,
    ]);
    assert!(out.status.success());
    let truth = format::read_graph(&fs::read_to_string(&g).unwrap()).unwrap();
    assert_eq!(truth.n_vertices(), 8);

    // same invocation, byte-identical artifacts
    let (g2, d2) = (path(&dir, "g2.txt"), path(&dir, "d2.csv"));
    run(&[
        "simulate", "--p", "8", "--N", "2", "--k", "0.3", "--n", "2000", "--seed", "7",
        "--out-graph", &g2, "--out-data", &d2,
    ]);
    assert_eq!(fs::read(&g).unwrap(), fs::read(&g2).unwrap());
    assert_eq!(fs::read(&d).unwrap(), fs::read(&d2).unwrap());

    let (learned, seps) = (path(&dir, "learned.txt"), path(&dir, "seps.txt"));
    let out = run(&[
        "learn", "--data", &d, "--type", "gaussian", "--alpha", "0.01", "--algo", "decomp",
        "--variant", "essential", "--out", &learned, "--sepsets", &seps,
    ]);
    assert!(out.status.success());
    let learned = format::read_graph(&fs::read_to_string(&learned).unwrap()).unwrap();
    assert_eq!(learned.names(), truth.names());
    assert!(fs::read_to_string(&seps).unwrap().starts_with("# sepsets v1"));
}

#[test]
fn oracle_recovers_the_gene_pattern() {
    let dir = TempDir::new().unwrap();
    let gene = write(&dir, "gene.txt", GENE);
    for algo in ["decomp", "pc"] {
        let out_path = path(&dir, &format!("out_{algo}.txt"));
        let out = run(&["oracle", "--graph", &gene, "--algo", algo, "--variant", "essential", "--out", &out_path]);
        assert!(out.status.success());
        // the gene graph's only edges are its v-structure, so its pattern
        // is the graph itself
        assert_eq!(fs::read_to_string(&out_path).unwrap(), GENE);
    }
}

#[test]
fn tree_validation_passes_and_fails() {
    let dir = TempDir::new().unwrap();
    let chain = write(&dir, "chain.txt", "# mvr-graph v1\nnodes: a b c\na -> b\nb -> c\n");
    let tree = path(&dir, "tree.txt");
    let out = run(&["tree", "--graph", &chain, "--out", &tree, "--validate-against", &chain]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "valid\n");
    assert!(fs::read_to_string(&tree).unwrap().starts_with("# septree v1"));

    // the chain's tree cannot cover the extra a -> c edge of the triangle
    let triangle = write(
        &dir,
        "triangle.txt",
        "# mvr-graph v1\nnodes: a b c\na -> b\nb -> c\na -> c\n",
    );
    let out = run(&["tree", "--graph", &chain, "--out", &tree, "--validate-against", &triangle]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("tree edge 0"), "stdout: {}", stdout(&out));
}

#[test]
fn tree_from_hypergraph_and_data() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "h.txt", "# hypergraph v1\nnodes: a b c d\nedge: a b c\nedge: c d\n");
    let out = run(&["tree", "--hypergraph", &h, "--out", &path(&dir, "t1.txt")]);
    assert!(out.status.success());

    let (g, d) = (path(&dir, "g.txt"), path(&dir, "d.csv"));
    run(&[
        "simulate", "--p", "6", "--N", "2", "--k", "0.3", "--n", "1000", "--seed", "3",
        "--out-graph", &g, "--out-data", &d,
    ]);
    let out = run(&[
        "tree", "--data", &d, "--type", "gaussian", "--alpha", "0.05",
        "--out", &path(&dir, "t2.txt"),
    ]);
    assert!(out.status.success());
}

#[test]
fn discrete_learning_runs() {
    let dir = TempDir::new().unwrap();
    // y copies x, z is an independent coin
    let mut rows = String::from("x,y,z\n# arities: 2 2 2\n");
    let mut state = 11u64;
    for _ in 0..400 {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let x = (state >> 33) & 1;
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let z = (state >> 33) & 1;
        rows.push_str(&format!("{x},{x},{z}\n"));
    }
    let data = write(&dir, "d.csv", &rows);
    let out_path = path(&dir, "g.txt");
    let out = run(&[
        "learn", "--data", &data, "--type", "discrete", "--alpha", "0.01", "--algo", "pc",
        "--variant", "essential", "--out", &out_path,
    ]);
    assert!(out.status.success());
    let g = format::read_graph(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert!(g.adjacent(0, 1), "the copied column must stay adjacent");
    assert_eq!(g.n_edges(), 1, "the coin is independent of both");
}

#[test]
fn benchmark_grid_shape_and_determinism() {
    let dir = TempDir::new().unwrap();
    let (c1, c4) = (path(&dir, "b1.csv"), path(&dir, "b4.csv"));
    let base = [
        "benchmark", "--p", "6", "--N", "2", "--n", "200", "--alpha", "0.05,0.01",
        "--reps", "2", "--seed", "5", "--algo", "both",
    ];
    let out = run(&[&base[..], &["--out", &c1]].concat());
    assert!(out.status.success());
    let text = fs::read_to_string(&c1).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "rep,p,N,k,n,alpha,algorithm,variant,tpr,fpr,acc,shd,runtime_ms");
    // 1 cell x 2 reps x 2 alphas x 2 algorithms
    assert_eq!(lines.len(), 9);
    assert!(lines[1].starts_with("0,6,2,0.3,200,0.05,decomp,essential,"));
    assert!(lines[2].starts_with("0,6,2,0.3,200,0.05,pc,essential,"));

    // any worker count leaves everything but the measured time unchanged
    let out = run(&[&base[..], &["--jobs", "3", "--out", &c4]].concat());
    assert!(out.status.success());
    let strip = |p: &str| -> Vec<String> {
        fs::read_to_string(p)
            .unwrap()
            .lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_string())
            .collect()
    };
    assert_eq!(strip(&c1), strip(&c4));
}

#[test]
fn benchmark_minbd_variant() {
    let dir = TempDir::new().unwrap();
    let out_path = path(&dir, "b.csv");
    let out = run(&[
        "benchmark", "--p", "6", "--N", "2", "--n", "500", "--alpha", "0.01", "--reps", "2",
        "--seed", "9", "--algo", "decomp", "--variant", "minbd", "--out", &out_path,
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&out_path).unwrap();
    assert_eq!(text.lines().count(), 3);
    for line in text.lines().skip(1) {
        assert!(line.contains(",decomp,minbd,"));
    }
}

/// The graph emitted by `simulate` agrees with what `msep` reports: a
/// learned-file consumer can answer queries exactly as the library does.
#[test]
fn msep_on_simulated_graph_matches_adjacency() {
    let dir = TempDir::new().unwrap();
    let (g, d) = (path(&dir, "g.txt"), path(&dir, "d.csv"));
    run(&[
        "simulate", "--p", "5", "--N", "2", "--k", "0.2", "--n", "10", "--seed", "1",
        "--out-graph", &g, "--out-data", &d,
    ]);
    let graph = format::read_graph(&fs::read_to_string(&g).unwrap()).unwrap();
    let names = graph.names().to_vec();
    for u in 0..graph.n_vertices() {
        for v in u + 1..graph.n_vertices() {
            if graph.adjacent(u, v) {
                // adjacent vertices are never separated
                let rest: Vec<String> = names
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != u && *i != v)
                    .map(|(_, n)| n.clone())
                    .collect();
                let out = run(&[
                    "msep", "--graph", &g, "--x", &names[u], "--y", &names[v],
                    "--z", &rest.join(","),
                ]);
                assert_eq!(stdout(&out), "false\n");
            }
        }
    }
}
