//! Text formats for graphs, hypergraphs, Bayesian networks, datasets,
//! and learner by-products. Each format is line-oriented and opens with
//! a version header (`# mvr-graph v1` and friends). Writers emit a
//! canonical form — same value, same bytes — while readers accept blank
//! lines, extra `#` comments, flexible whitespace, and reordered lines.

use std::fmt::Write as _;

use crate::ci::DiscreteData;
use crate::decomp::SepsetMap;
use crate::error::{Error, Result};
use crate::graph::{Mark, MixedGraph};
use crate::septree::{Hypergraph, SeparationTree};
use crate::simulate::BayesNet;

pub const GRAPH_HEADER: &str = "# mvr-graph v1";
pub const HYPERGRAPH_HEADER: &str = "# hypergraph v1";
pub const BN_HEADER: &str = "# bn v1";
pub const SEPSETS_HEADER: &str = "# sepsets v1";
pub const TREE_HEADER: &str = "# septree v1";

/// Strips the header and returns the remaining content lines with their
/// 1-based line numbers. Blank lines and `#` comments are dropped.
fn body_lines<'a>(text: &'a str, header: &str) -> Result<Vec<(usize, &'a str)>> {
    let mut lines = text.lines().enumerate();
    let header_ok = loop {
        match lines.next() {
            Some((_, l)) if l.trim().is_empty() => continue,
            Some((_, l)) => break l.trim() == header,
            None => break false,
        }
    };
    if !header_ok {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected the header line '{header}'"),
        });
    }
    Ok(lines
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect())
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn lookup(names: &[String], token: &str, line: usize) -> Result<usize> {
    names
        .iter()
        .position(|n| n == token)
        .ok_or_else(|| parse_err(line, format!("unknown variable '{token}'")))
}

/// One `nodes:` line listing every variable, then one line per edge
/// (`a -> b`, `a <-> b`, `a -- b`).
pub fn write_graph(g: &MixedGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{GRAPH_HEADER}");
    let _ = writeln!(out, "nodes: {}", g.names().join(" "));
    for (u, v, mu, mv) in g.edges() {
        let (a, b) = (g.name(u), g.name(v));
        let _ = match (mu, mv) {
            (Mark::Tail, Mark::Arrow) => writeln!(out, "{a} -> {b}"),
            (Mark::Arrow, Mark::Tail) => writeln!(out, "{b} -> {a}"),
            (Mark::Arrow, Mark::Arrow) => writeln!(out, "{a} <-> {b}"),
            (Mark::Tail, Mark::Tail) => writeln!(out, "{a} -- {b}"),
        };
    }
    out
}

pub fn read_graph(text: &str) -> Result<MixedGraph> {
    let mut g: Option<MixedGraph> = None;
    for (line, content) in body_lines(text, GRAPH_HEADER)? {
        if let Some(rest) = content.strip_prefix("nodes:") {
            if g.is_some() {
                return Err(parse_err(line, "repeated 'nodes:' line"));
            }
            let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            g = Some(MixedGraph::new(names)?);
            continue;
        }
        let g = g
            .as_mut()
            .ok_or_else(|| parse_err(line, "edge before the 'nodes:' line"))?;
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let [a, op, b] = tokens[..] else {
            return Err(parse_err(line, format!("expected 'a OP b', got '{content}'")));
        };
        let u = lookup(g.names(), a, line)?;
        let v = lookup(g.names(), b, line)?;
        let added = match op {
            "->" => g.add_directed(u, v),
            "<-" => g.add_directed(v, u),
            "<->" => g.add_bidirected(u, v),
            "--" => g.add_undirected(u, v),
            _ => return Err(parse_err(line, format!("unknown edge kind '{op}'"))),
        };
        added.map_err(|e| parse_err(line, e.to_string()))?;
    }
    g.ok_or_else(|| parse_err(1, "missing 'nodes:' line"))
}

/// One `nodes:` line, then one `edge:` line per hyperedge.
pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HYPERGRAPH_HEADER}");
    let _ = writeln!(out, "nodes: {}", h.names().join(" "));
    for e in h.edges() {
        let names: Vec<&str> = e.iter().map(|&v| h.names()[v].as_str()).collect();
        let _ = writeln!(out, "edge: {}", names.join(" "));
    }
    out
}

pub fn read_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut names: Option<Vec<String>> = None;
    let mut edges = Vec::new();
    for (line, content) in body_lines(text, HYPERGRAPH_HEADER)? {
        if let Some(rest) = content.strip_prefix("nodes:") {
            if names.is_some() {
                return Err(parse_err(line, "repeated 'nodes:' line"));
            }
            names = Some(rest.split_whitespace().map(str::to_string).collect());
        } else if let Some(rest) = content.strip_prefix("edge:") {
            let names = names
                .as_ref()
                .ok_or_else(|| parse_err(line, "edge before the 'nodes:' line"))?;
            let mut e = crate::graph::VertexSet::new();
            for token in rest.split_whitespace() {
                e.insert(lookup(names, token, line)?);
            }
            edges.push(e);
        } else {
            return Err(parse_err(line, format!("unrecognized line '{content}'")));
        }
    }
    Hypergraph::new(names.ok_or_else(|| parse_err(1, "missing 'nodes:' line"))?, edges)
}

/// `node <name> <arity>` lines for every variable, then per variable a
/// `parents <name>: ...` line (omitted when it has none) and one
/// `cpt <name>: ...` line per CPT row, in row order.
pub fn write_bayes_net(bn: &BayesNet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{BN_HEADER}");
    for (v, name) in bn.names().iter().enumerate() {
        let _ = writeln!(out, "node {name} {}", bn.arities()[v]);
    }
    for (v, name) in bn.names().iter().enumerate() {
        if !bn.parents(v).is_empty() {
            let ps: Vec<&str> = bn.parents(v).iter().map(|&u| bn.names()[u].as_str()).collect();
            let _ = writeln!(out, "parents {name}: {}", ps.join(" "));
        }
        for row in bn.cpt(v) {
            let qs: Vec<String> = row.iter().map(f64::to_string).collect();
            let _ = writeln!(out, "cpt {name}: {}", qs.join(" "));
        }
    }
    out
}

pub fn read_bayes_net(text: &str) -> Result<BayesNet> {
    let mut names: Vec<String> = Vec::new();
    let mut arities: Vec<u32> = Vec::new();
    let mut parents: Vec<Vec<usize>> = Vec::new();
    let mut cpts: Vec<Vec<Vec<f64>>> = Vec::new();
    for (line, content) in body_lines(text, BN_HEADER)? {
        if let Some(rest) = content.strip_prefix("node ") {
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            let [name, arity] = tokens[..] else {
                return Err(parse_err(line, "expected 'node <name> <arity>'"));
            };
            let arity: u32 = arity
                .parse()
                .map_err(|_| parse_err(line, format!("bad arity '{arity}'")))?;
            names.push(name.to_string());
            arities.push(arity);
            parents.push(Vec::new());
            cpts.push(Vec::new());
        } else if let Some(rest) = content.strip_prefix("parents ") {
            let (name, list) = rest
                .split_once(':')
                .ok_or_else(|| parse_err(line, "expected 'parents <name>: ...'"))?;
            let v = lookup(&names, name.trim(), line)?;
            if !parents[v].is_empty() {
                return Err(parse_err(line, format!("repeated parents for '{}'", name.trim())));
            }
            for token in list.split_whitespace() {
                parents[v].push(lookup(&names, token, line)?);
            }
        } else if let Some(rest) = content.strip_prefix("cpt ") {
            let (name, row) = rest
                .split_once(':')
                .ok_or_else(|| parse_err(line, "expected 'cpt <name>: ...'"))?;
            let v = lookup(&names, name.trim(), line)?;
            let mut values = Vec::new();
            for token in row.split_whitespace() {
                let q: f64 = token
                    .parse()
                    .map_err(|_| parse_err(line, format!("bad probability '{token}'")))?;
                values.push(q);
            }
            cpts[v].push(values);
        } else {
            return Err(parse_err(line, format!("unrecognized line '{content}'")));
        }
    }
    BayesNet::new(names, arities, parents, cpts)
}

/// Comma-separated values with a header row of variable names. Floats
/// are written in shortest round-trip form.
pub fn write_continuous_csv(names: &[String], rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", names.join(","));
    for row in rows {
        let vals: Vec<String> = row.iter().map(f64::to_string).collect();
        let _ = writeln!(out, "{}", vals.join(","));
    }
    out
}

fn csv_lines(text: &str) -> Result<(Vec<String>, Vec<(usize, &str)>, Option<Vec<u32>>)> {
    let mut header: Option<Vec<String>> = None;
    let mut arities = None;
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("# arities:") {
            let mut a = Vec::new();
            for token in rest.split_whitespace() {
                a.push(
                    token
                        .parse::<u32>()
                        .map_err(|_| parse_err(line, format!("bad arity '{token}'")))?,
                );
            }
            arities = Some(a);
            continue;
        }
        if content.starts_with('#') {
            continue;
        }
        match header {
            None => header = Some(content.split(',').map(|t| t.trim().to_string()).collect()),
            Some(_) => rows.push((line, content)),
        }
    }
    let header = header.ok_or_else(|| parse_err(1, "missing header row"))?;
    Ok((header, rows, arities))
}

pub fn read_continuous_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let (names, lines, _) = csv_lines(text)?;
    let mut rows = Vec::with_capacity(lines.len());
    for (line, content) in lines {
        let mut row = Vec::with_capacity(names.len());
        for token in content.split(',') {
            let token = token.trim();
            let x: f64 = token
                .parse()
                .map_err(|_| parse_err(line, format!("bad number '{token}'")))?;
            row.push(x);
        }
        if row.len() != names.len() {
            return Err(parse_err(
                line,
                format!("expected {} values, got {}", names.len(), row.len()),
            ));
        }
        rows.push(row);
    }
    Ok((names, rows))
}

/// Like the continuous form, plus a `# arities: ...` comment after the
/// header so state counts survive the trip.
pub fn write_discrete_csv(data: &DiscreteData) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", data.names().join(","));
    let arities: Vec<String> = data.arities().iter().map(u32::to_string).collect();
    let _ = writeln!(out, "# arities: {}", arities.join(" "));
    for row in data.rows() {
        let vals: Vec<String> = row.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "{}", vals.join(","));
    }
    out
}

pub fn read_discrete_csv(text: &str) -> Result<DiscreteData> {
    let (names, lines, arities) = csv_lines(text)?;
    let mut rows = Vec::with_capacity(lines.len());
    for (line, content) in lines {
        let mut row = Vec::with_capacity(names.len());
        for token in content.split(',') {
            let token = token.trim();
            let x: u32 = token
                .parse()
                .map_err(|_| parse_err(line, format!("bad state '{token}'")))?;
            row.push(x);
        }
        if row.len() != names.len() {
            return Err(parse_err(
                line,
                format!("expected {} values, got {}", names.len(), row.len()),
            ));
        }
        rows.push(row);
    }
    DiscreteData::from_rows(names, arities, rows)
}

/// One line per recorded pair: `u v : s1 s2 ...` (names, separator
/// possibly empty).
pub fn write_sepsets(names: &[String], sepsets: &SepsetMap) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{SEPSETS_HEADER}");
    for (&(u, v), s) in sepsets.iter() {
        let sep: Vec<&str> = s.iter().map(|&w| names[w].as_str()).collect();
        let _ = writeln!(out, "{} {} : {}", names[u], names[v], sep.join(" "));
    }
    out
}

/// `nodes:` line, `node <i>: ...` per tree node, `edge <i> <j>: ...`
/// per tree edge with the separator spelled out.
pub fn write_tree(tree: &SeparationTree) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{TREE_HEADER}");
    let _ = writeln!(out, "nodes: {}", tree.names().join(" "));
    for (i, node) in tree.nodes().iter().enumerate() {
        let names: Vec<&str> = node.iter().map(|&v| tree.names()[v].as_str()).collect();
        let _ = writeln!(out, "node {i}: {}", names.join(" "));
    }
    for (i, j, sep) in tree.edges() {
        let names: Vec<&str> = sep.iter().map(|&v| tree.names()[v].as_str()).collect();
        let _ = writeln!(out, "edge {i} {j}: {}", names.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexSet;
    use crate::septree;

    fn gene_graph() -> MixedGraph {
        let mut g = MixedGraph::with_names(&["G1", "G2", "D1", "D2"]).unwrap();
        g.add_directed(0, 2).unwrap();
        g.add_directed(1, 3).unwrap();
        g.add_bidirected(2, 3).unwrap();
        g
    }

    #[test]
    fn graph_writer_is_canonical() {
        assert_eq!(
            write_graph(&gene_graph()),
            "# mvr-graph v1\nnodes: G1 G2 D1 D2\nG1 -> D1\nG2 -> D2\nD1 <-> D2\n"
        );
    }

    #[test]
    fn graph_round_trips() {
        let g = gene_graph();
        assert_eq!(read_graph(&write_graph(&g)).unwrap(), g);
        let mut h = MixedGraph::with_names(&["a", "b", "c"]).unwrap();
        h.add_undirected(0, 1).unwrap();
        h.add_directed(2, 1).unwrap();
        assert_eq!(read_graph(&write_graph(&h)).unwrap(), h);
        let empty = MixedGraph::with_names(&["a"]).unwrap();
        assert_eq!(read_graph(&write_graph(&empty)).unwrap(), empty);
    }

    #[test]
    fn graph_reader_is_lenient() {
        let text = "\n# mvr-graph v1\n# a comment\n\nnodes:   a  b c\n\nb <- a\n  c <-> b  \n";
        let g = read_graph(text).unwrap();
        assert_eq!(g.names(), &["a", "b", "c"]);
        assert_eq!(g.marks(0, 1), Some((Mark::Tail, Mark::Arrow)));
        assert_eq!(g.marks(1, 2), Some((Mark::Arrow, Mark::Arrow)));
    }

    #[test]
    fn graph_reader_reports_line_numbers() {
        let missing = read_graph("nodes: a b\n");
        assert!(matches!(missing, Err(Error::Parse { line: 1, .. })));
        let before = read_graph("# mvr-graph v1\na -> b\nnodes: a b\n");
        assert!(matches!(before, Err(Error::Parse { line: 2, .. })));
        let unknown = read_graph("# mvr-graph v1\nnodes: a b\na -> z\n");
        assert!(matches!(unknown, Err(Error::Parse { line: 3, .. })));
        let dup = read_graph("# mvr-graph v1\nnodes: a b\na -> b\nb -> a\n");
        assert!(matches!(dup, Err(Error::Parse { line: 4, .. })));
        let op = read_graph("# mvr-graph v1\nnodes: a b\na => b\n");
        assert!(matches!(op, Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn hypergraph_round_trips() {
        let names: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let edges: Vec<VertexSet> = vec![
            [0, 1, 2].into_iter().collect(),
            [3].into_iter().collect(),
        ];
        let h = Hypergraph::new(names, edges).unwrap();
        let text = write_hypergraph(&h);
        assert_eq!(
            text,
            "# hypergraph v1\nnodes: a b c d\nedge: a b c\nedge: d\n"
        );
        assert_eq!(read_hypergraph(&text).unwrap(), h);
    }

    #[test]
    fn bayes_net_round_trips() {
        let bn = BayesNet::new(
            vec!["rain".into(), "wet".into()],
            vec![2, 2],
            vec![vec![], vec![0]],
            vec![
                vec![vec![0.7, 0.3]],
                vec![vec![0.95, 0.05], vec![0.1, 0.9]],
            ],
        )
        .unwrap();
        let text = write_bayes_net(&bn);
        assert_eq!(
            text,
            "# bn v1\nnode rain 2\nnode wet 2\ncpt rain: 0.7 0.3\nparents wet: rain\ncpt wet: 0.95 0.05\ncpt wet: 0.1 0.9\n"
        );
        assert_eq!(read_bayes_net(&text).unwrap(), bn);
    }

    #[test]
    fn bayes_net_reader_checks_structure() {
        let no_rows = "# bn v1\nnode a 2\n";
        assert!(matches!(read_bayes_net(no_rows), Err(Error::InvalidCpt(_, _))));
        let bad = "# bn v1\nnode a 2\ncpt a: 0.5 x\n";
        assert!(matches!(bad, _ if read_bayes_net(bad).is_err()));
        let unknown = "# bn v1\nnode a 2\nparents b: a\n";
        assert!(matches!(read_bayes_net(unknown), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn continuous_csv_round_trips_exactly() {
        let names: Vec<String> = vec!["a".into(), "b".into()];
        let rows = vec![vec![0.1, 1.0 / 3.0], vec![-2.5e-8, 42.0]];
        let text = write_continuous_csv(&names, &rows);
        let (back_names, back_rows) = read_continuous_csv(&text).unwrap();
        assert_eq!(back_names, names);
        assert_eq!(back_rows, rows); // bit-exact through shortest form
        assert!(read_continuous_csv("a,b\n1.0,x\n").is_err());
        assert!(read_continuous_csv("a,b\n1.0\n").is_err());
        assert!(read_continuous_csv("").is_err());
    }

    #[test]
    fn discrete_csv_round_trips_with_arities() {
        let data = DiscreteData::from_rows(
            vec!["a".into(), "b".into()],
            Some(vec![2, 3]),
            vec![vec![0, 2], vec![1, 0]],
        )
        .unwrap();
        let text = write_discrete_csv(&data);
        assert_eq!(text, "a,b\n# arities: 2 3\n0,2\n1,0\n");
        assert_eq!(read_discrete_csv(&text).unwrap(), data);
        // without the comment the arities are inferred
        let inferred = read_discrete_csv("a,b\n0,2\n1,0\n").unwrap();
        assert_eq!(inferred.arities(), &[2, 3]);
    }

    #[test]
    fn sepsets_and_trees_write_canonically() {
        let mut sepsets = SepsetMap::new();
        sepsets.insert_first(0, 1, VertexSet::new());
        sepsets.insert_first(3, 0, [2].into_iter().collect());
        let names: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        assert_eq!(
            write_sepsets(&names, &sepsets),
            "# sepsets v1\na b : \na d : c\n"
        );

        let mut g = MixedGraph::with_names(&["a", "b", "c"]).unwrap();
        g.add_directed(0, 1).unwrap();
        g.add_directed(1, 2).unwrap();
        let tree = septree::tree_from_graph(&g).unwrap();
        assert_eq!(
            write_tree(&tree),
            "# septree v1\nnodes: a b c\nnode 0: a b\nnode 1: b c\nedge 0 1: b\n"
        );
    }
}
