//! Structural comparison of learned graphs against ground truth:
//! skeleton recovery rates, structural Hamming distance over endpoint
//! marks, and the reference pattern a perfect learner would return.

use crate::ci::OracleTester;
use crate::decomp::{self, TreeSource, Variant};
use crate::error::{Error, Result};
use crate::graph::MixedGraph;

/// Skeleton recovery rates over unordered vertex pairs. When a rate's
/// denominator is empty (no true edges, or no true non-edges), the rate
/// takes its best-case value and `degenerate` is set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkeletonMetrics {
    /// True positive rate: recovered edges / true edges (1 when there
    /// are no true edges).
    pub tpr: f64,
    /// False positive rate: spurious edges / true non-edges (0 when
    /// every pair is a true edge).
    pub fpr: f64,
    /// Correctly classified pairs / all pairs.
    pub acc: f64,
    /// Number of true edges.
    pub pos: usize,
    /// Number of true non-edges.
    pub neg: usize,
    /// Set when `pos` or `neg` is zero and a rate was pinned.
    pub degenerate: bool,
}

fn check_same_variables(a: &MixedGraph, b: &MixedGraph) -> Result<()> {
    if a.names() != b.names() {
        return Err(Error::VertexMismatch(
            "graphs are over different variables".into(),
        ));
    }
    Ok(())
}

/// Compares adjacency only, ignoring marks.
pub fn skeleton_metrics(learned: &MixedGraph, truth: &MixedGraph) -> Result<SkeletonMetrics> {
    check_same_variables(learned, truth)?;
    let p = truth.n_vertices();
    let (mut tp, mut fp, mut pos, mut neg) = (0usize, 0usize, 0usize, 0usize);
    for u in 0..p {
        for v in u + 1..p {
            if truth.adjacent(u, v) {
                pos += 1;
                if learned.adjacent(u, v) {
                    tp += 1;
                }
            } else {
                neg += 1;
                if learned.adjacent(u, v) {
                    fp += 1;
                }
            }
        }
    }
    let degenerate = pos == 0 || neg == 0;
    let tpr = if pos == 0 { 1.0 } else { tp as f64 / pos as f64 };
    let fpr = if neg == 0 { 0.0 } else { fp as f64 / neg as f64 };
    let correct = tp + (neg - fp);
    let acc = if pos + neg == 0 {
        1.0
    } else {
        correct as f64 / (pos + neg) as f64
    };
    Ok(SkeletonMetrics { tpr, fpr, acc, pos, neg, degenerate })
}

/// Structural Hamming distance: the number of unordered pairs whose edge
/// differs between the graphs, counting a missing/extra edge and a mark
/// mismatch as one unit each.
pub fn shd(a: &MixedGraph, b: &MixedGraph) -> Result<usize> {
    check_same_variables(a, b)?;
    let p = a.n_vertices();
    let mut d = 0;
    for u in 0..p {
        for v in u + 1..p {
            if a.marks(u, v) != b.marks(u, v) {
                d += 1;
            }
        }
    }
    Ok(d)
}

/// The pattern of an MVR chain graph: what the decomposition learner
/// returns when every independence test is answered exactly.
pub fn true_pattern(g: &MixedGraph) -> Result<MixedGraph> {
    let tester = OracleTester::new(g.clone())?;
    Ok(decomp::learn(&tester, 0.5, TreeSource::Tests, Variant::Essential)?.graph)
}

/// Skeleton rates and mark-level distance in one bundle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricsReport {
    pub skeleton: SkeletonMetrics,
    pub shd: usize,
}

pub fn compare(learned: &MixedGraph, truth: &MixedGraph) -> Result<MetricsReport> {
    Ok(MetricsReport {
        skeleton: skeleton_metrics(learned, truth)?,
        shd: shd(learned, truth)?,
    })
}
