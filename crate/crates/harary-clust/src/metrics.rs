//! Clustering-quality measures for a signed graph under a label assignment.
//!
//! All metrics are computed against the original edge signs. Degenerate
//! denominators follow one convention throughout: an empty positive class
//! yields `pos_out = 0` (and `pos_in = 1` for display), an empty negative
//! class yields `neg_in = 0` (and `neg_out = 0` for display), so empty
//! classes never contribute penalty to a loss.

use crate::error::{Error, Result};
use crate::graph::SignedGraph;

/// The four raw edge classes of a labeled signed graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EdgeCounts {
    pub pos_between: u64,
    pub pos_within: u64,
    pub neg_within: u64,
    pub neg_between: u64,
}

impl EdgeCounts {
    pub fn new(pos_between: u64, pos_within: u64, neg_within: u64, neg_between: u64) -> Self {
        EdgeCounts { pos_between, pos_within, neg_within, neg_between }
    }

    pub fn total(&self) -> u64 {
        self.pos_between + self.pos_within + self.neg_within + self.neg_between
    }

    pub fn positive(&self) -> u64 {
        self.pos_between + self.pos_within
    }

    pub fn negative(&self) -> u64 {
        self.neg_within + self.neg_between
    }
}

/// Classifies every edge of `g` by sign and same/different label.
pub fn edge_counts(g: &SignedGraph, labels: &[u32]) -> Result<EdgeCounts> {
    if labels.len() != g.vertex_count() {
        let missing = labels.len().min(g.vertex_count()) as u32;
        return Err(Error::MissingLabel(missing));
    }
    let mut c = EdgeCounts::default();
    for e in g.edges() {
        let same = labels[e.u as usize] == labels[e.v as usize];
        match (e.sign.is_positive(), same) {
            (true, true) => c.pos_within += 1,
            (true, false) => c.pos_between += 1,
            (false, true) => c.neg_within += 1,
            (false, false) => c.neg_between += 1,
        }
    }
    Ok(c)
}

/// Fraction of edges that violate their placement: positive edges between
/// clusters and negative edges within them, over all edges.
pub fn unhappy_ratio(c: &EdgeCounts) -> Result<f64> {
    if c.total() == 0 {
        return Err(Error::ZeroEdges);
    }
    Ok((c.pos_between + c.neg_within) as f64 / c.total() as f64)
}

/// The four fractional measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fractions {
    pub pos_out: f64,
    pub neg_in: f64,
    pub pos_in: f64,
    pub neg_out: f64,
}

/// Fractional violation measures, robust to positive/negative imbalance.
pub fn fractions(c: &EdgeCounts) -> Fractions {
    let (pos_out, pos_in) = if c.positive() == 0 {
        (0.0, 1.0)
    } else {
        let p = c.positive() as f64;
        (c.pos_between as f64 / p, c.pos_within as f64 / p)
    };
    let (neg_in, neg_out) = if c.negative() == 0 {
        (0.0, 0.0)
    } else {
        let n = c.negative() as f64;
        (c.neg_within as f64 / n, c.neg_between as f64 / n)
    };
    Fractions { pos_out, neg_in, pos_in, neg_out }
}

/// `pos_out + neg_in`: the violating-edge score that treats both edge
/// classes as equally important.
pub fn unhappy_score(c: &EdgeCounts) -> f64 {
    let f = fractions(c);
    f.pos_out + f.neg_in
}

/// The configurable loss
/// `beta * (alpha * pos_out + (1 - alpha) * neg_in) + (1 - beta) * v_iso / v_total`.
///
/// `alpha` weighs positive against negative violations; `1 - beta` weighs
/// the fraction of isolated vertices a candidate cut would produce.
pub fn loss(c: &EdgeCounts, v_iso: u64, v_total: u64, alpha: f64, beta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} outside [0,1]")));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidArgument(format!("beta {beta} outside [0,1]")));
    }
    if v_total == 0 {
        return Err(Error::InvalidArgument("v_total must be at least 1".into()));
    }
    let f = fractions(c);
    Ok(beta * (alpha * f.pos_out + (1.0 - alpha) * f.neg_in)
        + (1.0 - beta) * (v_iso as f64 / v_total as f64))
}

/// Whole-graph quality of a clustering: `pos_out + neg_in` over all edges.
pub fn overall_loss(g: &SignedGraph, labels: &[u32]) -> Result<f64> {
    Ok(unhappy_score(&edge_counts(g, labels)?))
}

/// Everything the metrics module can say about one labeled graph.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub counts: EdgeCounts,
    pub unhappy_ratio: f64,
    pub unhappy_score: f64,
    pub pos_out: f64,
    pub neg_in: f64,
    pub pos_in: f64,
    pub neg_out: f64,
    /// Number of size-1 clusters under the assignment.
    pub v_iso: u64,
    pub v_total: u64,
    pub loss: f64,
    pub overall_loss: f64,
}

/// Computes the full record for `labels` on `g` at the given loss weights.
pub fn metrics_record(g: &SignedGraph, labels: &[u32], alpha: f64, beta: f64) -> Result<MetricsRecord> {
    let counts = edge_counts(g, labels)?;
    let f = fractions(&counts);
    let mut sizes: std::collections::HashMap<u32, u64> = std::collections::HashMap::new();
    for &l in labels {
        *sizes.entry(l).or_insert(0) += 1;
    }
    let v_iso = sizes.values().filter(|&&s| s == 1).count() as u64;
    let v_total = g.vertex_count() as u64;
    Ok(MetricsRecord {
        counts,
        unhappy_ratio: unhappy_ratio(&counts)?,
        unhappy_score: unhappy_score(&counts),
        pos_out: f.pos_out,
        neg_in: f.neg_in,
        pos_in: f.pos_in,
        neg_out: f.neg_out,
        v_iso,
        v_total,
        loss: loss(&counts, v_iso, v_total, alpha, beta)?,
        overall_loss: f.pos_out + f.neg_in,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{preprocess, EdgeList, RawEdge};
    use proptest::prelude::*;

    fn graph(edges: &[(u64, u64, f64)]) -> SignedGraph {
        let list = EdgeList {
            edges: edges
                .iter()
                .map(|&(src, dst, weight)| RawEdge { src, dst, weight })
                .collect(),
            names: None,
        };
        preprocess(&list).unwrap()
    }

    #[test]
    fn counts_classify_edges() {
        let g = graph(&[(0, 1, 1.0)]);
        assert_eq!(edge_counts(&g, &[0, 0]).unwrap(), EdgeCounts::new(0, 1, 0, 0));
        let g = graph(&[(0, 1, -1.0)]);
        assert_eq!(edge_counts(&g, &[0, 1]).unwrap(), EdgeCounts::new(0, 0, 0, 1));
        assert!(edge_counts(&g, &[0]).is_err());
    }

    #[test]
    fn ratio_matches_worked_examples() {
        assert_eq!(unhappy_ratio(&EdgeCounts::new(400, 500, 50, 50)).unwrap(), 0.45);
        assert_eq!(unhappy_ratio(&EdgeCounts::new(0, 900, 100, 0)).unwrap(), 0.1);
        assert_eq!(unhappy_ratio(&EdgeCounts::new(0, 77, 0, 0)).unwrap(), 0.0);
        assert!(unhappy_ratio(&EdgeCounts::default()).is_err());
    }

    #[test]
    fn score_penalizes_the_trivial_clustering() {
        // A 9:1 positive-to-negative imbalance: the ratio rewards the
        // single-cluster assignment (0.1) while the score exposes it (1.0).
        let trivial = EdgeCounts::new(0, 900, 100, 0);
        let f = fractions(&trivial);
        assert_eq!(f.pos_out, 0.0);
        assert_eq!(f.neg_in, 1.0);
        assert_eq!(unhappy_score(&trivial), 1.0);

        let split = EdgeCounts::new(400, 500, 50, 50);
        let expected = 400.0 / 900.0 + 50.0 / 100.0;
        assert!((unhappy_score(&split) - expected).abs() < 1e-15);
        assert!((unhappy_score(&split) - 0.944).abs() < 1e-3);
    }

    #[test]
    fn single_cluster_reports_full_pos_in_and_no_neg_out() {
        let mixed = EdgeCounts::new(0, 7, 2, 0);
        let f = fractions(&mixed);
        assert_eq!(f.pos_in, 1.0);
        assert_eq!(f.neg_out, 0.0);
    }

    #[test]
    fn perfect_clustering_scores_zero() {
        let perfect = EdgeCounts::new(0, 10, 0, 5);
        assert_eq!(unhappy_score(&perfect), 0.0);
    }

    #[test]
    fn equal_ratios_can_hide_very_different_scores() {
        // Nine edges, seven positive and two negative. Lumping everything
        // into one cluster and the clean bipartition tie on the raw ratio
        // (2/9 each) but differ sharply on the fractional measures.
        let g = graph(&[
            (1, 4, 1.0),
            (4, 8, 1.0),
            (6, 8, 1.0),
            (2, 3, 1.0),
            (5, 7, 1.0),
            (1, 2, 1.0),
            (4, 5, 1.0),
            (3, 6, -1.0),
            (7, 8, -1.0),
        ]);
        // Dense ids follow ascending original id: 1,2,3,4,5,6,7,8 -> 0..8.
        let lump = vec![0; 8];
        let split = vec![0, 1, 1, 0, 1, 0, 1, 0];

        let c_lump = edge_counts(&g, &lump).unwrap();
        let c_split = edge_counts(&g, &split).unwrap();
        assert!((unhappy_ratio(&c_lump).unwrap() - 2.0 / 9.0).abs() < 1e-15);
        assert!((unhappy_ratio(&c_split).unwrap() - 2.0 / 9.0).abs() < 1e-15);

        let f_lump = fractions(&c_lump);
        assert_eq!(f_lump.pos_in + f_lump.neg_out, 1.0);
        let f_split = fractions(&c_split);
        assert!((f_split.pos_in + f_split.neg_out - 12.0 / 7.0).abs() < 1e-15);
        assert_eq!(format!("{:.2}", f_split.pos_in + f_split.neg_out), "1.71");
    }

    #[test]
    fn loss_matches_hand_evaluations() {
        // Triangle (+,+,-) cut into {v0,v1} | {v2}.
        let c = EdgeCounts::new(1, 1, 0, 1);
        assert_eq!(loss(&c, 1, 3, 0.5, 1.0).unwrap(), 0.25);
        // beta = 0 ignores the edge terms entirely.
        assert_eq!(loss(&c, 0, 3, 0.5, 0.0).unwrap(), 0.0);
        assert_eq!(loss(&c, 2, 4, 0.5, 0.0).unwrap(), 0.5);
        assert!(loss(&c, 0, 0, 0.5, 1.0).is_err());
        assert!(loss(&c, 0, 3, 1.5, 1.0).is_err());
        assert!(loss(&c, 0, 3, 0.5, -0.1).is_err());
    }

    #[test]
    fn overall_loss_on_single_label_is_one_when_negatives_exist() {
        let g = graph(&[(0, 1, 1.0), (1, 2, -1.0)]);
        assert_eq!(overall_loss(&g, &[0, 0, 0]).unwrap(), 1.0);
    }

    #[test]
    fn record_gathers_consistent_fields() {
        let g = graph(&[(0, 1, 1.0), (1, 2, -1.0), (0, 3, 1.0)]);
        let rec = metrics_record(&g, &[0, 0, 1, 0], 0.5, 1.0).unwrap();
        assert_eq!(rec.counts, EdgeCounts::new(0, 2, 0, 1));
        assert_eq!(rec.v_iso, 1);
        assert_eq!(rec.v_total, 4);
        assert_eq!(rec.overall_loss, 0.0);
        assert_eq!(rec.unhappy_score, rec.pos_out + rec.neg_in);
    }

    fn arbitrary_counts() -> impl Strategy<Value = EdgeCounts> {
        (0u64..300, 0u64..300, 0u64..300, 0u64..300)
            .prop_map(|(a, b, c, d)| EdgeCounts::new(a, b, c, d))
    }

    proptest! {
        #[test]
        fn score_is_twice_the_balanced_loss(c in arbitrary_counts()) {
            let l = loss(&c, 0, 1, 0.5, 1.0).unwrap();
            prop_assert!((unhappy_score(&c) - 2.0 * l).abs() < 1e-12);
        }

        #[test]
        fn metric_bounds_hold(c in arbitrary_counts(), v_iso in 0u64..10, alpha in 0.0f64..=1.0, beta in 0.0f64..=1.0) {
            if c.total() > 0 {
                let u = unhappy_ratio(&c).unwrap();
                prop_assert!((0.0..=1.0).contains(&u));
            }
            let us = unhappy_score(&c);
            prop_assert!((0.0..=2.0).contains(&us));
            let l = loss(&c, v_iso, 10, alpha, beta).unwrap();
            prop_assert!((0.0..=1.0).contains(&l));
        }

        #[test]
        fn relabeling_leaves_metrics_unchanged(seed in any::<u64>()) {
            use rand::prelude::*;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = 12u64;
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v, if rng.gen_bool(0.5) { 1.0 } else { -1.0 }));
                    }
                }
            }
            prop_assume!(!edges.is_empty());
            let g = graph(&edges);
            let labels: Vec<u32> =
                (0..g.vertex_count()).map(|_| rng.gen_range(0..4)).collect();
            // Injective relabeling: 4 labels spread far apart.
            let relabeled: Vec<u32> = labels.iter().map(|&l| l * 1000 + 17).collect();
            let a = metrics_record(&g, &labels, 0.5, 1.0).unwrap();
            let b = metrics_record(&g, &relabeled, 0.5, 1.0).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
