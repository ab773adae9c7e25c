//! The hierarchical clustering loop.
//!
//! Starting from one label per connected component, the loop repeatedly
//! picks the largest unprocessed component above the size floor, finds its
//! best Harary cut, and tentatively relabels the resulting sub-components.
//! The split is kept only when the whole-graph quality (`pos_out + neg_in`)
//! improves by more than `epsilon`; otherwise the relabeling is undone
//! bit-exactly and the component's label is frozen in the `processed` set.
//! The loop ends when no label is eligible or the time limit is hit.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use crate::balance::{best_harary_cut, BestCutParams, TreeMethod};
use crate::error::{Error, Result};
use crate::graph::{connected_components, induced_subgraph, SignedGraph, VertexId};
use crate::metrics::{self, MetricsRecord};

/// Run parameters and their defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    /// Tree samples per best-cut search.
    pub iterations: u64,
    /// Weight of positive versus negative violations in the cut loss.
    pub alpha: f64,
    /// Weight of the edge terms versus the isolated-vertex penalty.
    pub beta: f64,
    /// Minimum whole-graph improvement a split must deliver to be kept.
    pub epsilon: f64,
    /// Components of size at most `gamma` are never split.
    pub gamma: u64,
    /// Wall-clock budget in seconds; -1 means unlimited.
    pub time_limit_s: i64,
    /// Master seed; every candidate search derives its stream from it.
    pub seed: u64,
    pub tree_method: TreeMethod,
    /// Greedy per-state refinement inside the cut search. Off by default.
    pub refine: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            iterations: 1000,
            alpha: 0.5,
            beta: 1.0,
            epsilon: 1e-8,
            gamma: 2,
            time_limit_s: -1,
            seed: 42,
            tree_method: TreeMethod::RandomBfs,
            refine: false,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if self.iterations < 1 {
            return Err(Error::InvalidArgument("iterations must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidArgument(format!("alpha {} outside [0,1]", self.alpha)));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::InvalidArgument(format!("beta {} outside [0,1]", self.beta)));
        }
        if self.epsilon.is_nan() || self.epsilon < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "epsilon {} must be non-negative",
                self.epsilon
            )));
        }
        if self.time_limit_s < -1 {
            return Err(Error::InvalidArgument(
                "time limit must be -1 (unlimited) or non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Vertex labels plus the bookkeeping the loop needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterAssignment {
    pub label_of: Vec<u32>,
    /// Next fresh label.
    pub label_counter: u32,
    /// Labels frozen against further splitting.
    pub processed: HashSet<u32>,
}

impl ClusterAssignment {
    /// Vertex count per live label, ordered by label id.
    pub fn label_sizes(&self) -> BTreeMap<u32, u64> {
        let mut sizes = BTreeMap::new();
        for &l in &self.label_of {
            *sizes.entry(l).or_insert(0u64) += 1;
        }
        sizes
    }

    pub fn cluster_count(&self) -> usize {
        self.label_sizes().len()
    }
}

/// One label per connected component; isolated vertices are size-1
/// components and therefore get their own labels.
pub fn initial_labels(g: &SignedGraph) -> ClusterAssignment {
    let comps = connected_components(g, |_, _, _| true);
    ClusterAssignment {
        label_of: comps.component_of.clone(),
        label_counter: comps.len() as u32,
        processed: HashSet::new(),
    }
}

/// The largest unprocessed label with more than `gamma` vertices, ties going
/// to the smaller label id. `None` means the loop is done.
pub fn select_component(assignment: &ClusterAssignment, gamma: u64) -> Option<u32> {
    let mut best: Option<(u64, u32)> = None;
    for (&label, &size) in assignment.label_sizes().iter() {
        if size <= gamma || assignment.processed.contains(&label) {
            continue;
        }
        // Strict comparison keeps the smallest label on ties.
        let take = match best {
            None => true,
            Some((best_size, _)) => size > best_size,
        };
        if take {
            best = Some((size, label));
        }
    }
    best.map(|(_, label)| label)
}

/// One committed split, as recorded in the trace.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitRecord {
    pub split_index: usize,
    pub component_label: u32,
    pub component_size: usize,
    /// Frustration of the chosen balanced state.
    pub frustration: u64,
    /// Whole-graph fractions after the commit.
    pub pos_in: f64,
    pub neg_out: f64,
    pub overall_loss: f64,
    pub cluster_count: usize,
    pub elapsed_s: f64,
    /// Size-1 components the chosen cut produced (not a trace CSV column).
    pub cut_isolated: u64,
}

/// Final clustering, trace and summary numbers.
#[derive(Debug, Clone)]
pub struct ClusterResult {
    pub assignment: ClusterAssignment,
    pub trace: Vec<SplitRecord>,
    pub final_metrics: MetricsRecord,
    pub clusters_ge5: usize,
    pub clusters_lt5: usize,
    pub split_count: usize,
    pub elapsed_s: f64,
}

impl ClusterResult {
    /// `(original id, cluster)` rows in vertex order.
    pub fn labeled_vertices<'a>(
        &'a self,
        g: &'a SignedGraph,
    ) -> impl Iterator<Item = (&'a str, u32)> + 'a {
        self.assignment
            .label_of
            .iter()
            .enumerate()
            .map(|(v, &l)| (g.original_id(v as VertexId), l))
    }
}

/// Per-component search seed, derived from the master seed and the component
/// membership. A component therefore always gets the same cut search no
/// matter when it is visited or what `gamma` filtered out around it.
fn derive_seed(seed: u64, members: &[VertexId]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &v in members {
        hash ^= u64::from(v);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = seed ^ hash;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs the full hierarchical loop. Deterministic for a given
/// `(graph, config)` regardless of thread count.
pub fn run(g: &SignedGraph, config: &Config) -> Result<ClusterResult> {
    config.validate()?;
    let started = Instant::now();

    let mut assignment = initial_labels(g);
    let mut overall = metrics::overall_loss(g, &assignment.label_of)?;
    let mut trace: Vec<SplitRecord> = Vec::new();

    loop {
        if config.time_limit_s >= 0
            && started.elapsed().as_secs_f64() >= config.time_limit_s as f64
        {
            break;
        }
        let Some(label) = select_component(&assignment, config.gamma) else {
            break;
        };
        let members: Vec<VertexId> = (0..g.vertex_count() as VertexId)
            .filter(|&v| assignment.label_of[v as usize] == label)
            .collect();

        // The subgraph carries the original signs; balanced re-signings
        // never leak into the stored graph.
        let sub = induced_subgraph(g, &members)?;
        let params = BestCutParams {
            iterations: config.iterations,
            alpha: config.alpha,
            beta: config.beta,
            method: config.tree_method,
            seed: derive_seed(config.seed, &members),
            refine: config.refine,
        };
        let cut = best_harary_cut(&sub.graph, &params)?;

        // Tentative relabel of the cut's sub-components with fresh labels.
        let saved_counter = assignment.label_counter;
        for comp in &cut.components.components {
            let fresh = assignment.label_counter;
            assignment.label_counter += 1;
            for &sv in comp {
                let parent = sub.to_parent[sv as usize];
                assignment.label_of[parent as usize] = fresh;
            }
        }
        let next_overall = metrics::overall_loss(g, &assignment.label_of)?;

        if overall - next_overall <= config.epsilon {
            // Undo: every member had `label` before the attempt.
            for &v in &members {
                assignment.label_of[v as usize] = label;
            }
            assignment.label_counter = saved_counter;
            assignment.processed.insert(label);
        } else {
            let counts = metrics::edge_counts(g, &assignment.label_of)?;
            let fractions = metrics::fractions(&counts);
            trace.push(SplitRecord {
                split_index: trace.len(),
                component_label: label,
                component_size: members.len(),
                frustration: cut.state.frustration,
                pos_in: fractions.pos_in,
                neg_out: fractions.neg_out,
                overall_loss: next_overall,
                cluster_count: assignment.cluster_count(),
                elapsed_s: started.elapsed().as_secs_f64(),
                cut_isolated: cut.components.isolated_count() as u64,
            });
            overall = next_overall;
        }
    }

    let assignment = densify_by_size(assignment);
    let final_metrics = metrics::metrics_record(g, &assignment.label_of, config.alpha, config.beta)?;
    let sizes = assignment.label_sizes();
    let clusters_ge5 = sizes.values().filter(|&&s| s >= 5).count();
    let clusters_lt5 = sizes.values().filter(|&&s| s < 5).count();
    Ok(ClusterResult {
        split_count: trace.len(),
        trace,
        final_metrics,
        clusters_ge5,
        clusters_lt5,
        elapsed_s: started.elapsed().as_secs_f64(),
        assignment,
    })
}

/// Renames labels to `0..C` ordered by descending cluster size (ties by
/// ascending old label), keeping `processed` in step.
fn densify_by_size(assignment: ClusterAssignment) -> ClusterAssignment {
    let sizes = assignment.label_sizes();
    let mut order: Vec<(u32, u64)> = sizes.iter().map(|(&l, &s)| (l, s)).collect();
    order.sort_by_key(|&(label, size)| (std::cmp::Reverse(size), label));
    let rename: BTreeMap<u32, u32> = order
        .iter()
        .enumerate()
        .map(|(new, &(old, _))| (old, new as u32))
        .collect();
    ClusterAssignment {
        label_of: assignment.label_of.iter().map(|l| rename[l]).collect(),
        label_counter: rename.len() as u32,
        processed: assignment
            .processed
            .iter()
            .filter_map(|l| rename.get(l).copied())
            .collect(),
    }
}
