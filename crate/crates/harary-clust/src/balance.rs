//! Nearest-balanced-state discovery by spanning-tree sampling, switching
//! functions, frustration counting and Harary cuts.
//!
//! The mechanism: sample a random spanning tree of a connected component,
//! propagate a per-vertex sign potential down the tree so that every tree
//! edge is satisfied, and count the non-tree edges whose sign disagrees with
//! the potential. Re-signing every edge to the product of its endpoint
//! potentials yields a balanced graph whose negative edges form the Harary
//! cut; deleting them splits the component. Repeating with many independent
//! trees and keeping the minimum-loss cut approximates the best cut without
//! any spectral machinery.
//!
//! Every iteration derives its randomness from `(seed, iteration index)`, so
//! a run is reproducible regardless of how the iterations are scheduled
//! across threads.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{connected_components, ComponentSet, Sign, SignedGraph, VertexId};
use crate::metrics;

/// How spanning trees are sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeMethod {
    /// BFS from a random root with per-vertex neighbor shuffling.
    RandomBfs,
    /// Minimum spanning tree under i.i.d. random edge weights.
    RandomKruskal,
}

impl std::str::FromStr for TreeMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "random-bfs" => Ok(TreeMethod::RandomBfs),
            "random-kruskal" => Ok(TreeMethod::RandomKruskal),
            other => Err(format!(
                "unknown tree method '{other}' (expected random-bfs or random-kruskal)"
            )),
        }
    }
}

impl std::fmt::Display for TreeMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TreeMethod::RandomBfs => write!(f, "random-bfs"),
            TreeMethod::RandomKruskal => write!(f, "random-kruskal"),
        }
    }
}

/// A rooted spanning tree. `parent[root] == root`; `order` lists vertices
/// with every parent before its children.
#[derive(Debug, Clone)]
pub struct SpanningTree {
    pub root: VertexId,
    pub parent: Vec<VertexId>,
    pub parent_sign: Vec<Sign>,
    pub order: Vec<VertexId>,
}

impl SpanningTree {
    /// Tree edges as (child, parent, sign).
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, Sign)> + '_ {
        self.order.iter().filter_map(move |&v| {
            let p = self.parent[v as usize];
            (p != v).then_some((v, p, self.parent_sign[v as usize]))
        })
    }
}

/// Samples a spanning tree of a connected graph.
pub fn sample_spanning_tree(
    g: &SignedGraph,
    method: TreeMethod,
    rng: &mut impl Rng,
) -> Result<SpanningTree> {
    match method {
        TreeMethod::RandomBfs => sample_bfs_tree(g, rng),
        TreeMethod::RandomKruskal => sample_kruskal_tree(g, rng),
    }
}

fn sample_bfs_tree(g: &SignedGraph, rng: &mut impl Rng) -> Result<SpanningTree> {
    let n = g.vertex_count();
    let root = rng.gen_range(0..n) as VertexId;
    let mut parent = vec![u32::MAX; n];
    let mut parent_sign = vec![Sign::Positive; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = std::collections::VecDeque::new();

    parent[root as usize] = root;
    order.push(root);
    queue.push_back(root);
    let mut fresh: Vec<(VertexId, Sign)> = Vec::new();
    while let Some(u) = queue.pop_front() {
        fresh.clear();
        fresh.extend(
            g.neighbors(u)
                .iter()
                .copied()
                .filter(|&(v, _)| parent[v as usize] == u32::MAX),
        );
        fresh.shuffle(rng);
        for &(v, sign) in &fresh {
            parent[v as usize] = u;
            parent_sign[v as usize] = sign;
            order.push(v);
            queue.push_back(v);
        }
    }
    if order.len() != n {
        return Err(Error::Disconnected);
    }
    Ok(SpanningTree { root, parent, parent_sign, order })
}

struct Dsu {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu { parent: (0..n as u32).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra as usize].cmp(&self.rank[rb as usize]) {
            std::cmp::Ordering::Less => self.parent[ra as usize] = rb,
            std::cmp::Ordering::Greater => self.parent[rb as usize] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb as usize] = ra;
                self.rank[ra as usize] += 1;
            }
        }
        true
    }
}

fn sample_kruskal_tree(g: &SignedGraph, rng: &mut impl Rng) -> Result<SpanningTree> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut order: Vec<usize> = (0..m).collect();
    let weights: Vec<f64> = (0..m).map(|_| rng.gen::<f64>()).collect();
    order.sort_by(|&a, &b| weights[a].partial_cmp(&weights[b]).unwrap());

    let mut dsu = Dsu::new(n);
    let mut tree_adj: Vec<Vec<(VertexId, Sign)>> = vec![Vec::new(); n];
    let mut picked = 0usize;
    for idx in order {
        let e = g.edges()[idx];
        if dsu.union(e.u, e.v) {
            tree_adj[e.u as usize].push((e.v, e.sign));
            tree_adj[e.v as usize].push((e.u, e.sign));
            picked += 1;
            if picked + 1 == n {
                break;
            }
        }
    }
    if n > 0 && picked + 1 != n {
        return Err(Error::Disconnected);
    }

    // Orient the tree from a random root.
    let root = rng.gen_range(0..n) as VertexId;
    let mut parent = vec![u32::MAX; n];
    let mut parent_sign = vec![Sign::Positive; n];
    let mut bfs_order = Vec::with_capacity(n);
    let mut queue = std::collections::VecDeque::new();
    parent[root as usize] = root;
    bfs_order.push(root);
    queue.push_back(root);
    while let Some(u) = queue.pop_front() {
        for &(v, sign) in &tree_adj[u as usize] {
            if parent[v as usize] == u32::MAX {
                parent[v as usize] = u;
                parent_sign[v as usize] = sign;
                bfs_order.push(v);
                queue.push_back(v);
            }
        }
    }
    Ok(SpanningTree { root, parent, parent_sign, order: bfs_order })
}

/// A per-vertex sign potential. Re-signing every edge to
/// `sigma(u) * sigma(v)` produces a balanced graph; the vertices with
/// `sigma = +1` and `sigma = -1` form its Harary bipartition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchingFunction {
    sigma: Vec<Sign>,
}

impl SwitchingFunction {
    pub fn from_signs(sigma: Vec<Sign>) -> SwitchingFunction {
        SwitchingFunction { sigma }
    }

    pub fn all_positive(n: usize) -> SwitchingFunction {
        SwitchingFunction { sigma: vec![Sign::Positive; n] }
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn get(&self, v: VertexId) -> Sign {
        self.sigma[v as usize]
    }

    pub fn flip(&mut self, v: VertexId) {
        self.sigma[v as usize] = self.sigma[v as usize].flipped();
    }

    /// Sign the balanced state assigns to edge (u, v).
    pub fn product(&self, u: VertexId, v: VertexId) -> Sign {
        self.get(u) * self.get(v)
    }

    /// `(U, W)`: vertices with positive and negative potential.
    pub fn bipartition(&self) -> (Vec<VertexId>, Vec<VertexId>) {
        let mut u = Vec::new();
        let mut w = Vec::new();
        for (v, s) in self.sigma.iter().enumerate() {
            match s {
                Sign::Positive => u.push(v as VertexId),
                Sign::Negative => w.push(v as VertexId),
            }
        }
        (u, w)
    }
}

/// A switching function together with the number of edges it frustrates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedState {
    pub sigma: SwitchingFunction,
    pub frustration: u64,
}

/// Propagates the potential down a spanning tree: the root is positive and
/// each child takes its parent's potential times the tree-edge sign, so
/// every tree edge is satisfied.
pub fn switching_from_tree(g: &SignedGraph, tree: &SpanningTree) -> SwitchingFunction {
    let mut sigma = vec![Sign::Positive; g.vertex_count()];
    for &v in &tree.order {
        let p = tree.parent[v as usize];
        if p != v {
            sigma[v as usize] = sigma[p as usize] * tree.parent_sign[v as usize];
        }
    }
    SwitchingFunction::from_signs(sigma)
}

/// Counts the edges whose sign disagrees with `sigma(u) * sigma(v)`.
pub fn balanced_state(g: &SignedGraph, sigma: SwitchingFunction) -> BalancedState {
    let frustration = g
        .edges()
        .iter()
        .filter(|e| e.sign != sigma.product(e.u, e.v))
        .count() as u64;
    BalancedState { sigma, frustration }
}

/// BFS sign propagation per component. Returns a witnessing potential with
/// zero frustration if the graph is balanced, `None` otherwise.
pub fn is_balanced(g: &SignedGraph) -> Option<SwitchingFunction> {
    let n = g.vertex_count();
    let mut sigma: Vec<Option<Sign>> = vec![None; n];
    let mut queue = std::collections::VecDeque::new();
    for start in 0..n as VertexId {
        if sigma[start as usize].is_some() {
            continue;
        }
        sigma[start as usize] = Some(Sign::Positive);
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            let su = sigma[u as usize].unwrap();
            for &(v, sign) in g.neighbors(u) {
                let want = su * sign;
                match sigma[v as usize] {
                    None => {
                        sigma[v as usize] = Some(want);
                        queue.push_back(v);
                    }
                    Some(have) if have != want => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(SwitchingFunction::from_signs(
        sigma.into_iter().map(Option::unwrap).collect(),
    ))
}

/// Cap for exhaustive frustration enumeration.
pub const EXHAUSTIVE_VERTEX_CAP: usize = 24;

/// Exact frustration index by enumerating all `2^(n-1)` potentials with
/// vertex 0 pinned positive. Test-scale oracle; rejects `n` above
/// [`EXHAUSTIVE_VERTEX_CAP`].
pub fn frustration_exhaustive(g: &SignedGraph) -> Result<(u64, SwitchingFunction)> {
    let n = g.vertex_count();
    if n > EXHAUSTIVE_VERTEX_CAP {
        return Err(Error::SizeCap {
            op: "frustration_exhaustive",
            n,
            cap: EXHAUSTIVE_VERTEX_CAP,
        });
    }
    let edges: Vec<(u32, u32, u32)> = g
        .edges()
        .iter()
        .map(|e| (e.u, e.v, if e.sign.is_positive() { 0 } else { 1 }))
        .collect();
    let mut best_mask = 0u32;
    let mut best = u64::MAX;
    let span = if n == 0 { 0 } else { 1u64 << (n - 1) };
    for half in 0..span.max(1) {
        let mask = (half as u32) << 1;
        let mut frustrated = 0u64;
        for &(u, v, neg) in &edges {
            if ((mask >> u) ^ (mask >> v)) & 1 != neg {
                frustrated += 1;
            }
        }
        if frustrated < best {
            best = frustrated;
            best_mask = mask;
        }
    }
    let sigma = (0..n)
        .map(|v| if (best_mask >> v) & 1 == 0 { Sign::Positive } else { Sign::Negative })
        .collect();
    Ok((best.min(g.edge_count() as u64), SwitchingFunction::from_signs(sigma)))
}

/// A candidate split of one component: the balanced state behind it, the
/// connected components left after deleting the state's negative edges, and
/// (when scored) the loss of the induced labeling.
#[derive(Debug, Clone)]
pub struct HararyCutResult {
    pub state: BalancedState,
    pub components: ComponentSet,
    pub loss: Option<f64>,
    pub iteration_index: Option<u64>,
}

/// Deletes the negative edges of the balanced state: keeps exactly the edges
/// with `sigma(u) * sigma(v) = +1` and returns the resulting components.
/// A single cut may yield more than two components.
pub fn harary_cut(g: &SignedGraph, state: BalancedState) -> HararyCutResult {
    let components =
        connected_components(g, |u, v, _| state.sigma.product(u, v).is_positive());
    HararyCutResult { state, components, loss: None, iteration_index: None }
}

/// Parameters for [`best_harary_cut`].
#[derive(Debug, Clone, Copy)]
pub struct BestCutParams {
    pub iterations: u64,
    pub alpha: f64,
    pub beta: f64,
    pub method: TreeMethod,
    pub seed: u64,
    /// Greedy per-vertex refinement of each sampled state. Off by default.
    pub refine: bool,
}

impl Default for BestCutParams {
    fn default() -> Self {
        BestCutParams {
            iterations: 1000,
            alpha: 0.5,
            beta: 1.0,
            method: TreeMethod::RandomBfs,
            seed: 42,
            refine: false,
        }
    }
}

/// Greedy local improvement of a potential: repeatedly flips the vertex
/// whose flip removes the most frustration until no flip helps.
pub fn refine_switching(g: &SignedGraph, sigma: SwitchingFunction) -> SwitchingFunction {
    let n = g.vertex_count();
    let mut sigma = sigma;
    // gain[v] = frustrated incident edges minus satisfied incident edges.
    let mut gain: Vec<i64> = vec![0; n];
    for v in 0..n as VertexId {
        for &(w, sign) in g.neighbors(v) {
            if sigma.product(v, w) == sign {
                gain[v as usize] -= 1;
            } else {
                gain[v as usize] += 1;
            }
        }
    }
    while let Some((v, &g_best)) = gain
        .iter()
        .enumerate()
        .max_by_key(|&(v, &g)| (g, std::cmp::Reverse(v)))
    {
        if g_best <= 0 {
            break;
        }
        let v = v as VertexId;
        sigma.flip(v);
        gain[v as usize] = -g_best;
        for &(w, sign) in g.neighbors(v) {
            if sigma.product(v, w) == sign {
                gain[w as usize] -= 2;
            } else {
                gain[w as usize] += 2;
            }
        }
    }
    sigma
}

fn cut_candidate(
    g: &SignedGraph,
    params: &BestCutParams,
    iteration: u64,
) -> Result<HararyCutResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(iteration);
    let tree = sample_spanning_tree(g, params.method, &mut rng)?;
    let mut sigma = switching_from_tree(g, &tree);
    if params.refine {
        sigma = refine_switching(g, sigma);
    }
    let state = balanced_state(g, sigma);
    let mut cut = harary_cut(g, state);
    let counts = metrics::edge_counts(g, &cut.components.component_of)?;
    let v_iso = cut.components.isolated_count() as u64;
    let loss = metrics::loss(
        &counts,
        v_iso,
        g.vertex_count() as u64,
        params.alpha,
        params.beta,
    )?;
    cut.loss = Some(loss);
    cut.iteration_index = Some(iteration);
    Ok(cut)
}

fn better(a: HararyCutResult, b: HararyCutResult) -> HararyCutResult {
    let key = |c: &HararyCutResult| (c.loss.unwrap(), c.state.frustration, c.iteration_index.unwrap());
    let (ka, kb) = (key(&a), key(&b));
    match ka.0.partial_cmp(&kb.0).expect("loss is finite") {
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => {
            if (ka.1, ka.2) <= (kb.1, kb.2) {
                a
            } else {
                b
            }
        }
    }
}

/// Runs `iterations` independent tree samples on one connected component and
/// returns the minimum-loss Harary cut, scored against the original signs.
/// Ties break toward lower frustration, then lower iteration index, so the
/// result does not depend on the parallel schedule.
pub fn best_harary_cut(g: &SignedGraph, params: &BestCutParams) -> Result<HararyCutResult> {
    if params.iterations < 1 {
        return Err(Error::InvalidArgument("iterations must be at least 1".into()));
    }
    (0..params.iterations)
        .into_par_iter()
        .map(|i| cut_candidate(g, params, i))
        .try_reduce_with(|a, b| Ok(better(a, b)))
        .expect("at least one iteration")
}

/// `g` re-signed by `sigma`: edge (u, v) gets `sigma(u) * sign * sigma(v)`.
/// Switching preserves every cycle sign, hence balance status.
pub fn switched_graph(g: &SignedGraph, sigma: &SwitchingFunction) -> SignedGraph {
    let edges = g
        .edges()
        .iter()
        .map(|e| (e.u, e.v, sigma.get(e.u) * e.sign * sigma.get(e.v)))
        .collect();
    SignedGraph::from_signed_edges(
        g.vertex_count(),
        edges,
        Some(g.original_ids().to_vec()),
    )
    .expect("re-signing preserves the edge structure")
}

/// The balanced state itself as a graph: every edge signed
/// `sigma(u) * sigma(v)` on the topology of `g`.
pub fn balanced_resigning(g: &SignedGraph, sigma: &SwitchingFunction) -> SignedGraph {
    let edges = g
        .edges()
        .iter()
        .map(|e| (e.u, e.v, sigma.product(e.u, e.v)))
        .collect();
    SignedGraph::from_signed_edges(
        g.vertex_count(),
        edges,
        Some(g.original_ids().to_vec()),
    )
    .expect("re-signing preserves the edge structure")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{preprocess, EdgeList, RawEdge};
    use proptest::prelude::*;
    use rand::Rng;
    use std::collections::HashMap;

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

    fn triangle() -> SignedGraph {
        // (+, +, -): v0-v1 positive, v1-v2 positive, v0-v2 negative.
        graph(&[(0, 1, 1.0), (1, 2, 1.0), (0, 2, -1.0)])
    }

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn tree_of_triangle_has_two_edges() {
        let g = triangle();
        for method in [TreeMethod::RandomBfs, TreeMethod::RandomKruskal] {
            let t = sample_spanning_tree(&g, method, &mut rng(1)).unwrap();
            assert_eq!(t.edges().count(), 2);
            assert_eq!(t.order.len(), 3);
        }
    }

    #[test]
    fn tree_shaped_input_returns_itself() {
        let g = graph(&[(0, 1, 1.0), (1, 2, -1.0), (1, 3, 1.0)]);
        for method in [TreeMethod::RandomBfs, TreeMethod::RandomKruskal] {
            let t = sample_spanning_tree(&g, method, &mut rng(7)).unwrap();
            let mut tree_edges: Vec<(u32, u32)> = t
                .edges()
                .map(|(c, p, _)| (c.min(p), c.max(p)))
                .collect();
            tree_edges.sort_unstable();
            let mut graph_edges: Vec<(u32, u32)> =
                g.edges().iter().map(|e| (e.u, e.v)).collect();
            graph_edges.sort_unstable();
            assert_eq!(tree_edges, graph_edges);
        }
    }

    #[test]
    fn disconnected_input_is_rejected() {
        let g = graph(&[(0, 1, 1.0), (2, 3, 1.0)]);
        for method in [TreeMethod::RandomBfs, TreeMethod::RandomKruskal] {
            assert!(matches!(
                sample_spanning_tree(&g, method, &mut rng(3)),
                Err(Error::Disconnected)
            ));
        }
    }

    #[test]
    fn triangle_trees_are_sampled_near_uniformly() {
        let g = triangle();
        for method in [TreeMethod::RandomBfs, TreeMethod::RandomKruskal] {
            let mut counts: HashMap<Vec<(u32, u32)>, u64> = HashMap::new();
            let mut r = rng(99);
            for _ in 0..10_000 {
                let t = sample_spanning_tree(&g, method, &mut r).unwrap();
                let mut key: Vec<(u32, u32)> =
                    t.edges().map(|(c, p, _)| (c.min(p), c.max(p))).collect();
                key.sort_unstable();
                *counts.entry(key).or_insert(0) += 1;
            }
            assert_eq!(counts.len(), 3, "triangle has exactly three spanning trees");
            for (_, c) in counts {
                let freq = c as f64 / 10_000.0;
                assert!(
                    (freq - 1.0 / 3.0).abs() <= 0.02,
                    "{method}: frequency {freq} strays from 1/3"
                );
            }
        }
    }

    fn tree_rooted_at(g: &SignedGraph, root: VertexId, edges: &[(u32, u32)]) -> SpanningTree {
        // Deterministic helper for hand-built trees.
        let n = g.vertex_count();
        let mut adj: Vec<Vec<(VertexId, Sign)>> = vec![Vec::new(); n];
        for &(a, b) in edges {
            let sign = g
                .edges()
                .iter()
                .find(|e| (e.u, e.v) == (a.min(b), a.max(b)))
                .unwrap()
                .sign;
            adj[a as usize].push((b, sign));
            adj[b as usize].push((a, sign));
        }
        let mut parent = vec![u32::MAX; n];
        let mut parent_sign = vec![Sign::Positive; n];
        let mut order = vec![root];
        let mut queue = std::collections::VecDeque::from([root]);
        parent[root as usize] = root;
        while let Some(u) = queue.pop_front() {
            for &(v, s) in &adj[u as usize] {
                if parent[v as usize] == u32::MAX {
                    parent[v as usize] = u;
                    parent_sign[v as usize] = s;
                    order.push(v);
                    queue.push_back(v);
                }
            }
        }
        SpanningTree { root, parent, parent_sign, order }
    }

    #[test]
    fn switching_propagates_tree_signs() {
        let all_pos = graph(&[(0, 1, 1.0), (1, 2, 1.0)]);
        let t = tree_rooted_at(&all_pos, 0, &[(0, 1), (1, 2)]);
        let sigma = switching_from_tree(&all_pos, &t);
        assert_eq!(
            (sigma.get(0), sigma.get(1), sigma.get(2)),
            (Sign::Positive, Sign::Positive, Sign::Positive)
        );

        let mixed_path = graph(&[(0, 1, 1.0), (1, 2, -1.0)]);
        let t = tree_rooted_at(&mixed_path, 0, &[(0, 1), (1, 2)]);
        let sigma = switching_from_tree(&mixed_path, &t);
        assert_eq!(
            (sigma.get(0), sigma.get(1), sigma.get(2)),
            (Sign::Positive, Sign::Positive, Sign::Negative)
        );

        let t = tree_rooted_at(&triangle(), 0, &[(0, 1), (0, 2)]);
        let sigma = switching_from_tree(&triangle(), &t);
        assert_eq!(
            (sigma.get(0), sigma.get(1), sigma.get(2)),
            (Sign::Positive, Sign::Positive, Sign::Negative)
        );
    }

    #[test]
    fn frustration_counts_mismatched_edges() {
        let all_pos = graph(&[(0, 1, 1.0), (1, 2, 1.0)]);
        let st = balanced_state(&all_pos, SwitchingFunction::all_positive(3));
        assert_eq!(st.frustration, 0);

        let st = balanced_state(&triangle(), SwitchingFunction::all_positive(3));
        assert_eq!(st.frustration, 1);

        let sigma = SwitchingFunction::from_signs(vec![
            Sign::Positive,
            Sign::Positive,
            Sign::Negative,
        ]);
        let st = balanced_state(&triangle(), sigma);
        assert_eq!(st.frustration, 1);

        // Exhaustive check over all 8 potentials: the minimum is 1.
        let mut best = u64::MAX;
        for mask in 0u32..8 {
            let sigma = SwitchingFunction::from_signs(
                (0..3)
                    .map(|v| if (mask >> v) & 1 == 0 { Sign::Positive } else { Sign::Negative })
                    .collect(),
            );
            best = best.min(balanced_state(&triangle(), sigma).frustration);
        }
        assert_eq!(best, 1);
    }

    #[test]
    fn balance_detection_finds_witnesses() {
        let all_pos = graph(&[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]);
        let sigma = is_balanced(&all_pos).unwrap();
        assert!(balanced_state(&all_pos, sigma).frustration == 0);

        assert!(is_balanced(&triangle()).is_none());

        // 4-cycle with two negative edges: cycle sign is positive.
        let cycle = graph(&[(0, 1, 1.0), (1, 2, -1.0), (2, 3, 1.0), (3, 0, -1.0)]);
        let sigma = is_balanced(&cycle).unwrap();
        assert_eq!(balanced_state(&cycle, sigma).frustration, 0);
    }

    #[test]
    fn exhaustive_frustration_matches_hand_counts() {
        let balanced = graph(&[(0, 1, 1.0), (1, 2, -1.0), (2, 3, 1.0), (3, 0, -1.0)]);
        assert_eq!(frustration_exhaustive(&balanced).unwrap().0, 0);

        assert_eq!(frustration_exhaustive(&triangle()).unwrap().0, 1);

        let neg_5cycle = graph(&[
            (0, 1, -1.0),
            (1, 2, -1.0),
            (2, 3, -1.0),
            (3, 4, -1.0),
            (4, 0, -1.0),
        ]);
        assert_eq!(frustration_exhaustive(&neg_5cycle).unwrap().0, 1);
    }

    #[test]
    fn exhaustive_frustration_rejects_large_graphs() {
        let edges: Vec<(u64, u64, f64)> = (0..25).map(|i| (i, (i + 1) % 26, 1.0)).collect();
        let g = graph(&edges);
        assert!(matches!(
            frustration_exhaustive(&g),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn cut_splits_along_the_potential() {
        let all_pos = graph(&[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]);
        let st = balanced_state(&all_pos, SwitchingFunction::all_positive(3));
        let cut = harary_cut(&all_pos, st);
        assert_eq!(cut.components.len(), 1);

        let sigma = SwitchingFunction::from_signs(vec![
            Sign::Positive,
            Sign::Positive,
            Sign::Negative,
        ]);
        let st = balanced_state(&triangle(), sigma);
        let cut = harary_cut(&triangle(), st);
        assert_eq!(cut.components.len(), 2);
        assert_eq!(cut.components.components[0], vec![0, 1]);
        assert_eq!(cut.components.components[1], vec![2]);
    }

    #[test]
    fn best_cut_on_all_positive_component_is_lossless() {
        let all_pos = graph(&[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]);
        let best = best_harary_cut(&all_pos, &BestCutParams::default()).unwrap();
        assert_eq!(best.components.len(), 1);
        assert_eq!(best.loss, Some(0.0));
    }

    #[test]
    fn best_cut_on_frustrated_triangle_scores_a_quarter() {
        let params = BestCutParams { iterations: 16, seed: 11, ..Default::default() };
        let best = best_harary_cut(&triangle(), &params).unwrap();
        assert_eq!(best.loss, Some(0.25));
        assert_eq!(best.components.len(), 2);
        let sizes: Vec<usize> =
            best.components.components.iter().map(Vec::len).collect();
        assert!(sizes == vec![2, 1] || sizes == vec![1, 2]);
    }

    #[test]
    fn best_cut_is_deterministic_for_a_seed() {
        let g = graph(&[
            (0, 1, 1.0),
            (1, 2, -1.0),
            (2, 3, 1.0),
            (3, 4, -1.0),
            (4, 0, 1.0),
            (1, 3, 1.0),
            (0, 2, -1.0),
        ]);
        let params = BestCutParams { iterations: 64, seed: 5, ..Default::default() };
        let a = best_harary_cut(&g, &params).unwrap();
        let b = best_harary_cut(&g, &params).unwrap();
        assert_eq!(a.components, b.components);
        assert_eq!(a.loss, b.loss);
        assert_eq!(a.iteration_index, b.iteration_index);

        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| best_harary_cut(&g, &params)).unwrap();
        assert_eq!(a.components, c.components);
        assert_eq!(a.iteration_index, c.iteration_index);
    }

    #[test]
    fn refinement_never_increases_frustration() {
        let g = graph(&[
            (0, 1, -1.0),
            (1, 2, -1.0),
            (2, 0, -1.0),
            (2, 3, 1.0),
            (3, 4, -1.0),
        ]);
        let sigma = SwitchingFunction::all_positive(5);
        let before = balanced_state(&g, sigma.clone()).frustration;
        let refined = refine_switching(&g, sigma);
        let after = balanced_state(&g, refined).frustration;
        assert!(after <= before);
        assert_eq!(after, frustration_exhaustive(&g).unwrap().0);
    }

    fn arbitrary_connected_graph(
        max_n: usize,
    ) -> impl Strategy<Value = SignedGraph> {
        (2usize..=max_n, any::<u64>()).prop_map(|(n, seed)| {
            let mut r = rng(seed);
            // Random spanning chain keeps it connected, extra edges on top.
            // Each unordered pair is assigned at most once so no pair can
            // come out inconsistent and be purged.
            let mut used = std::collections::HashSet::new();
            let mut edges: Vec<(u64, u64, f64)> = Vec::new();
            for v in 1..n as u64 {
                let u = r.gen_range(0..v);
                used.insert((u, v));
                edges.push((u, v, if r.gen_bool(0.5) { 1.0 } else { -1.0 }));
            }
            for u in 0..n as u64 {
                for v in (u + 1)..n as u64 {
                    if !used.contains(&(u, v)) && r.gen_bool(0.3) {
                        edges.push((u, v, if r.gen_bool(0.5) { 1.0 } else { -1.0 }));
                    }
                }
            }
            graph(&edges)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn tree_states_are_balanced(g in arbitrary_connected_graph(12), seed in any::<u64>()) {
            let t = sample_spanning_tree(&g, TreeMethod::RandomBfs, &mut rng(seed)).unwrap();
            let sigma = switching_from_tree(&g, &t);
            // Every tree edge is satisfied.
            for (c, p, s) in t.edges() {
                prop_assert_eq!(sigma.product(c, p), s);
            }
            let resigned = balanced_resigning(&g, &sigma);
            let witness = is_balanced(&resigned);
            prop_assert!(witness.is_some());
        }

        #[test]
        fn switching_preserves_balance_status(g in arbitrary_connected_graph(10), mask in any::<u16>()) {
            let sigma = SwitchingFunction::from_signs(
                (0..g.vertex_count())
                    .map(|v| if (mask >> (v % 16)) & 1 == 0 { Sign::Positive } else { Sign::Negative })
                    .collect(),
            );
            let switched = switched_graph(&g, &sigma);
            prop_assert_eq!(is_balanced(&g).is_some(), is_balanced(&switched).is_some());
        }

        #[test]
        fn sampled_minimum_bounds_exhaustive(g in arbitrary_connected_graph(8), seed in any::<u64>()) {
            let (exact, _) = frustration_exhaustive(&g).unwrap();
            let mut r = rng(seed);
            let mut best = u64::MAX;
            for _ in 0..64 {
                let t = sample_spanning_tree(&g, TreeMethod::RandomBfs, &mut r).unwrap();
                let st = balanced_state(&g, switching_from_tree(&g, &t));
                best = best.min(st.frustration);
            }
            prop_assert!(best >= exact);
        }

        #[test]
        fn frustration_equals_violating_edges_of_the_cut(g in arbitrary_connected_graph(10), seed in any::<u64>()) {
            let t = sample_spanning_tree(&g, TreeMethod::RandomBfs, &mut rng(seed)).unwrap();
            let st = balanced_state(&g, switching_from_tree(&g, &t));
            let frustration = st.frustration;
            let cut = harary_cut(&g, st);
            let counts = metrics::edge_counts(&g, &cut.components.component_of).unwrap();
            prop_assert_eq!(frustration, counts.pos_between + counts.neg_within);
            // Positive edges crossing the cut are exactly the frustrated positives.
            let frustrated_pos = g
                .edges()
                .iter()
                .filter(|e| e.sign.is_positive() && !cut.state.sigma.product(e.u, e.v).is_positive())
                .count() as u64;
            prop_assert_eq!(counts.pos_between, frustrated_pos);
        }
    }
}
