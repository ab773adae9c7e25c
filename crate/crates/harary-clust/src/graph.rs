//! Signed-graph data model: edge-list parsing, preprocessing, connected
//! components and induced subgraphs.
//!
//! A [`SignedGraph`] is immutable once built. Vertex ids are densified to
//! `0..n` internally; the original ids from the input file are kept so that
//! every external output can be written in terms of them.

use std::collections::HashMap;
use std::io::BufRead;

use crate::error::{Error, Result};

/// Dense vertex index in `0..n`.
pub type VertexId = u32;

/// Edge sign. Every stored edge is exactly `+1` or `-1`; weights only carry
/// the sign through parsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    /// Sign of a raw weight. Zero (a neutral edge) counts as positive.
    pub fn from_weight(weight: f64) -> Sign {
        if weight < 0.0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn is_positive(self) -> bool {
        self == Sign::Positive
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sign::Positive => write!(f, "+1"),
            Sign::Negative => write!(f, "-1"),
        }
    }
}

/// An edge as parsed from the input, before any preprocessing. May still be
/// a self-loop or a duplicate; the weight carries the sign.
#[derive(Debug, Clone, PartialEq)]
pub struct RawEdge {
    pub src: u64,
    pub dst: u64,
    pub weight: f64,
}

/// Supported input formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    /// `u v [w [timestamp]]`, whitespace- or comma-separated, `%`/`#` comments.
    /// A missing weight defaults to `+1`.
    Konect,
    /// `user,item,rating[,timestamp]` with an integer rating in `1..=5`.
    AmazonRatings,
}

impl std::str::FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "konect" => Ok(InputFormat::Konect),
            "amazon-ratings" => Ok(InputFormat::AmazonRatings),
            other => Err(format!("unknown format '{other}' (expected konect or amazon-ratings)")),
        }
    }
}

impl std::fmt::Display for InputFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InputFormat::Konect => write!(f, "konect"),
            InputFormat::AmazonRatings => write!(f, "amazon-ratings"),
        }
    }
}

/// Result of parsing one input stream: raw edges plus, for formats whose ids
/// are not integers (Amazon ratings), the original id per assigned vertex.
#[derive(Debug)]
pub struct EdgeList {
    pub edges: Vec<RawEdge>,
    /// `names[id] = original string id`; `None` for integer-id formats.
    pub names: Option<Vec<String>>,
}

/// Maps an Amazon rating to an edge sign: 4 and 5 are positive, 3 is neutral
/// (no sign; preprocessing later treats it as positive), 1 and 2 are negative.
pub fn map_rating(rating: i64) -> Result<i32> {
    match rating {
        4 | 5 => Ok(1),
        3 => Ok(0),
        1 | 2 => Ok(-1),
        other => Err(Error::InvalidArgument(format!(
            "rating {other} outside 1..=5"
        ))),
    }
}

/// Parses a line-oriented edge stream in file order.
///
/// Konect lines are `u v [w [timestamp]]` with non-negative integer ids;
/// lines starting with `%` or `#` and blank lines are skipped. Amazon lines
/// are `user,item,rating[,timestamp]`; users and items get disjoint ids in
/// one bipartite vertex space and the rating is converted via [`map_rating`]
/// (the weight keeps the rating magnitude, e.g. rating 5 becomes `+5`).
pub fn parse_edge_list<R: BufRead>(reader: R, format: InputFormat) -> Result<EdgeList> {
    match format {
        InputFormat::Konect => parse_konect(reader),
        InputFormat::AmazonRatings => parse_amazon(reader),
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_konect<R: BufRead>(reader: R) -> Result<EdgeList> {
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.len() < 2 || tokens.len() > 4 {
            return Err(parse_error(
                lineno,
                format!("expected 'u v [w [timestamp]]', got {} fields", tokens.len()),
            ));
        }
        let src: u64 = tokens[0]
            .parse()
            .map_err(|_| parse_error(lineno, format!("bad vertex id '{}'", tokens[0])))?;
        let dst: u64 = tokens[1]
            .parse()
            .map_err(|_| parse_error(lineno, format!("bad vertex id '{}'", tokens[1])))?;
        let weight: f64 = if tokens.len() >= 3 {
            tokens[2]
                .parse()
                .map_err(|_| parse_error(lineno, format!("bad weight '{}'", tokens[2])))?
        } else {
            1.0
        };
        if tokens.len() == 4 {
            // Fourth column is a timestamp; it must at least be numeric.
            tokens[3]
                .parse::<f64>()
                .map_err(|_| parse_error(lineno, format!("bad timestamp '{}'", tokens[3])))?;
        }
        edges.push(RawEdge { src, dst, weight });
    }
    Ok(EdgeList { edges, names: None })
}

fn parse_amazon<R: BufRead>(reader: R) -> Result<EdgeList> {
    let mut edges = Vec::new();
    let mut names = Vec::new();
    let mut users: HashMap<String, u64> = HashMap::new();
    let mut items: HashMap<String, u64> = HashMap::new();

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() < 3 || fields.len() > 4 {
            return Err(parse_error(
                lineno,
                format!("expected 'user,item,rating[,timestamp]', got {} fields", fields.len()),
            ));
        }
        let rating_raw: f64 = fields[2]
            .parse()
            .map_err(|_| parse_error(lineno, format!("bad rating '{}'", fields[2])))?;
        if rating_raw.fract() != 0.0 {
            return Err(parse_error(lineno, format!("non-integer rating '{}'", fields[2])));
        }
        let rating = rating_raw as i64;
        let sign = map_rating(rating).map_err(|e| parse_error(lineno, e.to_string()))?;
        let weight = f64::from(sign) * rating as f64;

        let src = *users.entry(fields[0].to_string()).or_insert_with(|| {
            names.push(fields[0].to_string());
            (names.len() - 1) as u64
        });
        let dst = *items.entry(fields[1].to_string()).or_insert_with(|| {
            names.push(fields[1].to_string());
            (names.len() - 1) as u64
        });
        edges.push(RawEdge { src, dst, weight });
    }
    Ok(EdgeList { edges, names: Some(names) })
}

/// An undirected signed edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub sign: Sign,
}

/// Immutable undirected signed graph in CSR-style adjacency form.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    adj_offsets: Vec<usize>,
    adj_entries: Vec<(VertexId, Sign)>,
    names: Vec<String>,
    pos_edges: usize,
    neg_edges: usize,
}

impl SignedGraph {
    /// Builds a graph from already-clean signed edges. `edges` must contain
    /// no self-loops and no duplicate unordered pairs.
    pub fn from_signed_edges(
        vertex_count: usize,
        edges: Vec<(VertexId, VertexId, Sign)>,
        names: Option<Vec<String>>,
    ) -> Result<SignedGraph> {
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v, sign) in edges {
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {u}")));
            }
            if (u as usize) >= vertex_count || (v as usize) >= vertex_count {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u},{v}) out of range for {vertex_count} vertices"
                )));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            normalized.push(Edge { u: a, v: b, sign });
        }
        normalized.sort_by_key(|e| (e.u, e.v));
        if normalized.windows(2).any(|w| (w[0].u, w[0].v) == (w[1].u, w[1].v)) {
            return Err(Error::InvalidArgument("duplicate unordered pair".into()));
        }
        let names = match names {
            Some(n) => {
                if n.len() != vertex_count {
                    return Err(Error::InvalidArgument("name table length mismatch".into()));
                }
                n
            }
            None => (0..vertex_count).map(|v| v.to_string()).collect(),
        };
        Ok(Self::assemble(vertex_count, normalized, names))
    }

    fn assemble(vertex_count: usize, edges: Vec<Edge>, names: Vec<String>) -> SignedGraph {
        let mut degree = vec![0usize; vertex_count];
        for e in &edges {
            degree[e.u as usize] += 1;
            degree[e.v as usize] += 1;
        }
        let mut adj_offsets = vec![0usize; vertex_count + 1];
        for v in 0..vertex_count {
            adj_offsets[v + 1] = adj_offsets[v] + degree[v];
        }
        let mut cursor = adj_offsets.clone();
        let mut adj_entries = vec![(0 as VertexId, Sign::Positive); edges.len() * 2];
        for e in &edges {
            adj_entries[cursor[e.u as usize]] = (e.v, e.sign);
            cursor[e.u as usize] += 1;
            adj_entries[cursor[e.v as usize]] = (e.u, e.sign);
            cursor[e.v as usize] += 1;
        }
        let pos_edges = edges.iter().filter(|e| e.sign.is_positive()).count();
        let neg_edges = edges.len() - pos_edges;
        SignedGraph {
            vertex_count,
            edges,
            adj_offsets,
            adj_entries,
            names,
            pos_edges,
            neg_edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn pos_edge_count(&self) -> usize {
        self.pos_edges
    }

    pub fn neg_edge_count(&self) -> usize {
        self.neg_edges
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `v` with the sign of the connecting edge.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, Sign)] {
        let v = v as usize;
        &self.adj_entries[self.adj_offsets[v]..self.adj_offsets[v + 1]]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }

    /// Original id of a dense vertex, as it appeared in the input.
    pub fn original_id(&self, v: VertexId) -> &str {
        &self.names[v as usize]
    }

    pub fn original_ids(&self) -> &[String] {
        &self.names
    }
}

/// Preprocesses raw edges into a clean [`SignedGraph`]:
///
/// * directed edges fold to undirected unordered pairs,
/// * self-loops are dropped,
/// * weight `>= 0` becomes `+1` (neutral counts as positive), `< 0` becomes `-1`,
/// * duplicates of a pair with the same sign keep only the first occurrence,
/// * a pair seen with both signs is inconsistent and dropped entirely,
/// * vertex ids are densified to `0..n` in ascending original-id order.
pub fn preprocess(list: &EdgeList) -> Result<SignedGraph> {
    #[derive(Clone, Copy)]
    struct PairState {
        sign: Sign,
        first_index: usize,
        inconsistent: bool,
    }

    let mut pairs: HashMap<(u64, u64), PairState> = HashMap::new();
    for (index, raw) in list.edges.iter().enumerate() {
        if raw.src == raw.dst {
            continue;
        }
        let key = (raw.src.min(raw.dst), raw.src.max(raw.dst));
        let sign = Sign::from_weight(raw.weight);
        pairs
            .entry(key)
            .and_modify(|state| {
                if state.sign != sign {
                    state.inconsistent = true;
                }
            })
            .or_insert(PairState { sign, first_index: index, inconsistent: false });
    }

    let mut kept: Vec<((u64, u64), Sign, usize)> = pairs
        .iter()
        .filter(|(_, s)| !s.inconsistent)
        .map(|(&key, s)| (key, s.sign, s.first_index))
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyGraph);
    }
    kept.sort_by_key(|&(_, _, first_index)| first_index);

    let mut original_ids: Vec<u64> = kept
        .iter()
        .flat_map(|&((a, b), _, _)| [a, b])
        .collect();
    original_ids.sort_unstable();
    original_ids.dedup();
    let dense: HashMap<u64, VertexId> = original_ids
        .iter()
        .enumerate()
        .map(|(i, &orig)| (orig, i as VertexId))
        .collect();

    let names: Vec<String> = original_ids
        .iter()
        .map(|&orig| match &list.names {
            Some(table) => table[orig as usize].clone(),
            None => orig.to_string(),
        })
        .collect();

    let edges: Vec<(VertexId, VertexId, Sign)> = kept
        .iter()
        .map(|&((a, b), sign, _)| (dense[&a], dense[&b], sign))
        .collect();

    SignedGraph::from_signed_edges(original_ids.len(), edges, Some(names))
}

/// A partition of the vertex set into connected components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSet {
    pub components: Vec<Vec<VertexId>>,
    pub component_of: Vec<u32>,
}

impl ComponentSet {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Number of size-1 components.
    pub fn isolated_count(&self) -> usize {
        self.components.iter().filter(|c| c.len() == 1).count()
    }
}

/// Connected components of `g` restricted to edges where `keep_edge` holds.
/// The predicate sees each edge from both endpoints, so it must be symmetric.
/// Iterative BFS; components are ordered by their smallest vertex.
pub fn connected_components<F>(g: &SignedGraph, mut keep_edge: F) -> ComponentSet
where
    F: FnMut(VertexId, VertexId, Sign) -> bool,
{
    let n = g.vertex_count();
    let mut component_of = vec![u32::MAX; n];
    let mut components = Vec::new();
    let mut queue = std::collections::VecDeque::new();

    for start in 0..n as VertexId {
        if component_of[start as usize] != u32::MAX {
            continue;
        }
        let id = components.len() as u32;
        let mut members = vec![start];
        component_of[start as usize] = id;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &(v, sign) in g.neighbors(u) {
                if component_of[v as usize] == u32::MAX && keep_edge(u, v, sign) {
                    component_of[v as usize] = id;
                    members.push(v);
                    queue.push_back(v);
                }
            }
        }
        components.push(members);
    }
    ComponentSet { components, component_of }
}

/// An induced subgraph together with the id maps back to its parent graph.
#[derive(Debug)]
pub struct Subgraph {
    pub graph: SignedGraph,
    /// `to_parent[sub_id] = parent_id`.
    pub to_parent: Vec<VertexId>,
    from_parent: HashMap<VertexId, VertexId>,
}

impl Subgraph {
    pub fn parent_to_sub(&self, parent: VertexId) -> Option<VertexId> {
        self.from_parent.get(&parent).copied()
    }
}

/// Subgraph induced by `vertices`, keeping the original signs of `g`.
/// Original-id names are inherited from the parent.
pub fn induced_subgraph(g: &SignedGraph, vertices: &[VertexId]) -> Result<Subgraph> {
    if vertices.is_empty() {
        return Err(Error::InvalidArgument("empty vertex set".into()));
    }
    let mut from_parent: HashMap<VertexId, VertexId> = HashMap::with_capacity(vertices.len());
    let mut to_parent = Vec::with_capacity(vertices.len());
    for &v in vertices {
        if (v as usize) >= g.vertex_count() {
            return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
        }
        if from_parent.insert(v, to_parent.len() as VertexId).is_some() {
            return Err(Error::InvalidArgument(format!("vertex {v} listed twice")));
        }
        to_parent.push(v);
    }

    let mut edges = Vec::new();
    for &u in vertices {
        for &(v, sign) in g.neighbors(u) {
            if u < v {
                if let (Some(&su), Some(&sv)) = (from_parent.get(&u), from_parent.get(&v)) {
                    edges.push((su, sv, sign));
                }
            }
        }
    }
    let names = to_parent.iter().map(|&p| g.original_id(p).to_string()).collect();
    let graph = SignedGraph::from_signed_edges(vertices.len(), edges, Some(names))?;
    Ok(Subgraph { graph, to_parent, from_parent })
}
