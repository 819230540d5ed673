//! k-uniform hypergraphs on the vertex set `{1..n}`.
//!
//! Edges are k-element subsets, stored as strictly increasing vertex lists
//! and, whenever `n <= 64`, additionally as machine-word bitmasks. Input is
//! validated, never repaired: duplicate edges, unsorted vertex lists, and
//! out-of-range vertices are hard errors.
//!
//! Two serialization formats are supported.
//!
//! Plain text: a header line `n k m`, then `m` lines each holding `k`
//! strictly increasing vertex indices separated by spaces. Lines starting
//! with `#` are comments. The trailing newline is optional on input.
//!
//! JSON: `{"n":4,"k":2,"edges":[[1,2]]}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::subsets::{mask_from_vertices, vertices_from_mask};

/// Serialization format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Plain,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HypergraphError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("invalid dimensions: n={n}, k={k}")]
    InvalidDimensions { n: u32, k: u32 },
    #[error("malformed edge line: {0}")]
    MalformedEdge(String),
    #[error("vertex {v} out of range [1, {n}]")]
    VertexOutOfRange { v: u32, n: u32 },
    #[error("edge has {got} vertices, expected {expected}")]
    WrongEdgeSize { expected: u32, got: usize },
    #[error("duplicate vertex {v} within an edge")]
    DuplicateVertex { v: u32 },
    #[error("edge vertices must be strictly increasing")]
    UnsortedEdge,
    #[error("duplicate edge {0}")]
    DuplicateEdge(String),
    #[error("expected {expected} edges, found {got}")]
    WrongEdgeCount { expected: usize, got: usize },
    #[error("unexpected content after the edge list: {0}")]
    TrailingContent(String),
    #[error("invalid json: {0}")]
    Json(String),
    #[error("not a permutation of 1..={n}")]
    NotAPermutation { n: u32 },
}

/// One k-subset of the vertex set.
///
/// Ordering and equality go through the vertex list, so edge collections
/// sort lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    vertices: Vec<u32>,
    mask: Option<u64>,
}

impl Edge {
    /// Validates a strictly increasing vertex list against the ground set.
    pub fn new(vertices: Vec<u32>, n: u32) -> Result<Self, HypergraphError> {
        for pair in vertices.windows(2) {
            if pair[0] == pair[1] {
                return Err(HypergraphError::DuplicateVertex { v: pair[0] });
            }
            if pair[0] > pair[1] {
                return Err(HypergraphError::UnsortedEdge);
            }
        }
        for &v in &vertices {
            if v == 0 || v > n {
                return Err(HypergraphError::VertexOutOfRange { v, n });
            }
        }
        let mask = (n <= 64).then(|| mask_from_vertices(&vertices));
        Ok(Edge { vertices, mask })
    }

    /// Builds an edge from a bitmask. Requires `n <= 64`.
    pub fn from_mask(mask: u64, n: u32) -> Self {
        assert!(n <= 64);
        debug_assert!(n == 64 || mask < (1u64 << n));
        Edge {
            vertices: vertices_from_mask(mask),
            mask: Some(mask),
        }
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn mask(&self) -> Option<u64> {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        match self.mask {
            Some(mask) if (1..=64).contains(&v) => mask & (1u64 << (v - 1)) != 0,
            _ => self.vertices.binary_search(&v).is_ok(),
        }
    }

    /// Number of vertices shared with another edge.
    pub fn intersection_size(&self, other: &Edge) -> usize {
        match (self.mask, other.mask) {
            (Some(a), Some(b)) => (a & b).count_ones() as usize,
            _ => {
                let (mut i, mut j, mut count) = (0, 0, 0);
                while i < self.vertices.len() && j < other.vertices.len() {
                    match self.vertices[i].cmp(&other.vertices[j]) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            count += 1;
                            i += 1;
                            j += 1;
                        }
                    }
                }
                count
            }
        }
    }

    fn label(&self) -> String {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// A validated k-uniform hypergraph. Edges are held in lexicographic order
/// and are immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: u32,
    k: u32,
    edges: Vec<Edge>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypergraphJson {
    n: u32,
    k: u32,
    edges: Vec<Vec<u32>>,
}

impl Serialize for Hypergraph {
    /// Serializes as the JSON object form, `{"n":..,"k":..,"edges":[..]}`.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        HypergraphJson {
            n: self.n,
            k: self.k,
            edges: self.edges.iter().map(|e| e.vertices.clone()).collect(),
        }
        .serialize(serializer)
    }
}

impl Hypergraph {
    /// Validates vertex lists and assembles the canonical edge order.
    /// Duplicate edges are rejected, not merged.
    pub fn new(n: u32, k: u32, edges: Vec<Vec<u32>>) -> Result<Self, HypergraphError> {
        if n == 0 || k == 0 || k > n {
            return Err(HypergraphError::InvalidDimensions { n, k });
        }
        let mut validated = Vec::with_capacity(edges.len());
        for vertices in edges {
            if vertices.len() != k as usize {
                return Err(HypergraphError::WrongEdgeSize {
                    expected: k,
                    got: vertices.len(),
                });
            }
            validated.push(Edge::new(vertices, n)?);
        }
        validated.sort();
        for pair in validated.windows(2) {
            if pair[0] == pair[1] {
                return Err(HypergraphError::DuplicateEdge(pair[0].label()));
            }
        }
        Ok(Hypergraph {
            n,
            k,
            edges: validated,
        })
    }

    /// Assembles a hypergraph from edge bitmasks. Requires `n <= 64` and
    /// distinct masks of popcount `k`.
    pub fn from_masks(
        n: u32,
        k: u32,
        masks: impl IntoIterator<Item = u64>,
    ) -> Result<Self, HypergraphError> {
        let edges = masks.into_iter().map(vertices_from_mask).collect();
        Hypergraph::new(n, k, edges)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains_edge(&self, edge: &Edge) -> bool {
        self.edges.binary_search(edge).is_ok()
    }

    /// Edge bitmasks, available when `n <= 64`.
    pub fn edge_masks(&self) -> impl Iterator<Item = u64> + '_ {
        self.edges.iter().filter_map(|e| e.mask)
    }

    /// Parses the given format. See the module docs for the grammars.
    pub fn parse(input: &str, format: Format) -> Result<Self, HypergraphError> {
        match format {
            Format::Plain => Self::parse_plain(input),
            Format::Json => Self::parse_json(input),
        }
    }

    fn parse_plain(input: &str) -> Result<Self, HypergraphError> {
        let mut lines = input
            .lines()
            .map(str::trim_end)
            .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| HypergraphError::MalformedHeader("empty input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(HypergraphError::MalformedHeader(header.into()));
        }
        let parse_u32 =
            |s: &str| -> Option<u32> { s.bytes().all(|b| b.is_ascii_digit()).then(|| s.parse().ok()).flatten() };
        let (n, k, m) = match (parse_u32(fields[0]), parse_u32(fields[1]), parse_u32(fields[2])) {
            (Some(n), Some(k), Some(m)) => (n, k, m as usize),
            _ => return Err(HypergraphError::MalformedHeader(header.into())),
        };
        let mut edges = Vec::with_capacity(m);
        for line in lines.by_ref() {
            if edges.len() == m {
                return Err(HypergraphError::TrailingContent(line.into()));
            }
            let mut vertices = Vec::new();
            for token in line.split_whitespace() {
                let v = parse_u32(token)
                    .ok_or_else(|| HypergraphError::MalformedEdge(line.into()))?;
                vertices.push(v);
            }
            edges.push(vertices);
        }
        if edges.len() != m {
            return Err(HypergraphError::WrongEdgeCount {
                expected: m,
                got: edges.len(),
            });
        }
        Hypergraph::new(n, k, edges)
    }

    fn parse_json(input: &str) -> Result<Self, HypergraphError> {
        let raw: HypergraphJson =
            serde_json::from_str(input).map_err(|e| HypergraphError::Json(e.to_string()))?;
        Hypergraph::new(raw.n, raw.k, raw.edges)
    }

    /// Renders the chosen format. Edges are always emitted in lexicographic
    /// order, so serialization round-trips bit-exactly through `parse`.
    pub fn serialize(&self, format: Format) -> String {
        match format {
            Format::Plain => {
                let mut out = format!("{} {} {}\n", self.n, self.k, self.edges.len());
                for edge in &self.edges {
                    let parts: Vec<String> =
                        edge.vertices.iter().map(|v| v.to_string()).collect();
                    out.push_str(&parts.join(" "));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let raw = HypergraphJson {
                    n: self.n,
                    k: self.k,
                    edges: self.edges.iter().map(|e| e.vertices.clone()).collect(),
                };
                serde_json::to_string(&raw).expect("hypergraph serializes")
            }
        }
    }

    /// Applies a permutation of `{1..n}` to every vertex. `perm[v-1]` is the
    /// image of vertex `v`.
    pub fn relabel(&self, perm: &[u32]) -> Result<Self, HypergraphError> {
        let n = self.n;
        if perm.len() != n as usize {
            return Err(HypergraphError::NotAPermutation { n });
        }
        let mut seen = vec![false; n as usize];
        for &image in perm {
            if image == 0 || image > n || seen[(image - 1) as usize] {
                return Err(HypergraphError::NotAPermutation { n });
            }
            seen[(image - 1) as usize] = true;
        }
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let mut vs: Vec<u32> =
                    e.vertices.iter().map(|&v| perm[(v - 1) as usize]).collect();
                vs.sort_unstable();
                vs
            })
            .collect();
        let relabeled =
            Hypergraph::new(n, self.k, edges).expect("relabeling preserves validity");
        debug_assert_eq!(relabeled.edge_count(), self.edge_count());
        Ok(relabeled)
    }
}
