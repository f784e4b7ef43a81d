//! k-partite k-uniform hypergraphs.
//!
//! Vertices are addressed by `(part, index)` pairs ([`VertexId`]); matrices
//! use the flat order obtained by concatenating the parts. An edge holds one
//! within-part index per part, so every edge is a transversal by
//! construction.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlinalg::{Integers, Matrix};
use crate::rng;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("need at least two parts, got {0}")]
    TooFewParts(usize),
    #[error("part {0} is empty")]
    EmptyPart(usize),
    #[error("edge {0:?} has {1} entries, expected {2}")]
    Arity(Vec<usize>, usize, usize),
    #[error("edge {0:?} indexes outside part sizes {1:?}")]
    OutOfRange(Vec<usize>, Vec<usize>),
    #[error("duplicate edge {0:?}")]
    Duplicate(Vec<usize>),
    #[error("duplicate attachment {0:?}")]
    DuplicateAttachment(Vec<usize>),
    #[error("attachment {0:?} must have {1} entries")]
    AttachmentArity(Vec<usize>, usize),
    #[error("attachment {0:?} touches a nonexistent vertex")]
    AttachmentOutOfRange(Vec<usize>),
    #[error("part index {0} out of range")]
    NoSuchPart(usize),
    #[error("{0}")]
    Parameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// One hyperedge: within-part index `edge.0[j]` for part `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Edge(pub Vec<usize>);

impl Edge {
    pub fn indices(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for Edge {
    fn from(v: Vec<usize>) -> Self {
        Edge(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId {
    pub part: usize,
    pub index: usize,
}

impl VertexId {
    pub fn new(part: usize, index: usize) -> Self {
        Self { part, index }
    }
}

/// A k-partite k-graph. Edge order is insertion order; matrix columns and
/// rows indexed by edges follow it.
#[derive(Clone, Debug)]
pub struct PartiteHypergraph {
    part_sizes: Vec<usize>,
    offsets: Vec<usize>,
    edges: Vec<Edge>,
    index: HashMap<Edge, usize>,
}

impl PartialEq for PartiteHypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.part_sizes == other.part_sizes && self.edges == other.edges
    }
}

impl Eq for PartiteHypergraph {}

impl PartiteHypergraph {
    /// Edgeless graph on the given parts.
    pub fn new(part_sizes: Vec<usize>) -> Result<Self, HypergraphError> {
        if part_sizes.len() < 2 {
            return Err(HypergraphError::TooFewParts(part_sizes.len()));
        }
        if let Some(j) = part_sizes.iter().position(|&n| n == 0) {
            return Err(HypergraphError::EmptyPart(j));
        }
        let offsets = part_sizes
            .iter()
            .scan(0, |acc, &n| {
                let o = *acc;
                *acc += n;
                Some(o)
            })
            .collect();
        Ok(Self { part_sizes, offsets, edges: Vec::new(), index: HashMap::new() })
    }

    pub fn from_edges<E: Into<Edge>>(
        part_sizes: Vec<usize>,
        edges: impl IntoIterator<Item = E>,
    ) -> Result<Self, HypergraphError> {
        let mut g = Self::new(part_sizes)?;
        for e in edges {
            let e = e.into();
            if !g.insert_edge(e.clone())? {
                return Err(HypergraphError::Duplicate(e.0));
            }
        }
        Ok(g)
    }

    /// The complete k-partite k-graph `K^k_{n_1,...,n_k}`.
    pub fn complete(part_sizes: Vec<usize>) -> Result<Self, HypergraphError> {
        let mut g = Self::new(part_sizes)?;
        let total = g.total_possible_edges();
        for r in 0..total {
            let e = g.unrank_edge(r);
            g.insert_edge(e)?;
        }
        Ok(g)
    }

    /// The balanced complete graph `K^k_n`.
    pub fn complete_balanced(n: usize, k: usize) -> Result<Self, HypergraphError> {
        Self::complete(vec![n; k])
    }

    /// Inserts an edge; returns `false` if it was already present.
    pub fn insert_edge(&mut self, edge: Edge) -> Result<bool, HypergraphError> {
        self.validate_edge(&edge)?;
        if self.index.contains_key(&edge) {
            return Ok(false);
        }
        self.index.insert(edge.clone(), self.edges.len());
        self.edges.push(edge);
        Ok(true)
    }

    fn validate_edge(&self, edge: &Edge) -> Result<(), HypergraphError> {
        if edge.0.len() != self.k() {
            return Err(HypergraphError::Arity(edge.0.clone(), edge.0.len(), self.k()));
        }
        if edge.0.iter().zip(&self.part_sizes).any(|(&i, &n)| i >= n) {
            return Err(HypergraphError::OutOfRange(edge.0.clone(), self.part_sizes.clone()));
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.part_sizes.len()
    }

    pub fn part_sizes(&self) -> &[usize] {
        &self.part_sizes
    }

    /// `N`, the total number of vertices.
    pub fn num_vertices(&self) -> usize {
        self.part_sizes.iter().sum()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut e = self.edges.clone();
        e.sort();
        e
    }

    pub fn contains(&self, edge: &Edge) -> bool {
        self.index.contains_key(edge)
    }

    pub fn edge_position(&self, edge: &Edge) -> Option<usize> {
        self.index.get(edge).copied()
    }

    pub fn is_balanced(&self) -> bool {
        self.part_sizes.windows(2).all(|w| w[0] == w[1])
    }

    /// `Π n_j`, saturating at `u64::MAX`.
    pub fn total_possible_edges(&self) -> u64 {
        self.part_sizes.iter().fold(1u64, |acc, &n| acc.saturating_mul(n as u64))
    }

    pub fn flat(&self, v: VertexId) -> usize {
        self.offsets[v.part] + v.index
    }

    pub fn vertex(&self, flat: usize) -> VertexId {
        let part = self.offsets.partition_point(|&o| o <= flat) - 1;
        VertexId::new(part, flat - self.offsets[part])
    }

    /// Flat indices of the vertices of `edge`, in part order.
    pub fn edge_vertices<'a>(&'a self, edge: &'a Edge) -> impl Iterator<Item = usize> + 'a {
        edge.0.iter().zip(&self.offsets).map(|(&i, &o)| o + i)
    }

    /// Mixed-radix rank of an edge in `[0, Π n_j)`, part 0 most significant.
    pub fn rank_edge(&self, edge: &Edge) -> u64 {
        edge.0
            .iter()
            .zip(&self.part_sizes)
            .fold(0u64, |acc, (&i, &n)| acc * n as u64 + i as u64)
    }

    pub fn unrank_edge(&self, mut r: u64) -> Edge {
        let mut idx = vec![0; self.k()];
        for j in (0..self.k()).rev() {
            let n = self.part_sizes[j] as u64;
            idx[j] = (r % n) as usize;
            r /= n;
        }
        Edge(idx)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_vertices()];
        for e in &self.edges {
            for v in self.edge_vertices(e) {
                deg[v] += 1;
            }
        }
        deg
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    /// 0/1 vertex-by-edge matrix, `N × |E|`.
    pub fn incidence_matrix(&self) -> Matrix<Integers> {
        let mut m = Matrix::zeros(Integers, self.num_vertices(), self.num_edges());
        for (c, e) in self.edges.iter().enumerate() {
            for v in self.edge_vertices(e) {
                m[(v, c)] = BigInt::from(1);
            }
        }
        m
    }

    /// Subgraph on the same vertex set keeping the given edge positions.
    pub fn edge_subgraph(&self, positions: &[usize]) -> Self {
        let mut g = Self::new(self.part_sizes.clone()).expect("valid parts");
        for &p in positions {
            g.insert_edge(self.edges[p].clone()).expect("valid edge");
        }
        g
    }

    /// Subgraph keeping the first `m` edges in insertion order.
    pub fn prefix(&self, m: usize) -> Self {
        let positions: Vec<usize> = (0..m.min(self.num_edges())).collect();
        self.edge_subgraph(&positions)
    }

    /// Adds a vertex to `part` and one edge per attachment. Each attachment
    /// lists one existing vertex for every other part, in part order.
    pub fn degree_d_extension(&self, part: usize, attachments: &[Vec<usize>]) -> Result<Self, HypergraphError> {
        if part >= self.k() {
            return Err(HypergraphError::NoSuchPart(part));
        }
        let mut seen = HashSet::new();
        for a in attachments {
            if a.len() != self.k() - 1 {
                return Err(HypergraphError::AttachmentArity(a.clone(), self.k() - 1));
            }
            let others = (0..self.k()).filter(|&j| j != part);
            if a.iter().zip(others).any(|(&i, j)| i >= self.part_sizes[j]) {
                return Err(HypergraphError::AttachmentOutOfRange(a.clone()));
            }
            if !seen.insert(a.clone()) {
                return Err(HypergraphError::DuplicateAttachment(a.clone()));
            }
        }
        let mut sizes = self.part_sizes.clone();
        let new_index = sizes[part];
        sizes[part] += 1;
        let mut g = Self::from_edges(sizes, self.edges.iter().cloned())?;
        for a in attachments {
            let mut e = a.clone();
            e.insert(part, new_index);
            g.insert_edge(Edge(e))?;
        }
        Ok(g)
    }

    /// Some vertex of `b` with at least `d` edges whose other vertices all
    /// lie outside `b`.
    pub fn find_d_extendable(&self, b: &[VertexId], d: usize) -> Option<VertexId> {
        let in_b: HashSet<usize> = b.iter().map(|&v| self.flat(v)).collect();
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for e in &self.edges {
            let inside: Vec<usize> = self.edge_vertices(e).filter(|v| in_b.contains(v)).collect();
            if let [v] = inside[..] {
                *counts.entry(v).or_default() += 1;
            }
        }
        let mut candidates: Vec<VertexId> = b.to_vec();
        candidates.sort();
        candidates.dedup();
        candidates
            .into_iter()
            .find(|&v| counts.get(&self.flat(v)).copied().unwrap_or(0) >= d)
    }

    /// JSON form `{"k":..,"parts":[..],"edges":[[..],..]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&HypergraphJson::from(self)).expect("serialisable")
    }

    pub fn from_json(text: &str) -> Result<Self, HypergraphError> {
        let raw: HypergraphJson = serde_json::from_str(text).map_err(|e| HypergraphError::Parse(e.to_string()))?;
        if raw.k != raw.parts.len() {
            return Err(HypergraphError::Parse(format!("k = {} but {} parts", raw.k, raw.parts.len())));
        }
        Self::from_edges(raw.parts, raw.edges)
    }

    /// Plain-text form: a header line `k n_1 ... n_k`, then one edge per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = std::iter::once(self.k()).chain(self.part_sizes.iter().copied()).map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{}", header.join(" "));
        for e in &self.edges {
            let line: Vec<String> = e.0.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, HypergraphError> {
        let parse_line = |l: &str| -> Result<Vec<usize>, HypergraphError> {
            l.split_whitespace()
                .map(|t| t.parse().map_err(|_| HypergraphError::Parse(format!("bad integer {t:?}"))))
                .collect()
        };
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = parse_line(lines.next().ok_or_else(|| HypergraphError::Parse("empty input".into()))?)?;
        let (&k, parts) = header.split_first().ok_or_else(|| HypergraphError::Parse("empty header".into()))?;
        if parts.len() != k {
            return Err(HypergraphError::Parse(format!("header declares k = {k} but lists {} parts", parts.len())));
        }
        let edges = lines.map(parse_line).collect::<Result<Vec<_>, _>>()?;
        Self::from_edges(parts.to_vec(), edges)
    }

    /// Parses JSON if the text starts with `{`, plain text otherwise.
    pub fn parse(text: &str) -> Result<Self, HypergraphError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct HypergraphJson {
    k: usize,
    parts: Vec<usize>,
    edges: Vec<Vec<usize>>,
}

impl From<&PartiteHypergraph> for HypergraphJson {
    fn from(g: &PartiteHypergraph) -> Self {
        Self { k: g.k(), parts: g.part_sizes.clone(), edges: g.edges.iter().map(|e| e.0.clone()).collect() }
    }
}

impl Serialize for PartiteHypergraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        HypergraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PartiteHypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = HypergraphJson::deserialize(d)?;
        if raw.k != raw.parts.len() {
            return Err(serde::de::Error::custom(format!("k = {} but {} parts", raw.k, raw.parts.len())));
        }
        Self::from_edges(raw.parts, raw.edges).map_err(serde::de::Error::custom)
    }
}

fn balanced_total(n: usize, k: usize) -> Result<u64, HypergraphError> {
    if n == 0 || k < 2 {
        return Err(HypergraphError::Parameter(format!("need n >= 1 and k >= 2, got n={n}, k={k}")));
    }
    (0..k)
        .try_fold(1u64, |acc, _| acc.checked_mul(n as u64))
        .ok_or_else(|| HypergraphError::Parameter(format!("n^k overflows for n={n}, k={k}")))
}

/// Lazy uniformly random permutation of `[0, total)`: a Fisher–Yates shuffle
/// whose displaced entries live in a hash map, so only the drawn prefix is
/// ever stored.
struct SparseShuffle {
    total: u64,
    drawn: u64,
    moved: HashMap<u64, u64>,
}

impl SparseShuffle {
    fn new(total: u64) -> Self {
        Self { total, drawn: 0, moved: HashMap::new() }
    }

    fn next(&mut self, rng: &mut impl Rng) -> Option<u64> {
        if self.drawn == self.total {
            return None;
        }
        let i = self.drawn;
        let j = rng.random_range(i..self.total);
        let at_j = self.moved.get(&j).copied().unwrap_or(j);
        let at_i = self.moved.get(&i).copied().unwrap_or(i);
        self.moved.insert(j, at_i);
        self.moved.remove(&i);
        self.drawn += 1;
        Some(at_j)
    }
}

/// Uniform random `m`-edge subgraph of `K^k_n`. Edges come out in draw order.
pub fn gnm(n: usize, k: usize, m: u64, seed: u64) -> Result<PartiteHypergraph, HypergraphError> {
    let total = balanced_total(n, k)?;
    if m > total {
        return Err(HypergraphError::Parameter(format!("m = {m} exceeds n^k = {total}")));
    }
    let mut g = PartiteHypergraph::new(vec![n; k])?;
    let mut rng = rng::seeded(seed);
    let mut shuffle = SparseShuffle::new(total);
    for _ in 0..m {
        let r = shuffle.next(&mut rng).expect("m <= total");
        let e = g.unrank_edge(r);
        g.insert_edge(e)?;
    }
    Ok(g)
}

/// Keeps each edge of `K^k_n` independently with probability `p`.
pub fn gnp(n: usize, k: usize, p: f64, seed: u64) -> Result<PartiteHypergraph, HypergraphError> {
    let total = balanced_total(n, k)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(HypergraphError::Parameter(format!("p = {p} outside [0, 1]")));
    }
    let mut g = PartiteHypergraph::new(vec![n; k])?;
    let mut rng = rng::seeded(seed);
    for r in 0..total {
        if rng.random_bool(p) {
            let e = g.unrank_edge(r);
            g.insert_edge(e)?;
        }
    }
    Ok(g)
}

/// Prefix of a uniformly random edge insertion order of `K^k_n`, drawn until
/// the minimum degree first reaches `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MdTrace {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub edge_order: Vec<Edge>,
    /// Stopping time `M_d`: the shortest prefix with minimum degree `>= d`.
    pub m_d: usize,
}

impl MdTrace {
    /// `M_j` for any `j <= d`, read off the same trace.
    pub fn stopping_time(&self, j: usize) -> usize {
        assert!(j <= self.d, "trace only extends to M_{}", self.d);
        if j == 0 {
            return 0;
        }
        let n_vertices = self.n * self.k;
        let mut deg = vec![0usize; n_vertices];
        let mut below = n_vertices;
        for (m, e) in self.edge_order.iter().enumerate() {
            for (part, &i) in e.0.iter().enumerate() {
                let v = part * self.n + i;
                deg[v] += 1;
                if deg[v] == j {
                    below -= 1;
                }
            }
            if below == 0 {
                return m + 1;
            }
        }
        unreachable!("trace ends at M_d")
    }

    /// `G(n, m)` for `m` up to the trace length.
    pub fn graph_at(&self, m: usize) -> PartiteHypergraph {
        assert!(m <= self.edge_order.len(), "prefix beyond trace");
        PartiteHypergraph::from_edges(vec![self.n; self.k], self.edge_order[..m].iter().cloned())
            .expect("trace edges are distinct")
    }
}

pub fn md_process(n: usize, k: usize, d: usize, seed: u64) -> Result<MdTrace, HypergraphError> {
    let total = balanced_total(n, k)?;
    let max_degree = total / n as u64;
    if d as u64 > max_degree {
        return Err(HypergraphError::Parameter(format!("d = {d} exceeds the maximum degree n^(k-1) = {max_degree}")));
    }
    let g = PartiteHypergraph::new(vec![n; k])?;
    let mut rng = rng::seeded(seed);
    let mut shuffle = SparseShuffle::new(total);
    let mut deg = vec![0usize; n * k];
    let mut below = if d == 0 { 0 } else { n * k };
    let mut order = Vec::new();
    while below > 0 {
        let e = g.unrank_edge(shuffle.next(&mut rng).expect("degree bound reachable"));
        for (part, &i) in e.0.iter().enumerate() {
            let v = part * n + i;
            deg[v] += 1;
            if deg[v] == d {
                below -= 1;
            }
        }
        order.push(e);
    }
    let m_d = order.len();
    Ok(MdTrace { n, k, d, edge_order: order, m_d })
}

/// Random k-partite d-tree: the complete `K^k_d` followed by random
/// degree-d extensions until part sizes reach `n_target`.
pub fn random_dtree(k: usize, d: usize, n_target: &[usize], seed: u64) -> Result<PartiteHypergraph, HypergraphError> {
    if n_target.len() != k {
        return Err(HypergraphError::Parameter(format!("{} target sizes for k = {k}", n_target.len())));
    }
    if d == 0 || n_target.iter().any(|&n| n < d) {
        return Err(HypergraphError::Parameter(format!("targets {n_target:?} must all be >= d = {d} >= 1")));
    }
    let mut g = PartiteHypergraph::complete(vec![d; k])?;
    let mut rng = rng::seeded(seed);
    loop {
        let open: Vec<usize> = (0..k).filter(|&j| g.part_sizes[j] < n_target[j]).collect();
        if open.is_empty() {
            return Ok(g);
        }
        let part = open[rng.random_range(0..open.len())];
        let others: Vec<usize> = (0..k).filter(|&j| j != part).map(|j| g.part_sizes[j]).collect();
        let space: usize = others.iter().product();
        let attachments: Vec<Vec<usize>> = index::sample(&mut rng, space, d)
            .into_iter()
            .map(|mut r| {
                let mut a = vec![0; others.len()];
                for (slot, &n) in a.iter_mut().zip(&others).rev() {
                    *slot = r % n;
                    r /= n;
                }
                a
            })
            .collect();
        g = g.degree_d_extension(part, &attachments)?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Vertices 1..6 of the worked five-edge example, as (part, index).
    pub(crate) fn gex() -> PartiteHypergraph {
        PartiteHypergraph::from_edges(
            vec![2, 2, 2],
            [[0, 0, 0], [0, 0, 1], [0, 1, 1], [1, 0, 1], [1, 1, 0]].map(|e| e.to_vec()),
        )
        .unwrap()
    }

    #[test]
    fn incidence_of_example() {
        let i = gex().incidence_matrix();
        let expected = Matrix::from_i64_rows(
            Integers,
            &[
                vec![1, 1, 1, 0, 0],
                vec![0, 0, 0, 1, 1],
                vec![1, 1, 0, 1, 0],
                vec![0, 0, 1, 0, 1],
                vec![1, 0, 0, 0, 1],
                vec![0, 1, 1, 1, 0],
            ],
        );
        assert_eq!(i, expected);
        let empty = PartiteHypergraph::new(vec![2, 2, 2]).unwrap().incidence_matrix();
        assert_eq!((empty.rows(), empty.cols()), (6, 0));
        let single = PartiteHypergraph::from_edges(vec![1, 1, 1], [vec![0, 0, 0]]).unwrap();
        assert_eq!(single.incidence_matrix(), Matrix::from_i64_rows(Integers, &[vec![1], vec![1], vec![1]]));
    }

    #[test]
    fn degrees() {
        assert_eq!(gex().degrees(), vec![3, 2, 3, 2, 2, 3]);
        assert_eq!(gex().min_degree(), 2);
        assert_eq!(PartiteHypergraph::complete(vec![2, 2, 2]).unwrap().min_degree(), 4);
        assert_eq!(PartiteHypergraph::new(vec![2, 3]).unwrap().min_degree(), 0);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            PartiteHypergraph::from_edges(vec![2, 2], [vec![0, 0], vec![0, 0]]),
            Err(HypergraphError::Duplicate(_))
        ));
        assert!(matches!(
            PartiteHypergraph::from_edges(vec![2, 2], [vec![0, 2]]),
            Err(HypergraphError::OutOfRange(..))
        ));
        assert!(matches!(PartiteHypergraph::from_edges(vec![2, 2], [vec![0]]), Err(HypergraphError::Arity(..))));
        assert!(matches!(PartiteHypergraph::new(vec![3]), Err(HypergraphError::TooFewParts(1))));
        assert!(matches!(PartiteHypergraph::new(vec![3, 0]), Err(HypergraphError::EmptyPart(1))));
    }

    #[test]
    fn flat_vertex_order() {
        let g = PartiteHypergraph::new(vec![2, 3, 1]).unwrap();
        assert_eq!(g.flat(VertexId::new(1, 2)), 4);
        assert_eq!(g.vertex(5), VertexId::new(2, 0));
        for f in 0..6 {
            assert_eq!(g.flat(g.vertex(f)), f);
        }
        for r in 0..6 {
            assert_eq!(g.rank_edge(&g.unrank_edge(r)), r);
        }
    }

    #[test]
    fn degree_one_extension_of_single_edge() {
        let g = PartiteHypergraph::complete(vec![1, 1, 1]).unwrap();
        let h = g.degree_d_extension(0, &[vec![0, 0]]).unwrap();
        assert_eq!(h.part_sizes(), &[2, 1, 1]);
        assert_eq!(h.edges(), &[Edge(vec![0, 0, 0]), Edge(vec![1, 0, 0])]);
        assert!(matches!(
            g.degree_d_extension(0, &[vec![0, 0], vec![0, 0]]),
            Err(HypergraphError::DuplicateAttachment(_))
        ));
        assert!(matches!(g.degree_d_extension(0, &[vec![0, 1]]), Err(HypergraphError::AttachmentOutOfRange(_))));
    }

    #[test]
    fn two_partite_three_tree() {
        // K^2_3 on {1,2,3} ∪ {4,5,6}, then 7, 8, 9 by degree-3 extensions
        let mut g = PartiteHypergraph::complete(vec![3, 3]).unwrap();
        g = g.degree_d_extension(0, &[vec![0], vec![1], vec![2]]).unwrap();
        g = g.degree_d_extension(1, &[vec![0], vec![1], vec![3]]).unwrap();
        g = g.degree_d_extension(0, &[vec![1], vec![2], vec![3]]).unwrap();
        assert_eq!(g.num_vertices(), 9);
        assert_eq!(g.num_edges(), 9 + 3 * 3);
        assert!(g.min_degree() >= 3);
    }

    #[test]
    fn d_extendable() {
        let g = gex();
        assert_eq!(g.find_d_extendable(&[], 1), None);
        let v2 = VertexId::new(0, 1);
        assert_eq!(g.find_d_extendable(&[v2], 2), Some(v2));
        assert_eq!(g.find_d_extendable(&[v2], 3), None);
        let k = PartiteHypergraph::complete(vec![2, 2, 2]).unwrap();
        let v = VertexId::new(1, 0);
        assert_eq!(k.find_d_extendable(&[v], 1), Some(v));
        // vertex 3 is the only vertex of B on edge {2,3,6}
        let b = [VertexId::new(0, 0), VertexId::new(1, 0), VertexId::new(1, 1)];
        assert_eq!(g.find_d_extendable(&b, 1), Some(VertexId::new(1, 0)));
        assert_eq!(g.find_d_extendable(&b, 2), None);
    }

    #[test]
    fn serialisation_formats() {
        let g = gex();
        let json = g.to_json();
        assert_eq!(json, r#"{"k":3,"parts":[2,2,2],"edges":[[0,0,0],[0,0,1],[0,1,1],[1,0,1],[1,1,0]]}"#);
        assert_eq!(PartiteHypergraph::parse(&json).unwrap(), g);
        let text = g.to_text();
        assert_eq!(text, "3 2 2 2\n0 0 0\n0 0 1\n0 1 1\n1 0 1\n1 1 0\n");
        assert_eq!(PartiteHypergraph::parse(&text).unwrap().to_text(), text);
        assert!(PartiteHypergraph::from_text("3 2 2\n").is_err());
        assert!(PartiteHypergraph::from_json(r#"{"k":2,"parts":[2,2,2],"edges":[]}"#).is_err());
    }

    #[test]
    fn gnm_and_gnp_extremes() {
        let full = gnm(3, 3, 27, 1).unwrap();
        assert_eq!(full.num_edges(), 27);
        assert!(full.edges().iter().all(|e| full.contains(e)));
        assert_eq!(gnp(3, 3, 0.0, 5).unwrap().num_edges(), 0);
        assert_eq!(gnp(3, 3, 1.0, 5).unwrap().num_edges(), 27);
        assert!(gnm(2, 3, 9, 0).is_err());
        assert_eq!(gnm(4, 3, 10, 9).unwrap(), gnm(4, 3, 10, 9).unwrap());
    }

    #[test]
    fn md_process_forced_cases() {
        let t = md_process(1, 3, 1, 3).unwrap();
        assert_eq!(t.m_d, 1);
        let t = md_process(2, 3, 4, 3).unwrap();
        assert_eq!(t.m_d, 8);
        assert!(md_process(2, 3, 5, 3).is_err());
    }

    #[test]
    fn dtree_sizes() {
        assert_eq!(random_dtree(3, 1, &[1, 1, 1], 0).unwrap().num_edges(), 1);
        let t = random_dtree(3, 2, &[3, 3, 3], 0).unwrap();
        assert_eq!(t.num_edges(), 14);
        assert!(random_dtree(3, 2, &[1, 3, 3], 0).is_err());
    }
}
