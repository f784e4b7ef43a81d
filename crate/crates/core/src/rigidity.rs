//! The rigidity map of a hypergraph, its Jacobian, and local rigidity.
//!
//! A `d`-dimensional point configuration assigns `p_v ∈ F^d` to every vertex.
//! The rigidity map sends it to the observed tensor entries
//! `e ↦ Σ_j Π_{v∈e} p_{v,j}`. At a generic configuration the graph is
//! locally rigid iff the Jacobian has rank `dN − d(k−1)`; genericity is
//! emulated by uniformly random nonzero residues modulo [`LARGE_PRIME`].

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exactlinalg::{Field, Matrix, PrimeField, Rationals, Ring, RowSpan, LARGE_PRIME};
use crate::hypergraph::{Edge, PartiteHypergraph};
use crate::rng;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RigidityError {
    #[error("size guard: {0}")]
    Guard(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// `N` points in `F^d`, stored vertex-major: entry `(v, j)` is coordinate
/// `j` of the point of flat vertex `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointConfiguration<R: Ring> {
    ring: R,
    d: usize,
    values: Vec<R::Elem>,
}

impl<R: Ring> PointConfiguration<R> {
    pub fn new(ring: R, d: usize, values: Vec<R::Elem>) -> Result<Self, RigidityError> {
        if d == 0 || values.len() % d != 0 {
            return Err(RigidityError::Dimension(format!("{} values for dimension {d}", values.len())));
        }
        Ok(Self { ring, d, values })
    }

    pub fn constant(ring: R, n_vertices: usize, d: usize, value: R::Elem) -> Self {
        Self { ring, d, values: vec![value; n_vertices * d] }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn num_points(&self) -> usize {
        self.values.len() / self.d
    }

    pub fn values(&self) -> &[R::Elem] {
        &self.values
    }

    pub fn get(&self, v: usize, j: usize) -> &R::Elem {
        &self.values[v * self.d + j]
    }

    pub fn point(&self, v: usize) -> &[R::Elem] {
        &self.values[v * self.d..(v + 1) * self.d]
    }

    /// Coordinate vector `j` across all points.
    pub fn coordinate(&self, j: usize) -> Vec<R::Elem> {
        (0..self.num_points()).map(|v| self.get(v, j).clone()).collect()
    }

    fn check_for(&self, g: &PartiteHypergraph) {
        assert_eq!(self.num_points(), g.num_vertices(), "configuration sized for a different graph");
    }
}

impl PointConfiguration<PrimeField> {
    /// Uniform nonzero residues (zero draws are resampled).
    pub fn random_modular(field: PrimeField, n_vertices: usize, d: usize, rng: &mut impl Rng) -> Self {
        let values = (0..n_vertices * d).map(|_| rng.random_range(1..field.modulus())).collect();
        Self { ring: field, d, values }
    }
}

/// Magnitude bound for rational-mode sample points.
pub const RATIONAL_SAMPLE_BOUND: i64 = 1 << 20;

impl PointConfiguration<Rationals> {
    /// Random nonzero integers in `[-2^20, 2^20]`.
    pub fn random_integer(n_vertices: usize, d: usize, rng: &mut impl Rng) -> Self {
        let values = (0..n_vertices * d)
            .map(|_| loop {
                let x = rng.random_range(-RATIONAL_SAMPLE_BOUND..=RATIONAL_SAMPLE_BOUND);
                if x != 0 {
                    break BigRational::from_integer(BigInt::from(x));
                }
            })
            .collect();
        Self { ring: Rationals, d, values }
    }
}

/// `f^d_G(p)`: one value per edge, in edge order.
pub fn rigidity_map<R: Ring>(g: &PartiteHypergraph, p: &PointConfiguration<R>) -> Vec<R::Elem> {
    p.check_for(g);
    let r = &p.ring;
    g.edges()
        .iter()
        .map(|e| {
            (0..p.d).fold(r.zero(), |acc, j| {
                let prod = g.edge_vertices(e).fold(r.one(), |x, v| r.mul(&x, p.get(v, j)));
                r.add(&acc, &prod)
            })
        })
        .collect()
}

/// Jacobian row of a single edge (which need not belong to `g`; only the
/// vertex set of `g` is used). Column `(u, j)` sits at `u·d + j`.
pub fn jacobian_row<R: Ring>(g: &PartiteHypergraph, edge: &Edge, p: &PointConfiguration<R>) -> Vec<R::Elem> {
    let r = &p.ring;
    let d = p.d;
    let verts: Vec<usize> = g.edge_vertices(edge).collect();
    let mut row = vec![r.zero(); g.num_vertices() * d];
    for (a, &u) in verts.iter().enumerate() {
        for j in 0..d {
            row[u * d + j] = verts
                .iter()
                .enumerate()
                .filter(|&(b, _)| b != a)
                .fold(r.one(), |x, (_, &v)| r.mul(&x, p.get(v, j)));
        }
    }
    row
}

/// `Jf^d_G(p)`: `|E| × dN`, rows in edge order.
pub fn jacobian<R: Ring>(g: &PartiteHypergraph, p: &PointConfiguration<R>) -> Matrix<R> {
    p.check_for(g);
    let data = g.edges().iter().flat_map(|e| jacobian_row(g, e, p)).collect();
    Matrix::from_vec(p.ring.clone(), g.num_edges(), g.num_vertices() * p.d, data).expect("shape")
}

/// Applies a stabilizer: for a vertex `v` in part `i`,
/// `q_{v,j} = scales[i][j] · p_{v, perm[j]}`. When `Π_i scales[i][j] = 1`
/// for every `j`, the rigidity map is unchanged.
pub fn act_by_stabilizer<R: Ring>(
    g: &PartiteHypergraph,
    p: &PointConfiguration<R>,
    perm: &[usize],
    scales: &[Vec<R::Elem>],
) -> PointConfiguration<R> {
    p.check_for(g);
    assert_eq!(perm.len(), p.d);
    assert_eq!(scales.len(), g.k());
    let mut values = Vec::with_capacity(p.values.len());
    for v in 0..p.num_points() {
        let part = g.vertex(v).part;
        for j in 0..p.d {
            values.push(p.ring.mul(&scales[part][j], p.get(v, perm[j])));
        }
    }
    PointConfiguration { ring: p.ring.clone(), d: p.d, values }
}

/// How pseudo-generic points are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointMode {
    /// Nonzero residues modulo [`LARGE_PRIME`].
    #[default]
    Modular,
    /// Small nonzero integers, ranks computed exactly over `Q`.
    Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RigidityOptions {
    pub trials: usize,
    pub seed: u64,
    pub mode: PointMode,
}

impl Default for RigidityOptions {
    fn default() -> Self {
        Self { trials: 3, seed: 0, mode: PointMode::Modular }
    }
}

impl RigidityOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalRigidityVerdict {
    pub d: usize,
    pub rank_observed: usize,
    pub rank_required: usize,
    pub rigid: bool,
    /// Evaluations performed (stops early once the bound is attained).
    pub trials: usize,
    pub mode: PointMode,
    /// Modulus of the evaluation field in modular mode.
    pub prime: Option<u64>,
}

/// `dN − d(k−1)`, the rank of a locally rigid framework.
pub fn required_rank(g: &PartiteHypergraph, d: usize) -> usize {
    d * (g.num_vertices() + 1 - g.k())
}

/// Stream index of trial `t` for point sampling.
fn trial_stream(t: usize) -> u64 {
    t as u64
}

pub fn random_point_config(g: &PartiteHypergraph, d: usize, seed: u64, trial: usize) -> PointConfiguration<PrimeField> {
    let mut rng = rng::stream(seed, trial_stream(trial));
    PointConfiguration::random_modular(PrimeField::large(), g.num_vertices(), d, &mut rng)
}

/// Jacobian rank at one pseudo-generic configuration.
pub fn jacobian_rank_trial(g: &PartiteHypergraph, d: usize, seed: u64, trial: usize, mode: PointMode) -> usize {
    let rank = match mode {
        PointMode::Modular => jacobian(g, &random_point_config(g, d, seed, trial)).rank(),
        PointMode::Rational => {
            let mut rng = rng::stream(seed, trial_stream(trial));
            let p = PointConfiguration::random_integer(g.num_vertices(), d, &mut rng);
            jacobian(g, &p).rank()
        }
    };
    assert!(rank <= required_rank(g, d), "Jacobian rank {rank} exceeds dN - d(k-1)");
    rank
}

/// Randomized local rigidity test in dimension `d`. A `rigid` verdict is
/// certain; `not rigid` is wrong only if every trial hit a root of the
/// relevant minor.
pub fn local_rigid(g: &PartiteHypergraph, d: usize, opts: &RigidityOptions) -> LocalRigidityVerdict {
    let required = required_rank(g, d);
    let mut best = 0;
    let mut used = 0;
    for t in 0..opts.trials.max(1) {
        used += 1;
        best = best.max(jacobian_rank_trial(g, d, opts.seed, t, opts.mode));
        if best == required {
            break;
        }
    }
    LocalRigidityVerdict {
        d,
        rank_observed: best,
        rank_required: required,
        rigid: best == required,
        trials: used,
        mode: opts.mode,
        prime: (opts.mode == PointMode::Modular).then_some(LARGE_PRIME),
    }
}

/// Exact one-dimensional test: `rank_Q I_G = N − (k−1)`.
pub fn local_rigid_1d_exact(g: &PartiteHypergraph) -> bool {
    g.incidence_matrix().reduce(&Rationals).rank() == required_rank(g, 1)
}

fn span_of<F: Field>(g: &PartiteHypergraph, edges: &[Edge], p: &PointConfiguration<F>) -> RowSpan<F> {
    let mut span = RowSpan::new(p.ring.clone(), g.num_vertices() * p.d);
    for e in edges {
        span.insert(&jacobian_row(g, e, p));
    }
    span
}

/// Best (maximal-rank) trial configuration for `edges`, with its row span.
fn generic_span(
    g: &PartiteHypergraph,
    d: usize,
    edges: &[Edge],
    opts: &RigidityOptions,
) -> (PointConfiguration<PrimeField>, RowSpan<PrimeField>) {
    let mut best: Option<(PointConfiguration<PrimeField>, RowSpan<PrimeField>)> = None;
    for t in 0..opts.trials.max(1) {
        let p = random_point_config(g, d, opts.seed, t);
        let span = span_of(g, edges, &p);
        if best.as_ref().is_none_or(|(_, b)| span.rank() > b.rank()) {
            best = Some((p, span));
        }
    }
    best.expect("at least one trial")
}

/// Rank of `edges` in the generic rigidity matroid on the vertex set of `g`.
/// Always evaluated modulo [`LARGE_PRIME`].
pub fn matroid_rank(g: &PartiteHypergraph, d: usize, edges: &[Edge], opts: &RigidityOptions) -> usize {
    generic_span(g, d, edges, opts).1.rank()
}

/// All edges `e` of the complete graph on the vertex set of `g` with
/// `rank(X + e) = rank(X)`, in mixed-radix order. One configuration (the
/// best trial for `X`) is used for every membership query.
pub fn closure(g: &PartiteHypergraph, d: usize, edges: &[Edge], opts: &RigidityOptions) -> Vec<Edge> {
    let (p, span) = generic_span(g, d, edges, opts);
    (0..g.total_possible_edges())
        .map(|r| g.unrank_edge(r))
        .filter(|e| span.contains(&jacobian_row(g, e, &p)))
        .collect()
}

/// Maximum number of edges of the complete graph for which the spanning
/// d-tree search will run (`n ≤ 8` when `k = 3`).
pub const DTREE_SEARCH_MAX_EDGES: u64 = 512;

/// Greedy search for a spanning k-partite d-tree inside the closure of `g`.
///
/// Finds a complete `K^k_d` in the closure graph, then repeatedly attaches
/// an uncovered vertex having at least `d` closure edges into the covered
/// set. `None` means the greedy got stuck, which does not rule out a d-tree.
pub fn find_spanning_dtree_in_closure(
    g: &PartiteHypergraph,
    d: usize,
    opts: &RigidityOptions,
) -> Result<Option<PartiteHypergraph>, RigidityError> {
    if !g.is_balanced() {
        return Err(RigidityError::Guard("spanning d-tree search needs balanced parts".into()));
    }
    if g.total_possible_edges() > DTREE_SEARCH_MAX_EDGES {
        return Err(RigidityError::Guard(format!(
            "complete graph has {} edges, limit {DTREE_SEARCH_MAX_EDGES}",
            g.total_possible_edges()
        )));
    }
    let n = g.part_sizes()[0];
    let k = g.k();
    if d == 0 || d > n {
        return Ok(None);
    }
    let closed: HashSet<Edge> = closure(g, d, g.edges(), opts).into_iter().collect();
    Ok(greedy_dtree(n, k, d, &closed))
}

fn greedy_dtree(n: usize, k: usize, d: usize, closed: &HashSet<Edge>) -> Option<PartiteHypergraph> {
    let subsets = combinations(n, d);
    let mut seed = None;
    let mut choice = vec![0usize; k];
    'search: loop {
        let parts: Vec<&Vec<usize>> = choice.iter().map(|&c| &subsets[c]).collect();
        if product(&parts).all(|e| closed.contains(&Edge(e))) {
            seed = Some(parts.into_iter().cloned().collect::<Vec<_>>());
            break;
        }
        for slot in (0..k).rev() {
            choice[slot] += 1;
            if choice[slot] < subsets.len() {
                continue 'search;
            }
            choice[slot] = 0;
        }
        break;
    }
    let mut covered: Vec<Vec<usize>> = seed?;
    let mut tree_edges: Vec<Edge> = product(&covered.iter().collect::<Vec<_>>()).map(Edge).collect();
    while covered.iter().any(|c| c.len() < n) {
        let mut attached = false;
        for part in 0..k {
            for v in (0..n).filter(|v| !covered[part].contains(v)) {
                let mut others: Vec<&Vec<usize>> = covered.iter().collect();
                let single = vec![v];
                others[part] = &single;
                let hits: Vec<Edge> = product(&others).map(Edge).filter(|e| closed.contains(e)).take(d).collect();
                if hits.len() == d {
                    tree_edges.extend(hits);
                    covered[part].push(v);
                    attached = true;
                    break;
                }
            }
            if attached {
                break;
            }
        }
        if !attached {
            return None;
        }
    }
    Some(PartiteHypergraph::from_edges(vec![n; k], tree_edges).expect("distinct tree edges"))
}

fn combinations(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, d, &mut Vec::new(), &mut out);
    out
}

/// Cartesian product of index lists, first list most significant.
fn product<'a>(lists: &'a [&'a Vec<usize>]) -> impl Iterator<Item = Vec<usize>> + 'a {
    let total: usize = lists.iter().map(|l| l.len()).product();
    (0..total).map(move |mut r| {
        let mut out = vec![0; lists.len()];
        for (slot, l) in out.iter_mut().zip(lists).rev() {
            *slot = l[r % l.len()];
            r /= l.len();
        }
        out
    })
}
