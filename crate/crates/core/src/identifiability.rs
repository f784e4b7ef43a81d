//! Global rigidity and identifiability certificates.
//!
//! Global rigidity in dimension `d` is certified from three ingredients:
//! one-dimensional global rigidity (incidence ranks over `Q`, `GF(2)`, and
//! all primes through the Smith normal form), local rigidity one dimension
//! up, and a common-kernel condition on weighted adjacency matrices. The
//! last one comes in two flavours: cycle weights `ω ∈ ker I_G` with the plain
//! adjacency matrix `A_ω`, or stresses `ω` in the left kernel of the
//! Jacobian with the first coordinated adjacency matrix `A¹_ω`.
//!
//! All tests here are sufficient conditions. A failed condition yields
//! [`Verdict::Unknown`], never a negative, except for the two exact
//! negatives: minimum degree below `d`, and the one-dimensional real case
//! whose characterisation is exact.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlinalg::{
    serialize_bigints, smith_normal_form, stack_rank, Field, KernelSide, LinalgError, Matrix, PrimeField,
    Rationals, Ring, RowSpan, SnfResult,
};
use crate::hypergraph::{Edge, PartiteHypergraph};
use crate::rigidity::{self, jacobian, local_rigid, random_point_config, PointConfiguration, RigidityOptions};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdentifiabilityError {
    #[error("incidence rank {rank} is below N-(k-1) = {required}; no spanning base exists")]
    Deficient { rank: usize, required: usize },
    #[error("base edges are dependent or do not span")]
    BadBase,
    #[error("edge weight is not in the left kernel of the Jacobian")]
    NotInLeftKernel,
    #[error("edge weight is not in the kernel of the incidence matrix")]
    NotInCycleSpace,
    #[error("weight has {0} entries for {1} edges")]
    WeightLength(usize, usize),
    #[error("size guard: {0}")]
    Guard(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Largest graph (vertices, edges) for which the Smith normal form route is
/// taken.
pub const SNF_MAX_VERTICES: usize = 60;
pub const SNF_MAX_EDGES: usize = 300;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    /// `I_G ω = 0`.
    Cycle,
    /// `ωᵀ Jf^d_G(p) = 0`.
    Stress,
}

/// Edge weight `ω : E(G) → F`, indexed by edge position.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeWeight<R: Ring> {
    pub kind: WeightKind,
    pub values: Vec<R::Elem>,
}

impl<F: Field> EdgeWeight<F> {
    /// Checks `I_G ω = 0` over `F`.
    pub fn cycle(g: &PartiteHypergraph, field: &F, values: Vec<F::Elem>) -> Result<Self, IdentifiabilityError> {
        check_len(g, values.len())?;
        let i = g.incidence_matrix().reduce(field);
        if i.mul_vec(&values).iter().any(|x| !field.is_zero(x)) {
            return Err(IdentifiabilityError::NotInCycleSpace);
        }
        Ok(Self { kind: WeightKind::Cycle, values })
    }

    /// Checks `ωᵀ Jf^d_G(p) = 0`.
    pub fn stress(g: &PartiteHypergraph, p: &PointConfiguration<F>, values: Vec<F::Elem>) -> Result<Self, IdentifiabilityError> {
        check_len(g, values.len())?;
        if !in_left_kernel(g, p, &values) {
            return Err(IdentifiabilityError::NotInLeftKernel);
        }
        Ok(Self { kind: WeightKind::Stress, values })
    }
}

fn check_len(g: &PartiteHypergraph, len: usize) -> Result<(), IdentifiabilityError> {
    if len != g.num_edges() {
        return Err(IdentifiabilityError::WeightLength(len, g.num_edges()));
    }
    Ok(())
}

fn in_left_kernel<F: Field>(g: &PartiteHypergraph, p: &PointConfiguration<F>, w: &[F::Elem]) -> bool {
    jacobian(g, p).left_mul_vec(w).iter().all(|x| p.ring().is_zero(x))
}

/// `A_ω[i,j] = Σ_{e ⊇ {i,j}} ω(e)` off the diagonal, zero on it.
pub fn adjacency_matrix<R: Ring>(g: &PartiteHypergraph, ring: &R, weights: &[R::Elem]) -> Matrix<R> {
    assert_eq!(weights.len(), g.num_edges(), "one weight per edge");
    let n = g.num_vertices();
    let mut a = Matrix::zeros(ring.clone(), n, n);
    for (e, w) in g.edges().iter().zip(weights) {
        if ring.is_zero(w) {
            continue;
        }
        let verts: Vec<usize> = g.edge_vertices(e).collect();
        for (x, &u) in verts.iter().enumerate() {
            for &v in &verts[x + 1..] {
                let s = ring.add(&a[(u, v)], w);
                a[(u, v)] = s.clone();
                a[(v, u)] = s;
            }
        }
    }
    a
}

/// `A¹_ω[i,j] = Σ_{e ⊇ {i,j}} ω(e) Π_{v ∈ e∖{i,j}} p_{v,1}`, without checking
/// that `ω` is a stress.
pub fn coordinated_adjacency_unchecked<R: Ring>(
    g: &PartiteHypergraph,
    p: &PointConfiguration<R>,
    weights: &[R::Elem],
) -> Matrix<R> {
    assert_eq!(weights.len(), g.num_edges(), "one weight per edge");
    let ring = p.ring();
    let n = g.num_vertices();
    let mut a = Matrix::zeros(ring.clone(), n, n);
    for (e, w) in g.edges().iter().zip(weights) {
        if ring.is_zero(w) {
            continue;
        }
        let verts: Vec<usize> = g.edge_vertices(e).collect();
        for x in 0..verts.len() {
            for y in x + 1..verts.len() {
                let rest = verts
                    .iter()
                    .enumerate()
                    .filter(|&(z, _)| z != x && z != y)
                    .fold(w.clone(), |acc, (_, &v)| ring.mul(&acc, p.get(v, 0)));
                let (u, v) = (verts[x], verts[y]);
                let s = ring.add(&a[(u, v)], &rest);
                a[(u, v)] = s.clone();
                a[(v, u)] = s;
            }
        }
    }
    a
}

/// First coordinated adjacency matrix of a stress `ω`.
pub fn coordinated_adjacency_matrix<F: Field>(
    g: &PartiteHypergraph,
    p: &PointConfiguration<F>,
    weights: &[F::Elem],
) -> Result<Matrix<F>, IdentifiabilityError> {
    check_len(g, weights.len())?;
    if !in_left_kernel(g, p, weights) {
        return Err(IdentifiabilityError::NotInLeftKernel);
    }
    Ok(coordinated_adjacency_unchecked(g, p, weights))
}

/// The `k − 1` vectors `x_i` (`+1` on part 0, `−1` on part `i`) spanning
/// the trivial part of `ker I_Gᵀ`.
pub fn trivial_kernel_vectors(g: &PartiteHypergraph) -> Vec<Vec<i64>> {
    (1..g.k())
        .map(|i| {
            (0..g.num_vertices())
                .map(|v| match g.vertex(v).part {
                    0 => 1,
                    j if j == i => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect()
}

/// The `k` vectors `y_j` carrying first coordinates on part `j`; they lie in
/// the kernel of every `A¹_ω` for a stress `ω`.
pub fn first_coordinate_part_vectors<R: Ring>(g: &PartiteHypergraph, p: &PointConfiguration<R>) -> Vec<Vec<R::Elem>> {
    (0..g.k())
        .map(|j| {
            (0..g.num_vertices())
                .map(|v| if g.vertex(v).part == j { p.get(v, 0).clone() } else { p.ring().zero() })
                .collect()
        })
        .collect()
}

/// Cycle basis of `ker I_G` built from a spanning base `G_0 ⊆ G`.
///
/// Every edge `e` outside the base closes exactly one cycle weight
/// `ω_e ∈ ker I_{G_0+e}` with `ω_e(e) = 1`. Base edges get `ω_e = 0`.
#[derive(Clone, Debug)]
pub struct CanonicalCycleBasis {
    graph: PartiteHypergraph,
    base: PartiteHypergraph,
    base_positions: Vec<usize>,
}

impl CanonicalCycleBasis {
    /// `base_hint` lists edge positions of `g`; without it the base is chosen
    /// greedily in edge order.
    pub fn new(g: &PartiteHypergraph, base_hint: Option<&[usize]>) -> Result<Self, IdentifiabilityError> {
        let required = rigidity::required_rank(g, 1);
        let incidence = g.incidence_matrix().reduce(&Rationals).transpose();
        let base_positions = match base_hint {
            Some(hint) => {
                let mut span = RowSpan::new(Rationals, g.num_vertices());
                let independent = hint.iter().all(|&c| c < g.num_edges() && span.insert(incidence.row(c)));
                if !independent || span.rank() != required {
                    return Err(IdentifiabilityError::BadBase);
                }
                hint.to_vec()
            }
            None => {
                let mut span = RowSpan::new(Rationals, g.num_vertices());
                let chosen: Vec<usize> = (0..g.num_edges()).filter(|&c| span.insert(incidence.row(c))).collect();
                if chosen.len() != required {
                    return Err(IdentifiabilityError::Deficient { rank: chosen.len(), required });
                }
                chosen
            }
        };
        let base = g.edge_subgraph(&base_positions);
        Ok(Self { graph: g.clone(), base, base_positions })
    }

    pub fn base(&self) -> &PartiteHypergraph {
        &self.base
    }

    pub fn base_positions(&self) -> &[usize] {
        &self.base_positions
    }

    /// `ω_e` on the edges of `G_0 + e` (base edges in base order, then `e`).
    /// Returns `None` for base edges.
    pub fn local_weight(&self, e: &Edge) -> Option<(PartiteHypergraph, Vec<BigRational>)> {
        if self.base.contains(e) {
            return None;
        }
        let mut g0e = self.base.clone();
        g0e.insert_edge(e.clone()).expect("edge fits the vertex set");
        let kernel = g0e.incidence_matrix().reduce(&Rationals).kernel_basis(KernelSide::Right);
        assert_eq!(kernel.dim(), 1, "a spanning base plus one edge closes exactly one cycle");
        let mut w = kernel.vectors.into_iter().next().expect("one vector");
        let last = w.last().expect("nonempty").clone();
        for x in w.iter_mut() {
            *x = &*x / &last;
        }
        Some((g0e, w))
    }

    /// `ω_e` extended by zero to all edges of `G`, for `e` a non-base edge.
    pub fn weight_on_graph(&self, position: usize) -> Option<Vec<BigRational>> {
        let e = &self.graph.edges()[position];
        let (g0e, w) = self.local_weight(e)?;
        let mut out = vec![Rationals.zero(); self.graph.num_edges()];
        for (edge, x) in g0e.edges().iter().zip(w) {
            out[self.graph.edge_position(edge).expect("subgraph edge")] = x;
        }
        Some(out)
    }

    /// The basis `{ω_e : e ∈ E(G) ∖ E(G_0)}` of `ker I_G`.
    pub fn vectors(&self) -> Vec<Vec<BigRational>> {
        let base: HashSet<usize> = self.base_positions.iter().copied().collect();
        (0..self.graph.num_edges())
            .filter(|c| !base.contains(c))
            .map(|c| self.weight_on_graph(c).expect("non-base edge"))
            .collect()
    }

    /// `A_{ω_e}` as an `N × N` matrix (zero for base edges).
    pub fn adjacency_for(&self, e: &Edge) -> Matrix<Rationals> {
        match self.local_weight(e) {
            Some((g0e, w)) => adjacency_matrix(&g0e, &Rationals, &w),
            None => Matrix::zeros(Rationals, self.base.num_vertices(), self.base.num_vertices()),
        }
    }
}

/// Rank of `F` in the cycle polymatroid: `dim ⟨im A_{ω_e} : e ∈ F⟩`.
pub fn cycle_polymatroid_rank(basis: &CanonicalCycleBasis, edges: &[Edge]) -> usize {
    let mats: Vec<Matrix<Rationals>> = edges.iter().map(|e| basis.adjacency_for(e)).filter(|a| !a.is_zero()).collect();
    if mats.is_empty() {
        return 0;
    }
    stack_rank(&mats).expect("square matrices of equal size")
}

/// Evidence for a common-kernel condition: the condition holds iff
/// `stack_rank = N − k`, i.e. the common kernel has dimension exactly `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KernelConditionEvidence {
    pub holds: bool,
    /// Number of weights stacked (dimension of the weight space).
    pub weight_space_dim: usize,
    pub stack_rank: usize,
    pub target: usize,
}

impl KernelConditionEvidence {
    fn new(weight_space_dim: usize, stack_rank: usize, g: &PartiteHypergraph) -> Self {
        let target = g.num_vertices() - g.k();
        assert!(stack_rank <= target, "stack rank {stack_rank} exceeds N - k = {target}");
        Self { holds: stack_rank == target, weight_space_dim, stack_rank, target }
    }

    /// `dim ⋂ ker`, with the whole space for an empty family.
    pub fn common_kernel_dim(&self, n_vertices: usize) -> usize {
        n_vertices - self.stack_rank
    }
}

/// `dim ⋂_{ω ∈ ker I_G} ker A_ω = k`, over `Q`.
pub fn mm_condition_iii(g: &PartiteHypergraph) -> KernelConditionEvidence {
    let weights = match CanonicalCycleBasis::new(g, None) {
        Ok(basis) => basis.vectors(),
        Err(_) => g.incidence_matrix().reduce(&Rationals).kernel_basis(KernelSide::Right).vectors,
    };
    let mats: Vec<Matrix<Rationals>> = weights.iter().map(|w| adjacency_matrix(g, &Rationals, w)).collect();
    let rank = if mats.is_empty() { 0 } else { stack_rank(&mats).expect("equal sizes") };
    KernelConditionEvidence::new(weights.len(), rank, g)
}

/// `dim ⋂_{ω ∈ ker Jf^d_G(p)ᵀ} ker A¹_ω = k` at the configuration `p`.
pub fn co_condition<F: Field>(g: &PartiteHypergraph, p: &PointConfiguration<F>) -> KernelConditionEvidence {
    let field = p.ring();
    let stresses = jacobian(g, p).kernel_basis(KernelSide::Left).vectors;
    let ys = first_coordinate_part_vectors(g, p);
    let mats: Vec<Matrix<F>> = stresses
        .iter()
        .map(|w| {
            let a = coordinated_adjacency_unchecked(g, p, w);
            for y in &ys {
                assert!(
                    a.mul_vec(y).iter().all(|x| field.is_zero(x)),
                    "part vector of first coordinates escaped the kernel of a coordinated adjacency matrix"
                );
            }
            a
        })
        .collect();
    let rank = if mats.is_empty() { 0 } else { stack_rank(&mats).expect("equal sizes") };
    KernelConditionEvidence::new(stresses.len(), rank, g)
}

/// [`co_condition`] at pseudo-generic points modulo the large prime; passes
/// if any trial passes. Returns the evidence of the best trial.
pub fn co_condition_generic(g: &PartiteHypergraph, d: usize, opts: &RigidityOptions) -> (KernelConditionEvidence, usize) {
    let mut best: Option<KernelConditionEvidence> = None;
    let mut used = 0;
    for t in 0..opts.trials.max(1) {
        used += 1;
        let p = random_point_config(g, d, opts.seed ^ 0xC0C0, t);
        let ev = co_condition(g, &p);
        if best.is_none_or(|b| ev.stack_rank > b.stack_rank) {
            best = Some(ev);
        }
        if ev.holds {
            break;
        }
    }
    (best.expect("one trial"), used)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OneDimRealEvidence {
    pub holds: bool,
    pub rank_q: usize,
    pub rank_gf2: usize,
    pub required: usize,
}

/// Exact: globally rigid in `R¹` iff `rank_Q I_G = rank_GF(2) I_G = N − (k−1)`.
pub fn global_rigid_1d_real(g: &PartiteHypergraph) -> OneDimRealEvidence {
    let i = g.incidence_matrix();
    let rank_q = i.reduce(&Rationals).rank();
    let rank_gf2 = i.reduce(&PrimeField::new(2).expect("prime")).rank();
    let required = rigidity::required_rank(g, 1);
    OneDimRealEvidence { holds: rank_q == required && rank_gf2 == required, rank_q, rank_gf2, required }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OneDimComplexEvidence {
    pub holds: bool,
    pub required: usize,
    pub snf: SnfResult,
}

/// Sufficient condition for global rigidity in `C¹`: the incidence matrix
/// has rank `N − (k−1)` over `Q` and over every prime field, i.e. all its
/// elementary divisors are 1.
pub fn global_rigid_1d_complex(g: &PartiteHypergraph) -> Result<OneDimComplexEvidence, IdentifiabilityError> {
    if g.num_vertices() > SNF_MAX_VERTICES || g.num_edges() > SNF_MAX_EDGES {
        return Err(IdentifiabilityError::Guard(format!(
            "Smith normal form limited to N <= {SNF_MAX_VERTICES}, |E| <= {SNF_MAX_EDGES} (got {}, {})",
            g.num_vertices(),
            g.num_edges()
        )));
    }
    let snf = smith_normal_form(&g.incidence_matrix());
    let required = rigidity::required_rank(g, 1);
    Ok(OneDimComplexEvidence { holds: snf.rank() == required && snf.is_unimodular(), required, snf })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Real,
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    GloballyRigid,
    NotGloballyRigid,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MmConditions {
    pub i: bool,
    pub ii: bool,
    pub iii: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateEvidence {
    pub min_degree: usize,
    pub incidence_rank_q: usize,
    pub incidence_rank_gf2: usize,
    /// `None` when the graph exceeds the Smith normal form size guard.
    pub elementary_divisors_all_one: Option<bool>,
    #[serde(serialize_with = "serialize_bigints")]
    pub bad_primes: Vec<BigInt>,
    /// Jacobian rank in dimension `d + 1` (condition ii).
    pub jacobian_rank: usize,
    pub jacobian_rank_required: usize,
    /// Stack rank of the cycle-weight adjacency matrices (condition iii).
    pub stack_rank: usize,
    /// Stack rank of the stress-weighted coordinated adjacency matrices.
    pub co_stack_rank: usize,
    /// `N − k`, the target for both stack ranks.
    pub stack_target: usize,
}

/// Outcome of [`global_rigid`]. Randomized components (condition ii and the
/// stress condition) are one-sided Monte Carlo over `GF(P)`; `trials` and
/// `seed` reproduce them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalRigidityCertificate {
    pub d: usize,
    pub field: FieldKind,
    pub local_1d: bool,
    pub global_1d_real: bool,
    /// `None` when the graph exceeds the Smith normal form size guard.
    pub global_1d_complex: Option<bool>,
    pub mm: MmConditions,
    pub co: bool,
    pub verdict: Verdict,
    pub evidence: CertificateEvidence,
    pub trials: usize,
    pub seed: u64,
    /// True when the verdict rests on a Monte Carlo component (`d ≥ 2`).
    pub probabilistic: bool,
}

impl GlobalRigidityCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialisable")
    }
}

/// Combines certificate outcomes into a verdict.
///
/// `min_degree < d` is a hard negative. In dimension one the real test is a
/// characterisation, so its failure is a negative too; the complex test is
/// only sufficient. Otherwise `mm_i` together with either the cycle route
/// (`mm_ii ∧ mm_iii`) or the stress route (`co`) is required.
pub fn combine_verdict(d: usize, field: FieldKind, min_degree: usize, mm_i: bool, mm_rest: bool, co: bool) -> Verdict {
    if min_degree < d {
        Verdict::NotGloballyRigid
    } else if d == 1 {
        match (field, mm_i) {
            (_, true) => Verdict::GloballyRigid,
            (FieldKind::Real, false) => Verdict::NotGloballyRigid,
            (FieldKind::Complex, false) => Verdict::Unknown,
        }
    } else if mm_i && (mm_rest || co) {
        Verdict::GloballyRigid
    } else {
        Verdict::Unknown
    }
}

/// Evaluates every certificate for global rigidity of `g` in `F^d`.
pub fn global_rigid(
    g: &PartiteHypergraph,
    d: usize,
    field: FieldKind,
    opts: &RigidityOptions,
) -> Result<GlobalRigidityCertificate, IdentifiabilityError> {
    assert!(d >= 1, "dimension must be positive");
    let min_degree = g.min_degree();
    let real = global_rigid_1d_real(g);
    let complex = match global_rigid_1d_complex(g) {
        Ok(ev) => Some(ev),
        Err(e) if field == FieldKind::Complex => return Err(e),
        Err(_) => None,
    };
    let mm_i = match field {
        FieldKind::Real => real.holds,
        FieldKind::Complex => complex.as_ref().is_some_and(|c| c.holds),
    };
    let up = local_rigid(g, d + 1, opts);
    let iii = mm_condition_iii(g);
    let (co, _) = co_condition_generic(g, d, opts);
    let mm = MmConditions { i: mm_i, ii: up.rigid, iii: iii.holds };

    let verdict = combine_verdict(d, field, min_degree, mm_i, mm.ii && mm.iii, co.holds);

    Ok(GlobalRigidityCertificate {
        d,
        field,
        local_1d: real.rank_q == real.required,
        global_1d_real: real.holds,
        global_1d_complex: complex.as_ref().map(|c| c.holds),
        mm,
        co: co.holds,
        verdict,
        evidence: CertificateEvidence {
            min_degree,
            incidence_rank_q: real.rank_q,
            incidence_rank_gf2: real.rank_gf2,
            elementary_divisors_all_one: complex.as_ref().map(|c| c.snf.is_unimodular()),
            bad_primes: complex.map(|c| c.snf.bad_primes).unwrap_or_default(),
            jacobian_rank: up.rank_observed,
            jacobian_rank_required: up.rank_required,
            stack_rank: iii.stack_rank,
            co_stack_rank: co.stack_rank,
            stack_target: iii.target,
        },
        trials: opts.trials,
        seed: opts.seed,
        probabilistic: d >= 2 && verdict != Verdict::NotGloballyRigid,
    })
}
