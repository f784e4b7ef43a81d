//! Rigidity and identifiability certificates for low-rank tensor completion.
//!
//! A partially observed `n_1 × ... × n_k` tensor is encoded as a k-partite
//! k-uniform hypergraph whose hyperedges are the observed entries. This crate
//! decides whether a generic rank-`d` completion of such a mask is locally
//! unique (local rigidity), globally unique (global rigidity), and runs the
//! random-sampling experiments that probe the threshold behaviour of these
//! properties.
//!
//! Module map:
//!
//! * [`hypergraph`]: partite hypergraphs, incidence matrices, d-trees and
//!   the random models `G(n,p)`, `G(n,m)` and the minimum-degree process.
//! * [`exactlinalg`]: exact rank, kernels and Smith normal form over the
//!   integers, the rationals and prime fields.
//! * [`rigidity`]: the rigidity map, its Jacobian, local rigidity and the
//!   generic rigidity matroid.
//! * [`identifiability`]: one-dimensional global rigidity, weighted
//!   adjacency matrices and the composite global rigidity certificate.
//! * [`completion`]: a floating-point multi-start least-squares oracle that
//!   cross-checks certificates numerically.
//! * [`experiments`]: Monte Carlo sweeps and CSV output.

pub mod completion;
pub mod exactlinalg;
pub mod experiments;
pub mod hypergraph;
pub mod identifiability;
pub mod rigidity;
pub mod rng;

pub use exactlinalg::{
    stack_rank, Field, Integers, KernelBasis, KernelSide, LinalgError, Matrix, PrimeField,
    Rationals, Reals, Ring, SnfResult, LARGE_PRIME,
};
pub use hypergraph::{Edge, HypergraphError, MdTrace, PartiteHypergraph, VertexId};
pub use identifiability::{
    CanonicalCycleBasis, FieldKind, GlobalRigidityCertificate, IdentifiabilityError, Verdict,
};
pub use rigidity::{LocalRigidityVerdict, PointConfiguration, PointMode, RigidityOptions};
pub use completion::{CompletionProblem, SolveOutcome, SolverConfig};
pub use experiments::{Certificate, ExperimentError, ExperimentRecord, Grid, SweepConfig};
