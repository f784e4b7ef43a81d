#![allow(dead_code)]

use rand::Rng;
use tensor_rigidity::hypergraph::{gnm, random_dtree};
use tensor_rigidity::PartiteHypergraph;

/// The five-edge graph on parts of size two: vertices 1,2 | 3,4 | 5,6 and
/// edges 135, 136, 146, 236, 245.
pub fn gex() -> PartiteHypergraph {
    PartiteHypergraph::from_edges(
        vec![2, 2, 2],
        [[0, 0, 0], [0, 0, 1], [0, 1, 1], [1, 0, 1], [1, 1, 0]].map(|e| e.to_vec()),
    )
    .unwrap()
}

/// `K^k_(2,2,1,...,1)`: four edges e11, e12, e21, e22.
pub fn grid(k: usize) -> PartiteHypergraph {
    let mut parts = vec![2, 2];
    parts.resize(k, 1);
    let e = |a: usize, b: usize| {
        let mut v = vec![a, b];
        v.resize(k, 0);
        v
    };
    PartiteHypergraph::from_edges(parts, [e(0, 0), e(0, 1), e(1, 0), e(1, 1)]).unwrap()
}

/// Uniform `G(n, m)` on `K^3_n` with `m` uniform in `0..=n^3`.
pub fn random_subgraph(n: usize, rng: &mut impl Rng) -> PartiteHypergraph {
    let total = (n * n * n) as u64;
    gnm(n, 3, rng.random_range(0..=total), rng.random()).unwrap()
}

/// Random d-tree with `k` parts and at most `max_n` vertices.
pub fn random_tree(k: usize, d: usize, max_n: usize, rng: &mut impl Rng) -> PartiteHypergraph {
    assert!(k * d <= max_n);
    let mut sizes = vec![d; k];
    let extra = rng.random_range(0..=max_n - k * d);
    for _ in 0..extra {
        sizes[rng.random_range(0..k)] += 1;
    }
    random_dtree(k, d, &sizes, rng.random()).unwrap()
}
