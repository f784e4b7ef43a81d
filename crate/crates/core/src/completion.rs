//! Numerical completion oracle.
//!
//! Hides a random real configuration `p*`, reveals the masked tensor entries
//! `f^d_G(p*)`, and searches for every configuration that reproduces them by
//! multi-start Levenberg–Marquardt. Solutions are grouped by their *full*
//! tensor: congruent configurations always give the same tensor, so a
//! globally rigid mask must yield exactly one class. The oracle is a
//! falsifier, not a prover — missing a second class is always possible.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::exactlinalg::Reals;
use crate::hypergraph::{Edge, PartiteHypergraph};
use crate::identifiability::{global_rigid, FieldKind, IdentifiabilityError, Verdict};
use crate::rigidity::{jacobian, rigidity_map, PointConfiguration, RigidityOptions};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolverConfig {
    pub starts: usize,
    /// Relative residual `‖f(q) − T‖ / ‖T‖` below which a run counts as converged.
    pub eps_res: f64,
    /// Relative full-tensor distance below which two solutions are identified.
    pub eps_cong: f64,
    /// Starting points are uniform in `[−init_box, init_box]` per coordinate.
    pub init_box: f64,
    pub max_iters: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { starts: 50, eps_res: 1e-9, eps_cong: 1e-6, init_box: 2.0, max_iters: 400 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompletionProblem {
    pub graph: PartiteHypergraph,
    pub d: usize,
    pub observed: Vec<f64>,
    /// The configuration that generated `observed`; for evaluation only.
    pub hidden: Vec<f64>,
}

/// Hidden entries are uniform on `[0.5, 1.5] ∪ [−1.5, −0.5]`.
pub fn make_problem(g: &PartiteHypergraph, d: usize, seed: u64) -> CompletionProblem {
    assert!(d >= 1, "dimension must be positive");
    let mut r = rng::seeded(seed);
    let hidden: Vec<f64> = (0..g.num_vertices() * d)
        .map(|_| {
            let mag = r.random_range(0.5..=1.5);
            if r.random_bool(0.5) { mag } else { -mag }
        })
        .collect();
    let p = config(d, hidden.clone());
    CompletionProblem { graph: g.clone(), d, observed: rigidity_map(g, &p), hidden }
}

fn config(d: usize, values: Vec<f64>) -> PointConfiguration<Reals> {
    PointConfiguration::new(Reals, d, values).expect("length is a multiple of d")
}

impl CompletionProblem {
    pub fn residual(&self, q: &[f64]) -> Vec<f64> {
        rigidity_map(&self.graph, &config(self.d, q.to_vec()))
            .iter()
            .zip(&self.observed)
            .map(|(a, b)| a - b)
            .collect()
    }

    /// `‖f(q) − T‖ / ‖T‖` (absolute when nothing is observed or `T = 0`).
    pub fn relative_residual(&self, q: &[f64]) -> f64 {
        let scale = norm(&self.observed);
        let r = norm(&self.residual(q));
        if scale > 0.0 { r / scale } else { r }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialisable")
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// All `n_1 ⋯ n_k` entries of `σ^d(q)`, in mixed-radix order.
pub fn full_tensor(g: &PartiteHypergraph, d: usize, q: &[f64]) -> Vec<f64> {
    let total = usize::try_from(g.total_possible_edges()).expect("tensor fits in memory");
    let complete = PartiteHypergraph::new(g.part_sizes().to_vec()).expect("valid parts");
    let p = config(d, q.to_vec());
    (0..total as u64)
        .map(|i| {
            let e: Edge = complete.unrank_edge(i);
            (0..d)
                .map(|j| complete.edge_vertices(&e).map(|v| *p.get(v, j)).product::<f64>())
                .sum()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunResult {
    pub converged: bool,
    pub relative_residual: f64,
    pub iterations: usize,
    pub solution: Vec<f64>,
}

/// Levenberg–Marquardt with Nielsen's damping update from `init`.
pub fn solve_from(prob: &CompletionProblem, init: &[f64], cfg: &SolverConfig) -> RunResult {
    let n = init.len();
    let target = cfg.eps_res * 1e-3;
    let mut x = DVector::from_column_slice(init);
    let mut r = DVector::from_vec(prob.residual(x.as_slice()));
    let mut cost = r.norm_squared();
    let mut lambda = -1.0;
    let mut nu = 2.0;
    let mut iterations = 0;
    while iterations < cfg.max_iters && prob.relative_residual(x.as_slice()) > target {
        iterations += 1;
        let j = real_jacobian(prob, x.as_slice());
        let jtj = j.transpose() * &j;
        let g = j.transpose() * &r;
        if lambda < 0.0 {
            lambda = 1e-3 * jtj.diagonal().max().max(1e-12);
        }
        let a = &jtj + DMatrix::identity(n, n) * lambda;
        let Some(step) = a.cholesky().map(|c| c.solve(&g)) else {
            lambda *= nu;
            nu *= 2.0;
            continue;
        };
        let candidate = &x - &step;
        let r_new = DVector::from_vec(prob.residual(candidate.as_slice()));
        let cost_new = r_new.norm_squared();
        let predicted = step.dot(&(lambda * &step + &g));
        let rho = if predicted > 0.0 { (cost - cost_new) / predicted } else { -1.0 };
        if rho > 0.0 {
            x = candidate;
            r = r_new;
            cost = cost_new;
            lambda *= (1.0f64 / 3.0).max(1.0 - (2.0 * rho - 1.0).powi(3));
            nu = 2.0;
        } else {
            lambda *= nu;
            nu *= 2.0;
        }
        if step.norm() <= 1e-15 * (x.norm() + 1e-15) || !lambda.is_finite() || lambda > 1e30 {
            break;
        }
    }
    let relative_residual = prob.relative_residual(x.as_slice());
    RunResult {
        converged: relative_residual < cfg.eps_res,
        relative_residual,
        iterations,
        solution: x.as_slice().to_vec(),
    }
}

fn real_jacobian(prob: &CompletionProblem, q: &[f64]) -> DMatrix<f64> {
    let j = jacobian(&prob.graph, &config(prob.d, q.to_vec()));
    DMatrix::from_row_slice(j.rows(), j.cols(), j.entries())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveOutcome {
    pub starts: usize,
    pub converged: usize,
    pub nonconverged: usize,
    pub distinct_tensor_classes: usize,
    pub class_sizes: Vec<usize>,
    pub best_relative_residual: f64,
    #[serde(skip)]
    pub solutions: Vec<Vec<f64>>,
}

impl SolveOutcome {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialisable")
    }
}

/// Runs `cfg.starts` descents from random points, in parallel.
pub fn multistart_solve(prob: &CompletionProblem, cfg: &SolverConfig, seed: u64) -> SolveOutcome {
    assert!(cfg.starts >= 1, "at least one start");
    let runs: Vec<RunResult> = (0..cfg.starts)
        .into_par_iter()
        .map(|s| {
            let mut r = rng::stream(seed, s as u64);
            let init: Vec<f64> =
                (0..prob.hidden.len()).map(|_| r.random_range(-cfg.init_box..=cfg.init_box)).collect();
            solve_from(prob, &init, cfg)
        })
        .collect();
    summarise(prob, cfg, runs)
}

/// Groups converged runs into tensor classes.
pub fn summarise(prob: &CompletionProblem, cfg: &SolverConfig, runs: Vec<RunResult>) -> SolveOutcome {
    let starts = runs.len();
    let best = runs.iter().map(|r| r.relative_residual).fold(f64::INFINITY, f64::min);
    let solutions: Vec<Vec<f64>> = runs.into_iter().filter(|r| r.converged).map(|r| r.solution).collect();
    let tensors: Vec<Vec<f64>> = solutions.iter().map(|q| full_tensor(&prob.graph, prob.d, q)).collect();
    let class_sizes = cluster(tensors, cfg.eps_cong);
    SolveOutcome {
        starts,
        converged: solutions.len(),
        nonconverged: starts - solutions.len(),
        distinct_tensor_classes: class_sizes.len(),
        class_sizes,
        best_relative_residual: best,
        solutions,
    }
}

/// Sequential clustering over lexicographically sorted fingerprints, so the
/// result does not depend on the order the runs finished in.
fn cluster(mut tensors: Vec<Vec<f64>>, eps: f64) -> Vec<usize> {
    tensors.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    let mut reps: Vec<(Vec<f64>, usize)> = Vec::new();
    for t in tensors {
        let hit = reps.iter_mut().find(|(rep, _)| {
            let dist = norm(&rep.iter().zip(&t).map(|(a, b)| a - b).collect::<Vec<_>>());
            dist <= eps * norm(rep).max(1.0)
        });
        match hit {
            Some((_, size)) => *size += 1,
            None => reps.push((t, 1)),
        }
    }
    reps.into_iter().map(|(_, s)| s).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrosscheckTrial {
    pub seed: u64,
    pub converged: usize,
    pub distinct_tensor_classes: usize,
    /// `None` when the certificate makes no prediction (verdict unknown).
    pub agrees: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrosscheckReport {
    pub d: usize,
    pub verdict: Verdict,
    pub trials: Vec<CrosscheckTrial>,
    pub agreements: usize,
    pub disagreements: usize,
    /// Disagreements in the direction "globally rigid ⇒ one class", which
    /// would falsify a certificate.
    pub soundness_violations: usize,
}

impl CrosscheckReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialisable")
    }
}

/// Compares the real global-rigidity certificate of `g` with numerical
/// completion on `trials` random problems.
pub fn crosscheck(
    g: &PartiteHypergraph,
    d: usize,
    trials: usize,
    cfg: &SolverConfig,
    seed: u64,
) -> Result<CrosscheckReport, IdentifiabilityError> {
    let verdict = global_rigid(g, d, FieldKind::Real, &RigidityOptions::with_seed(seed))?.verdict;
    let trials: Vec<CrosscheckTrial> = (0..trials as u64)
        .map(|t| {
            let s = rng::derive_seed(seed, t);
            let prob = make_problem(g, d, s);
            let out = multistart_solve(&prob, cfg, s);
            let classes = out.distinct_tensor_classes;
            let agrees = match verdict {
                Verdict::GloballyRigid => Some(classes == 1),
                Verdict::NotGloballyRigid => Some(classes > 1),
                Verdict::Unknown => None,
            };
            CrosscheckTrial { seed: s, converged: out.converged, distinct_tensor_classes: classes, agrees }
        })
        .collect();
    let agreements = trials.iter().filter(|t| t.agrees == Some(true)).count();
    let disagreements = trials.iter().filter(|t| t.agrees == Some(false)).count();
    let soundness_violations = if verdict == Verdict::GloballyRigid { disagreements } else { 0 };
    Ok(CrosscheckReport { d, verdict, trials, agreements, disagreements, soundness_violations })
}
