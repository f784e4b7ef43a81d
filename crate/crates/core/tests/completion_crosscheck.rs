mod common;

use tensor_rigidity::completion::{crosscheck, make_problem, multistart_solve, SolverConfig};
use tensor_rigidity::{PartiteHypergraph, Verdict};

use common::gex;

#[test]
fn certified_mask_agrees_with_oracle() {
    let cfg = SolverConfig { starts: 30, ..Default::default() };
    let report = crosscheck(&gex(), 1, 5, &cfg, 3).unwrap();
    assert_eq!(report.verdict, Verdict::GloballyRigid);
    assert_eq!(report.soundness_violations, 0);
    assert_eq!(report.agreements, 5);
    let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(v["verdict"], "globally_rigid");
}

#[test]
fn deficient_mask_has_many_completions() {
    // |E| = 3 < N - (k-1) = 4
    let g = PartiteHypergraph::from_edges(vec![2, 2, 2], [vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
    let report = crosscheck(&g, 1, 3, &SolverConfig { starts: 20, ..Default::default() }, 5).unwrap();
    assert_eq!(report.verdict, Verdict::NotGloballyRigid);
    assert!(report.trials.iter().all(|t| t.distinct_tensor_classes > 1));
}

#[test]
fn full_observation_is_unique() {
    let k = PartiteHypergraph::complete(vec![2, 2, 2]).unwrap();
    let p = make_problem(&k, 2, 12);
    let out = multistart_solve(&p, &SolverConfig::default(), 12);
    assert!(out.converged > 0);
    assert_eq!(out.distinct_tensor_classes, 1);
    assert_eq!(out.converged + out.nonconverged, 50);
}
