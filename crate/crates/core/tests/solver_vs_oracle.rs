mod common;

use common::random_lp::random_lp;
use hubflow_core::lp::{oracle_enumerate, solve, SolveStatus, SolverOptions};

#[test]
fn random_programs_agree_with_vertex_enumeration() {
    let opts = SolverOptions::default();
    let mut seen = [0usize; 3];
    for k in 0..300 {
        let lp = random_lp(11, k);
        let reference = oracle_enumerate(&lp).unwrap();
        let got = solve(&lp, &opts);
        assert_eq!(got.status, reference.status, "instance {k}: {lp:?}");
        match got.status {
            SolveStatus::Optimal => {
                seen[0] += 1;
                assert!(
                    (got.objective - reference.objective).abs() <= 1e-8,
                    "instance {k}: simplex {} vs oracle {}",
                    got.objective,
                    reference.objective
                );
                assert!(got.max_bound_violation <= 1e-9);
            }
            SolveStatus::Infeasible => seen[1] += 1,
            SolveStatus::Unbounded => seen[2] += 1,
            other => panic!("instance {k}: unexpected {other:?}"),
        }
    }
    // the stream must exercise every outcome
    assert!(seen.iter().all(|&c| c > 0), "{seen:?}");
}

#[test]
fn repeated_solves_are_identical() {
    let opts = SolverOptions::default();
    for k in 0..50 {
        let lp = random_lp(5, k);
        let a = solve(&lp, &opts);
        let b = solve(&lp, &opts);
        assert_eq!(a.status, b.status);
        assert_eq!(a.iterations, b.iterations);
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
        assert_eq!(a.values, b.values);
    }
}
