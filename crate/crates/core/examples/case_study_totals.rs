//! Solves the bundled case study and prints its totals and audit.
//!
//! cargo run --release -p hubflow-core --example case_study_totals -- 24

use std::time::Instant;

use hubflow_core::builder::{build, BuildOptions};
use hubflow_core::lp::{solve, SolveStatus, SolverOptions};
use hubflow_core::report::{audit, extract_schedules, render_audit, render_totals};
use hubflow_core::scenarios::{case_study, CASE_STUDY_STEPS};

fn main() {
    let steps = match std::env::args().nth(1) {
        Some(s) => s.parse().expect("steps must be a positive integer"),
        None => CASE_STUDY_STEPS,
    };
    let scenario = case_study(steps);
    let model = build(&scenario, &BuildOptions::default()).expect("the case study builds");
    let started = Instant::now();
    let solution = solve(&model.lp, &SolverOptions::default());
    println!(
        "{} after {} iterations in {:.2} s, objective {:.2} EUR",
        solution.status.as_str(),
        solution.iterations,
        started.elapsed().as_secs_f64(),
        solution.objective
    );
    if solution.status != SolveStatus::Optimal {
        std::process::exit(1);
    }
    let report = extract_schedules(&solution, &model, &scenario).expect("optimal solutions report");
    let findings = audit(&report, &scenario);
    print!("{}\n{}", render_totals(&report.totals), render_audit(&findings));
}
