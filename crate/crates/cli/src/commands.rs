use std::io::Write;
use std::path::Path;
use std::time::Instant;

use hubflow_core::builder::{build, BuildError, BuiltModel, BuildOptions};
use hubflow_core::io::{load_scenario, IoError};
use hubflow_core::lp::{solve as solve_lp, write_lp_text, write_mps, SolveStatus, SolverOptions, Solution};
use hubflow_core::model::has_fatal;
use hubflow_core::report::{audit, emit_report, extract_schedules, read_audit, read_totals, render_audit, render_totals, ReportFormat};
use hubflow_core::scenarios::{write_case_study, CASE_STUDY_STEPS};

use crate::manifest::{hash_file, sha256_hex, FileRef, Manifest, RunOptions};
use crate::SolveArgs;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_UNBOUNDED: i32 = 4;
pub const EXIT_ITERATION_LIMIT: i32 = 5;
pub const EXIT_NUMERICAL: i32 = 6;

fn io_exit(e: &IoError) -> i32 {
    match e {
        IoError::Diagnostic { .. } => EXIT_INVALID,
        _ => EXIT_INPUT,
    }
}

pub fn validate(path: &Path) -> i32 {
    let loaded = match load_scenario(path) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("hubflow: {} {e}", e.code());
            return io_exit(&e);
        }
    };
    for d in &loaded.diagnostics {
        println!("{d}");
    }
    if has_fatal(&loaded.diagnostics) {
        return EXIT_INVALID;
    }
    let s = &loaded.scenario;
    println!(
        "valid: {} hubs, {} processes, {} storages, {} steps",
        s.hubs.len(),
        s.processes.len(),
        s.storages.len(),
        s.time_grid.len()
    );
    EXIT_OK
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1000.0
}

struct Run<'a> {
    args: &'a SolveArgs,
    manifest: Manifest,
    started: Instant,
}

impl Run<'_> {
    /// Records the outcome, writes the manifest and prints the reason line.
    fn finish(mut self, status: &str, code: i32, reason: Option<String>) -> i32 {
        self.manifest.status = status.into();
        self.manifest.exit_code = code;
        self.manifest.timing.total_ms = ms(self.started);
        if let Some(r) = &reason {
            if code == EXIT_OK {
                println!("hubflow: {r}");
            } else {
                eprintln!("hubflow: {r}");
            }
        }
        self.manifest.reason = reason;
        if let Err(e) = self.manifest.write(&self.args.out) {
            eprintln!("hubflow: cannot write manifest in {}: {e}", self.args.out.display());
            return if code == EXIT_OK { EXIT_INPUT } else { code };
        }
        code
    }

    fn export(&mut self, key: &str, path: &Path, text: &str) -> Result<(), String> {
        std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        self.manifest
            .exports
            .insert(key.into(), FileRef { path: path.display().to_string(), sha256: sha256_hex(text.as_bytes()) });
        Ok(())
    }
}

fn failure_reason(sol: &Solution, model: &BuiltModel) -> String {
    match sol.status {
        SolveStatus::Infeasible => {
            let Some(inf) = &sol.infeasibility else {
                return "status=infeasible".into();
            };
            match inf.rows.first() {
                Some(&(row, amount)) => {
                    let e = model.constraints.entry(row);
                    format!(
                        "status=infeasible row={} tag={} hub={} carrier={} t={} violation={:e} total_violation={:e}",
                        model.constraints.name(row),
                        e.tag,
                        e.at.hub.as_deref().unwrap_or("-"),
                        e.at.carrier.as_deref().unwrap_or("-"),
                        e.at.t + 1,
                        amount,
                        inf.total
                    )
                }
                None => format!("status=infeasible total_violation={:e}", inf.total),
            }
        }
        SolveStatus::IterationLimit => format!("status=iteration_limit iterations={}", sol.iterations),
        other => match &sol.message {
            Some(m) => format!("status={} detail={:?}", other.as_str(), m),
            None => format!("status={}", other.as_str()),
        },
    }
}

pub fn solve(args: &SolveArgs) -> i32 {
    let mut run = Run {
        args,
        manifest: Manifest::new(),
        started: Instant::now(),
    };
    run.manifest.options = RunOptions {
        loss_orientation: args.loss_orientation.as_str().into(),
        max_iterations: args.max_iterations,
        tolerance: args.tolerance,
        seed: args.seed,
    };

    let t = Instant::now();
    if let Ok(hash) = hash_file(&args.scenario) {
        run.manifest.scenario = Some(FileRef { path: args.scenario.display().to_string(), sha256: hash });
    }
    let loaded = load_scenario(&args.scenario);
    run.manifest.timing.load_ms = ms(t);
    let loaded = match loaded {
        Ok(l) => l,
        Err(e) => {
            let code = io_exit(&e);
            return run.finish(if code == EXIT_INVALID { "invalid" } else { "unreadable" }, code, Some(format!("{} {e}", e.code())));
        }
    };
    let scenario = loaded.scenario;
    for d in &loaded.diagnostics {
        log::info!("{d}");
    }

    let t = Instant::now();
    let options = BuildOptions { loss_orientation: args.loss_orientation };
    let model = match build(&scenario, &options) {
        Ok(m) => m,
        Err(BuildError::Invalid(diags)) => {
            for d in diags.iter().filter(|d| d.is_fatal()) {
                eprintln!("{d}");
            }
            let codes: Vec<&str> = diags.iter().filter(|d| d.is_fatal()).map(|d| d.code.as_str()).collect();
            return run.finish("invalid", EXIT_INVALID, Some(format!("status=invalid codes={}", codes.join(","))));
        }
    };
    run.manifest.timing.build_ms = ms(t);
    log::info!("built {} rows, {} columns, {} nonzeros", model.lp.num_rows(), model.lp.num_cols(), model.lp.nnz());

    if let Some(path) = &args.export_mps {
        let text = write_mps(&model.lp, &model.names(), "HUBFLOW");
        let mut result = run.export("mps", path, &text.mps);
        if let (Ok(()), Some(map)) = (&result, &text.name_map) {
            let mut map_path = path.clone().into_os_string();
            map_path.push(".names");
            result = run.export("mps_names", Path::new(&map_path), map);
        }
        if let Err(e) = result {
            return run.finish("unwritable", EXIT_INPUT, Some(e));
        }
    }
    if let Some(path) = &args.export_lp {
        let text = write_lp_text(&model.lp, &model.names());
        if let Err(e) = run.export("lp", path, &text) {
            return run.finish("unwritable", EXIT_INPUT, Some(e));
        }
    }

    let t = Instant::now();
    let solver = SolverOptions {
        max_iterations: args.max_iterations,
        feasibility_tolerance: args.tolerance,
        ..SolverOptions::default()
    };
    let sol = solve_lp(&model.lp, &solver);
    run.manifest.timing.solve_ms = ms(t);
    run.manifest.iterations = Some(sol.iterations);
    log::info!("solver finished {} after {} iterations", sol.status.as_str(), sol.iterations);

    let code = match sol.status {
        SolveStatus::Optimal => EXIT_OK,
        SolveStatus::Infeasible => EXIT_INFEASIBLE,
        SolveStatus::Unbounded => EXIT_UNBOUNDED,
        SolveStatus::IterationLimit => EXIT_ITERATION_LIMIT,
        SolveStatus::NumericalBreakdown => EXIT_NUMERICAL,
    };
    if code != EXIT_OK {
        let reason = failure_reason(&sol, &model);
        return run.finish(sol.status.as_str(), code, Some(reason));
    }
    run.manifest.objective = Some(sol.objective);

    let t = Instant::now();
    let report = extract_schedules(&sol, &model, &scenario).expect("optimal solutions always report");
    let findings = audit(&report, &scenario);
    let written = emit_report(&report, &findings, ReportFormat::CsvBundle, &args.out)
        .and_then(|mut files| {
            let table = args.out.join("totals.txt");
            emit_report(&report, &findings, ReportFormat::TableText, &table)?;
            files.push("totals.txt".into());
            Ok(files)
        });
    let files = match written {
        Ok(f) => f,
        Err(e) => return run.finish("unwritable", EXIT_INPUT, Some(e.to_string())),
    };
    for f in files {
        let name = f.display().to_string();
        match hash_file(&args.out.join(&f)) {
            Ok(h) => {
                run.manifest.files.insert(name, h);
            }
            Err(e) => return run.finish("unwritable", EXIT_INPUT, Some(format!("cannot hash {name}: {e}"))),
        }
    }
    run.manifest.timing.report_ms = ms(t);

    if !findings.passed() {
        let bad: Vec<String> = findings.findings.iter().filter(|f| f.severity.as_str() == "fatal").map(|f| f.to_string()).collect();
        return run.finish("closure_failed", EXIT_NUMERICAL, Some(format!("status=closure_failed {}", bad.join("; "))));
    }
    let reason = format!("status=optimal objective={:?} iterations={}", sol.objective, sol.iterations);
    run.finish("optimal", EXIT_OK, Some(reason))
}

pub fn report(dir: &Path) -> i32 {
    let manifest = match Manifest::read(dir) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("hubflow: {e}");
            return EXIT_INPUT;
        }
    };
    if manifest.files.is_empty() {
        eprintln!("hubflow: no result bundle in {} (run ended {})", dir.display(), manifest.status);
        return EXIT_INPUT;
    }
    for (name, expected) in &manifest.files {
        match hash_file(&dir.join(name)) {
            Ok(h) if &h == expected => {}
            Ok(_) => {
                eprintln!("hubflow: checksum mismatch for {name}");
                return EXIT_INPUT;
            }
            Err(e) => {
                eprintln!("hubflow: cannot read {name}: {e}");
                return EXIT_INPUT;
            }
        }
    }
    let totals = read_totals(&dir.join("totals.csv"));
    let findings = read_audit(&dir.join("audit.csv"));
    match (totals, findings) {
        (Ok(t), Ok(a)) => {
            let mut text = format!("{}\n{}", render_totals(&t), render_audit(&a));
            if let Some(obj) = manifest.objective {
                text.push_str(&format!("objective {obj:?} EUR\n"));
            }
            // A closed pipe downstream is not an error for a read-only listing.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            EXIT_OK
        }
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("hubflow: {e}");
            EXIT_INPUT
        }
    }
}

pub fn case_study(dir: &Path, steps: usize) -> i32 {
    if steps == 0 || steps > CASE_STUDY_STEPS {
        eprintln!("hubflow: --steps must lie in 1..={CASE_STUDY_STEPS}");
        return EXIT_INPUT;
    }
    match write_case_study(dir, steps) {
        Ok(()) => {
            println!("wrote {}", dir.join("case_study.json").display());
            EXIT_OK
        }
        Err(e) => {
            eprintln!("hubflow: cannot write {}: {e}", dir.display());
            EXIT_INPUT
        }
    }
}
