//! Python module `hubflow`: scenarios, LP assembly, solving and reports.

use std::path::{Path, PathBuf};

use pyo3::exceptions::{PyIOError, PyKeyError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use hubflow_core::builder::{self, BuildError, BuildOptions, BuiltModel, LossOrientation, VarKind};
use hubflow_core::io::{self, IoError};
use hubflow_core::lp::{self, SolveStatus, SolverOptions};
use hubflow_core::model::{self as core_model, has_fatal};
use hubflow_core::report::{self, AuditReport, ReportFormat, ScheduleReport};
use hubflow_core::scenarios;

fn io_err(e: IoError) -> PyErr {
    match e {
        IoError::Diagnostic { .. } => PyValueError::new_err(format!("{} {e}", e.code())),
        _ => PyIOError::new_err(format!("{} {e}", e.code())),
    }
}

fn orientation(s: &str) -> PyResult<LossOrientation> {
    s.parse().map_err(|e: String| PyValueError::new_err(e))
}

/// A validated scenario: hubs, processes, storages, ports and networks
/// over a time grid.
#[pyclass(module = "hubflow", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Scenario {
    inner: core_model::Scenario,
    diagnostics: Vec<String>,
}

impl Scenario {
    fn wrap(inner: core_model::Scenario) -> Self {
        let diagnostics = core_model::validate(&inner).iter().map(|d| d.to_string()).collect();
        Scenario { inner, diagnostics }
    }
}

#[pymethods]
impl Scenario {
    /// Loads a scenario document and the series files it references.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        let loaded = io::load_scenario(&path).map_err(io_err)?;
        let diagnostics = loaded.diagnostics.iter().map(|d| d.to_string()).collect();
        Ok(Scenario { inner: loaded.scenario, diagnostics })
    }

    /// Parses a scenario document; relative series paths resolve against `base`.
    #[staticmethod]
    #[pyo3(signature = (text, base = None))]
    fn from_json(text: &str, base: Option<PathBuf>) -> PyResult<Self> {
        let base = base.unwrap_or_else(|| PathBuf::from("."));
        let loaded = io::parse_scenario(text, &base, "<python>").map_err(io_err)?;
        let diagnostics = loaded.diagnostics.iter().map(|d| d.to_string()).collect();
        Ok(Scenario { inner: loaded.scenario, diagnostics })
    }

    /// One hub, one gas boiler (efficiency 0.9), gas at 10 EUR/kWh, 9 kW heat load.
    #[staticmethod]
    #[pyo3(signature = (steps = 1))]
    fn toy_boiler(steps: usize) -> Self {
        Scenario::wrap(scenarios::toy_boiler(steps))
    }

    /// Two hubs joined by an electricity network with the given loss fraction.
    #[staticmethod]
    #[pyo3(signature = (steps = 1, loss = 0.05))]
    fn network_pair(steps: usize, loss: f64) -> Self {
        Scenario::wrap(scenarios::network_pair(steps, loss))
    }

    /// The bundled three-hub case study, truncated to `steps` hours.
    #[staticmethod]
    #[pyo3(signature = (steps = scenarios::CASE_STUDY_STEPS))]
    fn case_study(steps: usize) -> PyResult<Self> {
        if steps == 0 || steps > scenarios::CASE_STUDY_STEPS {
            return Err(PyValueError::new_err(format!("steps must lie in 1..={}", scenarios::CASE_STUDY_STEPS)));
        }
        Ok(Scenario::wrap(scenarios::case_study(steps)))
    }

    fn to_json(&self) -> String {
        io::scenario_to_json(&self.inner)
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        io::save_scenario(&self.inner, &path).map_err(io_err)
    }

    fn with_scaled_prices(&self, factor: f64) -> Self {
        Scenario::wrap(self.inner.with_scaled_prices(factor))
    }

    fn with_scaled_loads(&self, factor: f64) -> Self {
        Scenario::wrap(self.inner.with_scaled_loads(factor))
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    /// Step lengths in hours.
    #[getter]
    fn steps(&self) -> Vec<f64> {
        self.inner.time_grid.steps.clone()
    }

    #[getter]
    fn hubs(&self) -> Vec<String> {
        self.inner.hubs.iter().map(|h| h.id.clone()).collect()
    }

    #[getter]
    fn carriers(&self) -> Vec<String> {
        self.inner.carriers.iter().map(|c| c.id.clone()).collect()
    }

    #[getter]
    fn processes(&self) -> Vec<String> {
        self.inner.processes.iter().map(|p| p.id.clone()).collect()
    }

    #[getter]
    fn storages(&self) -> Vec<String> {
        self.inner.storages.iter().map(|s| s.id.clone()).collect()
    }

    #[getter]
    fn diagnostics(&self) -> Vec<String> {
        self.diagnostics.clone()
    }

    fn is_valid(&self) -> bool {
        !has_fatal(&core_model::validate(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(name={:?}, hubs={}, processes={}, storages={}, steps={})",
            self.inner.name,
            self.inner.hubs.len(),
            self.inner.processes.len(),
            self.inner.storages.len(),
            self.inner.time_grid.len()
        )
    }
}

/// The assembled LP with its row and column catalogs.
#[pyclass(module = "hubflow", frozen)]
pub struct Model {
    scenario: core_model::Scenario,
    built: BuiltModel,
}

#[pymethods]
impl Model {
    #[getter]
    fn num_rows(&self) -> usize {
        self.built.lp.num_rows()
    }

    #[getter]
    fn num_cols(&self) -> usize {
        self.built.lp.num_cols()
    }

    #[getter]
    fn nnz(&self) -> usize {
        self.built.lp.nnz()
    }

    #[getter]
    fn loss_orientation(&self) -> &'static str {
        self.built.options.loss_orientation.as_str()
    }

    fn row_names(&self) -> Vec<String> {
        self.built.constraints.names()
    }

    fn column_names(&self) -> Vec<String> {
        self.built.variables.names()
    }

    /// Number of rows carrying `tag`, e.g. "EQ9" or "STO_DYN".
    fn row_count(&self, tag: &str) -> usize {
        self.built.constraints.entries().iter().filter(|e| e.tag.as_str() == tag).count()
    }

    /// Number of columns of `kind`, e.g. "IMP" or "SOC".
    fn column_count(&self, kind: &str) -> PyResult<usize> {
        let k = VarKind::parse(kind).ok_or_else(|| PyKeyError::new_err(kind.to_string()))?;
        Ok(self.built.variables.count(k))
    }

    fn objective_coefficients(&self) -> Vec<f64> {
        self.built.lp.objective().to_vec()
    }

    /// Fixed-format MPS text.
    fn to_mps(&self) -> String {
        lp::write_mps(&self.built.lp, &self.built.names(), "HUBFLOW").mps
    }

    fn to_lp_text(&self) -> String {
        lp::write_lp_text(&self.built.lp, &self.built.names())
    }

    /// Solves the LP; the GIL is released while the simplex runs.
    #[pyo3(signature = (max_iterations = None, tolerance = 1e-6))]
    fn solve(&self, py: Python<'_>, max_iterations: Option<usize>, tolerance: f64) -> PyResult<Schedule> {
        let options = SolverOptions { max_iterations, feasibility_tolerance: tolerance, ..SolverOptions::default() };
        let solution = py.detach(|| lp::solve(&self.built.lp, &options));
        let (report, audit) = if solution.status == SolveStatus::Optimal {
            let r = report::extract_schedules(&solution, &self.built, &self.scenario)
                .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
            let a = report::audit(&r, &self.scenario);
            (Some(r), Some(a))
        } else {
            (None, None)
        };
        let reason = match (&solution.infeasibility, solution.status) {
            (Some(inf), SolveStatus::Infeasible) => inf.rows.first().map(|&(row, _)| self.built.constraints.name(row)),
            _ => solution.message.clone(),
        };
        Ok(Schedule {
            status: solution.status.as_str().to_string(),
            objective: solution.objective,
            iterations: solution.iterations,
            values: solution.values,
            columns: self.built.variables.names(),
            reason,
            report,
            audit,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Model(rows={}, cols={}, nnz={}, loss_orientation={})",
            self.built.lp.num_rows(),
            self.built.lp.num_cols(),
            self.built.lp.nnz(),
            self.built.options.loss_orientation
        )
    }
}

/// Solver outcome plus, when optimal, the named schedules and audit.
#[pyclass(module = "hubflow", frozen)]
pub struct Schedule {
    #[pyo3(get)]
    status: String,
    #[pyo3(get)]
    objective: f64,
    #[pyo3(get)]
    iterations: usize,
    /// Name of the worst violated row for infeasible runs, or the solver message.
    #[pyo3(get)]
    reason: Option<String>,
    values: Vec<f64>,
    columns: Vec<String>,
    report: Option<ScheduleReport>,
    audit: Option<AuditReport>,
}

impl Schedule {
    fn optimal(&self) -> PyResult<(&ScheduleReport, &AuditReport)> {
        match (&self.report, &self.audit) {
            (Some(r), Some(a)) => Ok((r, a)),
            _ => Err(PyRuntimeError::new_err(format!("no schedule for a solve that ended {}", self.status))),
        }
    }
}

#[pymethods]
impl Schedule {
    #[getter]
    fn is_optimal(&self) -> bool {
        self.report.is_some()
    }

    /// Column values keyed by column name.
    fn values<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (name, v) in self.columns.iter().zip(&self.values) {
            d.set_item(name, v)?;
        }
        Ok(d)
    }

    fn value(&self, column: &str) -> PyResult<f64> {
        self.columns
            .iter()
            .position(|c| c == column)
            .map(|j| self.values[j])
            .ok_or_else(|| PyKeyError::new_err(column.to_string()))
    }

    /// One series in exergy kW, e.g. flow("IMP", "hub1", "gas").
    #[pyo3(signature = (kind, hub, carrier = None, element = None))]
    fn flow(&self, kind: &str, hub: &str, carrier: Option<&str>, element: Option<&str>) -> PyResult<Vec<f64>> {
        let (r, _) = self.optimal()?;
        let k = VarKind::parse(kind).ok_or_else(|| PyKeyError::new_err(kind.to_string()))?;
        if k == VarKind::Soc {
            let id = element.ok_or_else(|| PyValueError::new_err("SOC series need the storage id as element"))?;
            return r.soc.iter().find(|s| s.storage == id).map(|s| s.kwh.clone()).ok_or_else(|| PyKeyError::new_err(id.to_string()));
        }
        r.flow(k, hub, carrier, element)
            .map(|f| f.kw.clone())
            .ok_or_else(|| PyKeyError::new_err(format!("{kind} {hub} {carrier:?} {element:?}")))
    }

    /// Horizon totals per port: dicts with hub, port_kind, carrier, total_kwh, total_kg.
    fn totals<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let (r, _) = self.optimal()?;
        r.totals
            .iter()
            .map(|t| {
                let d = PyDict::new(py);
                d.set_item("hub", &t.hub)?;
                d.set_item("port_kind", t.kind.as_str())?;
                d.set_item("carrier", &t.carrier)?;
                d.set_item("total_kwh", t.total_kwh)?;
                d.set_item("total_kg", t.total_kg)?;
                Ok(d)
            })
            .collect()
    }

    /// Audit findings: dicts with check, severity, subject, value, message.
    fn audit<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let (_, a) = self.optimal()?;
        a.findings
            .iter()
            .map(|f| {
                let d = PyDict::new(py);
                d.set_item("check", f.check.as_str())?;
                d.set_item("severity", f.severity.as_str())?;
                d.set_item("subject", &f.subject)?;
                d.set_item("value", f.value)?;
                d.set_item("message", &f.message)?;
                Ok(d)
            })
            .collect()
    }

    fn audit_passed(&self) -> PyResult<bool> {
        Ok(self.optimal()?.1.passed())
    }

    /// Aligned totals table followed by the audit lines.
    fn render(&self) -> PyResult<String> {
        let (r, a) = self.optimal()?;
        Ok(format!("{}\n{}", report::render_totals(&r.totals), report::render_audit(a)))
    }

    /// Writes the CSV bundle into `directory`; returns the file names.
    fn write_bundle(&self, directory: PathBuf) -> PyResult<Vec<String>> {
        let (r, a) = self.optimal()?;
        let files = report::emit_report(r, a, ReportFormat::CsvBundle, &directory).map_err(|e| PyIOError::new_err(e.to_string()))?;
        Ok(files.iter().map(|f| f.display().to_string()).collect())
    }

    fn __repr__(&self) -> String {
        format!("Schedule(status={}, objective={:?}, iterations={})", self.status, self.objective, self.iterations)
    }
}

/// Assembles the LP for a scenario.
#[pyfunction]
#[pyo3(signature = (scenario, loss_orientation = "physical"))]
fn build(scenario: &Scenario, loss_orientation: &str) -> PyResult<Model> {
    let options = BuildOptions { loss_orientation: orientation(loss_orientation)? };
    match builder::build(&scenario.inner, &options) {
        Ok(built) => Ok(Model { scenario: scenario.inner.clone(), built }),
        Err(BuildError::Invalid(diags)) => {
            let lines: Vec<String> = diags.iter().filter(|d| d.is_fatal()).map(|d| d.to_string()).collect();
            Err(PyValueError::new_err(lines.join("\n")))
        }
    }
}

/// Builds and solves in one step.
#[pyfunction]
#[pyo3(signature = (scenario, loss_orientation = "physical", max_iterations = None, tolerance = 1e-6))]
fn solve(py: Python<'_>, scenario: &Scenario, loss_orientation: &str, max_iterations: Option<usize>, tolerance: f64) -> PyResult<Schedule> {
    build(scenario, loss_orientation)?.solve(py, max_iterations, tolerance)
}

/// Writes the bundled case study document and its series files.
#[pyfunction]
#[pyo3(signature = (directory, steps = scenarios::CASE_STUDY_STEPS))]
fn write_case_study(directory: PathBuf, steps: usize) -> PyResult<String> {
    scenarios::write_case_study(&directory, steps).map_err(|e| PyIOError::new_err(e.to_string()))?;
    Ok(Path::new(&directory).join("case_study.json").display().to_string())
}

#[pymodule]
fn hubflow(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Scenario>()?;
    m.add_class::<Model>()?;
    m.add_class::<Schedule>()?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(write_case_study, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
