//! Python bindings: `import fpsci`.

use fpsci_core::analysis::{self, LatencySummary};
use fpsci_core::anyconf::{self, Table, Value};
use fpsci_core::experiment::{load_experiment, ExperimentConfig};
use fpsci_core::psychophys::{self, Response, StaircaseConfig, StaircaseState};
use fpsci_core::{runner, simcore};
use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyFloat, PyInt, PyList, PyString, PyTuple};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn lines<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n")
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => PyFloat::new(py, *n).into_any(),
        Value::Text(s) => PyString::new(py, s).into_any(),
        Value::List(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Table(t) => {
            let dict = PyDict::new(py);
            for (k, item) in t {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn from_py(obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    if obj.is_none() {
        return Ok(Value::Null);
    }
    if let Ok(b) = obj.cast::<PyBool>() {
        return Ok(Value::Bool(b.is_true()));
    }
    if obj.is_instance_of::<PyInt>() || obj.is_instance_of::<PyFloat>() {
        let n: f64 = obj.extract()?;
        if !n.is_finite() {
            return Err(PyValueError::new_err("non-finite numbers cannot be stored"));
        }
        return Ok(Value::Number(n));
    }
    if let Ok(s) = obj.cast::<PyString>() {
        return Ok(Value::Text(s.to_str()?.to_owned()));
    }
    if let Ok(d) = obj.cast::<PyDict>() {
        let mut t = Table::new();
        for (k, v) in d.iter() {
            let key: String = k
                .extract()
                .map_err(|_| PyTypeError::new_err("table keys must be strings"))?;
            t.insert(key, from_py(&v)?);
        }
        return Ok(Value::Table(t));
    }
    if obj.is_instance_of::<PyList>() || obj.is_instance_of::<PyTuple>() {
        let items = obj.try_iter()?.map(|item| from_py(&item?)).collect::<PyResult<_>>()?;
        return Ok(Value::List(items));
    }
    Err(PyTypeError::new_err(format!(
        "cannot store a {} value",
        obj.get_type().name()?
    )))
}

/// Parses AnyLite text into Python objects. Raises ValueError with
/// `line:col: error: message` lines on failure.
#[pyfunction]
fn parse<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    let tree = anyconf::parse(text).map_err(|d| PyValueError::new_err(lines(&d)))?;
    to_py(py, &tree)
}

/// Renders Python data as plain JSON text.
#[pyfunction]
#[pyo3(signature = (obj, pretty = false))]
fn serialize(obj: &Bound<'_, PyAny>, pretty: bool) -> PyResult<String> {
    let tree = from_py(obj)?;
    Ok(if pretty {
        anyconf::serialize_pretty(&tree)
    } else {
        anyconf::serialize(&tree)
    })
}

fn config_from_text(text: &str) -> PyResult<(ExperimentConfig, Vec<String>)> {
    let tree = anyconf::parse(text).map_err(|d| PyValueError::new_err(lines(&d)))?;
    let loaded = load_experiment(&tree).map_err(|d| PyValueError::new_err(lines(&d)))?;
    Ok((loaded.value, loaded.warnings.iter().map(|w| w.to_string()).collect()))
}

/// Validates an experiment config and returns a short summary dict.
#[pyfunction]
fn load_experiment_summary<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyDict>> {
    let (config, warnings) = config_from_text(text)?;
    let d = PyDict::new(py);
    d.set_item("targets", config.targets.iter().map(|t| t.id.clone()).collect::<Vec<_>>())?;
    d.set_item("sessions", config.sessions.iter().map(|s| s.id.clone()).collect::<Vec<_>>())?;
    d.set_item("trials", config.sessions.iter().map(|s| s.trial_count()).sum::<u64>())?;
    d.set_item("warnings", warnings)?;
    Ok(d)
}

/// Degrees of rotation per mouse count.
#[pyfunction]
fn mouse_sensitivity(cm_per_360: f64, dpi: f64) -> PyResult<f64> {
    simcore::mouse_sensitivity(cm_per_360, dpi).map_err(value_error)
}

/// Modelled click-to-photon latencies in milliseconds.
#[pyfunction]
#[pyo3(signature = (frame_rate, refresh_rate, delay_frames, n_clicks, seed = 0))]
fn click_to_photon_model(
    frame_rate: f64,
    refresh_rate: f64,
    delay_frames: u32,
    n_clicks: usize,
    seed: u64,
) -> PyResult<Vec<f64>> {
    simcore::click_to_photon_model(frame_rate, refresh_rate, delay_frames, n_clicks, seed).map_err(value_error)
}

fn latency_dict<'py>(py: Python<'py>, s: &LatencySummary) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("n", s.n)?;
    d.set_item("mean", s.mean)?;
    d.set_item("min", s.min)?;
    d.set_item("max", s.max)?;
    d.set_item("stddev", s.stddev)?;
    let bins: Vec<(i64, usize)> = s.histogram.iter().map(|b| (b.start_ms, b.count)).collect();
    d.set_item("histogram", bins)?;
    Ok(d)
}

/// Mean, min, max, sample standard deviation and 1 ms histogram bins.
#[pyfunction]
fn latency_summary<'py>(py: Python<'py>, samples: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    let s = analysis::latency_summary(&samples).map_err(value_error)?;
    latency_dict(py, &s)
}

/// Least-squares `a x² + b x + c`; returns `(a, b, c, rss)`.
#[pyfunction]
fn quadratic_fit(xs: Vec<f64>, ys: Vec<f64>) -> PyResult<(f64, f64, f64, f64)> {
    if xs.len() != ys.len() {
        return Err(PyValueError::new_err("xs and ys differ in length"));
    }
    let pts: Vec<(f64, f64)> = xs.into_iter().zip(ys).collect();
    let f = analysis::quadratic_fit(&pts).map_err(value_error)?;
    Ok((f.a, f.b, f.c, f.residual_sum_squares))
}

/// `(mean, standard_error, n)` of completion times.
#[pyfunction]
fn completion_stats(times: Vec<f64>) -> PyResult<(f64, f64, usize)> {
    let s = analysis::summarize_times(&times).map_err(value_error)?;
    Ok((s.mean, s.standard_error, s.n))
}

/// Every `(condition, level)` repeated `reps` times in a seeded order.
#[pyfunction]
fn make_constant_schedule(levels: Vec<(String, f64)>, reps: u32, seed: u64) -> PyResult<Vec<(String, f64)>> {
    let s = psychophys::make_constant_schedule(&levels, reps, seed).map_err(value_error)?;
    Ok(s.entries.into_iter().map(|e| (e.condition_id, e.level)).collect())
}

#[pyfunction]
fn order_trials(trial_sets: Vec<(String, u32)>, seed: u64) -> Vec<String> {
    psychophys::order_trials(&trial_sets, seed)
}

/// Runs one session of an experiment config with the synthetic player and
/// returns the trial rows as dicts.
#[pyfunction]
#[pyo3(signature = (config_text, session_id, user_id, sensitivity, seed))]
fn run_session<'py>(
    py: Python<'py>,
    config_text: &str,
    session_id: &str,
    user_id: &str,
    sensitivity: f64,
    seed: u64,
) -> PyResult<Bound<'py, PyList>> {
    let (config, _) = config_from_text(config_text)?;
    let session = config
        .session(session_id)
        .ok_or_else(|| PyValueError::new_err(format!("unknown session `{session_id}`")))?;
    let run = runner::run_session(&config, session, user_id, sensitivity, seed, |_, _| {}).map_err(value_error)?;
    let rows = PyList::empty(py);
    for r in &run.records {
        let d = PyDict::new(py);
        d.set_item("trialIndex", r.trial_index)?;
        d.set_item("targetMotionId", &r.target_motion_id)?;
        d.set_item("outcome", if r.is_success() { "success" } else { "failure" })?;
        d.set_item("completionTimeSec", r.completion_time_sec)?;
        d.set_item("shotsFired", r.shots_fired)?;
        d.set_item("shotsHit", r.shots_hit)?;
        d.set_item("seedStream", r.seed_stream)?;
        rows.append(d)?;
    }
    Ok(rows)
}

/// Transformed up-down staircase. `step(correct)` returns nothing and
/// updates the state in place.
#[pyclass(name = "Staircase")]
struct PyStaircase {
    state: StaircaseState,
}

#[pymethods]
impl PyStaircase {
    #[new]
    #[pyo3(signature = (start_level, step_size, min_level, max_level, n_up = 1, n_down = 2, reversals = 9))]
    fn new(
        start_level: f64,
        step_size: f64,
        min_level: f64,
        max_level: f64,
        n_up: u32,
        n_down: u32,
        reversals: u32,
    ) -> PyResult<Self> {
        let config = StaircaseConfig {
            n_up,
            n_down,
            target_reversals: reversals,
            ..StaircaseConfig::new(start_level, step_size, min_level, max_level)
        };
        Ok(PyStaircase {
            state: StaircaseState::new(config).map_err(value_error)?,
        })
    }

    fn step(&mut self, correct: bool) -> PyResult<()> {
        let r = if correct {
            Response::Correct
        } else {
            Response::Incorrect
        };
        self.state = self.state.step(r).map_err(value_error)?;
        Ok(())
    }

    #[getter]
    fn level(&self) -> f64 {
        self.state.current_level
    }

    #[getter]
    fn reversals(&self) -> Vec<f64> {
        self.state.reversals.clone()
    }

    #[getter]
    fn complete(&self) -> bool {
        self.state.is_complete()
    }

    fn threshold(&self) -> PyResult<f64> {
        self.state.threshold().map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!(
            "Staircase(level={}, reversals={}, complete={})",
            self.state.current_level,
            self.state.reversals.len(),
            self.state.is_complete()
        )
    }
}

#[pymodule]
fn fpsci(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(serialize, m)?)?;
    m.add_function(wrap_pyfunction!(load_experiment_summary, m)?)?;
    m.add_function(wrap_pyfunction!(mouse_sensitivity, m)?)?;
    m.add_function(wrap_pyfunction!(click_to_photon_model, m)?)?;
    m.add_function(wrap_pyfunction!(latency_summary, m)?)?;
    m.add_function(wrap_pyfunction!(quadratic_fit, m)?)?;
    m.add_function(wrap_pyfunction!(completion_stats, m)?)?;
    m.add_function(wrap_pyfunction!(make_constant_schedule, m)?)?;
    m.add_function(wrap_pyfunction!(order_trials, m)?)?;
    m.add_function(wrap_pyfunction!(run_session, m)?)?;
    m.add_class::<PyStaircase>()?;
    Ok(())
}
