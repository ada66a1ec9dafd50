//! Python bindings: exact rationals, the monochromatic-fraction
//! evaluators, enumeration, minimization, and the discrete/circle
//! counters. Exact values cross the boundary as canonical `p/q` strings.

use apcolor::diagram::{evaluate_f, total_area_check, twelve_block_minimizer, Endpoints};
use apcolor::discrete::{
    bead_fraction, circle_mono_fraction, circle_monte_carlo, count_ap3, count_mono_ap3,
    count_mono_offby1, discretize, fraction_mono, CircleColoring, DiscreteColoring,
};
use apcolor::enumerator::{enumerate_configurations, EnumerateOptions};
use apcolor::optimizer::{certify_point, global_minimize, MinimizeOptions};
use apcolor::rational::parse_rational;
use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

/// An exact rational number.
#[pyclass(name = "Rational", frozen, from_py_object)]
#[derive(Clone)]
struct PyRational(apcolor::Rational);

fn parse(text: &str) -> PyResult<apcolor::Rational> {
    parse_rational(text).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymethods]
impl PyRational {
    #[new]
    fn new(value: &Bound<'_, PyAny>) -> PyResult<Self> {
        if let Ok(text) = value.extract::<String>() {
            return Ok(PyRational(parse(&text)?));
        }
        if let Ok(int) = value.extract::<i64>() {
            return Ok(PyRational(apcolor::Rational::from_int(int)));
        }
        Err(PyValueError::new_err(
            "Rational accepts a string like '117/548' or an integer",
        ))
    }

    fn __add__(&self, other: &PyRational) -> PyRational {
        PyRational(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &PyRational) -> PyRational {
        PyRational(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &PyRational) -> PyRational {
        PyRational(&self.0 * &other.0)
    }

    fn __truediv__(&self, other: &PyRational) -> PyResult<PyRational> {
        self.0
            .checked_div(&other.0)
            .map(PyRational)
            .ok_or_else(|| PyZeroDivisionError::new_err("division by zero"))
    }

    fn __neg__(&self) -> PyRational {
        PyRational(-&self.0)
    }

    fn __eq__(&self, other: &PyRational) -> bool {
        self.0 == other.0
    }

    fn __ne__(&self, other: &PyRational) -> bool {
        self.0 != other.0
    }

    fn __lt__(&self, other: &PyRational) -> bool {
        self.0 < other.0
    }

    fn __le__(&self, other: &PyRational) -> bool {
        self.0 <= other.0
    }

    fn __gt__(&self, other: &PyRational) -> bool {
        self.0 > other.0
    }

    fn __ge__(&self, other: &PyRational) -> bool {
        self.0 >= other.0
    }

    fn __hash__(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.0.hash(&mut h);
        h.finish()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Rational('{}')", self.0)
    }

    fn __float__(&self) -> f64 {
        self.0.to_f64()
    }
}

fn endpoints_from(values: Vec<String>) -> PyResult<Endpoints> {
    let parsed: PyResult<Vec<apcolor::Rational>> =
        values.iter().map(|v| parse(v)).collect();
    Endpoints::new(parsed?).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn coloring_from(text: &str) -> PyResult<DiscreteColoring> {
    DiscreteColoring::parse(text).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Exact monochromatic fraction of the block coloring with the given
/// endpoints, as a `p/q` string.
#[pyfunction]
fn eval_endpoints(endpoints: Vec<String>) -> PyResult<String> {
    Ok(evaluate_f(&endpoints_from(endpoints)?).to_string())
}

/// Sum of all region areas (any monotone endpoint vector): always "1".
#[pyfunction]
fn total_area(endpoints: Vec<String>) -> PyResult<String> {
    Ok(total_area_check(&endpoints_from(endpoints)?).to_string())
}

/// Exact value / gradient / criticality of an antisymmetric point.
#[pyfunction]
fn certify<'py>(py: Python<'py>, endpoints: Vec<String>) -> PyResult<Bound<'py, PyDict>> {
    let cert = certify_point(&endpoints_from(endpoints)?)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let out = PyDict::new(py);
    out.set_item("n", cert.n)?;
    out.set_item(
        "endpoints",
        cert.endpoints.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    )?;
    out.set_item("value", cert.value.to_string())?;
    out.set_item(
        "gradient",
        cert.gradient.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    )?;
    out.set_item("is_critical", cert.is_critical)?;
    Ok(out)
}

/// Number of feasible configurations for an even block count.
#[pyfunction]
#[pyo3(signature = (n, mirror = false))]
fn enumerate_count(n: u32, mirror: bool) -> PyResult<u64> {
    let opts = EnumerateOptions {
        mirror_symmetry: mirror,
        ..EnumerateOptions::default()
    };
    enumerate_configurations(n, &opts)
        .map(|r| r.count)
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Serialized configurations in canonical order.
#[pyfunction]
fn enumerate_lines(n: u32) -> PyResult<Vec<String>> {
    enumerate_configurations(n, &EnumerateOptions::default())
        .map(|r| r.configurations.iter().map(|c| c.to_line()).collect())
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Exact global minimum of f over at most `n_max` blocks, as `p/q`.
#[pyfunction]
#[pyo3(signature = (n_max, cache_dir = None))]
fn minimize_value(n_max: u32, cache_dir: Option<String>) -> PyResult<String> {
    let opts = MinimizeOptions {
        cache_dir: cache_dir.map(Into::into),
        ..MinimizeOptions::default()
    };
    global_minimize(n_max, &opts)
        .map(|r| r.global.value.to_string())
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// The full minimization report as a JSON string.
#[pyfunction]
#[pyo3(signature = (n_max, cache_dir = None))]
fn minimize_report_json(n_max: u32, cache_dir: Option<String>) -> PyResult<String> {
    let opts = MinimizeOptions {
        cache_dir: cache_dir.map(Into::into),
        ..MinimizeOptions::default()
    };
    let report = global_minimize(n_max, &opts).map_err(|e| PyValueError::new_err(e.to_string()))?;
    serde_json::to_string_pretty(&report).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Total 3-AP count of `[N]` (d may be zero or negative).
#[pyfunction]
fn ap3_total(n: u64) -> u64 {
    count_ap3(n)
}

#[pyfunction]
fn mono_ap3(coloring: &str) -> PyResult<u64> {
    Ok(count_mono_ap3(&coloring_from(coloring)?))
}

#[pyfunction]
fn mono_offby1(coloring: &str) -> PyResult<u64> {
    Ok(count_mono_offby1(&coloring_from(coloring)?))
}

#[pyfunction]
fn mono_fraction(coloring: &str) -> PyResult<String> {
    Ok(fraction_mono(&coloring_from(coloring)?).to_string())
}

/// The bead-formula measure (m3 + m3'/2) / N^2 as `p/q`.
#[pyfunction]
fn bead_measure(coloring: &str) -> PyResult<String> {
    Ok(bead_fraction(&coloring_from(coloring)?).to_string())
}

/// Discretize a block coloring onto `[N]`, returning an R/B string.
#[pyfunction]
fn discretize_endpoints(endpoints: Vec<String>, n: u64) -> PyResult<String> {
    if n == 0 {
        return Err(PyValueError::new_err("N must be at least 1"));
    }
    Ok(discretize(&endpoints_from(endpoints)?, n).to_string())
}

/// The circle-coloring closed form 1 - 3p + 3p^2 as `p/q`.
#[pyfunction]
fn circle_fraction(p: &str) -> PyResult<String> {
    let p = parse(p)?;
    if p.is_negative() || p > apcolor::Rational::one() {
        return Err(PyValueError::new_err("p must lie in [0, 1]"));
    }
    Ok(circle_mono_fraction(&p).to_string())
}

/// Seeded Monte Carlo estimate for the two-arc circle coloring with red
/// measure `p`; returns `(estimate, std_error)`.
#[pyfunction]
#[pyo3(signature = (p, samples = 1_000_000, seed = 0))]
fn circle_estimate(p: &str, samples: u64, seed: u64) -> PyResult<(f64, f64)> {
    let p = parse(p)?;
    if p.is_negative() || p > apcolor::Rational::one() {
        return Err(PyValueError::new_err("p must lie in [0, 1]"));
    }
    if samples == 0 {
        return Err(PyValueError::new_err("samples must be at least 1"));
    }
    let coloring =
        CircleColoring::two_arc(&p).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let est = circle_monte_carlo(&coloring, samples, seed);
    Ok((est.estimate, est.std_error))
}

/// Endpoints of the 12-block minimizer, as `p/q` strings.
#[pyfunction]
fn minimizer_endpoints() -> Vec<String> {
    twelve_block_minimizer()
        .x()
        .iter()
        .map(|v| v.to_string())
        .collect()
}

#[pymodule]
fn apcolor_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRational>()?;
    m.add_function(wrap_pyfunction!(eval_endpoints, m)?)?;
    m.add_function(wrap_pyfunction!(total_area, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_count, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_lines, m)?)?;
    m.add_function(wrap_pyfunction!(minimize_value, m)?)?;
    m.add_function(wrap_pyfunction!(minimize_report_json, m)?)?;
    m.add_function(wrap_pyfunction!(ap3_total, m)?)?;
    m.add_function(wrap_pyfunction!(mono_ap3, m)?)?;
    m.add_function(wrap_pyfunction!(mono_offby1, m)?)?;
    m.add_function(wrap_pyfunction!(mono_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(bead_measure, m)?)?;
    m.add_function(wrap_pyfunction!(discretize_endpoints, m)?)?;
    m.add_function(wrap_pyfunction!(circle_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(circle_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(minimizer_endpoints, m)?)?;
    Ok(())
}
