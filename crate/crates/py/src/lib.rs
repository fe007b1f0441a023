//! Python bindings for the torsion census toolkit: group metadata,
//! weight tables, class numbers, censuses, local densities, and
//! rank-bound constants. Exact rationals cross the boundary as
//! (numerator, denominator) tuples or "num/den" strings; torsion groups
//! are addressed by their labels ("2", "12", "2x2", ...).

use num_traits::ToPrimitive;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use torsion_core::error::Error;
use torsion_core::groups::Torsion;
use torsion_core::{bounds, census as core_census, curve, models, weights};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn group(label: &str) -> PyResult<Torsion> {
    Torsion::parse(label).map_err(err)
}

fn ratio64(r: num_rational::Rational64) -> (i64, i64) {
    (*r.numer(), *r.denom())
}

/// Labels of all fifteen torsion groups, the trivial group first.
#[pyfunction]
fn groups() -> Vec<&'static str> {
    torsion_core::groups::ALL.iter().map(|g| g.label()).collect()
}

/// Structural constants of one torsion group.
#[pyfunction]
fn group_info<'py>(py: Python<'py>, label: &str) -> PyResult<Bound<'py, PyDict>> {
    let g = group(label)?;
    let d = PyDict::new(py);
    d.set_item("label", g.label())?;
    d.set_item("order", g.order())?;
    d.set_item("invariant_factors", g.invariant_factors())?;
    d.set_item("d", g.d_ratio())?;
    d.set_item("multiplicity", g.multiplicity())?;
    d.set_item("is_large", g.is_large())?;
    d.set_item("cusp_count", g.cusp_count())?;
    Ok(d)
}

/// Nonzero weight-table rows over F_p as (A, B, weight) triples.
#[pyfunction]
fn weight_table(label: &str, p: u64) -> PyResult<Vec<(u64, u64, u64)>> {
    let g = group(label)?;
    let table = weights::weight_table(g, p).map_err(err)?;
    let mut rows = Vec::new();
    for a in 0..p {
        for b in 0..p {
            let w = table[(a * p + b) as usize];
            if w != 0 {
                rows.push((a, b, w));
            }
        }
    }
    Ok(rows)
}

/// Total weight mass on the singular locus mod p.
#[pyfunction]
fn singular_weight_sum(label: &str, p: u64) -> PyResult<u64> {
    weights::singular_weight_sum(group(label)?, p).map_err(err)
}

/// The closed form the singular mass must equal.
#[pyfunction]
fn predicted_singular_sum(label: &str, p: u64) -> PyResult<u64> {
    weights::predicted_singular_sum(group(label)?, p).map_err(err)
}

/// Torsion-weighted class numbers H_G(a, p) as a dict {a: H}.
#[pyfunction]
fn class_numbers(label: &str, p: u64) -> PyResult<std::collections::BTreeMap<i64, u64>> {
    weights::class_numbers(group(label)?, p).map_err(err)
}

/// Hurwitz class number H(|D|) as an exact (numerator, denominator) pair.
#[pyfunction]
fn hurwitz_h(d: i64) -> (i64, i64) {
    ratio64(weights::hurwitz_h(d))
}

/// Frobenius trace of y^2 = x^3 + Ax + B over F_p (good reduction only).
#[pyfunction]
fn trace(a: i64, b: i64, p: u64) -> PyResult<i64> {
    curve::trace(a, b, p).map_err(err)
}

/// Reduction type over F_p: "good", "split", "nonsplit", or "additive".
#[pyfunction]
fn reduction_type(a: i64, b: i64, p: u64) -> PyResult<&'static str> {
    Ok(match curve::reduction_type(a, b, p).map_err(err)? {
        curve::Reduction::Good => "good",
        curve::Reduction::SplitMultiplicative => "split",
        curve::Reduction::NonsplitMultiplicative => "nonsplit",
        curve::Reduction::Additive => "additive",
    })
}

/// Invariant factors (n1, n2) of the point group over F_p.
#[pyfunction]
fn group_structure(a: i64, b: i64, p: u64) -> PyResult<(u64, u64)> {
    curve::group_structure(a, b, p).map_err(err)
}

/// Naive height max(|A|^3, B^2).
#[pyfunction]
fn height(a: i64, b: i64) -> u128 {
    core_census::height(a, b)
}

/// Whether no prime p has p^4 | A and p^6 | B.
#[pyfunction]
fn is_minimal_model(a: i64, b: i64) -> bool {
    core_census::is_minimal_model(a, b)
}

/// Defect of the universal model at (a, b): the twist correction making
/// the parametrized curve minimal.
#[pyfunction]
fn defect(label: &str, a: i64, b: i64) -> PyResult<u64> {
    Ok(models::defect(group(label)?, a, b))
}

/// All minimal models with the given torsion up to height x, sorted.
#[pyfunction]
fn census(label: &str, x: u128) -> PyResult<Vec<(i64, i64)>> {
    Ok(core_census::enumerate(group(label)?, x).map_err(err)?.curves)
}

/// Census size plus its multiplicity histogram and singular-image count.
#[pyfunction]
fn census_summary<'py>(py: Python<'py>, label: &str, x: u128) -> PyResult<Bound<'py, PyDict>> {
    let c = core_census::enumerate(group(label)?, x).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("count", c.curves.len())?;
    d.set_item("singular_images", c.singular_images)?;
    d.set_item("multiplicities", c.multiplicities)?;
    Ok(d)
}

/// Counting constant c(G) with |E_G(X)| ~ c(G) X^(1/d).
#[pyfunction]
#[pyo3(signature = (label, tol=1e-3))]
fn c_constant(label: &str, tol: f64) -> PyResult<f64> {
    core_census::c_constant(group(label)?, tol).map_err(err)
}

/// Area of the unit height region of the group's parameter plane.
#[pyfunction]
#[pyo3(signature = (label, tol=1e-3))]
fn region_area(label: &str, tol: f64) -> PyResult<f64> {
    core_census::region_area(group(label)?, tol).map_err(err)
}

/// Predicted density of a local condition ("good", "mult", "split",
/// "nonsplit", "additive", "semistable", or "trace=a") at p.
#[pyfunction]
fn local_density(label: &str, p: u64, condition: &str) -> PyResult<f64> {
    let lc = core_census::LocalCondition::parse(condition).map_err(err)?;
    core_census::local_density_prediction(group(label)?, p, lc).map_err(err)
}

/// Observed counts of every local condition at p across a census.
#[pyfunction]
fn local_tally<'py>(py: Python<'py>, label: &str, x: u128, p: u64) -> PyResult<Bound<'py, PyDict>> {
    let c = core_census::enumerate(group(label)?, x).map_err(err)?;
    let tally = core_census::local_tally(&c, p).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("total", tally.total)?;
    for lc in [
        core_census::LocalCondition::Good,
        core_census::LocalCondition::Multiplicative,
        core_census::LocalCondition::Split,
        core_census::LocalCondition::Nonsplit,
        core_census::LocalCondition::Additive,
        core_census::LocalCondition::Semistable,
    ] {
        d.set_item(lc.label(), tally.count(lc))?;
    }
    d.set_item("traces", tally.traces)?;
    Ok(d)
}

/// Support of the group's test function as an exact (num, den) pair.
#[pyfunction]
fn sigma(label: &str) -> PyResult<(i64, i64)> {
    Ok(ratio64(bounds::sigma_for(group(label)?).map_err(err)?))
}

/// Average analytic rank bound as an exact (num, den) pair.
#[pyfunction]
fn average_rank_bound(label: &str) -> PyResult<(i64, i64)> {
    Ok(ratio64(bounds::average_rank_bound(group(label)?).map_err(err)?))
}

/// n-th trace-moment bound as ("num/den", float).
#[pyfunction]
fn moment_bound(label: &str, n: u32) -> PyResult<(String, f64)> {
    let b = bounds::moment_bound(group(label)?, n).map_err(err)?;
    let value = b.to_f64().unwrap_or(f64::INFINITY);
    Ok((b.to_string(), value))
}

/// Tail bound on the census fraction with rank at least `a`:
/// {"bound": "num/den", "value": float, "n": moment order, "constant": "num/den"}.
#[pyfunction]
fn tail_bound<'py>(py: Python<'py>, label: &str, a: i64) -> PyResult<Bound<'py, PyDict>> {
    let (bound, n, c) = bounds::tail_bound(group(label)?, a).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("bound", bound.to_string())?;
    d.set_item("value", bound.to_f64().unwrap_or(f64::INFINITY))?;
    d.set_item("n", n)?;
    d.set_item("constant", c.to_string())?;
    Ok(d)
}

/// Empirical explicit-formula prime sums (S1, S2) over a census.
#[pyfunction]
fn prime_sums(label: &str, x: u128, sigma: f64) -> PyResult<(f64, f64)> {
    let c = core_census::enumerate(group(label)?, x).map_err(err)?;
    bounds::empirical_s1_s2(&c, sigma).map_err(err)
}

/// Runs the acceptance suite; returns (number, name, passed, detail) rows.
#[pyfunction]
#[pyo3(signature = (quick=true))]
fn acceptance(quick: bool) -> Vec<(u32, &'static str, bool, String)> {
    torsion_core::acceptance::run_all(quick)
        .into_iter()
        .map(|r| (r.number, r.name, r.passed, r.detail))
        .collect()
}

#[pymodule]
fn _native(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(groups, m)?)?;
    m.add_function(wrap_pyfunction!(group_info, m)?)?;
    m.add_function(wrap_pyfunction!(weight_table, m)?)?;
    m.add_function(wrap_pyfunction!(singular_weight_sum, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_singular_sum, m)?)?;
    m.add_function(wrap_pyfunction!(class_numbers, m)?)?;
    m.add_function(wrap_pyfunction!(hurwitz_h, m)?)?;
    m.add_function(wrap_pyfunction!(trace, m)?)?;
    m.add_function(wrap_pyfunction!(reduction_type, m)?)?;
    m.add_function(wrap_pyfunction!(group_structure, m)?)?;
    m.add_function(wrap_pyfunction!(height, m)?)?;
    m.add_function(wrap_pyfunction!(is_minimal_model, m)?)?;
    m.add_function(wrap_pyfunction!(defect, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(census_summary, m)?)?;
    m.add_function(wrap_pyfunction!(c_constant, m)?)?;
    m.add_function(wrap_pyfunction!(region_area, m)?)?;
    m.add_function(wrap_pyfunction!(local_density, m)?)?;
    m.add_function(wrap_pyfunction!(local_tally, m)?)?;
    m.add_function(wrap_pyfunction!(sigma, m)?)?;
    m.add_function(wrap_pyfunction!(average_rank_bound, m)?)?;
    m.add_function(wrap_pyfunction!(moment_bound, m)?)?;
    m.add_function(wrap_pyfunction!(tail_bound, m)?)?;
    m.add_function(wrap_pyfunction!(prime_sums, m)?)?;
    m.add_function(wrap_pyfunction!(acceptance, m)?)?;
    Ok(())
}
