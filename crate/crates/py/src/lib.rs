//! Python bindings: the main types (maps, polygons, domains) and the
//! verification entry points, with exact values passed as strings and
//! reports returned as plain Python dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use berkrh::berkdomain::{
    skeleton_image_probe, vnorm_at_point, Center, FtDomainP1, TypeTwoPoint,
};
use berkrh::exactval::{padic_val as padic_val_core, Prime, QExact};
use berkrh::laurent::{LaurentPoly, PValue, RationalMap};
use berkrh::ledger::{assemble_global_rh, TriangGraph};
use berkrh::ramification::{
    count_critical, degree_over, germ_data, local_sum_check, TangentDirection,
};
use berkrh::rhcheck::{char_p_divisor, check_rh, validate_morphism, MorphismSpec};
use berkrh::valpolygon::{build_polygon, Side, SlopeBound, ValPolygon};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(format!("{e}"))
}

fn prime(p: u64) -> PyResult<Prime> {
    Prime::new(p).map_err(err)
}

fn parse_q(s: &str) -> PyResult<QExact> {
    s.parse::<QExact>().map_err(err)
}

fn parse_json<T: serde::de::DeserializeOwned>(s: &str, what: &str) -> PyResult<T> {
    serde_json::from_str(s).map_err(|e| err(format!("{what}: {e}")))
}

fn to_py<'py>(py: Python<'py>, value: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match value {
        serde_json::Value::Null => py.None().into_bound(py),
        serde_json::Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any()
            } else if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.into_any()
            } else {
                return Err(err("non-integer number in report"));
            }
        }
        serde_json::Value::String(s) => s.into_pyobject(py)?.into_any(),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, v) in map {
                dict.set_item(k, to_py(py, v)?)?;
            }
            dict.into_any()
        }
    })
}

fn report_to_py<'py, T: serde::Serialize>(
    py: Python<'py>,
    report: &T,
) -> PyResult<Bound<'py, PyAny>> {
    let value = serde_json::to_value(report).map_err(err)?;
    to_py(py, &value)
}

fn parse_side(side: &str) -> PyResult<Side> {
    match side {
        "inside" => Ok(Side::Inside),
        "outside" => Ok(Side::Outside),
        other => Err(err(format!(
            "side must be `inside` or `outside`, got `{other}`"
        ))),
    }
}

/// The p-adic valuation of an exact rational, as a string ("inf" for 0).
#[pyfunction]
fn padic_val(x: &str, p: u64) -> PyResult<String> {
    let p = prime(p)?;
    Ok(padic_val_core(&parse_q(x)?, &p).to_string())
}

/// A reduced rational map, built from JSON polynomial dictionaries.
#[pyclass(name = "Map")]
struct PyMap {
    inner: RationalMap,
}

#[pymethods]
impl PyMap {
    #[new]
    #[pyo3(signature = (num, den = None))]
    fn new(num: &str, den: Option<&str>) -> PyResult<Self> {
        let num: LaurentPoly = parse_json(num, "numerator")?;
        let den: LaurentPoly = match den {
            Some(d) => parse_json(d, "denominator")?,
            None => LaurentPoly::one(),
        };
        Ok(PyMap {
            inner: RationalMap::new(num, den).map_err(err)?,
        })
    }

    fn degree(&self) -> i64 {
        self.inner.degree()
    }

    /// Exact evaluation at a rational point or "inf".
    fn eval(&self, x: &str) -> PyResult<String> {
        let x = PValue::parse(x).map_err(err)?;
        Ok(self.inner.eval(&x).map_err(err)?.to_string())
    }

    /// Seminorm valuation at the point eta_{center, p^(-s)}.
    fn vnorm(&self, center: &str, log_radius: &str, p: u64) -> PyResult<String> {
        let p = prime(p)?;
        let eta = TypeTwoPoint::new(Center::parse(center).map_err(err)?, parse_q(log_radius)?);
        Ok(vnorm_at_point(&self.inner, &eta, &p)
            .map_err(err)?
            .to_string())
    }

    fn __repr__(&self) -> String {
        format!("Map({})", self.inner)
    }
}

/// The valuation polygon of a polynomial at a prime.
#[pyclass(name = "Polygon")]
struct PyPolygon {
    inner: ValPolygon,
}

#[pymethods]
impl PyPolygon {
    #[new]
    fn new(poly: &str, p: u64) -> PyResult<Self> {
        let f: LaurentPoly = parse_json(poly, "polynomial")?;
        let p = prime(p)?;
        Ok(PyPolygon {
            inner: build_polygon(&f, &p).map_err(err)?,
        })
    }

    fn vertices(&self) -> Vec<(i64, String)> {
        self.inner
            .hull()
            .iter()
            .map(|(i, v)| (*i, v.to_string()))
            .collect()
    }

    fn breakpoints(&self) -> Vec<String> {
        self.inner
            .breakpoints()
            .iter()
            .map(|s| s.to_string())
            .collect()
    }

    fn eval_v(&self, s: &str) -> PyResult<String> {
        Ok(self.inner.eval_v(&parse_q(s)?).to_string())
    }

    fn achieving_range(&self, s: &str) -> PyResult<(i64, i64)> {
        Ok(self.inner.achieving_range(&parse_q(s)?))
    }

    fn dominant_exponent(&self, s: &str, side: &str) -> PyResult<i64> {
        Ok(self
            .inner
            .dominant_exponent(&parse_q(s)?, parse_side(side)?))
    }

    /// Roots (with multiplicity, excluding 0 and infinity) with valuation
    /// between lo and hi; "-inf"/"inf" bounds allowed.
    #[pyo3(signature = (lo, hi, incl_lo = true, incl_hi = true))]
    fn count_zero_valuations(
        &self,
        lo: &str,
        hi: &str,
        incl_lo: bool,
        incl_hi: bool,
    ) -> PyResult<u64> {
        let parse_bound = |s: &str, low_end: bool| -> PyResult<SlopeBound> {
            Ok(match s {
                "-inf" => SlopeBound::NegInf,
                "inf" => {
                    if low_end {
                        SlopeBound::NegInf
                    } else {
                        SlopeBound::PosInf
                    }
                }
                other => SlopeBound::Finite(parse_q(other)?),
            })
        };
        let lo = parse_bound(lo, true)?;
        let hi = parse_bound(hi, false)?;
        self.inner
            .count_zero_valuations(&lo, &hi, incl_lo, incl_hi)
            .map_err(err)
    }
}

/// A normal-form subdomain of the projective line.
#[pyclass(name = "Domain")]
struct PyDomain {
    inner: FtDomainP1,
}

#[pymethods]
impl PyDomain {
    #[new]
    fn new(domain: &str) -> PyResult<Self> {
        Ok(PyDomain {
            inner: parse_json(domain, "domain")?,
        })
    }

    #[staticmethod]
    fn projective_line() -> Self {
        PyDomain {
            inner: FtDomainP1::projective_line(),
        }
    }

    #[staticmethod]
    fn closed_unit_disc() -> Self {
        PyDomain {
            inner: FtDomainP1::closed_unit_disc(),
        }
    }

    fn validate(&self, p: u64) -> PyResult<()> {
        self.inner.validate(&prime(p)?).map_err(err)
    }

    fn euler_char(&self) -> i64 {
        self.inner.euler_char()
    }

    fn boundary_count(&self) -> usize {
        self.inner.boundary_count()
    }
}

/// Germ invariants (d, sigma, nu, v(eps)) of a map along a one-sided
/// direction at a boundary sphere.
#[pyfunction]
fn germ<'py>(
    py: Python<'py>,
    map: &PyMap,
    center: &str,
    log_radius: &str,
    side: &str,
    image_center: &str,
    p: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let p = prime(p)?;
    let dir = TangentDirection {
        center: Center::parse(center).map_err(err)?,
        log_radius: parse_q(log_radius)?,
        side: parse_side(side)?,
    };
    let image = PValue::parse(image_center).map_err(err)?;
    let g = germ_data(&map.inner, &dir, &image, &p).map_err(err)?;
    report_to_py(py, &g)
}

/// Sum of (e_P - 1) over the rational points of a domain.
#[pyfunction]
fn critical_count(map: &PyMap, domain: &PyDomain, p: u64) -> PyResult<u64> {
    count_critical(&map.inner, &domain.inner, &prime(p)?).map_err(err)
}

/// Degree of a map over a domain via agreeing fiber counts.
#[pyfunction]
fn degree_over_domain(
    map: &PyMap,
    domain: &PyDomain,
    probes: Vec<String>,
    p: u64,
) -> PyResult<u64> {
    let probes: Vec<PValue> = probes
        .iter()
        .map(|s| PValue::parse(s).map_err(err))
        .collect::<PyResult<_>>()?;
    degree_over(&map.inner, &domain.inner, &probes, &prime(p)?).map_err(err)
}

/// Skeleton probe at eta_{a, p^(-s)}: (local degree, image log-radius).
#[pyfunction]
fn skeleton_probe(map: &PyMap, a: &str, s: &str, p: u64) -> PyResult<(i64, String)> {
    let (d, img) = skeleton_image_probe(&map.inner, &parse_q(a)?, &parse_q(s)?, &prime(p)?)
        .map_err(err)?;
    Ok((d, img.to_string()))
}

/// Structural validation of declared morphism data (JSON).
#[pyfunction]
fn rh_validate<'py>(py: Python<'py>, morphism: &str) -> PyResult<Bound<'py, PyAny>> {
    let spec: MorphismSpec = parse_json(morphism, "morphism")?;
    let diags = validate_morphism(&spec).map_err(err)?;
    report_to_py(py, &diags)
}

/// Full balance report for declared morphism data (JSON).
#[pyfunction]
fn rh_check<'py>(py: Python<'py>, morphism: &str) -> PyResult<Bound<'py, PyAny>> {
    let spec: MorphismSpec = parse_json(morphism, "morphism")?;
    let report = check_rh(&spec).map_err(err)?;
    report_to_py(py, &report)
}

/// Local sum identity at the boundary point eta_{center, p^(-s)}.
#[pyfunction]
fn local_sum<'py>(
    py: Python<'py>,
    map: &PyMap,
    center: &str,
    log_radius: &str,
    hints: Vec<String>,
    p: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let x = TypeTwoPoint::new(Center::parse(center).map_err(err)?, parse_q(log_radius)?);
    let hints: Vec<QExact> = hints.iter().map(|s| parse_q(s)).collect::<PyResult<_>>()?;
    let report = local_sum_check(&map.inner, &x, &hints, &prime(p)?).map_err(err)?;
    report_to_py(py, &report)
}

/// Residue-direction divisor of a good-reduction lift, with certificate.
#[pyfunction]
fn charp_divisor<'py>(
    py: Python<'py>,
    map: &PyMap,
    hints: Vec<String>,
    p: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let hints: Vec<QExact> = hints.iter().map(|s| parse_q(s)).collect::<PyResult<_>>()?;
    let report = char_p_divisor(&map.inner, &hints, &prime(p)?).map_err(err)?;
    report_to_py(py, &report)
}

/// Ledger assembly of a decomposition graph (JSON with chi_x_pieces,
/// chi_total and deg alongside the graph fields).
#[pyfunction]
fn ledger_verify<'py>(py: Python<'py>, graph: &str) -> PyResult<Bound<'py, PyAny>> {
    #[derive(serde::Deserialize)]
    struct GraphFile {
        #[serde(flatten)]
        graph: TriangGraph,
        chi_x_pieces: Vec<i64>,
        chi_total: i64,
        deg: i64,
    }
    let file: GraphFile = parse_json(graph, "graph")?;
    let report = assemble_global_rh(&file.graph, &file.chi_x_pieces, file.chi_total, file.deg)
        .map_err(err)?;
    report_to_py(py, &report)
}

/// Euler characteristic of a domain given as JSON.
#[pyfunction]
fn euler_char(domain: &str) -> PyResult<i64> {
    let d: FtDomainP1 = parse_json(domain, "domain")?;
    Ok(d.euler_char())
}

#[pymodule]
fn berkrh_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMap>()?;
    m.add_class::<PyPolygon>()?;
    m.add_class::<PyDomain>()?;
    m.add_function(wrap_pyfunction!(padic_val, m)?)?;
    m.add_function(wrap_pyfunction!(germ, m)?)?;
    m.add_function(wrap_pyfunction!(critical_count, m)?)?;
    m.add_function(wrap_pyfunction!(degree_over_domain, m)?)?;
    m.add_function(wrap_pyfunction!(skeleton_probe, m)?)?;
    m.add_function(wrap_pyfunction!(rh_validate, m)?)?;
    m.add_function(wrap_pyfunction!(rh_check, m)?)?;
    m.add_function(wrap_pyfunction!(local_sum, m)?)?;
    m.add_function(wrap_pyfunction!(charp_divisor, m)?)?;
    m.add_function(wrap_pyfunction!(ledger_verify, m)?)?;
    m.add_function(wrap_pyfunction!(euler_char, m)?)?;
    Ok(())
}
