//! Python bindings: exposes the stream-cipher instance and the
//! known-answer verifier as the `estream_py` extension module.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use estream_portfolio::vectors;
use estream_portfolio::{CipherId, CipherInstance};

fn to_py_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A keyed, IV-loaded stream cipher.
#[pyclass(name = "StreamCipher")]
struct PyStreamCipher {
    inner: CipherInstance,
}

#[pymethods]
impl PyStreamCipher {
    /// StreamCipher(cipher, key, iv) — cipher is a name like "RABBIT" or
    /// "SALSA20_12"; key and iv are bytes.
    #[new]
    fn new(cipher: &str, key: &[u8], iv: &[u8]) -> PyResult<Self> {
        let id: CipherId = cipher.parse().map_err(to_py_err)?;
        let inner = CipherInstance::new(id, key, iv).map_err(to_py_err)?;
        Ok(PyStreamCipher { inner })
    }

    /// The next `n` keystream bytes.
    fn keystream<'py>(&mut self, py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyBytes>> {
        let bytes = self.inner.keystream(n).map_err(to_py_err)?;
        Ok(PyBytes::new(py, &bytes))
    }

    /// XOR `data` with the next keystream bytes (encrypt == decrypt).
    fn apply<'py>(&mut self, py: Python<'py>, data: &[u8]) -> PyResult<Bound<'py, PyBytes>> {
        let out = self.inner.apply(data).map_err(to_py_err)?;
        Ok(PyBytes::new(py, &out))
    }

    /// Rewind to position 0 under a (possibly new) IV.
    fn reset(&mut self, iv: &[u8]) -> PyResult<()> {
        self.inner.reset(iv).map_err(to_py_err)
    }

    /// Jump to an absolute keystream offset (Salsa20 family only).
    fn seek(&mut self, offset: u64) -> PyResult<()> {
        self.inner.seek(offset).map_err(to_py_err)
    }

    #[getter]
    fn position(&self) -> u64 {
        self.inner.position()
    }

    #[getter]
    fn cipher(&self) -> String {
        self.inner.id().to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "StreamCipher({}, position={})",
            self.inner.id(),
            self.inner.position()
        )
    }
}

/// Verify known-answer vectors from text in the bundled file format.
/// Returns (total, passed, failures) where each failure is a dict.
#[pyfunction]
fn verify_vectors(py: Python<'_>, text: &str) -> PyResult<(usize, usize, Vec<Py<PyAny>>)> {
    let records = vectors::load_vectors(text).map_err(to_py_err)?;
    let report = vectors::verify(&records);
    let mut failures = Vec::new();
    for f in &report.failures {
        let d = pyo3::types::PyDict::new(py);
        d.set_item("record", f.record)?;
        d.set_item("check", f.check)?;
        d.set_item("offset", f.offset)?;
        d.set_item("expected", &f.expected)?;
        d.set_item("actual", &f.actual)?;
        failures.push(d.into_any().unbind());
    }
    Ok((report.total, report.passed, failures))
}

/// The known-answer corpus bundled with the crate, as text.
#[pyfunction]
fn bundled_vectors() -> &'static str {
    vectors::BUNDLED_VECTORS
}

/// Names of all selectable ciphers.
#[pyfunction]
fn cipher_names() -> Vec<&'static str> {
    CipherId::ALL.iter().map(|c| c.name()).collect()
}

#[pymodule]
fn estream_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyStreamCipher>()?;
    m.add_function(wrap_pyfunction!(verify_vectors, m)?)?;
    m.add_function(wrap_pyfunction!(bundled_vectors, m)?)?;
    m.add_function(wrap_pyfunction!(cipher_names, m)?)?;
    Ok(())
}
