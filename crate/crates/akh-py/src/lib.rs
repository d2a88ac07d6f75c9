use pyo3::prelude::*;

#[pymodule]
fn akh_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
