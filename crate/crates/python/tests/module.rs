use positroidal_py::init_module as init_module_for_tests;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module(script: &str) {
    pyo3::append_to_inittab!(init_module_for_tests);
    Python::attach(|py| {
        let globals = PyDict::new(py);
        let code = std::ffi::CString::new(script).unwrap();
        py.run(&code, Some(&globals), None).unwrap_or_else(|e| panic!("{e}"));
    });
}

#[test]
fn module_round_trip() {
    with_module(
        r#"
import positroidal as p
t = p.Tableau("3;4;7", 3, 7)
w = p.wt(t)
assert len(w) == 35 and w[-1] == 2, w
s = p.subdivide(t)
assert s.classification["isPositroidal"]
assert p.regular_subdivision(3, 7, w).canonical_key() == s.canonical_key()
assert p.split_census(2, 5, compatibility=False)["splitCount"] == 5
d = t.fundamental_decomposition()
assert len(d["v"]) == 8
"#,
    );
}
