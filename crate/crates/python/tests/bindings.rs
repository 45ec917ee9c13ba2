use std::ffi::CString;

use pyo3::prelude::*;
use pyo3::types::{PyDict, PyModule};

fn with_module<F: FnOnce(Python<'_>, &Bound<'_, PyDict>)>(f: F) {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "pyscldpc").unwrap();
        pyscldpc::register(&m).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("sc", m).unwrap();
        f(py, &globals);
    });
}

fn run(py: Python<'_>, globals: &Bound<'_, PyDict>, code: &str) {
    let code = CString::new(code).unwrap();
    if let Err(e) = py.run(&code, Some(globals), None) {
        panic!("{e}");
    }
}

#[test]
fn table_and_rates() {
    with_module(|py, g| {
        run(
            py,
            g,
            "t = sc.table1()\n\
             assert [r['nmu_max'] for r in t] == [200000, 194460, 195840, 198720, 198380, 197820, 199440, 189900]\n\
             assert t[0]['nmsg'] is None\n\
             r = sc.CodeSpec().rates()\n\
             assert (r['n'], r['k'], r['rate']) == (51200, 24576, (12, 25))\n",
        );
    });
}

#[test]
fn decode_round_trip() {
    with_module(|py, g| {
        run(
            py,
            g,
            "spec = sc.CodeSpec(lifting=64, coupling_len=12)\n\
             code = sc.CodeRealization.sample(spec, 3)\n\
             llrs = sc.generate_llrs(spec.codeword_len(), 25.0, 4)\n\
             out = sc.decode(code, llrs, 'CN', 10, 'COMPLETE')\n\
             assert out['success'] and out['nmu'] < out['nmu_max']\n\
             assert sc.lift([[0, -1], [1, 0]], 2) == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 1, 1, 0], [1, 0, 0, 1]]\n",
        );
    });
}

#[test]
fn errors_become_value_errors() {
    with_module(|py, g| {
        run(
            py,
            g,
            "for bad in (lambda: sc.CodeSpec(lifting=0), lambda: sc.box_plus(float('nan'), 1.0),\n\
                         lambda: sc.RunConfig.from_ini('[nope]\\nx = 1\\n'), lambda: sc.cn_update_blend([1.0])):\n\
             \x20   try:\n\
             \x20       bad()\n\
             \x20   except ValueError:\n\
             \x20       continue\n\
             \x20   raise AssertionError('no error')\n",
        );
    });
}
