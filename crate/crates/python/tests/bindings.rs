use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module<F: FnOnce(&Bound<'_, PyDict>)>(f: F) {
    Python::attach(|py| {
        let module = pyo3::wrap_pymodule!(loopbound_py::loopbound_module)(py);
        let globals = PyDict::new(py);
        globals.set_item("lb", module).unwrap();
        globals.set_item("math", py.import("math").unwrap()).unwrap();
        f(&globals);
    });
}

fn eval(globals: &Bound<'_, PyDict>, code: &str) -> f64 {
    let code = std::ffi::CString::new(code).unwrap();
    globals.py().eval(&code, Some(globals), None).unwrap().extract().unwrap()
}

#[test]
fn scalar_functions_match_closed_forms() {
    with_module(|g| {
        assert!((eval(g, "lb.sn(1.0, 0.3)") - 0.3f64.sin()).abs() < 1e-15);
        assert!((eval(g, "lb.model_ball_volume(0.0, 2, 1.0)") - std::f64::consts::PI).abs() < 1e-12);
        assert!(eval(g, "lb.tan_k(1.0, math.pi / 2)").is_infinite());
    });
}

#[test]
fn great_circle_square_has_zero_turning() {
    with_module(|g| {
        let pts = "[lb.Point.unit([math.cos(t), math.sin(t), 0.0]) for t in (0, math.pi / 2, math.pi, 3 * math.pi / 2)]";
        let sphere = "lb.ModelSpace.sphere(1.0, 2)";
        assert_eq!(eval(g, &format!("lb.turning_angle({sphere}, {pts})")), 0.0);
        assert!((eval(g, &format!("lb.loop_length({sphere}, {pts})")) - std::f64::consts::TAU).abs() < 1e-12);
    });
}

#[test]
fn reports_come_back_as_dicts() {
    with_module(|g| {
        let n = eval(g, "float(len(lb.run_scenario('corollary-constants')['verdicts']))");
        assert!(n >= 1.0);
        let ok = eval(g, "float(all(v['holds'] for v in lb.run_scenario('great-circle-equality')['verdicts']))");
        assert_eq!(ok, 1.0);
    });
}

#[test]
fn bad_inputs_raise_value_error() {
    with_module(|g| {
        let code = std::ffi::CString::new("lb.ModelSpace.flat_cone(-1.0, 1.0)").unwrap();
        let e = g.py().eval(&code, Some(g), None).unwrap_err();
        assert!(e.is_instance_of::<pyo3::exceptions::PyValueError>(g.py()));
    });
}
