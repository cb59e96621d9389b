//! Every example runs to completion.

#[allow(dead_code)]
#[path = "../examples/berkovich_tree.rs"]
mod berkovich_tree;

#[test]
fn berkovich_tree_runs() {
    berkovich_tree::run_example().expect("berkovich_tree example should run");
}

#[allow(dead_code)]
#[path = "../examples/classify_maps.rs"]
mod classify_maps;

#[test]
fn classify_maps_runs() {
    classify_maps::run_example().expect("classify_maps example should run");
}

#[allow(dead_code)]
#[path = "../examples/continued_fractions.rs"]
mod continued_fractions;

#[test]
fn continued_fractions_runs() {
    continued_fractions::run_example().expect("continued_fractions example should run");
}

#[allow(dead_code)]
#[path = "../examples/decomposition.rs"]
mod decomposition;

#[test]
fn decomposition_runs() {
    decomposition::run_example().expect("decomposition example should run");
}

#[allow(dead_code)]
#[path = "../examples/field_arithmetic.rs"]
mod field_arithmetic;

#[test]
fn field_arithmetic_runs() {
    field_arithmetic::run_example().expect("field_arithmetic example should run");
}

#[allow(dead_code)]
#[path = "../examples/group_discreteness.rs"]
mod group_discreteness;

#[test]
fn group_discreteness_runs() {
    group_discreteness::run_example().expect("group_discreteness example should run");
}

#[allow(dead_code)]
#[path = "../examples/involution_geometry.rs"]
mod involution_geometry;

#[test]
fn involution_geometry_runs() {
    involution_geometry::run_example().expect("involution_geometry example should run");
}

#[allow(dead_code)]
#[path = "../examples/json_formats.rs"]
mod json_formats;

#[test]
fn json_formats_runs() {
    json_formats::run_example().expect("json_formats example should run");
}

#[allow(dead_code)]
#[path = "../examples/norms_and_metrics.rs"]
mod norms_and_metrics;

#[test]
fn norms_and_metrics_runs() {
    norms_and_metrics::run_example().expect("norms_and_metrics example should run");
}

#[allow(dead_code)]
#[path = "../examples/three_point_limits.rs"]
mod three_point_limits;

#[test]
fn three_point_limits_runs() {
    three_point_limits::run_example().expect("three_point_limits example should run");
}

#[allow(dead_code)]
#[path = "../examples/verify_suite.rs"]
mod verify_suite;

#[test]
fn verify_suite_runs() {
    verify_suite::run_example().expect("verify_suite example should run");
}
