//! Inputs shared by the benchmarks in `benches/`.

use homcx::generators::{boundary_simplex, points, simplex};
use homcx::SimplicialComplex;

/// The complexes the pipeline is routinely checked on, by name.
pub fn suite() -> Vec<(&'static str, SimplicialComplex)> {
    vec![
        ("boundary_delta2", boundary_simplex(2)),
        ("delta2", simplex(2)),
        ("boundary_delta3", boundary_simplex(3)),
        ("two_points", points(2)),
    ]
}
