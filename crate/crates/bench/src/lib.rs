//! Shared fixtures for the benchmarks.

use qtem_core::{EdgeSign, TriangleGeometry};

pub const CORNERS: [[f64; 2]; 3] = [[0.1, -0.3], [1.2, 0.25], [0.4, 0.9]];

pub fn sample_triangle() -> TriangleGeometry {
    TriangleGeometry::new(CORNERS)
        .expect("fixed triangle is valid")
        .with_edge_signs([EdgeSign::Plus, EdgeSign::Minus, EdgeSign::Plus])
}
