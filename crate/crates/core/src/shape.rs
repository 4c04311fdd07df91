//! Scalar quadratic shape functions `N`, their gradients, and the vector
//! edge shape functions `(U, V)`.
//!
//! Scalar order: corners 1, 2, 3, then midpoints of edges 12, 23, 31.
//! Vector order: `l1 L1 ∇L2, l2 L2 ∇L3, l3 L3 ∇L1, -l1 L2 ∇L1, -l2 L3 ∇L2,
//! -l3 L1 ∇L3`, i.e. basis `i` and `i + 3` both live on edge `i`.

use serde::Serialize;

use crate::geometry::TriangleGeometry;

pub type AreaCoords = [f64; 3];

/// Everything the shape functions produce at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeEval {
    pub n: [f64; 6],
    pub dn: [[f64; 2]; 6],
    pub u: [f64; 6],
    pub v: [f64; 6],
    pub curl_uv: [f64; 6],
}

pub fn evaluate(geom: &TriangleGeometry, l: AreaCoords) -> ShapeEval {
    let (u, v) = eval_uv(geom, l);
    ShapeEval {
        n: eval_n(l),
        dn: grad_n(geom, l),
        u,
        v,
        curl_uv: curl_uv(geom),
    }
}

pub fn eval_n(l: AreaCoords) -> [f64; 6] {
    let [l1, l2, l3] = l;
    [
        l1 * (2.0 * l1 - 1.0),
        l2 * (2.0 * l2 - 1.0),
        l3 * (2.0 * l3 - 1.0),
        4.0 * l1 * l2,
        4.0 * l2 * l3,
        4.0 * l3 * l1,
    ]
}

/// Partial derivatives of `N_i` with respect to `(L1, L2, L3)`, treating the
/// three coordinates as independent.
fn dn_dl(l: AreaCoords) -> [[f64; 3]; 6] {
    let [l1, l2, l3] = l;
    [
        [4.0 * l1 - 1.0, 0.0, 0.0],
        [0.0, 4.0 * l2 - 1.0, 0.0],
        [0.0, 0.0, 4.0 * l3 - 1.0],
        [4.0 * l2, 4.0 * l1, 0.0],
        [0.0, 4.0 * l3, 4.0 * l2],
        [4.0 * l3, 0.0, 4.0 * l1],
    ]
}

/// Row `i` is `(∂N_i/∂x, ∂N_i/∂y)`.
pub fn grad_n(geom: &TriangleGeometry, l: AreaCoords) -> [[f64; 2]; 6] {
    let inv = 1.0 / (2.0 * geom.area);
    let d = dn_dl(l);
    std::array::from_fn(|i| {
        let mut g = [0.0; 2];
        for k in 0..3 {
            g[0] += d[i][k] * geom.b[k];
            g[1] += d[i][k] * geom.c[k];
        }
        [g[0] * inv, g[1] * inv]
    })
}

pub fn eval_uv(geom: &TriangleGeometry, l: AreaCoords) -> ([f64; 6], [f64; 6]) {
    let inv = 1.0 / (2.0 * geom.area);
    let [l1, l2, l3] = geom.edge_len;
    let [b1, b2, b3] = geom.b;
    let [c1, c2, c3] = geom.c;
    let [s1, s2, s3] = l;
    let u = [
        l1 * b2 * s1,
        l2 * b3 * s2,
        l3 * b1 * s3,
        -l1 * b1 * s2,
        -l2 * b2 * s3,
        -l3 * b3 * s1,
    ]
    .map(|x| x * inv);
    let v = [
        l1 * c2 * s1,
        l2 * c3 * s2,
        l3 * c1 * s3,
        -l1 * c1 * s2,
        -l2 * c2 * s3,
        -l3 * c3 * s1,
    ]
    .map(|x| x * inv);
    (u, v)
}

/// `(sign, edge, p, q)` such that vector basis `i` is `sign * l_edge * L_p ∇L_q`.
pub(crate) const VECTOR_BASIS: [(f64, usize, usize, usize); 6] = [
    (1.0, 0, 0, 1),
    (1.0, 1, 1, 2),
    (1.0, 2, 2, 0),
    (-1.0, 0, 1, 0),
    (-1.0, 1, 2, 1),
    (-1.0, 2, 0, 2),
];

/// `∂V_i/∂x - ∂U_i/∂y` for each vector basis function (constant over the
/// element).
pub fn curl_uv(geom: &TriangleGeometry) -> [f64; 6] {
    let inv = 1.0 / (4.0 * geom.area * geom.area);
    let (b, c) = (geom.b, geom.c);
    VECTOR_BASIS.map(|(sign, k, p, q)| sign * geom.edge_len[k] * (b[p] * c[q] - c[p] * b[q]) * inv)
}
