#![allow(dead_code)]

use num_bigint::BigInt;
use qtem_core::dense::DenseMatrix;
use qtem_core::eigen::{cholesky, singular_values};
use qtem_core::exact::{Rational, RationalTriangle};
use qtem_core::matrices::{curl_curl_matrix, local_gradient_matrix, vector_mass_matrix};
use qtem_core::scalar::Mat6;
use qtem_core::verify::RandomTriangle;
use qtem_core::{element_matrix, MatrixKind, TriangleGeometry};
use rand::Rng;

pub const MASS_TABLE: [[i64; 6]; 6] = [
    [6, -1, -1, 0, -4, 0],
    [-1, 6, -1, 0, 0, -4],
    [-1, -1, 6, -4, 0, 0],
    [0, 0, -4, 32, 16, 16],
    [-4, 0, 0, 16, 32, 16],
    [0, -4, 0, 16, 16, 32],
];

pub const NODE_MIRROR: [usize; 6] = [0, 2, 1, 5, 4, 3];
pub const EDGE_MIRROR: [usize; 6] = [5, 4, 3, 2, 1, 0];

/// Triangle with corners `p / q`, `|p| <= 40`, `1 <= q <= 12`.
pub fn random_rational_triangle(rng: &mut impl Rng) -> RationalTriangle {
    loop {
        let corners: [[Rational; 2]; 3] = std::array::from_fn(|_| {
            std::array::from_fn(|_| {
                Rational::new(BigInt::from(rng.random_range(-40i64..=40)), BigInt::from(rng.random_range(1i64..=12)))
            })
        });
        if let Ok(t) = RationalTriangle::new(corners) {
            return t;
        }
    }
}

pub fn geometry(t: &RandomTriangle) -> TriangleGeometry {
    TriangleGeometry::new(t.corners).unwrap().with_edge_signs(t.signs)
}

/// The `x <-> y` reflection, re-wound counter-clockwise.
pub fn mirrored(t: &RandomTriangle) -> TriangleGeometry {
    let sw = |p: [f64; 2]| [p[1], p[0]];
    let c = t.corners;
    let g = TriangleGeometry::new([sw(c[0]), sw(c[2]), sw(c[1])]).unwrap();
    g.with_edge_signs([t.signs[2], t.signs[1], t.signs[0]])
}

pub fn max_abs(m: &Mat6<f64>) -> f64 {
    m.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()))
}

pub fn transpose(m: &Mat6<f64>) -> Mat6<f64> {
    std::array::from_fn(|i| std::array::from_fn(|j| m[j][i]))
}

/// Relative deviation of `kind` on `t` from its mirror partner on the
/// reflected triangle.
pub fn mirror_deviation(kind: MatrixKind, t: &RandomTriangle) -> f64 {
    let m = element_matrix(kind, &geometry(t)).entries;
    let (partner, sign, tr) = kind.mirror_partner();
    let mut p = element_matrix(partner, &mirrored(t)).entries;
    if tr {
        p = transpose(&p);
    }
    let (rv, cv) = kind.vector_sides();
    let pr = if rv { EDGE_MIRROR } else { NODE_MIRROR };
    let pc = if cv { EDGE_MIRROR } else { NODE_MIRROR };
    let mut dev = 0.0f64;
    for i in 0..6 {
        for j in 0..6 {
            dev = dev.max((p[i][j] - sign * m[pr[i]][pc[j]]).abs());
        }
    }
    dev / max_abs(&m)
}

/// Named relative deviations of the algebraic identities on one triangle.
pub fn algebraic_invariants(t: &RandomTriangle) -> Vec<(String, f64)> {
    let g = geometry(t);
    let mut out = Vec::new();
    for kind in [MatrixKind::StiffXX, MatrixKind::StiffYY, MatrixKind::StiffYX] {
        let m = element_matrix(kind, &g).entries;
        let worst = m.iter().map(|r| r.iter().sum::<f64>().abs()).fold(0.0, f64::max);
        out.push((format!("row sums {kind}"), worst / max_abs(&m)));
    }
    for (kind, w) in [(MatrixKind::NdNx, g.b), (MatrixKind::NdNy, g.c)] {
        let m = element_matrix(kind, &g).entries;
        let scale = w.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        // column j integrates the derivative of N_j
        let expected: [f64; 6] = [
            w[0] / 6.0,
            w[1] / 6.0,
            w[2] / 6.0,
            2.0 * (w[0] + w[1]) / 3.0,
            2.0 * (w[1] + w[2]) / 3.0,
            2.0 * (w[2] + w[0]) / 3.0,
        ];
        let worst = (0..6)
            .map(|j| ((0..6).map(|i| m[i][j]).sum::<f64>() - expected[j]).abs())
            .fold(0.0, f64::max);
        out.push((format!("column sums {kind}"), worst / scale));
    }
    let mass = element_matrix(MatrixKind::MassNN, &g).entries;
    out.push(("total mass_NN".into(), (mass.iter().flatten().sum::<f64>() - g.area).abs() / g.area));
    for kind in MatrixKind::ALL.into_iter().filter(|k| k.is_symmetric()) {
        let m = element_matrix(kind, &g).entries;
        let t = transpose(&m);
        let worst = (0..6).flat_map(|i| (0..6).map(move |j| (i, j))).map(|(i, j)| (m[i][j] - t[i][j]).abs()).fold(0.0, f64::max);
        out.push((format!("symmetry {kind}"), worst / max_abs(&m)));
    }
    for kind in MatrixKind::ALL {
        out.push((format!("mirror {kind}"), mirror_deviation(kind, t)));
    }
    out
}

pub struct Structure {
    /// `σ2 / σ1` of curl_curl.
    pub curl_rank_ratio: f64,
    /// `‖CC · G‖ / (‖CC‖ ‖G‖)`.
    pub annihilation: f64,
    pub vector_mass_pd: bool,
    pub gradient_singular_values: Vec<f64>,
}

impl Structure {
    /// Numerical rank of `G` at relative threshold `1e-10`.
    pub fn gradient_rank(&self) -> usize {
        let s = &self.gradient_singular_values;
        s.iter().filter(|&&x| x > 1e-10 * s[0]).count()
    }
}

pub fn structure(t: &RandomTriangle) -> Structure {
    let g = geometry(t);
    let cc = DenseMatrix::from_mat6(&curl_curl_matrix(&g));
    let grad = DenseMatrix::from_mat6(&local_gradient_matrix(&g));
    let vm = DenseMatrix::from_mat6(&vector_mass_matrix(&g));
    let sv = singular_values(&cc).unwrap();
    Structure {
        curl_rank_ratio: sv[1] / sv[0],
        annihilation: cc.matmul(&grad).frobenius_norm() / (cc.frobenius_norm() * grad.frobenius_norm()),
        vector_mass_pd: cholesky(&vm).is_ok(),
        gradient_singular_values: singular_values(&grad).unwrap(),
    }
}
