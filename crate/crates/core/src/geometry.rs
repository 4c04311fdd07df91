//! Per-triangle geometry: affine coefficients of the area coordinates,
//! element area and signed edge lengths.

use serde::Serialize;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Relative degeneracy threshold: a triangle is rejected when
/// `|2A| < DEGENERACY_TOL * (longest edge)^2`.
pub const DEGENERACY_TOL: f64 = 1e-14;

/// Sign carried by an edge length `l_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeSign {
    Plus,
    Minus,
}

impl EdgeSign {
    pub fn value(self) -> f64 {
        match self {
            EdgeSign::Plus => 1.0,
            EdgeSign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            EdgeSign::Plus => EdgeSign::Minus,
            EdgeSign::Minus => EdgeSign::Plus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            EdgeSign::Plus => '+',
            EdgeSign::Minus => '-',
        }
    }

    pub fn from_char(ch: char) -> Option<Self> {
        match ch {
            '+' => Some(EdgeSign::Plus),
            '-' => Some(EdgeSign::Minus),
            _ => None,
        }
    }
}

/// Geometry of one straight-sided triangle.
///
/// Corners are stored counter-clockwise. Index `k` of `a`, `b`, `c` follows
/// the cyclic convention `(k, l, m)`:
///
/// ```text
/// a_k = x_l y_m - x_m y_l,   b_k = y_l - y_m,   c_k = x_m - x_l
/// ```
///
/// so that `L_k = (a_k + b_k x + c_k y) / (2A)`. Edge `k` runs from corner
/// `k` to corner `k+1` (cyclically); its unsigned length is
/// `sqrt(b_m^2 + c_m^2)` with `m` the corner opposite to it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriangleGeometry {
    pub corners: [Point; 3],
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub c: [f64; 3],
    pub area: f64,
    /// Signed edge lengths `l_k = edge_sign[k] * |l_k|`.
    pub edge_len: [f64; 3],
    pub edge_sign: [EdgeSign; 3],
    /// True when the input was clockwise and corners 2 and 3 were swapped.
    pub reordered: bool,
}

impl TriangleGeometry {
    pub fn new(corners: [Point; 3]) -> Result<Self> {
        let mut corners = corners;
        let twice_area = signed_twice_area(&corners);
        let longest = (0..3)
            .map(|k| {
                let (p, q) = (corners[k], corners[(k + 1) % 3]);
                (q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)
            })
            .fold(0.0, f64::max);
        let tolerance = DEGENERACY_TOL * longest;
        if !twice_area.is_finite() || twice_area.abs() < tolerance || longest == 0.0 {
            return Err(Error::DegenerateTriangle {
                twice_area: twice_area.abs(),
                tolerance,
            });
        }
        let reordered = twice_area < 0.0;
        if reordered {
            corners.swap(1, 2);
        }

        let mut a = [0.0; 3];
        let mut b = [0.0; 3];
        let mut c = [0.0; 3];
        for k in 0..3 {
            let [xl, yl] = corners[(k + 1) % 3];
            let [xm, ym] = corners[(k + 2) % 3];
            a[k] = xl * ym - xm * yl;
            b[k] = yl - ym;
            c[k] = xm - xl;
        }
        let area = 0.5 * signed_twice_area(&corners);
        let edge_len = std::array::from_fn(|k| {
            let m = (k + 2) % 3;
            (b[m] * b[m] + c[m] * c[m]).sqrt()
        });

        Ok(Self {
            corners,
            a,
            b,
            c,
            area,
            edge_len,
            edge_sign: [EdgeSign::Plus; 3],
            reordered,
        })
    }

    /// Returns a copy with the given edge signs applied to `edge_len`.
    pub fn with_edge_signs(&self, signs: [EdgeSign; 3]) -> Self {
        let mut g = self.clone();
        for k in 0..3 {
            g.edge_len[k] = self.edge_len[k].abs() * signs[k].value();
        }
        g.edge_sign = signs;
        g
    }

    pub fn edge_len_abs(&self) -> [f64; 3] {
        self.edge_len.map(f64::abs)
    }

    pub fn area_coordinates(&self, point: Point) -> [f64; 3] {
        let inv = 1.0 / (2.0 * self.area);
        std::array::from_fn(|k| (self.a[k] + self.b[k] * point[0] + self.c[k] * point[1]) * inv)
    }

    /// Cartesian point with the given area coordinates.
    pub fn point_at(&self, l: [f64; 3]) -> Point {
        let mut p = [0.0; 2];
        for k in 0..3 {
            p[0] += l[k] * self.corners[k][0];
            p[1] += l[k] * self.corners[k][1];
        }
        p
    }

    /// Cheap identity of the geometry (corner bits and edge signs).
    pub fn fingerprint(&self) -> u64 {
        // FNV-1a over the raw bits
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |v: u64| {
            for byte in v.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        for p in &self.corners {
            eat(p[0].to_bits());
            eat(p[1].to_bits());
        }
        for s in &self.edge_sign {
            eat(matches!(s, EdgeSign::Minus) as u64);
        }
        h
    }
}

fn signed_twice_area(p: &[Point; 3]) -> f64 {
    (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const UNIT: [Point; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

    #[test]
    fn unit_right_triangle() {
        let g = TriangleGeometry::new(UNIT).unwrap();
        assert_eq!(g.area, 0.5);
        assert_eq!(g.b, [-1.0, 1.0, 0.0]);
        assert_eq!(g.c, [-1.0, 0.0, 1.0]);
        assert_eq!(g.edge_len[0], 1.0);
        assert!((g.edge_len[1] - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(g.edge_len[2], 1.0);
        assert_eq!(g.edge_sign, [EdgeSign::Plus; 3]);
        assert!(!g.reordered);
    }

    #[test]
    fn collinear_is_degenerate() {
        let err = TriangleGeometry::new([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).unwrap_err();
        assert!(matches!(err, Error::DegenerateTriangle { .. }));
        let err = TriangleGeometry::new([[1.0, 1.0], [1.0, 1.0], [1.0, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::DegenerateTriangle { .. }));
    }

    #[test]
    fn translated_triangle_keeps_b_c_area() {
        let g0 = TriangleGeometry::new(UNIT).unwrap();
        let g1 = TriangleGeometry::new([[5.0, 7.0], [6.0, 7.0], [5.0, 8.0]]).unwrap();
        assert_eq!(g0.b, g1.b);
        assert_eq!(g0.c, g1.c);
        assert_eq!(g0.area, g1.area);
    }

    #[test]
    fn area_coordinates_examples() {
        let g = TriangleGeometry::new(UNIT).unwrap();
        assert_eq!(g.area_coordinates([0.0, 0.0]), [1.0, 0.0, 0.0]);
        assert_eq!(g.area_coordinates([0.5, 0.5]), [0.0, 0.5, 0.5]);
        let l = g.area_coordinates([1.0 / 3.0, 1.0 / 3.0]);
        for v in l {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn clockwise_input_is_reordered() {
        let cw = TriangleGeometry::new([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]).unwrap();
        let ccw = TriangleGeometry::new(UNIT).unwrap();
        assert!(cw.reordered);
        assert_eq!(cw.corners, ccw.corners);
        assert_eq!(cw.b, ccw.b);
        assert_eq!(cw.c, ccw.c);
        assert_eq!(cw.area, ccw.area);
    }

    #[test]
    fn edge_signs_scale_lengths() {
        let g = TriangleGeometry::new(UNIT).unwrap();
        let s = g.with_edge_signs([EdgeSign::Minus, EdgeSign::Plus, EdgeSign::Minus]);
        assert_eq!(s.edge_len[0], -1.0);
        assert_eq!(s.edge_len[2], -1.0);
        assert_eq!(s.edge_len_abs(), g.edge_len_abs());
    }

    fn triangle() -> impl Strategy<Value = [Point; 3]> {
        proptest::array::uniform3(proptest::array::uniform2(-10.0f64..10.0)).prop_filter(
            "non-degenerate",
            |p| {
                let t = signed_twice_area(p).abs();
                let l = (0..3)
                    .map(|k| {
                        let (a, b) = (p[k], p[(k + 1) % 3]);
                        (b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)
                    })
                    .fold(0.0, f64::max);
                t > 1e-3 * l
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn coefficient_identities(p in triangle()) {
            let g = TriangleGeometry::new(p).unwrap();
            let bmax = g.b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let cmax = g.c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            prop_assert!((g.b.iter().sum::<f64>()).abs() <= 1e-12 * bmax);
            prop_assert!((g.c.iter().sum::<f64>()).abs() <= 1e-12 * cmax);
            let asum: f64 = g.a.iter().sum();
            prop_assert!((asum - 2.0 * g.area).abs() <= 1e-12 * (2.0 * g.area).max(g.a.iter().fold(0.0f64, |m, v| m.max(v.abs()))));
            prop_assert!(g.area > 0.0);
            for k in 0..3 {
                let m = (k + 2) % 3;
                let edge = [g.corners[(k + 1) % 3][0] - g.corners[k][0], g.corners[(k + 1) % 3][1] - g.corners[k][1]];
                let len2 = edge[0] * edge[0] + edge[1] * edge[1];
                prop_assert!((g.edge_len[k].powi(2) - (g.b[m].powi(2) + g.c[m].powi(2))).abs() <= 1e-12 * len2);
                prop_assert!((g.edge_len[k].powi(2) - len2).abs() <= 1e-12 * len2);
            }
        }

        #[test]
        fn corners_map_to_unit_coordinates(p in triangle()) {
            let g = TriangleGeometry::new(p).unwrap();
            for k in 0..3 {
                let l = g.area_coordinates(g.corners[k]);
                for j in 0..3 {
                    let expect = if j == k { 1.0 } else { 0.0 };
                    prop_assert!((l[j] - expect).abs() <= 1e-14 * 1e2, "{l:?}");
                }
            }
        }

        #[test]
        fn translation_invariance(p in triangle(), dx in -5.0f64..5.0, dy in -5.0f64..5.0) {
            let g0 = TriangleGeometry::new(p).unwrap();
            let g1 = TriangleGeometry::new(p.map(|q| [q[0] + dx, q[1] + dy])).unwrap();
            for k in 0..3 {
                prop_assert!((g0.b[k] - g1.b[k]).abs() <= 1e-12);
                prop_assert!((g0.c[k] - g1.c[k]).abs() <= 1e-12);
            }
            prop_assert!((g0.area - g1.area).abs() <= 1e-11 * g0.area.max(1.0));
        }

        #[test]
        fn winding_normalization(p in triangle()) {
            let fwd = TriangleGeometry::new(p).unwrap();
            let rev = TriangleGeometry::new([p[0], p[2], p[1]]).unwrap();
            prop_assert_eq!(fwd.corners, rev.corners);
            prop_assert_eq!(fwd.b, rev.b);
            prop_assert_eq!(fwd.c, rev.c);
            prop_assert_eq!(fwd.area, rev.area);
            prop_assert!(fwd.reordered != rev.reordered);
        }
    }
}
