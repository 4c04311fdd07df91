//! Symmetric quadrature rules on the triangle, used as the floating-point
//! oracle for the closed-form matrices.
//!
//! Weights are normalized to sum to one so that `∫ f ≈ A Σ w_q f(L_q)`.
//! Every rule is checked against the exact monomial integrals when it is
//! built.

use crate::error::{Error, Result};
use crate::exact::{integrate_monomial, rational_to_f64};
use crate::geometry::TriangleGeometry;
use crate::matrices::{Field, MatrixKind};
use crate::scalar::Mat6;
use crate::shape::{eval_n, eval_uv, grad_n, AreaCoords};

pub const MAX_DEGREE: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub points: Vec<AreaCoords>,
    pub weights: Vec<f64>,
    pub exactness_degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `Σ w_q f(L_q)`, i.e. the integral of `f` divided by the area.
    pub fn integrate(&self, f: impl Fn(AreaCoords) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&l, &w)| w * f(l)).sum()
    }

    /// Largest relative deviation from the exact monomial integrals over all
    /// monomials of total degree `<= degree`.
    pub fn monomial_error(&self, degree: usize) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..=degree as u32 {
            for j in 0..=(degree as u32 - i) {
                for k in 0..=(degree as u32 - i - j) {
                    let exact = rational_to_f64(&integrate_monomial(i, j, k));
                    let q = self.integrate(|l| l[0].powi(i as i32) * l[1].powi(j as i32) * l[2].powi(k as i32));
                    worst = worst.max((q - exact).abs() / exact);
                }
            }
        }
        worst
    }

    fn self_check(self) -> Self {
        let wsum: f64 = self.weights.iter().sum();
        assert!((wsum - 1.0).abs() <= 1e-14, "weights sum to {wsum}");
        for l in &self.points {
            assert!(l.iter().all(|&x| (-1e-15..=1.0 + 1e-15).contains(&x)), "point {l:?} outside triangle");
        }
        let err = self.monomial_error(self.exactness_degree);
        assert!(err <= 1e-14, "rule of degree {} misses monomials by {err:e}", self.exactness_degree);
        self
    }
}

/// Smallest embedded rule exact to at least `min_degree`.
pub fn make_rule(min_degree: usize) -> Result<QuadratureRule> {
    let rule = match min_degree {
        0..=2 => three_point(),
        3..=5 => seven_point(),
        6..=MAX_DEGREE => collapsed_gauss(6),
        _ => return Err(Error::UnsupportedDegree(min_degree)),
    };
    Ok(rule.self_check())
}

fn orbit3(a: f64) -> [AreaCoords; 3] {
    let b = 1.0 - 2.0 * a;
    [[b, a, a], [a, b, a], [a, a, b]]
}

/// Degree-2 rule with three interior points.
fn three_point() -> QuadratureRule {
    QuadratureRule {
        points: orbit3(1.0 / 6.0).to_vec(),
        weights: vec![1.0 / 3.0; 3],
        exactness_degree: 2,
    }
}

/// Degree-5 seven-point rule (centroid plus two symmetric orbits).
fn seven_point() -> QuadratureRule {
    let s15 = 15f64.sqrt();
    let (a1, w1) = ((6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
    let (a2, w2) = ((6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
    let mut points = vec![[1.0 / 3.0; 3]];
    let mut weights = vec![9.0 / 40.0];
    points.extend(orbit3(a1));
    weights.extend([w1; 3]);
    points.extend(orbit3(a2));
    weights.extend([w2; 3]);
    QuadratureRule {
        points,
        weights,
        exactness_degree: 5,
    }
}

/// Gauss–Legendre nodes and weights on `[0, 1]` (weights sum to one).
fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Newton on P_n from the Chebyshev-like initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 + x) / 2.0, w / 2.0));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Tensor Gauss rule mapped through the collapse `L1 = u, L2 = (1-u) v`;
/// exact to degree `2n - 2`.
fn collapsed_gauss(n: usize) -> QuadratureRule {
    let gl = gauss_legendre_unit(n);
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for &(u, wu) in &gl {
        for &(v, wv) in &gl {
            let l2 = (1.0 - u) * v;
            points.push([u, l2, (1.0 - u) - l2]);
            weights.push(2.0 * wu * wv * (1.0 - u));
        }
    }
    QuadratureRule {
        points,
        weights,
        exactness_degree: 2 * n - 2,
    }
}

/// `M_ij = A Σ_q w_q f_i(q) g_j(q)`.
pub fn integrate_bilinear(
    f: impl Fn(AreaCoords) -> [f64; 6],
    g: impl Fn(AreaCoords) -> [f64; 6],
    geom: &TriangleGeometry,
    rule: &QuadratureRule,
) -> Mat6<f64> {
    let mut m = [[0.0; 6]; 6];
    for (&l, &w) in rule.points.iter().zip(&rule.weights) {
        let (fv, gv) = (f(l), g(l));
        for i in 0..6 {
            for j in 0..6 {
                m[i][j] += w * fv[i] * gv[j];
            }
        }
    }
    m.map(|row| row.map(|x| x * geom.area))
}

/// Pointwise values of a factor. `Uy` and `Vx` use that each vector basis
/// function is linear and homogeneous in `L`, so
/// `∂U_i/∂y = Σ_k U_i(e_k) c_k / (2A)`.
pub fn eval_field(field: Field, geom: &TriangleGeometry, l: AreaCoords) -> [f64; 6] {
    match field {
        Field::N => eval_n(l),
        Field::Nx => grad_n(geom, l).map(|g| g[0]),
        Field::Ny => grad_n(geom, l).map(|g| g[1]),
        Field::U => eval_uv(geom, l).0,
        Field::V => eval_uv(geom, l).1,
        Field::Uy | Field::Vx => {
            let inv = 1.0 / (2.0 * geom.area);
            let mut out = [0.0; 6];
            for k in 0..3 {
                let mut e = [0.0; 3];
                e[k] = 1.0;
                let (u, v) = eval_uv(geom, e);
                for i in 0..6 {
                    out[i] += match field {
                        Field::Uy => u[i] * geom.c[k] * inv,
                        _ => v[i] * geom.b[k] * inv,
                    };
                }
            }
            out
        }
    }
}

/// Quadrature evaluation of the integral defining `kind`.
pub fn oracle_matrix(kind: MatrixKind, geom: &TriangleGeometry, rule: &QuadratureRule) -> Mat6<f64> {
    let (f, g) = kind.factors();
    integrate_bilinear(|l| eval_field(f, geom, l), |l| eval_field(g, geom, l), geom, rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::element_matrix;

    #[test]
    fn rule_selection() {
        let r2 = make_rule(2).unwrap();
        assert_eq!(r2.len(), 3);
        assert!(r2.exactness_degree >= 2);
        let r5 = make_rule(5).unwrap();
        assert!(r5.len() >= 7);
        assert!(r5.exactness_degree >= 5);
        assert!(r5.monomial_error(5) <= 1e-14);
        let r10 = make_rule(10).unwrap();
        assert!(r10.exactness_degree >= 10);
        assert_eq!(make_rule(11), Err(Error::UnsupportedDegree(11)));
    }

    #[test]
    fn seven_point_rule_is_not_degree_six() {
        assert!(make_rule(5).unwrap().monomial_error(6) > 1e-6);
    }

    #[test]
    fn mass_from_quadrature_matches_table() {
        let g = TriangleGeometry::new([[0.3, -0.2], [1.7, 0.4], [0.1, 1.3]]).unwrap();
        let q = integrate_bilinear(eval_n, eval_n, &g, &make_rule(5).unwrap());
        let m = element_matrix(MatrixKind::MassNN, &g).entries;
        for i in 0..6 {
            for j in 0..6 {
                assert!((q[i][j] - m[i][j]).abs() <= 1e-13 * g.area);
            }
        }
    }

    #[test]
    fn stiff_yx_on_unit_triangle() {
        let g = TriangleGeometry::new([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        let q = oracle_matrix(MatrixKind::StiffYX, &g, &make_rule(2).unwrap());
        let m = element_matrix(MatrixKind::StiffYX, &g).entries;
        // 3 b1 c1 / (12 A) = 3/6
        assert!((q[0][0] - 0.5).abs() < 1e-14);
        for i in 0..6 {
            for j in 0..6 {
                assert!((q[i][j] - m[i][j]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn zero_field_gives_zero_matrix() {
        let g = TriangleGeometry::new([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        let q = integrate_bilinear(|_| [0.0; 6], |_| [0.0; 6], &g, &make_rule(5).unwrap());
        assert_eq!(q, [[0.0; 6]; 6]);
    }
}
