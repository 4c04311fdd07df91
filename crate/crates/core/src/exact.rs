//! Exact rational oracle: polynomials in the area coordinates
//! `(L1, L2, L3)` with rational coefficients, integrated with the factorial
//! formula
//!
//! ```text
//! ∫∫ L1^i L2^j L3^k dx dy = 2A · i! j! k! / (i + j + k + 2)!
//! ```
//!
//! All integrals are returned as the factor multiplying `A`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrices::{ClosedFormInputs, Field, MatrixKind};
use crate::scalar::Mat6;
use crate::shape::VECTOR_BASIS;

pub type Rational = BigRational;

fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `2 i! j! k! / (i + j + k + 2)!`, the integral of `L1^i L2^j L3^k` in
/// units of the element area.
pub fn integrate_monomial(i: u32, j: u32, k: u32) -> Rational {
    let num = BigInt::from(2) * factorial(i) * factorial(j) * factorial(k);
    Rational::new(num, factorial(i + j + k + 2))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AreaMonomial {
    pub exponents: [u32; 3],
    pub coefficient: Rational,
}

/// Canonical polynomial in `(L1, L2, L3)`: terms sorted by exponent triple,
/// duplicates merged, zero coefficients dropped.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AreaPolynomial {
    terms: BTreeMap<[u32; 3], Rational>,
}

impl AreaPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    /// The coordinate `L_{k+1}`.
    pub fn coordinate(k: usize) -> Self {
        let mut e = [0; 3];
        e[k] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exponents: [u32; 3], coefficient: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(exponents, coefficient);
        p
    }

    fn add_term(&mut self, exponents: [u32; 3], coefficient: Rational) {
        if coefficient.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponents).or_insert_with(Rational::zero);
        *entry += coefficient;
        if entry.is_zero() {
            self.terms.remove(&exponents);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomials(&self) -> impl Iterator<Item = AreaMonomial> + '_ {
        self.terms.iter().map(|(e, c)| AreaMonomial {
            exponents: *e,
            coefficient: c.clone(),
        })
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        let mut p = Self::zero();
        for (e, c) in &self.terms {
            p.add_term(*e, c * factor);
        }
        p
    }

    /// Partial derivative with respect to `L_{k+1}`, the three coordinates
    /// treated as independent.
    pub fn derivative(&self, k: usize) -> Self {
        let mut p = Self::zero();
        for (e, c) in &self.terms {
            if e[k] > 0 {
                let mut d = *e;
                d[k] -= 1;
                p.add_term(d, c * Rational::from_integer(BigInt::from(e[k])));
            }
        }
        p
    }

    /// Exact integral over the element, as a multiple of its area.
    pub fn integrate(&self) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| c * integrate_monomial(e[0], e[1], e[2]))
            .fold(Rational::zero(), |acc, t| acc + t)
    }

    /// Integral of `self * other` without materialising the product.
    pub fn integrate_product(&self, other: &Self) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            for (f, d) in &other.terms {
                acc += c * d * integrate_monomial(e[0] + f[0], e[1] + f[1], e[2] + f[2]);
            }
        }
        acc
    }

    pub fn evaluate(&self, l: &[Rational; 3]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for k in 0..3 {
                for _ in 0..e[k] {
                    t *= &l[k];
                }
            }
            acc += t;
        }
        acc
    }
}

impl Add for &AreaPolynomial {
    type Output = AreaPolynomial;

    fn add(self, rhs: &AreaPolynomial) -> AreaPolynomial {
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(*e, c.clone());
        }
        p
    }
}

impl Mul for &AreaPolynomial {
    type Output = AreaPolynomial;

    fn mul(self, rhs: &AreaPolynomial) -> AreaPolynomial {
        let mut p = AreaPolynomial::zero();
        for (e, c) in &self.terms {
            for (f, d) in &rhs.terms {
                p.add_term([e[0] + f[0], e[1] + f[1], e[2] + f[2]], c * d);
            }
        }
        p
    }
}

/// Triangle with exact rational corners, wound counter-clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalTriangle {
    pub corners: [[Rational; 2]; 3],
    pub b: [Rational; 3],
    pub c: [Rational; 3],
    pub area: Rational,
}

impl RationalTriangle {
    pub fn new(corners: [[Rational; 2]; 3]) -> Result<Self> {
        let mut corners = corners;
        let twice = |p: &[[Rational; 2]; 3]| {
            (&p[1][0] - &p[0][0]) * (&p[2][1] - &p[0][1]) - (&p[2][0] - &p[0][0]) * (&p[1][1] - &p[0][1])
        };
        let mut twice_area = twice(&corners);
        if twice_area.is_zero() {
            return Err(Error::DegenerateTriangle {
                twice_area: 0.0,
                tolerance: 0.0,
            });
        }
        if twice_area.is_negative() {
            corners.swap(1, 2);
            twice_area = -twice_area;
        }
        let b = std::array::from_fn(|k| &corners[(k + 1) % 3][1] - &corners[(k + 2) % 3][1]);
        let c = std::array::from_fn(|k| &corners[(k + 2) % 3][0] - &corners[(k + 1) % 3][0]);
        Ok(Self {
            corners,
            b,
            c,
            area: twice_area / Rational::from_integer(BigInt::from(2)),
        })
    }

    /// Exact conversion of floating-point corners (every finite `f64` is a
    /// dyadic rational).
    pub fn from_f64(corners: [[f64; 2]; 3]) -> Result<Self> {
        let conv = |x: f64| {
            Rational::from_float(x).ok_or_else(|| Error::InvalidDimensions(format!("non-finite coordinate {x}")))
        };
        let mut out: [[Rational; 2]; 3] = Default::default();
        for k in 0..3 {
            out[k] = [conv(corners[k][0])?, conv(corners[k][1])?];
        }
        Self::new(out)
    }

    /// Closed-form inputs with every `l_k` replaced by one.
    pub fn stripped_inputs(&self) -> ClosedFormInputs<Rational> {
        ClosedFormInputs {
            b: self.b.clone(),
            c: self.c.clone(),
            l: std::array::from_fn(|_| Rational::one()),
            area: self.area.clone(),
        }
    }

    /// `Σ_k ∂p/∂L_k · w_k / (2A)`: the Cartesian derivative along the
    /// direction whose area-coordinate slopes are `w / (2A)`.
    fn cartesian_derivative(&self, p: &AreaPolynomial, w: &[Rational; 3]) -> AreaPolynomial {
        let inv = Rational::one() / (&self.area * Rational::from_integer(BigInt::from(2)));
        (0..3).fold(AreaPolynomial::zero(), |acc, k| &acc + &p.derivative(k).scale(&(&w[k] * &inv)))
    }

    pub fn scalar_basis(&self) -> [AreaPolynomial; 6] {
        let two = Rational::from_integer(BigInt::from(2));
        let four = Rational::from_integer(BigInt::from(4));
        let l = |k| AreaPolynomial::coordinate(k);
        let corner = |k: usize| &(&l(k) * &l(k)).scale(&two) + &l(k).scale(&-Rational::one());
        [
            corner(0),
            corner(1),
            corner(2),
            (&l(0) * &l(1)).scale(&four),
            (&l(1) * &l(2)).scale(&four),
            (&l(2) * &l(0)).scale(&four),
        ]
    }

    /// l-stripped vector basis: component `w` of `sign L_p ∇L_q`, i.e.
    /// `sign L_p w_q / (2A)` with `w` = `b` for U and `c` for V.
    fn vector_component(&self, w: &[Rational; 3]) -> [AreaPolynomial; 6] {
        let inv = Rational::one() / (&self.area * Rational::from_integer(BigInt::from(2)));
        VECTOR_BASIS.map(|(sign, _, p, q)| {
            let coef = &w[q] * &inv * Rational::from_integer(BigInt::from(sign as i64));
            AreaPolynomial::coordinate(p).scale(&coef)
        })
    }

    pub fn field(&self, field: Field) -> [AreaPolynomial; 6] {
        let dx = |ps: [AreaPolynomial; 6]| ps.map(|p| self.cartesian_derivative(&p, &self.b));
        let dy = |ps: [AreaPolynomial; 6]| ps.map(|p| self.cartesian_derivative(&p, &self.c));
        match field {
            Field::N => self.scalar_basis(),
            Field::Nx => dx(self.scalar_basis()),
            Field::Ny => dy(self.scalar_basis()),
            Field::U => self.vector_component(&self.b),
            Field::V => self.vector_component(&self.c),
            Field::Uy => dy(self.vector_component(&self.b)),
            Field::Vx => dx(self.vector_component(&self.c)),
        }
    }
}

/// A polynomial as integer coefficients over one common denominator.
struct ScaledPolynomial {
    terms: Vec<([u32; 3], BigInt)>,
    den: BigInt,
}

impl ScaledPolynomial {
    fn new(p: &AreaPolynomial) -> Self {
        let den = p.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let terms = p
            .terms
            .iter()
            .map(|(e, c)| (*e, c.numer() * (&den / c.denom())))
            .collect();
        Self { terms, den }
    }
}

/// Integrates `f_i g_j` for every pair, returning the exact 6×6 matrix.
pub fn integrate_fields(tri: &RationalTriangle, f: &[AreaPolynomial; 6], g: &[AreaPolynomial; 6]) -> Mat6<Rational> {
    integrate_scaled(&tri.area, &ScaledField::new(f), &ScaledField::new(g))
}

struct ScaledField {
    polys: [ScaledPolynomial; 6],
    degree: u32,
}

impl ScaledField {
    fn new(f: &[AreaPolynomial; 6]) -> Self {
        Self {
            polys: f.each_ref().map(ScaledPolynomial::new),
            degree: f.iter().map(AreaPolynomial::degree).max().unwrap_or(0),
        }
    }
}

/// Sums run over integers: each monomial integral is scaled by the common
/// denominator `(d + 2)!`, `d` the largest product degree, so a single
/// rational normalization is needed per entry.
fn integrate_scaled(area: &Rational, f: &ScaledField, g: &ScaledField) -> Mat6<Rational> {
    let max_deg = f.degree + g.degree;
    let common = factorial(max_deg + 2);
    let mut weights: BTreeMap<[u32; 3], BigInt> = BTreeMap::new();
    let mut weight = |e: [u32; 3]| -> BigInt {
        weights
            .entry(e)
            .or_insert_with(|| {
                BigInt::from(2) * factorial(e[0]) * factorial(e[1]) * factorial(e[2]) * &common
                    / factorial(e[0] + e[1] + e[2] + 2)
            })
            .clone()
    };
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut num = BigInt::zero();
            for (e, c) in &f.polys[i].terms {
                for (h, d) in &g.polys[j].terms {
                    num += c * d * weight([e[0] + h[0], e[1] + h[1], e[2] + h[2]]);
                }
            }
            let den = &f.polys[i].den * &g.polys[j].den * &common;
            area * Rational::new(num, den)
        })
    })
}

/// All seven factor fields of one triangle, prepared once for repeated
/// exact integration of every kind.
pub struct ExactFields {
    area: Rational,
    fields: Vec<(Field, ScaledField)>,
}

impl ExactFields {
    pub fn new(tri: &RationalTriangle) -> Self {
        let fields = [Field::N, Field::Nx, Field::Ny, Field::U, Field::V, Field::Uy, Field::Vx]
            .into_iter()
            .map(|f| (f, ScaledField::new(&tri.field(f))))
            .collect();
        Self {
            area: tri.area.clone(),
            fields,
        }
    }

    fn get(&self, field: Field) -> &ScaledField {
        &self.fields.iter().find(|(f, _)| *f == field).expect("all fields prepared").1
    }

    /// Same as [`exact_element_matrix`].
    pub fn matrix(&self, kind: MatrixKind) -> Mat6<Rational> {
        let (f, g) = kind.factors();
        integrate_scaled(&self.area, self.get(f), self.get(g))
    }
}

/// Exact l-stripped matrix of `kind` built by symbolic integration of the
/// basis definitions. The true matrix is `D_row · M · D_col` with
/// `D = diag(l1, l2, l3, l1, l2, l3)` on each side that carries a vector
/// basis and the identity otherwise.
pub fn exact_element_matrix(kind: MatrixKind, tri: &RationalTriangle) -> Mat6<Rational> {
    let (f, g) = kind.factors();
    integrate_fields(tri, &tri.field(f), &tri.field(g))
}

/// Re-applies the edge-length scaling to an l-stripped matrix.
pub fn apply_edge_scaling(kind: MatrixKind, m: &Mat6<f64>, l: [f64; 3]) -> Mat6<f64> {
    let (rv, cv) = kind.vector_sides();
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let r = if rv { l[i % 3] } else { 1.0 };
            let c = if cv { l[j % 3] } else { 1.0 };
            r * m[i][j] * c
        })
    })
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Convenience for tests and reports: rational from a small fraction.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::closed_form;

    fn unit() -> RationalTriangle {
        let r = |v: i64| ratio(v, 1);
        RationalTriangle::new([[r(0), r(0)], [r(1), r(0)], [r(0), r(1)]]).unwrap()
    }

    #[test]
    fn monomial_integrals() {
        assert_eq!(integrate_monomial(0, 0, 0), ratio(1, 1));
        assert_eq!(integrate_monomial(1, 0, 0), ratio(1, 3));
        assert_eq!(integrate_monomial(2, 1, 1), ratio(1, 180));
        assert_eq!(integrate_monomial(1, 1, 0), ratio(1, 12));
        assert_eq!(integrate_monomial(2, 2, 0), ratio(1, 90));
    }

    #[test]
    fn monomial_integral_is_permutation_symmetric() {
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    let v = integrate_monomial(i, j, k);
                    for (a, b, c) in [(i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                        assert_eq!(integrate_monomial(a, b, c), v);
                    }
                }
            }
        }
    }

    #[test]
    fn no_overflow_up_to_total_degree_twenty() {
        let v = integrate_monomial(10, 5, 5);
        assert!(v > Rational::zero());
    }

    #[test]
    fn polynomial_arithmetic() {
        let l1 = AreaPolynomial::coordinate(0);
        let sq = &l1 * &l1;
        assert_eq!(sq, AreaPolynomial::monomial([2, 0, 0], ratio(1, 1)));
        let sum = &(&AreaPolynomial::coordinate(0) + &AreaPolynomial::coordinate(1)) + &AreaPolynomial::coordinate(2);
        assert_eq!((&sum * &sum).integrate(), ratio(1, 1));
        let n = unit().scalar_basis();
        assert_eq!((&n[0] * &n[0]).integrate(), ratio(1, 30));
        assert_eq!(n[3].integrate(), ratio(1, 3));
        assert_eq!((&n[3] * &n[3]).integrate(), ratio(8, 45));
        assert_eq!(AreaPolynomial::zero().integrate(), ratio(0, 1));
    }

    #[test]
    fn canonical_form_cancels() {
        let l1 = AreaPolynomial::coordinate(0);
        let p = &l1 + &l1.scale(&ratio(-1, 1));
        assert!(p.is_zero());
        assert_eq!(p, AreaPolynomial::zero());
    }

    #[test]
    fn exact_mass_matches_table_on_any_triangle() {
        let tri = RationalTriangle::new([
            [ratio(1, 3), ratio(-2, 7)],
            [ratio(5, 2), ratio(1, 9)],
            [ratio(-1, 4), ratio(3, 2)],
        ])
        .unwrap();
        let m = exact_element_matrix(MatrixKind::MassNN, &tri);
        assert_eq!(m[0][0], &tri.area * ratio(6, 180));
        assert_eq!(m[3][4], &tri.area * ratio(16, 180));
        assert_eq!(m, closed_form(MatrixKind::MassNN, &tri.stripped_inputs()));
    }

    #[test]
    fn exact_uu_and_stiff_yx_on_unit_triangle() {
        let uu = exact_element_matrix(MatrixKind::UU, &unit());
        assert_eq!(uu[0][0], ratio(1, 12));
        let syx = exact_element_matrix(MatrixKind::StiffYX, &unit());
        // -b2 c1 / (12 A) with b2 = 1, c1 = -1, A = 1/2
        assert_eq!(syx[0][1], ratio(1, 6));
    }

    #[test]
    fn every_kind_matches_closed_form_exactly_on_a_fixed_triangle() {
        let tri = RationalTriangle::new([
            [ratio(-3, 5), ratio(1, 7)],
            [ratio(4, 3), ratio(-1, 2)],
            [ratio(1, 8), ratio(11, 10)],
        ])
        .unwrap();
        let inputs = tri.stripped_inputs();
        for kind in MatrixKind::ALL {
            assert_eq!(exact_element_matrix(kind, &tri), closed_form(kind, &inputs), "{kind}");
            assert_eq!(ExactFields::new(&tri).matrix(kind), closed_form(kind, &inputs), "{kind}");
        }
    }
}
