//! Closed-form 6×6 elemental matrices for the quadratic triangle.
//!
//! Every kind is evaluated from its analytic entry table with its own
//! prefactor (`A/180`, `1/(3A)`, `1/30`, `1/(12A)`, `1/(48A)`, `1/(16A³)`).
//! The tables are generic over [`Scalar`] so the same code runs in `f64`
//! and in exact rational arithmetic.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;
use crate::geometry::TriangleGeometry;
use crate::scalar::{transpose6, Mat6, Scalar};
use crate::shape::VECTOR_BASIS;

/// The sixteen analytic elemental matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MatrixKind {
    /// ∫ N Nᵀ
    MassNN,
    /// ∫ ∂N/∂x ∂Nᵀ/∂x
    StiffXX,
    /// ∫ ∂N/∂y ∂Nᵀ/∂y
    StiffYY,
    /// ∫ ∂N/∂y ∂Nᵀ/∂x
    StiffYX,
    /// ∫ N ∂Nᵀ/∂x
    NdNx,
    /// ∫ N ∂Nᵀ/∂y
    NdNy,
    /// ∫ U ∂Nᵀ/∂x
    UdNx,
    /// ∫ V ∂Nᵀ/∂x
    VdNx,
    /// ∫ U ∂Nᵀ/∂y
    UdNy,
    /// ∫ V ∂Nᵀ/∂y
    VdNy,
    /// ∫ U Uᵀ
    UU,
    /// ∫ V Vᵀ
    VV,
    /// ∫ U Vᵀ
    UV,
    /// ∫ ∂U/∂y ∂Uᵀ/∂y
    DUyDUy,
    /// ∫ ∂V/∂x ∂Vᵀ/∂x
    DVxDVx,
    /// ∫ ∂U/∂y ∂Vᵀ/∂x
    DUyDVx,
}

/// Pointwise factor appearing on one side of an elemental integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    N,
    Nx,
    Ny,
    U,
    V,
    Uy,
    Vx,
}

impl Field {
    pub fn is_vector(self) -> bool {
        matches!(self, Field::U | Field::V | Field::Uy | Field::Vx)
    }
}

impl MatrixKind {
    pub const ALL: [MatrixKind; 16] = [
        MatrixKind::MassNN,
        MatrixKind::StiffXX,
        MatrixKind::StiffYY,
        MatrixKind::StiffYX,
        MatrixKind::NdNx,
        MatrixKind::NdNy,
        MatrixKind::UdNx,
        MatrixKind::VdNx,
        MatrixKind::UdNy,
        MatrixKind::VdNy,
        MatrixKind::UU,
        MatrixKind::VV,
        MatrixKind::UV,
        MatrixKind::DUyDUy,
        MatrixKind::DVxDVx,
        MatrixKind::DUyDVx,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::MassNN => "mass_NN",
            MatrixKind::StiffXX => "stiff_xx",
            MatrixKind::StiffYY => "stiff_yy",
            MatrixKind::StiffYX => "stiff_yx",
            MatrixKind::NdNx => "N_dNx",
            MatrixKind::NdNy => "N_dNy",
            MatrixKind::UdNx => "U_dNx",
            MatrixKind::VdNx => "V_dNx",
            MatrixKind::UdNy => "U_dNy",
            MatrixKind::VdNy => "V_dNy",
            MatrixKind::UU => "UU",
            MatrixKind::VV => "VV",
            MatrixKind::UV => "UV",
            MatrixKind::DUyDUy => "dUy_dUy",
            MatrixKind::DVxDVx => "dVx_dVx",
            MatrixKind::DUyDVx => "dUy_dVx",
        }
    }

    /// `(row factor, column factor)` of the integrand `f_i g_j`.
    pub fn factors(self) -> (Field, Field) {
        use Field::*;
        match self {
            MatrixKind::MassNN => (N, N),
            MatrixKind::StiffXX => (Nx, Nx),
            MatrixKind::StiffYY => (Ny, Ny),
            MatrixKind::StiffYX => (Ny, Nx),
            MatrixKind::NdNx => (N, Nx),
            MatrixKind::NdNy => (N, Ny),
            MatrixKind::UdNx => (U, Nx),
            MatrixKind::VdNx => (V, Nx),
            MatrixKind::UdNy => (U, Ny),
            MatrixKind::VdNy => (V, Ny),
            MatrixKind::UU => (U, U),
            MatrixKind::VV => (V, V),
            MatrixKind::UV => (U, V),
            MatrixKind::DUyDUy => (Uy, Uy),
            MatrixKind::DVxDVx => (Vx, Vx),
            MatrixKind::DUyDVx => (Uy, Vx),
        }
    }

    pub fn is_symmetric(self) -> bool {
        matches!(
            self,
            MatrixKind::MassNN
                | MatrixKind::StiffXX
                | MatrixKind::StiffYY
                | MatrixKind::UU
                | MatrixKind::VV
                | MatrixKind::DUyDUy
                | MatrixKind::DVxDVx
        )
    }

    /// Whether rows (resp. columns) carry an `l_k` factor.
    pub fn vector_sides(self) -> (bool, bool) {
        let (f, g) = self.factors();
        (f.is_vector(), g.is_vector())
    }

    /// Partner kind under the reflection `x <-> y`, with the sign picked up
    /// and whether the partner must be transposed.
    ///
    /// Reflecting corners `(P1, P2, P3)` to `(P1', P3', P2')` with edge signs
    /// `(s3, s2, s1)` permutes scalar nodes by `[1, 3, 2, 6, 5, 4]` and
    /// vector bases by `[6, 5, 4, 3, 2, 1]`; then
    /// `partner(T')[i][j] = sign * kind(T)[perm(i)][perm(j)]`.
    pub fn mirror_partner(self) -> (MatrixKind, f64, bool) {
        use MatrixKind::*;
        match self {
            MassNN => (MassNN, 1.0, false),
            StiffXX => (StiffYY, 1.0, false),
            StiffYY => (StiffXX, 1.0, false),
            StiffYX => (StiffYX, 1.0, true),
            NdNx => (NdNy, 1.0, false),
            NdNy => (NdNx, 1.0, false),
            UdNx => (VdNy, -1.0, false),
            VdNy => (UdNx, -1.0, false),
            VdNx => (UdNy, -1.0, false),
            UdNy => (VdNx, -1.0, false),
            UU => (VV, 1.0, false),
            VV => (UU, 1.0, false),
            UV => (UV, 1.0, true),
            DUyDUy => (DVxDVx, 1.0, false),
            DVxDVx => (DUyDUy, 1.0, false),
            DUyDVx => (DUyDVx, 1.0, true),
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MatrixKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnsupportedKind(s.to_string()))
    }
}

/// Geometric quantities the closed forms depend on.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormInputs<S> {
    pub b: [S; 3],
    pub c: [S; 3],
    /// Signed edge lengths; all ones for the l-stripped rational check.
    pub l: [S; 3],
    pub area: S,
}

impl ClosedFormInputs<f64> {
    pub fn from_geometry(geom: &TriangleGeometry) -> Self {
        Self {
            b: geom.b,
            c: geom.c,
            l: geom.edge_len,
            area: geom.area,
        }
    }
}

impl<S: Scalar> ClosedFormInputs<S> {
    /// The `b <-> c` exchange.
    pub fn swap_bc(&self) -> Self {
        Self {
            b: self.c.clone(),
            c: self.b.clone(),
            l: self.l.clone(),
            area: self.area.clone(),
        }
    }
}

fn symbols<S: Clone>(v: &[S; 3]) -> [impl Fn() -> S + '_; 3] {
    std::array::from_fn(|k| move || v[k].clone())
}

fn scaled<S: Scalar>(m: Mat6<S>, factor: S) -> Mat6<S> {
    m.map(|row| row.map(|x| x * factor.clone()))
}

fn symmetric_from_upper<S: Scalar>(upper: [[Option<S>; 6]; 6]) -> Mat6<S> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let (r, c) = if i <= j { (i, j) } else { (j, i) };
            upper[r][c].clone().expect("upper triangle fully populated")
        })
    })
}

/// Evaluates the closed form of `kind`.
pub fn closed_form<S: Scalar>(kind: MatrixKind, g: &ClosedFormInputs<S>) -> Mat6<S> {
    match kind {
        MatrixKind::MassNN => mass_nn(g),
        MatrixKind::StiffXX => stiff_xx(g),
        MatrixKind::StiffYY => stiff_yy(g),
        MatrixKind::StiffYX => stiff_yx(g),
        MatrixKind::NdNx => n_dnx(g),
        MatrixKind::NdNy => n_dny(g),
        MatrixKind::UdNx => u_dnx(g),
        MatrixKind::VdNx => v_dnx(g),
        MatrixKind::UdNy => u_dny(g),
        MatrixKind::VdNy => v_dny(g),
        MatrixKind::UU => uu(g),
        MatrixKind::VV => vv(g),
        MatrixKind::UV => uv(g),
        MatrixKind::DUyDUy => duy_duy(g),
        // Obtained from dUy_dUy by exchanging b and c.
        MatrixKind::DVxDVx => duy_duy(&g.swap_bc()),
        MatrixKind::DUyDVx => duy_dvx(g),
    }
}

fn mass_nn<S: Scalar>(g: &ClosedFormInputs<S>) -> Mat6<S> {
    const TABLE: [[i64; 6]; 6] = [
        [6, -1, -1, 0, -4, 0],
        [-1, 6, -1, 0, 0, -4],
        [-1, -1, 6, -4, 0, 0],
        [0, 0, -4, 32, 16, 16],
        [-4, 0, 0, 16, 32, 16],
        [0, -4, 0, 16, 16, 32],
    ];
    let m = TABLE.map(|row| row.map(S::from_int));
    scaled(m, g.area.clone() / S::from_int(180))
}

fn stiff_xx<S: Scalar>(g: &ClosedFormInputs<S>) -> Mat6<S> {
    let [b1, b2, b3] = symbols(&g.b);
    let n = |v: i64| S::from_int(v);
    let z = || n(0);
    let m = [
        [n(3) * b1() * b1() / n(4), -(b1() * b2()) / n(4), -(b1() * b3()) / n(4), b1() * b2(), z(), b1() * b3()],
        [-(b1() * b2()) / n(4), n(3) * b2() * b2() / n(4), -(b2() * b3()) / n(4), b1() * b2(), b2() * b3(), z()],
        [-(b1() * b3()) / n(4), -(b2() * b3()) / n(4), n(3) * b3() * b3() / n(4), z(), b2() * b3(), b1() * b3()],
        [b1() * b2(), b1() * b2(), z(), n(2) * (b1() * b1() + b2() * b2() + b1() * b2()), n(2) * b1() * b3(), n(2) * b2() * b3()],
        [z(), b2() * b3(), b2() * b3(), n(2) * b1() * b3(), n(2) * (b2() * b2() + b3() * b3() + b2() * b3()), n(2) * b1() * b2()],
        [b1() * b3(), z(), b1() * b3(), n(2) * b2() * b3(), n(2) * b1() * b2(), n(2) * (b1() * b1() + b3() * b3() + b1() * b3())],
    ];
    scaled(m, n(1) / (n(3) * g.area.clone()))
}

fn stiff_yy<S: Scalar>(g: &ClosedFormInputs<S>) -> Mat6<S> {
    let [c1, c2, c3] = symbols(&g.c);
    let n = |v: i64| S::from_int(v);
    let z = || n(0);
    let m = [
        [n(3) * c1() * c1() / n(4), -(c1() * c2()) / n(4), -(c1() * c3()) / n(4), c1() * c2(), z(), c1() * c3()],
        [-(c1() * c2()) / n(4), n(3) * c2() * c2() / n(4), -(c2() * c3()) / n(4), c1() * c2(), c2() * c3(), z()],
        [-(c1() * c3()) / n(4), -(c2() * c3()) / n(4), n(3) * c3() * c3() / n(4), z(), c2() * c3(), c1() * c3()],
        [c1() * c2(), c1() * c2(), z(), n(2) * (c1() * c1() + c2() * c2() + c1() * c2()), n(2) * c1() * c3(), n(2) * c2() * c3()],
        [z(), c2() * c3(), c2() * c3(), n(2) * c1() * c3(), n(2) * (c2() * c2() + c3() * c3() + c2() * c3()), n(2) * c1() * c2()],
        [c1() * c3(), z(), c1() * c3(), n(2) * c2() * c3(), n(2) * c1() * c2(), n(2) * (c1() * c1() + c3() * c3() + c1() * c3())],
    ];
    scaled(m, n(1) / (n(3) * g.area.clone()))
}

fn stiff_yx<S: Scalar>(g: &ClosedFormInputs<S>) -> Mat6<S> {
    let [b1, b2, b3] = symbols(&g.b);
    let [c1, c2, c3] = symbols(&g.c);
    let n = |v: i64| S::from_int(v);
    let z = || n(0);
    let diag = || b1() * c1() + b2() * c2() + b3() * c3();
    let m = [
        [n(3) * b1() * c1() / n(4), -(b2() * c1()) / n(4), -(b3() * c1()) / n(4), b2() * c1(), z(), b3() * c1()],
        [-(b1() * c2()) / n(4), n(3) * b2() * c2() / n(4), -(b3() * c2()) / n(4), b1() * c2(), b3() * c2(), z()],
        [-(b1() * c3()) / n(4), -(b2() * c3()) / n(4), n(3) * b3() * c3() / n(4), z(), b2() * c3(), b1() * c3()],
        [b1() * c2(), b2() * c1(), z(), diag(), b3() * c1() + b1() * c3(), b3() * c2() + b2() * c3()],
        [z(), b2() * c3(), b3() * c2(), b1() * c3() + b3() * c1(), diag(), b1() * c2() + b2() * c1()],
        [b1() * c3(), z(), b3() * c1(), b2() * c3() + b3() * c2(), b2() * c1() + b1() * c2(), diag()],
    ];
    scaled(m, n(1) / (n(3) * g.area.clone()))
}

fn n_dnx<S: Scalar>(g: &ClosedFormInputs<S>) -> Mat6<S> {
    let [b1, b2, b3] = symbols(&g.b);
    let n = |v: i64| S::from_int(v);
    let m = [
        [n(2) * b1(), -b2(), -b3(), -b1() + n(2) * b2(), -b2() - b3(), -b1() + n(2) * b3()],
        [-b1(), n(2) * b2(), -b3(), -b2() + n(2) * b1(), -b2() + n(2) * b3(), -b1() - b3()],
        [-b1(), -b2(), n(2) * b3(), -b1() - b2(), -b3() + n(2) * b2(), -b3() + n(2) * b1()],
        [n(3) * b1(), n(3) * b2(), -b3(), n(8) * (b1() + b2()), n(4) * (b2() + n(2) * b3()), n(4) * (b1() + n(2) * b3())],
        [-b1(), n(3) * b2(), n(3) * b3(), n(4) * (b2() + n(2) * b1()), n(8) * (b2() + b3()), n(4) * (b3() + n(2) * b1())],
        [n(3) * b1(), -b2(), n(3) * b3(), n(4) * (b1() + n(2) * b2()), n(4) * (b3() + n(2) * b2()), n(8) * (b1() + b3())],
    ];
    scaled(m, n(1) / n(30))
}

fn n_dny<S: Scalar>(g: &ClosedFormInputs<S>) -> Mat6<S> {
    let [c1, c2, c3] = symbols(&g.c);
    let n = |v: i64| S::from_int(v);
    let m = [
        [n(2) * c1(), -c2(), -c3(), -c1() + n(2) * c2(), -c2() - c3(), -c1() + n(2) * c3()],
        [-c1(), n(2) * c2(), -c3(), -c2() + n(2) * c1(), -c2() + n(2) * c3(), -c1() - c3()],
        [-c1(), -c2(), n(2) * c3(), -c1() - c2(), -c3() + n(2) * c2(), -c3() + n(2) * c1()],
        [n(3) * c1(), n(3) * c2(), -c3(), n(8) * (c1() + c2()), n(4) * (c2() + n(2) * c3()), n(4) * (c1() + n(2) * c3())],
        [-c1(), n(3) * c2(), n(3) * c3(), n(4) * (c2() + n(2) * c1()), n(8) * (c2() + c3()), n(4) * (c3() + n(2) * c1())],
        [n(3) * c1(), -c2(), n(3) * c3(), n(4) * (c1() + n(2) * c2()), n(4) * (c3() + n(2) * c2()), n(8) * (c1() + c3())],
    ];
    scaled(m, n(1) / n(30))
}

fn u_dnx<S: Scalar>(g: &ClosedFormInputs<S>) -> Mat6<S> {
    let [b1, b2, b3] = symbols(&g.b);
    let [l1, l2, l3] = symbols(&g.l);
    let n = |v: i64| S::from_int(v);
    let z = || n(0);
    let m = [
        [l1() * b1() * b2(), z(), z(), l1() * b2() * (b1() + n(2) * b2()), l1() * b2() * (b2() + b3()), l1() * b2() * (b1() + n(2) * b3())],
        [z(), l2() * b2() * b3(), z(), l2() * b3() * (b2() + n(2) * b1()), l2() * b3() * (b2() + n(2) * b3()), l2() * b3() * (b1() + b3())],
        [z(), z(), l3() * b1() * b3(), l3() * b1() * (b1() + b2()), l3() * b1() * (b3() + n(2) * b2()), l3() * b1() * (b3() + n(2) * b1())],
        [z(), -(l1() * b1() * b2()), z(), -(l1() * b1() * (b2() + n(2) * b1())), -(l1() * b1() * (b2() + n(2) * b3())), -(l1() * b1() * (b1() + b3()))],
        [z(), z(), -(l2() * b2() * b3()), -(l2() * b2() * (b1() + b2())), -(l2() * b2() * (b3() + n(2) * b2())), -(l2() * b2() * (b3() + n(2) * b1()))],
        [-(l3() * b1() * b3()), z(), z(), -(l3() * b3() * (b1() + n(2) * b2())), -(l3() * b3() * (b2() + b3())), -(l3() * b3() * (b1() + n(2) * b3()))],
    ];
    scaled(m, n(1) / (n(12) * g.area.clone()))
}

fn v_dnx<S: Scalar>(g: &ClosedFormInputs<S>) -> Mat6<S> {
    let [b1, b2, b3] = symbols(&g.b);
    let [c1, c2, c3] = symbols(&g.c);
    let [l1, l2, l3] = symbols(&g.l);
    let n = |v: i64| S::from_int(v);
    let z = || n(0);
    let m = [
        [l1() * b1() * c2(), z(), z(), l1() * c2() * (b1() + n(2) * b2()), l1() * c2() * (b2() + b3()), l1() * c2() * (b1() + n(2) * b3())],
        [z(), l2() * b2() * c3(), z(), l2() * c3() * (b2() + n(2) * b1()), l2() * c3() * (b2() + n(2) * b3()), l2() * c3() * (b1() + b3())],
        [z(), z(), l3() * b3() * c1(), l3() * c1() * (b1() + b2()), l3() * c1() * (b3() + n(2) * b2()), l3() * c1() * (b3() + n(2) * b1())],
        [z(), -(l1() * b2() * c1()), z(), -(l1() * c1() * (b2() + n(2) * b1())), -(l1() * c1() * (b2() + n(2) * b3())), -(l1() * c1() * (b1() + b3()))],
        [z(), z(), -(l2() * b3() * c2()), -(l2() * c2() * (b1() + b2())), -(l2() * c2() * (b3() + n(2) * b2())), -(l2() * c2() * (b3() + n(2) * b1()))],
        [-(l3() * b1() * c3()), z(), z(), -(l3() * c3() * (b1() + n(2) * b2())), -(l3() * c3() * (b2() + b3())), -(l3() * c3() * (b1() + n(2) * b3()))],
    ];
    scaled(m, n(1) / (n(12) * g.area.clone()))
}

fn u_dny<S: Scalar>(g: &ClosedFormInputs<S>) -> Mat6<S> {
    let [b1, b2, b3] = symbols(&g.b);
    let [c1, c2, c3] = symbols(&g.c);
    let [l1, l2, l3] = symbols(&g.l);
    let n = |v: i64| S::from_int(v);
    let z = || n(0);
    let m = [
        [l1() * b2() * c1(), z(), z(), l1() * b2() * (c1() + n(2) * c2()), l1() * b2() * (c2() + c3()), l1() * b2() * (c1() + n(2) * c3())],
        [z(), l2() * b3() * c2(), z(), l2() * b3() * (c2() + n(2) * c1()), l2() * b3() * (c2() + n(2) * c3()), l2() * b3() * (c1() + c3())],
        [z(), z(), l3() * b1() * c3(), l3() * b1() * (c1() + c2()), l3() * b1() * (c3() + n(2) * c2()), l3() * b1() * (c3() + n(2) * c1())],
        [z(), -(l1() * b1() * c2()), z(), -(l1() * b1() * (c2() + n(2) * c1())), -(l1() * b1() * (c2() + n(2) * c3())), -(l1() * b1() * (c1() + c3()))],
        [z(), z(), -(l2() * b2() * c3()), -(l2() * b2() * (c1() + c2())), -(l2() * b2() * (c3() + n(2) * c2())), -(l2() * b2() * (c3() + n(2) * c1()))],
        [-(l3() * b3() * c1()), z(), z(), -(l3() * b3() * (c1() + n(2) * c2())), -(l3() * b3() * (c2() + c3())), -(l3() * b3() * (c1() + n(2) * c3()))],
    ];
    scaled(m, n(1) / (n(12) * g.area.clone()))
}

fn v_dny<S: Scalar>(g: &ClosedFormInputs<S>) -> Mat6<S> {
    let [c1, c2, c3] = symbols(&g.c);
    let [l1, l2, l3] = symbols(&g.l);
    let n = |v: i64| S::from_int(v);
    let z = || n(0);
    let m = [
        [l1() * c1() * c2(), z(), z(), l1() * c2() * (c1() + n(2) * c2()), l1() * c2() * (c2() + c3()), l1() * c2() * (c1() + n(2) * c3())],
        [z(), l2() * c2() * c3(), z(), l2() * c3() * (c2() + n(2) * c1()), l2() * c3() * (c2() + n(2) * c3()), l2() * c3() * (c1() + c3())],
        [z(), z(), l3() * c1() * c3(), l3() * c1() * (c1() + c2()), l3() * c1() * (c3() + n(2) * c2()), l3() * c1() * (c3() + n(2) * c1())],
        [z(), -(l1() * c1() * c2()), z(), -(l1() * c1() * (c2() + n(2) * c1())), -(l1() * c1() * (c2() + n(2) * c3())), -(l1() * c1() * (c1() + c3()))],
        [z(), z(), -(l2() * c2() * c3()), -(l2() * c2() * (c1() + c2())), -(l2() * c2() * (c3() + n(2) * c2())), -(l2() * c2() * (c3() + n(2) * c1()))],
        [-(l3() * c1() * c3()), z(), z(), -(l3() * c3() * (c1() + n(2) * c2())), -(l3() * c3() * (c2() + c3())), -(l3() * c3() * (c1() + n(2) * c3()))],
    ];
    scaled(m, n(1) / (n(12) * g.area.clone()))
}

fn uu<S: Scalar>(g: &ClosedFormInputs<S>) -> Mat6<S> {
    let [b1, b2, b3] = symbols(&g.b);
    let [l1, l2, l3] = symbols(&g.l);
    let n = |v: i64| S::from_int(v);
    let m = [
        [n(2) * l1() * l1() * b2() * b2(), l1() * l2() * b2() * b3(), l1() * l3() * b1() * b2(), -(l1() * l1() * b1() * b2()), -(l1() * l2() * b2() * b2()), -(n(2) * l1() * l3() * b2() * b3())],
        [l1() * l2() * b2() * b3(), n(2) * l2() * l2() * b3() * b3(), l2() * l3() * b1() * b3(), -(n(2) * l1() * l2() * b1() * b3()), -(l2() * l2() * b2() * b3()), -(l2() * l3() * b3() * b3())],
        [l1() * l3() * b1() * b2(), l2() * l3() * b1() * b3(), n(2) * l3() * l3() * b1() * b1(), -(l1() * l3() * b1() * b1()), -(n(2) * l2() * l3() * b1() * b2()), -(l3() * l3() * b1() * b3())],
        [-(l1() * l1() * b1() * b2()), -(n(2) * l1() * l2() * b1() * b3()), -(l1() * l3() * b1() * b1()), n(2) * l1() * l1() * b1() * b1(), l1() * l2() * b1() * b2(), l1() * l3() * b1() * b3()],
        [-(l1() * l2() * b2() * b2()), -(l2() * l2() * b2() * b3()), -(n(2) * l2() * l3() * b1() * b2()), l1() * l2() * b1() * b2(), n(2) * l2() * l2() * b2() * b2(), l2() * l3() * b2() * b3()],
        [-(n(2) * l1() * l3() * b2() * b3()), -(l2() * l3() * b3() * b3()), -(l3() * l3() * b1() * b3()), l1() * l3() * b1() * b3(), l2() * l3() * b2() * b3(), n(2) * l3() * l3() * b3() * b3()],
    ];
    scaled(m, n(1) / (n(48) * g.area.clone()))
}

fn vv<S: Scalar>(g: &ClosedFormInputs<S>) -> Mat6<S> {
    let [c1, c2, c3] = symbols(&g.c);
    let [l1, l2, l3] = symbols(&g.l);
    let n = |v: i64| S::from_int(v);
    let m = [
        [n(2) * l1() * l1() * c2() * c2(), l1() * l2() * c2() * c3(), l1() * l3() * c1() * c2(), -(l1() * l1() * c1() * c2()), -(l1() * l2() * c2() * c2()), -(n(2) * l1() * l3() * c2() * c3())],
        [l1() * l2() * c2() * c3(), n(2) * l2() * l2() * c3() * c3(), l2() * l3() * c1() * c3(), -(n(2) * l1() * l2() * c1() * c3()), -(l2() * l2() * c2() * c3()), -(l2() * l3() * c3() * c3())],
        [l1() * l3() * c1() * c2(), l2() * l3() * c1() * c3(), n(2) * l3() * l3() * c1() * c1(), -(l1() * l3() * c1() * c1()), -(n(2) * l2() * l3() * c1() * c2()), -(l3() * l3() * c1() * c3())],
        [-(l1() * l1() * c1() * c2()), -(n(2) * l1() * l2() * c1() * c3()), -(l1() * l3() * c1() * c1()), n(2) * l1() * l1() * c1() * c1(), l1() * l2() * c1() * c2(), l1() * l3() * c1() * c3()],
        [-(l1() * l2() * c2() * c2()), -(l2() * l2() * c2() * c3()), -(n(2) * l2() * l3() * c1() * c2()), l1() * l2() * c1() * c2(), n(2) * l2() * l2() * c2() * c2(), l2() * l3() * c2() * c3()],
        [-(n(2) * l1() * l3() * c2() * c3()), -(l2() * l3() * c3() * c3()), -(l3() * l3() * c1() * c3()), l1() * l3() * c1() * c3(), l2() * l3() * c2() * c3(), n(2) * l3() * l3() * c3() * c3()],
    ];
    scaled(m, n(1) / (n(48) * g.area.clone()))
}

fn uv<S: Scalar>(g: &ClosedFormInputs<S>) -> Mat6<S> {
    let [b1, b2, b3] = symbols(&g.b);
    let [c1, c2, c3] = symbols(&g.c);
    let [l1, l2, l3] = symbols(&g.l);
    let n = |v: i64| S::from_int(v);
    let m = [
        [n(2) * l1() * l1() * b2() * c2(), l1() * l2() * b2() * c3(), l1() * l3() * b2() * c1(), -(l1() * l1() * b2() * c1()), -(l1() * l2() * b2() * c2()), -(n(2) * l1() * l3() * b2() * c3())],
        [l1() * l2() * b3() * c2(), n(2) * l2() * l2() * b3() * c3(), l2() * l3() * b3() * c1(), -(n(2) * l1() * l2() * b3() * c1()), -(l2() * l2() * b3() * c2()), -(l2() * l3() * b3() * c3())],
        [l1() * l3() * b1() * c2(), l2() * l3() * b1() * c3(), n(2) * l3() * l3() * b1() * c1(), -(l1() * l3() * b1() * c1()), -(n(2) * l2() * l3() * b1() * c2()), -(l3() * l3() * b1() * c3())],
        [-(l1() * l1() * b1() * c2()), -(n(2) * l1() * l2() * b1() * c3()), -(l1() * l3() * b1() * c1()), n(2) * l1() * l1() * b1() * c1(), l1() * l2() * b1() * c2(), l1() * l3() * b1() * c3()],
        [-(l1() * l2() * b2() * c2()), -(l2() * l2() * b2() * c3()), -(n(2) * l2() * l3() * b2() * c1()), l1() * l2() * b2() * c1(), n(2) * l2() * l2() * b2() * c2(), l2() * l3() * b2() * c3()],
        [-(n(2) * l1() * l3() * b3() * c2()), -(l2() * l3() * b3() * c3()), -(l3() * l3() * b3() * c1()), l1() * l3() * b3() * c1(), l2() * l3() * b3() * c2(), n(2) * l3() * l3() * b3() * c3()],
    ];
    scaled(m, n(1) / (n(48) * g.area.clone()))
}

fn duy_duy<S: Scalar>(g: &ClosedFormInputs<S>) -> Mat6<S> {
    let [b1, b2, b3] = symbols(&g.b);
    let [c1, c2, c3] = symbols(&g.c);
    let [l1, l2, l3] = symbols(&g.l);
    let n = |v: i64| S::from_int(v);
    let mut a: [[Option<S>; 6]; 6] = Default::default();
    a[0][0] = Some(l1() * l1() * b2() * b2() * c1() * c1());
    a[0][1] = Some(l1() * l2() * b2() * b3() * c1() * c2());
    a[0][2] = Some(l1() * l3() * b1() * b2() * c1() * c3());
    a[0][3] = Some(-(l1() * l1() * b1() * b2() * c1() * c2()));
    a[0][4] = Some(-(l1() * l2() * b2() * b2() * c1() * c3()));
    a[0][5] = Some(-(l1() * l3() * b2() * b3() * c1() * c1()));
    a[1][1] = Some(l2() * l2() * b3() * b3() * c2() * c2());
    a[1][2] = Some(l2() * l3() * b1() * b3() * c2() * c3());
    a[1][3] = Some(-(l1() * l2() * b1() * b3() * c2() * c2()));
    a[1][4] = Some(-(l2() * l2() * b2() * b3() * c2() * c3()));
    a[1][5] = Some(-(l2() * l3() * b3() * b3() * c1() * c2()));
    a[2][2] = Some(l3() * l3() * b1() * b1() * c3() * c3());
    a[2][3] = Some(-(l1() * l3() * b1() * b1() * c2() * c3()));
    a[2][4] = Some(-(l2() * l3() * b1() * b2() * c3() * c3()));
    a[2][5] = Some(-(l3() * l3() * b1() * b3() * c1() * c3()));
    a[3][3] = Some(l1() * l1() * b1() * b1() * c2() * c2());
    a[3][4] = Some(l1() * l2() * b1() * b2() * c2() * c3());
    a[3][5] = Some(l1() * l3() * b1() * b3() * c1() * c2());
    a[4][4] = Some(l2() * l2() * b2() * b2() * c3() * c3());
    a[4][5] = Some(l2() * l3() * b2() * b3() * c1() * c3());
    a[5][5] = Some(l3() * l3() * b3() * b3() * c1() * c1());
    let area = g.area.clone();
    scaled(symmetric_from_upper(a), n(1) / (n(16) * area.clone() * area.clone() * area))
}

/// Literal entry listing for dVx_dVx whose (3,3) entry, `l3² b1² c3²`,
/// repeats the dUy_dUy entry instead of its `b <-> c` image `l3² c1² b3²`.
/// Kept only so the verification sweep can adjudicate between the two.
pub fn dvx_dvx_listed<S: Scalar>(g: &ClosedFormInputs<S>) -> Mat6<S> {
    let [b1, b2, b3] = symbols(&g.b);
    let [c1, c2, c3] = symbols(&g.c);
    let [l1, l2, l3] = symbols(&g.l);
    let n = |v: i64| S::from_int(v);
    let mut a: [[Option<S>; 6]; 6] = Default::default();
    a[0][0] = Some(l1() * l1() * c2() * c2() * b1() * b1());
    a[0][1] = Some(l1() * l2() * c2() * c3() * b1() * b2());
    a[0][2] = Some(l1() * l3() * c1() * c2() * b1() * b3());
    a[0][3] = Some(-(l1() * l1() * c1() * c2() * b1() * b2()));
    a[0][4] = Some(-(l1() * l2() * c2() * c2() * b1() * b3()));
    a[0][5] = Some(-(l1() * l3() * c2() * c3() * b1() * b1()));
    a[1][1] = Some(l2() * l2() * c3() * c3() * b2() * b2());
    a[1][2] = Some(l2() * l3() * c1() * c3() * b2() * b3());
    a[1][3] = Some(-(l1() * l2() * c1() * c3() * b2() * b2()));
    a[1][4] = Some(-(l2() * l2() * c2() * c3() * b2() * b3()));
    a[1][5] = Some(-(l2() * l3() * c3() * c3() * b1() * b2()));
    a[2][2] = Some(l3() * l3() * b1() * b1() * c3() * c3());
    a[2][3] = Some(-(l1() * l3() * c1() * c1() * b2() * b3()));
    a[2][4] = Some(-(l2() * l3() * c1() * c2() * b3() * b3()));
    a[2][5] = Some(-(l3() * l3() * c1() * c3() * b1() * b3()));
    a[3][3] = Some(l1() * l1() * c1() * c1() * b2() * b2());
    a[3][4] = Some(l1() * l2() * c1() * c2() * b2() * b3());
    a[3][5] = Some(l1() * l3() * c1() * c3() * b1() * b2());
    a[4][4] = Some(l2() * l2() * c2() * c2() * b3() * b3());
    a[4][5] = Some(l2() * l3() * c2() * c3() * b1() * b3());
    a[5][5] = Some(l3() * l3() * c3() * c3() * b1() * b1());
    let area = g.area.clone();
    scaled(symmetric_from_upper(a), n(1) / (n(16) * area.clone() * area.clone() * area))
}

fn duy_dvx<S: Scalar>(g: &ClosedFormInputs<S>) -> Mat6<S> {
    let [b1, b2, b3] = symbols(&g.b);
    let [c1, c2, c3] = symbols(&g.c);
    let [l1, l2, l3] = symbols(&g.l);
    let n = |v: i64| S::from_int(v);
    let m = [
        [
            l1() * l1() * b1() * b2() * c1() * c2(),
            l1() * l2() * b2() * b2() * c1() * c3(),
            l1() * l3() * b2() * b3() * c1() * c1(),
            -(l1() * l1() * b2() * b2() * c1() * c1()),
            -(l1() * l2() * b2() * b3() * c1() * c2()),
            -(l1() * l3() * b1() * b2() * c1() * c3()),
        ],
        [
            l1() * l2() * b1() * b3() * c2() * c2(),
            l2() * l2() * b2() * b3() * c2() * c3(),
            l2() * l3() * b3() * b3() * c1() * c2(),
            -(l1() * l2() * b2() * b3() * c1() * c2()),
            -(l2() * l2() * b3() * b3() * c2() * c2()),
            -(l2() * l3() * b1() * b3() * c2() * c3()),
        ],
        [
            l1() * l3() * b1() * b1() * c2() * c3(),
            l2() * l3() * b1() * b2() * c3() * c3(),
            l3() * l3() * b1() * b3() * c1() * c3(),
            -(l1() * l3() * b1() * b2() * c1() * c3()),
            -(l2() * l3() * b1() * b3() * c2() * c3()),
            -(l3() * l3() * b1() * b1() * c3() * c3()),
        ],
        [
            -(l1() * l1() * b1() * b1() * c2() * c2()),
            -(l1() * l2() * b1() * b2() * c2() * c3()),
            -(l1() * l3() * b1() * b3() * c1() * c2()),
            l1() * l1() * b1() * b2() * c1() * c2(),
            l1() * l2() * b1() * b3() * c2() * c2(),
            l1() * l3() * b1() * b1() * c2() * c3(),
        ],
        [
            -(l1() * l2() * b1() * b2() * c2() * c3()),
            -(l2() * l2() * b2() * b2() * c3() * c3()),
            -(l2() * l3() * b2() * b3() * c1() * c3()),
            l1() * l2() * b2() * b2() * c1() * c3(),
            l2() * l2() * b2() * b3() * c2() * c3(),
            l2() * l3() * b1() * b2() * c3() * c3(),
        ],
        [
            -(l1() * l3() * b1() * b3() * c1() * c2()),
            -(l2() * l3() * b2() * b3() * c1() * c3()),
            -(l3() * l3() * b3() * b3() * c1() * c1()),
            l1() * l3() * b2() * b3() * c1() * c1(),
            l2() * l3() * b3() * b3() * c1() * c2(),
            l3() * l3() * b1() * b3() * c1() * c3(),
        ],
    ];
    let area = g.area.clone();
    scaled(m, n(1) / (n(16) * area.clone() * area.clone() * area))
}

/// A closed-form elemental matrix evaluated on one triangle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElementMatrix {
    pub kind: MatrixKind,
    pub entries: Mat6<f64>,
    pub fingerprint: u64,
}

impl ElementMatrix {
    pub fn transpose(&self) -> Mat6<f64> {
        transpose6(&self.entries)
    }
}

pub fn element_matrix(kind: MatrixKind, geom: &TriangleGeometry) -> ElementMatrix {
    ElementMatrix {
        kind,
        entries: closed_form(kind, &ClosedFormInputs::from_geometry(geom)),
        fingerprint: geom.fingerprint(),
    }
}

/// `∫ (∂V/∂x - ∂U/∂y)(∂V/∂x - ∂U/∂y)ᵀ`, assembled from the dVx_dVx,
/// dUy_dUy and dUy_dVx closed forms.
pub fn curl_curl_matrix(geom: &TriangleGeometry) -> Mat6<f64> {
    let inputs = ClosedFormInputs::from_geometry(geom);
    let vv = closed_form(MatrixKind::DVxDVx, &inputs);
    let uu = closed_form(MatrixKind::DUyDUy, &inputs);
    let uv = closed_form(MatrixKind::DUyDVx, &inputs);
    std::array::from_fn(|i| std::array::from_fn(|j| vv[i][j] + uu[i][j] - uv[i][j] - uv[j][i]))
}

/// `∫ (U Uᵀ + V Vᵀ)`.
pub fn vector_mass_matrix(geom: &TriangleGeometry) -> Mat6<f64> {
    let inputs = ClosedFormInputs::from_geometry(geom);
    let uu = closed_form(MatrixKind::UU, &inputs);
    let vv = closed_form(MatrixKind::VV, &inputs);
    std::array::from_fn(|i| std::array::from_fn(|j| uu[i][j] + vv[i][j]))
}

/// Matrix `G` with `∇N_j = Σ_i G[i][j] (U_i, V_i)` pointwise.
///
/// Built from `e_pq = L_p ∇L_q`: corner gradients are
/// `∇N_p = -3 Σ_q e_pq - Σ_r e_rp` and midpoint gradients are
/// `∇N_pq = 4 (e_pq + e_qp)`.
pub fn local_gradient_matrix(geom: &TriangleGeometry) -> Mat6<f64> {
    // e_pq = basis_i / (sign * l_k)
    let mut e = [[None::<(usize, f64)>; 3]; 3];
    for (i, &(sign, k, p, q)) in VECTOR_BASIS.iter().enumerate() {
        e[p][q] = Some((i, 1.0 / (sign * geom.edge_len[k])));
    }
    let mut g = [[0.0; 6]; 6];
    let mut add = |col: usize, p: usize, q: usize, w: f64| {
        let (i, coef) = e[p][q].expect("off-diagonal pair");
        g[i][col] += w * coef;
    };
    for p in 0..3 {
        for q in (0..3).filter(|&q| q != p) {
            add(p, p, q, -3.0);
            add(p, q, p, -1.0);
        }
    }
    for (mid, (p, q)) in [(0, 1), (1, 2), (2, 0)].into_iter().enumerate() {
        add(3 + mid, p, q, 4.0);
        add(3 + mid, q, p, 4.0);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::EdgeSign;

    fn unit() -> TriangleGeometry {
        TriangleGeometry::new([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-14 * b.abs().max(1.0)
    }

    #[test]
    fn mass_nn_unit_entries() {
        let m = element_matrix(MatrixKind::MassNN, &unit()).entries;
        assert!(close(m[0][0], 1.0 / 60.0));
        assert!(close(m[3][3], 4.0 / 45.0));
        assert!(close(m[0][4], -4.0 / 360.0));
    }

    #[test]
    fn stiff_xx_unit_corner() {
        let m = element_matrix(MatrixKind::StiffXX, &unit()).entries;
        assert!(close(m[0][0], 0.5));
    }

    #[test]
    fn uu_unit_corner() {
        let m = element_matrix(MatrixKind::UU, &unit()).entries;
        assert!(close(m[0][0], 1.0 / 12.0));
        let v = vector_mass_matrix(&unit());
        assert!(close(v[0][0], 1.0 / 12.0));
    }

    #[test]
    fn curl_curl_unit_corner() {
        let cc = curl_curl_matrix(&unit());
        assert!(close(cc[0][0], 0.5));
    }

    #[test]
    fn gradient_column_for_corner_one() {
        let g = TriangleGeometry::new([[0.1, 0.2], [1.4, -0.3], [0.5, 1.1]]).unwrap();
        let grad = local_gradient_matrix(&g);
        let [l1, _, l3] = g.edge_len;
        let expect = [-3.0 / l1, 0.0, -1.0 / l3, 1.0 / l1, 0.0, 3.0 / l3];
        for i in 0..6 {
            assert!(close(grad[i][0], expect[i]), "{i}: {} vs {}", grad[i][0], expect[i]);
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for k in MatrixKind::ALL {
            assert_eq!(k.name().parse::<MatrixKind>().unwrap(), k);
        }
        assert!(matches!("curl".parse::<MatrixKind>(), Err(Error::UnsupportedKind(_))));
    }

    #[test]
    fn edge_sign_flip_is_a_diagonal_similarity() {
        let g = TriangleGeometry::new([[0.1, 0.2], [1.4, -0.3], [0.5, 1.1]]).unwrap();
        let signs = [EdgeSign::Minus, EdgeSign::Plus, EdgeSign::Minus];
        let f = g.with_edge_signs(signs);
        let d: [f64; 6] = std::array::from_fn(|i| signs[i % 3].value());
        for kind in MatrixKind::ALL {
            let (rv, cv) = kind.vector_sides();
            let m0 = element_matrix(kind, &g).entries;
            let m1 = element_matrix(kind, &f).entries;
            for i in 0..6 {
                for j in 0..6 {
                    let s = if rv { d[i] } else { 1.0 } * if cv { d[j] } else { 1.0 };
                    assert!((m1[i][j] - s * m0[i][j]).abs() <= 1e-15 * m0[i][j].abs().max(1e-300), "{kind} {i} {j}");
                }
            }
        }
    }
}
