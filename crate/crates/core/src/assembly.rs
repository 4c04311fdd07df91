//! Global assembly of elemental matrices.
//!
//! Elements are processed in parallel; each yields its own triplet list and
//! the lists are concatenated in element order, so the finalized matrix is
//! bit-identical for any thread count.

use rayon::prelude::*;

use crate::dof::{DofMap, FieldType};
use crate::error::{Error, Result};
use crate::geometry::TriangleGeometry;
use crate::matrices::{curl_curl_matrix, element_matrix, local_gradient_matrix, vector_mass_matrix, MatrixKind};
use crate::mesh::Mesh;
use crate::scalar::Mat6;
use crate::shape::{eval_uv, AreaCoords};
use crate::sparse::{SparseMatrix, TripletBuilder};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    Kind(MatrixKind),
    /// `dVx_dVx + dUy_dUy - dUy_dVx - dUy_dVxᵀ`.
    CurlCurl,
    /// `UU + VV`.
    VectorMass,
}

impl Operator {
    pub fn name(self) -> &'static str {
        match self {
            Operator::Kind(k) => k.name(),
            Operator::CurlCurl => "curl_curl",
            Operator::VectorMass => "vector_mass",
        }
    }

    /// Field types required by rows and columns.
    pub fn field_types(self) -> (FieldType, FieldType) {
        let ft = |vector: bool| if vector { FieldType::Edge } else { FieldType::Nodal };
        match self {
            Operator::Kind(k) => {
                let (r, c) = k.vector_sides();
                (ft(r), ft(c))
            }
            Operator::CurlCurl | Operator::VectorMass => (FieldType::Edge, FieldType::Edge),
        }
    }

    pub fn local_matrix(self, geom: &TriangleGeometry) -> Mat6<f64> {
        match self {
            Operator::Kind(k) => element_matrix(k, geom).entries,
            Operator::CurlCurl => curl_curl_matrix(geom),
            Operator::VectorMass => vector_mass_matrix(geom),
        }
    }
}

impl From<MatrixKind> for Operator {
    fn from(kind: MatrixKind) -> Self {
        Operator::Kind(kind)
    }
}

/// `weight * operator` as one summand of an assembled matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub operator: Operator,
    pub weight: f64,
}

impl Term {
    pub fn new(operator: impl Into<Operator>, weight: f64) -> Self {
        Self {
            operator: operator.into(),
            weight,
        }
    }
}

/// Scalar stiffness `stiff_xx + stiff_yy`.
pub fn scalar_stiffness() -> Vec<Term> {
    vec![Term::new(MatrixKind::StiffXX, 1.0), Term::new(MatrixKind::StiffYY, 1.0)]
}

fn check_side(op: Operator, side: &'static str, expected: FieldType, map: &DofMap) -> Result<()> {
    if expected == map.field_type {
        Ok(())
    } else {
        Err(Error::KindFieldMismatch {
            operator: op.name().to_string(),
            side,
            expected: expected.name(),
            found: map.field_type.name(),
        })
    }
}

/// `coefficient * Σ weight · operator` over `dofmap` on both sides.
pub fn assemble(mesh: &Mesh, dofmap: &DofMap, terms: &[Term], coefficient: f64) -> Result<SparseMatrix> {
    assemble_mixed(mesh, dofmap, dofmap, terms, coefficient)
}

/// Like [`assemble`] with separate row and column numberings.
pub fn assemble_mixed(
    mesh: &Mesh,
    row_map: &DofMap,
    col_map: &DofMap,
    terms: &[Term],
    coefficient: f64,
) -> Result<SparseMatrix> {
    for term in terms {
        let (r, c) = term.operator.field_types();
        check_side(term.operator, "row", r, row_map)?;
        check_side(term.operator, "column", c, col_map)?;
    }
    let per_element: Vec<Vec<(usize, usize, f64)>> = (0..mesh.num_elements())
        .into_par_iter()
        .map(|e| {
            let geom = mesh.geometry(e);
            let mut local = [[0.0; 6]; 6];
            for term in terms {
                let m = term.operator.local_matrix(&geom);
                for i in 0..6 {
                    for j in 0..6 {
                        local[i][j] += term.weight * m[i][j];
                    }
                }
            }
            scatter(&local, &row_map.local[e], &col_map.local[e], coefficient)
        })
        .collect();
    let mut builder = TripletBuilder::new(row_map.num_dofs, col_map.num_dofs);
    builder.extend(per_element.into_iter().flatten());
    Ok(builder.finalize())
}

fn scatter(
    local: &Mat6<f64>,
    rows: &[crate::dof::LocalDof; 6],
    cols: &[crate::dof::LocalDof; 6],
    coefficient: f64,
) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::with_capacity(36);
    for (i, r) in rows.iter().enumerate() {
        let Some(gi) = r.global else { continue };
        for (j, c) in cols.iter().enumerate() {
            let Some(gj) = c.global else { continue };
            out.push((gi, gj, coefficient * r.sign * c.sign * local[i][j]));
        }
    }
    out
}

/// Global discrete gradient: column `j` holds the edge-DOF coefficients of
/// `∇N_j`. Entries are interpolation coefficients, not integrals, so each
/// global entry is written once (by the first element that reaches it).
pub fn assemble_gradient(mesh: &Mesh, edge_map: &DofMap, node_map: &DofMap) -> Result<SparseMatrix> {
    let op = "gradient";
    if edge_map.field_type != FieldType::Edge {
        return Err(Error::KindFieldMismatch {
            operator: op.into(),
            side: "row",
            expected: "edge",
            found: edge_map.field_type.name(),
        });
    }
    if node_map.field_type != FieldType::Nodal {
        return Err(Error::KindFieldMismatch {
            operator: op.into(),
            side: "column",
            expected: "nodal",
            found: node_map.field_type.name(),
        });
    }
    let per_element: Vec<Vec<(usize, usize, f64)>> = (0..mesh.num_elements())
        .into_par_iter()
        .map(|e| scatter(&local_gradient_matrix(&mesh.geometry(e)), &edge_map.local[e], &node_map.local[e], 1.0))
        .collect();
    let mut seen = std::collections::BTreeMap::new();
    for (r, c, v) in per_element.into_iter().flatten() {
        seen.entry((r, c)).or_insert(v);
    }
    let mut builder = TripletBuilder::new(edge_map.num_dofs, node_map.num_dofs);
    builder.extend(seen.into_iter().filter(|&(_, v)| v != 0.0).map(|((r, c), v)| (r, c, v)));
    Ok(builder.finalize())
}

/// Vector field `(u, v)` of global edge coefficients inside element `e`.
pub fn interpolate_edge_field(mesh: &Mesh, edge_map: &DofMap, e: usize, coeffs: &[f64], l: AreaCoords) -> [f64; 2] {
    let (u, v) = eval_uv(&mesh.geometry(e), l);
    let mut out = [0.0; 2];
    for (i, d) in edge_map.local[e].iter().enumerate() {
        if let Some(g) = d.global {
            out[0] += d.sign * coeffs[g] * u[i];
            out[1] += d.sign * coeffs[g] * v[i];
        }
    }
    out
}

/// Largest relative disagreement of the tangential trace along interior
/// edges, sampled at `points` equispaced interior points per edge, when
/// evaluated from each of the two incident elements.
pub fn tangential_mismatch(mesh: &Mesh, edge_map: &DofMap, coeffs: &[f64], points: usize) -> f64 {
    let mut worst = 0.0f64;
    for edge in mesh.edges.iter().filter(|e| !e.is_boundary()) {
        let (p, q) = edge.nodes;
        let (a, b) = (mesh.nodes[p], mesh.nodes[q]);
        let t = [b[0] - a[0], b[1] - a[1]];
        let len = t[0].hypot(t[1]);
        let t = [t[0] / len, t[1] / len];
        let mut diffs = Vec::with_capacity(points);
        let mut scale = 0.0f64;
        for s in 1..=points {
            let s = s as f64 / (points + 1) as f64;
            let x = [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
            let traces: Vec<f64> = edge
                .incident
                .iter()
                .map(|&(e, _)| {
                    let geom = mesh.geometry(e);
                    let f = interpolate_edge_field(mesh, edge_map, e, coeffs, geom.area_coordinates(x));
                    f[0] * t[0] + f[1] * t[1]
                })
                .collect();
            scale = scale.max(traces[0].abs()).max(traces[1].abs());
            diffs.push((traces[0] - traces[1]).abs());
        }
        if scale > 0.0 {
            worst = diffs.into_iter().fold(worst, |w, d| w.max(d / scale));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::norm2;
    use crate::geometry::EdgeSign;
    use crate::mesh::{gen_rect_mesh, two_element_mesh};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_element_identity_scatter() {
        let m = gen_rect_mesh(1.0, 1.0, 1, 1).unwrap();
        let single = Mesh::new(m.nodes.clone(), vec![m.elements[0]], m.elements[0].iter().copied().collect()).unwrap();
        let map = DofMap::build(&single, FieldType::Nodal, false);
        let mut terms = scalar_stiffness();
        terms.push(Term::new(MatrixKind::MassNN, 1.0));
        let k = assemble(&single, &map, &terms, 1.0).unwrap();
        let g = single.geometry(0);
        let sum = |kind| element_matrix(kind, &g).entries;
        let (xx, yy, nn) = (sum(MatrixKind::StiffXX), sum(MatrixKind::StiffYY), sum(MatrixKind::MassNN));
        let el = single.elements[0];
        for i in 0..6 {
            for j in 0..6 {
                let want = xx[i][j] + yy[i][j] + nn[i][j];
                let got = k.get(map.entity_dofs[el[i]].unwrap(), map.entity_dofs[el[j]].unwrap());
                assert!((got - want).abs() <= 1e-15 * want.abs().max(1.0), "{i},{j}");
            }
        }
    }

    #[test]
    fn stiffness_row_sums_vanish_and_mass_totals_area() {
        let m = gen_rect_mesh(2.0, 1.0, 4, 3).unwrap();
        let map = DofMap::build(&m, FieldType::Nodal, false);
        let k = assemble(&m, &map, &scalar_stiffness(), 1.0).unwrap();
        assert!(k.row_sums().iter().all(|s| s.abs() < 1e-12 * k.max_abs()));
        let mass = assemble(&m, &map, &[Term::new(MatrixKind::MassNN, 1.0)], 1.0).unwrap();
        assert!((mass.total_sum() - 2.0).abs() < 1e-12 * 2.0);
    }

    #[test]
    fn symmetric_kinds_assemble_symmetric() {
        let m = gen_rect_mesh(1.3, 0.8, 3, 2).unwrap();
        for dirichlet in [false, true] {
            let nodal = DofMap::build(&m, FieldType::Nodal, dirichlet);
            let edge = DofMap::build(&m, FieldType::Edge, dirichlet);
            for kind in MatrixKind::ALL.into_iter().filter(|k| k.is_symmetric()) {
                let map = if kind.vector_sides().0 { &edge } else { &nodal };
                let a = assemble(&m, map, &[Term::new(kind, 1.0)], 1.0).unwrap();
                assert!(a.asymmetry() <= 1e-12 * a.frobenius_norm(), "{kind}");
            }
            for op in [Operator::CurlCurl, Operator::VectorMass] {
                let a = assemble(&m, &edge, &[Term::new(op, 1.0)], 1.0).unwrap();
                assert!(a.asymmetry() <= 1e-12 * a.frobenius_norm());
            }
        }
    }

    #[test]
    fn field_mismatch_is_rejected() {
        let m = gen_rect_mesh(1.0, 1.0, 1, 1).unwrap();
        let nodal = DofMap::build(&m, FieldType::Nodal, false);
        let edge = DofMap::build(&m, FieldType::Edge, false);
        let err = assemble(&m, &nodal, &[Term::new(MatrixKind::UU, 1.0)], 1.0).unwrap_err();
        assert!(matches!(err, Error::KindFieldMismatch { side: "row", .. }));
        let err = assemble_mixed(&m, &edge, &edge, &[Term::new(MatrixKind::UdNx, 1.0)], 1.0).unwrap_err();
        assert!(matches!(err, Error::KindFieldMismatch { side: "column", .. }));
        assert!(assemble_mixed(&m, &edge, &nodal, &[Term::new(MatrixKind::UdNx, 1.0)], 1.0).is_ok());
    }

    #[test]
    fn signs_at_scatter_match_signed_geometry() {
        let m = gen_rect_mesh(1.0, 0.7, 2, 2).unwrap();
        let map = DofMap::build(&m, FieldType::Edge, false);
        let a = assemble(&m, &map, &[Term::new(Operator::CurlCurl, 1.0), Term::new(MatrixKind::UV, 0.5)], 1.0)
            .unwrap()
            .to_dense();
        let mut b = crate::dense::DenseMatrix::zeros(map.num_dofs, map.num_dofs);
        for e in 0..m.num_elements() {
            let g = m.geometry(e).with_edge_signs(map.edge_signs[e]);
            let cc = curl_curl_matrix(&g);
            let uv = element_matrix(MatrixKind::UV, &g).entries;
            for i in 0..6 {
                for j in 0..6 {
                    let (gi, gj) = (map.local[e][i].global.unwrap(), map.local[e][j].global.unwrap());
                    b[(gi, gj)] += cc[i][j] + 0.5 * uv[i][j];
                }
            }
        }
        assert!(a.sub(&b).frobenius_norm() <= 1e-14 * a.frobenius_norm());
        assert!(map.edge_signs.iter().flatten().any(|&s| s == EdgeSign::Minus));
    }

    #[test]
    fn curl_curl_annihilates_gradients() {
        let m = gen_rect_mesh(1.7, 1.1, 3, 2).unwrap();
        for dirichlet in [false, true] {
            let edge = DofMap::build(&m, FieldType::Edge, dirichlet);
            let nodal = DofMap::build(&m, FieldType::Nodal, dirichlet);
            let k = assemble(&m, &edge, &[Term::new(Operator::CurlCurl, 1.0)], 1.0).unwrap();
            let g = assemble_gradient(&m, &edge, &nodal).unwrap();
            let kg = k.matmul(&g);
            assert!(kg.max_abs() <= 1e-10 * k.max_abs() * g.max_abs());
        }
    }

    #[test]
    fn gradient_is_consistent_across_elements() {
        let m = gen_rect_mesh(1.0, 1.0, 2, 2).unwrap();
        let edge = DofMap::build(&m, FieldType::Edge, false);
        let nodal = DofMap::build(&m, FieldType::Nodal, false);
        let g = assemble_gradient(&m, &edge, &nodal).unwrap();
        for e in 0..m.num_elements() {
            let local = local_gradient_matrix(&m.geometry(e));
            for i in 0..6 {
                for j in 0..6 {
                    let (r, c) = (edge.local[e][i], nodal.local[e][j]);
                    let got = g.get(r.global.unwrap(), c.global.unwrap());
                    assert!((got - r.sign * local[i][j]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn tangential_traces_agree_in_every_configuration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for config in 0..8 {
            let m = two_element_mesh(config);
            let map = DofMap::build(&m, FieldType::Edge, false);
            let coeffs: Vec<f64> = (0..map.num_dofs).map(|_| rng.random_range(-1.0..1.0)).collect();
            assert!(tangential_mismatch(&m, &map, &coeffs, 5) < 1e-11, "config {config}");
        }
    }

    #[test]
    fn flipping_a_sign_breaks_continuity() {
        let m = two_element_mesh(0);
        let mut map = DofMap::build(&m, FieldType::Edge, false);
        let edge = m.edges.iter().position(|e| !e.is_boundary()).unwrap();
        let (e, k) = m.edges[edge].incident[1];
        map.local[e][k].sign = -map.local[e][k].sign;
        let coeffs: Vec<f64> = (0..map.num_dofs).map(|i| 1.0 + i as f64).collect();
        assert!(tangential_mismatch(&m, &map, &coeffs, 5) > 1e-3);
    }

    #[test]
    fn parallel_assembly_is_bit_identical() {
        let m = gen_rect_mesh(2.0, 1.0, 6, 4).unwrap();
        let map = DofMap::build(&m, FieldType::Edge, true);
        let terms = [Term::new(Operator::CurlCurl, 1.0)];
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| assemble(&m, &map, &terms, 1.0).unwrap());
        let b = four.install(|| assemble(&m, &map, &terms, 1.0).unwrap());
        assert_eq!(a, b);
        assert!(norm2(&a.row_sums()).is_finite());
    }
}
