//! Global numbering of nodal and edge degrees of freedom.
//!
//! Global edge direction is smaller node id → larger. Each global edge `E`
//! carries two DOFs, family 0 at `2E` and family 1 at `2E + 1` (before
//! elimination). Local basis `k` (first family of local edge `k`) and
//! `k + 3` (second family) map to families 0 and 1 when the local corner
//! order runs along the global direction, and to families 1 and 0 with
//! sign -1 otherwise.

use serde::Serialize;

use crate::geometry::EdgeSign;
use crate::mesh::Mesh;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldType {
    Nodal,
    Edge,
}

impl FieldType {
    pub fn name(self) -> &'static str {
        match self {
            FieldType::Nodal => "nodal",
            FieldType::Edge => "edge",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalDof {
    /// `None` when eliminated by a Dirichlet condition.
    pub global: Option<usize>,
    pub sign: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DofMap {
    pub field_type: FieldType,
    pub dirichlet: bool,
    pub num_dofs: usize,
    /// Global index per node (nodal) or per `2 * edge + family` (edge).
    pub entity_dofs: Vec<Option<usize>>,
    /// Local basis index → global DOF, per element.
    pub local: Vec<[LocalDof; 6]>,
    /// Orientation of each local edge against the global direction.
    pub edge_signs: Vec<[EdgeSign; 3]>,
}

impl DofMap {
    pub fn build(mesh: &Mesh, field_type: FieldType, dirichlet: bool) -> Self {
        let edge_signs: Vec<[EdgeSign; 3]> = mesh
            .elements
            .iter()
            .map(|el| {
                std::array::from_fn(|k| {
                    if el[k] < el[(k + 1) % 3] {
                        EdgeSign::Plus
                    } else {
                        EdgeSign::Minus
                    }
                })
            })
            .collect();

        let eliminated: Vec<bool> = match field_type {
            FieldType::Nodal => (0..mesh.num_nodes())
                .map(|n| dirichlet && mesh.boundary_nodes.contains(&n))
                .collect(),
            FieldType::Edge => mesh
                .edges
                .iter()
                .flat_map(|e| {
                    let gone = dirichlet && e.is_boundary();
                    [gone, gone]
                })
                .collect(),
        };
        let mut next = 0;
        let entity_dofs: Vec<Option<usize>> = eliminated
            .iter()
            .map(|&gone| {
                (!gone).then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect();

        let local = mesh
            .elements
            .iter()
            .enumerate()
            .map(|(e, el)| match field_type {
                FieldType::Nodal => std::array::from_fn(|i| LocalDof {
                    global: entity_dofs[el[i]],
                    sign: 1.0,
                }),
                FieldType::Edge => {
                    let mut table = [LocalDof { global: None, sign: 1.0 }; 6];
                    for k in 0..3 {
                        let edge = mesh.element_edges[e][k];
                        let (first, second, sign) = match edge_signs[e][k] {
                            EdgeSign::Plus => (2 * edge, 2 * edge + 1, 1.0),
                            EdgeSign::Minus => (2 * edge + 1, 2 * edge, -1.0),
                        };
                        table[k] = LocalDof {
                            global: entity_dofs[first],
                            sign,
                        };
                        table[k + 3] = LocalDof {
                            global: entity_dofs[second],
                            sign,
                        };
                    }
                    table
                }
            })
            .collect();

        Self {
            field_type,
            dirichlet,
            num_dofs: next,
            entity_dofs,
            local,
            edge_signs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::gen_rect_mesh;

    #[test]
    fn nodal_counts_on_unit_square() {
        let m = gen_rect_mesh(1.0, 1.0, 1, 1).unwrap();
        assert_eq!(DofMap::build(&m, FieldType::Nodal, true).num_dofs, 1);
        assert_eq!(DofMap::build(&m, FieldType::Nodal, false).num_dofs, 9);
    }

    #[test]
    fn edge_counts_on_unit_square() {
        let m = gen_rect_mesh(1.0, 1.0, 1, 1).unwrap();
        assert_eq!(DofMap::build(&m, FieldType::Edge, false).num_dofs, 10);
        assert_eq!(DofMap::build(&m, FieldType::Edge, true).num_dofs, 2);
    }

    #[test]
    fn shared_diagonal_gets_same_dofs() {
        let m = gen_rect_mesh(1.0, 1.0, 1, 1).unwrap();
        let map = DofMap::build(&m, FieldType::Edge, false);
        let diag = m.edges.iter().position(|e| !e.is_boundary()).unwrap();
        let [(e0, k0), (e1, k1)] = [m.edges[diag].incident[0], m.edges[diag].incident[1]];
        let (a, b) = (map.local[e0], map.local[e1]);
        // adjacent counter-clockwise elements traverse the edge in opposite directions
        assert_ne!(map.edge_signs[e0][k0], map.edge_signs[e1][k1]);
        assert_eq!(a[k0].global, b[k1 + 3].global);
        assert_eq!(a[k0 + 3].global, b[k1].global);
        assert_eq!(a[k0].sign, -b[k1].sign);
    }

    #[test]
    fn indices_are_contiguous_and_eliminated_never_mapped() {
        let m = gen_rect_mesh(2.0, 1.0, 3, 2).unwrap();
        for ft in [FieldType::Nodal, FieldType::Edge] {
            for dirichlet in [false, true] {
                let map = DofMap::build(&m, ft, dirichlet);
                let mut seen: Vec<usize> = map.entity_dofs.iter().flatten().copied().collect();
                seen.sort_unstable();
                assert_eq!(seen, (0..map.num_dofs).collect::<Vec<_>>());
                for row in &map.local {
                    for d in row {
                        if let Some(g) = d.global {
                            assert!(g < map.num_dofs);
                        }
                    }
                }
            }
        }
    }
}
