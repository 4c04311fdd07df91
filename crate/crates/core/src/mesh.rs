//! 6-node triangle meshes: structured rectangle generation, validation and
//! the `qtmesh` line format.
//!
//! ```text
//! qtmesh 1
//! nodes N
//! <id> <x> <y>            # N lines, ids 0..N-1 ascending
//! elements E
//! <id> n1 n2 n3 n4 n5 n6  # corners counter-clockwise, then mid 12, 23, 31
//! boundary B
//! <node_id>               # B lines
//! ```
//!
//! Blank lines and `#` comments are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::{Point, TriangleGeometry};

/// Midpoints must sit at their edge average within this fraction of the
/// mesh bounding-box diagonal.
pub const MIDPOINT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct MeshEdge {
    /// Corner node ids, smaller first; this is also the global direction.
    pub nodes: (usize, usize),
    pub midpoint: usize,
    /// `(element, local edge)`; local edge `k` runs corner `k` → `k+1`.
    pub incident: Vec<(usize, usize)>,
}

impl MeshEdge {
    pub fn is_boundary(&self) -> bool {
        self.incident.len() == 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub nodes: Vec<Point>,
    pub elements: Vec<[usize; 6]>,
    pub boundary_nodes: BTreeSet<usize>,
    pub edges: Vec<MeshEdge>,
    /// Global edge index of each element's local edges.
    pub element_edges: Vec<[usize; 3]>,
}

impl Mesh {
    pub fn new(nodes: Vec<Point>, elements: Vec<[usize; 6]>, boundary_nodes: BTreeSet<usize>) -> Result<Self> {
        let violation = |msg: String| Err(Error::InvariantViolation(msg));
        let n = nodes.len();
        if let Some(&bad) = boundary_nodes.iter().find(|&&b| b >= n) {
            return violation(format!("boundary node {bad} does not exist"));
        }
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in &nodes {
            if !(p[0].is_finite() && p[1].is_finite()) {
                return violation(format!("non-finite node coordinate {p:?}"));
            }
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        let scale = ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)).sqrt();

        let mut edge_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut edges: Vec<MeshEdge> = Vec::new();
        let mut element_edges = Vec::with_capacity(elements.len());
        for (e, el) in elements.iter().enumerate() {
            if let Some(&bad) = el.iter().find(|&&id| id >= n) {
                return violation(format!("element {e} references missing node {bad}"));
            }
            let corners = [nodes[el[0]], nodes[el[1]], nodes[el[2]]];
            match TriangleGeometry::new(corners) {
                Ok(g) if !g.reordered => {}
                Ok(_) => return violation(format!("element {e} is wound clockwise")),
                Err(err) => return violation(format!("element {e}: {err}")),
            }
            let mut local = [0; 3];
            for k in 0..3 {
                let (p, q, m) = (el[k], el[(k + 1) % 3], el[3 + k]);
                let mid = [(nodes[p][0] + nodes[q][0]) / 2.0, (nodes[p][1] + nodes[q][1]) / 2.0];
                let off = ((mid[0] - nodes[m][0]).powi(2) + (mid[1] - nodes[m][1]).powi(2)).sqrt();
                if off > MIDPOINT_TOL * scale {
                    return violation(format!("element {e}: node {m} is not the midpoint of edge {p}-{q}"));
                }
                let key = (p.min(q), p.max(q));
                let idx = *edge_index.entry(key).or_insert_with(|| {
                    edges.push(MeshEdge {
                        nodes: key,
                        midpoint: m,
                        incident: Vec::new(),
                    });
                    edges.len() - 1
                });
                let edge = &mut edges[idx];
                if edge.midpoint != m {
                    return violation(format!("edge {p}-{q} has two midpoint nodes ({} and {m})", edge.midpoint));
                }
                edge.incident.push((e, k));
                if edge.incident.len() > 2 {
                    return violation(format!("edge {p}-{q} is shared by more than two elements"));
                }
                local[k] = idx;
            }
            element_edges.push(local);
        }
        for edge in edges.iter().filter(|e| e.is_boundary()) {
            let (p, q) = edge.nodes;
            for v in [p, q, edge.midpoint] {
                if !boundary_nodes.contains(&v) {
                    return violation(format!("node {v} lies on boundary edge {p}-{q} but is not marked boundary"));
                }
            }
        }
        Ok(Self {
            nodes,
            elements,
            boundary_nodes,
            edges,
            element_edges,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn corners(&self, e: usize) -> [Point; 3] {
        let el = &self.elements[e];
        [self.nodes[el[0]], self.nodes[el[1]], self.nodes[el[2]]]
    }

    /// Geometry of element `e` with default (+) edge signs.
    pub fn geometry(&self, e: usize) -> TriangleGeometry {
        TriangleGeometry::new(self.corners(e)).expect("validated at construction")
    }

    pub fn area(&self) -> f64 {
        (0..self.num_elements()).map(|e| self.geometry(e).area).sum()
    }
}

/// `nx × ny` rectangles on `[0, width] × [0, height]`, each split along its
/// bottom-left → top-right diagonal.
pub fn gen_rect_mesh(width: f64, height: f64, nx: usize, ny: usize) -> Result<Mesh> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidDimensions(format!("nx = {nx} and ny = {ny} must be at least 1")));
    }
    if !(width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite()) {
        return Err(Error::InvalidDimensions(format!("width = {width} and height = {height} must be positive")));
    }
    let (cols, rows) = (2 * nx + 1, 2 * ny + 1);
    let id = |i: usize, j: usize| j * cols + i;
    let mut nodes = Vec::with_capacity(cols * rows);
    let mut boundary = BTreeSet::new();
    for j in 0..rows {
        for i in 0..cols {
            let x = width * i as f64 / (2 * nx) as f64;
            let y = height * j as f64 / (2 * ny) as f64;
            nodes.push([x, y]);
            if i == 0 || j == 0 || i == cols - 1 || j == rows - 1 {
                boundary.insert(id(i, j));
            }
        }
    }
    let mut elements = Vec::with_capacity(2 * nx * ny);
    for iy in 0..ny {
        for ix in 0..nx {
            let (i, j) = (2 * ix, 2 * iy);
            elements.push([
                id(i, j),
                id(i + 2, j),
                id(i + 2, j + 2),
                id(i + 1, j),
                id(i + 2, j + 1),
                id(i + 1, j + 1),
            ]);
            elements.push([
                id(i, j),
                id(i + 2, j + 2),
                id(i, j + 2),
                id(i + 1, j + 1),
                id(i + 1, j + 2),
                id(i, j + 1),
            ]);
        }
    }
    Mesh::new(nodes, elements, boundary)
}

/// Two elements sharing the diagonal of a skewed quadrilateral, in one of
/// eight relative orientations. Bit 0 swaps the node ids of the shared
/// endpoints (reversing the global edge direction), bits 1 and 2 rotate the
/// local corner order of the first and second element.
pub fn two_element_mesh(config: u8) -> Mesh {
    let quad = [[0.0, 0.0], [1.3, 0.2], [1.1, 1.0], [-0.2, 0.9]];
    let mut corner_id = [0, 1, 2, 3];
    if config & 1 != 0 {
        corner_id.swap(0, 2);
    }
    let mut nodes = vec![[0.0; 2]; 9];
    for (p, &id) in corner_id.iter().enumerate() {
        nodes[id] = quad[p];
    }
    let pairs = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 0)];
    let mid_id = |p: usize, q: usize| {
        4 + pairs
            .iter()
            .position(|&(a, b)| (a, b) == (p, q) || (a, b) == (q, p))
            .expect("edge of the quadrilateral")
    };
    for &(p, q) in &pairs {
        nodes[mid_id(p, q)] = [(quad[p][0] + quad[q][0]) / 2.0, (quad[p][1] + quad[q][1]) / 2.0];
    }
    let element = |tri: [usize; 3], rotate: bool| {
        let t = if rotate { [tri[1], tri[2], tri[0]] } else { tri };
        [
            corner_id[t[0]],
            corner_id[t[1]],
            corner_id[t[2]],
            mid_id(t[0], t[1]),
            mid_id(t[1], t[2]),
            mid_id(t[2], t[0]),
        ]
    };
    let elements = vec![element([0, 1, 2], config & 2 != 0), element([0, 2, 3], config & 4 != 0)];
    let shared_mid = mid_id(0, 2);
    let boundary = (0..9).filter(|&n| n != shared_mid).collect();
    Mesh::new(nodes, elements, boundary).expect("valid two-element mesh")
}

pub fn write_mesh(mesh: &Mesh) -> String {
    let mut out = String::from("qtmesh 1\n");
    let _ = writeln!(out, "nodes {}", mesh.nodes.len());
    for (i, p) in mesh.nodes.iter().enumerate() {
        let _ = writeln!(out, "{i} {:.16e} {:.16e}", p[0], p[1]);
    }
    let _ = writeln!(out, "elements {}", mesh.elements.len());
    for (e, el) in mesh.elements.iter().enumerate() {
        let _ = writeln!(out, "{e} {} {} {} {} {} {}", el[0], el[1], el[2], el[3], el[4], el[5]);
    }
    let _ = writeln!(out, "boundary {}", mesh.boundary_nodes.len());
    for b in &mesh.boundary_nodes {
        let _ = writeln!(out, "{b}");
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next meaningful line as `(line number, tokens)`.
    fn next_tokens(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, raw) in self.inner.by_ref() {
            let body = raw.split('#').next().unwrap_or("").trim();
            if !body.is_empty() {
                return Some((i + 1, body.split_whitespace().collect()));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        self.next_tokens().ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("unexpected end of input, expected {what}"),
        })
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| parse_err(line, format!("invalid number `{tok}`")))
}

fn section_header(lines: &mut Lines<'_>, name: &str) -> Result<usize> {
    let (ln, toks) = lines.expect(name)?;
    match toks.as_slice() {
        [head, count] if *head == name => parse_num(ln, count),
        _ => Err(parse_err(ln, format!("expected `{name} <count>`"))),
    }
}

pub fn read_mesh(text: &str) -> Result<Mesh> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (ln, toks) = lines.expect("header")?;
    if toks != ["qtmesh", "1"] {
        return Err(parse_err(ln, "expected header `qtmesh 1`"));
    }

    let n = section_header(&mut lines, "nodes")?;
    let mut nodes = Vec::with_capacity(n);
    for expected in 0..n {
        let (ln, toks) = lines.expect("node line")?;
        let [id, x, y] = toks.as_slice() else {
            return Err(parse_err(ln, "expected `id x y`"));
        };
        let id: usize = parse_num(ln, id)?;
        if id != expected {
            return Err(parse_err(ln, format!("node id {id} out of order, expected {expected}")));
        }
        nodes.push([parse_num(ln, x)?, parse_num(ln, y)?]);
    }

    let m = section_header(&mut lines, "elements")?;
    let mut elements = Vec::with_capacity(m);
    for expected in 0..m {
        let (ln, toks) = lines.expect("element line")?;
        if toks.len() != 7 {
            return Err(parse_err(ln, "expected `id n1 n2 n3 n4 n5 n6`"));
        }
        let id: usize = parse_num(ln, toks[0])?;
        if id != expected {
            return Err(parse_err(ln, format!("element id {id} out of order, expected {expected}")));
        }
        let mut el = [0usize; 6];
        for k in 0..6 {
            el[k] = parse_num(ln, toks[k + 1])?;
            if el[k] >= n {
                return Err(parse_err(ln, format!("node {} does not exist", el[k])));
            }
        }
        elements.push(el);
    }

    let b = section_header(&mut lines, "boundary")?;
    let mut boundary = BTreeSet::new();
    for _ in 0..b {
        let (ln, toks) = lines.expect("boundary node")?;
        let [id] = toks.as_slice() else {
            return Err(parse_err(ln, "expected a single node id"));
        };
        let id: usize = parse_num(ln, id)?;
        if id >= n {
            return Err(parse_err(ln, format!("node {id} does not exist")));
        }
        boundary.insert(id);
    }
    if let Some((ln, _)) = lines.next_tokens() {
        return Err(parse_err(ln, "trailing content after boundary section"));
    }
    Mesh::new(nodes, elements, boundary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_square_counts() {
        let m = gen_rect_mesh(1.0, 1.0, 1, 1).unwrap();
        assert_eq!(m.num_elements(), 2);
        assert_eq!(m.num_nodes(), 9);
        assert_eq!(m.boundary_nodes.len(), 8);
        assert_eq!(m.edges.len(), 5);
        assert_eq!(m.edges.iter().filter(|e| !e.is_boundary()).count(), 1);
    }

    #[test]
    fn rectangle_counts() {
        let m = gen_rect_mesh(2.0, 1.0, 4, 2).unwrap();
        assert_eq!(m.num_elements(), 16);
        assert_eq!(m.num_nodes(), 45);
        assert!((m.area() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn invalid_dimensions() {
        assert!(matches!(gen_rect_mesh(1.0, 1.0, 0, 1), Err(Error::InvalidDimensions(_))));
        assert!(matches!(gen_rect_mesh(-1.0, 1.0, 1, 1), Err(Error::InvalidDimensions(_))));
    }

    #[test]
    fn refinement_quadruples_elements() {
        let coarse = gen_rect_mesh(1.5, 0.7, 3, 2).unwrap();
        let fine = gen_rect_mesh(1.5, 0.7, 6, 4).unwrap();
        assert_eq!(fine.num_elements(), 4 * coarse.num_elements());
        assert!((fine.area() - coarse.area()).abs() < 1e-13);
    }

    #[test]
    fn round_trip() {
        let m = gen_rect_mesh(std::f64::consts::PI, 1.0 / 3.0, 3, 2).unwrap();
        let text = write_mesh(&m);
        assert_eq!(read_mesh(&text).unwrap(), m);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# a mesh\nqtmesh 1\n\nnodes 6\n0 0 0\n1 1 0\n2 0 1 # top\n3 0.5 0\n4 0.5 0.5\n5 0 0.5\nelements 1\n0 0 1 2 3 4 5\nboundary 6\n0\n1\n2\n3\n4\n5\n";
        let m = read_mesh(text).unwrap();
        assert_eq!(m.num_elements(), 1);
        assert_eq!(m.edges.len(), 3);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = read_mesh("qtmesh 1\nnodes 2\n0 0 0\n1 x 0\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 4, message: "invalid number `x`".into() });
        assert!(matches!(read_mesh("qtmesh 2\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn bad_winding_and_midpoint_are_rejected() {
        let base = |el: &str, mid: &str| {
            format!("qtmesh 1\nnodes 6\n0 0 0\n1 1 0\n2 0 1\n3 {mid}\n4 0.5 0.5\n5 0 0.5\nelements 1\n0 {el}\nboundary 6\n0\n1\n2\n3\n4\n5\n")
        };
        let cw = read_mesh(&base("0 2 1 5 4 3", "0.5 0")).unwrap_err();
        assert!(matches!(cw, Error::InvariantViolation(_)), "{cw}");
        let off = read_mesh(&base("0 1 2 3 4 5", "0.6 0")).unwrap_err();
        assert!(matches!(off, Error::InvariantViolation(_)), "{off}");
    }

    #[test]
    fn two_element_configurations_are_valid() {
        for config in 0..8 {
            let m = two_element_mesh(config);
            assert_eq!(m.num_elements(), 2);
            assert_eq!(m.edges.iter().filter(|e| !e.is_boundary()).count(), 1);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn generated_meshes_round_trip(w in 0.1f64..10.0, h in 0.1f64..10.0, nx in 1usize..5, ny in 1usize..5) {
            let m = gen_rect_mesh(w, h, nx, ny).unwrap();
            prop_assert_eq!(m.num_nodes(), (2 * nx + 1) * (2 * ny + 1));
            prop_assert!((m.area() - w * h).abs() <= 1e-12 * w * h);
            prop_assert_eq!(read_mesh(&write_mesh(&m)).unwrap(), m);
        }
    }
}
