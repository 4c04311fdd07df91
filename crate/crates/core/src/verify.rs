//! Dual-oracle verification sweep over random triangles.
//!
//! Every closed form is compared against Gauss quadrature of the basis
//! definitions (with random edge signs, relative Frobenius deviation) and
//! against exact rational integration (l-stripped, exact equality).

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::exact::{ExactFields, RationalTriangle};
use crate::geometry::{EdgeSign, Point, TriangleGeometry};
use crate::matrices::{closed_form, ClosedFormInputs, dvx_dvx_listed, element_matrix, Field, MatrixKind};
use crate::quadrature::{make_rule, oracle_matrix};
use crate::scalar::{Fraction, Mat6};

pub const DEVIATION_TOL: f64 = 1e-12;
/// Reject triangles whose area is below this fraction of their bounding box.
pub const MIN_AREA_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KindReport {
    pub kind: String,
    pub max_rel_deviation: f64,
    pub exact_match: bool,
    pub triangles: usize,
}

/// Which of two candidate expressions for one matrix entry the exact
/// oracle agrees with.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Adjudication {
    pub entry: String,
    pub listed: String,
    pub transformed: String,
    pub listed_matches: usize,
    pub transformed_matches: usize,
    pub triangles: usize,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub triangles: usize,
    pub kinds: Vec<KindReport>,
    pub adjudications: Vec<Adjudication>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomTriangle {
    pub corners: [Point; 3],
    pub signs: [EdgeSign; 3],
}

/// Corners uniform in `[-1, 1]²`, rejected until the area is at least
/// [`MIN_AREA_FRACTION`] of the axis-aligned bounding box; independent
/// random edge signs.
pub fn random_triangle(rng: &mut impl Rng) -> RandomTriangle {
    loop {
        let corners: [Point; 3] = std::array::from_fn(|_| [rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)]);
        let xs = corners.map(|p| p[0]);
        let ys = corners.map(|p| p[1]);
        let span = |v: [f64; 3]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max) - v.iter().copied().fold(f64::INFINITY, f64::min);
        let bbox = span(xs) * span(ys);
        let area = 0.5
            * ((corners[1][0] - corners[0][0]) * (corners[2][1] - corners[0][1])
                - (corners[2][0] - corners[0][0]) * (corners[1][1] - corners[0][1]))
                .abs();
        if bbox > 0.0 && area >= MIN_AREA_FRACTION * bbox {
            let signs = std::array::from_fn(|_| if rng.random_bool(0.5) { EdgeSign::Plus } else { EdgeSign::Minus });
            return RandomTriangle { corners, signs };
        }
    }
}

pub fn random_triangles(count: usize, seed: u64) -> Vec<RandomTriangle> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_triangle(&mut rng)).collect()
}

fn field_degree(f: Field) -> usize {
    match f {
        Field::N => 2,
        Field::Nx | Field::Ny | Field::U | Field::V => 1,
        Field::Uy | Field::Vx => 0,
    }
}

fn rel_frobenius(a: &Mat6<f64>, reference: &Mat6<f64>) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..6 {
        for j in 0..6 {
            num += (a[i][j] - reference[i][j]).powi(2);
            den += reference[i][j].powi(2);
        }
    }
    if den == 0.0 {
        num.sqrt()
    } else {
        (num / den).sqrt()
    }
}

fn exact_equal(a: &Mat6<Fraction>, b: &Mat6<crate::exact::Rational>) -> bool {
    a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| x == y)
}

struct TriangleOutcome {
    deviation: [f64; 16],
    exact: [bool; 16],
    listed_a33: bool,
    transformed_a33: bool,
}

fn check_triangle(t: &RandomTriangle) -> TriangleOutcome {
    let geom = TriangleGeometry::new(t.corners)
        .expect("rejection sampling keeps triangles non-degenerate")
        .with_edge_signs(t.signs);
    let exact_tri = RationalTriangle::from_f64(t.corners).expect("finite corners");
    let stripped = exact_tri.stripped_inputs();
    let stripped = ClosedFormInputs {
        b: stripped.b.each_ref().map(Fraction::from),
        c: stripped.c.each_ref().map(Fraction::from),
        l: stripped.l.each_ref().map(Fraction::from),
        area: Fraction::from(&stripped.area),
    };
    let oracle = ExactFields::new(&exact_tri);
    let mut deviation = [0.0; 16];
    let mut exact = [false; 16];
    for (n, kind) in MatrixKind::ALL.into_iter().enumerate() {
        let (f, g) = kind.factors();
        let rule = make_rule(field_degree(f) + field_degree(g)).expect("degree <= 4");
        deviation[n] = rel_frobenius(&element_matrix(kind, &geom).entries, &oracle_matrix(kind, &geom, &rule));
        exact[n] = exact_equal(&closed_form(kind, &stripped), &oracle.matrix(kind));
    }
    let truth = oracle.matrix(MatrixKind::DVxDVx);
    let listed = dvx_dvx_listed(&stripped);
    let transformed = closed_form(MatrixKind::DVxDVx, &stripped);
    TriangleOutcome {
        deviation,
        exact,
        listed_a33: listed[2][2] == truth[2][2],
        transformed_a33: transformed[2][2] == truth[2][2],
    }
}

/// Runs the sweep on the current rayon pool. Results are aggregated in
/// triangle order and do not depend on the thread count.
pub fn run_verify(triangles: usize, seed: u64) -> VerifyReport {
    let tris = random_triangles(triangles, seed);
    let outcomes: Vec<TriangleOutcome> = tris.par_iter().map(check_triangle).collect();

    let kinds: Vec<KindReport> = MatrixKind::ALL
        .into_iter()
        .enumerate()
        .map(|(n, kind)| KindReport {
            kind: kind.name().to_string(),
            max_rel_deviation: outcomes.iter().map(|o| o.deviation[n]).fold(0.0, f64::max),
            exact_match: outcomes.iter().all(|o| o.exact[n]),
            triangles,
        })
        .collect();

    let listed_matches = outcomes.iter().filter(|o| o.listed_a33).count();
    let transformed_matches = outcomes.iter().filter(|o| o.transformed_a33).count();
    let verdict = match (listed_matches == triangles, transformed_matches == triangles) {
        _ if triangles == 0 => "undecided (no triangles)".to_string(),
        (true, true) => "both forms agree with the exact integral on every triangle".to_string(),
        (false, true) => "listed entry is incorrect; the b<->c transformed entry is exact".to_string(),
        (true, false) => "listed entry is exact; the b<->c transformed entry is incorrect".to_string(),
        (false, false) => "neither form agrees with the exact integral".to_string(),
    };
    let adjudications = vec![Adjudication {
        entry: "dVx_dVx (3,3)".to_string(),
        listed: "l3^2 b1^2 c3^2 / (16 A^3)".to_string(),
        transformed: "l3^2 c1^2 b3^2 / (16 A^3)".to_string(),
        listed_matches,
        transformed_matches,
        triangles,
        verdict,
    }];

    let pass = triangles > 0 && kinds.iter().all(|k| k.exact_match && k.max_rel_deviation < DEVIATION_TOL);
    VerifyReport {
        seed,
        triangles,
        kinds,
        adjudications,
        pass,
    }
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verify: {} triangles, seed {}", self.triangles, self.seed);
        let _ = writeln!(out, "{:<10} {:>14} {:>8}", "kind", "max rel dev", "exact");
        for k in &self.kinds {
            let _ = writeln!(
                out,
                "{:<10} {:>14.3e} {:>8}",
                k.kind,
                k.max_rel_deviation,
                if k.exact_match { "yes" } else { "NO" }
            );
        }
        for a in &self.adjudications {
            let _ = writeln!(out, "adjudication {}:", a.entry);
            let _ = writeln!(out, "  listed      {}  matches {}/{}", a.listed, a.listed_matches, a.triangles);
            let _ = writeln!(out, "  transformed {}  matches {}/{}", a.transformed, a.transformed_matches, a.triangles);
            let _ = writeln!(out, "  verdict: {}", a.verdict);
        }
        let _ = writeln!(out, "result: {}", if self.pass { "PASS" } else { "FAIL" });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_respects_rejection_rule() {
        for t in random_triangles(200, 3) {
            let g = TriangleGeometry::new(t.corners).unwrap();
            assert!(t.corners.iter().flatten().all(|v| v.abs() <= 1.0));
            assert!(g.area >= 0.0);
        }
    }

    #[test]
    fn generator_is_deterministic() {
        assert_eq!(random_triangles(20, 9), random_triangles(20, 9));
        assert_ne!(random_triangles(20, 9), random_triangles(20, 10));
    }

    #[test]
    fn single_triangle_passes() {
        let r = run_verify(1, 42);
        assert!(r.pass, "{}", r.to_text());
        assert_eq!(r.kinds.len(), 16);
    }

    #[test]
    fn small_sweep_detects_listed_typo() {
        let r = run_verify(20, 1);
        assert!(r.pass);
        let a = &r.adjudications[0];
        assert_eq!(a.transformed_matches, 20);
        assert_eq!(a.listed_matches, 0);
    }
}
