//! Rectangular waveguide cutoff modes from the scalar Helmholtz problem
//! `(stiff_xx + stiff_yy) φ = k_c² mass_NN φ`.
//!
//! TM modes vanish on the wall (Dirichlet); TE modes have zero normal
//! derivative (Neumann), whose constant mode is dropped.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;

use crate::assembly::{assemble, scalar_stiffness, Term};
use crate::dof::{DofMap, FieldType};
use crate::eigen::solve_generalized;
use crate::error::{Error, Result};
use crate::matrices::MatrixKind;
use crate::mesh::{gen_rect_mesh, Mesh};

/// Largest system handed to the dense solver.
pub const DENSE_BUDGET: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeType {
    Tm,
    Te,
}

impl fmt::Display for ModeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModeType::Tm => "tm",
            ModeType::Te => "te",
        })
    }
}

impl FromStr for ModeType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tm" => Ok(ModeType::Tm),
            "te" => Ok(ModeType::Te),
            _ => Err(Error::InvalidDimensions(format!("unknown mode type `{s}` (expected tm or te)"))),
        }
    }
}

/// `(k_c, m, n)` of the analytic modes, ascending (ties by `m`, then `n`).
pub fn analytic_cutoffs(width: f64, height: f64, mode: ModeType, count: usize) -> Vec<(f64, usize, usize)> {
    let start = match mode {
        ModeType::Tm => 1,
        ModeType::Te => 0,
    };
    let mut all = Vec::new();
    for m in start..=count + 1 {
        for n in start..=count + 1 {
            if m + n == 0 {
                continue;
            }
            let kc = PI * ((m as f64 / width).powi(2) + (n as f64 / height).powi(2)).sqrt();
            all.push((kc, m, n));
        }
    }
    all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    all.truncate(count);
    all
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutoffRow {
    pub index: usize,
    /// Generalized eigenvalue `k_c²`.
    pub eigenvalue: f64,
    pub computed: f64,
    pub analytic: f64,
    pub rel_error: f64,
    pub m: usize,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveguideReport {
    pub width: f64,
    pub height: f64,
    pub mode: ModeType,
    pub elements: usize,
    pub dofs: usize,
    pub rows: Vec<CutoffRow>,
}

/// Cutoff wavenumbers of the lowest `n_modes` modes on `mesh`, compared with
/// the analytic values of a `width × height` guide.
pub fn cutoff_modes(mesh: &Mesh, width: f64, height: f64, mode: ModeType, n_modes: usize) -> Result<WaveguideReport> {
    if n_modes == 0 {
        return Err(Error::InvalidDimensions("n_modes must be at least 1".into()));
    }
    let map = DofMap::build(mesh, FieldType::Nodal, mode == ModeType::Tm);
    if map.num_dofs > DENSE_BUDGET {
        return Err(Error::BudgetExceeded {
            dofs: map.num_dofs,
            limit: DENSE_BUDGET,
        });
    }
    let skip = usize::from(mode == ModeType::Te);
    if n_modes + skip > map.num_dofs {
        return Err(Error::InvalidDimensions(format!(
            "{n_modes} modes requested but the mesh has only {} DOFs",
            map.num_dofs
        )));
    }
    let a = assemble(mesh, &map, &scalar_stiffness(), 1.0)?.to_dense();
    let b = assemble(mesh, &map, &[Term::new(MatrixKind::MassNN, 1.0)], 1.0)?.to_dense();
    let eig = solve_generalized(&a, &b, n_modes + skip)?;
    let analytic = analytic_cutoffs(width, height, mode, n_modes);
    let rows = eig
        .eigenvalues
        .iter()
        .skip(skip)
        .zip(&analytic)
        .enumerate()
        .map(|(i, (&lambda, &(kc, m, n)))| {
            let computed = lambda.max(0.0).sqrt();
            CutoffRow {
                index: i + 1,
                eigenvalue: lambda,
                computed,
                analytic: kc,
                rel_error: (computed - kc).abs() / kc,
                m,
                n,
            }
        })
        .collect();
    Ok(WaveguideReport {
        width,
        height,
        mode,
        elements: mesh.num_elements(),
        dofs: map.num_dofs,
        rows,
    })
}

/// [`cutoff_modes`] on the structured `nx × ny` mesh of the guide.
pub fn rect_cutoff_modes(
    width: f64,
    height: f64,
    nx: usize,
    ny: usize,
    mode: ModeType,
    n_modes: usize,
) -> Result<WaveguideReport> {
    let mesh = gen_rect_mesh(width, height, nx, ny)?;
    cutoff_modes(&mesh, width, height, mode, n_modes)
}

impl WaveguideReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} modes, {} x {} guide, {} elements, {} dofs",
            self.mode.to_string().to_uppercase(),
            self.width,
            self.height,
            self.elements,
            self.dofs
        );
        let _ = writeln!(out, "{:>5} {:>20} {:>20} {:>12} {:>7}", "index", "computed k_c", "analytic k_c", "rel error", "(m,n)");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>5} {:>20.14} {:>20.14} {:>12.4e} {:>7}",
                r.index,
                r.computed,
                r.analytic,
                r.rel_error,
                format!("({},{})", r.m, r.n)
            );
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub level: usize,
    pub n: usize,
    pub h: f64,
    pub computed: f64,
    pub analytic: f64,
    /// Relative error of the eigenvalue `k_c²`.
    pub error: f64,
    /// `log2(e_{k-1} / e_k)`; absent on the coarsest level.
    pub observed_order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub mode: ModeType,
    pub rows: Vec<ConvergenceRow>,
}

/// Lowest mode of the unit-square guide on `base_n · 2^k` meshes,
/// `k = 0..levels`.
pub fn convergence_study(mode: ModeType, levels: usize, base_n: usize) -> Result<ConvergenceReport> {
    if levels < 2 {
        return Err(Error::InvalidDimensions(format!("need at least 2 levels, got {levels}")));
    }
    if base_n == 0 {
        return Err(Error::InvalidDimensions("base mesh size must be at least 1".into()));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(levels);
    for level in 0..levels {
        let n = base_n << level;
        let report = rect_cutoff_modes(1.0, 1.0, n, n, mode, 1)?;
        let row = &report.rows[0];
        let exact = row.analytic * row.analytic;
        let error = (row.eigenvalue - exact).abs() / exact;
        let observed_order = rows.last().map(|prev| (prev.error / error).log2());
        rows.push(ConvergenceRow {
            level,
            n,
            h: 1.0 / n as f64,
            computed: row.computed,
            analytic: row.analytic,
            error,
            observed_order,
        });
    }
    Ok(ConvergenceReport { mode, rows })
}

impl ConvergenceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} lowest mode, unit square", self.mode.to_string().to_uppercase());
        let _ = writeln!(out, "{:>5} {:>5} {:>10} {:>20} {:>12} {:>8}", "level", "n", "h", "computed k_c", "error", "order");
        for r in &self.rows {
            let order = r.observed_order.map_or_else(|| "-".to_string(), |p| format!("{p:.4}"));
            let _ = writeln!(
                out,
                "{:>5} {:>5} {:>10.6} {:>20.14} {:>12.4e} {:>8}",
                r.level, r.n, r.h, r.computed, r.error, order
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_ordering() {
        let te = analytic_cutoffs(2.0, 1.0, ModeType::Te, 5);
        let sq: Vec<f64> = te.iter().map(|r| (r.0 / PI).powi(2)).collect();
        for (got, want) in sq.iter().zip([0.25, 1.0, 1.0, 1.25, 2.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let tm = analytic_cutoffs(2.0, 1.0, ModeType::Tm, 5);
        let sq: Vec<f64> = tm.iter().map(|r| (r.0 / PI).powi(2)).collect();
        for (got, want) in sq.iter().zip([1.25, 2.0, 3.25, 4.25, 5.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!((analytic_cutoffs(1.0, 1.0, ModeType::Tm, 1)[0].0 - 4.442882938158366).abs() < 1e-12);
    }

    #[test]
    fn unit_square_tm() {
        let r = rect_cutoff_modes(1.0, 1.0, 8, 8, ModeType::Tm, 3).unwrap();
        let lambda = r.rows[0].eigenvalue;
        assert!((lambda - 2.0 * PI * PI).abs() / (2.0 * PI * PI) < 1e-3);
        // (1,2) and (2,1) coincide up to the discretization error
        let (k12, k21) = (r.rows[1].computed, r.rows[2].computed);
        let err = r.rows[1].rel_error.max(r.rows[2].rel_error);
        assert!((k12 - k21).abs() / k12 <= 2.0 * err);
    }

    #[test]
    fn te_first_mode() {
        let r = rect_cutoff_modes(2.0, 1.0, 8, 4, ModeType::Te, 1).unwrap();
        assert!(r.rows[0].rel_error < 1e-3, "{}", r.to_text());
    }

    #[test]
    fn budget_is_enforced() {
        let err = rect_cutoff_modes(1.0, 1.0, 20, 20, ModeType::Te, 1).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn mode_type_parsing() {
        assert_eq!("TE".parse::<ModeType>().unwrap(), ModeType::Te);
        assert!("tx".parse::<ModeType>().is_err());
    }
}
