//! The four-layer benchmark: characteristic values from the determinant
//! search against the closed-form two-term frequencies, over a ladder of
//! contrasts, with the published reference data embedded as golden values.
//!
//! Geometry is the ball (4, 3, 2, 1) with unit resonator material against
//! rho = kappa = 1/delta.  "Total relative error" is the sum over both roots
//! of |omega_e - omega_c| / |omega_c|, quoted as a percentage.

use anyhow::{bail, Result};
use num_complex::Complex64;

use resonator::asymptotics::omega_dual4;
use resonator::medium::{make_medium, LayeredGeometry};
use resonator::rootfind::{find_subwavelength_roots, SearchConfig};

use crate::emit::{fmt_f64, Cell, DataTable};

/// Per-component agreement with the golden complex frequencies (the
/// references carry 7 decimals).
pub const COMPONENT_TOL: f64 = 1e-7;
/// Absolute agreement on the error-percentage column.
pub const PERCENT_TOL: f64 = 2e-4;

/// One golden row: contrast as 1/delta, the two characteristic roots, the two
/// closed-form frequencies, and the total relative error in percent.
pub struct GoldenRow {
    pub delta_inv: f64,
    pub characteristic: [(f64, f64); 2],
    pub asymptotic: [(f64, f64); 2],
    pub percent: f64,
}

pub const GOLDEN: [GoldenRow; 4] = [
    GoldenRow {
        delta_inv: 100.0,
        characteristic: [(0.0513551, -0.0052161), (0.1754137, -0.0012548)],
        asymptotic: [(0.0517470, -0.0052491), (0.1764784, -0.0012374)],
        percent: 1.3691,
    },
    GoldenRow {
        delta_inv: 1000.0,
        characteristic: [(0.0163513, -0.0005246), (0.0557735, -0.0001239)],
        asymptotic: [(0.0163638, -0.0005249), (0.0558074, -0.0001237)],
        percent: 0.1371,
    },
    GoldenRow {
        delta_inv: 6000.0,
        characteristic: [(0.0066797, -0.0000875), (0.0227810, -0.0000206)],
        asymptotic: [(0.0066805, -0.0000875), (0.0227833, -0.0000206)],
        percent: 0.0229,
    },
    GoldenRow {
        delta_inv: 10000.0,
        characteristic: [(0.0051743, -0.0000525), (0.0176468, -0.0000124)],
        asymptotic: [(0.0051747, -0.0000525), (0.0176478, -0.0000124)],
        percent: 0.0137,
    },
];

/// One computed row.
#[derive(Debug, Clone, Copy)]
pub struct Row {
    pub delta: f64,
    pub characteristic: [Complex64; 2],
    pub asymptotic: [Complex64; 2],
    pub percent: f64,
}

/// Computed rows plus any cells that disagree with the golden data.
pub struct Report {
    pub rows: Vec<Row>,
    pub mismatches: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn check_component(
    mismatches: &mut Vec<String>,
    delta_inv: f64,
    cell: &str,
    got: f64,
    want: f64,
) {
    if (got - want).abs() > COMPONENT_TOL {
        mismatches.push(format!(
            "1/delta={delta_inv} {cell}: got {}, want {} (|diff| {})",
            fmt_f64(got),
            fmt_f64(want),
            fmt_f64((got - want).abs())
        ));
    }
}

/// Runs the benchmark for all four contrasts.
pub fn run() -> Result<Report> {
    let geom = LayeredGeometry::from_radii(vec![4.0, 3.0, 2.0, 1.0])?;
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();

    for golden in &GOLDEN {
        let delta = 1.0 / golden.delta_inv;
        let medium = make_medium(1.0, 1.0, golden.delta_inv, golden.delta_inv)?;
        let cfg = SearchConfig::for_problem(&geom, &medium);
        let roots = find_subwavelength_roots(&geom, &medium, 0, &cfg)?;
        if roots.len() != 2 {
            bail!(
                "expected 2 subwavelength roots at 1/delta = {}, found {}",
                golden.delta_inv,
                roots.len()
            );
        }
        let characteristic = [roots[0].omega, roots[1].omega];
        let (low, high) = omega_dual4(4.0, 3.0, 2.0, 1.0, medium.v_r, medium.tau, delta)?;
        let asymptotic = [low.omega, high.omega];
        let percent: f64 = characteristic
            .iter()
            .zip(&asymptotic)
            .map(|(c, e)| (e - c).norm() / c.norm())
            .sum::<f64>()
            * 100.0;
        rows.push(Row {
            delta,
            characteristic,
            asymptotic,
            percent,
        });

        for k in 0..2 {
            let (c, e) = (characteristic[k], asymptotic[k]);
            let idx = k + 1;
            check_component(
                &mut mismatches, golden.delta_inv,
                &format!("re omega_{idx}^c"), c.re, golden.characteristic[k].0,
            );
            check_component(
                &mut mismatches, golden.delta_inv,
                &format!("im omega_{idx}^c"), c.im, golden.characteristic[k].1,
            );
            check_component(
                &mut mismatches, golden.delta_inv,
                &format!("re omega_{idx}^e"), e.re, golden.asymptotic[k].0,
            );
            check_component(
                &mut mismatches, golden.delta_inv,
                &format!("im omega_{idx}^e"), e.im, golden.asymptotic[k].1,
            );
        }
        let percent_defect = (percent - golden.percent).abs();
        if percent_defect > PERCENT_TOL {
            mismatches.push(format!(
                "1/delta={} total relative error: got {}%, want {}% (|diff| {})",
                golden.delta_inv,
                fmt_f64(percent),
                fmt_f64(golden.percent),
                fmt_f64(percent_defect)
            ));
        }
    }

    Ok(Report { rows, mismatches })
}

/// Tabular form of the computed rows.
pub fn as_table(report: &Report) -> DataTable {
    let mut table = DataTable::new(vec![
        "delta",
        "re_omega1_c",
        "im_omega1_c",
        "re_omega2_c",
        "im_omega2_c",
        "re_omega1_e",
        "im_omega1_e",
        "re_omega2_e",
        "im_omega2_e",
        "total_rel_err_pct",
    ]);
    for row in &report.rows {
        table.push(vec![
            Cell::from(row.delta),
            Cell::from(row.characteristic[0].re),
            Cell::from(row.characteristic[0].im),
            Cell::from(row.characteristic[1].re),
            Cell::from(row.characteristic[1].im),
            Cell::from(row.asymptotic[0].re),
            Cell::from(row.asymptotic[0].im),
            Cell::from(row.asymptotic[1].re),
            Cell::from(row.asymptotic[1].im),
            Cell::from(row.percent),
        ]);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_percentages_follow_from_the_golden_entries() {
        // The percentage column must be consistent with the complex entries
        // under the adopted sum-of-relative-errors definition.  The golden
        // frequencies are rounded to 7 decimals while the percentages come
        // from full precision, so each |e - c| recomputed here can be off by
        // up to sqrt(2) * 1e-7; allow exactly that quantization budget.
        for golden in &GOLDEN {
            let mut recomputed = 0.0;
            let mut budget = 0.0;
            for (c, e) in golden.characteristic.iter().zip(&golden.asymptotic) {
                let c = Complex64::new(c.0, c.1);
                let e = Complex64::new(e.0, e.1);
                recomputed += (e - c).norm() / c.norm() * 100.0;
                budget += std::f64::consts::SQRT_2 * 1e-7 / c.norm() * 100.0;
            }
            assert!(
                (recomputed - golden.percent).abs() <= budget + 5e-5,
                "1/delta={}: recomputed {recomputed} vs {} (budget {budget:.2e})",
                golden.delta_inv,
                golden.percent
            );
        }
    }

    #[test]
    fn table_layout_matches_the_report() {
        let report = Report {
            rows: vec![Row {
                delta: 0.01,
                characteristic: [Complex64::new(0.05, -0.005), Complex64::new(0.17, -0.001)],
                asymptotic: [Complex64::new(0.051, -0.005), Complex64::new(0.176, -0.001)],
                percent: 1.36,
            }],
            mismatches: vec![],
        };
        let table = as_table(&report);
        assert_eq!(table.columns.len(), 10);
        let csv = table.to_csv();
        assert!(csv.starts_with("delta,"));
        assert!(csv.contains("0.01,0.05,-0.005"));
    }
}
