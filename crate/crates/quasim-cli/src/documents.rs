//! Report documents shared by the command line and the job service: the
//! same builders produce both the files on disk and the HTTP result bodies,
//! so the two transports cannot drift apart.
//!
//! Reported floating-point values are rounded to 9 significant digits for
//! stable diffs; model and dataset files keep full precision and are not
//! routed through here.

use std::collections::BTreeMap;

use fem_oracle::{frf, modal_analysis, FemMatrices, FrfPoint, ModalResult};
use heat_oracle::{MeshGraph, NodeFrame};
use qgnn::QgnnModel;
use qpe_eigen::{qpe_modal, QpeConfig};
use serde::{Deserialize, Serialize};

use crate::error::{runtime_err, CliError, Result};

pub const REPORT_FORMAT_VERSION: u32 = 1;

/// Relative eigenvalue threshold for flagging rigid-body modes in reports.
pub const RIGID_TOL: f64 = 1e-9;

/// Rounds to 9 significant digits, the precision of every reported float.
pub fn sig9(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    fmt9(x).parse().expect("formatted float parses back")
}

/// The 9-significant-digit rendering used in CSV output.
pub fn fmt9(x: f64) -> String {
    format!("{x:.8e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeRow {
    pub index: usize,
    pub omega: f64,
    pub omega_squared: f64,
    pub rigid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModalDocument {
    pub format_version: u32,
    pub kind: String,
    pub n_dof: usize,
    pub modes: Vec<ModeRow>,
    /// One row per mode, `n_dof` entries each; present only on request.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mode_shapes: Option<Vec<Vec<f64>>>,
}

/// Classical modal solve rendered as a report table.
pub fn modal_document(fem: &FemMatrices, include_mode_shapes: bool) -> Result<ModalDocument> {
    let modal = modal_analysis(fem, RIGID_TOL).map_err(runtime_err)?;
    Ok(ModalDocument {
        format_version: REPORT_FORMAT_VERSION,
        kind: "modal".to_string(),
        n_dof: modal.n_dof(),
        modes: mode_rows(&modal),
        mode_shapes: include_mode_shapes.then(|| {
            (0..modal.n_modes())
                .map(|i| modal.mode_shapes().column(i).iter().map(|&x| sig9(x)).collect())
                .collect()
        }),
    })
}

fn mode_rows(modal: &ModalResult) -> Vec<ModeRow> {
    modal
        .omegas()
        .iter()
        .zip(modal.omega_squared())
        .zip(modal.rigid())
        .enumerate()
        .map(|(index, ((&omega, &omega_squared), &rigid))| ModeRow {
            index,
            omega: sig9(omega),
            omega_squared: sig9(omega_squared),
            rigid,
        })
        .collect()
}

pub fn modal_csv(doc: &ModalDocument) -> String {
    let mut out = String::from("index,omega,omega_squared,rigid\n");
    for row in &doc.modes {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.index,
            fmt9(row.omega),
            fmt9(row.omega_squared),
            row.rigid
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub phase: f64,
    pub lambda: f64,
    pub omega: f64,
    pub weight: f64,
    pub nearest_classical_omega: f64,
    pub grid_resolution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QpeDocument {
    pub format_version: u32,
    pub kind: String,
    pub n_ancilla: usize,
    pub evolution_time: f64,
    pub shots: u64,
    pub seed: u64,
    pub classical_omegas: Vec<f64>,
    /// Sampled ancilla bitstrings (most significant phase bit first).
    pub histogram: BTreeMap<String, u64>,
    /// Weight-descending, with bins below the requested minimum weight
    /// dropped.
    pub estimates: Vec<EstimateRow>,
}

/// Phase-estimation run against the classical oracle, rendered as a report.
pub fn qpe_document(fem: &FemMatrices, cfg: &QpeConfig, min_weight: f64) -> Result<QpeDocument> {
    let report = qpe_modal(fem, cfg).map_err(runtime_err)?;
    Ok(QpeDocument {
        format_version: REPORT_FORMAT_VERSION,
        kind: "qpe".to_string(),
        n_ancilla: report.n_ancilla,
        evolution_time: sig9(report.evolution_time),
        shots: report.shots,
        seed: report.seed,
        classical_omegas: report.classical_omegas.iter().map(|&w| sig9(w)).collect(),
        histogram: report.histogram.entries,
        estimates: report
            .estimates
            .iter()
            .filter(|e| e.weight >= min_weight)
            .map(|e| EstimateRow {
                phase: sig9(e.phase),
                lambda: sig9(e.lambda),
                omega: sig9(e.omega),
                weight: sig9(e.weight),
                nearest_classical_omega: sig9(e.nearest_classical_omega),
                grid_resolution: sig9(e.grid_resolution),
            })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n_ancilla: usize,
    pub best_estimate_error: f64,
    pub grid_resolution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub format_version: u32,
    pub kind: String,
    pub rows: Vec<SweepRow>,
}

/// One phase-estimation run per ancilla count; each row reports the error
/// of the heaviest estimate and the grid resolution at that size.
pub fn sweep_document(
    fem: &FemMatrices,
    base: &QpeConfig,
    ancilla_range: std::ops::RangeInclusive<usize>,
) -> Result<SweepDocument> {
    let mut rows = Vec::new();
    for n_ancilla in ancilla_range {
        let cfg = QpeConfig { n_ancilla, ..base.clone() };
        let report = qpe_modal(fem, &cfg).map_err(runtime_err)?;
        let best = report
            .estimates
            .first()
            .ok_or_else(|| CliError::runtime(format!("no estimates at {n_ancilla} ancillas")))?;
        rows.push(SweepRow {
            n_ancilla,
            best_estimate_error: sig9((best.omega - best.nearest_classical_omega).abs()),
            grid_resolution: sig9(best.grid_resolution),
        });
    }
    Ok(SweepDocument {
        format_version: REPORT_FORMAT_VERSION,
        kind: "qpe_sweep".to_string(),
        rows,
    })
}

pub fn sweep_csv(doc: &SweepDocument) -> String {
    let mut out = String::from("n_ancilla,best_estimate_error,grid_resolution\n");
    for row in &doc.rows {
        out.push_str(&format!(
            "{},{},{}\n",
            row.n_ancilla,
            fmt9(row.best_estimate_error),
            fmt9(row.grid_resolution)
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictDocument {
    pub format_version: u32,
    pub kind: String,
    pub n_vertices: usize,
    pub steps: usize,
    /// Predicted frames in step order, one value per vertex.
    pub frames: Vec<Vec<f64>>,
}

/// Autoregressive surrogate prediction from one input frame.
pub fn predict_document(
    model: &QgnnModel,
    mesh: &MeshGraph,
    frame: &NodeFrame,
    steps: usize,
) -> Result<PredictDocument> {
    let frames = qgnn::rollout(model, mesh, frame, steps).map_err(runtime_err)?;
    Ok(PredictDocument {
        format_version: REPORT_FORMAT_VERSION,
        kind: "qgnn_predict".to_string(),
        n_vertices: mesh.n_vertices(),
        steps,
        frames: frames
            .iter()
            .map(|f| f.values().iter().map(|&v| sig9(v)).collect())
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalDocument {
    pub format_version: u32,
    pub kind: String,
    pub one_step_mse: f64,
    pub rollout_mse_per_step: Vec<f64>,
    pub permutation_check: String,
}

pub fn frf_csv(points: &[FrfPoint]) -> String {
    let mut out = String::from("omega,re,im,magnitude\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt9(p.omega),
            fmt9(p.value.re),
            fmt9(p.value.im),
            fmt9(p.value.norm())
        ));
    }
    out
}

/// Frequency response curve between two DOFs with uniform modal damping.
pub fn frf_points(
    fem: &FemMatrices,
    damping_ratio: f64,
    omega_grid: Vec<f64>,
    input_dof: usize,
    output_dof: usize,
) -> Result<Vec<FrfPoint>> {
    let modal = modal_analysis(fem, RIGID_TOL).map_err(runtime_err)?;
    let cfg = fem_oracle::FrfConfig {
        damping_ratios: vec![damping_ratio; modal.n_modes()],
        omega_grid,
        input_dof,
        output_dof,
    };
    frf(&modal, &cfg).map_err(runtime_err)
}

pub fn loss_csv(losses_by_update_count: &[f64]) -> String {
    let mut out = String::from("epoch,loss\n");
    for (epoch, loss) in losses_by_update_count.iter().enumerate() {
        out.push_str(&format!("{},{}\n", epoch, fmt9(*loss)));
    }
    out
}

/// Pretty JSON with a trailing newline, the fixed on-disk rendering.
pub fn to_json_bytes<T: Serialize>(doc: &T) -> Result<Vec<u8>> {
    let mut text = serde_json::to_string_pretty(doc)
        .map_err(|e| CliError::runtime(format!("serialization: {e}")))?;
    text.push('\n');
    Ok(text.into_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_nine_significant_digits() {
        assert_eq!(sig9(1.7320508075688772), 1.73205081);
        assert_eq!(sig9(0.0), 0.0);
        assert_eq!(sig9(-0.6666666666666666), -0.666666667);
        assert_eq!(sig9(123456789012.0), 123456789e3);
        assert_eq!(fmt9(1.0), "1.00000000e0");
    }

    #[test]
    fn csv_rows_are_deterministic() {
        let doc = SweepDocument {
            format_version: 1,
            kind: "qpe_sweep".into(),
            rows: vec![SweepRow { n_ancilla: 3, best_estimate_error: 0.5, grid_resolution: 1.0 }],
        };
        assert_eq!(
            sweep_csv(&doc),
            "n_ancilla,best_estimate_error,grid_resolution\n3,5.00000000e-1,1.00000000e0\n"
        );
    }
}
