//! The structural matrix exchange format: a versioned JSON object holding
//! row-major mass and stiffness matrices. The same schema is the payload
//! core of modal and phase-estimation service jobs.

use fem_oracle::FemMatrices;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{runtime_err, CliError, Result};

pub const MATRIX_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub format_version: u32,
    pub n_dof: usize,
    /// Row-major `n_dof * n_dof` entries.
    pub mass: Vec<f64>,
    pub stiffness: Vec<f64>,
}

impl MatrixFile {
    pub fn new(mass: &DMatrix<f64>, stiffness: &DMatrix<f64>) -> Self {
        MatrixFile {
            format_version: MATRIX_FORMAT_VERSION,
            n_dof: mass.nrows(),
            mass: row_major(mass),
            stiffness: row_major(stiffness),
        }
    }
}

fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            out.push(m[(r, c)]);
        }
    }
    out
}

/// Parses the document; malformed content is a configuration error.
pub fn parse_matrix_file(text: &str, origin: &str) -> Result<MatrixFile> {
    let file: MatrixFile = serde_json::from_str(text)
        .map_err(|e| CliError::config(format!("{origin}: {e}")))?;
    validate_matrix_file(&file, origin)?;
    Ok(file)
}

pub fn validate_matrix_file(file: &MatrixFile, origin: &str) -> Result<()> {
    if file.format_version != MATRIX_FORMAT_VERSION {
        return Err(CliError::config(format!(
            "{origin}: unsupported format_version {}",
            file.format_version
        )));
    }
    let want = file.n_dof * file.n_dof;
    if file.mass.len() != want || file.stiffness.len() != want {
        return Err(CliError::config(format!(
            "{origin}: n_dof {} needs {} entries per matrix, got mass {} and stiffness {}",
            file.n_dof,
            want,
            file.mass.len(),
            file.stiffness.len()
        )));
    }
    Ok(())
}

/// Builds the validated pencil; definiteness failures are numerical errors.
pub fn fem_from_matrix(file: &MatrixFile) -> Result<FemMatrices> {
    let mass = DMatrix::from_row_slice(file.n_dof, file.n_dof, &file.mass);
    let stiffness = DMatrix::from_row_slice(file.n_dof, file.n_dof, &file.stiffness);
    FemMatrices::new(mass, stiffness).map_err(runtime_err)
}
