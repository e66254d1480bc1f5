//! Run configuration for every command: JSON config files with strict key
//! checking, flag overrides applied on top, and the merged result echoed
//! into the output directory so a run can be reproduced from its artifacts.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use heat_oracle::{grid_index, Boundary, LaserPath};
use qpe_eigen::InputState;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CliError, Result};

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_format_csv() -> OutputFormat {
    OutputFormat::Csv
}

/// Rendering of the primary report file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutputFormat::Json => write!(f, "json"),
            OutputFormat::Csv => write!(f, "csv"),
        }
    }
}

/// Which transition pairs of a dataset an evaluation runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SplitSpec {
    #[default]
    Train,
    Val,
    All,
}

/// Initial system register for phase estimation, written as a string:
/// `"uniform"` or `"eigenvector:N"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputStateSpec {
    Uniform,
    Eigenvector(usize),
}

impl InputStateSpec {
    pub fn to_input_state(self) -> InputState {
        match self {
            InputStateSpec::Uniform => InputState::Uniform,
            InputStateSpec::Eigenvector(i) => InputState::ExactEigenvector(i),
        }
    }
}

impl fmt::Display for InputStateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputStateSpec::Uniform => write!(f, "uniform"),
            InputStateSpec::Eigenvector(i) => write!(f, "eigenvector:{i}"),
        }
    }
}

impl FromStr for InputStateSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "uniform" {
            return Ok(InputStateSpec::Uniform);
        }
        if let Some(index) = s.strip_prefix("eigenvector:") {
            let index = index
                .parse()
                .map_err(|_| format!("bad eigenvector index in input state {s:?}"))?;
            return Ok(InputStateSpec::Eigenvector(index));
        }
        Err(format!(
            "unknown input state {s:?}; expected \"uniform\" or \"eigenvector:N\""
        ))
    }
}

impl Serialize for InputStateSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for InputStateSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Fixed-free (or free-free) bar discretized into equal elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BarSpec {
    pub elements: usize,
    pub youngs_modulus: f64,
    pub area: f64,
    pub density: f64,
    pub length: f64,
    pub fixed_left: bool,
}

impl Default for BarSpec {
    fn default() -> Self {
        BarSpec {
            elements: 10,
            youngs_modulus: 1.0,
            area: 1.0,
            density: 1.0,
            length: 1.0,
            fixed_left: true,
        }
    }
}

/// Lumped-mass grid membrane with uniform edge springs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MembraneSpec {
    pub nx: usize,
    pub ny: usize,
    pub spacing: f64,
    pub mass_per_node: f64,
    pub stiffness_per_edge: f64,
    pub clamped_boundary: bool,
}

impl Default for MembraneSpec {
    fn default() -> Self {
        MembraneSpec {
            nx: 4,
            ny: 4,
            spacing: 1.0,
            mass_per_node: 1.0,
            stiffness_per_edge: 1.0,
            clamped_boundary: true,
        }
    }
}

/// Structural model source: a built-in parametric assembly or a matrix file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Bar(BarSpec),
    Membrane(MembraneSpec),
    MatrixFile { path: PathBuf },
}

/// Laser trajectory over a grid, resolved against grid dims and step count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PathSpec {
    /// Laser off for the whole run.
    Off,
    /// Laser parked on one vertex.
    Constant { vertex: usize },
    /// Serpentine raster over a sub-rectangle, `dwell` steps per cell,
    /// cycling until the run ends.
    Raster { x0: usize, y0: usize, width: usize, height: usize, dwell: usize },
    /// One entry per step, `-1` for off.
    Explicit { positions: Vec<i64> },
}

impl Default for PathSpec {
    fn default() -> Self {
        PathSpec::Constant { vertex: 0 }
    }
}

impl PathSpec {
    pub fn resolve(&self, nx: usize, ny: usize, steps: usize) -> Result<LaserPath> {
        match self {
            PathSpec::Off => Ok(LaserPath::off(steps)),
            PathSpec::Constant { vertex } => {
                if *vertex >= nx * ny {
                    return Err(CliError::config(format!(
                        "laser vertex {vertex} outside the {nx}x{ny} grid"
                    )));
                }
                Ok(LaserPath::constant(*vertex, steps))
            }
            PathSpec::Raster { x0, y0, width, height, dwell } => {
                if *width == 0 || *height == 0 || *dwell == 0 {
                    return Err(CliError::config(
                        "raster width, height, and dwell must be positive".to_string(),
                    ));
                }
                if x0 + width > nx || y0 + height > ny {
                    return Err(CliError::config(format!(
                        "raster rectangle {width}x{height} at ({x0}, {y0}) leaves the {nx}x{ny} grid"
                    )));
                }
                let mut cells = Vec::with_capacity(width * height);
                for row in 0..*height {
                    let y = y0 + row;
                    // Serpentine sweep: alternate x direction per row.
                    let xs: Vec<usize> = if row % 2 == 0 {
                        (*x0..x0 + width).collect()
                    } else {
                        (*x0..x0 + width).rev().collect()
                    };
                    for x in xs {
                        cells.push(grid_index(nx, x, y));
                    }
                }
                let positions = (0..steps)
                    .map(|step| Some(cells[(step / dwell) % cells.len()]))
                    .collect();
                Ok(LaserPath::new(positions))
            }
            PathSpec::Explicit { positions } => {
                if positions.len() != steps {
                    return Err(CliError::config(format!(
                        "explicit path has {} entries but the run takes {steps} steps",
                        positions.len()
                    )));
                }
                Ok(LaserPath::from_signed(positions))
            }
        }
    }
}

/// Strict parse of a command's config document; unknown keys are named in
/// the error.
pub fn parse_config<T: serde::de::DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| CliError::config(format!("{origin}: {e}")))
}

/// Loads the optional config file; absent means all defaults.
pub fn load_config<T: serde::de::DeserializeOwned>(path: Option<&PathBuf>) -> Result<T> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| {
                CliError::config(format!("cannot read config {}: {e}", p.display()))
            })?;
            parse_config(&text, &p.display().to_string())
        }
        None => parse_config("{}", "defaults"),
    }
}

fn require_model(model: &Option<ModelSpec>) -> Result<()> {
    if model.is_none() {
        return Err(CliError::config(
            "no model given: pass --bar, --membrane, or --matrix-file, or set the \
             \"model\" key in the config file"
                .to_string(),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModalConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub model: Option<ModelSpec>,
    #[serde(default)]
    pub include_mode_shapes: bool,
}

impl ModalConfig {
    pub fn validate(&self) -> Result<()> {
        require_model(&self.model)?;
        if self.format == OutputFormat::Csv && self.include_mode_shapes {
            return Err(CliError::config(
                "mode shapes are only written in json format".to_string(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QpeCmdConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub model: Option<ModelSpec>,
    #[serde(default = "QpeCmdConfig::default_n_ancilla")]
    pub n_ancilla: usize,
    #[serde(default = "QpeCmdConfig::default_shots")]
    pub shots: u64,
    /// Evolution time; omitted picks an alias-free time from the spectrum.
    #[serde(default)]
    pub evolution_time: Option<f64>,
    #[serde(default = "QpeCmdConfig::default_input_state")]
    pub input_state: InputStateSpec,
    /// Estimates below this weight are dropped from the report.
    #[serde(default)]
    pub min_weight: f64,
}

impl QpeCmdConfig {
    fn default_n_ancilla() -> usize {
        6
    }

    fn default_shots() -> u64 {
        4096
    }

    fn default_input_state() -> InputStateSpec {
        InputStateSpec::Uniform
    }

    pub fn validate(&self) -> Result<()> {
        require_model(&self.model)?;
        require_json(self.format)?;
        Ok(())
    }
}

fn require_json(format: OutputFormat) -> Result<()> {
    if format != OutputFormat::Json {
        return Err(CliError::config(format!(
            "format {format} is not supported here; this command writes json"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_format_csv")]
    pub format: OutputFormat,
    #[serde(default)]
    pub model: Option<ModelSpec>,
    #[serde(default = "SweepConfig::default_ancilla_min")]
    pub ancilla_min: usize,
    #[serde(default = "SweepConfig::default_ancilla_max")]
    pub ancilla_max: usize,
    #[serde(default = "QpeCmdConfig::default_shots")]
    pub shots: u64,
    #[serde(default)]
    pub evolution_time: Option<f64>,
    #[serde(default = "SweepConfig::default_input_state")]
    pub input_state: InputStateSpec,
}

impl SweepConfig {
    fn default_ancilla_min() -> usize {
        3
    }

    fn default_ancilla_max() -> usize {
        8
    }

    fn default_input_state() -> InputStateSpec {
        InputStateSpec::Eigenvector(0)
    }

    pub fn validate(&self) -> Result<()> {
        require_model(&self.model)?;
        if self.ancilla_min > self.ancilla_max {
            return Err(CliError::config(format!(
                "empty ancilla range {}..={}",
                self.ancilla_min, self.ancilla_max
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeatGenConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub nx: Option<usize>,
    #[serde(default)]
    pub ny: Option<usize>,
    #[serde(default)]
    pub steps: Option<usize>,
    #[serde(default = "HeatGenConfig::default_alpha_dt")]
    pub alpha_dt: f64,
    #[serde(default = "HeatGenConfig::default_source_power")]
    pub source_power: f64,
    #[serde(default)]
    pub initial_temperature: f64,
    #[serde(default)]
    pub val_fraction: f64,
    #[serde(default)]
    pub path: PathSpec,
    #[serde(default = "HeatGenConfig::default_boundary")]
    pub boundary: Boundary,
}

impl HeatGenConfig {
    fn default_alpha_dt() -> f64 {
        0.15
    }

    fn default_source_power() -> f64 {
        1.0
    }

    fn default_boundary() -> Boundary {
        Boundary::Insulated
    }

    pub fn validate(&self) -> Result<()> {
        require_json(self.format)?;
        let missing: Vec<&str> = [
            ("nx", self.nx.is_none()),
            ("ny", self.ny.is_none()),
            ("steps", self.steps.is_none()),
        ]
        .iter()
        .filter(|(_, absent)| *absent)
        .map(|(name, _)| *name)
        .collect();
        if !missing.is_empty() {
            return Err(CliError::config(format!("missing required keys: {}", missing.join(", "))));
        }
        if self.steps == Some(0) {
            return Err(CliError::config("steps must be at least 1".to_string()));
        }
        if !(0.0..1.0).contains(&self.val_fraction) {
            return Err(CliError::config(format!(
                "val_fraction {} outside [0, 1)",
                self.val_fraction
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QgnnTrainConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub dataset: Option<PathBuf>,
    #[serde(default = "QgnnTrainConfig::default_epochs")]
    pub epochs: usize,
    #[serde(default = "QgnnTrainConfig::default_learning_rate")]
    pub learning_rate: f64,
    /// Heavy-ball coefficient; omitted means plain gradient descent.
    #[serde(default)]
    pub momentum: Option<f64>,
    /// Degrees to build submodels for; omitted derives them from the
    /// dataset's graph.
    #[serde(default)]
    pub degrees: Option<Vec<usize>>,
}

impl QgnnTrainConfig {
    fn default_epochs() -> usize {
        150
    }

    fn default_learning_rate() -> f64 {
        0.02
    }

    pub fn validate(&self) -> Result<()> {
        require_json(self.format)?;
        if self.dataset.is_none() {
            return Err(CliError::config("missing required key: dataset".to_string()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QgnnEvalConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub model: Option<PathBuf>,
    #[serde(default)]
    pub dataset: Option<PathBuf>,
    #[serde(default)]
    pub split: SplitSpec,
    #[serde(default = "QgnnEvalConfig::default_rollout_steps")]
    pub rollout_steps: usize,
    #[serde(default = "QgnnEvalConfig::default_permutation_trials")]
    pub permutation_trials: usize,
}

impl QgnnEvalConfig {
    fn default_rollout_steps() -> usize {
        5
    }

    fn default_permutation_trials() -> usize {
        50
    }

    pub fn validate(&self) -> Result<()> {
        require_json(self.format)?;
        let missing: Vec<&str> = [
            ("model", self.model.is_none()),
            ("dataset", self.dataset.is_none()),
        ]
        .iter()
        .filter(|(_, absent)| *absent)
        .map(|(name, _)| *name)
        .collect();
        if !missing.is_empty() {
            return Err(CliError::config(format!("missing required keys: {}", missing.join(", "))));
        }
        if self.rollout_steps == 0 {
            return Err(CliError::config("rollout_steps must be at least 1".to_string()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QgnnPredictConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub model: Option<PathBuf>,
    #[serde(default)]
    pub nx: Option<usize>,
    #[serde(default)]
    pub ny: Option<usize>,
    /// Input temperatures, row-major over the grid.
    #[serde(default)]
    pub frame: Option<Vec<f64>>,
    #[serde(default = "QgnnPredictConfig::default_steps")]
    pub steps: usize,
}

impl QgnnPredictConfig {
    fn default_steps() -> usize {
        1
    }

    pub fn validate(&self) -> Result<()> {
        require_json(self.format)?;
        let missing: Vec<&str> = [
            ("model", self.model.is_none()),
            ("nx", self.nx.is_none()),
            ("ny", self.ny.is_none()),
            ("frame", self.frame.is_none()),
        ]
        .iter()
        .filter(|(_, absent)| *absent)
        .map(|(name, _)| *name)
        .collect();
        if !missing.is_empty() {
            return Err(CliError::config(format!("missing required keys: {}", missing.join(", "))));
        }
        if self.steps == 0 {
            return Err(CliError::config("steps must be at least 1".to_string()));
        }
        let (nx, ny) = (self.nx.unwrap(), self.ny.unwrap());
        let frame = self.frame.as_ref().unwrap();
        if frame.len() != nx * ny {
            return Err(CliError::config(format!(
                "frame has {} values but the {nx}x{ny} grid has {} vertices",
                frame.len(),
                nx * ny
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrfCmdConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_format_csv")]
    pub format: OutputFormat,
    #[serde(default)]
    pub model: Option<ModelSpec>,
    #[serde(default = "FrfCmdConfig::default_damping_ratio")]
    pub damping_ratio: f64,
    #[serde(default)]
    pub omega_min: f64,
    #[serde(default)]
    pub omega_max: Option<f64>,
    #[serde(default = "FrfCmdConfig::default_omega_points")]
    pub omega_points: usize,
    #[serde(default)]
    pub input_dof: usize,
    #[serde(default)]
    pub output_dof: usize,
}

impl FrfCmdConfig {
    fn default_damping_ratio() -> f64 {
        0.01
    }

    fn default_omega_points() -> usize {
        200
    }

    pub fn validate(&self) -> Result<()> {
        require_model(&self.model)?;
        if self.format != OutputFormat::Csv {
            return Err(CliError::config(
                "format json is not supported here; frequency response is csv only".to_string(),
            ));
        }
        if !(0.0..1.0).contains(&self.damping_ratio) {
            return Err(CliError::config(format!(
                "damping_ratio {} outside [0, 1)",
                self.damping_ratio
            )));
        }
        if self.omega_points == 0 {
            return Err(CliError::config("omega_points must be at least 1".to_string()));
        }
        let omega_max = self
            .omega_max
            .ok_or_else(|| CliError::config("missing required keys: omega_max".to_string()))?;
        if !(omega_max >= self.omega_min) {
            return Err(CliError::config(format!(
                "omega range [{}, {omega_max}] is empty",
                self.omega_min
            )));
        }
        Ok(())
    }

    /// Inclusive uniform grid; a single point sits at `omega_min`.
    pub fn omega_grid(&self) -> Vec<f64> {
        let omega_max = self.omega_max.expect("validated");
        if self.omega_points == 1 {
            return vec![self.omega_min];
        }
        let step = (omega_max - self.omega_min) / (self.omega_points - 1) as f64;
        (0..self.omega_points).map(|i| self.omega_min + step * i as f64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_top_level_key_is_named() {
        let err = parse_config::<ModalConfig>(r#"{"sede": 3}"#, "cfg").unwrap_err();
        match err {
            CliError::Config(msg) => assert!(msg.contains("sede"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_nested_model_key_is_named() {
        let text = r#"{"model": {"bar": {"element": 10}}}"#;
        let err = parse_config::<ModalConfig>(text, "cfg").unwrap_err();
        match err {
            CliError::Config(msg) => assert!(msg.contains("element"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn defaults_fill_an_empty_config() {
        let cfg: QpeCmdConfig = parse_config("{}", "cfg").unwrap();
        assert_eq!(cfg.n_ancilla, 6);
        assert_eq!(cfg.shots, 4096);
        assert_eq!(cfg.input_state, InputStateSpec::Uniform);
        assert_eq!(cfg.output_dir, PathBuf::from("out"));
        assert!(cfg.validate().is_err(), "model is required");
    }

    #[test]
    fn input_state_round_trips_as_a_string() {
        let spec: InputStateSpec = serde_json::from_str(r#""eigenvector:2""#).unwrap();
        assert_eq!(spec, InputStateSpec::Eigenvector(2));
        assert_eq!(serde_json::to_string(&spec).unwrap(), r#""eigenvector:2""#);
        assert!(serde_json::from_str::<InputStateSpec>(r#""ground""#).is_err());
    }

    #[test]
    fn empty_ancilla_range_is_rejected() {
        let cfg = SweepConfig {
            model: Some(ModelSpec::Bar(BarSpec::default())),
            ancilla_min: 5,
            ancilla_max: 4,
            ..parse_config("{}", "cfg").unwrap()
        };
        assert_eq!(cfg.validate().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn raster_path_serpentines_and_cycles() {
        let spec = PathSpec::Raster { x0: 1, y0: 0, width: 2, height: 2, dwell: 1 };
        let path = spec.resolve(3, 2, 6).unwrap();
        // Cells: (1,0) (2,0) then reversed row (2,1) (1,1); cycle restarts.
        assert_eq!(path.to_signed(), vec![1, 2, 5, 4, 1, 2]);
    }

    #[test]
    fn explicit_path_must_cover_every_step() {
        let spec = PathSpec::Explicit { positions: vec![0, -1] };
        assert!(spec.resolve(2, 2, 3).is_err());
        let path = spec.resolve(2, 2, 2).unwrap();
        assert_eq!(path.position_at(1), None);
    }

    #[test]
    fn frf_grid_is_inclusive_on_both_ends() {
        let cfg = FrfCmdConfig {
            model: Some(ModelSpec::Bar(BarSpec::default())),
            omega_max: Some(2.0),
            omega_points: 5,
            ..parse_config("{}", "cfg").unwrap()
        };
        cfg.validate().unwrap();
        let grid = cfg.omega_grid();
        assert_eq!(grid, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn boundary_key_uses_the_dataset_schema() {
        let text = r#"{"nx": 4, "ny": 4, "steps": 2,
            "boundary": {"kind": "fixed", "value": 0.5, "vertices": [0, 3]}}"#;
        let cfg: HeatGenConfig = parse_config(text, "cfg").unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.boundary, Boundary::Fixed { value: 0.5, vertices: vec![0, 3] });
    }
}
