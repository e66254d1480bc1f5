//! Argument definitions and the flag-over-file merge that produces each
//! command's resolved config.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands;
use crate::config::{
    load_config, BarSpec, FrfCmdConfig, HeatGenConfig, InputStateSpec, MembraneSpec, ModalConfig,
    ModelSpec, OutputFormat, PathSpec, QgnnEvalConfig, QgnnPredictConfig, QgnnTrainConfig,
    QpeCmdConfig, SplitSpec, SweepConfig,
};
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "quasim",
    version,
    about = "Structural eigenfrequency and heat-surrogate experiment runner"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical modal analysis of a structural model.
    Modal(ModalArgs),
    /// Phase-estimation run compared against the classical eigensolve.
    Qpe(QpeArgs),
    /// Phase-estimation accuracy sweep over a range of ancilla counts.
    QpeSweep(SweepArgs),
    /// Generate a heat-diffusion transition dataset on a grid.
    HeatGen(HeatGenArgs),
    /// Train the circuit surrogate on a heat dataset.
    QgnnTrain(TrainArgs),
    /// Evaluate a trained surrogate against a dataset.
    QgnnEval(EvalArgs),
    /// Roll a trained surrogate forward from one input frame.
    QgnnPredict(PredictArgs),
    /// Frequency-response curve between two degrees of freedom.
    Frf(FrfArgs),
}

/// Runs one parsed command to completion.
pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Modal(args) => commands::run_modal(&args.resolve()?),
        Command::Qpe(args) => commands::run_qpe(&args.resolve()?),
        Command::QpeSweep(args) => commands::run_sweep(&args.resolve()?),
        Command::HeatGen(args) => commands::run_heat_gen(&args.resolve()?),
        Command::QgnnTrain(args) => commands::run_qgnn_train(&args.resolve()?),
        Command::QgnnEval(args) => commands::run_qgnn_eval(&args.resolve()?),
        Command::QgnnPredict(args) => commands::run_qgnn_predict(&args.resolve()?),
        Command::Frf(args) => commands::run_frf(&args.resolve()?),
    }
}

#[derive(Debug, Args)]
struct CommonFlags {
    /// JSON config file; any flag below overrides its matching key.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_name = "DIR")]
    output_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

impl CommonFlags {
    fn apply(&self, seed: &mut u64, output_dir: &mut PathBuf, format: &mut OutputFormat) {
        if let Some(s) = self.seed {
            *seed = s;
        }
        if let Some(dir) = &self.output_dir {
            *output_dir = dir.clone();
        }
        if let Some(f) = self.format {
            *format = f;
        }
    }
}

/// Model selection flags shared by the structural commands. Picking a model
/// kind replaces any differently-kinded model from the config file; field
/// flags then refine the active kind.
#[derive(Debug, Args)]
struct ModelFlags {
    /// Use the built-in bar model.
    #[arg(long)]
    bar: bool,
    /// Use the built-in membrane model.
    #[arg(long)]
    membrane: bool,
    /// Read mass and stiffness from a matrix file.
    #[arg(long, value_name = "PATH")]
    matrix_file: Option<PathBuf>,

    /// Bar: number of elements.
    #[arg(long)]
    elements: Option<usize>,
    /// Bar: Young's modulus.
    #[arg(long)]
    youngs_modulus: Option<f64>,
    /// Bar: cross-section area.
    #[arg(long)]
    area: Option<f64>,
    /// Bar: mass density.
    #[arg(long)]
    density: Option<f64>,
    /// Bar: total length.
    #[arg(long)]
    length: Option<f64>,
    /// Bar: clamp the left end.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    fixed_left: Option<bool>,

    /// Membrane: grid width.
    #[arg(long)]
    nx: Option<usize>,
    /// Membrane: grid height.
    #[arg(long)]
    ny: Option<usize>,
    /// Membrane: node spacing.
    #[arg(long)]
    spacing: Option<f64>,
    /// Membrane: lumped mass per node.
    #[arg(long)]
    mass_per_node: Option<f64>,
    /// Membrane: spring stiffness per edge.
    #[arg(long)]
    stiffness_per_edge: Option<f64>,
    /// Membrane: pin the boundary nodes.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    clamped_boundary: Option<bool>,
}

impl ModelFlags {
    fn bar_field_flags(&self) -> Vec<&'static str> {
        let mut present = Vec::new();
        if self.elements.is_some() {
            present.push("--elements");
        }
        if self.youngs_modulus.is_some() {
            present.push("--youngs-modulus");
        }
        if self.area.is_some() {
            present.push("--area");
        }
        if self.density.is_some() {
            present.push("--density");
        }
        if self.length.is_some() {
            present.push("--length");
        }
        if self.fixed_left.is_some() {
            present.push("--fixed-left");
        }
        present
    }

    fn membrane_field_flags(&self) -> Vec<&'static str> {
        let mut present = Vec::new();
        if self.nx.is_some() {
            present.push("--nx");
        }
        if self.ny.is_some() {
            present.push("--ny");
        }
        if self.spacing.is_some() {
            present.push("--spacing");
        }
        if self.mass_per_node.is_some() {
            present.push("--mass-per-node");
        }
        if self.stiffness_per_edge.is_some() {
            present.push("--stiffness-per-edge");
        }
        if self.clamped_boundary.is_some() {
            present.push("--clamped-boundary");
        }
        present
    }

    fn apply_bar(&self, b: &mut BarSpec) {
        if let Some(v) = self.elements {
            b.elements = v;
        }
        if let Some(v) = self.youngs_modulus {
            b.youngs_modulus = v;
        }
        if let Some(v) = self.area {
            b.area = v;
        }
        if let Some(v) = self.density {
            b.density = v;
        }
        if let Some(v) = self.length {
            b.length = v;
        }
        if let Some(v) = self.fixed_left {
            b.fixed_left = v;
        }
    }

    fn apply_membrane(&self, m: &mut MembraneSpec) {
        if let Some(v) = self.nx {
            m.nx = v;
        }
        if let Some(v) = self.ny {
            m.ny = v;
        }
        if let Some(v) = self.spacing {
            m.spacing = v;
        }
        if let Some(v) = self.mass_per_node {
            m.mass_per_node = v;
        }
        if let Some(v) = self.stiffness_per_edge {
            m.stiffness_per_edge = v;
        }
        if let Some(v) = self.clamped_boundary {
            m.clamped_boundary = v;
        }
    }

    fn reject(fields: Vec<&'static str>, active: &str) -> Result<()> {
        if let Some(first) = fields.first() {
            return Err(CliError::config(format!(
                "{first} does not apply to the {active} model"
            )));
        }
        Ok(())
    }

    /// Merges the selection flags over the config file's model.
    fn resolve(&self, from_file: Option<ModelSpec>) -> Result<Option<ModelSpec>> {
        let selectors =
            usize::from(self.bar) + usize::from(self.membrane) + usize::from(self.matrix_file.is_some());
        if selectors > 1 {
            return Err(CliError::config(
                "choose one of --bar, --membrane, --matrix-file".to_string(),
            ));
        }
        if self.bar {
            Self::reject(self.membrane_field_flags(), "bar")?;
            let mut b = match from_file {
                Some(ModelSpec::Bar(b)) => b,
                _ => BarSpec::default(),
            };
            self.apply_bar(&mut b);
            return Ok(Some(ModelSpec::Bar(b)));
        }
        if self.membrane {
            Self::reject(self.bar_field_flags(), "membrane")?;
            let mut m = match from_file {
                Some(ModelSpec::Membrane(m)) => m,
                _ => MembraneSpec::default(),
            };
            self.apply_membrane(&mut m);
            return Ok(Some(ModelSpec::Membrane(m)));
        }
        if let Some(path) = &self.matrix_file {
            Self::reject(self.bar_field_flags(), "matrix-file")?;
            Self::reject(self.membrane_field_flags(), "matrix-file")?;
            return Ok(Some(ModelSpec::MatrixFile { path: path.clone() }));
        }
        match from_file {
            Some(ModelSpec::Bar(mut b)) => {
                Self::reject(self.membrane_field_flags(), "bar")?;
                self.apply_bar(&mut b);
                Ok(Some(ModelSpec::Bar(b)))
            }
            Some(ModelSpec::Membrane(mut m)) => {
                Self::reject(self.bar_field_flags(), "membrane")?;
                self.apply_membrane(&mut m);
                Ok(Some(ModelSpec::Membrane(m)))
            }
            Some(spec @ ModelSpec::MatrixFile { .. }) => {
                Self::reject(self.bar_field_flags(), "matrix-file")?;
                Self::reject(self.membrane_field_flags(), "matrix-file")?;
                Ok(Some(spec))
            }
            None => {
                let mut stray = self.bar_field_flags();
                stray.extend(self.membrane_field_flags());
                if let Some(first) = stray.first() {
                    return Err(CliError::config(format!(
                        "{first} needs a model kind; pass --bar, --membrane, or --matrix-file"
                    )));
                }
                Ok(None)
            }
        }
    }
}

#[derive(Debug, Args)]
pub struct ModalArgs {
    #[command(flatten)]
    common: CommonFlags,
    #[command(flatten)]
    model: ModelFlags,
    /// Include mode-shape columns in the json report.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    include_mode_shapes: Option<bool>,
}

impl ModalArgs {
    pub fn resolve(&self) -> Result<ModalConfig> {
        let mut cfg: ModalConfig = load_config(self.common.config.as_ref())?;
        self.common.apply(&mut cfg.seed, &mut cfg.output_dir, &mut cfg.format);
        cfg.model = self.model.resolve(cfg.model.take())?;
        if let Some(v) = self.include_mode_shapes {
            cfg.include_mode_shapes = v;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct QpeArgs {
    #[command(flatten)]
    common: CommonFlags,
    #[command(flatten)]
    model: ModelFlags,
    /// Number of phase-readout ancilla qubits.
    #[arg(long)]
    n_ancilla: Option<usize>,
    #[arg(long)]
    shots: Option<u64>,
    /// Pin the evolution time instead of deriving it from the spectrum.
    #[arg(long)]
    evolution_time: Option<f64>,
    /// System register preparation: "uniform" or "eigenvector:N".
    #[arg(long)]
    input_state: Option<InputStateSpec>,
    /// Drop estimates below this histogram weight.
    #[arg(long)]
    min_weight: Option<f64>,
}

impl QpeArgs {
    pub fn resolve(&self) -> Result<QpeCmdConfig> {
        let mut cfg: QpeCmdConfig = load_config(self.common.config.as_ref())?;
        self.common.apply(&mut cfg.seed, &mut cfg.output_dir, &mut cfg.format);
        cfg.model = self.model.resolve(cfg.model.take())?;
        if let Some(v) = self.n_ancilla {
            cfg.n_ancilla = v;
        }
        if let Some(v) = self.shots {
            cfg.shots = v;
        }
        if let Some(v) = self.evolution_time {
            cfg.evolution_time = Some(v);
        }
        if let Some(v) = self.input_state {
            cfg.input_state = v;
        }
        if let Some(v) = self.min_weight {
            cfg.min_weight = v;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    common: CommonFlags,
    #[command(flatten)]
    model: ModelFlags,
    /// Smallest ancilla count in the sweep.
    #[arg(long)]
    ancilla_min: Option<usize>,
    /// Largest ancilla count in the sweep (inclusive).
    #[arg(long)]
    ancilla_max: Option<usize>,
    #[arg(long)]
    shots: Option<u64>,
    /// Pin the evolution time for every sweep point.
    #[arg(long)]
    evolution_time: Option<f64>,
    /// System register preparation: "uniform" or "eigenvector:N".
    #[arg(long)]
    input_state: Option<InputStateSpec>,
}

impl SweepArgs {
    pub fn resolve(&self) -> Result<SweepConfig> {
        let mut cfg: SweepConfig = load_config(self.common.config.as_ref())?;
        self.common.apply(&mut cfg.seed, &mut cfg.output_dir, &mut cfg.format);
        cfg.model = self.model.resolve(cfg.model.take())?;
        if let Some(v) = self.ancilla_min {
            cfg.ancilla_min = v;
        }
        if let Some(v) = self.ancilla_max {
            cfg.ancilla_max = v;
        }
        if let Some(v) = self.shots {
            cfg.shots = v;
        }
        if let Some(v) = self.evolution_time {
            cfg.evolution_time = Some(v);
        }
        if let Some(v) = self.input_state {
            cfg.input_state = v;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct HeatGenArgs {
    #[command(flatten)]
    common: CommonFlags,
    /// Grid width.
    #[arg(long)]
    nx: Option<usize>,
    /// Grid height.
    #[arg(long)]
    ny: Option<usize>,
    /// Number of simulated transitions.
    #[arg(long)]
    steps: Option<usize>,
    /// Diffusion number per step; must satisfy the stability bound.
    #[arg(long)]
    alpha_dt: Option<f64>,
    /// Heat added per step at the laser vertex.
    #[arg(long)]
    source_power: Option<f64>,
    #[arg(long)]
    initial_temperature: Option<f64>,
    /// Fraction of pairs held out for validation.
    #[arg(long)]
    val_fraction: Option<f64>,
    /// Park the laser on this vertex for the whole run.
    #[arg(long, value_name = "VERTEX")]
    laser_vertex: Option<usize>,
    /// Switch the laser off for the whole run.
    #[arg(long)]
    laser_off: bool,
}

impl HeatGenArgs {
    pub fn resolve(&self) -> Result<HeatGenConfig> {
        let mut cfg: HeatGenConfig = load_config(self.common.config.as_ref())?;
        self.common.apply(&mut cfg.seed, &mut cfg.output_dir, &mut cfg.format);
        if let Some(v) = self.nx {
            cfg.nx = Some(v);
        }
        if let Some(v) = self.ny {
            cfg.ny = Some(v);
        }
        if let Some(v) = self.steps {
            cfg.steps = Some(v);
        }
        if let Some(v) = self.alpha_dt {
            cfg.alpha_dt = v;
        }
        if let Some(v) = self.source_power {
            cfg.source_power = v;
        }
        if let Some(v) = self.initial_temperature {
            cfg.initial_temperature = v;
        }
        if let Some(v) = self.val_fraction {
            cfg.val_fraction = v;
        }
        if self.laser_off && self.laser_vertex.is_some() {
            return Err(CliError::config(
                "--laser-off conflicts with --laser-vertex".to_string(),
            ));
        }
        if self.laser_off {
            cfg.path = PathSpec::Off;
        }
        if let Some(vertex) = self.laser_vertex {
            cfg.path = PathSpec::Constant { vertex };
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    common: CommonFlags,
    /// Heat dataset file to train on.
    #[arg(long, value_name = "PATH")]
    dataset: Option<PathBuf>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    /// Heavy-ball momentum coefficient; omit for plain descent.
    #[arg(long)]
    momentum: Option<f64>,
    /// Comma-separated degree list; omit to derive from the dataset graph.
    #[arg(long, value_delimiter = ',', value_name = "D,D,...")]
    degrees: Option<Vec<usize>>,
}

impl TrainArgs {
    pub fn resolve(&self) -> Result<QgnnTrainConfig> {
        let mut cfg: QgnnTrainConfig = load_config(self.common.config.as_ref())?;
        self.common.apply(&mut cfg.seed, &mut cfg.output_dir, &mut cfg.format);
        if let Some(v) = &self.dataset {
            cfg.dataset = Some(v.clone());
        }
        if let Some(v) = self.epochs {
            cfg.epochs = v;
        }
        if let Some(v) = self.learning_rate {
            cfg.learning_rate = v;
        }
        if let Some(v) = self.momentum {
            cfg.momentum = Some(v);
        }
        if let Some(v) = &self.degrees {
            cfg.degrees = Some(v.clone());
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    common: CommonFlags,
    /// Trained model file.
    #[arg(long, value_name = "PATH")]
    model: Option<PathBuf>,
    /// Heat dataset file to evaluate against.
    #[arg(long, value_name = "PATH")]
    dataset: Option<PathBuf>,
    /// Which split's pairs feed the one-step error.
    #[arg(long, value_enum)]
    split: Option<SplitSpec>,
    /// Length of the autoregressive rollout.
    #[arg(long)]
    rollout_steps: Option<usize>,
    /// Number of random relabelings in the invariance check.
    #[arg(long)]
    permutation_trials: Option<usize>,
}

impl EvalArgs {
    pub fn resolve(&self) -> Result<QgnnEvalConfig> {
        let mut cfg: QgnnEvalConfig = load_config(self.common.config.as_ref())?;
        self.common.apply(&mut cfg.seed, &mut cfg.output_dir, &mut cfg.format);
        if let Some(v) = &self.model {
            cfg.model = Some(v.clone());
        }
        if let Some(v) = &self.dataset {
            cfg.dataset = Some(v.clone());
        }
        if let Some(v) = self.split {
            cfg.split = v;
        }
        if let Some(v) = self.rollout_steps {
            cfg.rollout_steps = v;
        }
        if let Some(v) = self.permutation_trials {
            cfg.permutation_trials = v;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    common: CommonFlags,
    /// Trained model file.
    #[arg(long, value_name = "PATH")]
    model: Option<PathBuf>,
    /// Grid width.
    #[arg(long)]
    nx: Option<usize>,
    /// Grid height.
    #[arg(long)]
    ny: Option<usize>,
    /// Comma-separated input temperatures, row-major over the grid.
    #[arg(long, value_delimiter = ',', value_name = "T,T,...")]
    frame: Option<Vec<f64>>,
    /// Number of rollout steps.
    #[arg(long)]
    steps: Option<usize>,
}

impl PredictArgs {
    pub fn resolve(&self) -> Result<QgnnPredictConfig> {
        let mut cfg: QgnnPredictConfig = load_config(self.common.config.as_ref())?;
        self.common.apply(&mut cfg.seed, &mut cfg.output_dir, &mut cfg.format);
        if let Some(v) = &self.model {
            cfg.model = Some(v.clone());
        }
        if let Some(v) = self.nx {
            cfg.nx = Some(v);
        }
        if let Some(v) = self.ny {
            cfg.ny = Some(v);
        }
        if let Some(v) = &self.frame {
            cfg.frame = Some(v.clone());
        }
        if let Some(v) = self.steps {
            cfg.steps = v;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct FrfArgs {
    #[command(flatten)]
    common: CommonFlags,
    #[command(flatten)]
    model: ModelFlags,
    /// Uniform modal damping ratio.
    #[arg(long)]
    damping_ratio: Option<f64>,
    #[arg(long)]
    omega_min: Option<f64>,
    #[arg(long)]
    omega_max: Option<f64>,
    /// Number of grid points, inclusive of both ends.
    #[arg(long)]
    omega_points: Option<usize>,
    /// Excited degree of freedom.
    #[arg(long)]
    input_dof: Option<usize>,
    /// Measured degree of freedom.
    #[arg(long)]
    output_dof: Option<usize>,
}

impl FrfArgs {
    pub fn resolve(&self) -> Result<FrfCmdConfig> {
        let mut cfg: FrfCmdConfig = load_config(self.common.config.as_ref())?;
        self.common.apply(&mut cfg.seed, &mut cfg.output_dir, &mut cfg.format);
        cfg.model = self.model.resolve(cfg.model.take())?;
        if let Some(v) = self.damping_ratio {
            cfg.damping_ratio = v;
        }
        if let Some(v) = self.omega_min {
            cfg.omega_min = v;
        }
        if let Some(v) = self.omega_max {
            cfg.omega_max = Some(v);
        }
        if let Some(v) = self.omega_points {
            cfg.omega_points = v;
        }
        if let Some(v) = self.input_dof {
            cfg.input_dof = v;
        }
        if let Some(v) = self.output_dof {
            cfg.output_dof = v;
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(args).unwrap()
    }

    #[test]
    fn bar_flags_build_a_bar_model() {
        let cli = parse(&["quasim", "modal", "--bar", "--elements", "12", "--fixed-left"]);
        let Command::Modal(args) = &cli.command else { panic!("wrong command") };
        let cfg = args.resolve().unwrap();
        let Some(ModelSpec::Bar(b)) = cfg.model else { panic!("expected bar") };
        assert_eq!(b.elements, 12);
        assert!(b.fixed_left);
    }

    #[test]
    fn model_kind_conflicts_are_config_errors() {
        let cli = parse(&["quasim", "modal", "--bar", "--membrane"]);
        let Command::Modal(args) = &cli.command else { panic!("wrong command") };
        assert_eq!(args.resolve().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn field_flag_for_the_wrong_kind_is_rejected() {
        let cli = parse(&["quasim", "modal", "--bar", "--spacing", "2.0"]);
        let Command::Modal(args) = &cli.command else { panic!("wrong command") };
        let err = args.resolve().unwrap_err();
        assert!(err.to_string().contains("--spacing"), "{err}");
    }

    #[test]
    fn field_flag_without_a_kind_is_rejected() {
        let cli = parse(&["quasim", "frf", "--elements", "4", "--omega-max", "2"]);
        let Command::Frf(args) = &cli.command else { panic!("wrong command") };
        let err = args.resolve().unwrap_err();
        assert!(err.to_string().contains("--elements"), "{err}");
    }

    #[test]
    fn qpe_flags_override_defaults() {
        let cli = parse(&[
            "quasim",
            "qpe",
            "--bar",
            "--n-ancilla",
            "8",
            "--input-state",
            "eigenvector:1",
            "--seed",
            "5",
        ]);
        let Command::Qpe(args) = &cli.command else { panic!("wrong command") };
        let cfg = args.resolve().unwrap();
        assert_eq!(cfg.n_ancilla, 8);
        assert_eq!(cfg.input_state, InputStateSpec::Eigenvector(1));
        assert_eq!(cfg.seed, 5);
        assert_eq!(cfg.shots, 4096);
    }

    #[test]
    fn laser_flags_conflict() {
        let cli = parse(&[
            "quasim", "heat-gen", "--nx", "4", "--ny", "4", "--steps", "3", "--laser-off",
            "--laser-vertex", "2",
        ]);
        let Command::HeatGen(args) = &cli.command else { panic!("wrong command") };
        assert_eq!(args.resolve().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn predict_frame_parses_comma_separated_values() {
        let cli = parse(&[
            "quasim", "qgnn-predict", "--model", "m.json", "--nx", "2", "--ny", "1",
            "--frame", "0.5,1.5",
        ]);
        let Command::QgnnPredict(args) = &cli.command else { panic!("wrong command") };
        let cfg = args.resolve().unwrap();
        assert_eq!(cfg.frame, Some(vec![0.5, 1.5]));
        cfg.validate().unwrap();
    }
}
