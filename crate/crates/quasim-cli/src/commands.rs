//! Command executors: resolve the model or dataset, run the underlying
//! pipeline, and write the report plus the resolved config into the output
//! directory.

use std::path::{Path, PathBuf};

use fem_oracle::{assemble_bar, assemble_membrane, FemMatrices};
use heat_oracle::{build_grid_mesh, generate_dataset, HeatDataset, HeatScenario, MeshGraph, NodeFrame};
use qgnn::{fit_scaler, QgnnModel, TrainConfig, TrainPair};
use qpe_eigen::QpeConfig;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{
    FrfCmdConfig, HeatGenConfig, ModalConfig, ModelSpec, OutputFormat, QgnnEvalConfig,
    QgnnPredictConfig, QgnnTrainConfig, QpeCmdConfig, SplitSpec, SweepConfig,
};
use crate::documents::{
    frf_csv, frf_points, loss_csv, modal_csv, modal_document, predict_document, qpe_document,
    sig9, sweep_csv, sweep_document, to_json_bytes, EvalDocument, REPORT_FORMAT_VERSION,
};
use crate::error::{runtime_err, CliError, Result};
use crate::matrixfile::{fem_from_matrix, parse_matrix_file};

/// Builds the mass/stiffness pencil from a model spec. Parameter errors in
/// the built-in assemblies and malformed matrix files are config errors;
/// an indefinite pencil from a well-formed file is a numerical error.
pub fn build_fem(spec: &ModelSpec) -> Result<FemMatrices> {
    match spec {
        ModelSpec::Bar(b) => assemble_bar(
            b.elements,
            b.youngs_modulus,
            b.area,
            b.density,
            b.length,
            b.fixed_left,
        )
        .map_err(|e| CliError::config(format!("bar model: {e}"))),
        ModelSpec::Membrane(m) => assemble_membrane(
            m.nx,
            m.ny,
            m.spacing,
            m.mass_per_node,
            m.stiffness_per_edge,
            m.clamped_boundary,
        )
        .map_err(|e| CliError::config(format!("membrane model: {e}"))),
        ModelSpec::MatrixFile { path } => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::config(format!("cannot read matrix file {}: {e}", path.display()))
            })?;
            let file = parse_matrix_file(&text, &path.display().to_string())?;
            fem_from_matrix(&file)
        }
    }
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, bytes)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))
}

/// Echoes the fully merged config so the run can be replayed from its
/// output directory alone.
fn echo_config<T: Serialize>(dir: &Path, cfg: &T) -> Result<()> {
    write_file(dir, "resolved_config.json", &to_json_bytes(cfg)?)
}

pub fn run_modal(cfg: &ModalConfig) -> Result<()> {
    cfg.validate()?;
    let fem = build_fem(cfg.model.as_ref().expect("validated"))?;
    let doc = modal_document(&fem, cfg.include_mode_shapes)?;
    echo_config(&cfg.output_dir, cfg)?;
    match cfg.format {
        OutputFormat::Json => write_file(&cfg.output_dir, "report.json", &to_json_bytes(&doc)?),
        OutputFormat::Csv => write_file(&cfg.output_dir, "report.csv", modal_csv(&doc).as_bytes()),
    }
}

fn qpe_run_config(cfg: &QpeCmdConfig) -> QpeConfig {
    QpeConfig {
        n_ancilla: cfg.n_ancilla,
        evolution_time: cfg.evolution_time,
        shots: cfg.shots,
        seed: cfg.seed,
        input_state: cfg.input_state.to_input_state(),
    }
}

pub fn run_qpe(cfg: &QpeCmdConfig) -> Result<()> {
    cfg.validate()?;
    let fem = build_fem(cfg.model.as_ref().expect("validated"))?;
    let doc = qpe_document(&fem, &qpe_run_config(cfg), cfg.min_weight)?;
    echo_config(&cfg.output_dir, cfg)?;
    write_file(&cfg.output_dir, "qpe_report.json", &to_json_bytes(&doc)?)
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<()> {
    cfg.validate()?;
    let fem = build_fem(cfg.model.as_ref().expect("validated"))?;
    let base = QpeConfig {
        n_ancilla: cfg.ancilla_min,
        evolution_time: cfg.evolution_time,
        shots: cfg.shots,
        seed: cfg.seed,
        input_state: cfg.input_state.to_input_state(),
    };
    let doc = sweep_document(&fem, &base, cfg.ancilla_min..=cfg.ancilla_max)?;
    echo_config(&cfg.output_dir, cfg)?;
    match cfg.format {
        OutputFormat::Json => write_file(&cfg.output_dir, "sweep.json", &to_json_bytes(&doc)?),
        OutputFormat::Csv => write_file(&cfg.output_dir, "sweep.csv", sweep_csv(&doc).as_bytes()),
    }
}

pub fn run_heat_gen(cfg: &HeatGenConfig) -> Result<()> {
    cfg.validate()?;
    let (nx, ny) = (cfg.nx.expect("validated"), cfg.ny.expect("validated"));
    let steps = cfg.steps.expect("validated");
    let mesh = build_grid_mesh(nx, ny).map_err(|e| CliError::config(e.to_string()))?;
    let path = cfg.path.resolve(nx, ny, steps)?;
    let scenario = HeatScenario::new(
        mesh,
        cfg.alpha_dt,
        cfg.source_power,
        path,
        cfg.boundary.clone(),
        cfg.initial_temperature,
    )
    .map_err(runtime_err)?;
    let dataset = generate_dataset(&scenario, steps, cfg.val_fraction, cfg.seed)
        .map_err(runtime_err)?;
    echo_config(&cfg.output_dir, cfg)?;
    std::fs::create_dir_all(&cfg.output_dir)
        .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", cfg.output_dir.display())))?;
    dataset
        .save_to_path(cfg.output_dir.join("dataset.jsonl"))
        .map_err(runtime_err)
}

fn load_dataset(path: &PathBuf) -> Result<HeatDataset> {
    HeatDataset::load_from_path(path)
        .map_err(|e| CliError::config(format!("dataset {}: {e}", path.display())))
}

fn load_model(path: &PathBuf) -> Result<QgnnModel> {
    QgnnModel::load_from_path(path)
        .map_err(|e| CliError::config(format!("model {}: {e}", path.display())))
}

fn distinct_degrees(graph: &MeshGraph) -> Vec<usize> {
    let mut degrees: Vec<usize> = (0..graph.n_vertices()).map(|v| graph.degree(v)).collect();
    degrees.sort_unstable();
    degrees.dedup();
    degrees
}

pub fn run_qgnn_train(cfg: &QgnnTrainConfig) -> Result<()> {
    cfg.validate()?;
    let dataset = load_dataset(cfg.dataset.as_ref().expect("validated"))?;
    let graph = dataset.graph();
    let train_pairs = dataset.train_pairs();
    if train_pairs.is_empty() {
        return Err(CliError::config("dataset has no training pairs".to_string()));
    }
    let degrees = match &cfg.degrees {
        Some(d) => d.clone(),
        None => distinct_degrees(graph),
    };
    let scaler = fit_scaler(
        train_pairs
            .iter()
            .flat_map(|(input, label)| input.values().iter().chain(label.values()).copied()),
    )
    .map_err(runtime_err)?;
    let model = QgnnModel::new_seeded(&degrees, scaler, cfg.seed)
        .map_err(|e| CliError::config(e.to_string()))?;
    let train_cfg = TrainConfig {
        epochs: cfg.epochs,
        learning_rate: cfg.learning_rate,
        seed: cfg.seed,
        optimizer: match cfg.momentum {
            Some(beta) => qgnn::Optimizer::Momentum { beta },
            None => qgnn::Optimizer::PlainGd,
        },
        batch: qgnn::BatchMode::FullGraph,
    };
    train_cfg.validate().map_err(|e| CliError::config(e.to_string()))?;
    let pairs: Vec<TrainPair> = train_pairs
        .iter()
        .map(|(input, label)| TrainPair { graph, input, label })
        .collect();
    let (trained, report) = qgnn::train(&model, &pairs, &train_cfg).map_err(runtime_err)?;

    echo_config(&cfg.output_dir, cfg)?;
    let mut model_bytes = Vec::new();
    trained.save(&mut model_bytes).map_err(runtime_err)?;
    write_file(&cfg.output_dir, "model.json", &model_bytes)?;
    // One loss per update count: row 0 is the untrained loss, the last row
    // is the loss of the written model.
    let mut losses = report.epoch_losses.clone();
    losses.push(report.final_loss);
    write_file(&cfg.output_dir, "loss.csv", loss_csv(&losses).as_bytes())
}

fn split_pairs<'a>(
    dataset: &'a HeatDataset,
    split: SplitSpec,
) -> Vec<(&'a NodeFrame, &'a NodeFrame)> {
    match split {
        SplitSpec::Train => dataset.train_pairs(),
        SplitSpec::Val => dataset.val_pairs(),
        SplitSpec::All => dataset.pairs().iter().map(|(a, b)| (a, b)).collect(),
    }
}

/// Relabeling check: predictions on a randomly relabeled copy of the graph
/// must be the same values under the same relabeling, within 1e-10.
fn permutation_check(
    model: &QgnnModel,
    graph: &MeshGraph,
    frame: &NodeFrame,
    trials: usize,
    seed: u64,
) -> Result<&'static str> {
    let n = graph.n_vertices();
    let base = qgnn::model_predict(model, graph, frame).map_err(runtime_err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    for _ in 0..trials {
        perm.shuffle(&mut rng);
        let edges: Vec<(usize, usize, f64)> = graph
            .edges()
            .iter()
            .map(|&(v, w)| {
                (perm[v], perm[w], graph.edge_feature(v, w).expect("listed edge"))
            })
            .collect();
        let relabeled = MeshGraph::with_features(n, &edges).map_err(runtime_err)?;
        let mut values = vec![0.0; n];
        for v in 0..n {
            values[perm[v]] = frame.values()[v];
        }
        let relabeled_frame = NodeFrame::new(frame.timestamp(), values).map_err(runtime_err)?;
        let out = qgnn::model_predict(model, &relabeled, &relabeled_frame).map_err(runtime_err)?;
        for v in 0..n {
            if (out.values()[perm[v]] - base.values()[v]).abs() > 1e-10 {
                return Ok("fail");
            }
        }
    }
    Ok("pass")
}

pub fn run_qgnn_eval(cfg: &QgnnEvalConfig) -> Result<()> {
    cfg.validate()?;
    let model = load_model(cfg.model.as_ref().expect("validated"))?;
    let dataset = load_dataset(cfg.dataset.as_ref().expect("validated"))?;
    let graph = dataset.graph();
    let pairs = split_pairs(&dataset, cfg.split);
    if pairs.is_empty() {
        return Err(CliError::config(format!("split {:?} has no pairs", cfg.split)));
    }
    let one_step_mse = qgnn::transfer_evaluate(&model, graph, &pairs).map_err(runtime_err)?;

    let all_pairs = dataset.pairs();
    if cfg.rollout_steps > all_pairs.len() {
        return Err(CliError::config(format!(
            "rollout_steps {} exceeds the {} recorded transitions",
            cfg.rollout_steps,
            all_pairs.len()
        )));
    }
    let frames = qgnn::rollout(&model, graph, &all_pairs[0].0, cfg.rollout_steps)
        .map_err(runtime_err)?;
    let rollout_mse_per_step: Vec<f64> = frames
        .iter()
        .enumerate()
        .map(|(k, frame)| {
            let truth = all_pairs[k].1.values();
            let sum: f64 = frame
                .values()
                .iter()
                .zip(truth)
                .map(|(p, t)| (p - t) * (p - t))
                .sum();
            sig9(sum / truth.len() as f64)
        })
        .collect();

    let permutation_check = permutation_check(
        &model,
        graph,
        &all_pairs[0].0,
        cfg.permutation_trials,
        cfg.seed,
    )?;

    let doc = EvalDocument {
        format_version: REPORT_FORMAT_VERSION,
        kind: "qgnn_eval".to_string(),
        one_step_mse: sig9(one_step_mse),
        rollout_mse_per_step,
        permutation_check: permutation_check.to_string(),
    };
    echo_config(&cfg.output_dir, cfg)?;
    write_file(&cfg.output_dir, "metrics.json", &to_json_bytes(&doc)?)
}

pub fn run_qgnn_predict(cfg: &QgnnPredictConfig) -> Result<()> {
    cfg.validate()?;
    let model = load_model(cfg.model.as_ref().expect("validated"))?;
    let (nx, ny) = (cfg.nx.expect("validated"), cfg.ny.expect("validated"));
    let mesh = build_grid_mesh(nx, ny).map_err(|e| CliError::config(e.to_string()))?;
    let frame = NodeFrame::new(0, cfg.frame.clone().expect("validated"))
        .map_err(|e| CliError::config(e.to_string()))?;
    let doc = predict_document(&model, &mesh, &frame, cfg.steps)?;
    echo_config(&cfg.output_dir, cfg)?;
    write_file(&cfg.output_dir, "prediction.json", &to_json_bytes(&doc)?)
}

pub fn run_frf(cfg: &FrfCmdConfig) -> Result<()> {
    cfg.validate()?;
    let fem = build_fem(cfg.model.as_ref().expect("validated"))?;
    let n_dof = fem.n_dof();
    for (name, dof) in [("input_dof", cfg.input_dof), ("output_dof", cfg.output_dof)] {
        if dof >= n_dof {
            return Err(CliError::config(format!(
                "{name} {dof} outside the model's {n_dof} degrees of freedom"
            )));
        }
    }
    let points = frf_points(&fem, cfg.damping_ratio, cfg.omega_grid(), cfg.input_dof, cfg.output_dof)?;
    echo_config(&cfg.output_dir, cfg)?;
    write_file(&cfg.output_dir, "frf.csv", frf_csv(&points).as_bytes())
}
