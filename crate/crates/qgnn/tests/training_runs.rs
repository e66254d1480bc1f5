//! End-to-end training behavior on simulated heat data: determinism of the
//! full pipeline, actual loss reduction on a small run, and evaluation
//! consistency between training and transfer entry points.

use heat_oracle::{
    build_grid_mesh, generate_dataset, Boundary, HeatDataset, HeatScenario, LaserPath,
};
use qgnn::{
    fit_scaler, rollout, train, transfer_evaluate, QgnnModel, TrainConfig, TrainPair,
    TrainReport,
};

/// 4x4 insulated plate heated at one interior vertex for `steps` steps.
fn small_heat_dataset(steps: usize) -> HeatDataset {
    let mesh = build_grid_mesh(4, 4).unwrap();
    let scenario = HeatScenario::new(
        mesh,
        0.15,
        1.0,
        LaserPath::constant(5, steps),
        Boundary::Insulated,
        0.0,
    )
    .unwrap();
    generate_dataset(&scenario, steps, 0.0, 42).unwrap()
}

fn fit_over(dataset: &HeatDataset) -> qgnn::Scaler {
    fit_scaler(
        dataset
            .pairs()
            .iter()
            .flat_map(|(a, b)| a.values().iter().chain(b.values()).copied()),
    )
    .unwrap()
}

fn train_once(dataset: &HeatDataset, cfg: &TrainConfig) -> (QgnnModel, TrainReport) {
    let scaler = fit_over(dataset);
    let model = QgnnModel::new_seeded(&[2, 3, 4], scaler, cfg.seed).unwrap();
    let pairs: Vec<TrainPair> = dataset
        .pairs()
        .iter()
        .map(|(input, label)| TrainPair { graph: dataset.graph(), input, label })
        .collect();
    train(&model, &pairs, cfg).unwrap()
}

#[test]
fn same_seed_runs_are_bit_identical() {
    let dataset = small_heat_dataset(10);
    let cfg = TrainConfig::new(4, 0.1, 7);
    let (model_a, report_a) = train_once(&dataset, &cfg);
    let (model_b, report_b) = train_once(&dataset, &cfg);
    assert_eq!(model_a, model_b);
    assert_eq!(report_a.epoch_losses, report_b.epoch_losses);
    assert_eq!(report_a.final_loss, report_b.final_loss);

    let (model_c, _) = train_once(&dataset, &TrainConfig::new(4, 0.1, 8));
    assert_ne!(model_a, model_c);
}

#[test]
fn descent_reduces_the_loss_on_a_heat_run() {
    let dataset = small_heat_dataset(16);
    let cfg = TrainConfig::new(20, 0.1, 3);
    let (trained, report) = train_once(&dataset, &cfg);
    assert_eq!(report.epoch_losses.len(), 20);
    let initial = report.epoch_losses[0];
    assert!(
        report.final_loss < initial,
        "final {} not below initial {initial}",
        report.final_loss
    );

    // Evaluating the trained model over the training pairs reproduces the
    // reported final loss exactly.
    let pairs: Vec<(&heat_oracle::NodeFrame, &heat_oracle::NodeFrame)> =
        dataset.pairs().iter().map(|(a, b)| (a, b)).collect();
    let mse = transfer_evaluate(&trained, dataset.graph(), &pairs).unwrap();
    assert_eq!(mse, report.final_loss);
}

#[test]
fn trained_model_rolls_out_with_finite_values() {
    let dataset = small_heat_dataset(12);
    let (trained, _) = train_once(&dataset, &TrainConfig::new(8, 0.1, 1));
    let start = &dataset.pairs()[0].0;
    let frames = rollout(&trained, dataset.graph(), start, 6).unwrap();
    assert_eq!(frames.len(), 6);
    for frame in &frames {
        assert!(frame.values().iter().all(|v| v.is_finite()));
    }
}

#[test]
fn transfer_runs_on_a_different_grid_with_the_same_degrees() {
    let dataset = small_heat_dataset(12);
    let (trained, _) = train_once(&dataset, &TrainConfig::new(6, 0.1, 2));

    // 6x3 grid: same degree set {2, 3, 4}, different geometry.
    let other_mesh = build_grid_mesh(6, 3).unwrap();
    let scenario = HeatScenario::new(
        other_mesh,
        0.15,
        1.0,
        LaserPath::constant(7, 10),
        Boundary::Insulated,
        0.0,
    )
    .unwrap();
    let other = generate_dataset(&scenario, 10, 0.0, 9).unwrap();
    let pairs: Vec<(&heat_oracle::NodeFrame, &heat_oracle::NodeFrame)> =
        other.pairs().iter().map(|(a, b)| (a, b)).collect();
    let mse = transfer_evaluate(&trained, other.graph(), &pairs).unwrap();
    assert!(mse.is_finite());
}
