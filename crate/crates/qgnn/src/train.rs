use std::collections::BTreeMap;

use heat_oracle::{MeshGraph, NodeFrame};
use qsim_core::Statevector;

use crate::error::{QgnnError, Result};
use crate::model::{
    build_submodel_circuit, decode, encode_inputs, root_observable, DegreeParams, QgnnModel,
    SLOT_GAMMA, SLOT_THETA_E, SLOT_THETA_N,
};
use crate::predict::{check_frame, predict_values, star_inputs, unsupported_vertices};

/// Loss gradient keyed by degree: one entry per parameter set that received
/// any contribution.
pub type GradMap = BTreeMap<usize, DegreeParams>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Optimizer {
    PlainGd,
    /// Heavy-ball momentum: `v <- beta * v + g`, `p <- p - lr * v`.
    Momentum { beta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BatchMode {
    /// One gradient step per epoch, averaged over every pair in the dataset.
    FullGraph,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    /// Step size; zero is allowed and leaves the model untouched.
    pub learning_rate: f64,
    /// Seed for the initial parameter draw. The descent itself is
    /// deterministic; callers consume this via `QgnnModel::new_seeded`
    /// before training.
    pub seed: u64,
    pub optimizer: Optimizer,
    pub batch: BatchMode,
}

impl TrainConfig {
    /// Plain full-batch gradient descent.
    pub fn new(epochs: usize, learning_rate: f64, seed: u64) -> Self {
        TrainConfig {
            epochs,
            learning_rate,
            seed,
            optimizer: Optimizer::PlainGd,
            batch: BatchMode::FullGraph,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(QgnnError::ZeroEpochs);
        }
        if !self.learning_rate.is_finite() || self.learning_rate < 0.0 {
            return Err(QgnnError::BadLearningRate(self.learning_rate));
        }
        if let Optimizer::Momentum { beta } = self.optimizer {
            if !(0.0..1.0).contains(&beta) || beta.is_nan() {
                return Err(QgnnError::BadMomentum(beta));
            }
        }
        Ok(())
    }
}

/// One supervised transition: predict `label` from `input` on `graph`.
#[derive(Debug, Clone, Copy)]
pub struct TrainPair<'a> {
    pub graph: &'a MeshGraph,
    pub input: &'a NodeFrame,
    pub label: &'a NodeFrame,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    /// Dataset loss at the start of each epoch, before that epoch's update.
    pub epoch_losses: Vec<f64>,
    /// Dataset loss of the returned model.
    pub final_loss: f64,
}

/// Mean squared per-vertex prediction error of one transition.
pub fn loss_mse(
    model: &QgnnModel,
    graph: &MeshGraph,
    frame_t: &NodeFrame,
    frame_t1: &NodeFrame,
) -> Result<f64> {
    check_frame(graph, frame_t1)?;
    let preds = predict_values(model, graph, frame_t)?;
    if preds.is_empty() {
        return Err(QgnnError::EmptyDataset);
    }
    let sum: f64 = preds
        .iter()
        .zip(frame_t1.values())
        .map(|(p, l)| (p - l) * (p - l))
        .sum();
    Ok(sum / preds.len() as f64)
}

/// Gradient of `loss_mse` with respect to every parameter, by the shift rule
/// on the circuit angles and the affine chain rule through the readout.
/// Parameters shared across vertices accumulate over all of them.
pub fn grad_loss(
    model: &QgnnModel,
    graph: &MeshGraph,
    frame_t: &NodeFrame,
    frame_t1: &NodeFrame,
) -> Result<GradMap> {
    let mut grads = GradMap::new();
    pair_loss_and_grad(model, graph, frame_t, frame_t1, &mut grads)?;
    Ok(grads)
}

/// Loss of one pair plus its gradient accumulated into `grads`. Shares the
/// forward pass between the two so each vertex is simulated once for the
/// value and once per shifted occurrence for the gradient.
fn pair_loss_and_grad(
    model: &QgnnModel,
    graph: &MeshGraph,
    frame_t: &NodeFrame,
    frame_t1: &NodeFrame,
    grads: &mut GradMap,
) -> Result<f64> {
    check_frame(graph, frame_t)?;
    check_frame(graph, frame_t1)?;
    let bad = unsupported_vertices(model, graph);
    if !bad.is_empty() {
        return Err(QgnnError::UnsupportedVertices { vertices: bad });
    }
    let n = graph.n_vertices();
    if n == 0 {
        return Err(QgnnError::EmptyDataset);
    }
    let values = frame_t.values();
    let labels = frame_t1.values();
    let range = model.scaler().range();
    let mut loss = 0.0;
    for v in 0..n {
        let degree = graph.degree(v);
        let params = *model.params(degree)?;
        let (f_neighbors, eps) = star_inputs(graph, values, v);
        let (x_root, x_rel) = encode_inputs(model.scaler(), values[v], &f_neighbors)?;
        let circuit = build_submodel_circuit(degree, x_root, &x_rel, &eps)?;
        let bindings = params.bindings();
        let initial = Statevector::basis(circuit.n_qubits(), 0)?;
        let obs = root_observable(&circuit);
        let z = circuit.run(&bindings, &initial)?.expectation(&obs)?;
        let pred = decode(model.scaler(), &params, z);
        let residual = pred - labels[v];
        loss += residual * residual;

        let dz = circuit.parameter_shift_gradient(&bindings, &obs, &initial)?;
        // pred = f_min + range * (1 - gain*z - bias) / 2, so the readout
        // chain factors are -range*gain/2 (z), -range*z/2 (gain), -range/2
        // (bias); the loss contributes 2/|V| * residual per vertex.
        let factor = 2.0 / n as f64 * residual;
        let dpred_dz = -range * params.decode_gain / 2.0;
        let g = grads.entry(degree).or_insert_with(DegreeParams::zero);
        g.theta_n += factor * dpred_dz * dz.get(SLOT_THETA_N).copied().unwrap_or(0.0);
        g.theta_e += factor * dpred_dz * dz.get(SLOT_THETA_E).copied().unwrap_or(0.0);
        g.gamma += factor * dpred_dz * dz.get(SLOT_GAMMA).copied().unwrap_or(0.0);
        g.decode_gain += factor * (-range * z / 2.0);
        g.decode_bias += factor * (-range / 2.0);
    }
    Ok(loss / n as f64)
}

/// Full-batch gradient descent. Each epoch evaluates loss and gradient over
/// the whole dataset (losses are recorded before the update), applies one
/// optimizer step, and aborts with the epoch index once the loss stops being
/// finite. The final loss is re-evaluated with the returned model.
pub fn train(
    model: &QgnnModel,
    dataset: &[TrainPair],
    cfg: &TrainConfig,
) -> Result<(QgnnModel, TrainReport)> {
    cfg.validate()?;
    if dataset.is_empty() {
        return Err(QgnnError::EmptyDataset);
    }
    let BatchMode::FullGraph = cfg.batch;
    let mut model = model.clone();
    let mut velocity = GradMap::new();
    let mut epoch_losses = Vec::with_capacity(cfg.epochs);
    let inv_pairs = 1.0 / dataset.len() as f64;
    for epoch in 0..cfg.epochs {
        let mut grads = GradMap::new();
        let mut loss = 0.0;
        for pair in dataset {
            loss += pair_loss_and_grad(&model, pair.graph, pair.input, pair.label, &mut grads)?;
        }
        loss *= inv_pairs;
        epoch_losses.push(loss);
        if !loss.is_finite() {
            return Err(QgnnError::Diverged { epoch, loss });
        }
        for g in grads.values_mut() {
            g.scale_in_place(inv_pairs);
        }
        match cfg.optimizer {
            Optimizer::PlainGd => {
                for (&degree, g) in &grads {
                    model.params_mut(degree).add_scaled(-cfg.learning_rate, g);
                }
            }
            Optimizer::Momentum { beta } => {
                for (&degree, g) in &grads {
                    let v = velocity.entry(degree).or_insert_with(DegreeParams::zero);
                    v.scale_in_place(beta);
                    v.add_scaled(1.0, g);
                    model.params_mut(degree).add_scaled(-cfg.learning_rate, v);
                }
            }
        }
    }
    let mut final_loss = 0.0;
    for pair in dataset {
        final_loss += loss_mse(&model, pair.graph, pair.input, pair.label)?;
    }
    final_loss *= inv_pairs;
    Ok((model, TrainReport { epoch_losses, final_loss }))
}

/// Mean loss of an already-trained model on transitions from another graph.
/// Requires every degree of that graph to be in the model's degree set.
pub fn transfer_evaluate(
    model: &QgnnModel,
    graph: &MeshGraph,
    pairs: &[(&NodeFrame, &NodeFrame)],
) -> Result<f64> {
    if pairs.is_empty() {
        return Err(QgnnError::EmptyDataset);
    }
    let mut total = 0.0;
    for (input, label) in pairs {
        total += loss_mse(model, graph, input, label)?;
    }
    Ok(total / pairs.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::submodel_predict;
    use crate::predict::model_predict;
    use crate::scaler::Scaler;
    use approx::assert_abs_diff_eq;
    use heat_oracle::build_grid_mesh;

    fn field(p: &DegreeParams, i: usize) -> f64 {
        [p.theta_n, p.theta_e, p.gamma, p.decode_gain, p.decode_bias][i]
    }

    fn field_mut(p: &mut DegreeParams, i: usize) -> &mut f64 {
        match i {
            0 => &mut p.theta_n,
            1 => &mut p.theta_e,
            2 => &mut p.gamma,
            3 => &mut p.decode_gain,
            _ => &mut p.decode_bias,
        }
    }

    /// Path graph 0-1-2-3 with degrees {1, 2} and hand-picked parameters.
    fn path_setup() -> (MeshGraph, QgnnModel, NodeFrame, NodeFrame) {
        let graph = MeshGraph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let params = BTreeMap::from([
            (
                1,
                DegreeParams {
                    theta_n: 0.3,
                    theta_e: -0.4,
                    gamma: 0.6,
                    decode_gain: 1.1,
                    decode_bias: -0.05,
                },
            ),
            (
                2,
                DegreeParams {
                    theta_n: -0.2,
                    theta_e: 0.5,
                    gamma: -0.7,
                    decode_gain: 0.9,
                    decode_bias: 0.1,
                },
            ),
        ]);
        let model = QgnnModel::from_parts(params, Scaler::new(0.0, 4.0).unwrap()).unwrap();
        let input = NodeFrame::new(0, vec![1.0, 3.0, 2.0, 0.5]).unwrap();
        let label = NodeFrame::new(1, vec![2.0, 1.0, 0.7, 3.0]).unwrap();
        (graph, model, input, label)
    }

    #[test]
    fn perfect_predictions_give_zero_loss_and_gradient() {
        let (graph, model, input, _) = path_setup();
        let label = model_predict(&model, &graph, &input).unwrap();
        assert_eq!(loss_mse(&model, &graph, &input, &label).unwrap(), 0.0);
        let grads = grad_loss(&model, &graph, &input, &label).unwrap();
        for g in grads.values() {
            for i in 0..5 {
                assert_eq!(field(g, i), 0.0);
            }
        }
    }

    #[test]
    fn constant_offset_gives_squared_offset_loss() {
        let (graph, model, input, _) = path_setup();
        let preds = model_predict(&model, &graph, &input).unwrap();
        let c = 0.37;
        let shifted =
            NodeFrame::new(1, preds.values().iter().map(|v| v + c).collect()).unwrap();
        let loss = loss_mse(&model, &graph, &input, &shifted).unwrap();
        assert_abs_diff_eq!(loss, c * c, epsilon = 1e-12);
    }

    #[test]
    fn four_vertex_loss_matches_hand_mean_of_squares() {
        let (graph, model, input, label) = path_setup();
        let mut expected = 0.0;
        for v in 0..4 {
            let (f_neighbors, eps) = star_inputs(&graph, input.values(), v);
            let pred =
                submodel_predict(&model, graph.degree(v), input.values()[v], &f_neighbors, &eps)
                    .unwrap();
            let r = pred - label.values()[v];
            expected += r * r;
        }
        expected /= 4.0;
        let loss = loss_mse(&model, &graph, &input, &label).unwrap();
        assert_abs_diff_eq!(loss, expected, epsilon = 1e-14);
    }

    #[test]
    fn label_frame_size_mismatch_is_rejected() {
        let (graph, model, input, _) = path_setup();
        let short = NodeFrame::new(1, vec![0.0; 3]).unwrap();
        assert_eq!(
            loss_mse(&model, &graph, &input, &short).unwrap_err(),
            QgnnError::FrameSizeMismatch { expected: 4, got: 3 }
        );
    }

    #[test]
    fn gradients_match_central_finite_differences() {
        let (graph, model, input, label) = path_setup();
        let grads = grad_loss(&model, &graph, &input, &label).unwrap();
        let h = 1e-4;
        for &degree in &[1usize, 2] {
            for i in 0..5 {
                let mut probe = |delta: f64| {
                    let mut params: BTreeMap<usize, DegreeParams> = BTreeMap::new();
                    for &d in &[1usize, 2] {
                        params.insert(d, *model.params(d).unwrap());
                    }
                    *field_mut(params.get_mut(&degree).unwrap(), i) += delta;
                    let perturbed =
                        QgnnModel::from_parts(params, *model.scaler()).unwrap();
                    loss_mse(&perturbed, &graph, &input, &label).unwrap()
                };
                let fd = (probe(h) - probe(-h)) / (2.0 * h);
                let got = field(&grads[&degree], i);
                assert_abs_diff_eq!(got, fd, epsilon = 1e-5);
            }
        }
    }

    #[test]
    fn decode_bias_gradient_follows_the_affine_formula() {
        let (graph, model, input, label) = path_setup();
        let grads = grad_loss(&model, &graph, &input, &label).unwrap();
        let preds = predict_values(&model, &graph, &input).unwrap();
        let range = model.scaler().range();
        for &degree in &[1usize, 2] {
            let expected: f64 = (0..4)
                .filter(|&v| graph.degree(v) == degree)
                .map(|v| 2.0 / 4.0 * (preds[v] - label.values()[v]) * (-range / 2.0))
                .sum();
            assert_abs_diff_eq!(grads[&degree].decode_bias, expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_learning_rate_keeps_parameters_and_loss_flat() {
        let (graph, model, input, label) = path_setup();
        let pairs = [TrainPair { graph: &graph, input: &input, label: &label }];
        let cfg = TrainConfig::new(3, 0.0, 0);
        let (trained, report) = train(&model, &pairs, &cfg).unwrap();
        assert_eq!(trained, model);
        assert_eq!(report.epoch_losses.len(), 3);
        for &l in &report.epoch_losses {
            assert_eq!(l, report.epoch_losses[0]);
        }
        assert_eq!(report.final_loss, report.epoch_losses[0]);
    }

    #[test]
    fn one_epoch_equals_a_manual_gradient_step() {
        let (graph, model, input, label) = path_setup();
        let lr = 0.05;
        let grads = grad_loss(&model, &graph, &input, &label).unwrap();
        let pairs = [TrainPair { graph: &graph, input: &input, label: &label }];
        let (trained, report) = train(&model, &pairs, &TrainConfig::new(1, lr, 0)).unwrap();
        for &degree in &[1usize, 2] {
            let before = model.params(degree).unwrap();
            let after = trained.params(degree).unwrap();
            let g = &grads[&degree];
            for i in 0..5 {
                assert_abs_diff_eq!(
                    field(after, i),
                    field(before, i) - lr * field(g, i),
                    epsilon = 1e-12
                );
            }
        }
        assert_abs_diff_eq!(
            report.epoch_losses[0],
            loss_mse(&model, &graph, &input, &label).unwrap(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            report.final_loss,
            loss_mse(&trained, &graph, &input, &label).unwrap(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn momentum_updates_match_a_manual_two_step_run() {
        let (graph, model, input, label) = path_setup();
        let (lr, beta) = (0.05, 0.6);
        let cfg = TrainConfig {
            epochs: 2,
            learning_rate: lr,
            seed: 0,
            optimizer: Optimizer::Momentum { beta },
            batch: BatchMode::FullGraph,
        };
        let pairs = [TrainPair { graph: &graph, input: &input, label: &label }];
        let (trained, _) = train(&model, &pairs, &cfg).unwrap();

        // Manual: v1 = g1, p1 = p0 - lr*v1; v2 = beta*v1 + g2, p2 = p1 - lr*v2.
        let g1 = grad_loss(&model, &graph, &input, &label).unwrap();
        let mut manual = BTreeMap::new();
        for &d in &[1usize, 2] {
            let mut p = *model.params(d).unwrap();
            p.add_scaled(-lr, &g1[&d]);
            manual.insert(d, p);
        }
        let mid = QgnnModel::from_parts(manual.clone(), *model.scaler()).unwrap();
        let g2 = grad_loss(&mid, &graph, &input, &label).unwrap();
        for &d in &[1usize, 2] {
            let mut v = g1[&d];
            v.scale_in_place(beta);
            v.add_scaled(1.0, &g2[&d]);
            let p = manual.get_mut(&d).unwrap();
            p.add_scaled(-lr, &v);
            for i in 0..5 {
                assert_abs_diff_eq!(
                    field(trained.params(d).unwrap(), i),
                    field(p, i),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn runaway_learning_rate_reports_divergence() {
        let graph = MeshGraph::new(1, &[]).unwrap();
        let model = QgnnModel::from_parts(
            [(0, DegreeParams { theta_n: 0.0, theta_e: 0.0, gamma: 0.0, decode_gain: 1.0, decode_bias: 0.0 })]
                .into(),
            Scaler::new(0.0, 1.0).unwrap(),
        )
        .unwrap();
        let input = NodeFrame::new(0, vec![0.0]).unwrap();
        let label = NodeFrame::new(1, vec![5.0]).unwrap();
        let pairs = [TrainPair { graph: &graph, input: &input, label: &label }];
        let cfg = TrainConfig::new(10, 1e100, 0);
        match train(&model, &pairs, &cfg).unwrap_err() {
            QgnnError::Diverged { epoch, loss } => {
                assert_eq!(epoch, 2);
                assert!(loss.is_infinite());
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn config_validation_rejects_bad_settings() {
        assert_eq!(
            TrainConfig::new(0, 0.1, 0).validate().unwrap_err(),
            QgnnError::ZeroEpochs
        );
        assert_eq!(
            TrainConfig::new(5, -0.1, 0).validate().unwrap_err(),
            QgnnError::BadLearningRate(-0.1)
        );
        let cfg = TrainConfig {
            epochs: 5,
            learning_rate: 0.1,
            seed: 0,
            optimizer: Optimizer::Momentum { beta: 1.0 },
            batch: BatchMode::FullGraph,
        };
        assert_eq!(cfg.validate().unwrap_err(), QgnnError::BadMomentum(1.0));
        assert_eq!(
            train(&path_setup().1, &[], &TrainConfig::new(1, 0.1, 0)).unwrap_err(),
            QgnnError::EmptyDataset
        );
    }

    #[test]
    fn same_geometry_transfer_equals_the_plain_loss() {
        let graph = build_grid_mesh(2, 3).unwrap();
        let model =
            QgnnModel::new_seeded(&[2, 3], Scaler::new(0.0, 6.0).unwrap(), 5).unwrap();
        let a = NodeFrame::new(0, (0..6).map(|v| v as f64).collect()).unwrap();
        let b = NodeFrame::new(1, (0..6).map(|v| (v as f64) / 2.0).collect()).unwrap();
        let c = NodeFrame::new(2, vec![1.0; 6]).unwrap();
        let pairs = [(&a, &b), (&b, &c)];
        let expected = (loss_mse(&model, &graph, &a, &b).unwrap()
            + loss_mse(&model, &graph, &b, &c).unwrap())
            / 2.0;
        assert_eq!(transfer_evaluate(&model, &graph, &pairs).unwrap(), expected);
    }

    #[test]
    fn transfer_to_an_unsupported_degree_is_rejected() {
        let star = MeshGraph::new(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        let model =
            QgnnModel::new_seeded(&[1, 2, 3, 4], Scaler::new(0.0, 1.0).unwrap(), 0).unwrap();
        let a = NodeFrame::new(0, vec![0.5; 6]).unwrap();
        let b = NodeFrame::new(1, vec![0.4; 6]).unwrap();
        assert_eq!(
            transfer_evaluate(&model, &star, &[(&a, &b)]).unwrap_err(),
            QgnnError::UnsupportedVertices { vertices: vec![0] }
        );
    }
}
