use heat_oracle::{MeshGraph, NodeFrame};

use crate::error::{QgnnError, Result};
use crate::model::{submodel_predict, QgnnModel};

/// Neighbor temperatures and edge features of one vertex, gathered in the
/// graph's sorted neighbor order.
pub(crate) fn star_inputs(graph: &MeshGraph, values: &[f64], v: usize) -> (Vec<f64>, Vec<f64>) {
    let neighbors = graph.neighbors(v);
    let f_neighbors = neighbors.iter().map(|&w| values[w]).collect();
    let eps = neighbors
        .iter()
        // Adjacency is built from the edge set, so the feature exists.
        .map(|&w| graph.edge_feature(v, w).expect("edge feature for adjacent pair"))
        .collect();
    (f_neighbors, eps)
}

pub(crate) fn check_frame(graph: &MeshGraph, frame: &NodeFrame) -> Result<()> {
    if frame.len() != graph.n_vertices() {
        return Err(QgnnError::FrameSizeMismatch {
            expected: graph.n_vertices(),
            got: frame.len(),
        });
    }
    Ok(())
}

/// Every vertex whose degree has no parameter set, ascending.
pub(crate) fn unsupported_vertices(model: &QgnnModel, graph: &MeshGraph) -> Vec<usize> {
    (0..graph.n_vertices()).filter(|&v| !model.supports(graph.degree(v))).collect()
}

pub(crate) fn predict_values(
    model: &QgnnModel,
    graph: &MeshGraph,
    frame: &NodeFrame,
) -> Result<Vec<f64>> {
    check_frame(graph, frame)?;
    let bad = unsupported_vertices(model, graph);
    if !bad.is_empty() {
        return Err(QgnnError::UnsupportedVertices { vertices: bad });
    }
    let values = frame.values();
    (0..graph.n_vertices())
        .map(|v| {
            let (f_neighbors, eps) = star_inputs(graph, values, v);
            submodel_predict(model, graph.degree(v), values[v], &f_neighbors, &eps)
        })
        .collect()
}

/// One prediction step over the whole graph: every vertex evaluated by the
/// submodel of its degree, output stamped one step later.
pub fn model_predict(model: &QgnnModel, graph: &MeshGraph, frame: &NodeFrame) -> Result<NodeFrame> {
    let values = predict_values(model, graph, frame)?;
    Ok(NodeFrame::new(frame.timestamp() + 1, values)?)
}

/// Autoregressive prediction: each output frame becomes the next input.
/// Returns the `steps` predicted frames; aborts with the step index when
/// any value grows beyond ten times the scaler range.
pub fn rollout(
    model: &QgnnModel,
    graph: &MeshGraph,
    frame_0: &NodeFrame,
    steps: usize,
) -> Result<Vec<NodeFrame>> {
    if steps == 0 {
        return Err(QgnnError::ZeroSteps);
    }
    let limit = 10.0 * model.scaler().range();
    let mut out = Vec::with_capacity(steps);
    let mut current = frame_0.clone();
    for step in 0..steps {
        let next = model_predict(model, graph, &current)?;
        if let Some(&value) = next.values().iter().find(|x| x.abs() > limit) {
            return Err(QgnnError::RolloutDiverged { step, value });
        }
        out.push(next.clone());
        current = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DegreeParams, QgnnModel};
    use crate::scaler::Scaler;
    use approx::assert_abs_diff_eq;
    use heat_oracle::build_grid_mesh;

    fn grid_model(seed: u64) -> QgnnModel {
        QgnnModel::new_seeded(&[2, 3, 4], Scaler::new(0.0, 10.0).unwrap(), seed).unwrap()
    }

    fn ramp_frame(n: usize) -> NodeFrame {
        NodeFrame::new(0, (0..n).map(|v| v as f64 % 7.0).collect()).unwrap()
    }

    #[test]
    fn single_vertex_graph_reduces_to_the_isolated_submodel() {
        let graph = MeshGraph::new(1, &[]).unwrap();
        let model =
            QgnnModel::new_seeded(&[0], Scaler::new(0.0, 10.0).unwrap(), 2).unwrap();
        let frame = NodeFrame::new(5, vec![3.5]).unwrap();
        let out = model_predict(&model, &graph, &frame).unwrap();
        assert_eq!(out.timestamp(), 6);
        let direct = submodel_predict(&model, 0, 3.5, &[], &[]).unwrap();
        assert_eq!(out.values(), &[direct]);
    }

    #[test]
    fn grid_prediction_matches_per_vertex_submodels() {
        let graph = build_grid_mesh(3, 3).unwrap();
        let model = grid_model(4);
        let frame = ramp_frame(9);
        let out = model_predict(&model, &graph, &frame).unwrap();
        for v in 0..9 {
            let (f_neighbors, eps) = star_inputs(&graph, frame.values(), v);
            let direct =
                submodel_predict(&model, graph.degree(v), frame.values()[v], &f_neighbors, &eps)
                    .unwrap();
            assert_abs_diff_eq!(out.values()[v], direct, epsilon = 0.0);
        }
    }

    #[test]
    fn missing_degree_lists_every_offending_vertex() {
        let graph = build_grid_mesh(3, 3).unwrap();
        let model =
            QgnnModel::new_seeded(&[3, 4], Scaler::new(0.0, 10.0).unwrap(), 1).unwrap();
        // Corners have degree 2, which this model does not support.
        assert_eq!(
            model_predict(&model, &graph, &ramp_frame(9)).unwrap_err(),
            QgnnError::UnsupportedVertices { vertices: vec![0, 2, 6, 8] }
        );
    }

    #[test]
    fn frame_size_mismatch_is_rejected() {
        let graph = build_grid_mesh(2, 2).unwrap();
        assert_eq!(
            model_predict(&grid_model(0), &graph, &ramp_frame(5)).unwrap_err(),
            QgnnError::FrameSizeMismatch { expected: 4, got: 5 }
        );
    }

    #[test]
    fn one_step_rollout_equals_model_predict() {
        let graph = build_grid_mesh(2, 3).unwrap();
        let model = grid_model(9);
        let frame = ramp_frame(6);
        let rolled = rollout(&model, &graph, &frame, 1).unwrap();
        assert_eq!(rolled.len(), 1);
        assert_eq!(rolled[0], model_predict(&model, &graph, &frame).unwrap());
    }

    #[test]
    fn rollout_timestamps_increase_by_one() {
        let graph = build_grid_mesh(2, 2).unwrap();
        let frames = rollout(&grid_model(3), &graph, &ramp_frame(4), 5).unwrap();
        for (i, frame) in frames.iter().enumerate() {
            assert_eq!(frame.timestamp(), i + 1);
        }
        assert_eq!(rollout(&grid_model(3), &graph, &ramp_frame(4), 0).unwrap_err(), QgnnError::ZeroSteps);
    }

    #[test]
    fn runaway_readout_aborts_the_rollout() {
        let graph = MeshGraph::new(1, &[]).unwrap();
        let scaler = Scaler::new(0.0, 1.0).unwrap();
        let params = DegreeParams {
            theta_n: 0.0,
            theta_e: 0.0,
            gamma: 0.0,
            decode_gain: 1e5,
            decode_bias: 0.0,
        };
        let model = QgnnModel::from_parts([(0, params)].into(), scaler).unwrap();
        // f = 0 encodes to z = 1, so the huge gain throws the prediction
        // far outside ten scaler ranges immediately.
        let frame = NodeFrame::new(0, vec![0.0]).unwrap();
        match rollout(&model, &graph, &frame, 3).unwrap_err() {
            QgnnError::RolloutDiverged { step: 0, value } => assert!(value.abs() > 10.0),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
