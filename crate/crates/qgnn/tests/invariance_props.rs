//! Structural guarantees of the graph surrogate: neighbor-order blindness,
//! equivariance under vertex relabeling, and strict locality of the
//! receptive field.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use heat_oracle::{build_grid_mesh, MeshGraph, NodeFrame};
use qgnn::{model_predict, submodel_predict, QgnnModel, Scaler};

fn scaler() -> Scaler {
    Scaler::new(0.0, 10.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Shuffling the neighbor list (values and edge features moved
    /// together) never changes the prediction.
    #[test]
    fn neighbor_shuffles_leave_predictions_unchanged(
        degree in 1usize..=8,
        model_seed in 0u64..1000,
        shuffle_seed in 0u64..1000,
        f_root in 0.0f64..10.0,
        raw_nb in prop::collection::vec(0.0f64..10.0, 8),
        raw_eps in prop::collection::vec(0.0f64..2.0, 8),
    ) {
        let model = QgnnModel::new_seeded(&[degree], scaler(), model_seed).unwrap();
        let f_nb = &raw_nb[..degree];
        let eps = &raw_eps[..degree];
        let base = submodel_predict(&model, degree, f_root, f_nb, eps).unwrap();

        let mut order: Vec<usize> = (0..degree).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle_seed));
        let f_shuf: Vec<f64> = order.iter().map(|&k| f_nb[k]).collect();
        let eps_shuf: Vec<f64> = order.iter().map(|&k| eps[k]).collect();
        let shuffled = submodel_predict(&model, degree, f_root, &f_shuf, &eps_shuf).unwrap();

        prop_assert!((base - shuffled).abs() < 1e-10, "{base} vs {shuffled}");
    }
}

/// 3x3 grid edges with a distinct feature per edge so relabeling moves
/// nontrivial data around.
fn featured_grid_edges() -> Vec<(usize, usize, f64)> {
    build_grid_mesh(3, 3)
        .unwrap()
        .edges()
        .iter()
        .map(|&(u, v)| (u, v, 0.3 + 0.05 * (u as f64 + 2.0 * v as f64)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// Relabeling the vertices of the mesh permutes the prediction the same
    /// way: predict(perm(G), perm(f)) = perm(predict(G, f)).
    #[test]
    fn vertex_relabeling_permutes_the_prediction(
        perm_seed in 0u64..10_000,
        values in prop::collection::vec(0.0f64..10.0, 9),
    ) {
        let edges = featured_grid_edges();
        let graph = MeshGraph::with_features(9, &edges).unwrap();
        let model = QgnnModel::new_seeded(&[2, 3, 4], scaler(), 7).unwrap();
        let frame = NodeFrame::new(0, values.clone()).unwrap();
        let out = model_predict(&model, &graph, &frame).unwrap();

        let mut perm: Vec<usize> = (0..9).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(perm_seed));
        let perm_edges: Vec<(usize, usize, f64)> =
            edges.iter().map(|&(u, v, e)| (perm[u], perm[v], e)).collect();
        let perm_graph = MeshGraph::with_features(9, &perm_edges).unwrap();
        let mut perm_values = vec![0.0; 9];
        for v in 0..9 {
            perm_values[perm[v]] = values[v];
        }
        let perm_frame = NodeFrame::new(0, perm_values).unwrap();
        let perm_out = model_predict(&model, &perm_graph, &perm_frame).unwrap();

        for v in 0..9 {
            let a = out.values()[v];
            let b = perm_out.values()[perm[v]];
            prop_assert!((a - b).abs() < 1e-10, "vertex {v}: {a} vs {b}");
        }
    }

    /// Changing one vertex value only moves predictions inside its closed
    /// neighborhood; everything else stays bitwise identical.
    #[test]
    fn perturbations_stay_inside_the_one_hop_neighborhood(
        touched in 0usize..9,
        bump in 0.5f64..3.0,
        values in prop::collection::vec(0.0f64..7.0, 9),
    ) {
        let graph = build_grid_mesh(3, 3).unwrap();
        let model = QgnnModel::new_seeded(&[2, 3, 4], scaler(), 11).unwrap();
        let base = model_predict(&model, &graph, &NodeFrame::new(0, values.clone()).unwrap()).unwrap();

        let mut poked = values.clone();
        poked[touched] += bump;
        let out = model_predict(&model, &graph, &NodeFrame::new(0, poked).unwrap()).unwrap();

        for v in 0..9 {
            let inside = v == touched || graph.neighbors(v).contains(&touched);
            if !inside {
                prop_assert_eq!(out.values()[v], base.values()[v], "vertex {} moved", v);
            }
        }
        // The touched vertex itself must actually respond.
        prop_assert!(out.values()[touched] != base.values()[touched]);
    }
}
