use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use heat_oracle::MAX_DEGREE;
use qsim_core::{Angle, Circuit, Gate, Observable, Statevector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QgnnError, Result};
use crate::scaler::Scaler;

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Slot names of the trainable circuit parameters; gradient maps and
/// bindings are keyed by these.
pub const SLOT_THETA_N: &str = "theta_n";
pub const SLOT_THETA_E: &str = "theta_e";
pub const SLOT_GAMMA: &str = "gamma";

/// Trainable parameters shared by every vertex of one degree: three circuit
/// angles and the affine readout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeParams {
    /// Offset added to each neighbor encoding rotation.
    pub theta_n: f64,
    /// Base angle of the neighbor-to-root entangling rotations.
    pub theta_e: f64,
    /// Edge-feature gain: the entangler angle grows by `gamma * eps` per
    /// unit of edge feature.
    pub gamma: f64,
    pub decode_gain: f64,
    pub decode_bias: f64,
}

impl DegreeParams {
    pub fn zero() -> Self {
        DegreeParams { theta_n: 0.0, theta_e: 0.0, gamma: 0.0, decode_gain: 0.0, decode_bias: 0.0 }
    }

    /// Circuit bindings for the three angle slots.
    pub fn bindings(&self) -> HashMap<String, f64> {
        HashMap::from([
            (SLOT_THETA_N.to_string(), self.theta_n),
            (SLOT_THETA_E.to_string(), self.theta_e),
            (SLOT_GAMMA.to_string(), self.gamma),
        ])
    }

    pub(crate) fn scale_in_place(&mut self, s: f64) {
        self.theta_n *= s;
        self.theta_e *= s;
        self.gamma *= s;
        self.decode_gain *= s;
        self.decode_bias *= s;
    }

    /// `self += a * other`, elementwise over all five parameters.
    pub(crate) fn add_scaled(&mut self, a: f64, other: &DegreeParams) {
        self.theta_n += a * other.theta_n;
        self.theta_e += a * other.theta_e;
        self.gamma += a * other.gamma;
        self.decode_gain += a * other.decode_gain;
        self.decode_bias += a * other.decode_bias;
    }
}

/// Degree-keyed circuit surrogate: one parameter set per supported vertex
/// degree plus the feature scaler all of them share.
#[derive(Debug, Clone, PartialEq)]
pub struct QgnnModel {
    degree_params: BTreeMap<usize, DegreeParams>,
    scaler: Scaler,
}

impl QgnnModel {
    /// Seeded initialization: every angle drawn uniformly from
    /// `[-0.1, 0.1)` (degrees in ascending order, three draws each),
    /// readout gain 1 and bias 0.
    pub fn new_seeded(degrees: &[usize], scaler: Scaler, seed: u64) -> Result<Self> {
        let mut sorted: Vec<usize> = degrees.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut degree_params = BTreeMap::new();
        for &degree in &sorted {
            if degree > MAX_DEGREE {
                return Err(QgnnError::UnsupportedDegree { degree });
            }
            let params = DegreeParams {
                theta_n: rng.gen_range(-0.1..0.1),
                theta_e: rng.gen_range(-0.1..0.1),
                gamma: rng.gen_range(-0.1..0.1),
                decode_gain: 1.0,
                decode_bias: 0.0,
            };
            degree_params.insert(degree, params);
        }
        Ok(QgnnModel { degree_params, scaler })
    }

    pub fn from_parts(degree_params: BTreeMap<usize, DegreeParams>, scaler: Scaler) -> Result<Self> {
        for &degree in degree_params.keys() {
            if degree > MAX_DEGREE {
                return Err(QgnnError::UnsupportedDegree { degree });
            }
        }
        Ok(QgnnModel { degree_params, scaler })
    }

    pub fn degree_set(&self) -> Vec<usize> {
        self.degree_params.keys().copied().collect()
    }

    pub fn supports(&self, degree: usize) -> bool {
        self.degree_params.contains_key(&degree)
    }

    pub fn params(&self, degree: usize) -> Result<&DegreeParams> {
        self.degree_params.get(&degree).ok_or(QgnnError::UnsupportedDegree { degree })
    }

    pub(crate) fn params_mut(&mut self, degree: usize) -> &mut DegreeParams {
        // Training only touches degrees the model was built with.
        self.degree_params.get_mut(&degree).expect("degree checked at model construction")
    }

    pub fn scaler(&self) -> &Scaler {
        &self.scaler
    }

    /// Writes the model as versioned JSON with full-precision parameters.
    pub fn save<W: Write>(&self, mut out: W) -> Result<()> {
        let file = ModelFile {
            format_version: MODEL_FORMAT_VERSION,
            degrees: self
                .degree_params
                .iter()
                .map(|(&degree, p)| DegreeRecord {
                    degree,
                    theta_n: p.theta_n,
                    theta_e: p.theta_e,
                    gamma: p.gamma,
                    decode_gain: p.decode_gain,
                    decode_bias: p.decode_bias,
                })
                .collect(),
            scaler: ScalerRecord { f_min: self.scaler.f_min(), f_max: self.scaler.f_max() },
        };
        let text = serde_json::to_string_pretty(&file)
            .map_err(|e| QgnnError::ModelFormat(e.to_string()))?;
        out.write_all(text.as_bytes())?;
        out.write_all(b"\n")?;
        Ok(())
    }

    pub fn save_to_path<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        self.save(&mut out)?;
        out.flush()?;
        Ok(())
    }

    pub fn load<R: Read>(reader: R) -> Result<Self> {
        let file: ModelFile = serde_json::from_reader(reader)
            .map_err(|e| QgnnError::ModelFormat(e.to_string()))?;
        if file.format_version != MODEL_FORMAT_VERSION {
            return Err(QgnnError::UnsupportedFormatVersion { found: file.format_version });
        }
        let mut degree_params = BTreeMap::new();
        for r in file.degrees {
            let params = DegreeParams {
                theta_n: r.theta_n,
                theta_e: r.theta_e,
                gamma: r.gamma,
                decode_gain: r.decode_gain,
                decode_bias: r.decode_bias,
            };
            if degree_params.insert(r.degree, params).is_some() {
                return Err(QgnnError::ModelFormat(format!(
                    "degree {} appears twice",
                    r.degree
                )));
            }
        }
        let scaler = Scaler::new(file.scaler.f_min, file.scaler.f_max)?;
        Self::from_parts(degree_params, scaler)
    }

    pub fn load_from_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::load(BufReader::new(File::open(path)?))
    }
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    degrees: Vec<DegreeRecord>,
    scaler: ScalerRecord,
}

#[derive(Serialize, Deserialize)]
struct DegreeRecord {
    degree: usize,
    theta_n: f64,
    theta_e: f64,
    gamma: f64,
    decode_gain: f64,
    decode_bias: f64,
}

#[derive(Serialize, Deserialize)]
struct ScalerRecord {
    f_min: f64,
    f_max: f64,
}

/// Star-graph circuit of one vertex: the root on qubit 0 encoded as
/// `RY(pi * x_root)`, neighbor `k` on qubit `k` encoded as
/// `RY(pi * x_rel_k + theta_n)`, then per neighbor a pair of controlled
/// Y-rotations `CRY(theta_e)` and `CRY(gamma * eps_k)` from qubit `k` onto
/// the root. The pair composes to a single `CRY(theta_e + gamma * eps_k)`
/// (equal-axis controlled rotations add), split so each gate is affine in
/// exactly one trainable slot for the shift rule. All entanglers target the
/// root along the same axis, so they commute and neighbor order is
/// irrelevant.
pub fn build_submodel_circuit(
    degree: usize,
    x_root: f64,
    x_rel: &[f64],
    eps: &[f64],
) -> Result<Circuit> {
    if degree > MAX_DEGREE {
        return Err(QgnnError::UnsupportedDegree { degree });
    }
    if x_rel.len() != degree || eps.len() != degree {
        return Err(QgnnError::NeighborCountMismatch {
            expected: degree,
            got: x_rel.len().max(eps.len()),
        });
    }
    let mut circuit = Circuit::new(degree + 1)?;
    circuit.push(Gate::ry(0, Angle::Fixed(PI * x_root)))?;
    for (k, &x) in x_rel.iter().enumerate() {
        let slot = circuit.slot(SLOT_THETA_N);
        circuit.push(Gate::ry(k + 1, Angle::Param { slot, scale: 1.0, offset: PI * x }))?;
    }
    for (k, &e) in eps.iter().enumerate() {
        let te = circuit.slot(SLOT_THETA_E);
        circuit.push(Gate::cry(k + 1, 0, Angle::Param { slot: te, scale: 1.0, offset: 0.0 }))?;
        let g = circuit.slot(SLOT_GAMMA);
        circuit.push(Gate::cry(k + 1, 0, Angle::Param { slot: g, scale: e, offset: 0.0 }))?;
    }
    Ok(circuit)
}

/// Root-qubit observable of a submodel circuit.
pub(crate) fn root_observable(circuit: &Circuit) -> Observable {
    Observable::single_z(0, circuit.n_qubits())
}

/// Expectation of Z on the root after running the circuit from the all-zero
/// state.
pub(crate) fn submodel_z(circuit: &Circuit, bindings: &HashMap<String, f64>) -> Result<f64> {
    let initial = Statevector::basis(circuit.n_qubits(), 0)?;
    let state = circuit.run(bindings, &initial)?;
    Ok(state.expectation(&root_observable(circuit))?)
}

/// Encoded inputs of one vertex: the absolute scaled root value and, per
/// neighbor, the symmetrically scaled temperature difference mapped into
/// `[0, 1]`.
pub(crate) fn encode_inputs(
    scaler: &Scaler,
    f_root: f64,
    f_neighbors: &[f64],
) -> Result<(f64, Vec<f64>)> {
    if !f_root.is_finite() {
        return Err(QgnnError::NonFiniteInput(f_root));
    }
    let x_root = scaler.scale(f_root);
    let mut x_rel = Vec::with_capacity(f_neighbors.len());
    for &f in f_neighbors {
        if !f.is_finite() {
            return Err(QgnnError::NonFiniteInput(f));
        }
        x_rel.push((scaler.scale_sym(f - f_root) + 1.0) / 2.0);
    }
    Ok((x_root, x_rel))
}

/// The readout `D`: an affine map on the root expectation composed with the
/// inverse scaler. With gain 1 and bias 0 it maps `z = 1` to `f_min` and
/// `z = -1` to `f_max`.
pub(crate) fn decode(scaler: &Scaler, params: &DegreeParams, z: f64) -> f64 {
    scaler.invert((1.0 - (params.decode_gain * z + params.decode_bias)) / 2.0)
}

/// Prediction of a single star subgraph: scale, run, read out.
pub fn submodel_predict(
    model: &QgnnModel,
    degree: usize,
    f_root: f64,
    f_neighbors: &[f64],
    eps: &[f64],
) -> Result<f64> {
    let params = model.params(degree)?;
    let (x_root, x_rel) = encode_inputs(model.scaler(), f_root, f_neighbors)?;
    let circuit = build_submodel_circuit(degree, x_root, &x_rel, eps)?;
    let z = submodel_z(&circuit, &params.bindings())?;
    Ok(decode(model.scaler(), params, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit_scaler() -> Scaler {
        Scaler::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn seeded_initialization_is_deterministic_and_bounded() {
        let a = QgnnModel::new_seeded(&[2, 3, 4], unit_scaler(), 7).unwrap();
        let b = QgnnModel::new_seeded(&[4, 2, 3, 3], unit_scaler(), 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.degree_set(), vec![2, 3, 4]);
        for &d in &[2, 3, 4] {
            let p = a.params(d).unwrap();
            assert!(p.theta_n.abs() < 0.1 && p.theta_e.abs() < 0.1 && p.gamma.abs() < 0.1);
            assert_eq!(p.decode_gain, 1.0);
            assert_eq!(p.decode_bias, 0.0);
        }
        let c = QgnnModel::new_seeded(&[2, 3, 4], unit_scaler(), 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn degree_cap_applies_to_models() {
        assert_eq!(
            QgnnModel::new_seeded(&[9], unit_scaler(), 0).unwrap_err(),
            QgnnError::UnsupportedDegree { degree: 9 }
        );
    }

    #[test]
    fn isolated_vertex_circuit_is_one_rotation() {
        let circuit = build_submodel_circuit(0, 0.3, &[], &[]).unwrap();
        assert_eq!(circuit.n_qubits(), 1);
        let z = submodel_z(&circuit, &DegreeParams::zero().bindings()).unwrap();
        assert_abs_diff_eq!(z, (PI * 0.3).cos(), epsilon = 1e-12);
    }

    #[test]
    fn zero_parameters_reduce_to_the_root_rotation() {
        // With all angles zero and eps zero the entanglers are identities.
        let circuit = build_submodel_circuit(3, 0.7, &[0.2, 0.9, 0.5], &[0.0, 0.0, 0.0]).unwrap();
        let z = submodel_z(&circuit, &DegreeParams::zero().bindings()).unwrap();
        assert_abs_diff_eq!(z, (PI * 0.7).cos(), epsilon = 1e-12);
    }

    #[test]
    fn swapped_neighbors_give_the_same_state() {
        let params = DegreeParams {
            theta_n: 0.4,
            theta_e: -0.3,
            gamma: 0.8,
            decode_gain: 1.0,
            decode_bias: 0.0,
        };
        let a = build_submodel_circuit(2, 0.25, &[0.1, 0.8], &[1.0, 0.3]).unwrap();
        let b = build_submodel_circuit(2, 0.25, &[0.8, 0.1], &[0.3, 1.0]).unwrap();
        let za = submodel_z(&a, &params.bindings()).unwrap();
        let zb = submodel_z(&b, &params.bindings()).unwrap();
        assert_abs_diff_eq!(za, zb, epsilon = 1e-12);
    }

    #[test]
    fn default_readout_prediction_has_closed_form() {
        let scaler = Scaler::new(-2.0, 6.0).unwrap();
        let model = QgnnModel::from_parts(
            [(0, DegreeParams { theta_n: 0.0, theta_e: 0.0, gamma: 0.0, decode_gain: 1.0, decode_bias: 0.0 })]
                .into(),
            scaler,
        )
        .unwrap();
        for f in [-2.0, 0.0, 1.5, 6.0] {
            let x = scaler.scale(f);
            let expected = scaler.invert((1.0 - (PI * x).cos()) / 2.0);
            let got = submodel_predict(&model, 0, f, &[], &[]).unwrap();
            assert_abs_diff_eq!(got, expected, epsilon = 1e-12);
            assert!((scaler.f_min()..=scaler.f_max()).contains(&got));
        }
    }

    #[test]
    fn equal_neighbor_temperatures_are_permutation_blind() {
        let model = QgnnModel::new_seeded(&[3], Scaler::new(0.0, 10.0).unwrap(), 3).unwrap();
        let base = submodel_predict(&model, 3, 4.0, &[4.0, 4.0, 4.0], &[1.0, 1.0, 1.0]).unwrap();
        let swapped = submodel_predict(&model, 3, 4.0, &[4.0, 4.0, 4.0], &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(base, swapped);
        assert!(base.is_finite());
    }

    #[test]
    fn unsupported_degree_is_reported() {
        let model = QgnnModel::new_seeded(&[2], unit_scaler(), 0).unwrap();
        assert_eq!(
            submodel_predict(&model, 3, 0.5, &[0.1, 0.2, 0.3], &[1.0, 1.0, 1.0]).unwrap_err(),
            QgnnError::UnsupportedDegree { degree: 3 }
        );
    }

    #[test]
    fn model_files_round_trip_bitwise() {
        let model = QgnnModel::new_seeded(&[0, 2, 4], Scaler::new(-1.5, 3.25).unwrap(), 11).unwrap();
        let mut buffer = Vec::new();
        model.save(&mut buffer).unwrap();
        let loaded = QgnnModel::load(&buffer[..]).unwrap();
        assert_eq!(loaded, model);

        let mut again = Vec::new();
        loaded.save(&mut again).unwrap();
        assert_eq!(buffer, again);
    }

    #[test]
    fn model_file_version_is_checked() {
        let model = QgnnModel::new_seeded(&[2], unit_scaler(), 1).unwrap();
        let mut buffer = Vec::new();
        model.save(&mut buffer).unwrap();
        let tampered =
            String::from_utf8(buffer).unwrap().replacen("\"format_version\": 1", "\"format_version\": 3", 1);
        assert_eq!(
            QgnnModel::load(tampered.as_bytes()).unwrap_err(),
            QgnnError::UnsupportedFormatVersion { found: 3 }
        );
    }

    #[test]
    fn files_round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        let model = QgnnModel::new_seeded(&[1, 2], unit_scaler(), 5).unwrap();
        model.save_to_path(&path).unwrap();
        assert_eq!(QgnnModel::load_from_path(&path).unwrap(), model);
    }
}
