use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HeatError, Result};
use crate::frame::NodeFrame;
use crate::mesh::{build_grid_mesh, MeshGraph};
use crate::scenario::{simulate, Boundary, HeatScenario, LaserPath};

pub const DATASET_FORMAT_VERSION: u32 = 1;

/// Consecutive-frame transition pairs from one simulation run, with a
/// seeded train/validation split and enough provenance to regenerate the
/// run exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatDataset {
    scenario: HeatScenario,
    seed: u64,
    steps: usize,
    val_fraction: f64,
    pairs: Vec<(NodeFrame, NodeFrame)>,
    train_indices: Vec<usize>,
    val_indices: Vec<usize>,
}

/// First line of the dataset file. Field order is fixed by this struct;
/// serialization goes through it so repeated writes are byte-identical.
#[derive(Serialize, Deserialize)]
struct DatasetHeader {
    format_version: u32,
    nx: usize,
    ny: usize,
    alpha_dt: f64,
    source_power: f64,
    /// One vertex index per step, -1 for laser off.
    path: Vec<i64>,
    boundary: Boundary,
    initial_temperature: f64,
    seed: u64,
    steps: usize,
    val_fraction: f64,
    train_indices: Vec<usize>,
    val_indices: Vec<usize>,
}

/// One line per transition pair: input frame at `t`, label frame at `t+1`.
#[derive(Serialize, Deserialize)]
struct PairRecord {
    t: usize,
    f: Vec<f64>,
    label: Vec<f64>,
}

/// Simulates `steps` transitions and splits the pair indices with a seeded
/// shuffle: the first `floor(val_fraction * steps)` shuffled indices become
/// the validation set. Both index lists are stored sorted.
pub fn generate_dataset(
    scenario: &HeatScenario,
    steps: usize,
    val_fraction: f64,
    seed: u64,
) -> Result<HeatDataset> {
    if !(0.0..1.0).contains(&val_fraction) {
        return Err(HeatError::BadValFraction(val_fraction));
    }
    let frames = simulate(scenario, steps)?;
    let pairs: Vec<(NodeFrame, NodeFrame)> = frames
        .windows(2)
        .map(|w| (w[0].clone(), w[1].clone()))
        .collect();

    let mut order: Vec<usize> = (0..steps).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let n_val = (val_fraction * steps as f64).floor() as usize;
    let mut val_indices: Vec<usize> = order[..n_val].to_vec();
    let mut train_indices: Vec<usize> = order[n_val..].to_vec();
    val_indices.sort_unstable();
    train_indices.sort_unstable();

    Ok(HeatDataset {
        scenario: scenario.clone(),
        seed,
        steps,
        val_fraction,
        pairs,
        train_indices,
        val_indices,
    })
}

impl HeatDataset {
    pub fn graph(&self) -> &MeshGraph {
        self.scenario.mesh()
    }

    pub fn scenario(&self) -> &HeatScenario {
        &self.scenario
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn pairs(&self) -> &[(NodeFrame, NodeFrame)] {
        &self.pairs
    }

    pub fn train_indices(&self) -> &[usize] {
        &self.train_indices
    }

    pub fn val_indices(&self) -> &[usize] {
        &self.val_indices
    }

    pub fn train_pairs(&self) -> Vec<(&NodeFrame, &NodeFrame)> {
        self.train_indices.iter().map(|&i| (&self.pairs[i].0, &self.pairs[i].1)).collect()
    }

    pub fn val_pairs(&self) -> Vec<(&NodeFrame, &NodeFrame)> {
        self.val_indices.iter().map(|&i| (&self.pairs[i].0, &self.pairs[i].1)).collect()
    }

    /// Writes the line-delimited dataset: a header object, then one
    /// `{t, f, label}` object per pair. Only grid-built meshes can be
    /// saved, since the header records grid dimensions.
    pub fn save<W: Write>(&self, mut out: W) -> Result<()> {
        let (nx, ny) = self.scenario.mesh().grid_dims().ok_or(HeatError::NotAGrid)?;
        let header = DatasetHeader {
            format_version: DATASET_FORMAT_VERSION,
            nx,
            ny,
            alpha_dt: self.scenario.alpha_dt(),
            source_power: self.scenario.source_power(),
            path: self.scenario.path().to_signed(),
            boundary: self.scenario.boundary().clone(),
            initial_temperature: self.scenario.initial_temperature(),
            seed: self.seed,
            steps: self.steps,
            val_fraction: self.val_fraction,
            train_indices: self.train_indices.clone(),
            val_indices: self.val_indices.clone(),
        };
        writeln!(out, "{}", to_json(&header)?)?;
        for (input, label) in &self.pairs {
            let record = PairRecord {
                t: input.timestamp(),
                f: input.values().to_vec(),
                label: label.values().to_vec(),
            };
            writeln!(out, "{}", to_json(&record)?)?;
        }
        Ok(())
    }

    pub fn save_to_path<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        self.save(&mut out)?;
        out.flush()?;
        Ok(())
    }

    /// Reads a file written by [`HeatDataset::save`], rebuilding the mesh
    /// and scenario from the header and validating every frame.
    pub fn load<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let (_, header_line) = lines.next().ok_or(HeatError::MissingHeader)?;
        let header: DatasetHeader = from_json(0, &header_line?)?;
        if header.format_version != DATASET_FORMAT_VERSION {
            return Err(HeatError::UnsupportedFormatVersion { found: header.format_version });
        }
        let mesh = build_grid_mesh(header.nx, header.ny)?;
        let n_vertices = mesh.n_vertices();
        let scenario = HeatScenario::new(
            mesh,
            header.alpha_dt,
            header.source_power,
            LaserPath::from_signed(&header.path),
            header.boundary,
            header.initial_temperature,
        )?;

        let mut pairs = Vec::with_capacity(header.steps);
        for (line_no, line) in lines {
            let record: PairRecord = from_json(line_no, &line?)?;
            for values in [&record.f, &record.label] {
                if values.len() != n_vertices {
                    return Err(HeatError::DatasetFormat {
                        line: line_no,
                        reason: format!(
                            "frame has {} values, mesh has {} vertices",
                            values.len(),
                            n_vertices
                        ),
                    });
                }
            }
            pairs.push((
                NodeFrame::new(record.t, record.f)?,
                NodeFrame::new(record.t + 1, record.label)?,
            ));
        }
        if pairs.len() != header.steps {
            return Err(HeatError::DatasetFormat {
                line: pairs.len(),
                reason: format!("expected {} pairs, found {}", header.steps, pairs.len()),
            });
        }
        Ok(HeatDataset {
            scenario,
            seed: header.seed,
            steps: header.steps,
            val_fraction: header.val_fraction,
            pairs,
            train_indices: header.train_indices,
            val_indices: header.val_indices,
        })
    }

    pub fn load_from_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::load(BufReader::new(File::open(path)?))
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string(value).map_err(|e| HeatError::DatasetFormat {
        line: 0,
        reason: e.to_string(),
    })
}

fn from_json<T: for<'de> Deserialize<'de>>(line: usize, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| HeatError::DatasetFormat {
        line,
        reason: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_grid_mesh;
    use crate::scenario::rect_laser_path;

    fn sample_scenario() -> HeatScenario {
        let mesh = build_grid_mesh(4, 4).unwrap();
        let path = rect_laser_path(&mesh, 0, 2, 2, 2).unwrap();
        HeatScenario::new(mesh, 0.15, 0.8, path, Boundary::Insulated, 1.0).unwrap()
    }

    #[test]
    fn step_count_fixes_pair_count_and_split_sizes() {
        let dataset = generate_dataset(&sample_scenario(), 10, 0.2, 42).unwrap();
        assert_eq!(dataset.pairs().len(), 10);
        assert_eq!(dataset.train_indices().len(), 8);
        assert_eq!(dataset.val_indices().len(), 2);
        assert_eq!(dataset.train_pairs().len(), 8);
    }

    #[test]
    fn split_is_disjoint_and_covering() {
        let dataset = generate_dataset(&sample_scenario(), 13, 0.3, 7).unwrap();
        let mut all: Vec<usize> = dataset
            .train_indices()
            .iter()
            .chain(dataset.val_indices())
            .copied()
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..13).collect::<Vec<_>>());
    }

    #[test]
    fn identical_seeds_give_identical_splits() {
        let a = generate_dataset(&sample_scenario(), 16, 0.25, 99).unwrap();
        let b = generate_dataset(&sample_scenario(), 16, 0.25, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pairs_chain_consecutive_frames() {
        let dataset = generate_dataset(&sample_scenario(), 5, 0.0, 1).unwrap();
        for (i, (input, label)) in dataset.pairs().iter().enumerate() {
            assert_eq!(input.timestamp(), i);
            assert_eq!(label.timestamp(), i + 1);
        }
        assert_eq!(dataset.val_indices(), &[] as &[usize]);
    }

    #[test]
    fn invalid_val_fraction_is_rejected() {
        assert_eq!(
            generate_dataset(&sample_scenario(), 5, 1.0, 0).unwrap_err(),
            HeatError::BadValFraction(1.0)
        );
    }

    #[test]
    fn save_load_round_trips_bitwise() {
        let dataset = generate_dataset(&sample_scenario(), 12, 0.25, 5).unwrap();
        let mut buffer = Vec::new();
        dataset.save(&mut buffer).unwrap();
        let loaded = HeatDataset::load(&buffer[..]).unwrap();
        assert_eq!(loaded, dataset);
    }

    #[test]
    fn repeated_saves_are_byte_identical() {
        let first = {
            let mut buf = Vec::new();
            generate_dataset(&sample_scenario(), 12, 0.25, 5).unwrap().save(&mut buf).unwrap();
            buf
        };
        let second = {
            let mut buf = Vec::new();
            generate_dataset(&sample_scenario(), 12, 0.25, 5).unwrap().save(&mut buf).unwrap();
            buf
        };
        assert_eq!(first, second);
    }

    #[test]
    fn unsupported_format_version_is_rejected() {
        let dataset = generate_dataset(&sample_scenario(), 3, 0.0, 5).unwrap();
        let mut buffer = Vec::new();
        dataset.save(&mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        let tampered = text.replacen("\"format_version\":1", "\"format_version\":9", 1);
        assert_eq!(
            HeatDataset::load(tampered.as_bytes()).unwrap_err(),
            HeatError::UnsupportedFormatVersion { found: 9 }
        );
    }

    #[test]
    fn truncated_files_are_rejected() {
        let dataset = generate_dataset(&sample_scenario(), 3, 0.0, 5).unwrap();
        let mut buffer = Vec::new();
        dataset.save(&mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        let truncated: String = text.lines().take(3).map(|l| format!("{l}\n")).collect();
        assert!(matches!(
            HeatDataset::load(truncated.as_bytes()).unwrap_err(),
            HeatError::DatasetFormat { .. }
        ));
        assert_eq!(HeatDataset::load(&b""[..]).unwrap_err(), HeatError::MissingHeader);
    }

    #[test]
    fn files_round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pairs.jsonl");
        let dataset = generate_dataset(&sample_scenario(), 6, 0.5, 8).unwrap();
        dataset.save_to_path(&path).unwrap();
        assert_eq!(HeatDataset::load_from_path(&path).unwrap(), dataset);
    }
}
