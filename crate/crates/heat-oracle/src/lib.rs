//! Explicit heat diffusion on mesh graphs with a moving laser source.
//!
//! The mesh is an undirected graph with per-edge features; temperature
//! frames evolve by a first-order graph-Laplacian update controlled by the
//! single dimensionless number `alpha_dt`, with the laser as an additive
//! nodal source. Construction-time stability checking (`alpha_dt *
//! max_degree < 1`) makes insulated runs conserve total heat and obey the
//! discrete maximum principle, which is what qualifies this integrator as
//! the ground truth for surrogate training. [`generate_dataset`] packages a
//! run into consecutive-frame pairs with a seeded train/validation split
//! and a line-delimited file format.
//!
//! Temperatures are in arbitrary normalized units; no material model is
//! attached.

mod dataset;
mod error;
mod frame;
mod mesh;
mod scenario;

pub use dataset::{generate_dataset, HeatDataset, DATASET_FORMAT_VERSION};
pub use error::{HeatError, Result};
pub use frame::NodeFrame;
pub use mesh::{build_grid_mesh, grid_index, perimeter_vertices, MeshGraph, MAX_DEGREE};
pub use scenario::{
    diffusion_step, rect_laser_path, simulate, Boundary, HeatScenario, LaserPath,
};
