use serde::{Deserialize, Serialize};

use crate::error::{HeatError, Result};
use crate::frame::NodeFrame;
use crate::mesh::{grid_index, MeshGraph};

/// Laser position per time step; `None` means the laser is off that step.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaserPath {
    positions: Vec<Option<usize>>,
}

impl LaserPath {
    pub fn new(positions: Vec<Option<usize>>) -> Self {
        LaserPath { positions }
    }

    /// Laser switched off for `steps` steps.
    pub fn off(steps: usize) -> Self {
        LaserPath { positions: vec![None; steps] }
    }

    /// Laser parked on one vertex for `steps` steps.
    pub fn constant(vertex: usize, steps: usize) -> Self {
        LaserPath { positions: vec![Some(vertex); steps] }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Option<usize>] {
        &self.positions
    }

    /// Laser vertex at `step`; off past the end of the recorded path.
    pub fn position_at(&self, step: usize) -> Option<usize> {
        self.positions.get(step).copied().flatten()
    }

    /// File encoding: one integer per step, -1 for off.
    pub fn to_signed(&self) -> Vec<i64> {
        self.positions.iter().map(|p| p.map_or(-1, |v| v as i64)).collect()
    }

    pub fn from_signed(encoded: &[i64]) -> Self {
        LaserPath {
            positions: encoded
                .iter()
                .map(|&v| if v < 0 { None } else { Some(v as usize) })
                .collect(),
        }
    }
}

/// Boundary condition applied after every update step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Boundary {
    /// No-flux boundary; the graph Laplacian already encodes it.
    Insulated,
    /// Listed vertices re-pinned to `value` after each step.
    Fixed { value: f64, vertices: Vec<usize> },
}

/// One laser-heating simulation setup: mesh, discretization number,
/// source, path, boundary handling, and the uniform initial temperature.
///
/// Construction enforces the explicit-update stability bound
/// `alpha_dt * max_degree < 1`, so stepping never needs to re-check it.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatScenario {
    mesh: MeshGraph,
    alpha_dt: f64,
    source_power: f64,
    path: LaserPath,
    boundary: Boundary,
    initial_temperature: f64,
}

impl HeatScenario {
    pub fn new(
        mesh: MeshGraph,
        alpha_dt: f64,
        source_power: f64,
        path: LaserPath,
        boundary: Boundary,
        initial_temperature: f64,
    ) -> Result<Self> {
        if alpha_dt < 0.0 {
            return Err(HeatError::NegativeAlpha(alpha_dt));
        }
        let max_degree = mesh.max_degree();
        if alpha_dt * max_degree as f64 >= 1.0 {
            return Err(HeatError::Unstable { alpha_dt, max_degree });
        }
        if source_power < 0.0 {
            return Err(HeatError::NegativeSourcePower(source_power));
        }
        let n_vertices = mesh.n_vertices();
        for position in path.positions() {
            if let Some(vertex) = *position {
                if vertex >= n_vertices {
                    return Err(HeatError::VertexOutOfRange { vertex, n_vertices });
                }
            }
        }
        if let Boundary::Fixed { vertices, .. } = &boundary {
            for &vertex in vertices {
                if vertex >= n_vertices {
                    return Err(HeatError::VertexOutOfRange { vertex, n_vertices });
                }
            }
        }
        Ok(HeatScenario { mesh, alpha_dt, source_power, path, boundary, initial_temperature })
    }

    pub fn mesh(&self) -> &MeshGraph {
        &self.mesh
    }

    pub fn alpha_dt(&self) -> f64 {
        self.alpha_dt
    }

    pub fn source_power(&self) -> f64 {
        self.source_power
    }

    pub fn path(&self) -> &LaserPath {
        &self.path
    }

    pub fn boundary(&self) -> &Boundary {
        &self.boundary
    }

    pub fn initial_temperature(&self) -> f64 {
        self.initial_temperature
    }

    /// Uniform starting frame with fixed-boundary vertices already pinned,
    /// so frame 0 satisfies the same boundary condition as every later one.
    pub fn initial_frame(&self) -> Result<NodeFrame> {
        let mut values = vec![self.initial_temperature; self.mesh.n_vertices()];
        pin_boundary(&mut values, &self.boundary);
        NodeFrame::new(0, values)
    }
}

fn pin_boundary(values: &mut [f64], boundary: &Boundary) {
    if let Boundary::Fixed { value, vertices } = boundary {
        for &v in vertices {
            values[v] = *value;
        }
    }
}

/// One explicit Euler step of graph-Laplacian diffusion plus the laser
/// source: `f_v' = f_v + alpha_dt * sum_w (f_w - f_v) + s * [laser on v]`,
/// followed by boundary re-pinning.
pub fn diffusion_step(
    frame: &NodeFrame,
    scenario: &HeatScenario,
    step_index: usize,
) -> Result<NodeFrame> {
    let n = scenario.mesh.n_vertices();
    if frame.len() != n {
        return Err(HeatError::FrameSizeMismatch { expected: n, got: frame.len() });
    }
    let values = frame.values();
    let source_vertex = scenario.path.position_at(step_index);
    let mut next = Vec::with_capacity(n);
    for v in 0..n {
        let fv = values[v];
        let mut exchange = 0.0;
        for &w in scenario.mesh.neighbors(v) {
            exchange += values[w] - fv;
        }
        let mut updated = fv + scenario.alpha_dt * exchange;
        if source_vertex == Some(v) {
            updated += scenario.source_power;
        }
        next.push(updated);
    }
    pin_boundary(&mut next, &scenario.boundary);
    NodeFrame::new(frame.timestamp() + 1, next)
}

/// Runs `steps` updates from the uniform initial frame and returns all
/// `steps + 1` frames. A non-empty laser path must cover every requested
/// step.
pub fn simulate(scenario: &HeatScenario, steps: usize) -> Result<Vec<NodeFrame>> {
    if !scenario.path.is_empty() && steps > scenario.path.len() {
        return Err(HeatError::PathTooShort { steps, path_len: scenario.path.len() });
    }
    let mut frames = Vec::with_capacity(steps + 1);
    frames.push(scenario.initial_frame()?);
    for step in 0..steps {
        let next = diffusion_step(frames.last().unwrap(), scenario, step)?;
        frames.push(next);
    }
    Ok(frames)
}

/// Rectangular cutting contour on a grid mesh: a clockwise perimeter loop
/// starting at `start` (the top-left corner), with each vertex repeated
/// `dwell` consecutive steps. `rect_width` and `rect_height` count cells,
/// so the loop visits `2 * (rect_width + rect_height)` distinct vertices.
pub fn rect_laser_path(
    mesh: &MeshGraph,
    start: usize,
    rect_width: usize,
    rect_height: usize,
    dwell: usize,
) -> Result<LaserPath> {
    let (nx, ny) = mesh.grid_dims().ok_or(HeatError::NotAGrid)?;
    if start >= mesh.n_vertices() {
        return Err(HeatError::VertexOutOfRange { vertex: start, n_vertices: mesh.n_vertices() });
    }
    if rect_width == 0 || rect_height == 0 {
        return Err(HeatError::EmptyRect);
    }
    if dwell == 0 {
        return Err(HeatError::ZeroDwell);
    }
    let (x0, y0) = (start % nx, start / nx);
    if x0 + rect_width > nx - 1 || y0 + rect_height > ny - 1 {
        return Err(HeatError::RectOutOfBounds {
            x0,
            y0,
            width: rect_width,
            height: rect_height,
            nx,
            ny,
        });
    }
    let (x1, y1) = (x0 + rect_width, y0 + rect_height);
    let mut corners = Vec::with_capacity(2 * (rect_width + rect_height));
    for x in x0..x1 {
        corners.push((x, y0));
    }
    for y in y0..y1 {
        corners.push((x1, y));
    }
    for x in ((x0 + 1)..=x1).rev() {
        corners.push((x, y1));
    }
    for y in ((y0 + 1)..=y1).rev() {
        corners.push((x0, y));
    }
    let mut positions = Vec::with_capacity(corners.len() * dwell);
    for (x, y) in corners {
        let vertex = grid_index(nx, x, y);
        positions.extend(std::iter::repeat(Some(vertex)).take(dwell));
    }
    Ok(LaserPath::new(positions))
}
