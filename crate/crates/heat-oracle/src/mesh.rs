use std::collections::BTreeMap;

use crate::error::{HeatError, Result};

/// Largest vertex degree any consumer of these meshes supports; one qubit
/// per neighbor plus the root keeps circuit sizes bounded downstream.
pub const MAX_DEGREE: usize = 8;

/// Undirected graph over mesh vertices with per-edge features.
///
/// Edges are stored once as `(low, high)` pairs and mirrored into sorted
/// per-vertex adjacency lists, so iteration order is deterministic
/// everywhere. Grid-built meshes remember their dimensions for operations
/// that need coordinates (laser paths, file headers).
#[derive(Debug, Clone, PartialEq)]
pub struct MeshGraph {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
    edge_features: BTreeMap<(usize, usize), f64>,
    adjacency: Vec<Vec<usize>>,
    grid_dims: Option<(usize, usize)>,
}

impl MeshGraph {
    /// Builds a mesh from an undirected edge list with every edge feature
    /// set to 1.0.
    pub fn new(n_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let with_features: Vec<(usize, usize, f64)> =
            edges.iter().map(|&(v, w)| (v, w, 1.0)).collect();
        Self::with_features(n_vertices, &with_features)
    }

    /// Builds a mesh from `(v, w, feature)` triples. Edge direction is
    /// ignored; self-loops, duplicates, out-of-range vertices, and degrees
    /// above [`MAX_DEGREE`] are rejected.
    pub fn with_features(n_vertices: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut canonical = Vec::with_capacity(edges.len());
        let mut features = BTreeMap::new();
        let mut adjacency = vec![Vec::new(); n_vertices];
        for &(v, w, eps) in edges {
            for vertex in [v, w] {
                if vertex >= n_vertices {
                    return Err(HeatError::VertexOutOfRange { vertex, n_vertices });
                }
            }
            if v == w {
                return Err(HeatError::SelfLoop { vertex: v });
            }
            let key = (v.min(w), v.max(w));
            if features.insert(key, eps).is_some() {
                return Err(HeatError::DuplicateEdge { v: key.0, w: key.1 });
            }
            canonical.push(key);
            adjacency[v].push(w);
            adjacency[w].push(v);
        }
        canonical.sort_unstable();
        for (vertex, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if list.len() > MAX_DEGREE {
                return Err(HeatError::DegreeTooLarge {
                    vertex,
                    degree: list.len(),
                    max: MAX_DEGREE,
                });
            }
        }
        Ok(MeshGraph {
            n_vertices,
            edges: canonical,
            edge_features: features,
            adjacency,
            grid_dims: None,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Canonical `(low, high)` edge pairs in ascending order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Feature of the undirected edge `(v, w)`, if present.
    pub fn edge_feature(&self, v: usize, w: usize) -> Option<f64> {
        self.edge_features.get(&(v.min(w), v.max(w))).copied()
    }

    /// Grid dimensions `(nx, ny)` for meshes built by [`build_grid_mesh`].
    pub fn grid_dims(&self) -> Option<(usize, usize)> {
        self.grid_dims
    }
}

/// Index of grid node `(x, y)` with rows stored contiguously.
pub fn grid_index(nx: usize, x: usize, y: usize) -> usize {
    y * nx + x
}

/// Builds a 4-connected `nx` by `ny` grid mesh with unit edge features.
/// Corners have degree 2, non-corner boundary nodes 3, interior nodes 4.
pub fn build_grid_mesh(nx: usize, ny: usize) -> Result<MeshGraph> {
    if nx < 2 || ny < 2 {
        return Err(HeatError::GridTooSmall { nx, ny });
    }
    let mut edges = Vec::with_capacity(nx * (ny - 1) + ny * (nx - 1));
    for y in 0..ny {
        for x in 0..nx {
            if x + 1 < nx {
                edges.push((grid_index(nx, x, y), grid_index(nx, x + 1, y)));
            }
            if y + 1 < ny {
                edges.push((grid_index(nx, x, y), grid_index(nx, x, y + 1)));
            }
        }
    }
    let mut mesh = MeshGraph::new(nx * ny, &edges)?;
    mesh.grid_dims = Some((nx, ny));
    Ok(mesh)
}

/// Vertices on the outer boundary of an `nx` by `ny` grid, ascending.
pub fn perimeter_vertices(nx: usize, ny: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for y in 0..ny {
        for x in 0..nx {
            if x == 0 || y == 0 || x == nx - 1 || y == ny - 1 {
                out.push(grid_index(nx, x, y));
            }
        }
    }
    out
}
