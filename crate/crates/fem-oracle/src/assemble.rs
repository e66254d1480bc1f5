use nalgebra::DMatrix;

use crate::error::{FemError, Result};
use crate::matrices::FemMatrices;

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0) {
        return Err(FemError::NonPositiveParameter { name, value });
    }
    Ok(())
}

/// Assembles an axial bar of `n_elements` equal two-node elements with
/// consistent mass.
///
/// Per element of length `h = length / n_elements`:
/// stiffness `(E*A/h) * [[1,-1],[-1,1]]`, mass `(rho*A*h/6) * [[2,1],[1,2]]`.
/// With `fixed_left` the clamped node's row and column are removed, leaving
/// `n_elements` free DOFs; otherwise all `n_elements + 1` nodes remain and
/// the stiffness is singular (one rigid translation).
pub fn assemble_bar(
    n_elements: usize,
    youngs_modulus: f64,
    area: f64,
    density: f64,
    length: f64,
    fixed_left: bool,
) -> Result<FemMatrices> {
    if n_elements < 1 {
        return Err(FemError::TooFewElements);
    }
    require_positive("youngs_modulus", youngs_modulus)?;
    require_positive("area", area)?;
    require_positive("density", density)?;
    require_positive("length", length)?;

    let h = length / n_elements as f64;
    let k_scale = youngs_modulus * area / h;
    let m_scale = density * area * h / 6.0;

    let n_nodes = n_elements + 1;
    let mut stiffness = DMatrix::zeros(n_nodes, n_nodes);
    let mut mass = DMatrix::zeros(n_nodes, n_nodes);
    for e in 0..n_elements {
        let (a, b) = (e, e + 1);
        stiffness[(a, a)] += k_scale;
        stiffness[(b, b)] += k_scale;
        stiffness[(a, b)] -= k_scale;
        stiffness[(b, a)] -= k_scale;
        mass[(a, a)] += 2.0 * m_scale;
        mass[(b, b)] += 2.0 * m_scale;
        mass[(a, b)] += m_scale;
        mass[(b, a)] += m_scale;
    }

    if fixed_left {
        stiffness = stiffness.remove_row(0).remove_column(0);
        mass = mass.remove_row(0).remove_column(0);
    }
    FemMatrices::new(mass, stiffness)
}

/// Assembles a rectangular grid membrane with lumped masses and one spring
/// per grid edge.
///
/// The stiffness is `stiffness_per_edge` times the graph Laplacian of the
/// `nx` by `ny` grid, the mass is `mass_per_node` on the diagonal. With
/// `clamped_boundary` every perimeter node is removed, which requires at
/// least one interior node (`nx, ny >= 3`). Node `(x, y)` maps to index
/// `y * nx + x`. `spacing` is the grid pitch; it scales no matrix entry but
/// is validated so geometry stays physically meaningful.
pub fn assemble_membrane(
    nx: usize,
    ny: usize,
    spacing: f64,
    mass_per_node: f64,
    stiffness_per_edge: f64,
    clamped_boundary: bool,
) -> Result<FemMatrices> {
    if nx < 2 || ny < 2 {
        return Err(FemError::GridTooSmall {
            nx,
            ny,
            reason: "a membrane needs at least a 2x2 grid",
        });
    }
    if clamped_boundary && (nx < 3 || ny < 3) {
        return Err(FemError::GridTooSmall {
            nx,
            ny,
            reason: "clamping the boundary leaves no interior node",
        });
    }
    require_positive("spacing", spacing)?;
    require_positive("mass_per_node", mass_per_node)?;
    require_positive("stiffness_per_edge", stiffness_per_edge)?;

    let n = nx * ny;
    let mut stiffness = DMatrix::zeros(n, n);
    let index = |x: usize, y: usize| y * nx + x;
    for y in 0..ny {
        for x in 0..nx {
            let v = index(x, y);
            if x + 1 < nx {
                let w = index(x + 1, y);
                stiffness[(v, v)] += stiffness_per_edge;
                stiffness[(w, w)] += stiffness_per_edge;
                stiffness[(v, w)] -= stiffness_per_edge;
                stiffness[(w, v)] -= stiffness_per_edge;
            }
            if y + 1 < ny {
                let w = index(x, y + 1);
                stiffness[(v, v)] += stiffness_per_edge;
                stiffness[(w, w)] += stiffness_per_edge;
                stiffness[(v, w)] -= stiffness_per_edge;
                stiffness[(w, v)] -= stiffness_per_edge;
            }
        }
    }
    let mut mass = DMatrix::from_diagonal_element(n, n, mass_per_node);

    if clamped_boundary {
        // Remove from the highest index down so earlier removals do not
        // shift the positions still pending.
        for v in (0..n).rev() {
            let (x, y) = (v % nx, v / nx);
            if x == 0 || x == nx - 1 || y == 0 || y == ny - 1 {
                stiffness = stiffness.remove_row(v).remove_column(v);
                mass = mass.remove_row(v).remove_column(v);
            }
        }
    }
    FemMatrices::new(mass, stiffness)
}
