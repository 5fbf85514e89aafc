//! Lagrange shape functions on a triangle, written in barycentric
//! coordinates.
//!
//! Local node order: the three vertices, then the nodes of edges
//! (0,1), (1,2), (2,0) (for P3 the node nearer the first vertex of the edge
//! comes first), then the P3 centroid.

use super::Degree;

/// Maximum number of local shape functions (P3).
pub const MAX_LOCAL: usize = 10;

const LOCAL_EDGES: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];

/// Barycentric coordinates of the local nodes.
pub fn local_nodes(degree: Degree) -> Vec<[f64; 3]> {
    let mut nodes = vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    match degree {
        Degree::P1 => {}
        Degree::P2 => {
            for (i, j) in LOCAL_EDGES {
                let mut l = [0.0; 3];
                l[i] = 0.5;
                l[j] = 0.5;
                nodes.push(l);
            }
        }
        Degree::P3 => {
            for (i, j) in LOCAL_EDGES {
                for (a, b) in [(2.0 / 3.0, 1.0 / 3.0), (1.0 / 3.0, 2.0 / 3.0)] {
                    let mut l = [0.0; 3];
                    l[i] = a;
                    l[j] = b;
                    nodes.push(l);
                }
            }
            nodes.push([1.0 / 3.0; 3]);
        }
    }
    nodes
}

/// Shape function values at barycentric point `l`.
pub fn values(degree: Degree, l: [f64; 3], out: &mut [f64; MAX_LOCAL]) {
    match degree {
        Degree::P1 => out[..3].copy_from_slice(&l),
        Degree::P2 => {
            for i in 0..3 {
                out[i] = l[i] * (2.0 * l[i] - 1.0);
            }
            for (k, (i, j)) in LOCAL_EDGES.into_iter().enumerate() {
                out[3 + k] = 4.0 * l[i] * l[j];
            }
        }
        Degree::P3 => {
            for i in 0..3 {
                out[i] = 0.5 * l[i] * (3.0 * l[i] - 1.0) * (3.0 * l[i] - 2.0);
            }
            for (k, (i, j)) in LOCAL_EDGES.into_iter().enumerate() {
                out[3 + 2 * k] = 4.5 * l[i] * l[j] * (3.0 * l[i] - 1.0);
                out[4 + 2 * k] = 4.5 * l[i] * l[j] * (3.0 * l[j] - 1.0);
            }
            out[9] = 27.0 * l[0] * l[1] * l[2];
        }
    }
}

/// Partial derivatives `d phi_a / d l_m` at barycentric point `l`.
pub fn barycentric_derivatives(degree: Degree, l: [f64; 3], out: &mut [[f64; 3]; MAX_LOCAL]) {
    for row in out.iter_mut().take(degree.local_dofs()) {
        *row = [0.0; 3];
    }
    match degree {
        Degree::P1 => {
            for i in 0..3 {
                out[i][i] = 1.0;
            }
        }
        Degree::P2 => {
            for i in 0..3 {
                out[i][i] = 4.0 * l[i] - 1.0;
            }
            for (k, (i, j)) in LOCAL_EDGES.into_iter().enumerate() {
                out[3 + k][i] = 4.0 * l[j];
                out[3 + k][j] = 4.0 * l[i];
            }
        }
        Degree::P3 => {
            for i in 0..3 {
                // d/dl of (27 l^3 - 27 l^2 + 6 l) / 2
                out[i][i] = 0.5 * (27.0 * l[i] * l[i] - 18.0 * l[i] + 2.0);
            }
            for (k, (i, j)) in LOCAL_EDGES.into_iter().enumerate() {
                // 4.5 l_i l_j (3 l_i - 1)
                out[3 + 2 * k][i] = 4.5 * l[j] * (6.0 * l[i] - 1.0);
                out[3 + 2 * k][j] = 4.5 * l[i] * (3.0 * l[i] - 1.0);
                // 4.5 l_i l_j (3 l_j - 1)
                out[4 + 2 * k][i] = 4.5 * l[j] * (3.0 * l[j] - 1.0);
                out[4 + 2 * k][j] = 4.5 * l[i] * (6.0 * l[j] - 1.0);
            }
            out[9] = [27.0 * l[1] * l[2], 27.0 * l[0] * l[2], 27.0 * l[0] * l[1]];
        }
    }
}
