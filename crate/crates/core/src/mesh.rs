//! Conforming triangulations of the unit disk.
//!
//! Meshes are built by uniform 1-to-4 refinement of a hexagonal base mesh
//! (center vertex plus six vertices on the unit circle). New boundary
//! vertices are projected onto the circle, so every mesh is a triangulation
//! of an inscribed polygon. The origin is vertex 0 at every level.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::Point;

/// Largest supported refinement level.
pub const MAX_LEVEL: usize = 9;

const ORIGIN_TOL: f64 = 1e-14;
const CIRCLE_TOL: f64 = 1e-12;
const HEADER: &str = "holefem-mesh 1";

/// A broken mesh invariant.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Violation {
    #[error("negative area, triangle {triangle}")]
    NegativeArea { triangle: usize },
    #[error("origin not a vertex")]
    MissingOrigin,
    #[error("vertex index out of range, triangle {triangle}")]
    IndexOutOfRange { triangle: usize },
    #[error("non-manifold edge ({a}, {b}), triangle {triangle}")]
    NonManifoldEdge { a: usize, b: usize, triangle: usize },
    #[error("boundary edge ({a}, {b}) does not match the triangulation")]
    BoundaryMismatch { a: usize, b: usize, boundary_edge: Option<usize> },
    #[error("boundary vertex {vertex} not on the unit circle")]
    OffCircle { vertex: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeshError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {violation}")]
    InvalidAt { line: usize, violation: Violation },
    #[error(transparent)]
    Invalid(#[from] Violation),
}

/// Immutable conforming triangulation with boundary flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary_edges: Vec<[usize; 2]>,
    /// Unique edges, each stored with the smaller vertex index first.
    edges: Vec<[usize; 2]>,
    /// Global edge of local edges (0,1), (1,2), (2,0).
    triangle_edges: Vec<[usize; 3]>,
    is_boundary_edge: Vec<bool>,
    h_avg: f64,
    origin_vertex: usize,
}

impl Mesh {
    /// Builds a mesh and checks every invariant.
    pub fn new(
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        boundary_edges: Vec<[usize; 2]>,
    ) -> Result<Self, MeshError> {
        let nv = vertices.len();
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= nv) {
                return Err(Violation::IndexOutOfRange { triangle: t }.into());
            }
            if signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]) <= 0.0 {
                return Err(Violation::NegativeArea { triangle: t }.into());
            }
        }
        let origin_vertex = vertices
            .iter()
            .position(|p| crate::norm(*p) <= ORIGIN_TOL)
            .ok_or(Violation::MissingOrigin)?;

        let mut edge_index: HashMap<[usize; 2], usize> = HashMap::with_capacity(triangles.len() * 2);
        let mut edges = Vec::new();
        let mut counts: Vec<u8> = Vec::new();
        let mut triangle_edges = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            let mut te = [0; 3];
            for k in 0..3 {
                let key = sorted(tri[k], tri[(k + 1) % 3]);
                let e = *edge_index.entry(key).or_insert_with(|| {
                    edges.push(key);
                    counts.push(0);
                    edges.len() - 1
                });
                counts[e] += 1;
                if counts[e] > 2 {
                    return Err(Violation::NonManifoldEdge { a: key[0], b: key[1], triangle: t }.into());
                }
                te[k] = e;
            }
            triangle_edges.push(te);
        }

        let mut is_boundary_edge = vec![false; edges.len()];
        for (k, be) in boundary_edges.iter().enumerate() {
            let key = sorted(be[0], be[1]);
            match edge_index.get(&key) {
                Some(&e) if counts[e] == 1 && !is_boundary_edge[e] => is_boundary_edge[e] = true,
                _ => {
                    return Err(Violation::BoundaryMismatch {
                        a: be[0],
                        b: be[1],
                        boundary_edge: Some(k),
                    }
                    .into())
                }
            }
        }
        if let Some(e) = (0..edges.len()).find(|&e| counts[e] == 1 && !is_boundary_edge[e]) {
            return Err(Violation::BoundaryMismatch { a: edges[e][0], b: edges[e][1], boundary_edge: None }.into());
        }
        for be in &boundary_edges {
            for &v in be {
                if (crate::norm(vertices[v]) - 1.0).abs() > CIRCLE_TOL {
                    return Err(Violation::OffCircle { vertex: v }.into());
                }
            }
        }

        let h_avg = edges
            .iter()
            .map(|&[a, b]| dist(vertices[a], vertices[b]))
            .sum::<f64>()
            / edges.len().max(1) as f64;

        Ok(Mesh {
            vertices,
            triangles,
            boundary_edges,
            edges,
            triangle_edges,
            is_boundary_edge,
            h_avg,
            origin_vertex,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_edges(&self) -> &[[usize; 2]] {
        &self.boundary_edges
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn triangle_edges(&self) -> &[[usize; 3]] {
        &self.triangle_edges
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.is_boundary_edge[e]
    }

    pub fn h_avg(&self) -> f64 {
        self.h_avg
    }

    pub fn origin_vertex(&self) -> usize {
        self.origin_vertex
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        signed_area(a, b, c)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    pub fn h_min(&self) -> f64 {
        self.edges
            .iter()
            .map(|&[a, b]| dist(self.vertices[a], self.vertices[b]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest interior angle over all triangles, in degrees.
    pub fn min_angle_deg(&self) -> f64 {
        let mut min = f64::INFINITY;
        for t in 0..self.triangles.len() {
            let p = self.triangle_points(t);
            for k in 0..3 {
                let (a, b, c) = (p[k], p[(k + 1) % 3], p[(k + 2) % 3]);
                let u = [b[0] - a[0], b[1] - a[1]];
                let v = [c[0] - a[0], c[1] - a[1]];
                let cos = (u[0] * v[0] + u[1] * v[1]) / (u[0].hypot(u[1]) * v[0].hypot(v[1]));
                min = min.min(cos.clamp(-1.0, 1.0).acos().to_degrees());
            }
        }
        min
    }

    /// Splits every triangle into four through its edge midpoints. Midpoints
    /// of boundary edges are pushed onto the unit circle. The children of
    /// triangle `t` are `4t..4t+4`, and old vertices keep their indices.
    pub fn refine_uniform(&self) -> Mesh {
        let nv = self.vertices.len();
        let mut vertices = self.vertices.clone();
        vertices.reserve(self.edges.len());
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            let (pa, pb) = (self.vertices[a], self.vertices[b]);
            let mut m = [0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])];
            if self.is_boundary_edge[e] {
                let r = crate::norm(m);
                m = [m[0] / r, m[1] / r];
            }
            vertices.push(m);
        }
        let mid = |e: usize| nv + e;
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for (tri, te) in self.triangles.iter().zip(&self.triangle_edges) {
            let [a, b, c] = *tri;
            let (mab, mbc, mca) = (mid(te[0]), mid(te[1]), mid(te[2]));
            triangles.push([a, mab, mca]);
            triangles.push([mab, b, mbc]);
            triangles.push([mca, mbc, c]);
            triangles.push([mab, mbc, mca]);
        }
        let edge_lookup: HashMap<[usize; 2], usize> =
            self.edges.iter().enumerate().map(|(e, &k)| (k, e)).collect();
        let mut boundary_edges = Vec::with_capacity(2 * self.boundary_edges.len());
        for &[a, b] in &self.boundary_edges {
            let m = mid(edge_lookup[&sorted(a, b)]);
            boundary_edges.push([a, m]);
            boundary_edges.push([m, b]);
        }
        Mesh::new(vertices, triangles, boundary_edges).expect("uniform refinement preserves mesh invariants")
    }
}

/// Hexagonal base mesh refined `level` times.
///
/// # Panics
/// If `level > MAX_LEVEL`.
pub fn generate_disk_mesh(level: usize) -> Mesh {
    assert!(level <= MAX_LEVEL, "mesh level {level} exceeds {MAX_LEVEL}");
    let mut vertices = vec![[0.0, 0.0]];
    for k in 0..6 {
        let theta = k as f64 * std::f64::consts::FRAC_PI_3;
        vertices.push([theta.cos(), theta.sin()]);
    }
    let triangles = (0..6).map(|k| [0, 1 + k, 1 + (k + 1) % 6]).collect();
    let boundary_edges = (0..6).map(|k| [1 + k, 1 + (k + 1) % 6]).collect();
    let mut mesh = Mesh::new(vertices, triangles, boundary_edges).expect("base mesh is valid");
    for _ in 0..level {
        mesh = mesh.refine_uniform();
    }
    mesh
}

/// Serializes to the plain-text mesh format. Coordinates use the shortest
/// representation that parses back to the same `f64`.
pub fn write_mesh(mesh: &Mesh) -> Vec<u8> {
    let mut s = String::new();
    writeln!(s, "{HEADER}").unwrap();
    writeln!(s, "{} {} {}", mesh.vertices.len(), mesh.triangles.len(), mesh.boundary_edges.len()).unwrap();
    for p in &mesh.vertices {
        writeln!(s, "{:?} {:?}", p[0], p[1]).unwrap();
    }
    for t in &mesh.triangles {
        writeln!(s, "{} {} {}", t[0], t[1], t[2]).unwrap();
    }
    for e in &mesh.boundary_edges {
        writeln!(s, "{} {}", e[0], e[1]).unwrap();
    }
    s.into_bytes()
}

/// Parses the plain-text mesh format and validates every invariant. Errors
/// carry the 1-based line number of the offending record.
pub fn read_mesh(text: &[u8]) -> Result<Mesh, MeshError> {
    let text = std::str::from_utf8(text).map_err(|e| MeshError::Syntax { line: 1, msg: e.to_string() })?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| MeshError::Syntax { line: 0, msg: format!("unexpected end of file, expected {what}") })
    };

    let (line, header) = next("header")?;
    if header != HEADER {
        return Err(MeshError::Syntax { line, msg: format!("malformed header, expected `{HEADER}`") });
    }
    let (line, counts) = next("counts")?;
    let counts: Vec<usize> = parse_fields(line, counts, 3)?;
    let (nv, nt, nbe) = (counts[0], counts[1], counts[2]);

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, l) = next("vertex")?;
        let xy: Vec<f64> = parse_fields(line, l, 2)?;
        vertices.push([xy[0], xy[1]]);
    }
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        let (line, l) = next("triangle")?;
        let ijk: Vec<usize> = parse_fields(line, l, 3)?;
        triangles.push([ijk[0], ijk[1], ijk[2]]);
    }
    let mut boundary_edges = Vec::with_capacity(nbe);
    for _ in 0..nbe {
        let (line, l) = next("boundary edge")?;
        let ij: Vec<usize> = parse_fields(line, l, 2)?;
        boundary_edges.push([ij[0], ij[1]]);
    }

    let vertex_line = |v: usize| 3 + v;
    let triangle_line = |t: usize| 3 + nv + t;
    let boundary_line = |k: usize| 3 + nv + nt + k;
    Mesh::new(vertices, triangles, boundary_edges).map_err(|err| match err {
        MeshError::Invalid(violation) => {
            let line = match &violation {
                Violation::NegativeArea { triangle }
                | Violation::IndexOutOfRange { triangle }
                | Violation::NonManifoldEdge { triangle, .. } => triangle_line(*triangle),
                Violation::MissingOrigin => vertex_line(0),
                Violation::OffCircle { vertex } => vertex_line(*vertex),
                Violation::BoundaryMismatch { boundary_edge, .. } => {
                    boundary_edge.map_or(triangle_line(0), boundary_line)
                }
            };
            MeshError::InvalidAt { line, violation }
        }
        other => other,
    })
}

fn parse_fields<T: std::str::FromStr>(line: usize, text: &str, n: usize) -> Result<Vec<T>, MeshError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != n {
        return Err(MeshError::Syntax { line, msg: format!("expected {n} fields, found {}", fields.len()) });
    }
    fields
        .iter()
        .map(|f| f.parse::<T>().map_err(|_| MeshError::Syntax { line, msg: format!("cannot parse `{f}`") }))
        .collect()
}

#[inline]
fn sorted(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

#[inline]
fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

#[inline]
pub(crate) fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}
