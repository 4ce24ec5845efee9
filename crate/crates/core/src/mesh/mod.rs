//! Two-dimensional polytopal meshes.
//!
//! Cells are simple polygons given by counter-clockwise vertex lists. Faces are
//! derived from cell edges: an edge shared by two cells is an interface, an
//! edge seen by a single cell lies on the boundary. Geometry routines take the
//! ambient dimension from [`DIM`]; only polygonal cells are generated and
//! imported.

mod generate;
mod io;
mod random;
mod validate;

use std::collections::HashMap;

pub use generate::{generate_cartesian, generate_punctured, PuncturedOptions, Rectangle};
pub use io::{import_mesh, parse_mesh, write_mesh};
pub use random::{random_polygon, single_cell_mesh};
pub use validate::{validate, ValidateOptions, ValidationReport, Violation};

use crate::error::{Error, Result};

/// Ambient dimension of the mesh.
pub const DIM: usize = 2;

pub type Point = [f64; DIM];

/// Upper bound on the number of faces of one cell.
pub const MAX_FACES_PER_CELL: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub coords: Point,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Neighbor {
    Cell(usize),
    Boundary,
}

#[derive(Clone, Debug)]
pub struct MeshFace {
    pub vertex_ids: Vec<usize>,
    pub owner_cell: usize,
    pub neighbor_cell: Neighbor,
    pub measure: f64,
    pub diameter: f64,
    pub midpoint: Point,
    pub normal_from_owner: Point,
}

impl MeshFace {
    pub fn is_boundary(&self) -> bool {
        self.neighbor_cell == Neighbor::Boundary
    }

    /// Unit tangent pointing from the first to the second vertex.
    pub fn tangent(&self) -> Point {
        let n = self.normal_from_owner;
        [-n[1], n[0]]
    }
}

#[derive(Clone, Debug)]
pub struct MeshCell {
    pub face_ids: Vec<usize>,
    /// `+1.0` when this cell owns the face, `-1.0` otherwise.
    pub face_orientations: Vec<f64>,
    pub vertex_ids: Vec<usize>,
    pub measure: f64,
    pub diameter: f64,
    pub centroid: Point,
}

#[derive(Clone, Debug)]
pub struct PolytopalMesh {
    pub vertices: Vec<Vertex>,
    pub faces: Vec<MeshFace>,
    pub cells: Vec<MeshCell>,
    pub boundary_face_ids: Vec<usize>,
    pub interior_face_ids: Vec<usize>,
    pub h: f64,
}

impl PolytopalMesh {
    /// Builds a mesh from vertex coordinates and counter-clockwise cell
    /// polygons, deriving faces, adjacency and all geometric quantities.
    ///
    /// Zero-length edges are kept (their normals are not finite); use
    /// [`validate`] to detect them.
    pub fn from_polygons(points: Vec<Point>, polygons: Vec<Vec<usize>>) -> Result<Self> {
        let mut faces: Vec<MeshFace> = Vec::new();
        // (min, max) vertex pair -> (face id, owner traversed min->max)
        let mut edge_map: HashMap<(usize, usize), (usize, bool)> = HashMap::new();
        let mut cells = Vec::with_capacity(polygons.len());

        for (cell_id, poly) in polygons.iter().enumerate() {
            if poly.len() < DIM + 1 {
                return Err(Error::InvalidCell {
                    cell: cell_id,
                    message: format!("{} vertices, need at least {}", poly.len(), DIM + 1),
                });
            }
            if let Some(&bad) = poly.iter().find(|&&v| v >= points.len()) {
                return Err(Error::InvalidCell {
                    cell: cell_id,
                    message: format!("vertex index {bad} out of range"),
                });
            }
            let coords: Vec<Point> = poly.iter().map(|&v| points[v]).collect();
            let area = signed_area(&coords);
            if !(area > 0.0) {
                return Err(Error::InvalidCell {
                    cell: cell_id,
                    message: format!("non-positive signed area {area:e} (cells must be counter-clockwise)"),
                });
            }

            let mut face_ids = Vec::with_capacity(poly.len());
            let mut face_orientations = Vec::with_capacity(poly.len());
            for i in 0..poly.len() {
                let a = poly[i];
                let b = poly[(i + 1) % poly.len()];
                if a == b {
                    return Err(Error::InvalidFace {
                        v0: a,
                        v1: b,
                        message: "repeated vertex".into(),
                    });
                }
                let key = (a.min(b), a.max(b));
                let forward = a < b;
                match edge_map.get(&key) {
                    None => {
                        let pa = points[a];
                        let pb = points[b];
                        let len = dist(&pa, &pb);
                        let face_id = faces.len();
                        faces.push(MeshFace {
                            vertex_ids: vec![a, b],
                            owner_cell: cell_id,
                            neighbor_cell: Neighbor::Boundary,
                            measure: len,
                            diameter: len,
                            midpoint: [0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])],
                            normal_from_owner: [(pb[1] - pa[1]) / len, -(pb[0] - pa[0]) / len],
                        });
                        edge_map.insert(key, (face_id, forward));
                        face_ids.push(face_id);
                        face_orientations.push(1.0);
                    }
                    Some(&(face_id, owner_forward)) => {
                        let face = &mut faces[face_id];
                        if owner_forward == forward {
                            return Err(Error::InvalidFace {
                                v0: key.0,
                                v1: key.1,
                                message: format!(
                                    "cells {} and {} traverse the face in the same direction (inconsistent orientation)",
                                    face.owner_cell, cell_id
                                ),
                            });
                        }
                        if face.neighbor_cell != Neighbor::Boundary {
                            return Err(Error::InvalidFace {
                                v0: key.0,
                                v1: key.1,
                                message: "face shared by more than two cells".into(),
                            });
                        }
                        face.neighbor_cell = Neighbor::Cell(cell_id);
                        face_ids.push(face_id);
                        face_orientations.push(-1.0);
                    }
                }
            }

            cells.push(MeshCell {
                face_ids,
                face_orientations,
                vertex_ids: poly.clone(),
                measure: area,
                diameter: diameter(&coords),
                centroid: polygon_centroid(&coords, area),
            });
        }

        let (boundary_face_ids, interior_face_ids): (Vec<usize>, Vec<usize>) =
            (0..faces.len()).partition(|&f| faces[f].is_boundary());
        let h = cells.iter().map(|c| c.diameter).fold(0.0, f64::max);

        Ok(Self {
            vertices: points.into_iter().map(|coords| Vertex { coords }).collect(),
            faces,
            cells,
            boundary_face_ids,
            interior_face_ids,
            h,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    /// Outward unit normal of the `local`-th face of `cell`.
    pub fn outward_normal(&self, cell: usize, local: usize) -> Point {
        let c = &self.cells[cell];
        let n = self.faces[c.face_ids[local]].normal_from_owner;
        let s = c.face_orientations[local];
        [s * n[0], s * n[1]]
    }

    pub fn cell_vertices(&self, cell: usize) -> Vec<Point> {
        self.cells[cell].vertex_ids.iter().map(|&v| self.vertices[v].coords).collect()
    }

    pub fn total_measure(&self) -> f64 {
        self.cells.iter().map(|c| c.measure).sum()
    }

    /// Cells whose closure contains `p` (up to a relative tolerance).
    pub fn locate(&self, p: Point) -> Vec<usize> {
        let tol = 1e-10 * self.h;
        (0..self.cells.len())
            .filter(|&c| {
                let cell = &self.cells[c];
                let r = 0.5 * cell.diameter + tol;
                if (p[0] - cell.centroid[0]).abs() > 2.0 * r || (p[1] - cell.centroid[1]).abs() > 2.0 * r {
                    return false;
                }
                point_in_polygon(p, &self.cell_vertices(c), tol)
            })
            .collect()
    }
}

pub(crate) fn dist(a: &Point, b: &Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Shoelace formula; positive for counter-clockwise polygons.
pub fn signed_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        s += a[0] * b[1] - b[0] * a[1];
    }
    0.5 * s
}

pub fn polygon_centroid(poly: &[Point], area: f64) -> Point {
    let n = poly.len();
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let cross = a[0] * b[1] - b[0] * a[1];
        cx += (a[0] + b[0]) * cross;
        cy += (a[1] + b[1]) * cross;
    }
    [cx / (6.0 * area), cy / (6.0 * area)]
}

pub fn diameter(points: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            d = d.max(dist(&points[i], &points[j]));
        }
    }
    d
}

/// Even-odd point-in-polygon test; points within `tol` of an edge count as inside.
pub fn point_in_polygon(p: Point, poly: &[Point], tol: f64) -> bool {
    let n = poly.len();
    for i in 0..n {
        if segment_distance(p, poly[i], poly[(i + 1) % n]) <= tol {
            return true;
        }
    }
    let mut inside = false;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

pub(crate) fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    dist(&p, &[a[0] + t * d[0], a[1] + t * d[1]])
}
