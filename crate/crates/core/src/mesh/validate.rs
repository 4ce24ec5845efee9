use serde::Serialize;

use super::{dist, PolytopalMesh, DIM, MAX_FACES_PER_CELL};
use crate::error::Error;

#[derive(Clone, Debug)]
pub struct ValidateOptions {
    /// Regularity parameter; faces must satisfy `h_F >= rho^2 h_T`.
    pub rho: f64,
    pub normal_tol: f64,
    pub closure_tol: f64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            rho: 0.05,
            normal_tol: 1e-12,
            closure_tol: 1e-12,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub enum Violation {
    Face { face: usize, v0: usize, v1: usize, message: String },
    Cell { cell: usize, message: String },
}

impl Violation {
    pub fn to_error(&self) -> Error {
        match self {
            Violation::Face { v0, v1, message, .. } => Error::InvalidFace {
                v0: *v0,
                v1: *v1,
                message: message.clone(),
            },
            Violation::Cell { cell, message } => Error::InvalidCell {
                cell: *cell,
                message: message.clone(),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// min over the centroid fan sub-triangles of inradius / diameter
    pub min_shape_ratio: f64,
    /// min over cells and fan triangles of h_S / h_T
    pub min_submesh_ratio: f64,
    /// min over cell faces of h_F / h_T
    pub min_face_ratio: f64,
    pub max_faces: usize,
    pub max_closure_defect: f64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Measured regularity parameter `min(r_S / h_S, h_S / h_T)`.
    pub fn rho(&self) -> f64 {
        self.min_shape_ratio.min(self.min_submesh_ratio)
    }
}

fn triangle_inradius(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    let area = 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])).abs();
    let perim = dist(&a, &b) + dist(&b, &c) + dist(&c, &a);
    2.0 * area / perim
}

/// Checks mesh invariants and measures shape regularity. Never fails; every
/// problem is listed in the report.
pub fn validate(mesh: &PolytopalMesh, opts: &ValidateOptions) -> ValidationReport {
    let mut violations = Vec::new();
    let mut min_shape_ratio = f64::INFINITY;
    let mut min_submesh_ratio = f64::INFINITY;
    let mut min_face_ratio = f64::INFINITY;
    let mut max_faces = 0;
    let mut max_closure_defect: f64 = 0.0;

    for (fid, f) in mesh.faces.iter().enumerate() {
        let (v0, v1) = (f.vertex_ids[0], f.vertex_ids[1]);
        if !(f.measure > 0.0) {
            violations.push(Violation::Face {
                face: fid,
                v0,
                v1,
                message: format!("non-positive measure {:e}", f.measure),
            });
            continue;
        }
        let norm = f.normal_from_owner.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !((norm - 1.0).abs() <= opts.normal_tol) {
            violations.push(Violation::Face {
                face: fid,
                v0,
                v1,
                message: format!("normal has length {norm}"),
            });
        }
    }

    for (cid, cell) in mesh.cells.iter().enumerate() {
        let nf = cell.face_ids.len();
        max_faces = max_faces.max(nf);
        if nf < DIM + 1 {
            violations.push(Violation::Cell {
                cell: cid,
                message: format!("{nf} faces, need at least {}", DIM + 1),
            });
        }
        if nf > MAX_FACES_PER_CELL {
            violations.push(Violation::Cell {
                cell: cid,
                message: format!("{nf} faces exceeds {MAX_FACES_PER_CELL}"),
            });
        }
        if !(cell.measure > 0.0) {
            violations.push(Violation::Cell {
                cell: cid,
                message: format!("non-positive measure {:e}", cell.measure),
            });
            continue;
        }

        let mut closure = [0.0; 2];
        let mut perimeter = 0.0;
        for (lf, &fid) in cell.face_ids.iter().enumerate() {
            let f = &mesh.faces[fid];
            let n = mesh.outward_normal(cid, lf);
            closure[0] += f.measure * n[0];
            closure[1] += f.measure * n[1];
            perimeter += f.measure;
            let ratio = f.diameter / cell.diameter;
            min_face_ratio = min_face_ratio.min(ratio);
            if f.diameter > cell.diameter * (1.0 + 1e-12) {
                violations.push(Violation::Face {
                    face: fid,
                    v0: f.vertex_ids[0],
                    v1: f.vertex_ids[1],
                    message: format!("h_F = {} exceeds h_T = {} of cell {cid}", f.diameter, cell.diameter),
                });
            }
            if ratio < opts.rho * opts.rho {
                violations.push(Violation::Face {
                    face: fid,
                    v0: f.vertex_ids[0],
                    v1: f.vertex_ids[1],
                    message: format!("h_F / h_T = {ratio:e} below rho^2 = {:e} in cell {cid}", opts.rho * opts.rho),
                });
            }
        }
        let defect = (closure[0].powi(2) + closure[1].powi(2)).sqrt() / perimeter;
        max_closure_defect = max_closure_defect.max(defect);
        if !(defect <= opts.closure_tol) {
            violations.push(Violation::Cell {
                cell: cid,
                message: format!("face closure defect {defect:e}"),
            });
        }

        let verts = mesh.cell_vertices(cid);
        let x = cell.centroid;
        for i in 0..verts.len() {
            let a = verts[i];
            let b = verts[(i + 1) % verts.len()];
            let hs = dist(&a, &b).max(dist(&a, &x)).max(dist(&b, &x));
            min_shape_ratio = min_shape_ratio.min(triangle_inradius(x, a, b) / hs);
            min_submesh_ratio = min_submesh_ratio.min(hs / cell.diameter);
        }
    }

    for &fid in &mesh.interior_face_ids {
        if let super::Neighbor::Cell(nb) = mesh.faces[fid].neighbor_cell {
            let c = &mesh.cells[nb];
            let lf = c.face_ids.iter().position(|&f| f == fid).unwrap();
            let n_nb = mesh.outward_normal(nb, lf);
            let n_ow = mesh.faces[fid].normal_from_owner;
            if (n_nb[0] + n_ow[0]).abs() > 1e-14 || (n_nb[1] + n_ow[1]).abs() > 1e-14 {
                violations.push(Violation::Face {
                    face: fid,
                    v0: mesh.faces[fid].vertex_ids[0],
                    v1: mesh.faces[fid].vertex_ids[1],
                    message: "neighbour normal is not opposite to owner normal".into(),
                });
            }
        }
    }

    ValidationReport {
        violations,
        min_shape_ratio,
        min_submesh_ratio,
        min_face_ratio,
        max_faces,
        max_closure_defect,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_cartesian, Rectangle};

    #[test]
    fn cartesian_is_valid_with_constant_shape_ratio() {
        let ratios: Vec<f64> = [2, 4, 8, 16]
            .iter()
            .map(|&n| {
                let m = generate_cartesian(Rectangle::unit(), n, n).unwrap();
                let r = validate(&m, &ValidateOptions::default());
                assert!(r.is_valid(), "{:?}", r.violations);
                r.min_shape_ratio
            })
            .collect();
        for r in &ratios {
            assert!((r - ratios[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_length_face_is_listed() {
        // vertices 1 and 2 coincide
        let pts = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let m = PolytopalMesh::from_polygons(pts, vec![vec![0, 1, 2, 3, 4]]).unwrap();
        let r = validate(&m, &ValidateOptions::default());
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Face { v0: 1, v1: 2, .. })));
    }
}
