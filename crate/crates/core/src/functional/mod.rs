//! Polynomial bases, quadrature and L2 projectors on cells and faces.

mod basis;
mod polynomial;
mod projector;
mod quadrature;

pub use basis::{exponents, poly_dim, CellBasis, FaceBasis};
pub use polynomial::Polynomial;
pub use projector::{
    cell_basis, combine, face_basis, l2_project_cell, l2_project_face, load_vector, mass_matrix, Projector,
};
pub use quadrature::{
    gauss_legendre, quadrature_cell, quadrature_face, quadrature_polygon, quadrature_segment, quadrature_triangle,
    triangulate_polygon, QuadratureRule,
};
