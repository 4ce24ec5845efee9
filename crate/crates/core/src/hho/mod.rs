//! Per-cell hybrid operators: interpolation, potential reconstruction,
//! stabilization, covariant gradient, discrete gauge transformation and the
//! local sesquilinear form.

mod context;
mod field;
mod operators;

pub use context::{weighted_gram, CellContext, FaceContext, LocalDofLayout};
pub use field::{FieldSpec, ScalarField, VectorField};
pub use operators::{
    coercivity_constant, covariant_gradient, covariant_gradient_cheap, delta_cell, delta_face, gauge_transform_local,
    interpolate_local, local_form, potential_mass, potential_reconstruction, project_potential, stabilization,
    stabilization_energy, stabilization_factors,
    LocalOperators,
};
