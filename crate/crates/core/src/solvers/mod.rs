//! Sparse direct solves, the lowest eigenpairs of the discrete Hamiltonian and
//! Crank-Nicolson time stepping.

mod eigen;
mod linear;
mod propagate;

pub use eigen::{lowest_eigenpairs, EigenMethod, EigenOptions, EigenPairs, DENSE_CELL_DOF_LIMIT};
pub use linear::{solve, Factorization};
pub use propagate::{evolve, CrankNicolson, TimeGrid};

#[cfg(test)]
mod tests;
