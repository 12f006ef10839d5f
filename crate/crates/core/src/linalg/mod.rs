//! Dense complex matrix kernel for the small operators used throughout the crate
//! (states, observables, moment matrices). Dimensions are capped at [`MAX_DIM`].

mod eigen;
mod matrix;

pub use eigen::{eig_hermitian, eigenvalue_gap_2x2, lambda_max, lambda_min, psd_check, Eigen};
pub use matrix::{
    bloch_components, bloch_operator, c, dot3, norm3, pauli, sigma_x, sigma_y, sigma_z,
    weighted_sum, ComplexMatrix, HermitianOperator, C64, MAX_DIM,
};
