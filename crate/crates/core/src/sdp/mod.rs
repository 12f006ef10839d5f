//! Dimension-restricted moment relaxations and the semidefinite solver used for swap-based
//! fidelity bounds.

mod moments;
mod solver;
mod span;
mod swap;
mod words;

pub use moments::{
    hermitian_to_vec, moment_matrix, sample_moment_matrix, vec_to_hermitian, MomentMatrix,
    Realization,
};
pub use solver::{
    lambda_max_sdp, real_embedding, sdp_solve, SdpProblem, SdpSolution, SolverOptions,
};
pub use span::{AffineSpan, SpanOptions};

/// Affine span of moment matrices: the first is the offset, differences are orthonormalised.
pub fn affine_span(samples: &[MomentMatrix]) -> crate::Result<AffineSpan> {
    let v: Vec<Vec<f64>> = samples
        .iter()
        .map(|m| hermitian_to_vec(m.chi.matrix()))
        .collect();
    AffineSpan::of(&v, 1e-9)
}
pub use swap::{
    direct_swap_fidelity, swap_bound_grid, swap_fidelity_bound, swap_fidelity_functional,
    swap_frame_states, swap_operator, swap_t_operators, swap_t_words, witness_functional,
    LinearFunctional, SwapBound, SwapOptions, SwapRelaxation,
};
pub use words::{adjoint, trace_canonical, HierarchySpec, Letter, Word};
