//! Dense complex linear algebra on tensor-product spaces.

mod dims;
mod eig;
mod ops;
mod schmidt;
mod state;

pub use dims::{party_label, Bipartition, Dims};
pub use eig::{
    canonical_basis, check_hermitian, herm_exp, herm_fn, herm_log, hermitian_eig, hermitian_eigenvalues,
    hermiticity_defect, hs_norm, max_abs, min_eigenpair, min_eigenvalue, spectral_norm, trace_norm, HermitianEigen,
};
pub use ops::{
    bipartite_view, embed, expectation, from_bipartite_order, from_bipartite_order_vector, inverse_perm, kron,
    kron_all, kron_vectors, max_abs_diff, partial_trace_matrix, partial_transpose, permutation_map,
    permute_matrix, permute_vector, projector, trace_product,
};
pub use schmidt::{schmidt, Schmidt};
pub use state::{DensityMatrix, PureState};
