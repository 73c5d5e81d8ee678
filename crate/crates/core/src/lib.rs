//! Exact diagonalization of one-dimensional Kondo-necklace spin chains and the
//! entanglement measures used to characterize their ground and thermal states.

pub mod cli;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod model;
pub mod scan;
pub mod thermal;

pub use entanglement::{
    ckw_audit, concurrence, pair_concurrence, partial_trace, single_qubit_concurrence, CkwAudit, DensityMatrix,
    PureState, QubitState,
};
pub use error::{Error, Result};
pub use linalg::{embed_pair, embed_single, hermitian_eig, hermitian_func, kron, ComplexMatrix, Spectrum, C64};
pub use model::{build_hamiltonian, ground_state, Anisotropy, Boundary, ChainSpec, GroundSolution};
pub use thermal::{gibbs_state, thermal_pair_concurrence, Temperature};
