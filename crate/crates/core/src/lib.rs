//! Pauli frustration graphs, their representations, and bounds on the
//! quadratic quantity `β(G, w) = max_ρ Σ wᵢ ⟨Sᵢ⟩²` together with the
//! Hamiltonian and uncertainty bounds it drives.

pub mod bounds;
pub mod error;
pub mod graphs;
pub mod numerics;
pub mod par;
pub mod pauli;
pub mod represent;
pub mod sdp;
pub mod seesaw;

pub use error::{Error, Result};
pub use graphs::Graph;
pub use par::Execution;
pub use pauli::{PauliString, PauliSumOperator};
