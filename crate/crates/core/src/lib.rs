//! Hagedorn wave packets built from Lagrangian frames, their multivariate
//! Hermite prefactors, and their Wigner transforms on phase space.

pub mod error;
pub mod fixtures;
pub mod frames;
pub mod io;
pub mod linalg;
pub mod phasespace;
pub mod polys;
pub mod quadrature;
pub mod random;
pub mod verify;
pub mod wavepackets;

pub use error::{Error, Result};
pub use frames::{overlap_matrix, recursion_matrix, symplectic_metric, FramePair, LagrangianFrame};
pub use phasespace::{lift_frame, lift_pair, wigner_closed, wigner_factorized, wigner_integral, wigner_quadrature, WignerSpec};
pub use polys::{MultiIndex, Polynomial, PolynomialTable};
pub use wavepackets::{excited_state, ground_state, grid_eval, inner_product, translate, GridJob, WavePacketSpec};
