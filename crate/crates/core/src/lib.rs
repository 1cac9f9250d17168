//! Ground-state phase-space analysis of the two-dimensional U(3) vibron model.
//!
//! The model couples a scalar sigma boson to two circular tau bosons and
//! interpolates, through a control parameter `xi` in [0, 1], between a
//! U(2)-symmetric (linear) limit and an SO(3)-symmetric (bent) limit with a
//! second-order shape phase transition at `xi = 1/5`. This crate provides the
//! numerical machinery to study that transition in phase space:
//!
//! - [`fock`]: basis bookkeeping for the totally symmetric representation and
//!   assembly of the W^2 and Hamiltonian matrices per angular-momentum sector;
//! - [`spectra`]: sector diagonalization and the global ground state;
//! - [`coherent`]: SU(3) projective coherent states, boson condensates and
//!   parity-adapted (cat) superpositions;
//! - [`husimi`]: Husimi distributions of the exact and variational states;
//! - [`cp2quad`]: deterministic quadrature realizing the CP^2 closure measure,
//!   with moments, inverse participation ratio and Wehrl entropies;
//! - [`variational`]: energy functionals, equilibrium radii and the
//!   criticality scan;
//! - [`zeros`]: zero manifolds of the variational Husimi distribution.

pub mod coherent;
pub mod cp2quad;
pub mod fock;
pub mod husimi;
pub mod spectra;
pub mod variational;
pub mod zeros;

mod util;

pub use coherent::{CatState, PhasePoint};
pub use cp2quad::{MomentResult, QuadratureGrid};
pub use fock::{BasisIndex, SectorBasis, SectorMatrix};
pub use husimi::{CrossSectionGrid, GridSpec, HusimiField, SectionAxis};
pub use spectra::GroundState;
pub use variational::VariationalSolution;
pub use zeros::ZeroLine;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid basis index N={n_total}, n={n}, l={l}")]
    InvalidBasisIndex { n_total: u32, n: u32, l: i32 },

    #[error("invalid sector: |l|={l} exceeds N={n_total}")]
    InvalidSector { n_total: u32, l: i32 },

    #[error("control parameter xi={0} outside [0, 1]")]
    XiOutOfRange(f64),

    #[error("total boson number N={0} too small (need N >= 2)")]
    BosonNumberTooSmall(u32),

    #[error("eigensolver failed to converge in sector N={n_total}, l={l}")]
    EigensolverFailed { n_total: u32, l: i32 },

    #[error("quadrature did not converge to tolerance {tol} (last change {last_change})")]
    QuadratureNotConverged { tol: f64, last_change: f64 },

    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),

    #[error("moment order nu must be positive, got {0}")]
    NonPositiveMomentOrder(f64),

    #[error("Renyi-Wehrl entropy is undefined at nu = 1; use the Wehrl entropy")]
    RenyiOrderIsUnit,

    #[error("invalid grid specification: {0}")]
    InvalidGridSpec(String),

    #[error("xi grid too coarse: need at least {need} points, got {got}")]
    GridTooCoarse { need: usize, got: usize },

    #[error("failed to bracket a minimum of the energy functional")]
    BracketFailure,
}

pub type Result<T> = std::result::Result<T, Error>;
