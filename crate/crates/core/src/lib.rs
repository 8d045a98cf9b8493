//! Quantum harmonic chain with free ends.
//!
//! A linear chain of `N` identical particles of mass μ coupled to nearest
//! neighbours by springs of constant κ² and rest length ξ. The crate provides
//! the analytic normal modes, single-mode Gibbs statistics, and the thermal
//! mean and variance of the chain length `L = x_N - x_1`, together with a
//! brute-force Jacobi eigensolver used to cross-check the analytic spectrum.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the `*F64` and
//! `*F32` aliases below fix the precision.

pub mod chain;
pub mod eigen;
mod error;
pub mod observables;
pub mod quadrature;
mod scalar;
pub mod scaling;
pub mod thermo;

pub use chain::{
    build_dynamical_matrix, build_mode_table, dispersion, equilibrium_positions, from_normal,
    to_normal, ChainSpec, CoordinateVector, DynamicalMatrix, Frame, ModeTable, Parity, UnitKind,
    UnitSystem, Variable, ZeroMode,
};
pub use eigen::{symmetric_eigen, DenseMatrix, EigenResult};
pub use error::{Error, Result};
pub use observables::{
    length_expansion, length_statistics, length_variance_exact, mean_length, riemann_bound,
    LengthExpansion, LengthStatistics,
};
pub use scalar::{compensated_sum, CompensatedSum, Scalar};
pub use scaling::{fit_loglog, run_sweep, si_preset, LogLogFit, Preset, SweepPlan, SweepResult};
pub use thermo::{
    enumerate_phonon_energies, mean_occupation, mean_u_squared, partition_function, ModeThermo,
    PhononState, ThermoState,
};

pub type UnitSystemF64 = UnitSystem<f64>;
pub type ChainSpecF64 = ChainSpec<f64>;
pub type ModeTableF64 = ModeTable<f64>;
pub type DynamicalMatrixF64 = DynamicalMatrix<f64>;
pub type CoordinateVectorF64 = CoordinateVector<f64>;
pub type EigenResultF64 = EigenResult<f64>;
pub type ThermoStateF64 = ThermoState<f64>;
pub type ModeThermoF64 = ModeThermo<f64>;
pub type PhononStateF64 = PhononState<f64>;
pub type LengthExpansionF64 = LengthExpansion<f64>;
pub type LengthStatisticsF64 = LengthStatistics<f64>;
pub type SweepPlanF64 = SweepPlan<f64>;
pub type SweepResultF64 = SweepResult<f64>;

pub type UnitSystemF32 = UnitSystem<f32>;
pub type ChainSpecF32 = ChainSpec<f32>;
pub type ModeTableF32 = ModeTable<f32>;
pub type ThermoStateF32 = ThermoState<f32>;
pub type LengthStatisticsF32 = LengthStatistics<f32>;
