//! Dirac and Dirac-isotonic oscillators in (1+1) and (2+1) dimensions.
//!
//! Spectra come from two independent routes: the closed forms in
//! [`analytic`] and a finite-difference eigensolve of the equivalent
//! Sturm-Liouville problem in [`solver`]. [`susyblock`] builds the
//! discretized supercharges and the 2x2-block Dirac Hamiltonian in its
//! anti-Jaynes-Cummings form.

pub mod analytic;
pub mod error;
pub mod grid;
pub mod models;
pub mod solver;
pub mod specfun;
pub mod susyblock;

pub use analytic::{
    analytic_e2, analytic_nonrel_eps, analytic_wavefunction, build_spectrum_table, Level, Source,
    SpectrumTable,
};
pub use error::{Error, Result};
pub use grid::{Grid, Sampled};
pub use models::{
    effective_problem, pair_recover_psi2, superpotential_1d, superpotential_2d, Family, LineDomain,
    ModelSpec, PhysicalParams, RadialProblem,
};
pub use solver::{
    choose_domain, convergence_order, discretize, eigen_lowest, expected_order, numeric_solve,
    numeric_spectrum, residual_pair_check, EigenResult, GridOptions, NumericSolution,
    TridiagonalOperator,
};
pub use susyblock::{
    block_spectrum, build_block_hamiltonian, commutator_expectation, default_delta,
    discretize_supercharge, susy_isospectrality_check, BlockHamiltonian, IsospectralityReport,
    LowerBidiagonal, SupersymmetricPair,
};
