//! Quantized momentum spectra of the Feinberg-Horodecki equation
//! `-(ħ²/2mc²) ψ''(t) + V(t) ψ(t) = cP ψ(t)` for the time-dependent general
//! molecular potential and its Wei-Hua and Manning-Rosen special cases.
//!
//! - [`potential`]: the potentials and their reductions
//! - [`closed_form`]: closed-form `P_n`, `1/R` and `γ₁`
//! - [`special`]: Jacobi polynomials and Gauss-Legendre quadrature
//! - [`wavefunction`]: evaluation and normalization of `ψ_n`
//! - [`oracle`]: finite-difference eigenvalues for cross-checking
//! - [`cli`]: configuration and tabular output for the `fh-spectra` binary

pub mod cli;
pub mod closed_form;
pub mod error;
pub mod oracle;
pub mod potential;
pub mod special;
pub mod wavefunction;

pub use closed_form::{
    compute_inv_r, compute_momentum, compute_spectrum, manning_rosen_momentum, wei_hua_momentum,
    InverseR, MomentumSpectrum, QuantizedState,
};
pub use error::{Error, Result};
pub use potential::{
    reduce_manning_rosen, reduce_wei_hua, GeneralMolecularPotential, ManningRosenParams,
    PhysicalConstants, WeiHuaParams,
};
