//! Dressed-state dynamics of a harmonic particle coupled to the field modes
//! of a heated spherical cavity.
//!
//! The coupled quadratic system is diagonalized into normal modes; dressed
//! (renormalized) coordinates split it into a dressed particle plus a dressed
//! environment whose modes carry Bose-Einstein occupations. The crate
//! computes the normal-mode spectrum three independent ways, evolves the
//! dressed observables in closed form, and verifies everything against a
//! brute-force Gaussian covariance oracle:
//!
//! * [`model`] - physical parameters, unit conventions, truncation control;
//! * [`spectrum`] - normal-mode frequencies and transformation elements via
//!   secular-equation root finding, small-cavity approximants, or dense
//!   diagonalization;
//! * [`dynamics`] - thermal occupations, mean trajectories, variances, the
//!   time- and temperature-dependent uncertainty product, survival
//!   probability, extrema scans and plateau estimates;
//! * [`oracle`] - exact Gaussian covariance evolution of the same truncated
//!   system, used as an independent verification path;
//! * [`checks`] - named consistency checks bundling the two paths.
//!
//! Everything is pure and deterministic: the same inputs produce the same
//! numbers, and immutable results can be shared freely across threads.

pub mod checks;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod spectrum;

pub use error::{Error, Result};
pub use model::{build_params, CavityParams, EtaConvention, ParamsBuilder, Truncation};
pub use spectrum::{Spectrum, SpectrumMethod};
