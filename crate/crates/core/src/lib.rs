//! Real matrix representations of PT-symmetric Hamiltonians.
//!
//! A Hamiltonian `H = p² + V(x)` with `V(-x)* = V(x)` commutes with the
//! antiunitary `A = PT`. In a basis of `A`-fixed vectors its matrix is real,
//! so its characteristic polynomial has real coefficients and the spectrum
//! consists of real values and complex-conjugate pairs.
//!
//! * [`potential`]: PT-symmetric polynomial potentials.
//! * [`oscillator`]: exact truncated matrices in the oscillator basis.
//! * [`antiunitary`]: antiunitary involutions and adapted bases.
//! * [`realify`]: similarity to a real matrix, characteristic polynomials.
//! * [`spectra`]: real Schur eigensolver, classification, truncation sweeps.
//! * [`roots`]: Durand–Kerner oracle for polynomial roots.
//! * [`verify`]: the invariant suite behind `ptreal verify`.

pub mod antiunitary;
pub mod error;
pub mod oscillator;
pub mod potential;
pub mod realify;
pub mod roots;
pub mod spectra;
pub mod verify;

pub use antiunitary::{AdaptedBasis, AntiunitaryRep, AntiunitaryTag, Recipe, Sign};
pub use error::{Error, Result};
pub use oscillator::{hamiltonian_matrix, BasisTag, OperatorMatrix};
pub use potential::{PotentialSpec, Term};
pub use realify::{char_poly, phase_unitary, realify, RealMatrix, Transform};
pub use spectra::{classify_spectrum, eigenvalues_real, SpectrumReport};
