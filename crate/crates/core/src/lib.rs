//! Closed-form spectra and eigenfunctions for a family of complex
//! sech/tanh-shaped potentials arising from (2+1)-dimensional massless Dirac
//! fermions in hyperbolic-profile magnetic fields, together with the
//! first-order intertwining construction that relates partner Hamiltonians
//! and a finite-difference oracle for independent verification.

pub mod error;
pub mod grid;
pub mod intertwine;
pub mod model;
pub mod nu;
pub mod oracle;
pub mod pdfv;
pub mod profile;
pub mod stencil;

pub use error::{Error, Result};
pub use grid::Grid;
pub use model::{ScarfModel, SuperpotentialSpec};
pub use nu::{Branch, NUProblem};
pub use profile::Profile;
