//! Singular Hochschild cohomology of radical square zero quiver algebras.

pub mod error;
pub mod cli;
pub mod complex;
pub mod exactla;
pub mod gerst;
pub mod propcalc;
pub mod quiver;

pub use error::{Error, Result};
