//! Exact arithmetic for Frobenius superalgebras, degenerate and quantum affine
//! wreath product algebras, their higher-level diagrammatic versions, and
//! cyclotomic quotients.

pub mod category;
pub mod cyciso;
pub mod cyclo;
pub mod error;
pub mod frobenius;
pub mod oracle;
pub mod parse;
pub mod perm;
pub mod poly;
pub mod rational;
pub mod sample;
pub mod verify;
pub mod wreath;

pub use error::{Error, Result};
