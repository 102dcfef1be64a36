pub mod error;
pub mod gf;
pub mod matring;
pub mod normform;
pub mod decomp;
pub mod cayley;
pub mod par;
pub mod spectra;
pub mod sumprod;
pub mod verify;

pub use error::{Error, Result};
pub use gf::{Elem, Field};
pub use matring::{Matrix, MatrixFilter};
