//! Simple-current extensions of rational conformal field theories and
//! resolution of their fixed points.
//!
//! The crate is organised bottom-up: [`abelian`] provides the group theory,
//! [`modular`] the modular data of a theory, [`wzw`] generators for WZW
//! models, [`currents`] simple currents and fixed-point matrices,
//! [`extension`] the extended theory and [`validator`] the consistency
//! checks.

pub mod abelian;
pub mod currents;
pub mod error;
pub mod extension;
pub mod modular;
pub mod validator;
pub mod wzw;

pub use error::{Error, Result};
