//! Simple currents, monodromy charges, stabilizers and fixed-point
//! resolution matrices of a theory.

mod bundle;
mod center;
mod json;
mod model;

pub use bundle::{solve_1x1_bundle, FixedPointBundle, NONZERO};
pub use center::Center;
pub use json::{BundleFile, BUNDLE_SCHEMA};
pub use model::{Model, StabilizerChain};
