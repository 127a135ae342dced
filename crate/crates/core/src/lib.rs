pub mod blowup;
pub mod bundle;
pub mod cech;
pub mod divisors;
pub mod error;
pub mod hermitian;
pub mod kodaira;
pub mod linalg;
pub mod nerve;
pub mod selftest;
pub mod symbolic;

pub use error::{Error, Result};
