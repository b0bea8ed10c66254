pub mod algebra;
pub mod error;
pub mod linalg;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Q;
pub mod clifford;
pub mod fock;
pub mod module;
