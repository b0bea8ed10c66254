pub mod chern;
pub mod cohomology;
pub mod dirac;
pub mod ds;
pub mod energy;
pub mod laplace;
pub mod space;

pub use dirac::DiracOperator;
pub use laplace::{DetectingFamily, EvenFamily};
pub use space::{Block, TensorOp, TensorSpace};
