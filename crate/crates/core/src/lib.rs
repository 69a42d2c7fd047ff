pub mod bialgebra;
pub mod brace;
pub mod checks;
pub mod combinat;
pub mod algebra;
pub mod error;
pub mod graded_lie;
pub mod hochschild;
pub mod homology;
pub mod operad;
pub mod rng;
pub mod sample;
pub mod star_diagrams;

pub use error::{Error, Result};
