pub mod error;
pub mod ext;
pub mod problems;
pub mod spaces;

pub use error::{Error, Result};
pub use ext::ExtReal;
pub mod certify;
pub mod cli;
pub mod slope;
pub mod solver;
