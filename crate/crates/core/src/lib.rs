pub mod abelian;
pub mod algebra;
pub mod decompose;
pub mod error;
pub mod group;
pub mod linalg;
pub mod report;
pub mod spin;
pub mod tensor;
pub mod young;

pub use error::{Error, Result};
