pub mod algebra;
pub mod blockdiag;
pub mod combinatorics;
pub mod error;
pub mod general;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod sdpa;
pub mod terwilliger;

pub use error::{Error, Result};
