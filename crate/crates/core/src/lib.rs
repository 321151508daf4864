//! Exact and numerical tools for Hadamard inverses of orthogonal matrices and
//! the projective geometry behind them: Cremona and Gale transforms, apolar
//! point sets, and rational normal curves through a coordinate simplex.

pub mod apolarity;
pub mod error;
pub mod gale;
pub mod kontsevich;
pub mod linalg;
pub mod projective;
pub mod rnc;
pub mod scalars;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use projective::{PointConfig, ProjectivePoint};
pub use scalars::{Backend, Field, GaussianRational, Scalar, Tolerance};
