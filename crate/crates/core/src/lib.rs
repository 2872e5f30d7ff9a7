//! Critical values of newform L-functions, their period polynomials, and
//! numerical certification that every zero of the period polynomial lies on
//! the circle `|z| = 1/√N`.

pub mod circle;
pub mod error;
pub mod lfunction;
pub mod fixtures;
pub mod mp;
pub mod periodpoly;
pub mod pipeline;
pub mod qexpansion;
pub mod special;

pub use error::{Error, ErrorKind, Result};
pub use lfunction::{CriticalValues, SignDetection};
pub use mp::{Complex, PrecisionBudget};
pub use qexpansion::{CoefficientSource, EtaQuotient, NewformSpec, QExpansion, Sign};
pub use rug;
