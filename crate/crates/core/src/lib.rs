pub mod corpus;
pub mod error;
pub mod expr;
pub mod lambda;
pub mod lie_conditions;
pub mod lie_tresse;
pub mod linalg;
pub mod numeric;
pub mod ode;
pub mod report;
pub mod special;
pub mod transform;

pub use error::{Error, Result};
