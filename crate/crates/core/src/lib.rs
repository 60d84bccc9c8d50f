pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod exactmath;
pub mod extensions;
pub mod identities;
pub mod morphisms;

pub use algebra::{Algebra, AlgebraTemplate};
pub use cohomology::{Cocycle, CohomologyBasis};
pub use error::{Error, Result};
pub use morphisms::LinearMap;
