pub mod error;
pub mod algebra;
pub mod bimodule;
pub mod duality;
pub mod exactlin;
pub mod shadow;
pub mod suite;
pub mod traces;
pub mod twochar;
pub mod umbra;

pub use error::{Error, Result};
pub use algebra::{Algebra, Group};
pub use bimodule::{Bimodule, BimoduleMap, TensorWitness};
pub use exactlin::{Field, Matrix, Scalar};
