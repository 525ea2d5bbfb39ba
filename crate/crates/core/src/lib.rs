//! Exact arithmetic on integer Cantor sets `C(b, D)`: the nonnegative
//! integers whose base-`b` digits all lie in `D`.

pub mod correlation;
pub mod digits;
pub mod ergodic;
pub mod error;
pub mod expsum;
pub mod frequency;
pub mod intersective;
pub mod moddist;
pub mod summation;

pub use digits::{CantorSet, DigitSpec, Element, GoodSet, Progression, ProgressionFamily};
pub use error::{Error, Result};
pub use expsum::{LimitClass, Polynomial, WeylSumResult};
pub use frequency::Frequency;
