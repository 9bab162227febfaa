// Reference constants keep every published digit, and `!(v > 0.0)` is the
// idiom used throughout to reject NaN together with out-of-range values.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fmt;
pub mod kernel;
pub mod quad;
pub mod remainder;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
