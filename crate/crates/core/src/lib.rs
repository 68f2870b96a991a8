//! Exact interleaving distances for generalized persistence modules over
//! finite preordered sets.

pub mod barcode;
pub mod complex;
pub mod error;
pub mod ext;
pub mod interleave;
pub mod io;
pub mod invimage;
pub mod linalg;
pub mod metrics;
pub mod mergetree;
pub mod pmod;
pub mod proset;
pub mod random;
pub mod translations;
pub mod vecpers;

pub use error::{Error, Result};
pub use ext::Ext;
