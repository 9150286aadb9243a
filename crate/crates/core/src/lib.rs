pub mod arith;
pub mod brauer;
pub mod error;
pub mod ground;
pub mod io;
pub mod report;
pub mod tableaux;
pub mod verify;
pub mod w2;
pub mod weights;

pub use error::{Error, Result};
