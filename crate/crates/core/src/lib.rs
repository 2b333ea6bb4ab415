pub mod cli;
pub mod constants;
pub mod error;
pub mod extremal;
pub mod finsler;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
