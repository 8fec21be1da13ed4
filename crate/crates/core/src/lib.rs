#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fading;
pub mod oracle;
pub mod secrecy;
pub mod special_functions;

pub use error::{Error, Result};
