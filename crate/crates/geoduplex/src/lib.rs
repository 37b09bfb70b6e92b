//! File formats, configuration, parallel campaigns and the command-line
//! front end for `geoduplex-core`.

pub mod assignment_io;
pub mod campaign;
pub mod cli;
pub mod config;
pub mod db_io;
pub mod error;
pub mod map_io;

pub use error::{Error, Result};
