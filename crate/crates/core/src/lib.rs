pub mod clarans;
pub mod cli;
pub mod cluster;
pub mod cpo;
pub mod error;
pub mod eval;
pub mod geom;
pub mod grid;
pub mod io;
pub mod obstacle;
pub mod scld;
pub mod svg;
pub mod synth;
pub mod units;

pub use error::{Error, Result};
