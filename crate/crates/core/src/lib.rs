pub mod cli;
pub mod complexify;
pub mod curvature;
pub mod error;
pub mod exactnum;
pub mod gray;
pub mod model;
pub mod realize;
pub mod tvdecomp;

pub use error::{Error, Result};
