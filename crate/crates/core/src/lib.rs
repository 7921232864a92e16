//! Exact colored Tverberg search in the affine setting, and the lift /
//! pull-back reduction from general colorings to special ones.

pub mod cli;
pub mod generate;
pub mod io;
pub mod kernel;
pub mod model;
pub mod plot;
pub mod rational;
pub mod reduction;
pub mod solver;
