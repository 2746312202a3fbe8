//! Exact decision procedures for Chow polystability of polarized toric
//! surfaces, working entirely in rational arithmetic from the moment polygon.

pub mod catalog;
pub mod chow;
pub mod envelope;
pub mod error;
pub mod geometry;
pub mod io;
pub mod lp;
pub mod polytope;
pub mod rat;
pub mod solver;
pub mod svg;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
pub use rat::Rat;
