//! Edge unfolding of polycubes whose layers are orthogonally convex.

pub mod bandgraph;
pub mod batch;
pub mod error;
pub mod gen;
pub mod geom;
pub mod model;
pub mod netplan;
pub mod unfolder;
pub mod verify;

pub use error::{Error, Result};
