//! Finite complete lattices, residuated maps, dependency relations between
//! self-maps, and exactly checked fixed-point certificates.

pub mod autonet;
pub mod boolalg;
pub mod cli;
pub mod config;
pub mod dependency;
pub mod digraph;
pub mod dyadic;
pub mod dynamics;
pub mod elemset;
pub mod gallery;
pub mod io;
pub mod error;
pub mod lattice;
pub mod latmap;
pub mod random;
pub mod robert;

pub use config::Config;
pub use digraph::Digraph;
pub use elemset::ElementSet;
pub use error::{Error, Result};
pub use lattice::{Elem, Lattice};
pub use latmap::LatMap;
