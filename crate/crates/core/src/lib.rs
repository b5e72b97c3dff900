//! Combinatorial workbench for the operad of circled planar trees, the
//! complete graph operad, and the finite categories, nerves and integral
//! homology used to check their homotopical properties at small scale.

pub mod cattop;
pub mod circled;
pub mod error;
pub mod kgraph;
pub mod operad_h;
pub mod perm;
pub mod trees;
pub mod verify;

pub use error::{Error, ParseError};
