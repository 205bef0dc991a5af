pub mod antipodal;
pub mod dualfan;
pub mod error;
pub mod exactgeom;
pub mod lattice;
pub mod parallelohedron;
pub mod specfile;
pub mod star;
pub mod verify;

pub use error::{Error, Result};
