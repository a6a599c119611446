//! Dual braid monoids, positive cluster complexes and Koszul duality for finite
//! crystallographic Coxeter groups, with exact arithmetic throughout.

pub mod cluster;
pub mod dual;
pub mod error;
pub mod group;
pub mod garside;
pub mod linalg;
pub mod nc;
pub mod nichols;
pub mod os;
pub mod resolution;
pub mod svg;
pub mod verify;

pub use error::{Error, Result};
pub use group::{CoxeterGroup, Family, GroupElement, GroupSpec, ReflId};
