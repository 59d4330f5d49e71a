#![no_std]
// dense matrix code reads best with explicit indices
#![allow(clippy::needless_range_loop)]
extern crate alloc;

pub mod arith;
pub mod borcherds;
pub mod chambers;
pub mod discform;
pub mod enriques;
pub mod enumeration;
pub mod groups;
pub mod k3;
pub mod lattice_core;
