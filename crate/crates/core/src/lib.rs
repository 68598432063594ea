//! Integrable linear differential systems whose differential Galois group is a
//! given complex reflection group, computed in exact arithmetic over ℚ(ζ_N).

pub mod cli;
pub mod connection;
pub mod error;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod group;
pub mod invariants;
pub mod rewrite;
pub mod verify;
