//! Exact-arithmetic geometric invariant theory for type-A groups: weight
//! lattices, root systems and Weyl combinatorics, sparse rational
//! polynomial rings, Hilbert-Mumford stability with certificates,
//! fixed-point localization on flag varieties, strictly-semistable
//! elimination, and the GIT integration ratio computation that ties them
//! together.

pub mod acceptance;
pub mod lattice;
pub mod localization;
pub mod poly;
pub mod ratio;
pub mod rootsys;
pub mod stability;
pub mod statemodel;
