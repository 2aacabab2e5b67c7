//! Exact construction and analysis of SL2-tilings.
//!
//! An SL2-tiling is a bi-infinite matrix over a commutative ring in which every
//! adjacent 2x2 minor equals 1. This crate builds the tilings of interest over
//! `Z`, `Z/NZ` and `Z[a1, a2, ...]`, classifies entries as tame or wild,
//! measures wild density, checks block ranks symbolically and searches residue
//! rings for tilings in which every entry is wild.

pub mod algebra;
pub mod analysis;
pub mod catalog;
pub mod io;
pub mod search;
pub mod tiling;
