//! Orbit geometry of unramified Vogan varieties.
//!
//! The crate enumerates the orbits of `H_λ` on `V_λ`, computes their
//! dimensions, closure order, smoothness of closures, Pyasetskii duals,
//! Arthur-type verdicts and stabilizer component groups, and assembles
//! Kazhdan-Lusztig multiplicity matrices for general-linear chains.

pub mod arthur;
pub mod bridge;
pub mod conventions;
pub mod dataset;
pub mod error;
pub mod geometry;
pub mod kl;
pub mod lattice;
pub mod linalg;
pub mod orbits;
pub mod poly;
pub mod report;
pub mod variety;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{ComponentGroup, IntMatrix, RootDatum};
pub use orbits::{Multisegment, OrbitLabel, OrbitRecord, OrbitTable, RankMatrix, Segment};
pub use variety::{build_variety, Family, GradedDims, VoganVariety};
