//! Frozen conventions for the multisegment-to-permutation bridge.
//!
//! Selected by `bridge::calibrate` on the Steinberg GL_3 and two-eigenvalue
//! (2,2) varieties; the test `frozen_convention_passes_calibration` keeps
//! this value honest.

use crate::bridge::{BridgeConvention, CosetRep, KlOrder};

pub const FROZEN: BridgeConvention = BridgeConvention {
    standard: true,
    transpose: false,
    rep: CosetRep::Max,
    order: KlOrder::SmallerFirst,
};
