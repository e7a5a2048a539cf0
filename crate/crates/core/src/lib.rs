//! Cut-and-project model sets, weighted Dirac combs on them, their
//! autocorrelation and its decomposition into strongly almost periodic,
//! null-weakly almost periodic and spectral parts.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod autocorr;
pub mod catalog;
pub mod comb;
pub mod cps;
pub mod diffraction;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod measure;
pub mod prng;
pub mod spatial;
pub mod summation;
pub mod window;

pub use autocorr::{
    decompose, gamma_s_oracle, null_mean, support_check, uniqueness_check, Autocorrelation, Decomposition,
    EdgeCorrection, OracleKind, VanHoveSequence,
};
pub use comb::{dominating_comb, DeloneRadii, InternalWeight, PointSetPatch, WeightModel, WeightedComb};
pub use cps::{DualSchemeBasis, Embedded, IntPoint, SchemeBasis};
pub use error::{Error, Result};
pub use geometry::{AxisBox, Interval, RVec};
pub use measure::{DiscreteMeasure, Shift};
pub use window::{Membership, PredicateWindow, WindowUnion};
