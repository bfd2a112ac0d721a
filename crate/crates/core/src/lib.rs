//! Differential operators, univalence criteria and two-point distortion
//! bounds for planar harmonic mappings `f = h + conj(g)` of the unit disc,
//! together with a sampling harness that checks every bound numerically.

// `!(x >= lo)` checks are deliberate: they reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod bounds;
pub mod catalog;
pub mod criteria;
pub mod descriptor;
pub mod disk;
pub mod error;
pub mod harmonic;
pub mod jet;
pub mod norms;
pub mod operators;
pub mod parallel;
mod quadrature;
pub mod series;
pub mod verifier;

pub use analytic::{eval_derivatives, koebe_transform, AnalyticMap};
pub use disk::{automorphism, hyperbolic, pseudo_hyperbolic, DiskPoint};
pub use error::{Error, Result};
pub use harmonic::{from_h_and_omega, harmonic_mobius, jacobian, Dilatation, HarmonicMap};
pub use series::TaylorSeries;
