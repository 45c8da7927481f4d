//! Fidelity simulation of ZZ-interaction gates compiled three ways (one
//! parametric controlled-phase gate, two CZ gates, two iSWAP gates) under
//! depolarizing noise and Gaussian coherent over-rotations.
//!
//! Everything here is `no_std` + `alloc`; file formats, the CLI and the
//! parallel runner live in the `zzgate` crate.

#![no_std]

extern crate alloc;

pub mod analytic;
pub mod channel;
pub mod decomposition;
pub mod error;
pub mod experiment;
pub mod fidelity;
pub mod fit;
pub mod gates;
pub mod linalg;
pub mod state;
pub mod verify;

pub use channel::{make_depolarizing, sample_coherent_draw, CoherentErrorDraw, DepolarizingChannel, NoiseModel};
pub use decomposition::{Decomposition, DecompositionKind};
pub use error::{ConfigError, FidelityError, LinalgError, NoiseError, StateError};
pub use experiment::{mc_average, recommend, McEstimate, Recommendation, SweepConfig, SweepRecord};
pub use fidelity::{gate_fidelity_numeric, Fidelity, InputStateSet, NoisyGateEvaluator};
pub use linalg::{Ket2, Ket4, Mat2, Mat4, C64};
pub use state::{DensityMatrix, PureState};
