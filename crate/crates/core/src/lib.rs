//! Simulation of extended oracle algorithms, where an extra register `K`
//! holds the oracle's choice of function in superposition, together with
//! exact classical query complexity with and without half of the problem
//! revealed in advance, history reconstruction of the evaluation stage and
//! constructive synthesis of the final readout rotation.

pub mod algorithms;
pub mod bits;
pub mod entanglement;
pub mod error;
pub mod family;
pub mod format;
pub mod gf2;
pub mod gates;
pub mod histories;
pub mod query;
pub mod readout;
pub mod reference;
pub mod state;
pub mod suite;

pub use bits::Bits;
pub use error::{Error, Result};
pub use family::{builtin, builtin_by_name, BuiltinFamily, FunctionFamily};
pub use state::{prepare_extended, PhaseAssignment, RegisterLayout, StateVector, VPreparation};
