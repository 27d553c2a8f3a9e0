//! Qutrit circuit compilation: gate set and dense simulation, Weyl and
//! Gell-Mann string algebra, string-exponential decomposition, ternary QAOA
//! layers for graph coloring, and GF(3) Steiner-Gauss routing.

pub mod circuit;
pub mod decompose;
pub mod error;
pub mod exec;
pub mod gate;
pub mod io;
pub mod qaoa;
pub mod routing;
pub mod sim;
pub mod weyl;

pub use circuit::{Circuit, CircuitJson};
pub use error::{Error, Result};
pub use exec::Exec;
pub use gate::{Gate, Subspace};
pub use sim::{apply_circuit, circuit_unitary, gate_unitary, phase_distance, DenseUnitary, StateVector};
