//! Routing of CX/CX†/SigmaX(12) circuits by Steiner-Gauss elimination over GF(3).

mod gf3;
mod synth;
mod topology;

pub use gf3::{apply_row_op, parity_map_of_circuit, ParityJson, RowOp, TernaryParityMap};
pub use synth::{
    batch_route, naive_baseline_cx_count, steiner_gauss_synthesize, verify_route, BatchItem, LoggedOp, RouteCheck,
    Synthesis,
};
pub use topology::{decreasing_steiner_tree, steiner_tree, SteinerTree, Topology, TopologyJson};
