//! Pauli flow for measurement-based quantum computing.
//!
//! The crate covers the whole path from a labelled open graph to a gate
//! circuit: finding a maximally delayed Pauli flow, focussing it, reading off
//! signed extraction strings, assembling a Pauli dependency DAG ([`Pddag`]) and
//! synthesising a circuit from it. Pattern rewrites (Pauli relabelling,
//! Z-elimination, local complementation, pivoting and flow switching) are
//! provided together with their DAG-level simulations, and a dense oracle
//! evaluates patterns, circuits and DAGs as matrices.
//!
//! ```
//! use pauliflow::{extract, flow, graph::MeasurementPattern};
//!
//! let pattern: MeasurementPattern = MeasurementPattern::builder()
//!     .vertices(["i", "o"])
//!     .edge("i", "o")
//!     .inputs(["i"])
//!     .outputs(["o"])
//!     .measure("i", pauliflow::Label::XY, pauliflow::Angle::new(1, 4).unwrap())
//!     .build()
//!     .unwrap();
//! let found = flow::find_pauli_flow(&pattern.graph).expect("a flow exists");
//! assert!(flow::verify_flow(&pattern.graph, &found).is_empty());
//! let dag = extract::extract_pddag(&pattern, None, None).unwrap();
//! assert_eq!(dag.nodes.len(), 1);
//! ```

pub mod angle;
pub mod circuit;
pub mod error;
pub mod extract;
pub mod f2;
pub mod flow;
pub mod graph;
pub mod oracle;
pub mod pauli;
pub mod pddag;
pub mod rewrite;
pub mod synth;

pub use angle::Angle;
pub use circuit::{Circuit, Gate};
pub use error::{Error, Result};
pub use flow::{FocussedSet, Order, PauliFlowData};
pub use graph::{Label, LabelledOpenGraph, MeasurementPattern, VertexSet};
pub use pauli::{Pauli, Phase, Rotation, SignedPauliString};
pub use pddag::{IsometryTableau, Pddag};
