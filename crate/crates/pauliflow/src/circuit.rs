//! Gate-level circuits over named wires.

use crate::angle::Angle;
use crate::pauli::Rotation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    H(String),
    S(String),
    Sdg(String),
    X(String),
    Z(String),
    RZ(String, Angle),
    RX(String, Angle),
    CX(String, String),
    CZ(String, String),
    CCX(String, String, String),
    /// Prepare a fresh wire in `|0>`.
    Init0(String),
    /// Pauli exponential `exp(i angle/2 P)`, kept abstract until lowered.
    Exp(Rotation),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::Sdg(_) => "Sdg",
            Gate::X(_) => "X",
            Gate::Z(_) => "Z",
            Gate::RZ(..) => "RZ",
            Gate::RX(..) => "RX",
            Gate::CX(..) => "CX",
            Gate::CZ(..) => "CZ",
            Gate::CCX(..) => "CCX",
            Gate::Init0(_) => "INIT0",
            Gate::Exp(_) => "EXP",
        }
    }

    pub fn qubits(&self) -> Vec<String> {
        match self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::X(q) | Gate::Z(q) | Gate::Init0(q) => {
                vec![q.clone()]
            }
            Gate::RZ(q, _) | Gate::RX(q, _) => vec![q.clone()],
            Gate::CX(a, b) | Gate::CZ(a, b) => vec![a.clone(), b.clone()],
            Gate::CCX(a, b, c) => vec![a.clone(), b.clone(), c.clone()],
            Gate::Exp(r) => r.string.support().map(str::to_string).collect(),
        }
    }

    /// Inverse gate, where it is again a single gate of this set.
    pub fn dagger(&self) -> Option<Gate> {
        Some(match self {
            Gate::S(q) => Gate::Sdg(q.clone()),
            Gate::Sdg(q) => Gate::S(q.clone()),
            Gate::RZ(q, a) => Gate::RZ(q.clone(), -*a),
            Gate::RX(q, a) => Gate::RX(q.clone(), -*a),
            Gate::Exp(r) => Gate::Exp(r.inverse()),
            Gate::Init0(_) => return None,
            g => g.clone(),
        })
    }
}

/// A circuit acting on named wires. `inputs` pairs each logical input with
/// the wire it enters on; every other wire must be prepared with `Init0`.
/// The wires, in order, are the outputs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Circuit {
    pub wires: Vec<String>,
    pub inputs: Vec<(String, String)>,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(wires: Vec<String>, inputs: Vec<(String, String)>) -> Self {
        Circuit { wires, inputs, gates: Vec::new() }
    }

    pub fn push(&mut self, g: Gate) {
        self.gates.push(g);
    }

    /// Count of gates other than preparations.
    pub fn gate_count(&self) -> usize {
        self.gates.iter().filter(|g| !matches!(g, Gate::Init0(_))).count()
    }
}
