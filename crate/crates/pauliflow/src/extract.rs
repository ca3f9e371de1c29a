//! Extraction strings and the pattern to Pddag pipeline.

use std::collections::BTreeMap;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::flow::{self, FocussedSet, PauliFlowData};
use crate::graph::{Label, MeasurementPattern, VertexSet};
use crate::pauli::{gate_to_exponentials, Pauli, Phase, Rotation, SignedPauliString};
use crate::pddag::{InputRows, IsometryTableau, Node, Pddag};
use crate::synth;

/// A primary extraction string: the axis on the vertex itself and the
/// signed string on the outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractionString {
    pub axis: Pauli,
    pub string: SignedPauliString,
}

/// Which Pauli a correction set puts on its own vertex.
pub fn primary_axis(pattern: &MeasurementPattern, flow: &PauliFlowData, v: &str) -> Result<Pauli> {
    let p = flow.correction(v)?;
    let odd = pattern.graph.odd_neighbourhood(p)?;
    match (p.contains(v), odd.contains(v)) {
        (true, false) => Ok(Pauli::X),
        (true, true) => Ok(Pauli::Y),
        (false, true) => Ok(Pauli::Z),
        (false, false) => Err(Error::InvalidFlow(format!("`{v}` is in neither p({v}) nor its odd neighbourhood"))),
    }
}

/// Output string with exact sign for a (focussed) set `s`. Pauli-measured
/// vertices at angle pi in `s` or `Odd(s)` contribute a sign, except
/// `exclude`, whose letter is the one being extracted.
pub fn set_string(pattern: &MeasurementPattern, s: &VertexSet, exclude: Option<&str>) -> Result<SignedPauliString> {
    let g = &pattern.graph;
    let odd = g.odd_neighbourhood(s)?;
    let both = s.intersection(&odd).count();
    if both % 2 == 1 {
        return Err(Error::InvalidFlow(format!("|S & Odd(S)| is odd for {s:?}")));
    }
    let absorbed = s
        .union(&odd)
        .filter(|w| Some(w.as_str()) != exclude)
        .filter(|w| {
            g.label(w).is_some_and(Label::is_pauli) && pattern.angle(w).is_some_and(|a| a.num() == 1 && a.den() == 1)
        })
        .count();
    let c = g.edges_within(s) + both / 2 + absorbed;
    let mut out = SignedPauliString::identity().with_phase(Phase::sign(c % 2 == 1));
    for o in g.outputs() {
        let letter = Pauli::from_bits(s.contains(o), odd.contains(o));
        out.set(o.clone(), letter);
    }
    Ok(out)
}

pub fn extraction_string(pattern: &MeasurementPattern, flow: &PauliFlowData, v: &str) -> Result<ExtractionString> {
    Ok(ExtractionString {
        axis: primary_axis(pattern, flow, v)?,
        string: set_string(pattern, flow.correction(v)?, Some(v))?,
    })
}

pub fn focussed_string(pattern: &MeasurementPattern, fset: &FocussedSet) -> Result<SignedPauliString> {
    set_string(pattern, &fset.members, None)
}

/// The correction set of the fresh vertex added by extending input `i`,
/// focussed over every measured vertex of the extended graph.
pub fn extended_input_set(pattern: &MeasurementPattern, flow: &PauliFlowData, i: &str) -> Result<VertexSet> {
    Ok(extended_input_parts(pattern, flow, i)?.0)
}

/// The extended input set together with the vertices whose correction sets
/// were added to build it.
pub fn extended_input_parts(
    pattern: &MeasurementPattern,
    flow: &PauliFlowData,
    i: &str,
) -> Result<(VertexSet, VertexSet)> {
    let g = &pattern.graph;
    let mut cur: VertexSet = [i.to_string()].into();
    let mut used = VertexSet::new();
    let measured: VertexSet = g.measured().cloned().collect();
    for w in flow.order.linearize(&measured) {
        if !flow::verify_focussed(g, &cur, [&w])? {
            cur = crate::graph::sym_diff(&cur, flow.correction(&w)?);
            used.insert(w);
        }
    }
    Ok((cur, used))
}

/// Resolve the flow used for extraction: the supplied one (focussed if it
/// is not already), or a freshly found and focussed flow.
pub fn prepare_flow(pattern: &MeasurementPattern, supplied: Option<&PauliFlowData>) -> Result<PauliFlowData> {
    let g = &pattern.graph;
    match supplied {
        Some(f) => {
            let v = flow::verify_flow(g, f);
            if !v.is_empty() {
                return Err(Error::InvalidFlow(format!("{} violations, first {:?}", v.len(), v[0])));
            }
            if flow::is_focussed_flow(g, f)? {
                Ok(f.clone())
            } else {
                flow::focus_flow(g, f)
            }
        }
        None => {
            let f = flow::find_pauli_flow(g).ok_or(Error::NoFlow)?;
            flow::focus_flow(g, &f)
        }
    }
}

/// Extract the Pddag of a pattern. Nodes are emitted for planar vertices in
/// a linear extension of the flow order and tagged with their vertex.
pub fn extract_pddag(
    pattern: &MeasurementPattern,
    flow_in: Option<&PauliFlowData>,
    fsets_in: Option<&[FocussedSet]>,
) -> Result<Pddag> {
    let g = &pattern.graph;
    let flow = prepare_flow(pattern, flow_in)?;
    let fsets = match fsets_in {
        Some(fs) => {
            for f in fs {
                if !flow::is_focussed_set(g, &f.members)? {
                    return Err(Error::Precondition(format!("{:?} is not a focussed set", f.members)));
                }
            }
            fs.to_vec()
        }
        None => flow::focussed_set_generators(g)?,
    };

    let measured: VertexSet = g.measured().cloned().collect();
    let mut nodes = Vec::new();
    for v in flow.order.linearize(&measured) {
        let label = g.label(&v).expect("measured");
        if !label.is_planar() {
            continue;
        }
        let s = extraction_string(pattern, &flow, &v)?.string;
        let s = if label == Label::YZ { s.negated() } else { s };
        let angle = pattern.angle(&v).expect("measured");
        nodes.push(Node::with_origin(Rotation::new(s, angle)?, v));
    }

    let mut inputs = Vec::new();
    for i in g.inputs() {
        let z = if g.is_output(i) {
            SignedPauliString::single(i.clone(), Pauli::Z)
        } else {
            extraction_string(pattern, &flow, i)?.string
        };
        let x = set_string(pattern, &extended_input_set(pattern, &flow, i)?, None)?;
        inputs.push(InputRows { input: i.clone(), z, x });
    }
    let free = fsets.iter().map(|f| focussed_string(pattern, f)).collect::<Result<Vec<_>>>()?;
    let tableau = IsometryTableau { outputs: g.outputs().iter().cloned().collect(), inputs, free };

    let mut trailing = Vec::new();
    for gate in &pattern.trailing {
        trailing.extend(gate_to_exponentials(gate)?);
    }
    Ok(Pddag::new(tableau, nodes, trailing))
}

/// Extract and synthesize in one step.
pub fn extract_circuit(pattern: &MeasurementPattern, lower_exp: bool) -> Result<Circuit> {
    synth::synthesize(&extract_pddag(pattern, None, None)?, lower_exp)
}

/// `F_{x -> y}`: whether `y` lies in `p(x)` or `Odd(p(x))`.
pub fn influence_table(pattern: &MeasurementPattern, flow: &PauliFlowData) -> Result<BTreeMap<(String, String), bool>> {
    let g = &pattern.graph;
    let mut out = BTreeMap::new();
    for x in g.measured() {
        for y in g.measured() {
            out.insert((x.clone(), y.clone()), flow.influences(g, x, y)?);
        }
    }
    Ok(out)
}
