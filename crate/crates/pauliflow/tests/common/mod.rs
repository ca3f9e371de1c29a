#![allow(dead_code)]

pub mod brute;
pub mod dense;

use pauliflow::flow::find_pauli_flow;
use pauliflow::graph::{LabelledOpenGraph, MeasurementPattern};
use pauliflow::circuit::{Circuit, Gate};
use pauliflow::pauli::gate_to_exponentials;
use pauliflow::pddag::{IsometryTableau, Node, Pddag};
use pauliflow::{Angle, Label};
use rand::seq::SliceRandom;
use rand::Rng;

pub const LABELS: [Label; 6] = [Label::XY, Label::XZ, Label::YZ, Label::X, Label::Y, Label::Z];

pub fn random_angle(rng: &mut impl Rng, label: Label) -> Angle {
    if label.is_pauli() {
        if rng.gen_bool(0.5) {
            Angle::pi()
        } else {
            Angle::zero()
        }
    } else {
        let den = *[1i64, 2, 3, 4, 5, 7, 8].choose(rng).unwrap();
        Angle::new(rng.gen_range(0..2 * den), den).unwrap()
    }
}

/// A random labelled pattern on `n` vertices, not necessarily flowful.
pub fn random_pattern(rng: &mut impl Rng, n: usize, edge_p: f64) -> MeasurementPattern {
    let vs: Vec<String> = (0..n).map(|k| format!("v{k}")).collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(edge_p) {
                edges.push((vs[a].clone(), vs[b].clone()));
            }
        }
    }
    let mut order = vs.clone();
    order.shuffle(rng);
    let n_out = rng.gen_range(1..=n.div_ceil(2));
    let outputs: Vec<String> = order[..n_out].to_vec();
    let n_in = rng.gen_range(0..=n_out.min(2));
    let mut shuffled = vs.clone();
    shuffled.shuffle(rng);
    let inputs: Vec<String> = shuffled[..n_in].to_vec();
    let mut labels = Vec::new();
    let mut angles = std::collections::BTreeMap::new();
    for v in &vs {
        if outputs.contains(v) {
            continue;
        }
        let l = if inputs.contains(v) {
            *[Label::XY, Label::X, Label::Y].choose(rng).unwrap()
        } else {
            *LABELS.choose(rng).unwrap()
        };
        labels.push((v.clone(), l));
        angles.insert(v.clone(), random_angle(rng, l));
    }
    let g = LabelledOpenGraph::new(vs, edges, inputs, outputs, labels).unwrap();
    MeasurementPattern::new(g, angles).unwrap()
}

/// Rejection-sample a pattern that has a Pauli flow.
pub fn random_flowful(rng: &mut impl Rng, n: usize) -> MeasurementPattern {
    loop {
        let p = random_pattern(rng, n, 0.45);
        if find_pauli_flow(&p.graph).is_some() {
            return p;
        }
    }
}

pub fn angle(num: i64, den: i64) -> Angle {
    Angle::new(num, den).unwrap()
}

/// The seven-vertex worked example with one input and two outputs: `a_d` is the angle index
/// of the Y-measured vertex `d`.
pub fn worked_example(a_d: u8, angles: [Angle; 4]) -> MeasurementPattern {
    MeasurementPattern::builder()
        .vertices(["i", "a", "b", "c", "d", "o1", "o2"])
        .edge("i", "b")
        .edge("a", "b")
        .edge("a", "c")
        .edge("a", "d")
        .edge("b", "d")
        .edge("c", "d")
        .edge("c", "o1")
        .edge("d", "o2")
        .inputs(["i"])
        .outputs(["o1", "o2"])
        .measure("i", Label::XY, angles[0])
        .measure("a", Label::YZ, angles[1])
        .measure("b", Label::XY, angles[2])
        .measure("c", Label::XY, angles[3])
        .measure("d", Label::Y, if a_d == 1 { Angle::pi() } else { Angle::zero() })
        .build()
        .unwrap()
}

pub fn concrete_angles() -> [Angle; 4] {
    [angle(1, 4), angle(1, 3), angle(1, 5), angle(1, 7)]
}

/// Conjugate `inner` on its wires by `pre` and its inverse.
pub fn sandwich(pre: &[Gate], inner: Gate) -> Vec<Gate> {
    let mut out = pre.to_vec();
    out.push(inner);
    out.extend(pre.iter().rev().map(|g| g.dagger().unwrap()));
    out
}

/// Two-qubit circuit with eight non-Clifford rotations: plain RZs, sign-flipped
/// X rotations, two `Y1 X2` gadgets built from a CX ladder, and a `Y2` rotation,
/// all after an initial `S` on qubit 1.
pub fn gadget_circuit(a: &[Angle; 8]) -> Circuit {
    let (one, two) = ("1".to_string(), "2".to_string());
    let to_x = |w: &String| vec![Gate::Z(w.clone()), Gate::H(w.clone())];
    let to_y = |w: &String| vec![Gate::Sdg(w.clone()), Gate::H(w.clone())];
    let ladder = vec![Gate::Sdg(one.clone()), Gate::H(one.clone()), Gate::H(two.clone()), Gate::CX(one.clone(), two.clone())];
    let mut c = Circuit::new(vec![one.clone(), two.clone()], vec![(one.clone(), one.clone()), (two.clone(), two.clone())]);
    let mut gates = vec![Gate::S(one.clone()), Gate::RZ(one.clone(), a[0]), Gate::RZ(two.clone(), a[1])];
    gates.extend(sandwich(&to_x(&one), Gate::RZ(one.clone(), a[2])));
    gates.extend(sandwich(&ladder, Gate::RZ(two.clone(), a[3])));
    gates.extend(sandwich(&to_x(&two), Gate::RZ(two.clone(), a[4])));
    gates.extend(sandwich(&ladder, Gate::RZ(two.clone(), a[5])));
    gates.push(Gate::RZ(one.clone(), a[6]));
    gates.extend(sandwich(&to_y(&two), Gate::RZ(two.clone(), a[7])));
    for g in gates {
        c.push(g);
    }
    c
}

/// The circuit's exponentials with every Clifford pushed into the tableau.
pub fn absorbed_pddag(c: &Circuit) -> Pddag {
    let nodes = c
        .gates
        .iter()
        .flat_map(|g| gate_to_exponentials(g).unwrap())
        .map(Node::new)
        .collect();
    Pddag::new(IsometryTableau::identity(&c.wires), nodes, Vec::new()).absorb_cliffords().unwrap()
}
