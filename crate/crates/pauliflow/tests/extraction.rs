mod common;

use std::collections::BTreeMap;

use common::*;
use pauliflow::extract::{extract_pddag, extraction_string, primary_axis};
use pauliflow::flow::{verify_flow, FocussedSet, Order, PauliFlowData};
use pauliflow::graph::vset;
use pauliflow::oracle::{equal_up_to_scalar, pattern_semantics, pddag_semantics, circuit_semantics, DEFAULT_TOL};
use pauliflow::synth::{lower_exp, synthesize};
use pauliflow::{Angle, Pauli, SignedPauliString};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn s(x: &str) -> SignedPauliString {
    x.parse().unwrap()
}

pub fn example_flow() -> PauliFlowData {
    let p: BTreeMap<String, _> = [
        ("i", vset(["b", "o2"])),
        ("a", vset(["a", "c", "d", "o2"])),
        ("b", vset(["c", "d", "o1"])),
        ("c", vset(["o1"])),
        ("d", vset(["o2"])),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    let depth = [("i", 3), ("a", 2), ("b", 2), ("c", 1), ("d", 1), ("o1", 0), ("o2", 0)]
        .into_iter()
        .map(|(k, d)| (k.to_string(), d))
        .collect();
    PauliFlowData { p, order: Order::Depth(depth) }
}

#[test]
fn example_flow_is_valid() {
    let pat = worked_example(0, concrete_angles());
    assert!(verify_flow(&pat.graph, &example_flow()).is_empty());
    assert_eq!(primary_axis(&pat, &example_flow(), "a").unwrap(), Pauli::X);
    assert_eq!(primary_axis(&pat, &example_flow(), "b").unwrap(), Pauli::Z);
}

#[test]
fn example_pddag_matches_printed_form() {
    for a_d in [0u8, 1] {
        let pat = worked_example(a_d, concrete_angles());
        let fsets = [FocussedSet::new(vset(["c", "o2"]))];
        let d = extract_pddag(&pat, Some(&example_flow()), Some(&fsets)).unwrap();
        let sign = |neg: bool| if neg { "-" } else { "" };
        let ad = a_d == 1;
        let want = [
            ("i", "X(o2)".to_string()),
            ("a", format!("{}Z(o1)Y(o2)", sign(ad))),
            ("b", format!("{}Y(o1)Z(o2)", sign(!ad))),
            ("c", "X(o1)".to_string()),
        ];
        assert_eq!(d.nodes.len(), 4);
        for (k, (v, str_)) in want.iter().enumerate() {
            assert_eq!(d.nodes[k].origin.as_deref(), Some(*v));
            assert_eq!(d.nodes[k].rotation.string, s(str_), "node {v} at a_d={a_d}");
            assert_eq!(d.nodes[k].rotation.angle, pat.angle(v).unwrap());
        }
        assert_eq!(d.tableau.inputs[0].x, s(&format!("{}Y(o1)Z(o2)", sign(!ad))));
        assert_eq!(d.tableau.inputs[0].z, s("X(o2)"));
        assert_eq!(d.tableau.free, vec![s("Z(o1)X(o2)")]);
        let deps: std::collections::BTreeSet<_> = d.deps_by_origin();
        let want_deps = [("i", "a"), ("i", "b"), ("a", "c"), ("b", "c")]
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(deps, want_deps);
    }
}

#[test]
fn extraction_strings_of_the_example() {
    let pat = worked_example(0, concrete_angles());
    let e = extraction_string(&pat, &example_flow(), "c").unwrap();
    assert_eq!((e.axis, e.string), (Pauli::Z, s("X(o1)")));
}

#[test]
fn example_semantics_survive_synthesis() {
    for a_d in [0u8, 1] {
        let pat = worked_example(a_d, concrete_angles());
        let fsets = [FocussedSet::new(vset(["c", "o2"]))];
        let d = extract_pddag(&pat, Some(&example_flow()), Some(&fsets)).unwrap();
        let m = pattern_semantics(&pat).unwrap();
        assert!(equal_up_to_scalar(&m, &pddag_semantics(&d).unwrap(), DEFAULT_TOL).unwrap());
        let c = synthesize(&d, false).unwrap();
        assert!(equal_up_to_scalar(&m, &circuit_semantics(&c).unwrap(), DEFAULT_TOL).unwrap());
        let lowered = lower_exp(&c);
        assert!(equal_up_to_scalar(&m, &circuit_semantics(&lowered).unwrap(), DEFAULT_TOL).unwrap());
    }
}

#[test]
fn single_xy_line_is_hadamard_and_rz() {
    let a = angle(1, 3);
    let pat = pauliflow::MeasurementPattern::builder()
        .vertices(["i", "o"])
        .edge("i", "o")
        .inputs(["i"])
        .outputs(["o"])
        .measure("i", pauliflow::Label::XY, a)
        .build()
        .unwrap();
    let mut want = pauliflow::Circuit::new(vec!["o".into()], vec![("i".into(), "o".into())]);
    want.push(pauliflow::Gate::RZ("o".into(), -a));
    want.push(pauliflow::Gate::H("o".into()));
    let m = pattern_semantics(&pat).unwrap();
    assert!(equal_up_to_scalar(&m, &circuit_semantics(&want).unwrap(), DEFAULT_TOL).unwrap());
    let c = pauliflow::extract::extract_circuit(&pat, true).unwrap();
    assert!(equal_up_to_scalar(&m, &circuit_semantics(&c).unwrap(), DEFAULT_TOL).unwrap());
}

#[test]
fn random_patterns_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..120 {
        let n = 2 + k % 7;
        let pat = random_flowful(&mut rng, n);
        let d = extract_pddag(&pat, None, None).unwrap();
        let m = pattern_semantics(&pat).unwrap();
        assert!(
            equal_up_to_scalar(&m, &pddag_semantics(&d).unwrap(), DEFAULT_TOL).unwrap(),
            "pddag differs for {pat:?}\n{d:?}"
        );
        let c = synthesize(&d, true).unwrap();
        assert!(equal_up_to_scalar(&m, &circuit_semantics(&c).unwrap(), DEFAULT_TOL).unwrap(), "circuit differs for {pat:?}");
    }
}

#[test]
fn pi_measured_pauli_vertices_flip_signs() {
    let pat = worked_example(1, [Angle::zero(); 4]);
    let d = extract_pddag(&pat, Some(&example_flow()), None).unwrap();
    assert!(equal_up_to_scalar(&pattern_semantics(&pat).unwrap(), &pddag_semantics(&d).unwrap(), DEFAULT_TOL).unwrap());
}
