mod common;

use common::{absorbed_pddag, gadget_circuit};
use pauliflow::oracle::{circuit_semantics, equal_up_to_phase, pddag_semantics, DEFAULT_TOL};
use pauliflow::pddag::{build_deps, IsometryTableau, Node, Pddag};
use pauliflow::{Angle, Rotation, SignedPauliString};
use proptest::prelude::*;

fn s(x: &str) -> SignedPauliString {
    x.parse().unwrap()
}

fn q(x: &str) -> String {
    x.to_string()
}

fn angles() -> [Angle; 8] {
    std::array::from_fn(|k| Angle::new(k as i64 + 1, 9).unwrap())
}

#[test]
fn gadget_circuit_gives_the_printed_dag() {
    let a = angles();
    let d = absorbed_pddag(&gadget_circuit(&a));
    let t = &d.tableau;
    assert_eq!((&t.inputs[0].x, &t.inputs[1].x), (&s("Y(1)"), &s("X(2)")));
    assert_eq!((&t.inputs[0].z, &t.inputs[1].z), (&s("Z(1)"), &s("Z(2)")));
    assert!(t.free.is_empty());
    let want = [
        ("Z(1)", -a[0]),
        ("Z(2)", -a[1]),
        ("X(1)", a[2]),
        ("Y(1)X(2)", -a[3]),
        ("X(2)", a[4]),
        ("Y(1)X(2)", -a[5]),
        ("Z(1)", -a[6]),
        ("Y(2)", -a[7]),
    ];
    let got: Vec<(SignedPauliString, Angle)> = d.nodes.iter().map(|n| n.rotation.canonical()).collect();
    let want: Vec<(SignedPauliString, Angle)> =
        want.iter().map(|(x, a)| Rotation::new(s(x), *a).unwrap().canonical()).collect();
    assert_eq!(got, want);
    let mut deps = d.deps.clone();
    deps.sort();
    let printed = vec![(0, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 5), (3, 6), (3, 7), (4, 7), (5, 6), (5, 7)];
    assert_eq!(deps, printed);
}

#[test]
fn gadget_rotations_merge() {
    let a = angles();
    let d = absorbed_pddag(&gadget_circuit(&a));
    assert!(!d.precedes(3, 5) && !d.precedes(5, 3));
    let m = d.merge_nodes(3, 5).unwrap();
    assert_eq!(m.nodes.len(), 7);
    assert_eq!(m.nodes[3].rotation.string, s("Y(1)X(2)"));
    assert_eq!(m.nodes[3].rotation.angle, -a[3] - a[5]);
    assert!(equal_up_to_phase(&pddag_semantics(&m).unwrap(), &pddag_semantics(&d).unwrap(), DEFAULT_TOL).unwrap());
    // The X(2) rotation is only ordered against Z(2) before and Y(2) after.
    assert!(d.precedes(1, 4) && d.precedes(4, 7));
    for k in [0, 2, 3, 5, 6] {
        assert!(!d.precedes(k, 4) && !d.precedes(4, k), "{k}");
    }
    assert!(d.merge_nodes(2, 6).is_err());
}

#[test]
fn gadget_circuit_matches_its_dag() {
    for seed in 0..5i64 {
        let a: [Angle; 8] = std::array::from_fn(|k| Angle::new(2 * (k as i64 + seed) + 1, 11 + seed).unwrap());
        let c = gadget_circuit(&a);
        let d = absorbed_pddag(&c);
        assert!(equal_up_to_phase(&circuit_semantics(&c).unwrap(), &pddag_semantics(&d).unwrap(), DEFAULT_TOL).unwrap());
    }
}

#[test]
fn small_dag_shapes() {
    let r = |x: &str| Rotation::new(s(x), Angle::new(1, 5).unwrap()).unwrap();
    assert!(build_deps(&[r("Z(a)"), r("Z(b)"), r("Z(a)Z(b)")]).is_empty());
    let chain: Vec<Rotation> = (0..5).map(|k| r(if k % 2 == 0 { "X(a)" } else { "Z(a)" })).collect();
    assert_eq!(build_deps(&chain), vec![(0, 1), (1, 2), (2, 3), (3, 4)]);
}

fn rotations() -> impl Strategy<Value = Vec<Rotation>> {
    let letters = prop::sample::select(vec!["I", "X", "Y", "Z"]);
    prop::collection::vec((prop::collection::vec(letters, 3), 1..16i64), 1..9).prop_map(|rs| {
        rs.into_iter()
            .map(|(ls, k)| {
                let text: String = ls.iter().zip(["a", "b", "c"]).map(|(l, w)| format!("{l}({w})")).collect();
                Rotation::new(s(&text), Angle::new(k, 8).unwrap()).unwrap()
            })
            .collect()
    })
}

fn reachable(deps: &[(usize, usize)], j: usize, k: usize) -> bool {
    let mut stack = vec![j];
    let mut seen = vec![false; k + 1];
    while let Some(x) = stack.pop() {
        if x == k {
            return true;
        }
        for &(a, b) in deps {
            if a == x && b <= k && !seen[b] {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    false
}

proptest! {
    #[test]
    fn dependencies_cover_anticommuting_pairs(rs in rotations()) {
        let deps = build_deps(&rs);
        for &(j, k) in &deps {
            prop_assert!(j < k && !rs[j].string.commutes(&rs[k].string));
            // Hasse edges are not implied by a longer path.
            let rest: Vec<(usize, usize)> = deps.iter().copied().filter(|&e| e != (j, k)).collect();
            prop_assert!(!reachable(&rest, j, k));
        }
        for j in 0..rs.len() {
            for k in j + 1..rs.len() {
                if !rs[j].string.commutes(&rs[k].string) {
                    prop_assert!(reachable(&deps, j, k));
                }
            }
        }
    }

    #[test]
    fn absorbing_cliffords_preserves_the_map(rs in rotations()) {
        let qs = vec![q("a"), q("b"), q("c")];
        let d = Pddag::new(IsometryTableau::identity(&qs), rs.into_iter().map(Node::new).collect(), Vec::new());
        let e = d.absorb_cliffords().unwrap();
        prop_assert!(e.nodes.iter().all(|n| !n.rotation.angle.is_clifford()));
        prop_assert!(equal_up_to_phase(&pddag_semantics(&d).unwrap(), &pddag_semantics(&e).unwrap(), DEFAULT_TOL).unwrap());
    }
}
