//! Seeded random patterns that admit a Pauli flow.

use std::collections::BTreeMap;

use pauliflow::flow::find_pauli_flow;
use pauliflow::{Angle, Label, LabelledOpenGraph, MeasurementPattern};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LABELS: [Label; 6] = [Label::XY, Label::XZ, Label::YZ, Label::X, Label::Y, Label::Z];
const MAX_ATTEMPTS: usize = 10_000;

fn random_angle(rng: &mut impl Rng, label: Label) -> Angle {
    if label.is_pauli() {
        return if rng.gen_bool(0.5) { Angle::pi() } else { Angle::zero() };
    }
    let den = *[1i64, 2, 3, 4, 5, 7, 8].choose(rng).expect("non-empty");
    Angle::new(rng.gen_range(0..2 * den), den).expect("non-zero denominator")
}

/// One labelled pattern on `n` vertices, not necessarily flowful. Inputs
/// carry labels from {XY, X, Y}, since a planar XZ/YZ or Z input can never
/// be corrected.
pub fn random_pattern(rng: &mut impl Rng, n: usize) -> MeasurementPattern {
    let width = n.saturating_sub(1).to_string().len();
    let vs: Vec<String> = (0..n).map(|k| format!("v{k:0width$}")).collect();
    let edge_p = if n <= 8 { 0.45 } else { (4.0 / n as f64).max(0.1) };
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(edge_p) {
                edges.push((vs[a].clone(), vs[b].clone()));
            }
        }
    }
    let mut shuffled = vs.clone();
    shuffled.shuffle(rng);
    let n_out = rng.gen_range(1..=n.div_ceil(2));
    let outputs: Vec<String> = shuffled[..n_out].to_vec();
    shuffled.shuffle(rng);
    let n_in = rng.gen_range(0..=n_out.min(2 + n / 10));
    let inputs: Vec<String> = shuffled[..n_in].to_vec();
    let mut labels = Vec::new();
    let mut angles = BTreeMap::new();
    for v in vs.iter().filter(|v| !outputs.contains(v)) {
        let l = if inputs.contains(v) {
            *[Label::XY, Label::X, Label::Y].choose(rng).expect("non-empty")
        } else {
            *LABELS.choose(rng).expect("non-empty")
        };
        labels.push((v.clone(), l));
        angles.insert(v.clone(), random_angle(rng, l));
    }
    let g = LabelledOpenGraph::new(vs, edges, inputs, outputs, labels).expect("well-formed by construction");
    MeasurementPattern::new(g, angles).expect("angles match labels")
}

/// Rejection-sample a pattern on `n` vertices whose graph has a Pauli flow.
pub fn generate(n: usize, seed: u64) -> Result<MeasurementPattern, String> {
    if n == 0 {
        return Err("need at least one vertex".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let p = random_pattern(&mut rng, n);
        if find_pauli_flow(&p.graph).is_some() {
            return Ok(p);
        }
    }
    Err(format!("no flowful pattern on {n} vertices in {MAX_ATTEMPTS} attempts"))
}
