//! Pattern rewrites with their flow updates and the matching sequences of
//! Pddag moves.
//!
//! Every rewrite returns both the Pddag extracted from the rewritten pattern
//! and the one obtained by simulating the rewrite on the original Pddag, so
//! callers can check that the two agree exactly.

use std::collections::BTreeMap;

use crate::angle::Angle;
use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::extract::{extended_input_parts, extract_pddag, focussed_string, prepare_flow};
use crate::flow::{self, FocussedSet, Order, PauliFlowData};
use crate::graph::{sym_diff, Label, LabelledOpenGraph, MeasurementPattern, VertexSet};
use crate::pauli::{Pauli, Rotation, SignedPauliString};
use crate::pddag::{Destination, Pddag, RowRef};

#[derive(Clone, Debug)]
pub struct RewriteReport {
    pub pattern: MeasurementPattern,
    pub flow: PauliFlowData,
    pub fsets: Vec<FocussedSet>,
    pub via_pattern: Pddag,
    pub via_simulation: Pddag,
}

impl RewriteReport {
    /// First difference between the two Pddags, if any.
    pub fn mismatch(&self) -> Option<String> {
        self.via_pattern.difference(&self.via_simulation)
    }
}

/// Which of the two local complementation identities to use. They differ by
/// the sign of every quarter turn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Direction {
    #[default]
    Plus,
    Minus,
}

impl Direction {
    fn sign(self) -> i64 {
        match self {
            Direction::Plus => 1,
            Direction::Minus => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Direction::Plus => Direction::Minus,
            Direction::Minus => Direction::Plus,
        }
    }
}

/// Pattern, focussed flow, focussed sets and the Pddag they extract to.
#[derive(Clone, Debug)]
struct State {
    pattern: MeasurementPattern,
    flow: PauliFlowData,
    fsets: Vec<FocussedSet>,
}

impl State {
    fn new(pattern: &MeasurementPattern, flow: Option<&PauliFlowData>, fsets: Option<&[FocussedSet]>) -> Result<Self> {
        let flow = prepare_flow(pattern, flow)?;
        let fsets = match fsets {
            Some(f) => f.to_vec(),
            None => flow::focussed_set_generators(&pattern.graph)?,
        };
        Ok(State { pattern: pattern.clone(), flow, fsets })
    }

    fn extract(&self) -> Result<Pddag> {
        extract_pddag(&self.pattern, Some(&self.flow), Some(&self.fsets))
    }

    fn report(self, via_simulation: Pddag) -> Result<RewriteReport> {
        let via_pattern = self.extract()?;
        Ok(RewriteReport { pattern: self.pattern, flow: self.flow, fsets: self.fsets, via_pattern, via_simulation })
    }

    /// Measured vertices latest first.
    fn latest_first(&self) -> Vec<String> {
        let measured: VertexSet = self.pattern.graph.measured().cloned().collect();
        let mut out = self.flow.order.linearize(&measured);
        out.reverse();
        out
    }
}

fn node_of(d: &Pddag, v: &str) -> Result<usize> {
    d.find_origin(v).ok_or_else(|| Error::Precondition(format!("no node extracted from `{v}`")))
}

fn label_of(g: &LabelledOpenGraph, u: &str) -> Result<Label> {
    if !g.contains(u) {
        return Err(Error::UnknownVertex(u.to_string()));
    }
    g.label(u).ok_or_else(|| Error::Precondition(format!("`{u}` is an output")))
}

fn quarter(a: Angle) -> Result<u8> {
    a.quarter_index().ok_or_else(|| Error::NonClifford(a.to_string()))
}

fn single(q: &str, p: Pauli) -> SignedPauliString {
    SignedPauliString::single(q, p)
}

/// Pull rotations to the end so that they appear in `rots` order at the
/// front of the trailing list.
fn pull_all_to_end(mut d: Pddag, rots: &[Rotation]) -> Result<Pddag> {
    for r in rots.iter().rev() {
        d = d.pull_rotation_from_tableau(r, Destination::End)?;
    }
    Ok(d)
}

fn gates_as_rotations(gates: &[Gate]) -> Result<Vec<Rotation>> {
    let mut out = Vec::new();
    for g in gates {
        out.extend(crate::pauli::gate_to_exponentials(g)?);
    }
    Ok(out)
}

fn prepend_trailing(pattern: &mut MeasurementPattern, gates: Vec<Gate>) {
    let mut t = gates;
    t.append(&mut pattern.trailing);
    pattern.trailing = t;
}

/// New measurement for a planar vertex relabelled as a Pauli measurement.
pub fn relabel_measurement(label: Label, angle: Angle) -> Result<(Label, Angle)> {
    let odd = quarter(angle)? % 2 == 1;
    let shifted = angle - Angle::half_pi();
    Ok(match (label, odd) {
        (Label::XY, false) => (Label::X, angle),
        (Label::XY, true) => (Label::Y, shifted),
        (Label::XZ, false) => (Label::Z, angle),
        (Label::XZ, true) => (Label::X, shifted),
        (Label::YZ, false) => (Label::Z, angle),
        (Label::YZ, true) => (Label::Y, shifted),
        (l, _) => return Err(Error::Precondition(format!("label {l} is not planar"))),
    })
}

/// Relabel a planar vertex with a Clifford angle as a Pauli measurement.
/// Simulated by pushing its node into the tableau.
pub fn relabel_pauli(
    pattern: &MeasurementPattern,
    flow: Option<&PauliFlowData>,
    fsets: Option<&[FocussedSet]>,
    u: &str,
) -> Result<RewriteReport> {
    let label = label_of(&pattern.graph, u)?;
    let angle = pattern.angle(u).expect("measured");
    let (new_label, new_angle) = relabel_measurement(label, angle)?;
    let st = State::new(pattern, flow, fsets)?;
    let before = st.extract()?;
    let sim = before.push_clifford_front(node_of(&before, u)?)?;

    let g = &pattern.graph;
    let mut after = st.clone();
    after.pattern.set_measurement(u, new_label, new_angle);
    if quarter(angle)? % 2 == 1 {
        let pu = st.flow.correction(u)?.clone();
        let touches = |s: &VertexSet| -> Result<bool> { Ok(s.contains(u) || g.odd_neighbourhood(s)?.contains(u)) };
        for (v, s) in after.flow.p.iter_mut() {
            if v != u && touches(s)? {
                *s = sym_diff(s, &pu);
            }
        }
        for f in after.fsets.iter_mut() {
            if touches(&f.members)? {
                f.members = sym_diff(&f.members, &pu);
            }
        }
    }
    after.report(sim)
}

fn without_vertex(order: &Order, u: &str) -> Order {
    match order {
        Order::Depth(d) => Order::Depth(d.iter().filter(|(v, _)| *v != u).map(|(v, k)| (v.clone(), *k)).collect()),
        Order::Relation(r) => Order::Relation(r.iter().filter(|(a, b)| a != u && b != u).cloned().collect()),
    }
}

/// Remove a vertex measured in a plane containing Z (or as Z) at angle
/// `0` or `pi`, updating its neighbours and adding `Z` on output neighbours
/// when the angle is `pi`.
pub fn eliminate_z(
    pattern: &MeasurementPattern,
    flow: Option<&PauliFlowData>,
    fsets: Option<&[FocussedSet]>,
    u: &str,
) -> Result<RewriteReport> {
    let g = &pattern.graph;
    let label = label_of(g, u)?;
    if !matches!(label, Label::XZ | Label::YZ | Label::Z) {
        return Err(Error::Precondition(format!("`{u}` is measured as {label}, not XZ, YZ or Z")));
    }
    let angle = pattern.angle(u).expect("measured");
    if !angle.is_pauli() {
        return Err(Error::Precondition(format!("`{u}` has angle {angle}, not 0 or pi")));
    }
    let a = !angle.is_zero();
    let st = State::new(pattern, flow, fsets)?;
    let order = st.latest_first();
    let ns: Vec<String> = g.neighbours(u)?.iter().cloned().collect();
    let out_ns: Vec<String> = ns.iter().filter(|w| g.is_output(w)).cloned().collect();

    // Pattern side.
    let mut after = st.clone();
    after.pattern.replace_graph(g.remove_vertex(u)?);
    if a {
        for w in &ns {
            if let Some(l) = g.label(w) {
                let al = pattern.angle(w).expect("measured");
                let new = match l {
                    Label::XY | Label::X | Label::Y => al + Angle::pi(),
                    Label::XZ | Label::YZ => -al,
                    Label::Z => al,
                };
                after.pattern.set_measurement(w, l, new);
            }
        }
        prepend_trailing(&mut after.pattern, out_ns.iter().map(|n| Gate::Z(n.clone())).collect());
    }
    let pu = st.flow.correction(u)?.clone();
    after.flow.p.remove(u);
    for s in after.flow.p.values_mut() {
        if s.contains(u) {
            *s = sym_diff(s, &pu);
        }
    }
    after.flow.order = without_vertex(&st.flow.order, u);

    // Pddag side.
    let mut d = st.extract()?;
    if label.is_planar() {
        d = d.push_clifford_front(node_of(&d, u)?)?;
    }
    if a {
        let zs: Vec<Rotation> = out_ns.iter().map(|n| Rotation { string: single(n, Pauli::Z), angle: Angle::pi() }).collect();
        d = pull_all_to_end(d, &zs)?;
        for w in order.iter().filter(|w| ns.contains(w)) {
            match g.label(w) {
                Some(Label::XY) => {
                    let k = node_of(&d, w)?;
                    let r = Rotation { string: d.nodes[k].rotation.string.clone(), angle: Angle::pi() };
                    d = d.pull_rotation_from_tableau(&r, Destination::Merge(k))?;
                }
                Some(Label::XZ | Label::YZ) => d = d.flip_sign_convention(node_of(&d, w)?)?,
                _ => {}
            }
        }
    }
    after.report(d)
}

/// New measurement of the vertex a local complementation is about.
pub fn lc_centre_measurement(label: Label, angle: Angle, dir: Direction) -> (Label, Angle) {
    let q = Angle::half_pi();
    let pi = Angle::pi();
    match (dir, label) {
        (Direction::Plus, Label::XY) => (Label::XZ, angle + q),
        (Direction::Plus, Label::XZ) => (Label::XY, q - angle),
        (Direction::Plus, Label::YZ) => (Label::YZ, angle + q),
        (Direction::Plus, Label::Y) => (Label::Z, angle + pi),
        (Direction::Plus, Label::Z) => (Label::Y, angle),
        (Direction::Minus, Label::XY) => (Label::XZ, q - angle),
        (Direction::Minus, Label::XZ) => (Label::XY, angle - q),
        (Direction::Minus, Label::YZ) => (Label::YZ, angle - q),
        (Direction::Minus, Label::Y) => (Label::Z, angle),
        (Direction::Minus, Label::Z) => (Label::Y, angle + pi),
        (_, Label::X) => (Label::X, angle),
    }
}

/// New measurement of a neighbour of the local complementation vertex.
pub fn lc_neighbour_measurement(label: Label, angle: Angle, dir: Direction) -> (Label, Angle) {
    let q = Angle::half_pi();
    let pi = Angle::pi();
    match (dir, label) {
        (Direction::Plus, Label::XY) => (Label::XY, angle + q),
        (Direction::Plus, Label::XZ) => (Label::YZ, angle),
        (Direction::Plus, Label::YZ) => (Label::XZ, -angle),
        (Direction::Plus, Label::X) => (Label::Y, angle),
        (Direction::Plus, Label::Y) => (Label::X, angle + pi),
        (Direction::Minus, Label::XY) => (Label::XY, angle - q),
        (Direction::Minus, Label::XZ) => (Label::YZ, -angle),
        (Direction::Minus, Label::YZ) => (Label::XZ, angle),
        (Direction::Minus, Label::X) => (Label::Y, angle + pi),
        (Direction::Minus, Label::Y) => (Label::X, angle),
        (_, Label::Z) => (Label::Z, angle),
    }
}

/// Flow and focussed sets after a local complementation about `u`.
fn lc_flow(st: &State, u: &str) -> Result<(PauliFlowData, Vec<FocussedSet>)> {
    let g = &st.pattern.graph;
    let ns = g.neighbours(u)?;
    let relevant = |w: &str| -> bool {
        match g.label(w) {
            Some(Label::XY) if ns.contains(w) => true,
            Some(l) if w == u => l.is_planar(),
            _ => false,
        }
    };
    let toggle_u = |s: &VertexSet| -> Result<VertexSet> {
        let mut q = s.clone();
        if g.odd_neighbourhood(s)?.contains(u) && !q.remove(u) {
            q.insert(u.to_string());
        }
        Ok(q)
    };
    let mut p: BTreeMap<String, VertexSet> = BTreeMap::new();
    let fix = |s: &VertexSet, skip: Option<&str>, p: &BTreeMap<String, VertexSet>| -> Result<VertexSet> {
        let mut out = toggle_u(s)?;
        let odd = g.odd_neighbourhood(s)?;
        for w in s.union(&odd) {
            if Some(w.as_str()) == skip || !relevant(w) {
                continue;
            }
            let pw = p.get(w).ok_or_else(|| Error::InvalidFlow(format!("`{w}` is not later than a set using it")))?;
            out = sym_diff(&out, pw);
        }
        Ok(out)
    };
    for v in st.latest_first() {
        let new = fix(st.flow.correction(&v)?, Some(&v), &p)?;
        p.insert(v, new);
    }
    let fsets = st
        .fsets
        .iter()
        .map(|f| Ok(FocussedSet::new(fix(&f.members, None, &p)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok((PauliFlowData { p, order: st.flow.order.clone() }, fsets))
}

/// One local complementation on both the pattern and a simulated Pddag.
fn lc_step(st: &State, sim: Pddag, u: &str, dir: Direction) -> Result<(State, Pddag)> {
    let g = &st.pattern.graph;
    if !g.contains(u) {
        return Err(Error::UnknownVertex(u.to_string()));
    }
    if g.is_input(u) {
        return Err(Error::Precondition(format!("`{u}` is an input")));
    }
    let s = dir.sign();
    let quarter = Angle::quarter_turns(s);
    let ns: Vec<String> = g.neighbours(u)?.iter().cloned().collect();
    let out_ns: Vec<String> = ns.iter().filter(|w| g.is_output(w)).cloned().collect();
    let centre = g.label(u);

    let mut after = st.clone();
    after.pattern.replace_graph(g.local_complement(u)?);
    if let Some(l) = centre {
        let (nl, na) = lc_centre_measurement(l, st.pattern.angle(u).expect("measured"), dir);
        after.pattern.set_measurement(u, nl, na);
    }
    for w in &ns {
        if let Some(l) = g.label(w) {
            let (nl, na) = lc_neighbour_measurement(l, st.pattern.angle(w).expect("measured"), dir);
            after.pattern.set_measurement(w, nl, na);
        }
    }
    let mut gates: Vec<Gate> = out_ns.iter().map(|w| Gate::RZ(w.clone(), -quarter)).collect();
    if g.is_output(u) {
        gates.push(Gate::RX(u.to_string(), quarter));
    }
    let new_rots = gates_as_rotations(&gates)?;
    prepend_trailing(&mut after.pattern, gates);
    let (f, fs) = lc_flow(st, u)?;
    after.flow = f;
    after.fsets = fs;

    let mut d = pull_all_to_end(sim, &new_rots)?;
    for w in st.latest_first() {
        let Some(l) = g.label(&w) else { continue };
        let (pull, flip) = if w == u {
            match (dir, l) {
                (_, Label::XY) => (quarter, dir == Direction::Minus),
                (_, Label::XZ) => (-Angle::half_pi(), dir == Direction::Plus),
                (_, Label::YZ) => (quarter, false),
                _ => continue,
            }
        } else if ns.contains(&w) {
            match l {
                Label::XY => (quarter, false),
                Label::XZ => (Angle::zero(), dir == Direction::Minus),
                Label::YZ => (Angle::zero(), dir == Direction::Plus),
                _ => continue,
            }
        } else {
            continue;
        };
        let k = node_of(&d, &w)?;
        if !pull.is_zero() {
            let r = Rotation { string: d.nodes[k].rotation.string.clone(), angle: pull };
            d = d.pull_rotation_from_tableau(&r, Destination::Merge(k))?;
        }
        if flip {
            d = d.flip_sign_convention(k)?;
        }
    }
    Ok((after, d))
}

/// Local complementation about a non-input vertex.
pub fn local_complement_pattern(
    pattern: &MeasurementPattern,
    flow: Option<&PauliFlowData>,
    fsets: Option<&[FocussedSet]>,
    u: &str,
    dir: Direction,
) -> Result<RewriteReport> {
    let st = State::new(pattern, flow, fsets)?;
    let d = st.extract()?;
    let (after, sim) = lc_step(&st, d, u, dir)?;
    after.report(sim)
}

/// Pivot about the edge `u ~ v`, as local complementations about `u`, `v`
/// and `u` with alternating directions.
pub fn pivot_pattern(
    pattern: &MeasurementPattern,
    flow: Option<&PauliFlowData>,
    fsets: Option<&[FocussedSet]>,
    u: &str,
    v: &str,
) -> Result<RewriteReport> {
    let g = &pattern.graph;
    for x in [u, v] {
        if !g.contains(x) {
            return Err(Error::UnknownVertex(x.to_string()));
        }
        if g.is_input(x) {
            return Err(Error::Precondition(format!("`{x}` is an input")));
        }
    }
    if !g.adjacent(u, v) {
        return Err(Error::Precondition(format!("`{u}` and `{v}` are not adjacent")));
    }
    let st = State::new(pattern, flow, fsets)?;
    let d = st.extract()?;
    let (st, d) = lc_step(&st, d, u, Direction::Plus)?;
    let (st, d) = lc_step(&st, d, v, Direction::Minus)?;
    let (st, d) = lc_step(&st, d, u, Direction::Plus)?;
    st.report(d)
}

/// Net measurement change of a pivot: `endpoint` for `u` and `v`, otherwise
/// a common neighbour. Other vertices keep their measurement.
pub fn pivot_measurement(label: Label, angle: Angle, endpoint: bool) -> (Label, Angle) {
    let pi = Angle::pi();
    if endpoint {
        match label {
            Label::XY => (Label::YZ, -angle),
            Label::XZ => (Label::XZ, Angle::half_pi() - angle),
            Label::YZ => (Label::XY, -angle),
            Label::X => (Label::Z, angle),
            Label::Y => (Label::Y, angle + pi),
            Label::Z => (Label::X, angle),
        }
    } else {
        match label {
            Label::XY | Label::X | Label::Y => (label, angle + pi),
            Label::XZ | Label::YZ => (label, -angle),
            Label::Z => (label, angle),
        }
    }
}

/// Replace `p(u)` by `p(u) xor fset`. The pattern is unchanged; on the Pddag
/// the focussed set's string multiplies every row and node that was built
/// from `p(u)`.
pub fn switch_flow_rewrite(
    pattern: &MeasurementPattern,
    flow: Option<&PauliFlowData>,
    fsets: Option<&[FocussedSet]>,
    u: &str,
    fset: &FocussedSet,
) -> Result<RewriteReport> {
    let g = &pattern.graph;
    if !flow::is_focussed_set(g, &fset.members)? {
        return Err(Error::Precondition(format!("{:?} is not a focussed set", fset.members)));
    }
    let st = State::new(pattern, flow, fsets)?;
    let mut after = st.clone();
    after.flow = flow::switch_flow(g, &st.flow, u, fset)?;

    let mut d = st.extract()?;
    if !fset.members.is_empty() {
        let s = focussed_string(pattern, fset)?;
        if d.tableau.stabilizer_decomposition(&s).is_none() {
            return Err(Error::InconsistentTableau(format!("{s} is not generated by the free rows")));
        }
        if g.label(u).is_some_and(Label::is_planar) {
            d = d.apply_stabilizer_rewrite(node_of(&d, u)?, &s)?;
        }
        let mut rows = Vec::new();
        for (k, r) in d.tableau.inputs.iter().enumerate() {
            if r.input == u && !g.is_output(u) {
                rows.push(RowRef::Z(k));
            }
            if extended_input_parts(pattern, &st.flow, &r.input)?.1.contains(u) {
                rows.push(RowRef::X(k));
            }
        }
        for r in rows {
            d.tableau = d.tableau.multiply_row(r, &s)?;
        }
    }
    after.report(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabel_table() {
        let q = Angle::half_pi();
        assert_eq!(relabel_measurement(Label::XY, Angle::zero()).unwrap(), (Label::X, Angle::zero()));
        assert_eq!(relabel_measurement(Label::XY, q).unwrap(), (Label::Y, Angle::zero()));
        assert_eq!(relabel_measurement(Label::YZ, Angle::pi()).unwrap(), (Label::Z, Angle::pi()));
        assert!(relabel_measurement(Label::X, q).is_err());
        assert!(relabel_measurement(Label::XY, Angle::quarter_pi()).is_err());
    }

    #[test]
    fn opposite_lc_directions_undo_each_other() {
        for l in [Label::XY, Label::XZ, Label::YZ, Label::X, Label::Y, Label::Z] {
            let a = if l.is_pauli() { Angle::pi() } else { Angle::new(1, 3).unwrap() };
            let (l1, a1) = lc_centre_measurement(l, a, Direction::Plus);
            assert_eq!(lc_centre_measurement(l1, a1, Direction::Minus), (l, a));
            let (l1, a1) = lc_neighbour_measurement(l, a, Direction::Plus);
            assert_eq!(lc_neighbour_measurement(l1, a1, Direction::Minus), (l, a));
        }
    }
}
