//! Pauli flow: checking, maximally delayed identification, focussing, and
//! the group of focussed sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::f2::F2Matrix;
use crate::graph::{Label, LabelledOpenGraph, VertexSet};

/// A strict partial order on vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Order {
    /// `v < w` iff `depth(v) > depth(w)`.
    Depth(BTreeMap<String, usize>),
    /// Explicit, transitively closed pairs `(v, w)` meaning `v < w`.
    Relation(BTreeSet<(String, String)>),
}

impl Order {
    pub fn precedes(&self, v: &str, w: &str) -> bool {
        match self {
            Order::Depth(d) => match (d.get(v), d.get(w)) {
                (Some(a), Some(b)) => a > b,
                _ => false,
            },
            Order::Relation(r) => r.contains(&(v.to_string(), w.to_string())),
        }
    }

    pub fn to_relation(&self, vertices: &VertexSet) -> BTreeSet<(String, String)> {
        match self {
            Order::Relation(r) => r.clone(),
            Order::Depth(_) => {
                let mut out = BTreeSet::new();
                for v in vertices {
                    for w in vertices {
                        if self.precedes(v, w) {
                            out.insert((v.clone(), w.clone()));
                        }
                    }
                }
                out
            }
        }
    }

    /// A linear extension, earliest vertices first. Depth orders sort by
    /// depth descending, ties by id; relations use the smallest available id.
    pub fn linearize(&self, vertices: &VertexSet) -> Vec<String> {
        match self {
            Order::Depth(d) => {
                let mut vs: Vec<String> = vertices.iter().cloned().collect();
                vs.sort_by(|a, b| {
                    let (da, db) = (d.get(a).copied().unwrap_or(0), d.get(b).copied().unwrap_or(0));
                    db.cmp(&da).then_with(|| a.cmp(b))
                });
                vs
            }
            Order::Relation(r) => {
                let mut preds: BTreeMap<&str, usize> = vertices.iter().map(|v| (v.as_str(), 0)).collect();
                for (a, b) in r {
                    if vertices.contains(a) {
                        if let Some(c) = preds.get_mut(b.as_str()) {
                            *c += 1;
                        }
                    }
                }
                let mut ready: BTreeSet<&str> = preds.iter().filter(|(_, &c)| c == 0).map(|(v, _)| *v).collect();
                let mut out = Vec::new();
                while let Some(v) = ready.pop_first() {
                    out.push(v.to_string());
                    for (a, b) in r.range((v.to_string(), String::new())..) {
                        if a != v {
                            break;
                        }
                        if let Some(c) = preds.get_mut(b.as_str()) {
                            *c -= 1;
                            if *c == 0 {
                                ready.insert(b.as_str());
                            }
                        }
                    }
                }
                out
            }
        }
    }

    /// Depth labels, when this is a depth order.
    pub fn depths(&self) -> Option<&BTreeMap<String, usize>> {
        match self {
            Order::Depth(d) => Some(d),
            Order::Relation(_) => None,
        }
    }

    /// Sizes of the cumulative layers `V_{<=k}`: vertices with no successor
    /// form layer 0, and so on backwards.
    pub fn layer_profile(&self, vertices: &VertexSet) -> Vec<usize> {
        let rel = self.to_relation(vertices);
        let mut depth: BTreeMap<&str, usize> = BTreeMap::new();
        let lin = self.linearize(vertices);
        for v in lin.iter().rev() {
            let d = rel
                .iter()
                .filter(|(a, _)| a == v)
                .map(|(_, b)| depth.get(b.as_str()).copied().unwrap_or(0) + 1)
                .max()
                .unwrap_or(0);
            depth.insert(v, d);
        }
        let max = depth.values().copied().max().unwrap_or(0);
        let mut out = vec![0; max + 1];
        for &d in depth.values() {
            for slot in out.iter_mut().skip(d) {
                *slot += 1;
            }
        }
        out
    }
}

/// Correction sets with a strict partial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliFlowData {
    pub p: BTreeMap<String, VertexSet>,
    pub order: Order,
}

impl PauliFlowData {
    pub fn correction(&self, v: &str) -> Result<&VertexSet> {
        self.p.get(v).ok_or_else(|| Error::InvalidFlow(format!("no correction set for `{v}`")))
    }

    pub fn precedes(&self, v: &str, w: &str) -> bool {
        self.order.precedes(v, w)
    }

    /// `Odd(p(v))`.
    pub fn odd(&self, g: &LabelledOpenGraph, v: &str) -> Result<VertexSet> {
        g.odd_neighbourhood(self.correction(v)?)
    }

    /// Whether `y` lies in `p(x)` or `Odd(p(x))`.
    pub fn influences(&self, g: &LabelledOpenGraph, x: &str, y: &str) -> Result<bool> {
        Ok(self.correction(x)?.contains(y) || self.odd(g, x)?.contains(y))
    }
}

/// A set of non-inputs focussed over every measured vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FocussedSet {
    pub members: VertexSet,
}

impl FocussedSet {
    pub fn new(members: VertexSet) -> Self {
        FocussedSet { members }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    /// Missing correction set, or one that contains an input or unknown vertex.
    Domain,
    /// The order is not a strict partial order.
    Order,
    PF1,
    PF2,
    PF3,
    PF4,
    PF5,
    PF6,
    PF7,
    PF8,
    PF9,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub vertex: String,
    pub condition: Condition,
}

/// All violated flow conditions, one entry per (vertex, condition).
pub fn verify_flow(g: &LabelledOpenGraph, flow: &PauliFlowData) -> Vec<Violation> {
    let mut out = BTreeSet::new();
    let mut bad = |v: &str, c| {
        out.insert(Violation { vertex: v.to_string(), condition: c });
    };
    match &flow.order {
        Order::Depth(d) => {
            for v in g.vertices() {
                if !d.contains_key(v) {
                    bad(v, Condition::Order);
                }
            }
        }
        Order::Relation(r) => {
            for (a, b) in r {
                if a == b || r.contains(&(b.clone(), a.clone())) {
                    bad(a, Condition::Order);
                }
                for (c, d) in r.range((b.clone(), String::new())..) {
                    if c != b {
                        break;
                    }
                    if !r.contains(&(a.clone(), d.clone())) {
                        bad(a, Condition::Order);
                    }
                }
            }
        }
    }
    for (u, &lu) in g.labels() {
        let Some(p) = flow.p.get(u) else {
            bad(u, Condition::Domain);
            continue;
        };
        if p.iter().any(|w| !g.contains(w) || g.is_input(w)) {
            bad(u, Condition::Domain);
            continue;
        }
        let odd = g.odd_neighbourhood(p).expect("members checked");
        let lam = |w: &str| g.label(w);
        for w in p {
            if w != u && !matches!(lam(w), Some(Label::X | Label::Y)) && !flow.precedes(u, w) {
                bad(u, Condition::PF1);
            }
        }
        for w in &odd {
            if w != u && !matches!(lam(w), Some(Label::Y | Label::Z)) && !flow.precedes(u, w) {
                bad(u, Condition::PF2);
            }
        }
        for (w, &lw) in g.labels() {
            if w != u && lw == Label::Y && !flow.precedes(u, w) && p.contains(w) != odd.contains(w) {
                bad(u, Condition::PF3);
            }
        }
        let (inp, ino) = (p.contains(u), odd.contains(u));
        let (ok, c) = match lu {
            Label::XY => (!inp && ino, Condition::PF4),
            Label::XZ => (inp && ino, Condition::PF5),
            Label::YZ => (inp && !ino, Condition::PF6),
            Label::X => (ino, Condition::PF7),
            Label::Z => (inp, Condition::PF8),
            Label::Y => (inp != ino, Condition::PF9),
        };
        if !ok {
            bad(u, c);
        }
    }
    out.into_iter().collect()
}

/// Dense index view of a graph used by the solvers.
struct Indexed<'a> {
    ids: Vec<&'a String>,
    adj: Vec<Vec<bool>>,
    input: Vec<bool>,
    label: Vec<Option<Label>>,
}

impl<'a> Indexed<'a> {
    fn new(g: &'a LabelledOpenGraph) -> Self {
        let ids: Vec<&String> = g.vertices().iter().collect();
        let pos: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let n = ids.len();
        let mut adj = vec![vec![false; n]; n];
        for (a, b) in g.edges() {
            let (i, j) = (pos[a.as_str()], pos[b.as_str()]);
            adj[i][j] = true;
            adj[j][i] = true;
        }
        Indexed {
            input: ids.iter().map(|v| g.is_input(v)).collect(),
            label: ids.iter().map(|v| g.label(v)).collect(),
            ids,
            adj,
        }
    }

    fn set(&self, members: impl IntoIterator<Item = usize>) -> VertexSet {
        members.into_iter().map(|i| self.ids[i].clone()).collect()
    }
}

/// Find a maximally delayed Pauli flow, or `None` if the graph has none.
///
/// Vertices are solved layer by layer backwards from the outputs. For each
/// unsolved vertex a GF(2) system over candidate correctors is solved for the
/// `XY`, `XZ` and `YZ` correction shapes in that order, with free variables
/// set to 0.
pub fn find_pauli_flow(g: &LabelledOpenGraph) -> Option<PauliFlowData> {
    find_pauli_flow_or_stuck(g).ok()
}

/// As [`find_pauli_flow`], but on failure returns the measured vertices that
/// no round of the search could correct.
pub fn find_pauli_flow_or_stuck(g: &LabelledOpenGraph) -> std::result::Result<PauliFlowData, VertexSet> {
    let ix = Indexed::new(g);
    let n = ix.ids.len();
    let mut depth: Vec<Option<usize>> = ix.label.iter().map(|l| l.is_none().then_some(0)).collect();
    let mut p: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut solved: Vec<bool> = depth.iter().map(Option::is_some).collect();
    let mut correctors = vec![false; n];
    let mut k = 0;
    if solved.iter().all(|&s| s) {
        return Ok(assemble(&ix, &p, &depth));
    }
    loop {
        let mut found = Vec::new();
        for u in (0..n).filter(|&u| !solved[u]) {
            if let Some(set) = solve_vertex(&ix, &correctors, u) {
                found.push((u, set));
            }
        }
        if found.is_empty() && k > 0 {
            if solved.iter().all(|&s| s) {
                return Ok(assemble(&ix, &p, &depth));
            }
            return Err(ix.set((0..n).filter(|&u| !solved[u])));
        }
        for (u, set) in found {
            solved[u] = true;
            depth[u] = Some(k);
            p[u] = Some(set);
        }
        correctors.clone_from(&solved);
        k += 1;
    }
}

fn assemble(ix: &Indexed<'_>, p: &[Option<Vec<usize>>], depth: &[Option<usize>]) -> PauliFlowData {
    let mut pm = BTreeMap::new();
    let mut dm = BTreeMap::new();
    for (i, v) in ix.ids.iter().enumerate() {
        if let Some(s) = &p[i] {
            pm.insert((*v).clone(), ix.set(s.iter().copied()));
        }
        dm.insert((*v).clone(), depth[i].expect("every vertex solved"));
    }
    PauliFlowData { p: pm, order: Order::Depth(dm) }
}

/// Witness search for one vertex against the current corrector set.
fn solve_vertex(ix: &Indexed<'_>, correctors: &[bool], u: usize) -> Option<Vec<usize>> {
    let n = ix.ids.len();
    let lam = ix.label[u].expect("measured");
    let is = |v: usize, l: Label| v != u && ix.label[v] == Some(l);
    let cols: Vec<usize> = (0..n)
        .filter(|&v| v != u && !ix.input[v] && (correctors[v] || is(v, Label::X) || is(v, Label::Y)))
        .collect();
    let top: Vec<usize> = (0..n)
        .filter(|&w| !(correctors[w] || is(w, Label::Y) || is(w, Label::Z)))
        .collect();
    let bottom: Vec<usize> = (0..n).filter(|&w| is(w, Label::Y) && !correctors[w]).collect();
    let m = F2Matrix::from_fn(top.len() + bottom.len(), cols.len(), |r, c| {
        let k = cols[c];
        if r < top.len() {
            ix.adj[top[r]][k]
        } else {
            let y = bottom[r - top.len()];
            ix.adj[y][k] ^ (y == k)
        }
    });
    let neighbour_rhs = |with_self: bool| -> Vec<bool> {
        top.iter()
            .map(|&w| ix.adj[u][w] || (with_self && w == u))
            .chain(bottom.iter().map(|&y| ix.adj[u][y]))
            .collect()
    };
    let mut planes: Vec<(Vec<bool>, bool)> = Vec::new();
    if matches!(lam, Label::XY | Label::X | Label::Y) {
        let rhs = top.iter().map(|&w| w == u).chain(bottom.iter().map(|_| false)).collect();
        planes.push((rhs, false));
    }
    // A vertex in its own correction set cannot be an input.
    if !ix.input[u] {
        if matches!(lam, Label::XZ | Label::X | Label::Z) {
            planes.push((neighbour_rhs(true), true));
        }
        if matches!(lam, Label::YZ | Label::Y | Label::Z) {
            planes.push((neighbour_rhs(false), true));
        }
    }
    let rhs: Vec<Vec<bool>> = planes.iter().map(|(r, _)| r.clone()).collect();
    for (sol, (_, with_u)) in m.solve_many(&rhs).into_iter().zip(&planes) {
        if let Some(x) = sol {
            let mut set: Vec<usize> = cols.iter().zip(&x).filter(|(_, &b)| b).map(|(&c, _)| c).collect();
            if *with_u {
                set.push(u);
                set.sort_unstable();
            }
            return Some(set);
        }
    }
    None
}

/// Whether `set` satisfies the focussing conditions at every vertex of `over`
/// (outputs in `over` are ignored).
pub fn verify_focussed<'a>(
    g: &LabelledOpenGraph,
    set: &VertexSet,
    over: impl IntoIterator<Item = &'a String>,
) -> Result<bool> {
    let odd = g.odd_neighbourhood(set)?;
    Ok(over.into_iter().all(|w| focussed_at(g, set, &odd, w)))
}

fn focussed_at(g: &LabelledOpenGraph, set: &VertexSet, odd: &VertexSet, w: &str) -> bool {
    let Some(l) = g.label(w) else { return true };
    let (x, z) = (set.contains(w), odd.contains(w));
    match l {
        Label::XY | Label::X => !z,
        Label::XZ | Label::YZ | Label::Z => !x,
        Label::Y => x == z,
    }
}

/// Whether `set` is a focussed set: no inputs, focussed over all measured vertices.
pub fn is_focussed_set(g: &LabelledOpenGraph, set: &VertexSet) -> Result<bool> {
    if set.iter().any(|v| g.is_input(v)) {
        return Ok(false);
    }
    verify_focussed(g, set, g.measured())
}

/// Whether every `p(v)` is focussed over the measured vertices other than `v`.
pub fn is_focussed_flow(g: &LabelledOpenGraph, flow: &PauliFlowData) -> Result<bool> {
    for (v, set) in &flow.p {
        if !verify_focussed(g, set, g.measured().filter(|w| *w != v))? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn xor_into(a: &mut VertexSet, b: &VertexSet) {
    for x in b {
        if !a.remove(x) {
            a.insert(x.clone());
        }
    }
}

/// Focus every correction set by adding the correction sets of earlier
/// vertices over which it is not yet focussed, sweeping in order.
pub fn focus_flow(g: &LabelledOpenGraph, flow: &PauliFlowData) -> Result<PauliFlowData> {
    if !verify_flow(g, flow).is_empty() {
        return Err(Error::InvalidFlow("cannot focus an invalid flow".into()));
    }
    let measured: VertexSet = g.measured().cloned().collect();
    let sweep = flow.order.linearize(&measured);
    let mut p = flow.p.clone();
    let mut odds: BTreeMap<String, VertexSet> = BTreeMap::new();
    for (v, s) in &p {
        odds.insert(v.clone(), g.odd_neighbourhood(s)?);
    }
    for v in &sweep {
        let mut cur = p[v].clone();
        let mut odd = odds[v].clone();
        for w in &sweep {
            if w != v && !focussed_at(g, &cur, &odd, w) {
                xor_into(&mut cur, &p[w]);
                xor_into(&mut odd, &odds[w]);
            }
        }
        p.insert(v.clone(), cur);
        odds.insert(v.clone(), odd);
    }
    Ok(PauliFlowData { p, order: flow.order.clone() })
}

/// Independent generators of the group of focussed sets, one per free
/// variable of the focussing system.
pub fn focussed_set_generators(g: &LabelledOpenGraph) -> Result<Vec<FocussedSet>> {
    let ix = Indexed::new(g);
    let n = ix.ids.len();
    let cols: Vec<usize> = (0..n)
        .filter(|&v| !ix.input[v] && matches!(ix.label[v], None | Some(Label::XY | Label::X | Label::Y)))
        .collect();
    let z_rows: Vec<usize> = (0..n).filter(|&w| matches!(ix.label[w], Some(Label::XY | Label::X))).collect();
    let y_rows: Vec<usize> = (0..n).filter(|&w| ix.label[w] == Some(Label::Y)).collect();
    let m = F2Matrix::from_fn(z_rows.len() + y_rows.len(), cols.len(), |r, c| {
        let k = cols[c];
        if r < z_rows.len() {
            ix.adj[z_rows[r]][k]
        } else {
            let y = y_rows[r - z_rows.len()];
            ix.adj[y][k] ^ (y == k)
        }
    });
    Ok(m.null_space()
        .into_iter()
        .map(|x| FocussedSet::new(ix.set(cols.iter().zip(&x).filter(|(_, &b)| b).map(|(&c, _)| c))))
        .collect())
}

/// All members of the group generated by `gens`.
pub fn span(gens: &[FocussedSet]) -> Vec<FocussedSet> {
    let mut out = vec![FocussedSet::default()];
    for gset in gens {
        let more: Vec<FocussedSet> = out
            .iter()
            .map(|s| {
                let mut m = s.members.clone();
                xor_into(&mut m, &gset.members);
                FocussedSet::new(m)
            })
            .collect();
        out.extend(more);
    }
    out
}

/// `p(u) := p(u) xor p(v)` for `u < v`.
pub fn add_correction_sets(flow: &PauliFlowData, u: &str, v: &str) -> Result<PauliFlowData> {
    if !flow.precedes(u, v) {
        return Err(Error::Precondition(format!("`{u}` does not precede `{v}`")));
    }
    let pv = flow.correction(v)?.clone();
    let mut out = flow.clone();
    let pu = out.p.get_mut(u).ok_or_else(|| Error::InvalidFlow(format!("no correction set for `{u}`")))?;
    xor_into(pu, &pv);
    Ok(out)
}

/// `p(u) := p(u) xor fset`, extending the order so that `u` precedes every
/// planar vertex the focussed set touches. For a Pauli-labelled `u` of a
/// focussed flow the order is first weakened with [`paulis_first`].
pub fn switch_flow(
    g: &LabelledOpenGraph,
    flow: &PauliFlowData,
    u: &str,
    fset: &FocussedSet,
) -> Result<PauliFlowData> {
    flow.correction(u)?;
    if fset.members.is_empty() {
        return Ok(flow.clone());
    }
    let weakened;
    let flow = if g.label(u).is_some_and(Label::is_pauli) && is_focussed_flow(g, flow)? {
        weakened = paulis_first(g, flow)?;
        &weakened
    } else {
        flow
    };
    let odd = g.odd_neighbourhood(&fset.members)?;
    let touched: VertexSet = fset.members.union(&odd).cloned().collect();
    let mut extra = Vec::new();
    for w in &touched {
        if g.label(w).is_some_and(Label::is_planar) {
            if w == u || flow.precedes(w, u) {
                return Err(Error::Precondition(format!("planar `{w}` is not after `{u}`")));
            }
            extra.push((u.to_string(), w.clone()));
        }
    }
    let mut rel = flow.order.to_relation(g.vertices());
    rel.extend(extra);
    let mut out = flow.clone();
    xor_into(out.p.get_mut(u).unwrap(), &fset.members);
    out.order = Order::Relation(transitive_closure(g.vertices(), rel));
    Ok(out)
}

pub(crate) fn transitive_closure(
    vertices: &VertexSet,
    rel: BTreeSet<(String, String)>,
) -> BTreeSet<(String, String)> {
    let ids: Vec<&String> = vertices.iter().collect();
    let pos: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let n = ids.len();
    let mut m = vec![vec![false; n]; n];
    for (a, b) in &rel {
        if let (Some(&i), Some(&j)) = (pos.get(a.as_str()), pos.get(b.as_str())) {
            m[i][j] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if m[i][k] {
                for j in 0..n {
                    if m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if m[i][j] {
                out.insert((ids[i].clone(), ids[j].clone()));
            }
        }
    }
    out
}

/// Drop every order constraint ending at a Pauli-labelled vertex; valid for
/// focussed flows.
pub fn paulis_first(g: &LabelledOpenGraph, flow: &PauliFlowData) -> Result<PauliFlowData> {
    if !is_focussed_flow(g, flow)? {
        return Err(Error::Precondition("flow is not focussed".into()));
    }
    if !g.labels().values().any(|l| l.is_pauli()) {
        return Ok(flow.clone());
    }
    let rel = flow
        .order
        .to_relation(g.vertices())
        .into_iter()
        .filter(|(_, b)| !g.label(b).is_some_and(Label::is_pauli))
        .collect();
    Ok(PauliFlowData { p: flow.p.clone(), order: Order::Relation(rel) })
}
