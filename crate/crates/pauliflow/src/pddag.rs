//! Pauli dependency DAGs: an isometry tableau followed by Pauli rotations
//! ordered up to commutation.

use std::collections::BTreeSet;

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::f2::F2Matrix;
use crate::pauli::{reorder_push, Pauli, Rotation, SignedPauliString};

/// Images of `Z` and `X` on one input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputRows {
    pub input: String,
    pub z: SignedPauliString,
    pub x: SignedPauliString,
}

/// Stabilizer description of a Clifford isometry `C` from the inputs to the
/// outputs: `z * C = C * Z_i`, `x * C = C * X_i`, and `s * C = C` for each
/// free row `s`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IsometryTableau {
    pub outputs: Vec<String>,
    pub inputs: Vec<InputRows>,
    pub free: Vec<SignedPauliString>,
}

/// A row of the tableau.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowRef {
    Z(usize),
    X(usize),
    Free(usize),
}

/// Operations on a tableau that leave the isometry unchanged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreeAction {
    SwapFree(usize, usize),
    /// Multiply a free row into another row.
    MultiplyFree { free: usize, into: RowRef },
}

impl IsometryTableau {
    /// The identity on the given qubits.
    pub fn identity(qubits: &[String]) -> Self {
        IsometryTableau {
            outputs: qubits.to_vec(),
            inputs: qubits
                .iter()
                .map(|q| InputRows {
                    input: q.clone(),
                    z: SignedPauliString::single(q.clone(), Pauli::Z),
                    x: SignedPauliString::single(q.clone(), Pauli::X),
                })
                .collect(),
            free: Vec::new(),
        }
    }

    pub fn row(&self, r: RowRef) -> Option<&SignedPauliString> {
        match r {
            RowRef::Z(i) => self.inputs.get(i).map(|row| &row.z),
            RowRef::X(i) => self.inputs.get(i).map(|row| &row.x),
            RowRef::Free(i) => self.free.get(i),
        }
    }

    fn row_mut(&mut self, r: RowRef) -> Option<&mut SignedPauliString> {
        match r {
            RowRef::Z(i) => self.inputs.get_mut(i).map(|row| &mut row.z),
            RowRef::X(i) => self.inputs.get_mut(i).map(|row| &mut row.x),
            RowRef::Free(i) => self.free.get_mut(i),
        }
    }

    /// Every row in the order Z, X per input, then free rows.
    pub fn rows(&self) -> Vec<(RowRef, &SignedPauliString)> {
        let mut out = Vec::new();
        for (i, r) in self.inputs.iter().enumerate() {
            out.push((RowRef::Z(i), &r.z));
            out.push((RowRef::X(i), &r.x));
        }
        out.extend(self.free.iter().enumerate().map(|(k, s)| (RowRef::Free(k), s)));
        out
    }

    pub fn map_rows(&self, mut f: impl FnMut(&SignedPauliString) -> Result<SignedPauliString>) -> Result<Self> {
        let mut out = self.clone();
        for r in &mut out.inputs {
            r.z = f(&r.z)?;
            r.x = f(&r.x)?;
        }
        for s in &mut out.free {
            *s = f(s)?;
        }
        Ok(out)
    }

    /// Check the commutation relations, signs, supports and independence.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InconsistentTableau(m));
        let rows = self.rows();
        for (r, s) in &rows {
            if s.is_negative().is_none() {
                return bad(format!("row {r:?} has an imaginary phase"));
            }
            if let Some(q) = s.support().find(|q| !self.outputs.iter().any(|o| o == q)) {
                return bad(format!("row {r:?} acts on `{q}`, which is not an output"));
            }
        }
        for (a, (ra, sa)) in rows.iter().enumerate() {
            for (rb, sb) in rows.iter().skip(a + 1) {
                let should_anticommute = matches!(
                    (ra, rb),
                    (RowRef::Z(i), RowRef::X(j)) | (RowRef::X(i), RowRef::Z(j)) if i == j
                );
                if sa.commutes(sb) == should_anticommute {
                    return bad(format!("rows {ra:?} and {rb:?} have the wrong commutation"));
                }
            }
        }
        if self.inputs.len() + self.free.len() > self.outputs.len() {
            return bad("more inputs and free rows than outputs".into());
        }
        let m = F2Matrix::from_rows(&rows.iter().map(|(_, s)| symplectic(s, &self.outputs)).collect::<Vec<_>>());
        if m.rank() != rows.len() {
            return bad("rows are not independent".into());
        }
        Ok(())
    }

    pub fn free_action(&self, action: FreeAction) -> Result<Self> {
        let mut out = self.clone();
        match action {
            FreeAction::SwapFree(a, b) => {
                if a >= out.free.len() || b >= out.free.len() {
                    return Err(Error::Precondition(format!("no free rows {a} and {b}")));
                }
                out.free.swap(a, b);
            }
            FreeAction::MultiplyFree { free, into } => {
                if into == RowRef::Free(free) {
                    return Err(Error::Precondition("cannot multiply a row into itself".into()));
                }
                let f = self
                    .free
                    .get(free)
                    .ok_or_else(|| Error::Precondition(format!("no free row {free}")))?
                    .clone();
                let target = out.row_mut(into).ok_or_else(|| Error::Precondition(format!("no row {into:?}")))?;
                *target = target.multiply(&f);
            }
        }
        Ok(out)
    }

    /// Multiply a row by an element of the free-row group.
    pub fn multiply_row(&self, r: RowRef, s: &SignedPauliString) -> Result<Self> {
        if self.stabilizer_decomposition(s).is_none() {
            return Err(Error::Precondition(format!("{s} is not generated by the free rows")));
        }
        let mut out = self.clone();
        let target = out.row_mut(r).ok_or_else(|| Error::Precondition(format!("no row {r:?}")))?;
        *target = target.multiply(s);
        Ok(out)
    }

    /// Input rows reduced modulo the free-row group: a free action choosing
    /// one representative of each coset, so tableaux that differ only by
    /// free multiplications of their input rows compare equal.
    pub fn canonical_input_rows(&self) -> Self {
        let n = self.outputs.len();
        let mut basis: Vec<(Vec<bool>, SignedPauliString)> =
            self.free.iter().map(|f| (symplectic(f, &self.outputs), f.clone())).collect();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..2 * n {
            let Some(r) = (next..basis.len()).find(|&r| basis[r].0[col]) else { continue };
            basis.swap(next, r);
            let (pb, ps) = basis[next].clone();
            for (k, row) in basis.iter_mut().enumerate() {
                if k != next && row.0[col] {
                    row.1 = row.1.multiply(&ps);
                    for (a, b) in row.0.iter_mut().zip(&pb) {
                        *a ^= b;
                    }
                }
            }
            pivots.push((col, next));
            next += 1;
        }
        let reduce = |s: &SignedPauliString| {
            let mut s = s.clone();
            for &(col, k) in &pivots {
                if symplectic(&s, &self.outputs)[col] {
                    s = s.multiply(&basis[k].1);
                }
            }
            s
        };
        let mut out = self.clone();
        for row in &mut out.inputs {
            row.z = reduce(&row.z);
            row.x = reduce(&row.x);
        }
        out
    }

    /// Indices of free rows whose product is exactly `s`, if `s` is in the
    /// stabilizer group they generate.
    pub fn stabilizer_decomposition(&self, s: &SignedPauliString) -> Option<Vec<usize>> {
        if s.support().any(|q| !self.outputs.iter().any(|o| o == q)) {
            return None;
        }
        let cols: Vec<Vec<bool>> = self.free.iter().map(|f| symplectic(f, &self.outputs)).collect();
        let n = 2 * self.outputs.len();
        let m = F2Matrix::from_fn(n, cols.len(), |r, c| cols[c][r]);
        let sol = m.solve(&symplectic(s, &self.outputs))?;
        let picked: Vec<usize> = (0..cols.len()).filter(|&k| sol.particular[k]).collect();
        let product = picked
            .iter()
            .fold(SignedPauliString::identity(), |acc, &k| acc.multiply(&self.free[k]));
        (product == *s).then_some(picked)
    }
}

/// `(x | z)` bits of a string over the given qubit order.
pub(crate) fn symplectic(s: &SignedPauliString, qubits: &[String]) -> Vec<bool> {
    let mut v = vec![false; 2 * qubits.len()];
    for (k, q) in qubits.iter().enumerate() {
        let p = s.get(q);
        v[k] = p.x_bit();
        v[qubits.len() + k] = p.z_bit();
    }
    v
}

/// A rotation node, optionally tagged with the vertex it was extracted from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub rotation: Rotation,
    pub origin: Option<String>,
}

impl Node {
    pub fn new(rotation: Rotation) -> Self {
        Node { rotation, origin: None }
    }

    pub fn with_origin(rotation: Rotation, origin: impl Into<String>) -> Self {
        Node { rotation, origin: Some(origin.into()) }
    }

    /// String and angle equal exactly, sign included.
    pub fn same_form(&self, other: &Node) -> bool {
        self.rotation.string == other.rotation.string && self.rotation.angle == other.rotation.angle
    }
}

/// Where a rotation pulled out of the tableau ends up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Destination {
    /// Past every node, onto the front of the trailing list.
    End,
    /// Merged into the given node.
    Merge(usize),
}

/// The map `trailing * nodes[n-1] * ... * nodes[0] * C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pddag {
    pub tableau: IsometryTableau,
    /// Nodes in a valid time order.
    pub nodes: Vec<Node>,
    /// Hasse diagram of the anticommutation order, as index pairs.
    pub deps: Vec<(usize, usize)>,
    /// Rotations applied after all nodes, in time order.
    pub trailing: Vec<Rotation>,
}

/// Hasse diagram of the order generated by anticommuting pairs in list order.
pub fn build_deps(nodes: &[Rotation]) -> Vec<(usize, usize)> {
    let n = nodes.len();
    let mut anc: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut out = Vec::new();
    for k in 0..n {
        let direct: Vec<usize> = (0..k).filter(|&j| !nodes[j].string.commutes(&nodes[k].string)).collect();
        let mut a = BTreeSet::new();
        for &j in &direct {
            a.insert(j);
            a.extend(anc[j].iter().copied());
        }
        for &j in &direct {
            if !direct.iter().any(|&m| m != j && anc[m].contains(&j)) {
                out.push((j, k));
            }
        }
        anc[k] = a;
    }
    out
}

impl Pddag {
    pub fn new(tableau: IsometryTableau, nodes: Vec<Node>, trailing: Vec<Rotation>) -> Self {
        let mut d = Pddag { tableau, nodes, deps: Vec::new(), trailing };
        d.rebuild_deps();
        d
    }

    pub fn rebuild_deps(&mut self) {
        let rots: Vec<Rotation> = self.nodes.iter().map(|n| n.rotation.clone()).collect();
        self.deps = build_deps(&rots);
    }

    /// Strict ancestors of node `k`.
    pub fn ancestors(&self, k: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut stack = vec![k];
        while let Some(x) = stack.pop() {
            for &(a, b) in &self.deps {
                if b == x && out.insert(a) {
                    stack.push(a);
                }
            }
        }
        out
    }

    pub fn precedes(&self, j: usize, k: usize) -> bool {
        self.ancestors(k).contains(&j)
    }

    pub fn find_origin(&self, v: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.origin.as_deref() == Some(v))
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k >= self.nodes.len() {
            return Err(Error::Precondition(format!("no node {k}")));
        }
        Ok(())
    }

    /// Drop nodes and trailing rotations that are the identity. Rewrites
    /// keep zero-angle nodes so that they stay comparable with extraction.
    pub fn without_identities(&self) -> Pddag {
        let mut out = self.clone();
        out.prune();
        out
    }

    fn prune(&mut self) {
        self.nodes.retain(|n| !n.rotation.is_identity());
        self.trailing.retain(|r| !r.is_identity());
        self.rebuild_deps();
    }

    /// Merge node `k` into node `j`, summing angles with the sign difference
    /// folded into the angle.
    pub fn merge_nodes(&self, j: usize, k: usize) -> Result<Pddag> {
        self.check_index(j)?;
        self.check_index(k)?;
        if j == k || self.precedes(j, k) || self.precedes(k, j) {
            return Err(Error::Precondition(format!("nodes {j} and {k} are ordered")));
        }
        let (a, b) = (&self.nodes[j].rotation, &self.nodes[k].rotation);
        let angle = if a.string == b.string {
            a.angle + b.angle
        } else if a.string == b.string.negated() {
            a.angle - b.angle
        } else {
            return Err(Error::Precondition(format!("strings {} and {} differ", a.string, b.string)));
        };
        let mut out = self.clone();
        out.nodes[j].rotation.angle = angle;
        out.nodes.remove(k);
        out.rebuild_deps();
        Ok(out)
    }

    /// Move a Clifford node to the start and absorb it into the tableau.
    pub fn push_clifford_front(&self, k: usize) -> Result<Pddag> {
        self.check_index(k)?;
        let rot = self.nodes[k].rotation.clone();
        if rot.angle.quarter_index().is_none() {
            return Err(Error::NonClifford(rot.angle.to_string()));
        }
        let mut out = self.clone();
        for node in &mut out.nodes[..k] {
            node.rotation.string = reorder_push(&rot, &node.rotation.string)?;
        }
        out.tableau = self.tableau.map_rows(|s| reorder_push(&rot, s))?;
        out.nodes.remove(k);
        out.rebuild_deps();
        Ok(out)
    }

    /// Write `C = R C'` for `R = exp(i angle/2 string)` and move `R` forward
    /// to `dest`. No stabilizer check is made: the caller is responsible for
    /// `R` being compensated elsewhere (or being a stabilizer).
    pub fn pull_rotation_from_tableau(&self, rot: &Rotation, dest: Destination) -> Result<Pddag> {
        if rot.angle.quarter_index().is_none() {
            return Err(Error::NonClifford(rot.angle.to_string()));
        }
        if rot.is_identity() {
            return Ok(self.clone());
        }
        let back = rot.inverse();
        let mut out = self.clone();
        out.tableau = self.tableau.map_rows(|s| reorder_push(&back, s))?;
        match dest {
            Destination::End => {
                for node in &mut out.nodes {
                    node.rotation.string = reorder_push(&back, &node.rotation.string)?;
                }
                out.trailing.insert(0, rot.clone());
            }
            Destination::Merge(k) => {
                self.check_index(k)?;
                for j in self.ancestors(k) {
                    let s = &mut out.nodes[j].rotation.string;
                    *s = reorder_push(&back, s)?;
                }
                let target = &mut out.nodes[k].rotation;
                if target.string == rot.string {
                    target.angle = target.angle + rot.angle;
                } else if target.string == rot.string.negated() {
                    target.angle = target.angle - rot.angle;
                } else {
                    return Err(Error::Precondition(format!(
                        "cannot merge {} into node {k} with string {}",
                        rot.string, target.string
                    )));
                }
            }
        }
        out.rebuild_deps();
        Ok(out)
    }

    /// Multiply node `k` by a stabilizer of the map just before it. The
    /// stabilizer must lie in the free-row group and commute with the node
    /// and all of its ancestors.
    pub fn apply_stabilizer_rewrite(&self, k: usize, stab: &SignedPauliString) -> Result<Pddag> {
        self.check_index(k)?;
        if self.tableau.stabilizer_decomposition(stab).is_none() {
            return Err(Error::Precondition(format!("{stab} is not a free stabilizer")));
        }
        for j in self.ancestors(k).into_iter().chain([k]) {
            let s = &self.nodes[j].rotation.string;
            if !s.commutes(stab) {
                return Err(Error::Anticommuting(s.to_string(), stab.to_string()));
            }
        }
        // Move k directly after its last ancestor; the nodes it passes commute with it.
        let to = self.ancestors(k).into_iter().max().map_or(0, |a| a + 1);
        let mut out = self.clone();
        let node = out.nodes.remove(k);
        out.nodes.insert(to, node);
        let r = &mut out.nodes[to].rotation;
        r.string = r.string.multiply(stab);
        out.rebuild_deps();
        Ok(out)
    }

    /// Stabilizer rewrite with the product of the given free rows.
    pub fn apply_free_row(&self, k: usize, free: usize) -> Result<Pddag> {
        let s = self
            .tableau
            .free
            .get(free)
            .ok_or_else(|| Error::Precondition(format!("no free row {free}")))?
            .clone();
        self.apply_stabilizer_rewrite(k, &s)
    }

    /// Replace node `k`'s `(P, theta)` with the same rotation `(-P, -theta)`.
    pub fn flip_sign_convention(&self, k: usize) -> Result<Pddag> {
        self.check_index(k)?;
        let mut out = self.clone();
        let r = &mut out.nodes[k].rotation;
        r.string = r.string.negated();
        r.angle = -r.angle;
        Ok(out)
    }

    /// Push every Clifford node into the tableau, latest first so indices of
    /// the remaining ones stay meaningful.
    pub fn absorb_cliffords(&self) -> Result<Pddag> {
        let mut out = self.clone();
        while let Some(k) = out.nodes.iter().rposition(|n| n.rotation.angle.is_clifford()) {
            out = out.push_clifford_front(k)?;
        }
        Ok(out)
    }

    /// Dependency edges as pairs of origins.
    pub fn deps_by_origin(&self) -> BTreeSet<(String, String)> {
        let name = |k: usize| self.nodes[k].origin.clone().unwrap_or_else(|| format!("#{k}"));
        self.deps.iter().map(|&(a, b)| (name(a), name(b))).collect()
    }

    pub fn node_angle(&self, k: usize) -> Option<Angle> {
        self.nodes.get(k).map(|n| n.rotation.angle)
    }

    /// Describe the first difference between two DAGs, matching nodes by
    /// origin. Tableau rows, trailing rotations and node forms must agree
    /// exactly, signs included.
    pub fn difference(&self, other: &Pddag) -> Option<String> {
        let (a, b) = (self.tableau.canonical_input_rows(), other.tableau.canonical_input_rows());
        if a != b {
            return Some(format!("tableaux differ: {a:?} vs {b:?}"));
        }
        if self.nodes.len() != other.nodes.len() {
            return Some(format!("{} vs {} nodes", self.nodes.len(), other.nodes.len()));
        }
        for n in &self.nodes {
            let m = match &n.origin {
                Some(o) => other.find_origin(o).map(|k| &other.nodes[k]),
                None => other.nodes.iter().find(|m| m.origin.is_none() && m.same_form(n)),
            };
            match m {
                Some(m) if m.same_form(n) => {}
                // A rotation about the identity is a global phase.
                Some(m) if m.rotation.string.is_identity_up_to_phase() && n.rotation.string.is_identity_up_to_phase() => {}
                Some(m) => return Some(format!("node {:?}: {:?} vs {:?}", n.origin, n.rotation, m.rotation)),
                None => return Some(format!("node {:?} missing", n.origin)),
            }
        }
        if self.deps_by_origin() != other.deps_by_origin() {
            return Some(format!("deps {:?} vs {:?}", self.deps_by_origin(), other.deps_by_origin()));
        }
        let exact = |a: &[Rotation], b: &[Rotation]| {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.string == y.string && x.angle == y.angle)
        };
        if !exact(&self.trailing, &other.trailing) {
            return Some(format!("trailing {:?} vs {:?}", self.trailing, other.trailing));
        }
        None
    }
}
