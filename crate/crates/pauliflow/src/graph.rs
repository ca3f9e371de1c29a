//! Labelled open graphs and measurement patterns.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::angle::Angle;
use crate::circuit::Gate;
use crate::error::{Error, Result};

pub type VertexSet = BTreeSet<String>;

/// Measurement plane or Pauli axis of a measured vertex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Label {
    XY,
    XZ,
    YZ,
    X,
    Y,
    Z,
}

impl Label {
    pub const ALL: [Label; 6] = [Label::XY, Label::XZ, Label::YZ, Label::X, Label::Y, Label::Z];

    pub fn is_planar(self) -> bool {
        matches!(self, Label::XY | Label::XZ | Label::YZ)
    }

    pub fn is_pauli(self) -> bool {
        !self.is_planar()
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::XY => "XY",
            Label::XZ => "XZ",
            Label::YZ => "YZ",
            Label::X => "X",
            Label::Y => "Y",
            Label::Z => "Z",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Label::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::InvalidGraph(format!("unknown label `{s}`")))
    }
}

/// A graph with input and output sets (possibly overlapping) and a label on
/// every non-output vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledOpenGraph {
    vertices: VertexSet,
    adj: BTreeMap<String, VertexSet>,
    inputs: VertexSet,
    outputs: VertexSet,
    labels: BTreeMap<String, Label>,
}

impl LabelledOpenGraph {
    pub fn new<V, E, S>(
        vertices: V,
        edges: E,
        inputs: impl IntoIterator<Item = S>,
        outputs: impl IntoIterator<Item = S>,
        labels: impl IntoIterator<Item = (S, Label)>,
    ) -> Result<Self>
    where
        V: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let vertices: VertexSet = vertices.into_iter().map(Into::into).collect();
        let mut adj: BTreeMap<String, VertexSet> =
            vertices.iter().map(|v| (v.clone(), VertexSet::new())).collect();
        for (a, b) in edges {
            let (a, b) = (a.into(), b.into());
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on `{a}`")));
            }
            for v in [&a, &b] {
                if !vertices.contains(v) {
                    return Err(Error::UnknownVertex(v.clone()));
                }
            }
            adj.get_mut(&a).unwrap().insert(b.clone());
            adj.get_mut(&b).unwrap().insert(a);
        }
        let g = LabelledOpenGraph {
            vertices,
            adj,
            inputs: inputs.into_iter().map(Into::into).collect(),
            outputs: outputs.into_iter().map(Into::into).collect(),
            labels: labels.into_iter().map(|(v, l)| (v.into(), l)).collect(),
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        for v in self.inputs.iter().chain(&self.outputs).chain(self.labels.keys()) {
            if !self.vertices.contains(v) {
                return Err(Error::UnknownVertex(v.clone()));
            }
        }
        for v in &self.vertices {
            let labelled = self.labels.contains_key(v);
            let output = self.outputs.contains(v);
            if output && labelled {
                return Err(Error::InvalidGraph(format!("output `{v}` carries a label")));
            }
            if !output && !labelled {
                return Err(Error::InvalidGraph(format!("measured vertex `{v}` has no label")));
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn inputs(&self) -> &VertexSet {
        &self.inputs
    }

    pub fn outputs(&self) -> &VertexSet {
        &self.outputs
    }

    pub fn labels(&self) -> &BTreeMap<String, Label> {
        &self.labels
    }

    pub fn label(&self, v: &str) -> Option<Label> {
        self.labels.get(v).copied()
    }

    pub fn contains(&self, v: &str) -> bool {
        self.vertices.contains(v)
    }

    pub fn is_input(&self, v: &str) -> bool {
        self.inputs.contains(v)
    }

    pub fn is_output(&self, v: &str) -> bool {
        self.outputs.contains(v)
    }

    /// Non-output vertices.
    pub fn measured(&self) -> impl Iterator<Item = &String> {
        self.labels.keys()
    }

    /// Non-input vertices.
    pub fn non_inputs(&self) -> impl Iterator<Item = &String> {
        self.vertices.iter().filter(|v| !self.inputs.contains(*v))
    }

    pub fn neighbours(&self, v: &str) -> Result<&VertexSet> {
        self.adj.get(v).ok_or_else(|| Error::UnknownVertex(v.to_string()))
    }

    pub fn adjacent(&self, a: &str, b: &str) -> bool {
        self.adj.get(a).is_some_and(|n| n.contains(b))
    }

    /// Edges as sorted pairs `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (a, ns) in &self.adj {
            for b in ns {
                if a < b {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    fn check(&self, v: &str) -> Result<()> {
        if self.vertices.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.to_string()))
        }
    }

    /// Vertices adjacent to an odd number of members of `a`.
    pub fn odd_neighbourhood<'a>(&self, a: impl IntoIterator<Item = &'a String>) -> Result<VertexSet> {
        let mut odd = VertexSet::new();
        for v in a {
            for w in self.neighbours(v)? {
                if !odd.remove(w) {
                    odd.insert(w.clone());
                }
            }
        }
        Ok(odd)
    }

    /// Number of edges with both ends in `a`.
    pub fn edges_within(&self, a: &VertexSet) -> usize {
        a.iter()
            .map(|v| self.adj.get(v).map_or(0, |n| n.iter().filter(|w| a.contains(*w) && v < *w).count()))
            .sum()
    }

    pub(crate) fn toggle_edge(&mut self, a: &str, b: &str) {
        debug_assert_ne!(a, b);
        let na = self.adj.get_mut(a).expect("known vertex");
        if !na.remove(b) {
            na.insert(b.to_string());
            self.adj.get_mut(b).unwrap().insert(a.to_string());
        } else {
            self.adj.get_mut(b).unwrap().remove(a);
        }
    }

    pub(crate) fn set_label(&mut self, v: &str, l: Label) {
        debug_assert!(!self.outputs.contains(v));
        self.labels.insert(v.to_string(), l);
    }

    /// `G * u`: complement the edges among the neighbours of `u`.
    pub fn local_complement(&self, u: &str) -> Result<Self> {
        let ns: Vec<String> = self.neighbours(u)?.iter().cloned().collect();
        let mut g = self.clone();
        for (k, a) in ns.iter().enumerate() {
            for b in &ns[k + 1..] {
                g.toggle_edge(a, b);
            }
        }
        Ok(g)
    }

    /// `G * u * v * u` for adjacent `u`, `v`.
    pub fn pivot(&self, u: &str, v: &str) -> Result<Self> {
        self.check(u)?;
        self.check(v)?;
        if !self.adjacent(u, v) {
            return Err(Error::Precondition(format!("`{u}` and `{v}` are not adjacent")));
        }
        self.local_complement(u)?.local_complement(v)?.local_complement(u)
    }

    /// Replace input `u` by a fresh `XY`-labelled input joined only to `u`.
    pub fn input_extend(&self, u: &str) -> Result<(Self, String)> {
        self.check(u)?;
        if !self.inputs.contains(u) {
            return Err(Error::Precondition(format!("`{u}` is not an input")));
        }
        let mut fresh = format!("{u}'");
        while self.vertices.contains(&fresh) {
            fresh.push('\'');
        }
        let mut g = self.clone();
        g.vertices.insert(fresh.clone());
        g.adj.insert(fresh.clone(), VertexSet::new());
        g.toggle_edge(&fresh, u);
        g.inputs.remove(u);
        g.inputs.insert(fresh.clone());
        g.labels.insert(fresh.clone(), Label::XY);
        Ok((g, fresh))
    }

    pub fn remove_vertex(&self, u: &str) -> Result<Self> {
        self.check(u)?;
        let mut g = self.clone();
        for w in g.adj.remove(u).unwrap_or_default() {
            g.adj.get_mut(&w).unwrap().remove(u);
        }
        g.vertices.remove(u);
        g.inputs.remove(u);
        g.outputs.remove(u);
        g.labels.remove(u);
        Ok(g)
    }
}

/// A labelled open graph with measurement angles and the single-qubit
/// Clifford gates that rewrites leave behind on outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementPattern {
    pub graph: LabelledOpenGraph,
    angles: BTreeMap<String, Angle>,
    /// Applied after the pattern, in order.
    pub trailing: Vec<Gate>,
}

impl MeasurementPattern {
    pub fn new(graph: LabelledOpenGraph, angles: BTreeMap<String, Angle>) -> Result<Self> {
        let p = MeasurementPattern { graph, angles, trailing: Vec::new() };
        p.validate()?;
        Ok(p)
    }

    pub fn builder() -> PatternBuilder {
        PatternBuilder::default()
    }

    fn validate(&self) -> Result<()> {
        for v in self.angles.keys() {
            if self.graph.label(v).is_none() {
                return Err(Error::InvalidGraph(format!("angle given for unmeasured vertex `{v}`")));
            }
        }
        for (v, l) in self.graph.labels() {
            let a = self
                .angles
                .get(v)
                .ok_or_else(|| Error::InvalidGraph(format!("measured vertex `{v}` has no angle")))?;
            if l.is_pauli() && !a.is_pauli() {
                return Err(Error::InvalidAngle(format!("Pauli vertex `{v}` needs angle 0 or pi, got {a}")));
            }
        }
        for g in &self.trailing {
            for q in g.qubits() {
                if !self.graph.is_output(&q) {
                    return Err(Error::InvalidGraph(format!("trailing gate on non-output `{q}`")));
                }
            }
        }
        Ok(())
    }

    pub fn angles(&self) -> &BTreeMap<String, Angle> {
        &self.angles
    }

    pub fn angle(&self, v: &str) -> Option<Angle> {
        self.angles.get(v).copied()
    }

    pub(crate) fn set_measurement(&mut self, v: &str, l: Label, a: Angle) {
        self.graph.set_label(v, l);
        self.angles.insert(v.to_string(), a);
    }

    pub fn with_angle(&self, v: &str, a: Angle) -> Result<Self> {
        if self.graph.label(v).is_none() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        let mut p = self.clone();
        p.angles.insert(v.to_string(), a);
        p.validate()?;
        Ok(p)
    }

    pub fn with_trailing(mut self, gates: Vec<Gate>) -> Result<Self> {
        self.trailing = gates;
        self.validate()?;
        Ok(self)
    }

    pub(crate) fn replace_graph(&mut self, g: LabelledOpenGraph) {
        self.angles.retain(|v, _| g.label(v).is_some());
        self.graph = g;
    }

    /// Input extension about `u`; the result equals this pattern preceded by
    /// a Hadamard on input `u` (relabelled to the fresh vertex).
    pub fn input_extend(&self, u: &str) -> Result<(Self, String)> {
        let (g, fresh) = self.graph.input_extend(u)?;
        let mut p = self.clone();
        p.graph = g;
        p.angles.insert(fresh.clone(), Angle::zero());
        Ok((p, fresh))
    }
}

#[derive(Default)]
pub struct PatternBuilder {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    measurements: Vec<(String, Label, Angle)>,
}

impl PatternBuilder {
    pub fn vertices<S: Into<String>>(mut self, vs: impl IntoIterator<Item = S>) -> Self {
        self.vertices.extend(vs.into_iter().map(Into::into));
        self
    }

    pub fn edge(mut self, a: impl Into<String>, b: impl Into<String>) -> Self {
        self.edges.push((a.into(), b.into()));
        self
    }

    pub fn inputs<S: Into<String>>(mut self, vs: impl IntoIterator<Item = S>) -> Self {
        self.inputs.extend(vs.into_iter().map(Into::into));
        self
    }

    pub fn outputs<S: Into<String>>(mut self, vs: impl IntoIterator<Item = S>) -> Self {
        self.outputs.extend(vs.into_iter().map(Into::into));
        self
    }

    pub fn measure(mut self, v: impl Into<String>, l: Label, a: Angle) -> Self {
        self.measurements.push((v.into(), l, a));
        self
    }

    pub fn build(self) -> Result<MeasurementPattern> {
        let g = LabelledOpenGraph::new(
            self.vertices,
            self.edges,
            self.inputs,
            self.outputs,
            self.measurements.iter().map(|(v, l, _)| (v.clone(), *l)),
        )?;
        let angles = self.measurements.into_iter().map(|(v, _, a)| (v, a)).collect();
        MeasurementPattern::new(g, angles)
    }
}

/// Build a vertex set from string slices.
pub fn vset<'a>(vs: impl IntoIterator<Item = &'a str>) -> VertexSet {
    vs.into_iter().map(str::to_string).collect()
}

/// Symmetric difference.
pub fn sym_diff(a: &VertexSet, b: &VertexSet) -> VertexSet {
    a.symmetric_difference(b).cloned().collect()
}
