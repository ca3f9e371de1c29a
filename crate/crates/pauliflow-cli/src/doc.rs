//! JSON documents for patterns, flows, Pddags, circuits and rewrite reports.
//!
//! Parsing is strict: unknown fields are rejected and every error carries the
//! JSON pointer of the offending value. Serialization is canonical: object
//! keys and vertex lists are sorted.

use std::collections::{BTreeMap, BTreeSet};

use pauliflow::flow::{FocussedSet, Order, PauliFlowData, Violation};
use pauliflow::graph::{LabelledOpenGraph, MeasurementPattern, VertexSet};
use pauliflow::pddag::{build_deps, InputRows, IsometryTableau, Node, Pddag};
use pauliflow::rewrite::RewriteReport;
use pauliflow::{Angle, Circuit, Gate, Label, Rotation, SignedPauliString};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub const VERSION: &str = "1";

/// Largest denominator tried when snapping a float angle.
const FLOAT_MAX_DEN: i64 = 4096;
const FLOAT_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
#[error("{message} at {pointer}")]
pub struct DocError {
    pub pointer: String,
    pub message: String,
}

impl DocError {
    fn at(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        DocError { pointer: pointer.into(), message: message.into() }
    }
}

type Result<T> = std::result::Result<T, DocError>;

/// Escape one reference token of a JSON pointer.
pub fn token(s: &str) -> String {
    s.replace('~', "~0").replace('/', "~1")
}

fn ptr(parts: &[&str]) -> String {
    parts.iter().map(|p| format!("/{}", token(p))).collect()
}

/// Parse options that affect how documents are read.
#[derive(Clone, Copy, Debug, Default)]
pub struct ReadOptions {
    /// Accept angles given as numbers of radians and snap them to rationals.
    pub float_angles: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactAngle {
    pub num: i64,
    pub den: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleDoc {
    Exact(ExactAngle),
    Radians(f64),
}

impl AngleDoc {
    pub fn from_angle(a: Angle) -> Self {
        AngleDoc::Exact(ExactAngle { num: a.num(), den: a.den() })
    }

    fn to_angle(&self, at: &str, opts: ReadOptions) -> Result<Angle> {
        match self {
            AngleDoc::Exact(e) => {
                if e.den == 0 {
                    return Err(DocError::at(format!("{at}/den"), "denominator is zero"));
                }
                Angle::new(e.num, e.den).map_err(|e| DocError::at(at, e.to_string()))
            }
            AngleDoc::Radians(x) if opts.float_angles => {
                Angle::from_radians(*x, FLOAT_MAX_DEN, FLOAT_TOL).map_err(|e| DocError::at(at, e.to_string()))
            }
            AngleDoc::Radians(_) => Err(DocError::at(at, "angles must be {num, den}; pass --float-angles for radians")),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowDoc {
    pub p: BTreeMap<String, BTreeSet<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<BTreeMap<String, usize>>,
    /// Explicit pairs `[v, w]` meaning `v` before `w`, for orders that are
    /// not depth maps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<BTreeSet<(String, String)>>,
}

impl FlowDoc {
    pub fn from_flow(f: &PauliFlowData) -> Self {
        let p = f.p.iter().map(|(v, s)| (v.clone(), s.clone())).collect();
        match &f.order {
            Order::Depth(d) => FlowDoc { p, depth: Some(d.clone()), order: None },
            Order::Relation(r) => FlowDoc { p, depth: None, order: Some(r.clone()) },
        }
    }

    /// Check names against `g`; `at` prefixes error pointers.
    pub fn to_flow(&self, g: &LabelledOpenGraph, at: &str) -> Result<PauliFlowData> {
        for (v, s) in &self.p {
            if !g.contains(v) {
                return Err(DocError::at(format!("{at}/p/{}", token(v)), format!("unknown vertex `{v}`")));
            }
            for w in s {
                if !g.contains(w) {
                    return Err(DocError::at(format!("{at}/p/{}", token(v)), format!("unknown vertex `{w}`")));
                }
            }
        }
        let order = match (&self.depth, &self.order) {
            (Some(d), None) => {
                if let Some(v) = d.keys().find(|v| !g.contains(v)) {
                    return Err(DocError::at(format!("{at}/depth/{}", token(v)), format!("unknown vertex `{v}`")));
                }
                Order::Depth(d.clone())
            }
            (None, Some(r)) => {
                for (k, (a, b)) in r.iter().enumerate() {
                    for x in [a, b] {
                        if !g.contains(x) {
                            return Err(DocError::at(format!("{at}/order/{k}"), format!("unknown vertex `{x}`")));
                        }
                    }
                }
                Order::Relation(r.clone())
            }
            _ => return Err(DocError::at(at, "give exactly one of `depth` and `order`")),
        };
        Ok(PauliFlowData { p: self.p.clone(), order })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateDoc {
    pub gate: String,
    pub qubits: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<AngleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub string: Option<String>,
}

impl GateDoc {
    pub fn from_gate(g: &Gate) -> Self {
        let (angle, string) = match g {
            Gate::RZ(_, a) | Gate::RX(_, a) => (Some(AngleDoc::from_angle(*a)), None),
            Gate::Exp(r) => (Some(AngleDoc::from_angle(r.angle)), Some(r.string.to_string())),
            _ => (None, None),
        };
        GateDoc { gate: g.name().to_string(), qubits: g.qubits(), angle, string }
    }

    fn to_gate(&self, at: &str, opts: ReadOptions) -> Result<Gate> {
        let q = &self.qubits;
        let arity = |n: usize| -> Result<()> {
            if q.len() != n {
                return Err(DocError::at(format!("{at}/qubits"), format!("{} takes {n} qubits", self.gate)));
            }
            Ok(())
        };
        let angle = || -> Result<Angle> {
            self.angle
                .as_ref()
                .ok_or_else(|| DocError::at(at, format!("{} needs an angle", self.gate)))?
                .to_angle(&format!("{at}/angle"), opts)
        };
        let unexpected = |field: &str, present: bool| -> Result<()> {
            if present {
                return Err(DocError::at(format!("{at}/{field}"), format!("{} takes no {field}", self.gate)));
            }
            Ok(())
        };
        if self.gate != "EXP" {
            unexpected("string", self.string.is_some())?;
        }
        if !matches!(self.gate.as_str(), "RZ" | "RX" | "EXP") {
            unexpected("angle", self.angle.is_some())?;
        }
        let one = |f: fn(String) -> Gate| -> Result<Gate> {
            arity(1)?;
            Ok(f(q[0].clone()))
        };
        Ok(match self.gate.as_str() {
            "H" => one(Gate::H)?,
            "S" => one(Gate::S)?,
            "Sdg" => one(Gate::Sdg)?,
            "X" => one(Gate::X)?,
            "Z" => one(Gate::Z)?,
            "INIT0" => one(Gate::Init0)?,
            "RZ" => {
                arity(1)?;
                Gate::RZ(q[0].clone(), angle()?)
            }
            "RX" => {
                arity(1)?;
                Gate::RX(q[0].clone(), angle()?)
            }
            "CX" | "CZ" => {
                arity(2)?;
                if q[0] == q[1] {
                    return Err(DocError::at(format!("{at}/qubits"), "control equals target"));
                }
                if self.gate == "CX" {
                    Gate::CX(q[0].clone(), q[1].clone())
                } else {
                    Gate::CZ(q[0].clone(), q[1].clone())
                }
            }
            "CCX" => {
                arity(3)?;
                Gate::CCX(q[0].clone(), q[1].clone(), q[2].clone())
            }
            "EXP" => {
                let text = self.string.as_ref().ok_or_else(|| DocError::at(at, "EXP needs a string"))?;
                let s = parse_string(text, &format!("{at}/string"))?;
                let r = Rotation::new(s, angle()?).map_err(|e| DocError::at(at, e.to_string()))?;
                let support: BTreeSet<&str> = r.string.support().collect();
                if support != q.iter().map(String::as_str).collect() {
                    return Err(DocError::at(format!("{at}/qubits"), "qubits must be the string's support"));
                }
                Gate::Exp(r)
            }
            other => return Err(DocError::at(format!("{at}/gate"), format!("unknown gate `{other}`"))),
        })
    }
}

fn parse_string(text: &str, at: &str) -> Result<SignedPauliString> {
    text.parse().map_err(|e: pauliflow::Error| DocError::at(at, e.to_string()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternDoc {
    pub version: String,
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub labels: BTreeMap<String, String>,
    pub angles: BTreeMap<String, AngleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flow: Option<FlowDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fsets: Option<Vec<BTreeSet<String>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trailing: Vec<GateDoc>,
}

/// A pattern with the optional flow and focussed sets it was stored with.
#[derive(Clone, Debug)]
pub struct PatternBundle {
    pub pattern: MeasurementPattern,
    pub flow: Option<PauliFlowData>,
    pub fsets: Option<Vec<FocussedSet>>,
}

fn check_names<'a>(vs: &VertexSet, names: impl IntoIterator<Item = &'a String>, at: &str) -> Result<()> {
    for (k, v) in names.into_iter().enumerate() {
        if !vs.contains(v) {
            return Err(DocError::at(format!("{at}/{k}"), format!("unknown vertex `{v}`")));
        }
    }
    Ok(())
}

impl PatternDoc {
    pub fn from_parts(pattern: &MeasurementPattern, flow: Option<&PauliFlowData>, fsets: Option<&[FocussedSet]>) -> Self {
        let g = &pattern.graph;
        let mut edges: Vec<(String, String)> = g.edges();
        edges.sort();
        PatternDoc {
            version: VERSION.to_string(),
            vertices: g.vertices().iter().cloned().collect(),
            edges,
            inputs: g.inputs().iter().cloned().collect(),
            outputs: g.outputs().iter().cloned().collect(),
            labels: g.labels().iter().map(|(v, l)| (v.clone(), l.to_string())).collect(),
            angles: pattern.angles().iter().map(|(v, a)| (v.clone(), AngleDoc::from_angle(*a))).collect(),
            flow: flow.map(FlowDoc::from_flow),
            fsets: fsets.map(|fs| fs.iter().map(|f| f.members.clone()).collect()),
            trailing: pattern.trailing.iter().map(GateDoc::from_gate).collect(),
        }
    }

    pub fn to_bundle(&self, opts: ReadOptions) -> Result<PatternBundle> {
        check_version(&self.version)?;
        let mut vs = VertexSet::new();
        for (k, v) in self.vertices.iter().enumerate() {
            if !vs.insert(v.clone()) {
                return Err(DocError::at(format!("/vertices/{k}"), format!("duplicate vertex `{v}`")));
            }
        }
        for (k, (a, b)) in self.edges.iter().enumerate() {
            check_names(&vs, [a, b], &format!("/edges/{k}"))?;
            if a == b {
                return Err(DocError::at(format!("/edges/{k}"), format!("self-loop on `{a}`")));
            }
        }
        check_names(&vs, &self.inputs, "/inputs")?;
        check_names(&vs, &self.outputs, "/outputs")?;
        let outputs: VertexSet = self.outputs.iter().cloned().collect();
        let mut labels = Vec::new();
        let mut angles = BTreeMap::new();
        for v in &vs {
            let at_label = ptr(&["labels", v]);
            let at_angle = ptr(&["angles", v]);
            match (outputs.contains(v), self.labels.get(v)) {
                (true, Some(_)) => return Err(DocError::at(at_label, format!("output `{v}` is not measured"))),
                (true, None) => {
                    if self.angles.contains_key(v) {
                        return Err(DocError::at(at_angle, format!("output `{v}` is not measured")));
                    }
                }
                (false, None) => return Err(DocError::at(at_label, format!("measured vertex `{v}` has no label"))),
                (false, Some(text)) => {
                    let l: Label = text.parse().map_err(|_| DocError::at(&at_label, format!("unknown label `{text}`")))?;
                    let a = self
                        .angles
                        .get(v)
                        .ok_or_else(|| DocError::at(&at_angle, format!("measured vertex `{v}` has no angle")))?
                        .to_angle(&at_angle, opts)?;
                    if l.is_pauli() && !a.is_pauli() {
                        return Err(DocError::at(at_angle, format!("Pauli-measured `{v}` needs angle 0 or pi")));
                    }
                    labels.push((v.clone(), l));
                    angles.insert(v.clone(), a);
                }
            }
        }
        for v in self.labels.keys().chain(self.angles.keys()) {
            if !vs.contains(v) {
                let field = if self.labels.contains_key(v) { "labels" } else { "angles" };
                return Err(DocError::at(ptr(&[field, v]), format!("unknown vertex `{v}`")));
            }
        }
        let g = LabelledOpenGraph::new(
            self.vertices.clone(),
            self.edges.clone(),
            self.inputs.clone(),
            self.outputs.clone(),
            labels,
        )
        .map_err(|e| DocError::at("", e.to_string()))?;
        let mut trailing = Vec::new();
        for (k, gd) in self.trailing.iter().enumerate() {
            let at = format!("/trailing/{k}");
            let gate = gd.to_gate(&at, opts)?;
            if let Some(q) = gate.qubits().into_iter().find(|q| !outputs.contains(q)) {
                return Err(DocError::at(format!("{at}/qubits"), format!("`{q}` is not an output")));
            }
            trailing.push(gate);
        }
        let pattern = MeasurementPattern::new(g, angles)
            .and_then(|p| p.with_trailing(trailing))
            .map_err(|e| DocError::at("", e.to_string()))?;
        let flow = self.flow.as_ref().map(|f| f.to_flow(&pattern.graph, "/flow")).transpose()?;
        let fsets = match &self.fsets {
            None => None,
            Some(fs) => {
                let mut out = Vec::new();
                for (k, f) in fs.iter().enumerate() {
                    check_names(&vs, f, &format!("/fsets/{k}"))?;
                    out.push(FocussedSet::new(f.clone()));
                }
                Some(out)
            }
        };
        Ok(PatternBundle { pattern, flow, fsets })
    }
}

fn check_version(v: &str) -> Result<()> {
    if v != VERSION {
        return Err(DocError::at("/version", format!("unsupported version `{v}`, expected `{VERSION}`")));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputRowDoc {
    pub input: String,
    pub z: String,
    pub x: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableauDoc {
    pub outputs: Vec<String>,
    pub inputs: Vec<InputRowDoc>,
    pub free: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotationDoc {
    pub string: String,
    pub angle: AngleDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<String>,
}

impl RotationDoc {
    fn from_rotation(r: &Rotation, origin: Option<&String>) -> Self {
        RotationDoc { string: r.string.to_string(), angle: AngleDoc::from_angle(r.angle), origin: origin.cloned() }
    }

    fn to_rotation(&self, at: &str, opts: ReadOptions) -> Result<Rotation> {
        let s = parse_string(&self.string, &format!("{at}/string"))?;
        let a = self.angle.to_angle(&format!("{at}/angle"), opts)?;
        Rotation::new(s, a).map_err(|e| DocError::at(format!("{at}/string"), e.to_string()))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PddagDoc {
    pub version: String,
    pub tableau: TableauDoc,
    pub nodes: Vec<RotationDoc>,
    pub deps: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trailing: Vec<RotationDoc>,
}

impl PddagDoc {
    pub fn from_pddag(d: &Pddag) -> Self {
        let t = &d.tableau;
        PddagDoc {
            version: VERSION.to_string(),
            tableau: TableauDoc {
                outputs: t.outputs.clone(),
                inputs: t
                    .inputs
                    .iter()
                    .map(|r| InputRowDoc { input: r.input.clone(), z: r.z.to_string(), x: r.x.to_string() })
                    .collect(),
                free: t.free.iter().map(ToString::to_string).collect(),
            },
            nodes: d.nodes.iter().map(|n| RotationDoc::from_rotation(&n.rotation, n.origin.as_ref())).collect(),
            deps: d.deps.clone(),
            trailing: d.trailing.iter().map(|r| RotationDoc::from_rotation(r, None)).collect(),
        }
    }

    pub fn to_pddag(&self, opts: ReadOptions) -> Result<Pddag> {
        check_version(&self.version)?;
        let mut inputs = Vec::new();
        for (k, r) in self.tableau.inputs.iter().enumerate() {
            let at = format!("/tableau/inputs/{k}");
            inputs.push(InputRows {
                input: r.input.clone(),
                z: parse_string(&r.z, &format!("{at}/z"))?,
                x: parse_string(&r.x, &format!("{at}/x"))?,
            });
        }
        let mut free = Vec::new();
        for (k, s) in self.tableau.free.iter().enumerate() {
            free.push(parse_string(s, &format!("/tableau/free/{k}"))?);
        }
        let tableau = IsometryTableau { outputs: self.tableau.outputs.clone(), inputs, free };
        tableau.validate().map_err(|e| DocError::at("/tableau", e.to_string()))?;
        let mut nodes = Vec::new();
        for (k, n) in self.nodes.iter().enumerate() {
            let r = n.to_rotation(&format!("/nodes/{k}"), opts)?;
            nodes.push(Node { rotation: r, origin: n.origin.clone() });
        }
        let mut trailing = Vec::new();
        for (k, n) in self.trailing.iter().enumerate() {
            trailing.push(n.to_rotation(&format!("/trailing/{k}"), opts)?);
        }
        let rots: Vec<Rotation> = nodes.iter().map(|n| n.rotation.clone()).collect();
        let mut want = build_deps(&rots);
        want.sort();
        let mut given = self.deps.clone();
        given.sort();
        if want != given {
            return Err(DocError::at("/deps", format!("dependencies do not match the node strings; expected {want:?}")));
        }
        Ok(Pddag::new(tableau, nodes, trailing))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitDoc {
    pub version: String,
    pub wires: Vec<String>,
    /// Pairs `[input, wire]`.
    pub inputs: Vec<(String, String)>,
    pub gates: Vec<GateDoc>,
}

impl CircuitDoc {
    pub fn from_circuit(c: &Circuit) -> Self {
        CircuitDoc {
            version: VERSION.to_string(),
            wires: c.wires.clone(),
            inputs: c.inputs.clone(),
            gates: c.gates.iter().map(GateDoc::from_gate).collect(),
        }
    }

    pub fn to_circuit(&self, opts: ReadOptions) -> Result<Circuit> {
        check_version(&self.version)?;
        let wires: VertexSet = self.wires.iter().cloned().collect();
        if wires.len() != self.wires.len() {
            return Err(DocError::at("/wires", "duplicate wire"));
        }
        for (k, (_, w)) in self.inputs.iter().enumerate() {
            if !wires.contains(w) {
                return Err(DocError::at(format!("/inputs/{k}/1"), format!("unknown wire `{w}`")));
            }
        }
        let mut c = Circuit::new(self.wires.clone(), self.inputs.clone());
        for (k, gd) in self.gates.iter().enumerate() {
            let at = format!("/gates/{k}");
            let g = gd.to_gate(&at, opts)?;
            if let Some(q) = g.qubits().into_iter().find(|q| !wires.contains(q)) {
                return Err(DocError::at(format!("{at}/qubits"), format!("unknown wire `{q}`")));
            }
            c.push(g);
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViolationDoc {
    pub vertex: String,
    pub condition: String,
}

impl ViolationDoc {
    pub fn from_violation(v: &Violation) -> Self {
        ViolationDoc { vertex: v.vertex.clone(), condition: v.condition.to_string() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDoc {
    pub version: String,
    pub pattern: PatternDoc,
    pub via_pattern: PddagDoc,
    pub via_simulation: PddagDoc,
    #[serde(rename = "match")]
    pub matches: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub difference: Option<String>,
}

impl ReportDoc {
    pub fn from_report(r: &RewriteReport) -> Self {
        let difference = r.mismatch();
        ReportDoc {
            version: VERSION.to_string(),
            pattern: PatternDoc::from_parts(&r.pattern, Some(&r.flow), Some(&r.fsets)),
            via_pattern: PddagDoc::from_pddag(&r.via_pattern),
            via_simulation: PddagDoc::from_pddag(&r.via_simulation),
            matches: difference.is_none(),
            difference,
        }
    }
}

/// Which document a JSON value holds, judged by its distinguishing key.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Pattern,
    Pddag,
    Circuit,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Pattern => "pattern",
            Kind::Pddag => "pddag",
            Kind::Circuit => "circuit",
        }
    }
}

pub fn kind_of(v: &Value) -> Result<Kind> {
    let obj = v.as_object().ok_or_else(|| DocError::at("", "expected a JSON object"))?;
    if obj.contains_key("vertices") {
        Ok(Kind::Pattern)
    } else if obj.contains_key("tableau") {
        Ok(Kind::Pddag)
    } else if obj.contains_key("gates") {
        Ok(Kind::Circuit)
    } else {
        Err(DocError::at("", "not a pattern, pddag or circuit document"))
    }
}

/// Parse JSON text into a value, reporting syntax errors at the root.
pub fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| DocError::at("", format!("invalid JSON: {e}")))
}

/// Deserialize a typed document, reporting structural errors by pointer.
pub fn from_value<T: DeserializeOwned>(v: Value) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let mut pointer = String::new();
        for seg in e.path().iter() {
            use serde_path_to_error::Segment;
            match seg {
                Segment::Seq { index } => pointer.push_str(&format!("/{index}")),
                Segment::Map { key } | Segment::Enum { variant: key } => {
                    pointer.push('/');
                    pointer.push_str(&token(key));
                }
                Segment::Unknown => {}
            }
        }
        DocError::at(pointer, e.inner().to_string())
    })
}

/// Canonical text: sorted object keys, two-space indentation, trailing newline.
pub fn to_canonical<T: Serialize>(doc: &T) -> String {
    let v = serde_json::to_value(doc).expect("documents serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}
