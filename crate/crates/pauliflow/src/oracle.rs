//! Dense matrix semantics for patterns, circuits and Pddags.
//!
//! Nothing here goes through the Pauli algebra of the rest of the crate:
//! strings are read letter by letter and applied as matrices.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::angle::Angle;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::graph::{Label, MeasurementPattern};
use crate::pauli::{Pauli, Rotation, SignedPauliString};
use crate::pddag::{IsometryTableau, Pddag};

pub const DEFAULT_TOL: f64 = 1e-9;
const DEFAULT_CAP: usize = 14;

/// Qubit cap, from `PAULIFLOW_MAX_QUBITS` when set.
pub fn max_qubits() -> usize {
    std::env::var("PAULIFLOW_MAX_QUBITS").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_CAP)
}

fn check_cap(needed: usize) -> Result<()> {
    let cap = max_qubits();
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    Ok(())
}

/// A linear map from the inputs to the outputs. Rows index output basis
/// states and columns input basis states, big-endian in the listed order.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMap {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    /// Row-major, `2^|outputs|` rows by `2^|inputs|` columns.
    pub matrix: Vec<Complex64>,
}

impl DenseMap {
    pub fn rows(&self) -> usize {
        1 << self.outputs.len()
    }

    pub fn cols(&self) -> usize {
        1 << self.inputs.len()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.matrix[r * self.cols() + c]
    }

    pub fn identity(qubits: &[String]) -> Self {
        let n = 1 << qubits.len();
        let mut matrix = vec![Complex64::new(0.0, 0.0); n * n];
        for k in 0..n {
            matrix[k * n + k] = Complex64::new(1.0, 0.0);
        }
        DenseMap { inputs: qubits.to_vec(), outputs: qubits.to_vec(), matrix }
    }

    fn from_columns(inputs: Vec<String>, outputs: Vec<String>, cols: &[Vec<Complex64>]) -> Self {
        let (r, c) = (1usize << outputs.len(), cols.len());
        let mut matrix = vec![Complex64::new(0.0, 0.0); r * c];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..r {
                matrix[i * c + j] = col[i];
            }
        }
        DenseMap { inputs, outputs, matrix }
    }

    /// Largest singular value, by power iteration on `A^dagger A`.
    pub fn operator_norm(&self) -> f64 {
        let (r, c) = (self.rows(), self.cols());
        let mut v: Vec<Complex64> = (0..c).map(|k| Complex64::new(1.0 + k as f64 * 0.37, 0.1)).collect();
        let mut est = 0.0;
        for _ in 0..200 {
            let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if n == 0.0 {
                return 0.0;
            }
            v.iter_mut().for_each(|z| *z /= n);
            let av: Vec<Complex64> = (0..r).map(|i| (0..c).map(|j| self.get(i, j) * v[j]).sum()).collect();
            est = av.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v = (0..c).map(|j| (0..r).map(|i| self.get(i, j).conj() * av[i]).sum()).collect();
        }
        est
    }
}

/// State vector over named qubits, big-endian in `qubits` order.
#[derive(Clone, Debug)]
struct State {
    qubits: Vec<String>,
    amps: Vec<Complex64>,
}

type M2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl State {
    fn basis(qubits: Vec<String>, bits: impl Fn(&str) -> bool) -> Self {
        let n = qubits.len();
        let idx = qubits.iter().enumerate().fold(0usize, |acc, (k, q)| acc | (usize::from(bits(q)) << (n - 1 - k)));
        let mut amps = vec![c(0.0, 0.0); 1 << n];
        amps[idx] = c(1.0, 0.0);
        State { qubits, amps }
    }

    fn shift(&self, q: &str) -> Result<usize> {
        let k = self.qubits.iter().position(|x| x == q).ok_or_else(|| Error::UnknownVertex(q.to_string()))?;
        Ok(self.qubits.len() - 1 - k)
    }

    fn apply_1q(&mut self, q: &str, m: &M2) -> Result<()> {
        let bit = 1 << self.shift(q)?;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[i | bit] = m[1][0] * a + m[1][1] * b;
            }
        }
        Ok(())
    }

    /// Apply `m` on the target when every control bit is set.
    fn apply_controlled(&mut self, controls: &[&str], t: &str, m: &M2) -> Result<()> {
        let mask = controls.iter().map(|q| self.shift(q).map(|s| 1usize << s)).sum::<Result<usize>>()?;
        let bit = 1 << self.shift(t)?;
        for i in 0..self.amps.len() {
            if i & bit == 0 && i & mask == mask {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[i | bit] = m[1][0] * a + m[1][1] * b;
            }
        }
        Ok(())
    }

    fn cz(&mut self, a: &str, b: &str) -> Result<()> {
        let mask = (1usize << self.shift(a)?) | (1usize << self.shift(b)?);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    /// `P |psi>` for a string read letter by letter.
    fn pauli(&self, s: &SignedPauliString) -> Result<State> {
        let mut xmask = 0usize;
        let mut letters = Vec::new();
        for (q, p) in s.letters() {
            let bit = 1usize << self.shift(q)?;
            if matches!(p, Pauli::X | Pauli::Y) {
                xmask |= bit;
            }
            letters.push((bit, p));
        }
        let global = c(0.0, 1.0).powi(i32::from(s.phase().exponent()));
        let mut out = vec![c(0.0, 0.0); self.amps.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let mut f = global;
            for &(bit, p) in &letters {
                let one = i & bit != 0;
                match p {
                    Pauli::Z if one => f = -f,
                    Pauli::Y => f *= if one { c(0.0, -1.0) } else { c(0.0, 1.0) },
                    _ => {}
                }
            }
            out[i ^ xmask] += f * a;
        }
        Ok(State { qubits: self.qubits.clone(), amps: out })
    }

    fn exp(&mut self, r: &Rotation) -> Result<()> {
        let half = r.angle.radians() / 2.0;
        let p = self.pauli(&r.string)?;
        for (a, b) in self.amps.iter_mut().zip(&p.amps) {
            *a = *a * half.cos() + c(0.0, half.sin()) * b;
        }
        Ok(())
    }

    /// Contract qubit `q` with the bra `(b0, b1)` and drop it.
    fn contract(&mut self, q: &str, bra: [Complex64; 2]) -> Result<()> {
        let s = self.shift(q)?;
        let bit = 1usize << s;
        let low = bit - 1;
        let mut out = vec![c(0.0, 0.0); self.amps.len() / 2];
        for (j, o) in out.iter_mut().enumerate() {
            let i0 = ((j & !low) << 1) | (j & low);
            *o = bra[0] * self.amps[i0] + bra[1] * self.amps[i0 | bit];
        }
        self.amps = out;
        self.qubits.retain(|x| x != q);
        Ok(())
    }

    /// Amplitudes reordered to the given qubit order.
    fn in_order(&self, order: &[String]) -> Result<Vec<Complex64>> {
        let n = order.len();
        let shifts = order.iter().map(|q| self.shift(q)).collect::<Result<Vec<_>>>()?;
        let mut out = vec![c(0.0, 0.0); self.amps.len()];
        for (j, o) in out.iter_mut().enumerate() {
            let mut i = 0;
            for (k, s) in shifts.iter().enumerate() {
                if j >> (n - 1 - k) & 1 == 1 {
                    i |= 1 << s;
                }
            }
            *o = self.amps[i];
        }
        Ok(out)
    }

    fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        match g {
            Gate::H(q) => self.apply_1q(q, &[[c(s2, 0.0), c(s2, 0.0)], [c(s2, 0.0), c(-s2, 0.0)]]),
            Gate::S(q) => self.apply_1q(q, &[[one, z], [z, c(0.0, 1.0)]]),
            Gate::Sdg(q) => self.apply_1q(q, &[[one, z], [z, c(0.0, -1.0)]]),
            Gate::X(q) => self.apply_1q(q, &[[z, one], [one, z]]),
            Gate::Z(q) => self.apply_1q(q, &[[one, z], [z, -one]]),
            Gate::RZ(q, a) => {
                let h = a.radians() / 2.0;
                self.apply_1q(q, &[[Complex64::from_polar(1.0, -h), z], [z, Complex64::from_polar(1.0, h)]])
            }
            Gate::RX(q, a) => {
                let h = a.radians() / 2.0;
                let (co, si) = (c(h.cos(), 0.0), c(0.0, -h.sin()));
                self.apply_1q(q, &[[co, si], [si, co]])
            }
            Gate::CX(a, t) => self.apply_controlled(&[a], t, &[[z, one], [one, z]]),
            Gate::CZ(a, b) => self.cz(a, b),
            Gate::CCX(a, b, t) => self.apply_controlled(&[a, b], t, &[[z, one], [one, z]]),
            Gate::Exp(r) => self.exp(r),
            Gate::Init0(q) => Err(Error::Precondition(format!("INIT0({q}) inside a unitary section"))),
        }
    }
}

fn bra(label: Label, a: Angle) -> [Complex64; 2] {
    let t = a.radians();
    match label {
        Label::XY | Label::X => [c(1.0, 0.0), Complex64::from_polar(1.0, -t)],
        Label::Y => [c(1.0, 0.0), Complex64::from_polar(1.0, -(t + PI / 2.0))],
        Label::XZ => [c((t / 2.0).cos(), 0.0), c((t / 2.0).sin(), 0.0)],
        Label::YZ => [c((t / 2.0).cos(), 0.0), c(0.0, -(t / 2.0).sin())],
        Label::Z => {
            if a.is_zero() {
                [c(1.0, 0.0), c(0.0, 0.0)]
            } else {
                [c(0.0, 0.0), c(1.0, 0.0)]
            }
        }
    }
}

fn bits_of(k: usize, qubits: &[String]) -> impl Fn(&str) -> bool + '_ {
    let n = qubits.len();
    move |q: &str| qubits.iter().position(|x| x == q).is_some_and(|p| k >> (n - 1 - p) & 1 == 1)
}

/// The pattern's linear map: `|+>` on non-inputs, `CZ` per edge, the `+`
/// projector of every measured vertex, then trailing gates.
pub fn pattern_semantics(pattern: &MeasurementPattern) -> Result<DenseMap> {
    let g = &pattern.graph;
    check_cap(g.vertices().len())?;
    let inputs: Vec<String> = g.inputs().iter().cloned().collect();
    let outputs: Vec<String> = g.outputs().iter().cloned().collect();
    let all: Vec<String> = g.vertices().iter().cloned().collect();
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [[c(s2, 0.0), c(s2, 0.0)], [c(s2, 0.0), c(-s2, 0.0)]];
    let mut cols = Vec::new();
    for k in 0..1usize << inputs.len() {
        let mut st = State::basis(all.clone(), bits_of(k, &inputs));
        for v in g.non_inputs() {
            st.apply_1q(v, &plus)?;
        }
        for (a, b) in g.edges() {
            st.cz(&a, &b)?;
        }
        for (v, &l) in g.labels() {
            let a = pattern.angle(v).ok_or_else(|| Error::InvalidGraph(format!("no angle for `{v}`")))?;
            st.contract(v, bra(l, a))?;
        }
        for gate in &pattern.trailing {
            st.apply_gate(gate)?;
        }
        cols.push(st.in_order(&outputs)?);
    }
    Ok(DenseMap::from_columns(inputs, outputs, &cols))
}

/// The circuit's map from its logical inputs (sorted) to its wires. Wires
/// that are not inputs start in `|0>`; `INIT0` is only allowed on them
/// before any other gate touches them.
pub fn circuit_semantics(circuit: &Circuit) -> Result<DenseMap> {
    check_cap(circuit.wires.len())?;
    let mut inputs: Vec<(String, String)> = circuit.inputs.clone();
    inputs.sort();
    let names: Vec<String> = inputs.iter().map(|(i, _)| i.clone()).collect();
    let mut outputs = circuit.wires.clone();
    outputs.sort();
    for g in &circuit.gates {
        for q in g.qubits() {
            if !circuit.wires.contains(&q) {
                return Err(Error::ShapeMismatch(format!("gate {} on unknown wire `{q}`", g.name())));
            }
        }
    }
    let mut cols = Vec::new();
    for k in 0..1usize << names.len() {
        let input_bits = bits_of(k, &names);
        let mut st = State::basis(circuit.wires.clone(), |w| {
            inputs.iter().find(|(_, wire)| wire == w).is_some_and(|(i, _)| input_bits(i))
        });
        let mut touched: Vec<&str> = inputs.iter().map(|(_, w)| w.as_str()).collect();
        for g in &circuit.gates {
            if let Gate::Init0(q) = g {
                if touched.contains(&q.as_str()) {
                    return Err(Error::Precondition(format!("INIT0 on wire `{q}` after use")));
                }
                touched.push(q);
                continue;
            }
            for q in g.qubits() {
                if !touched.contains(&q.as_str()) {
                    touched.push(circuit.wires.iter().find(|w| **w == q).unwrap());
                }
            }
            st.apply_gate(g)?;
        }
        cols.push(st.in_order(&outputs)?);
    }
    Ok(DenseMap::from_columns(names, outputs, &cols))
}

/// The tableau's isometry, built from its rows alone: column `0` spans the
/// joint `+1` space of the Z rows and free rows, and column `b` is the
/// product of X rows selected by `b` applied to column `0`.
pub fn tableau_semantics(t: &IsometryTableau) -> Result<DenseMap> {
    check_cap(t.outputs.len())?;
    let mut outs = t.outputs.clone();
    outs.sort();
    let stabs: Vec<&SignedPauliString> = t.inputs.iter().map(|r| &r.z).chain(&t.free).collect();
    let dim = 1usize << outs.len();
    let mut base = None;
    for k in 0..dim {
        let mut st = State { qubits: outs.clone(), amps: vec![c(0.0, 0.0); dim] };
        st.amps[k] = c(1.0, 0.0);
        for s in &stabs {
            let p = st.pauli(s)?;
            for (a, b) in st.amps.iter_mut().zip(&p.amps) {
                *a = (*a + b) / 2.0;
            }
        }
        let n = st.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            st.amps.iter_mut().for_each(|z| *z /= n);
            base = Some(st);
            break;
        }
    }
    let base = base.ok_or_else(|| Error::InconsistentTableau("rows have no common +1 eigenvector".into()))?;
    let mut rows: Vec<(String, &SignedPauliString)> = t.inputs.iter().map(|r| (r.input.clone(), &r.x)).collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    let names: Vec<String> = rows.iter().map(|r| r.0.clone()).collect();
    let mut cols = Vec::new();
    for k in 0..1usize << names.len() {
        let mut st = base.clone();
        for (j, (_, x)) in rows.iter().enumerate() {
            if k >> (names.len() - 1 - j) & 1 == 1 {
                st = st.pauli(x)?;
            }
        }
        cols.push(st.amps);
    }
    Ok(DenseMap::from_columns(names, outs, &cols))
}

/// `trailing . nodes[n-1] ... nodes[0] . C`.
pub fn pddag_semantics(d: &Pddag) -> Result<DenseMap> {
    let c0 = tableau_semantics(&d.tableau)?;
    let rots: Vec<&Rotation> = d.nodes.iter().map(|n| &n.rotation).chain(&d.trailing).collect();
    let mut cols = Vec::new();
    for j in 0..c0.cols() {
        let mut st = State { qubits: c0.outputs.clone(), amps: (0..c0.rows()).map(|i| c0.get(i, j)).collect() };
        for r in &rots {
            st.exp(r)?;
        }
        cols.push(st.amps);
    }
    Ok(DenseMap::from_columns(c0.inputs, c0.outputs, &cols))
}

/// Whether `a = c b` for a unit scalar `c` taken from the largest entry of
/// `b`, to within `tol` entrywise.
pub fn equal_up_to_phase(a: &DenseMap, b: &DenseMap, tol: f64) -> Result<bool> {
    if a.inputs != b.inputs || a.outputs != b.outputs {
        return Err(Error::ShapeMismatch(format!(
            "{:?} -> {:?} vs {:?} -> {:?}",
            a.inputs, a.outputs, b.inputs, b.outputs
        )));
    }
    let Some((k, bk)) = b.matrix.iter().enumerate().max_by(|x, y| x.1.norm().total_cmp(&y.1.norm())) else {
        return Ok(true);
    };
    if bk.norm() <= tol {
        return Ok(a.matrix.iter().all(|z| z.norm() <= tol));
    }
    let ak = a.matrix[k];
    if ak.norm() <= tol {
        return Ok(false);
    }
    let ph = ak / ak.norm() * (bk.conj() / bk.norm());
    Ok(a.matrix.iter().zip(&b.matrix).all(|(x, y)| (x - ph * y).norm() <= tol))
}

/// Both maps scaled to unit Frobenius norm, then compared up to phase.
/// Pattern maps carry `sqrt 2` factors from their projectors, so this is the
/// comparison to use against circuits.
pub fn equal_up_to_scalar(a: &DenseMap, b: &DenseMap, tol: f64) -> Result<bool> {
    let unit = |m: &DenseMap| {
        let n = m.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut out = m.clone();
        if n > 0.0 {
            out.matrix.iter_mut().for_each(|z| *z /= n);
        }
        out
    };
    equal_up_to_phase(&unit(a), &unit(b), tol)
}

/// Check `<+_{P, a pi}| = (-1)^a <+_{P, a pi}| P` on vertex `u`'s bra.
pub fn pauli_absorption_check(pattern: &MeasurementPattern, u: &str, p: Pauli) -> Result<bool> {
    let label = pattern.graph.label(u).ok_or_else(|| Error::UnknownVertex(u.to_string()))?;
    let axis = match label {
        Label::X => Pauli::X,
        Label::Y => Pauli::Y,
        Label::Z => Pauli::Z,
        _ => return Err(Error::Precondition(format!("`{u}` is not Pauli measured"))),
    };
    if axis != p {
        return Ok(false);
    }
    let a = pattern.angle(u).expect("measured");
    let b = bra(label, a);
    let m: M2 = match p {
        Pauli::X => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        Pauli::Y => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        Pauli::Z => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        Pauli::I => unreachable!(),
    };
    let sign = if a.is_zero() { 1.0 } else { -1.0 };
    let bp = [b[0] * m[0][0] + b[1] * m[1][0], b[0] * m[0][1] + b[1] * m[1][1]];
    Ok((0..2).all(|k| (b[k] - sign * bp[k]).norm() < DEFAULT_TOL))
}
