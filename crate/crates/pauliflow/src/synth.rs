//! Circuit synthesis from a Pddag: tableau completion and reduction, then
//! one Pauli exponential per node.

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::f2::F2Matrix;
use crate::pauli::{conjugate_by_gate, Pauli, Rotation, SignedPauliString};
use crate::pddag::{symplectic, IsometryTableau, Pddag};

/// Wire assignment: inputs that are also outputs keep their own wire, the
/// remaining inputs take the free output wires in order, and every wire left
/// over is an ancilla.
pub fn assign_wires(t: &IsometryTableau) -> (Vec<(String, String)>, Vec<String>) {
    let mut taken: Vec<String> = Vec::new();
    let mut pairs = vec![None; t.inputs.len()];
    for (k, r) in t.inputs.iter().enumerate() {
        if t.outputs.contains(&r.input) {
            pairs[k] = Some(r.input.clone());
            taken.push(r.input.clone());
        }
    }
    let mut spare = t.outputs.iter().filter(|o| !taken.contains(o)).cloned();
    for slot in pairs.iter_mut().filter(|s| s.is_none()) {
        *slot = spare.next();
    }
    let ancillas: Vec<String> = spare.collect();
    let inputs = t
        .inputs
        .iter()
        .zip(pairs)
        .map(|(r, w)| (r.input.clone(), w.expect("at most as many inputs as outputs")))
        .collect();
    (inputs, ancillas)
}

fn string_from_bits(bits: &[bool], qubits: &[String]) -> SignedPauliString {
    let n = qubits.len();
    SignedPauliString::from_letters(
        qubits
            .iter()
            .enumerate()
            .map(|(k, q)| (q.clone(), Pauli::from_bits(bits[k], bits[n + k]))),
    )
}

/// Symplectic partners for the free rows: `d_k` anticommutes with free row
/// `k` only and commutes with every input row and earlier partner.
pub fn complete_free_rows(t: &IsometryTableau) -> Result<Vec<SignedPauliString>> {
    let qs = &t.outputs;
    let n = qs.len();
    // <r, v> = r.x . v.z + r.z . v.x, so a constraint row is r with halves swapped.
    let swapped = |s: &SignedPauliString| {
        let b = symplectic(s, qs);
        let mut out = b[n..].to_vec();
        out.extend_from_slice(&b[..n]);
        out
    };
    let mut partners: Vec<SignedPauliString> = Vec::new();
    for k in 0..t.free.len() {
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for r in &t.inputs {
            rows.push(swapped(&r.z));
            rhs.push(false);
            rows.push(swapped(&r.x));
            rhs.push(false);
        }
        for (j, f) in t.free.iter().enumerate() {
            rows.push(swapped(f));
            rhs.push(j == k);
        }
        for d in &partners {
            rows.push(swapped(d));
            rhs.push(false);
        }
        let m = F2Matrix::from_rows(&rows);
        let sol = m
            .solve(&rhs)
            .ok_or_else(|| Error::InconsistentTableau(format!("free row {k} has no partner")))?;
        partners.push(string_from_bits(&sol.particular, qs));
    }
    Ok(partners)
}

/// Images of `Z_w` and `X_w` for each wire under a Clifford unitary.
struct Frame {
    wires: Vec<String>,
    z: Vec<SignedPauliString>,
    x: Vec<SignedPauliString>,
    gates: Vec<Gate>,
}

impl Frame {
    fn apply(&mut self, g: Gate) -> Result<()> {
        for s in self.z.iter_mut().chain(self.x.iter_mut()) {
            *s = conjugate_by_gate(&g, s)?;
        }
        self.gates.push(g);
        Ok(())
    }

    fn letter(s: &SignedPauliString, q: &str) -> Pauli {
        s.get(q)
    }

    /// Reduce every image to the identity frame one wire at a time.
    fn reduce(&mut self) -> Result<()> {
        let n = self.wires.len();
        for j in 0..n {
            let wj = self.wires[j].clone();
            let rest: Vec<String> = self.wires[j + 1..].to_vec();
            // Make the X image act as X on wire j only.
            let x = &self.x[j];
            if [&wj].into_iter().chain(&rest).all(|q| matches!(Self::letter(x, q), Pauli::I | Pauli::Z)) {
                let q = [&wj]
                    .into_iter()
                    .chain(&rest)
                    .find(|q| Self::letter(x, q) == Pauli::Z)
                    .ok_or_else(|| Error::InconsistentTableau("X image is the identity".into()))?
                    .clone();
                self.apply(Gate::H(q))?;
            }
            if !matches!(Self::letter(&self.x[j], &wj), Pauli::X | Pauli::Y) {
                let m = rest
                    .iter()
                    .find(|q| matches!(Self::letter(&self.x[j], q), Pauli::X | Pauli::Y))
                    .expect("some X or Y letter")
                    .clone();
                self.apply(Gate::CX(wj.clone(), m.clone()))?;
                self.apply(Gate::CX(m.clone(), wj.clone()))?;
                self.apply(Gate::CX(wj.clone(), m))?;
            }
            if Self::letter(&self.x[j], &wj) == Pauli::Y {
                self.apply(Gate::S(wj.clone()))?;
            }
            for m in &rest {
                match Self::letter(&self.x[j], m) {
                    Pauli::I => {}
                    Pauli::X => self.apply(Gate::CX(wj.clone(), m.clone()))?,
                    Pauli::Y => {
                        self.apply(Gate::S(m.clone()))?;
                        self.apply(Gate::CX(wj.clone(), m.clone()))?;
                    }
                    Pauli::Z => self.apply(Gate::CZ(wj.clone(), m.clone()))?,
                }
            }
            // Make the Z image act on wire j only.
            for m in &rest {
                match Self::letter(&self.z[j], m) {
                    Pauli::I => continue,
                    Pauli::X => self.apply(Gate::H(m.clone()))?,
                    Pauli::Y => {
                        self.apply(Gate::Sdg(m.clone()))?;
                        self.apply(Gate::H(m.clone()))?;
                    }
                    Pauli::Z => {}
                }
                self.apply(Gate::CX(m.clone(), wj.clone()))?;
            }
            if Self::letter(&self.z[j], &wj) == Pauli::Y {
                self.apply(Gate::H(wj.clone()))?;
                self.apply(Gate::S(wj.clone()))?;
                self.apply(Gate::H(wj.clone()))?;
            }
            if self.x[j].is_negative() == Some(true) {
                self.apply(Gate::Z(wj.clone()))?;
            }
            if self.z[j].is_negative() == Some(true) {
                self.apply(Gate::X(wj.clone()))?;
            }
            let want_x = SignedPauliString::single(wj.clone(), Pauli::X);
            let want_z = SignedPauliString::single(wj.clone(), Pauli::Z);
            if self.x[j] != want_x || self.z[j] != want_z {
                return Err(Error::InconsistentTableau(format!("could not reduce wire `{wj}`")));
            }
        }
        Ok(())
    }
}

/// A circuit preparing the tableau's isometry: `INIT0` on ancilla wires
/// followed by Clifford gates.
pub fn tableau_circuit(t: &IsometryTableau) -> Result<Circuit> {
    t.validate()?;
    let (inputs, ancillas) = assign_wires(t);
    let partners = complete_free_rows(t)?;
    let mut frame = Frame { wires: t.outputs.clone(), z: Vec::new(), x: Vec::new(), gates: Vec::new() };
    for w in &t.outputs {
        if let Some(k) = inputs.iter().position(|(_, wire)| wire == w) {
            frame.z.push(t.inputs[k].z.clone());
            frame.x.push(t.inputs[k].x.clone());
        } else {
            let a = ancillas.iter().position(|q| q == w).expect("ancilla wire");
            frame.z.push(t.free[a].clone());
            frame.x.push(partners[a].clone());
        }
    }
    frame.reduce()?;
    let mut c = Circuit::new(t.outputs.clone(), inputs);
    for a in ancillas {
        c.push(Gate::Init0(a));
    }
    for g in frame.gates.iter().rev() {
        c.push(g.dagger().expect("Clifford gates have daggers"));
    }
    Ok(c)
}

/// Basis change, CX ladder and a single `RZ` for `exp(i angle/2 P)`.
pub fn lower_rotation(r: &Rotation) -> Vec<Gate> {
    let (s, angle) = r.canonical();
    let letters: Vec<(String, Pauli)> = s.letters().map(|(q, p)| (q.to_string(), p)).collect();
    if letters.is_empty() || angle.is_zero() {
        return Vec::new();
    }
    let mut pre = Vec::new();
    for (q, p) in &letters {
        match p {
            Pauli::X => pre.push(Gate::H(q.clone())),
            Pauli::Y => {
                pre.push(Gate::Sdg(q.clone()));
                pre.push(Gate::H(q.clone()));
            }
            _ => {}
        }
    }
    for w in letters.windows(2) {
        pre.push(Gate::CX(w[0].0.clone(), w[1].0.clone()));
    }
    let last = letters.last().unwrap().0.clone();
    let mut out = pre.clone();
    out.push(Gate::RZ(last, -angle));
    out.extend(pre.iter().rev().map(|g| g.dagger().unwrap()));
    out
}

/// Replace every `EXP` gate by its lowering.
pub fn lower_exp(c: &Circuit) -> Circuit {
    let mut out = Circuit::new(c.wires.clone(), c.inputs.clone());
    for g in &c.gates {
        match g {
            Gate::Exp(r) => out.gates.extend(lower_rotation(r)),
            g => out.push(g.clone()),
        }
    }
    out
}

/// Tableau circuit followed by one rotation per node and the trailing
/// rotations, as `EXP` gates unless `lower` is set.
pub fn synthesize(d: &Pddag, lower: bool) -> Result<Circuit> {
    let mut c = tableau_circuit(&d.tableau)?;
    for r in d.nodes.iter().map(|n| &n.rotation).chain(&d.trailing) {
        if !r.is_identity() {
            c.push(Gate::Exp(r.clone()));
        }
    }
    Ok(if lower { lower_exp(&c) } else { c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::pddag::{InputRows, Node};

    fn p(s: &str) -> SignedPauliString {
        s.parse().unwrap()
    }

    #[test]
    fn identity_tableau_gives_empty_circuit() {
        let t = IsometryTableau::identity(&["a".into(), "b".into()]);
        let c = synthesize(&Pddag::new(t, vec![], vec![]), true).unwrap();
        assert!(c.gates.is_empty());
    }

    #[test]
    fn single_z_node_is_one_rz() {
        let t = IsometryTableau::identity(&["1".into()]);
        let r = Rotation::new(p("Z(1)"), Angle::new(1, 3).unwrap()).unwrap();
        let c = synthesize(&Pddag::new(t, vec![Node::new(r)], vec![]), true).unwrap();
        assert_eq!(c.gates, vec![Gate::RZ("1".into(), Angle::new(-1, 3).unwrap())]);
    }

    #[test]
    fn partners_complete_the_frame() {
        let t = IsometryTableau {
            outputs: vec!["1".into(), "2".into()],
            inputs: vec![InputRows { input: "i".into(), z: p("X(2)"), x: p("-Y(1)Z(2)") }],
            free: vec![p("Z(1)X(2)")],
        };
        let d = complete_free_rows(&t).unwrap();
        assert!(!d[0].commutes(&t.free[0]));
        assert!(d[0].commutes(&t.inputs[0].z) && d[0].commutes(&t.inputs[0].x));
        let c = tableau_circuit(&t).unwrap();
        assert_eq!(c.gates[0], Gate::Init0("2".into()));
        assert_eq!(c.inputs, vec![("i".to_string(), "1".to_string())]);
    }
}
