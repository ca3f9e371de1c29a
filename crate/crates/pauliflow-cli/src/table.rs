//! Plain-text tables for `--format table`.

use pauliflow::flow::{FocussedSet, PauliFlowData, Violation};
use pauliflow::{Circuit, MeasurementPattern, Pddag, VertexSet};

use crate::doc::GateDoc;

/// Left-aligned columns separated by two spaces, with a dashed rule under
/// the header.
pub fn render(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(headers.to_vec());
    out += &line(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect());
    for r in rows {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}

fn set(s: &VertexSet) -> String {
    if s.is_empty() {
        "-".into()
    } else {
        s.iter().cloned().collect::<Vec<_>>().join(",")
    }
}

pub fn flow(pattern: &MeasurementPattern, f: &PauliFlowData) -> String {
    let g = &pattern.graph;
    let lin = f.order.linearize(g.vertices());
    let rows: Vec<Vec<String>> = lin
        .iter()
        .map(|v| {
            let label = g.label(v).map_or("out".to_string(), |l| l.to_string());
            let (p, odd) = match f.p.get(v) {
                Some(p) => (set(p), set(&g.odd_neighbourhood(p).unwrap_or_default())),
                None => ("".into(), "".into()),
            };
            let later: VertexSet = g.vertices().iter().filter(|w| f.precedes(v, w)).cloned().collect();
            vec![v.clone(), label, p, odd, set(&later)]
        })
        .collect();
    render(&["vertex", "label", "p", "odd(p)", "precedes"], &rows)
}

pub fn violations(vs: &[Violation]) -> String {
    if vs.is_empty() {
        return "valid\n".into();
    }
    let rows: Vec<Vec<String>> = vs.iter().map(|v| vec![v.vertex.clone(), v.condition.to_string()]).collect();
    render(&["vertex", "condition"], &rows)
}

pub fn fsets(pattern: &MeasurementPattern, gens: &[FocussedSet]) -> String {
    let rows: Vec<Vec<String>> = gens
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let s = pauliflow::extract::focussed_string(pattern, f).map_or_else(|e| e.to_string(), |s| s.to_string());
            vec![k.to_string(), set(&f.members), s]
        })
        .collect();
    render(&["#", "members", "string"], &rows)
}

pub fn pddag(d: &Pddag) -> String {
    let t = &d.tableau;
    let mut rows = Vec::new();
    for r in &t.inputs {
        rows.push(vec![format!("Z({})", r.input), r.z.to_string()]);
        rows.push(vec![format!("X({})", r.input), r.x.to_string()]);
    }
    for s in &t.free {
        rows.push(vec!["free".into(), s.to_string()]);
    }
    let mut out = render(&["row", "string"], &rows);
    out.push('\n');
    let rows: Vec<Vec<String>> = d
        .nodes
        .iter()
        .enumerate()
        .map(|(k, n)| {
            let after: Vec<String> = d.deps.iter().filter(|(a, _)| *a == k).map(|(_, b)| b.to_string()).collect();
            vec![
                k.to_string(),
                n.origin.clone().unwrap_or_default(),
                n.rotation.string.to_string(),
                n.rotation.angle.to_string(),
                if after.is_empty() { "-".into() } else { after.join(",") },
            ]
        })
        .collect();
    out += &render(&["node", "origin", "string", "angle", "precedes"], &rows);
    if !d.trailing.is_empty() {
        out.push('\n');
        let rows: Vec<Vec<String>> =
            d.trailing.iter().map(|r| vec![r.string.to_string(), r.angle.to_string()]).collect();
        out += &render(&["trailing", "angle"], &rows);
    }
    out
}

pub fn circuit(c: &Circuit) -> String {
    let rows: Vec<Vec<String>> = c
        .gates
        .iter()
        .map(|g| {
            let d = GateDoc::from_gate(g);
            let arg = match (&d.string, g) {
                (Some(s), pauliflow::Gate::Exp(r)) => format!("{s} {}", r.angle),
                (_, pauliflow::Gate::RZ(_, a) | pauliflow::Gate::RX(_, a)) => a.to_string(),
                _ => String::new(),
            };
            vec![d.gate, d.qubits.join(","), arg]
        })
        .collect();
    render(&["gate", "qubits", "argument"], &rows)
}
