//! Exhaustive Pauli flow search on tiny graphs, written directly from the
//! nine flow conditions and independent of the library's checker.

use pauliflow::{Label, LabelledOpenGraph, PauliFlowData};

pub struct Small {
    pub n: usize,
    pub ids: Vec<String>,
    adj: Vec<u32>,
    inputs: u32,
    outputs: u32,
    labels: Vec<Option<Label>>,
}

impl Small {
    pub fn new(g: &LabelledOpenGraph) -> Self {
        let ids: Vec<String> = g.vertices().iter().cloned().collect();
        let pos = |v: &str| ids.iter().position(|w| w == v).unwrap();
        let mut adj = vec![0u32; ids.len()];
        for (a, b) in g.edges() {
            adj[pos(&a)] |= 1 << pos(&b);
            adj[pos(&b)] |= 1 << pos(&a);
        }
        let mask = |s: &pauliflow::VertexSet| s.iter().fold(0u32, |m, v| m | 1 << pos(v));
        Small {
            n: ids.len(),
            adj,
            inputs: mask(g.inputs()),
            outputs: mask(g.outputs()),
            labels: ids.iter().map(|v| g.label(v)).collect(),
            ids,
        }
    }

    fn odd(&self, set: u32) -> u32 {
        (0..self.n).filter(|&w| (self.adj[w] & set).count_ones() % 2 == 1).fold(0, |m, w| m | 1 << w)
    }

    /// Whether `p` corrects `u` under the strict order `before`. The Y
    /// condition binds every vertex not strictly after `u`.
    fn corrects(&self, u: usize, p: u32, before: &dyn Fn(usize, usize) -> bool) -> bool {
        if p & self.inputs != 0 {
            return false;
        }
        let odd = self.odd(p);
        let has = |s: u32, v: usize| s >> v & 1 == 1;
        for v in 0..self.n {
            if v == u {
                continue;
            }
            let l = self.labels[v];
            if has(p, v) && !matches!(l, Some(Label::X | Label::Y)) && !before(u, v) {
                return false;
            }
            if has(odd, v) && !matches!(l, Some(Label::Y | Label::Z)) && !before(u, v) {
                return false;
            }
            if !before(u, v) && l == Some(Label::Y) && has(p, v) != has(odd, v) {
                return false;
            }
        }
        let (x, z) = (has(p, u), has(odd, u));
        match self.labels[u].unwrap() {
            Label::XY => !x && z,
            Label::XZ => x && z,
            Label::YZ => x && !z,
            Label::X => z,
            Label::Z => x,
            Label::Y => x != z,
        }
    }

    /// Whether a given flow satisfies every condition at every measured vertex.
    pub fn accepts(&self, flow: &PauliFlowData) -> bool {
        let before = |a: usize, b: usize| flow.order.precedes(&self.ids[a], &self.ids[b]);
        self.measured().all(|u| {
            flow.p.get(&self.ids[u]).is_some_and(|p| {
                let m = p.iter().fold(0u32, |m, v| m | 1 << self.ids.iter().position(|w| w == v).unwrap());
                self.corrects(u, m, &before)
            })
        })
    }

    fn measured(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.outputs >> v & 1 == 0)
    }

    fn all_correctable(&self, before: &dyn Fn(usize, usize) -> bool) -> bool {
        self.measured().all(|u| (0..1u32 << self.n).any(|p| self.corrects(u, p, before)))
    }

    /// Some total order admits correction sets for every measured vertex.
    /// Any flow's order has a linear extension that is again a flow, since
    /// extending the order only removes obligations.
    pub fn has_flow(&self) -> bool {
        let mut perm: Vec<usize> = (0..self.n).collect();
        permutations(&mut perm, 0, &mut |rank| self.all_correctable(&|a, b| rank[a] < rank[b]))
    }

    /// Cumulative layer sizes of every depth-map order that admits a flow.
    pub fn flow_profiles(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut out = Vec::new();
        let mut d = vec![0usize; n];
        loop {
            if self.all_correctable(&|a, b| d[a] > d[b]) {
                let mut used: Vec<usize> = d.clone();
                used.sort();
                used.dedup();
                let mut prof = vec![0; used.len()];
                for &x in &d {
                    let layer = used.iter().position(|&y| y == x).unwrap();
                    for slot in prof.iter_mut().skip(layer) {
                        *slot += 1;
                    }
                }
                out.push(prof);
            }
            let mut k = 0;
            while k < n && d[k] == n - 1 {
                d[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
            d[k] += 1;
        }
        out.sort();
        out.dedup();
        out
    }
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == v.len() {
        return f(v);
    }
    for i in k..v.len() {
        v.swap(k, i);
        if permutations(v, k + 1, f) {
            v.swap(k, i);
            return true;
        }
        v.swap(k, i);
    }
    false
}

/// A fixed enumeration of labelled open graphs on one to five vertices:
/// every edge set, with outputs, inputs and labels cycled deterministically.
pub fn enumerate_small() -> Vec<LabelledOpenGraph> {
    const LABELS: [Label; 6] = [Label::XY, Label::XZ, Label::YZ, Label::X, Label::Y, Label::Z];
    let mut out = Vec::new();
    for n in 1..=5usize {
        let vs: Vec<String> = (0..n).map(|k| format!("v{k}")).collect();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let variants = match n {
            1..=3 => 6,
            4 => 2,
            _ => 1,
        };
        for mask in 0..1usize << pairs.len() {
            for variant in 0..variants {
                let edges: Vec<(String, String)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &(a, b))| (vs[a].clone(), vs[b].clone()))
                    .collect();
                let k = ((mask + variant) % (n / 2 + 2)).min(n);
                let outputs: Vec<String> = vs[n - k..].to_vec();
                let inputs: Vec<String> = vs[..((mask / 3 + variant) % 3).min(n)].to_vec();
                let labels: Vec<(String, Label)> = (0..n)
                    .filter(|v| !outputs.contains(&vs[*v]))
                    .map(|v| (vs[v].clone(), LABELS[(mask * 5 + v * 3 + variant) % 6]))
                    .collect();
                out.push(LabelledOpenGraph::new(vs.clone(), edges, inputs, outputs, labels).unwrap());
            }
        }
    }
    out
}
