//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any fails.

#[path = "../../pauliflow/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::brute::{enumerate_small, Small};
use common::{absorbed_pddag, gadget_circuit, random_flowful};
use pauliflow::extract::{extract_pddag, extraction_string, focussed_string, prepare_flow};
use pauliflow::flow::{find_pauli_flow, focussed_set_generators, is_focussed_set, span, FocussedSet};
use pauliflow::graph::sym_diff;
use pauliflow::oracle::{circuit_semantics, equal_up_to_phase, equal_up_to_scalar, pattern_semantics, pddag_semantics};
use pauliflow::pddag::Pddag;
use pauliflow::rewrite::{
    eliminate_z, local_complement_pattern, pivot_pattern, relabel_pauli, switch_flow_rewrite, Direction, RewriteReport,
};
use pauliflow::synth::synthesize;
use pauliflow::{Angle, Label, MeasurementPattern, Rotation, SignedPauliString};
use pauliflow_cli::doc::{from_value, parse_value, to_canonical, FlowDoc, PatternBundle, PatternDoc, PddagDoc, ReadOptions};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense comparison tolerance, global phase or scalar factored out.
const TOL: f64 = 1e-9;
/// Largest allowed runtime ratio between successive graph sizes.
const GROWTH_BOUND: f64 = 64.0;
const ROUND_TRIPS: usize = 200;
const REWRITES_PER_KIND: usize = 100;
const MIN_ENUMERATED: usize = 500;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn s(x: &str) -> SignedPauliString {
    x.parse().unwrap()
}

fn neg(flag: bool) -> &'static str {
    if flag {
        "-"
    } else {
        ""
    }
}

fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn bundle(text: &str) -> PatternBundle {
    from_value::<PatternDoc>(parse_value(text).unwrap()).unwrap().to_bundle(ReadOptions::default()).unwrap()
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = pauliflow_cli::run(std::iter::once("pauliflow").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn tmp(name: &str, text: &str) -> String {
    let p = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

/// The worked-example document with the Y vertex `d` measured at `a_d`·π.
fn worked_example_text(a_d: i64) -> String {
    let mut v: serde_json::Value = serde_json::from_str(&fixture_text("worked-example")).unwrap();
    v["angles"]["d"] = serde_json::json!({ "num": a_d, "den": 1 });
    to_canonical(&v)
}

fn extract_via_cli(a_d: i64) -> Result<Pddag, String> {
    let path = tmp(&format!("acceptance-worked-{a_d}.json"), &worked_example_text(a_d));
    let (code, out, err) = cli(&["extract", &path]);
    ensure!(code == 0, "extract exited {code}: {err}");
    from_value::<PddagDoc>(parse_value(&out).unwrap())
        .and_then(|d| d.to_pddag(ReadOptions::default()))
        .map_err(|e| e.to_string())
}

fn rot(d: &Pddag, v: &str) -> Result<Rotation, String> {
    d.find_origin(v).map(|k| d.nodes[k].rotation.clone()).ok_or_else(|| format!("no node for {v}"))
}

fn printed_pddag(a_d: i64) -> Outcome {
    let d = extract_via_cli(a_d)?;
    let ad = a_d == 1;
    let want = [
        ("i", "X(o2)".to_string()),
        ("a", format!("{}Z(o1)Y(o2)", neg(ad))),
        ("b", format!("{}Y(o1)Z(o2)", neg(!ad))),
        ("c", "X(o1)".to_string()),
    ];
    ensure!(d.nodes.len() == 4, "{} nodes", d.nodes.len());
    let pat = bundle(&worked_example_text(a_d)).pattern;
    for (v, string) in &want {
        let r = rot(&d, v)?;
        ensure!(r.string == s(string), "node {v}: {} != {string}", r.string);
        ensure!(Some(r.angle) == pat.angle(v), "node {v} angle {}", r.angle);
    }
    let t = &d.tableau;
    ensure!(t.inputs.len() == 1, "{} input rows", t.inputs.len());
    ensure!(t.inputs[0].x == s(&format!("{}Y(o1)Z(o2)", neg(!ad))), "X row {}", t.inputs[0].x);
    ensure!(t.inputs[0].z == s("X(o2)"), "Z row {}", t.inputs[0].z);
    ensure!(t.free == vec![s("Z(o1)X(o2)")], "free rows {:?}", t.free);
    let deps: BTreeSet<(String, String)> = d.deps_by_origin();
    let want_deps: BTreeSet<(String, String)> =
        [("i", "a"), ("i", "b"), ("a", "c"), ("b", "c")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    ensure!(deps == want_deps, "deps {deps:?}");
    Ok(format!("a_d={a_d}"))
}

fn criterion_1() -> Outcome {
    Ok(format!("{}, {}; 4 nodes, tableau and 4 edges exact", printed_pddag(0)?, printed_pddag(1)?))
}

fn criterion_2() -> Outcome {
    let pddag_path = tmp("acceptance-worked.pddag.json", &cli(&["extract", &tmp("acceptance-w0.json", &worked_example_text(0))]).1);
    let (code, circuit_text, err) = cli(&["synth", &pddag_path]);
    ensure!(code == 0, "synth exited {code}: {err}");
    let circuit = from_value::<pauliflow_cli::doc::CircuitDoc>(parse_value(&circuit_text).unwrap())
        .and_then(|c| c.to_circuit(ReadOptions::default()))
        .map_err(|e| e.to_string())?;
    let pat = bundle(&worked_example_text(0)).pattern;
    let angles: Vec<Angle> = ["i", "a", "b", "c"].iter().map(|v| pat.angle(v).unwrap()).collect();
    ensure!(
        angles == [Angle::new(1, 4).unwrap(), Angle::new(1, 3).unwrap(), Angle::new(1, 5).unwrap(), Angle::new(1, 7).unwrap()],
        "fixture angles {angles:?}"
    );
    let m = pattern_semantics(&pat).map_err(|e| e.to_string())?;
    let c = circuit_semantics(&circuit).map_err(|e| e.to_string())?;
    ensure!(equal_up_to_scalar(&m, &c, TOL).map_err(|e| e.to_string())?, "synthesized circuit differs");
    Ok(format!("{} gates, equal at tol {TOL:e}", circuit.gates.len()))
}

fn checked(before: &MeasurementPattern, rep: RewriteReport) -> Result<RewriteReport, String> {
    if let Some(m) = rep.mismatch() {
        return Err(format!("paths differ: {m}"));
    }
    let m0 = pattern_semantics(before).map_err(|e| e.to_string())?;
    let m1 = pattern_semantics(&rep.pattern).map_err(|e| e.to_string())?;
    let m2 = pddag_semantics(&rep.via_simulation).map_err(|e| e.to_string())?;
    ensure!(equal_up_to_scalar(&m0, &m1, TOL).unwrap_or(false), "pattern semantics changed");
    ensure!(equal_up_to_scalar(&m0, &m2, TOL).unwrap_or(false), "simulated Pddag semantics changed");
    Ok(rep)
}

fn expect_rot(d: &Pddag, v: &str, string: &str, angle: Angle) -> Result<(), String> {
    let got = rot(d, v)?;
    let want = Rotation::new(s(string), angle).unwrap();
    ensure!(got == want, "node {v}: ({}, {}) != ({string}, {angle})", got.string, got.angle);
    Ok(())
}

fn rewrite_examples(a_d: i64) -> Result<(), String> {
    let base = bundle(&worked_example_text(a_d));
    let (flow, fsets) = (base.flow.clone(), base.fsets.clone());
    let (flow, fsets) = (flow.as_ref(), fsets.as_deref());
    let ad = a_d == 1;
    let q = Angle::half_pi();
    let angle = |v: &str| base.pattern.angle(v).unwrap();
    let run = |r: Result<RewriteReport, pauliflow::Error>| r.map_err(|e| e.to_string());

    let pat = base.pattern.with_angle("c", q).unwrap();
    let rep = checked(&pat, run(relabel_pauli(&pat, flow, fsets, "c"))?).map_err(|e| format!("relabel: {e}"))?;
    let d = &rep.via_simulation;
    ensure!(rep.pattern.graph.label("c") == Some(Label::Y), "relabel: c not Y");
    expect_rot(d, "i", "X(o2)", angle("i"))?;
    expect_rot(d, "a", &format!("{}Y(o1)Y(o2)", neg(ad)), angle("a"))?;
    expect_rot(d, "b", &format!("{}Z(o1)Z(o2)", neg(ad)), angle("b"))?;
    ensure!(d.tableau.inputs[0].x == s(&format!("{}Z(o1)Z(o2)", neg(ad))), "relabel: X row");
    ensure!(d.tableau.free == vec![s("Y(o1)X(o2)")], "relabel: free row");

    let pat = base.pattern.with_angle("a", Angle::pi()).unwrap();
    let rep = checked(&pat, run(eliminate_z(&pat, flow, fsets, "a"))?).map_err(|e| format!("zelim: {e}"))?;
    let d = &rep.via_simulation;
    expect_rot(d, "i", "X(o2)", angle("i"))?;
    expect_rot(d, "b", &format!("{}Y(o1)Z(o2)", neg(ad)), angle("b") + Angle::pi())?;
    expect_rot(d, "c", "X(o1)", angle("c") + Angle::pi())?;
    ensure!(d.tableau.inputs[0].x == s(&format!("{}Y(o1)Z(o2)", neg(ad))), "zelim: X row");
    ensure!(d.tableau.inputs[0].z == s("X(o2)") && d.tableau.free == vec![s("Z(o1)X(o2)")], "zelim: rows");

    let pat = &base.pattern;
    let rep = checked(pat, run(local_complement_pattern(pat, flow, fsets, "d", Direction::Plus))?)
        .map_err(|e| format!("lc: {e}"))?;
    let d = &rep.via_simulation;
    expect_rot(d, "i", &format!("{}Z(o1)X(o2)", neg(ad)), angle("i"))?;
    expect_rot(d, "a", &format!("{}Y(o1)X(o2)", neg(ad)), angle("a"))?;
    expect_rot(d, "b", &format!("{}Z(o1)Z(o2)", neg(!ad)), angle("b") + q)?;
    expect_rot(d, "c", "X(o1)", angle("c") + q)?;
    ensure!(d.trailing == vec![Rotation::new(s("Z(o2)"), q).unwrap()], "lc: trailing");
    ensure!(d.tableau.inputs[0].x == s(&format!("{}Z(o1)Z(o2)", neg(!ad))), "lc: X row");
    ensure!(d.tableau.inputs[0].z == s(&format!("{}Z(o1)X(o2)", neg(ad))), "lc: Z row");
    ensure!(d.tableau.free == vec![s("-Y(o1)Y(o2)")], "lc: free row");

    let f = FocussedSet::new(["c", "o2"].iter().map(|v| v.to_string()).collect());
    let rep = checked(pat, run(switch_flow_rewrite(pat, flow, fsets, "b", &f))?).map_err(|e| format!("switch b: {e}"))?;
    let d = &rep.via_simulation;
    expect_rot(d, "b", &format!("{}X(o1)Y(o2)", neg(ad)), angle("b"))?;
    ensure!(d.tableau.inputs[0].x == s(&format!("{}X(o1)Y(o2)", neg(ad))), "switch b: X row");
    let rep = checked(pat, run(switch_flow_rewrite(pat, flow, fsets, "d", &f))?).map_err(|e| format!("switch d: {e}"))?;
    let before = extract_pddag(pat, flow, fsets).map_err(|e| e.to_string())?;
    ensure!(before == rep.via_simulation, "switch d: Pddag changed");
    Ok(())
}

fn criterion_3() -> Outcome {
    rewrite_examples(0)?;
    rewrite_examples(1)?;
    Ok("relabel c, eliminate a, lc d, switch b/d at a_d=0,1".into())
}

fn criterion_4() -> Outcome {
    let path = format!("{}/fixtures/measured-v0.json", env!("CARGO_MANIFEST_DIR"));
    let (code, out, err) = cli(&["flow", "find", &path]);
    ensure!(code == 0, "flow find exited {code}: {err}");
    let b = bundle(&fixture_text("measured-v0"));
    let f = from_value::<FlowDoc>(parse_value(&out).unwrap())
        .and_then(|d| d.to_flow(&b.pattern.graph, ""))
        .map_err(|e| e.to_string())?;
    ensure!(pauliflow::flow::verify_flow(&b.pattern.graph, &f).is_empty(), "found flow is invalid");
    let depth = f.order.depths().ok_or("no depths")?["b"];
    ensure!(depth == 0, "b at depth {depth}");
    Ok("b at depth 0".into())
}

fn criterion_5() -> Outcome {
    let a: [Angle; 8] = std::array::from_fn(|k| Angle::new(k as i64 + 1, 9).unwrap());
    let c = gadget_circuit(&a);
    let d = absorbed_pddag(&c);
    let want = [
        ("Z(1)", -a[0]),
        ("Z(2)", -a[1]),
        ("X(1)", a[2]),
        ("Y(1)X(2)", -a[3]),
        ("X(2)", a[4]),
        ("Y(1)X(2)", -a[5]),
        ("Z(1)", -a[6]),
        ("Y(2)", -a[7]),
    ];
    let got: Vec<_> = d.nodes.iter().map(|n| n.rotation.canonical()).collect();
    let want: Vec<_> = want.iter().map(|(x, t)| Rotation::new(s(x), *t).unwrap().canonical()).collect();
    ensure!(got == want, "nodes {got:?}");
    let mut deps = d.deps.clone();
    deps.sort();
    ensure!(deps == [(0, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 5), (3, 6), (3, 7), (4, 7), (5, 6), (5, 7)], "deps {deps:?}");
    let merged = d.merge_nodes(3, 5).map_err(|e| format!("merge a3/a5: {e}"))?;
    let same = equal_up_to_phase(&pddag_semantics(&merged).unwrap(), &pddag_semantics(&d).unwrap(), TOL).unwrap();
    ensure!(same, "merge changed the map");
    ensure!(d.precedes(1, 4) && d.precedes(4, 7), "a1 -> a4 -> a7 chain missing");
    let from_circuit = equal_up_to_phase(&circuit_semantics(&c).unwrap(), &pddag_semantics(&d).unwrap(), TOL).unwrap();
    ensure!(from_circuit, "Pddag differs from the circuit");
    Ok("8 nodes, 11 edges, merge legal, chain present".into())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut pauli_labelled = 0;
    for k in 0..ROUND_TRIPS {
        let pat = random_flowful(&mut rng, 2 + k % 7);
        pauli_labelled += pat.graph.labels().values().filter(|l| l.is_pauli()).count();
        let d = extract_pddag(&pat, None, None).map_err(|e| format!("pattern {k}: {e}"))?;
        let c = synthesize(&d, true).map_err(|e| format!("pattern {k}: {e}"))?;
        let m = pattern_semantics(&pat).unwrap();
        ensure!(equal_up_to_scalar(&m, &circuit_semantics(&c).unwrap(), TOL).unwrap(), "pattern {k} differs: {pat:?}");
    }
    ensure!(pauli_labelled > 0, "no Pauli labels sampled");
    Ok(format!("{ROUND_TRIPS} patterns, 0 failures"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut checks = 0usize;
    for k in 0..120 {
        let pat = random_flowful(&mut rng, 2 + k % 6);
        let g = &pat.graph;
        let f = prepare_flow(&pat, None).map_err(|e| e.to_string())?;
        for flow in [find_pauli_flow(g).unwrap(), f.clone()] {
            for (v, p) in &flow.p {
                let odd = g.odd_neighbourhood(p).unwrap();
                ensure!(p.intersection(&odd).count() % 2 == 0, "odd imaginary part at {v}: {g:?}");
                checks += 1;
            }
        }
        let group = span(&focussed_set_generators(g).unwrap());
        for a in &group {
            let sa = focussed_string(&pat, a).unwrap();
            for b in &group {
                let ab = FocussedSet::new(sym_diff(&a.members, &b.members));
                let prod = sa.multiply(&focussed_string(&pat, b).unwrap());
                ensure!(prod == focussed_string(&pat, &ab).unwrap(), "string product fails: {g:?}");
                checks += 1;
            }
        }
        let uses = |x: &str, y: &str| {
            let p = &f.p[x];
            p.contains(y) || g.odd_neighbourhood(p).unwrap().contains(y)
        };
        let measured: Vec<&String> = g.measured().collect();
        for u in &measured {
            let su = extraction_string(&pat, &f, u).unwrap().string;
            for v in &measured {
                if u != v {
                    let sv = extraction_string(&pat, &f, v).unwrap().string;
                    ensure!(su.commutes(&sv) == (uses(u, v) == uses(v, u)), "sign law fails at {u},{v}: {g:?}");
                    checks += 1;
                }
            }
        }
        let cands: Vec<String> = g.non_inputs().cloned().collect();
        let count = (0..1u32 << cands.len())
            .filter(|m| {
                let set = cands.iter().enumerate().filter(|(j, _)| m >> j & 1 == 1).map(|(_, v)| v.clone()).collect();
                is_focussed_set(g, &set).unwrap()
            })
            .count();
        let excess = g.outputs().len() - g.inputs().len();
        ensure!(count == 1 << excess, "{count} focussed sets, want 2^{excess}: {g:?}");
        checks += 1;
    }
    Ok(format!("{checks} checks over 4 laws, 0 counterexamples"))
}

fn criterion_8() -> Outcome {
    let graphs = enumerate_small();
    ensure!(graphs.len() >= MIN_ENUMERATED, "only {} graphs", graphs.len());
    let mut with_flow = 0;
    for g in &graphs {
        let small = Small::new(g);
        let found = find_pauli_flow(g);
        ensure!(found.is_some() == small.has_flow(), "decision differs on {g:?}");
        if let Some(f) = found {
            ensure!(small.accepts(&f), "brute force rejects the found flow on {g:?}");
            with_flow += 1;
        }
    }
    Ok(format!("{} graphs, {with_flow} with flow, all decisions agree", graphs.len()))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut done = [0usize; 4];
    let mut trailing = 0;
    let mut tries = 0;
    while done.iter().any(|&n| n < REWRITES_PER_KIND) {
        tries += 1;
        ensure!(tries < 100_000, "could not sample enough rewrites: {done:?}");
        let n = rng.gen_range(3..=8);
        let pat = random_flowful(&mut rng, n);
        let g = pat.graph.clone();
        let kind = rng.gen_range(0..4);
        if done[kind] >= REWRITES_PER_KIND {
            continue;
        }
        let verts = |f: &dyn Fn(Label) -> bool| -> Vec<String> {
            g.labels().iter().filter(|(_, l)| f(**l)).map(|(v, _)| v.clone()).collect()
        };
        let (before, rep) = match kind {
            0 => {
                let Some(u) = verts(&|l| l.is_planar()).choose(&mut rng).cloned() else { continue };
                let p = pat.with_angle(&u, Angle::quarter_turns(rng.gen_range(0..4))).unwrap();
                let r = relabel_pauli(&p, None, None, &u);
                (p, r)
            }
            1 => {
                let Some(u) = verts(&|l| matches!(l, Label::XZ | Label::YZ | Label::Z)).choose(&mut rng).cloned() else {
                    continue;
                };
                let p = pat.with_angle(&u, if rng.gen_bool(0.5) { Angle::pi() } else { Angle::zero() }).unwrap();
                let r = eliminate_z(&p, None, None, &u);
                (p, r)
            }
            2 => {
                let cands: Vec<String> = g.non_inputs().cloned().collect();
                let Some(u) = cands.choose(&mut rng) else { continue };
                let dir = if rng.gen_bool(0.5) { Direction::Plus } else { Direction::Minus };
                let r = local_complement_pattern(&pat, None, None, u, dir);
                (pat.clone(), r)
            }
            _ => {
                let edges: Vec<(String, String)> =
                    g.edges().into_iter().filter(|(a, b)| !g.is_input(a) && !g.is_input(b)).collect();
                let Some((u, v)) = edges.choose(&mut rng) else { continue };
                let r = pivot_pattern(&pat, None, None, u, v);
                (pat.clone(), r)
            }
        };
        let rep = rep.map_err(|e| format!("rewrite kind {kind} failed: {e}"))?;
        trailing += usize::from(!rep.pattern.trailing.is_empty());
        checked(&before, rep).map_err(|e| format!("rewrite kind {kind}: {e} on {before:?}"))?;
        done[kind] += 1;
    }
    Ok(format!("{REWRITES_PER_KIND} each of relabel/zelim/lc/pivot, {trailing} with trailing gates"))
}

fn time_find(n: usize) -> Result<Duration, String> {
    let graphs: Vec<_> = (0..6u64)
        .map(|seed| pauliflow_cli::gen::generate(n, seed).map(|p| p.graph))
        .collect::<Result<_, _>>()?;
    let mut best = Duration::MAX;
    for _ in 0..3 {
        let start = Instant::now();
        for g in &graphs {
            ensure!(find_pauli_flow(g).is_some(), "generated graph on {n} vertices has no flow");
        }
        best = best.min(start.elapsed());
    }
    Ok(best)
}

fn criterion_10() -> Outcome {
    let sizes = [20, 40, 80];
    let times: Vec<Duration> = sizes.iter().map(|&n| time_find(n)).collect::<Result<_, _>>()?;
    let floor = Duration::from_micros(50);
    let ratios: Vec<f64> =
        times.windows(2).map(|w| w[1].as_secs_f64() / w[0].max(floor).as_secs_f64()).collect();
    let detail = format!("times {times:?}, ratios {ratios:.1?}, bound {GROWTH_BOUND}");
    ensure!(ratios.iter().all(|&r| r < GROWTH_BOUND), "{detail}");
    Ok(detail)
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("worked-example Pddag structure", criterion_1),
        ("worked-example synthesis semantics", criterion_2),
        ("rewrite examples", criterion_3),
        ("measured vertex at depth 0", criterion_4),
        ("rotation dependency diagram", criterion_5),
        ("random extract/synth round trips", criterion_6),
        ("flow laws", criterion_7),
        ("exhaustive flow identification", criterion_8),
        ("random rewrite semantics", criterion_9),
        ("flow-finding growth", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2}s)", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.2}s)", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
