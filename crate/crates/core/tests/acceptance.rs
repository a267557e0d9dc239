//! Acceptance criteria, one test each. Every test prints a single
//! `[PASS]`/`[FAIL]` line (visible with `--nocapture`) before asserting.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use bigramsey::envelope::{build_envelope, verify_envelope};
use bigramsey::experiments::{
    copies_in_g, edge_triple_count, milliken_exhaustive_reversed, milliken_search, run_pipeline, Coloring,
    MillikenOutcome, PipelineConfig,
};
use bigramsey::hypergraph::{g_edge, parity_facts, phi, phi_image, Hypergraph3};
use bigramsey::subtrees::{
    complete_to_strong, enumerate_strong_subtrees, is_strong_subtree, NodeSet, VectorTruncation,
};
use bigramsey::trees::{enumerate_truncation, BitVector, LtMatrix, TreeNode, TreeTruncation};
use bigramsey::valuation::{
    brute_force_isomorphisms, build_valuation, is_structural_isomorphism, structural_isomorphism, StructuralIso,
    ValuationTree,
};
use common::*;
use rand::Rng;

fn report(id: u32, name: &str, ok: bool, detail: &str) {
    println!("[{}] criterion {id:>2}: {name} ({detail})", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
}

fn within(start: Instant, limit: Duration) -> bool {
    start.elapsed() < limit
}

/// The 200 seeded hypergraphs shared by the coding and parity criteria.
fn coding_corpus() -> Vec<Hypergraph3> {
    let mut r = rng(0xC0DE);
    (0..200)
        .map(|_| {
            let n = r.gen_range(1..=8);
            let p = r.gen_range(0.0..=1.0);
            random_hypergraph(&mut r, n, p)
        })
        .collect()
}

#[test]
fn criterion_01_tree_shape() {
    let start = Instant::now();
    let t2: TreeTruncation<LtMatrix> = enumerate_truncation(4, 1 << 10).unwrap();
    let counts = t2.level_counts();
    let oracle: Vec<usize> = (0..4).map(|n| 1usize << (n * (n.max(1) - 1) / 2)).collect();
    let direct: Vec<usize> = (0..4)
        .map(|n| plain_matrices_below(4).iter().filter(|m| m.order() == n).count())
        .collect();
    let ok = counts == [1, 1, 2, 8] && counts == oracle && counts == direct && within(start, Duration::from_secs(1));
    report(1, "tree shape", ok, &format!("level sizes {counts:?} in {:?}", start.elapsed()));
}

#[test]
fn criterion_02_coding_fidelity() {
    let start = Instant::now();
    let h = Hypergraph3::with_edges(4, [[0, 1, 2], [0, 1, 3], [1, 2, 3]]).unwrap();
    let displayed = [
        "1\n0\n",
        "3\n0 0 0\n0 0 0\n0 0 0\n",
        "5\n0 0 0 0 0\n0 0 0 0 0\n0 0 0 0 0\n1 1 0 0 0\n0 0 0 0 0\n",
        "7\n0 0 0 0 0 0 0\n0 0 0 0 0 0 0\n0 0 0 0 0 0 0\n1 1 0 0 0 0 0\n0 0 0 0 0 0 0\n0 0 1 1 0 0 0\n0 0 0 0 0 0 0\n",
    ];
    let mut ok = true;
    for (i, text) in displayed.iter().enumerate() {
        let code = phi(i, &h);
        ok &= code == LtMatrix::parse_text(text).unwrap();
        ok &= code.to_text() == *text;
    }
    let edges: Vec<[usize; 3]> = phi_image(&h).to_hypergraph().edges().copied().collect();
    ok &= edges == [[0, 1, 2], [0, 1, 3], [1, 2, 3]];
    ok &= within(start, Duration::from_secs(1));
    report(2, "coding fidelity", ok, &format!("induced edges {edges:?}"));
}

#[test]
fn criterion_03_embedding_property() {
    let start = Instant::now();
    let mut counterexamples = 0;
    let mut triples = 0;
    for h in coding_corpus() {
        let codes: Vec<LtMatrix> = (0..h.n()).map(|i| phi(i, &h)).collect();
        let plain: Vec<PlainMatrix> = (0..h.n()).map(|i| plain_code(i, &h)).collect();
        for (c, p) in codes.iter().zip(&plain) {
            if *c != p.to_lt() {
                counterexamples += 1;
            }
        }
        let image = phi_image(&h).to_hypergraph();
        for i in 0..h.n() {
            for j in i + 1..h.n() {
                for k in j + 1..h.n() {
                    triples += 1;
                    let want = h.edges().any(|e| *e == [i, j, k]);
                    let got = g_edge(&codes[i], &codes[j], &codes[k]);
                    let plain_got = plain_edge(&plain[i], &plain[j], &plain[k]);
                    let image_got = image.edges().any(|e| *e == [i, j, k]);
                    if got != want || plain_got != want || image_got != want {
                        counterexamples += 1;
                    }
                }
            }
        }
    }
    let ok = counterexamples == 0 && triples > 0 && within(start, Duration::from_secs(30));
    report(
        3,
        "embedding property",
        ok,
        &format!("{counterexamples} counterexamples over {triples} triples in {:?}", start.elapsed()),
    );
}

#[test]
fn criterion_04_parity_suite() {
    let mut counterexamples = 0;
    let mut meets = 0;
    let mut row_pairs = 0;
    let mut library_failures = 0;
    for h in coding_corpus() {
        let codes: Vec<LtMatrix> = (0..h.n()).map(|i| phi(i, &h)).collect();
        if !parity_facts(&codes).passed() {
            library_failures += 1;
        }
        for a in &codes {
            for b in &codes {
                meets += 1;
                if plain_meet_order(a, b).is_multiple_of(2) {
                    counterexamples += 1;
                }
            }
        }
        let rows: BTreeSet<Vec<bool>> = codes.iter().flat_map(plain_rows).collect();
        let rows: Vec<Vec<bool>> = rows.into_iter().collect();
        for (i, u) in rows.iter().enumerate() {
            for v in &rows[i + 1..] {
                let common = u.iter().zip(v).take_while(|(x, y)| x == y).count();
                // Rows that extend one another meet at the shorter row.
                if common == u.len().min(v.len()) {
                    continue;
                }
                row_pairs += 1;
                if common % 2 == 1 {
                    counterexamples += 1;
                }
            }
        }
    }
    let ok = counterexamples == 0 && library_failures == 0 && row_pairs > 0;
    report(
        4,
        "parity suite",
        ok,
        &format!("{counterexamples} counterexamples, {meets} meets, {row_pairs} branching row pairs"),
    );
}

/// Exhaustive entry-preservation scan over all triples of the domain.
fn triple_scan(f: &StructuralIso) -> bool {
    let dom: Vec<&LtMatrix> = f.map().keys().collect();
    for a in &dom {
        for b in &dom {
            for c in &dom {
                if !(a.order() <= b.order() && b.order() < c.order()) {
                    continue;
                }
                let (fa, fb, fc) = (f.apply(a).unwrap(), f.apply(b).unwrap(), f.apply(c).unwrap());
                if fb.order() >= fc.order() || fa.order() > fb.order() {
                    return false;
                }
                if fc.get(fb.order(), fa.order()) != c.get(b.order(), a.order()) {
                    return false;
                }
            }
        }
    }
    true
}

fn random_valuations() -> Vec<(usize, ValuationTree)> {
    let mut r = rng(0x7A1);
    (0..100)
        .map(|i| {
            let k = 1 + i % 4;
            let s = random_vector_subtree(&mut r, k, 5);
            (k, build_valuation(&s).unwrap())
        })
        .collect()
}

#[test]
fn criterion_05_valuation_node_count() {
    let expected = [0u128, 1, 2, 4, 12];
    let mut bad = 0;
    for (k, val) in random_valuations() {
        let nodes = val.node_set().unwrap();
        let f = structural_isomorphism(&val).unwrap();
        let counted = nodes.len() as u128;
        let ok = counted == expected[k]
            && val.node_count() == Some(expected[k])
            && f.len() as u128 == expected[k]
            && f.image() == nodes
            && triple_scan(&f)
            && is_structural_isomorphism(f.map(), &f.domain(), &nodes);
        if !ok {
            bad += 1;
        }
    }
    report(5, "valuation node count", bad == 0, &format!("{bad} of 100 trees failed"));
}

#[test]
fn criterion_06_isomorphism_uniqueness() {
    let mut trees: Vec<ValuationTree> = random_valuations()
        .into_iter()
        .filter(|(k, _)| *k <= 3)
        .map(|(_, v)| v)
        .collect();
    let t = VectorTruncation::new(4);
    for k in 1..=3 {
        for s in enumerate_strong_subtrees(&t, k, 1 << 16).unwrap() {
            trees.push(build_valuation(&s).unwrap());
        }
    }
    let mut bad = 0;
    for val in &trees {
        let f = structural_isomorphism(val).unwrap();
        let all = brute_force_isomorphisms(&f.domain(), &val.node_set().unwrap(), 1 << 20).unwrap();
        if all.len() != 1 || all[0] != *f.map() {
            bad += 1;
        }
    }
    report(
        6,
        "isomorphism uniqueness",
        bad == 0,
        &format!("{bad} of {} trees with a non-unique or different isomorphism", trees.len()),
    );
}

#[test]
fn criterion_07_envelope_suite() {
    let start = Instant::now();
    let mut r = rng(0xE4E);
    let mut runs = 0;
    let mut failures = Vec::new();
    for _ in 0..20 {
        let p = r.gen_range(0.0..=1.0);
        let h = random_hypergraph(&mut r, 6, p);
        for mask in 1u32..(1 << 6) {
            if mask.count_ones() > 3 {
                continue;
            }
            let vs: Vec<usize> = (0..6).filter(|i| mask >> i & 1 == 1).collect();
            runs += 1;
            let env = build_envelope(&vs, &h).unwrap();
            let rep = verify_envelope(&env, &vs, &h);
            // Containment, checked again from the valuation tree itself.
            let contained = vs.iter().all(|&v| env.valuation.contains(&phi(v, &h)));
            if !rep.passed() || !contained {
                failures.push(format!("{vs:?}: {:?}", rep.failures().map(|c| c.name).collect::<Vec<_>>()));
            }
        }
    }
    let ok = failures.is_empty() && within(start, Duration::from_secs(120));
    report(
        7,
        "envelope suite",
        ok,
        &format!("{} failures over {runs} envelopes in {:?} {failures:?}", failures.len(), start.elapsed()),
    );
}

#[test]
fn criterion_08_copy_count_oracle() {
    let start = Instant::now();
    let plain = plain_matrices_below(4);
    let mut oracle_triples = 0;
    for (i, a) in plain.iter().enumerate() {
        for (j, b) in plain.iter().enumerate().skip(i + 1) {
            for c in &plain[j + 1..] {
                if plain_edge(a, b, c) {
                    oracle_triples += 1;
                }
            }
        }
    }
    let single = copies_in_g(&Hypergraph3::new(1), 4).unwrap().len();
    let triples = edge_triple_count(4).unwrap();
    let edge_copies = copies_in_g(&Hypergraph3::with_edges(3, [[0, 1, 2]]).unwrap(), 4).unwrap().len();
    let ok = single == 12
        && single == plain.len()
        && triples == 21
        && triples == oracle_triples
        && edge_copies == 6 * oracle_triples
        && within(start, Duration::from_secs(10));
    report(
        8,
        "copy-count oracle",
        ok,
        &format!("{single} vertices, {triples} edge triples, oracle {} / {oracle_triples}", plain.len()),
    );
}

fn completion_contract<N: TreeNode>(r: &mut rand_chacha::ChaCha8Rng, height: usize, runs: usize) -> usize {
    let ambient: TreeTruncation<N> = enumerate_truncation(height, 1 << 16).unwrap();
    let mut bad = 0;
    for _ in 0..runs {
        let e: NodeSet<N> = random_meet_closed(r, height, 6);
        let s = complete_to_strong(&e, &ambient).unwrap();
        let nodes: BTreeSet<N> = s.nodes().cloned().collect();
        let ok = is_strong_subtree(&s, &ambient)
            && strong_by_definition(&nodes)
            && e.iter().all(|x| nodes.contains(x))
            && s.levels() == e.level_set();
        if !ok {
            bad += 1;
        }
    }
    bad
}

#[test]
fn criterion_09_completion_contract() {
    let mut r = rng(0x22);
    let bad = completion_contract::<BitVector>(&mut r, 6, 250) + completion_contract::<LtMatrix>(&mut r, 4, 250);
    report(9, "completion contract", bad == 0, &format!("{bad} of 500 completions failed"));
}

#[test]
fn criterion_10_milliken_sanity() {
    let mut notes = Vec::new();
    let mut ok = true;
    let constant = Coloring::constant();
    for height in 1..=4 {
        for m in 1..=height.min(3) {
            for k in 0..=m {
                let t = VectorTruncation::new(height);
                let r = milliken_search(&t, k, m, &constant, 1 << 20).unwrap();
                ok &= r.outcome.witness().is_some();
            }
        }
    }
    notes.push(format!("constant: {}", if ok { "all found" } else { "missing witness" }));

    let parity = Coloring::parse("parity:2", 0).unwrap();
    let chi = |s: &_| parity.color(s);
    let two = VectorTruncation::new(2);
    let r2 = milliken_search(&two, 1, 2, &parity, 1 << 20).unwrap();
    let c2 = milliken_exhaustive_reversed(&two, 1, 2, chi, 1 << 20).unwrap();
    ok &= r2.outcome == MillikenOutcome::Exhausted && c2 == MillikenOutcome::Exhausted;

    let three = VectorTruncation::new(3);
    let r3 = milliken_search(&three, 1, 2, &parity, 1 << 20).unwrap();
    let c3 = milliken_exhaustive_reversed(&three, 1, 2, chi, 1 << 20).unwrap();
    // Height-1 subtrees are single levels and parity colors them by level.
    let same_parity = |levels: &[usize]| levels.iter().all(|l| l % 2 == levels[0] % 2);
    match (r3.outcome.witness(), c3.witness()) {
        (Some(w), Some(v)) => {
            ok &= same_parity(w.levels()) && same_parity(v.levels()) && w.validate(Some(3)).is_ok();
            notes.push(format!("parity height 3: levels {:?}", w.levels()));
        }
        _ => ok = false,
    }
    notes.push(format!("parity height 2: {:?}", r2.outcome));
    report(10, "Milliken search sanity", ok, &notes.join("; "));
}

#[test]
fn criterion_11_pipeline_monotonicity() {
    let vertex = Hypergraph3::new(1);
    let edge = Hypergraph3::with_edges(3, [[0, 1, 2]]).unwrap();
    let mut runs = 0;
    let mut bad = Vec::new();
    for (a, spec) in [(&vertex, "copy=1,target=2,piece=4"), (&edge, "copy=3,target=3,piece=4")] {
        for colors in [2, 3] {
            for rule in ["hash", "parity", "order"] {
                for seed in 0..3 {
                    let cfg = PipelineConfig::for_pattern(a.n())
                        .apply_spec(&format!("{spec},prefix=24,seed={seed}"))
                        .unwrap();
                    let chi = Coloring::parse(&format!("{rule}:{colors}"), seed).unwrap();
                    let r = run_pipeline(a, &chi, cfg).unwrap();
                    runs += 1;
                    let fine = matches!(r.final_color_count(), Some(c) if c <= r.ell) && r.g_is_embedding;
                    if !fine {
                        bad.push(format!("{spec} {rule}:{colors} seed {seed}: {:?} vs {}", r.final_color_count(), r.ell));
                    }
                }
            }
        }
    }
    report(
        11,
        "pipeline monotonicity",
        bad.is_empty(),
        &format!("{} of {runs} runs above the bound {bad:?}", bad.len()),
    );
}
