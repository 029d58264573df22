//! One line per acceptance criterion. Runs without the libtest harness so
//! that the verdicts show up in the output of `cargo test`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use apartness::bisim::{
    apartness_witness, bisimilarity, ioco_compatibility, relation_is_uncertain_bisimulation,
    semantic_oracle_uncertain, uncertain_bisimilarity, OracleMethod,
};
use apartness::fixtures;
use apartness::format::Document;
use apartness::generate::{random_lax_morphism, random_oplax_morphism};
use apartness::learning::{find_lax_morphism_from_tree, ObservationTree};
use apartness::lifting::{in_lifting, in_uncertain_lifting, lifted_pairs, stability_check};
use apartness::morphisms::{check_morphism, kernel, lax_identify, restrict_along, MorphismKind};
use apartness::simulation::{check_simulation, hj_to_openmap, joint_simulator, JointOutcome, SpanStyle};
use apartness::systems::{sa_disjoint_union, Shape};
use apartness::{Machine, PartialMealy, Relation, Successor};
use common::laws;
use common::*;

/// Random machines per corpus.
const CORPUS: usize = 500;
/// Word budget handed to the semantic oracle in the corpus run.
const ORACLE_BUDGET: u64 = apartness::bisim::DEFAULT_ENUMERATION_BUDGET;
/// Wall-clock bound for the oracle comparison.
const ORACLE_TIME_LIMIT: Duration = Duration::from_secs(60);
/// Seeds of the generated corpora.
const MEALY_SEED: u64 = 0x5eed_0001;
const LAX_SEED: u64 = 0x5eed_0002;
const OPLAX_SEED: u64 = 0x5eed_0003;
const SA_SEED: u64 = 0x5eed_0004;
const LAW_SEED: u64 = 0x5eed_0005;
/// The completion search is run on every (relation, pair) triple when there
/// are at most this many, otherwise on `ENUM_SAMPLES` random ones.
const ENUM_EXHAUSTIVE_LIMIT: usize = 2_000_000;
const ENUM_SAMPLES: usize = 20_000;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn mealy(m: &PartialMealy) -> Machine {
    Machine::Mealy(m.clone())
}

fn witness_text(m: &PartialMealy, x: &str, y: &str) -> Option<String> {
    apartness_witness(m, state(m, x), state(m, y)).unwrap().map(|w| w.display(m).to_string())
}

fn criterion_1() -> Outcome {
    let u = union_of_four();
    ensure!(
        witness_text(&u, "p.p0", "r.r0").as_deref() == Some("j a b"),
        "p0/r0 witness {:?}",
        witness_text(&u, "p.p0", "r.r0")
    );
    ensure!(
        witness_text(&u, "p.p0", "s.s0").as_deref() == Some("j a b"),
        "p0/s0 witness {:?}",
        witness_text(&u, "p.p0", "s.s0")
    );
    let ub = uncertain_bisimilarity(&u);
    for (x, y) in [("q.q0", "s.s0"), ("p.p0", "q.q0"), ("q.q0", "r.r0"), ("r.r0", "s.s0")] {
        ensure!(ub.contains(state(&u, x), state(&u, y)), "{x} and {y} should be uncertain bisimilar");
        ensure!(!product_apart(&u, state(&u, x), state(&u, y)), "oracle disagrees on {x}, {y}");
    }
    for (x, y) in [("p.p0", "r.r0"), ("p.p0", "s.s0")] {
        ensure!(!ub.contains(state(&u, x), state(&u, y)), "{x} and {y} should be apart");
    }
    let doc = Document::parse(fixtures::FILES[0].1).unwrap();
    for rel in ["q_in_p", "q_in_r", "s_in_r"] {
        let (src, dst, r) = doc.resolve_relation(rel).unwrap();
        for style in [SpanStyle::HughesJacobs, SpanStyle::OpenMap] {
            ensure!(check_simulation(&r, src, dst, style).unwrap(), "{rel} is not a {style:?} simulation");
        }
    }
    Ok("witnesses j a b for p0/r0 and p0/s0, four compatible pairs, three simulations".into())
}

fn criterion_2() -> Outcome {
    let m = fixtures::tree_counterexample();
    for &(word, p, q) in SEMANTICS_TABLE {
        let w: Vec<String> = word.chars().map(String::from).collect();
        let w: Vec<&str> = w.iter().map(String::as_str).collect();
        let ids = m.word(&w).unwrap();
        for (s, expected) in [("p", p), ("q", q)] {
            let got = m.eval(state(&m, s), &ids).unwrap().map(|o| m.outputs().name(o).to_string());
            ensure!(got.as_deref() == expected, "[[{s}]]({word}) = {got:?}, expected {expected:?}");
            ensure!(
                eval_names(&m, s, &w).as_deref() == expected,
                "table row {word} disagrees with the oracle"
            );
        }
    }
    let (p, q) = (state(&m, "p"), state(&m, "q"));
    ensure!(uncertain_bisimilarity(&m).contains(p, q), "p and q should be uncertain bisimilar");
    ensure!(
        witness_text(&m, "x", "z").as_deref() == Some("i a b"),
        "x/z witness {:?}",
        witness_text(&m, "x", "z")
    );
    let id = lax_identify(&m, p, q).unwrap();
    ensure!(id.is_conflict(), "merging p and q should conflict");
    let lines = id.report_lines(&m);
    let pos = |l: &str| lines.iter().position(|x| x == l);
    let (xy, yz, conflict) = (pos("merge x y"), pos("merge y z"), pos("conflict i a b"));
    ensure!(
        matches!((xy, yz, conflict), (Some(a), Some(b), Some(c)) if a < c && b < c)
            && conflict == Some(lines.len() - 1),
        "forcing chain {lines:?}"
    );
    let JointOutcome::Joint(j) = joint_simulator(&m, p, q).unwrap() else {
        return Err("no joint simulator for p and q".into());
    };
    let (mm, mj) = (mealy(&m), mealy(&j.machine));
    for w in [&j.left, &j.right] {
        for style in [SpanStyle::HughesJacobs, SpanStyle::OpenMap] {
            ensure!(
                check_simulation(&w.relation, &mm, &mj, style).unwrap(),
                "join simulation fails {style:?}"
            );
        }
        ensure!(w.verify(&mm, &mj).unwrap(), "HJ span does not verify");
        ensure!(
            hj_to_openmap(w, &mm, &mj).unwrap().verify(&mm, &mj).unwrap(),
            "open-map span does not verify"
        );
    }
    Ok(format!("16 table entries, chain {}", lines.join(", ")))
}

fn criterion_3() -> Outcome {
    let c = fixtures::lax_chain();
    let describe = |src: &PartialMealy, dst: &PartialMealy, h| -> Vec<String> {
        let r = check_morphism(src, dst, h, MorphismKind::Strict).unwrap();
        r.violations.iter().map(|v| v.describe(src)).collect()
    };
    for (name, src, dst, h) in [("g", &c.tree, &c.middle, &c.g), ("h", &c.middle, &c.black_box, &c.h)] {
        ensure!(check_morphism(src, dst, h, MorphismKind::Lax).unwrap().is_ok(), "{name} is not lax");
        ensure!(is_lax(src, dst, h.mapping()), "oracle says {name} is not lax");
    }
    let g_strict = describe(&c.tree, &c.middle, &c.g);
    ensure!(g_strict == ["q0 j target-only"], "g strict violations {g_strict:?}");
    let h_strict = describe(&c.middle, &c.black_box, &c.h);
    ensure!(h_strict == ["p2 i target-only", "p2 j target-only"], "h strict violations {h_strict:?}");
    let tree = ObservationTree::from_machine(&c.tree, 0).unwrap();
    let found = find_lax_morphism_from_tree(&tree, &c.middle, 0).unwrap();
    ensure!(matches!(&found, Ok(g) if g.mapping() == c.g.mapping()), "reconstructed {found:?}");
    let all = all_lax_maps(&c.tree, &c.middle, 0, 0);
    ensure!(all == [c.g.mapping().to_vec()], "lax maps with q0 -> p0: {all:?}");
    Ok(format!("g strict: {}; h strict: {}; g unique", g_strict.join(", "), h_strict.join(", ")))
}

fn criterion_4() -> Outcome {
    let s = fixtures::suspension_pair();
    let (c, d, h) = (&s.source, &s.target, &s.h);
    ensure!(check_morphism(c, d, h, MorphismKind::Lax).unwrap().is_ok(), "h is not lax");
    let oplax: Vec<String> = check_morphism(c, d, h, MorphismKind::Oplax)
        .unwrap()
        .violations
        .iter()
        .map(|v| v.describe(c))
        .collect();
    ensure!(oplax.iter().any(|v| v == "5 ?a target-only"), "oplax violations {oplax:?}");
    let strict: Vec<String> = check_morphism(c, d, h, MorphismKind::Strict)
        .unwrap()
        .violations
        .iter()
        .map(|v| v.describe(c))
        .collect();
    ensure!(strict.iter().any(|v| v == "4 !x source-only"), "strict violations {strict:?}");
    let (u, ren) = sa_disjoint_union(c, d).unwrap();
    let compat = ioco_compatibility(&u);
    let to_u = &ren.renames[0];
    let k = kernel(h);
    let restricted = Relation::from_pairs(
        c.state_count(),
        c.state_count(),
        (0..c.state_count())
            .flat_map(|x| (0..c.state_count()).map(move |y| (x, y)))
            .filter(|&(x, y)| compat.contains(to_u[x], to_u[y])),
    )
    .unwrap();
    ensure!(k.is_subset(&restricted), "kernel not within compatibility");
    ensure!(is_ioco_relation(&u, &compat), "oracle rejects the computed compatibility relation");
    for (x, y) in h.graph().pairs() {
        ensure!(compat.contains(to_u[x], ren.renames[1][y]), "({x}, h({x})) not compatible");
    }
    Ok(format!(
        "oplax: {}; strict: {}; kernel {} pairs within compatibility of {} pairs",
        oplax.join(", "),
        strict.join(", "),
        k.len(),
        restricted.len()
    ))
}

fn criterion_5() -> Outcome {
    const UNIT: Shape = Shape::Mealy { inputs: 1, outputs: 1 };
    let names = ["x", "y"];
    let set = |pairs: Vec<(Successor, Successor)>| {
        let mut v: Vec<(String, String)> = pairs.iter().map(|(t, s)| unit_pair(t, s, &names)).collect();
        v.sort();
        v
    };
    let expect = |v: &[(&str, &str)]| {
        let mut v: Vec<(String, String)> = v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        v.sort();
        v
    };
    let s = Relation::from_pairs(2, 2, [(0, 1)]).unwrap();
    let pulled = s.inverse_image(&[0]).unwrap();
    let a = set(lifted_pairs(UNIT, &pulled, true).unwrap());
    ensure!(a == expect(&[("?", "?")]), "lifting of the pullback {a:?}");
    let b = set(lifted_pairs(UNIT, &s, false).unwrap());
    ensure!(b == expect(&[("?", "?"), ("x", "y")]), "plain lifting {b:?}");
    let c = set(lifted_pairs(UNIT, &s, true).unwrap());
    ensure!(c == expect(&[("?", "?"), ("x", "y"), ("?", "y"), ("x", "?")]), "uncertain lifting {c:?}");
    // (Ff × Ff)⁻¹ of the uncertain lifting, for f: {x} → {x, y}
    let undef = Successor::Mealy(vec![None]);
    let at = |x| Successor::Mealy(vec![Some((0, x))]);
    let mut d = Vec::new();
    for t in [undef.clone(), at(0)] {
        for u in [undef.clone(), at(0)] {
            if in_uncertain_lifting(&s, &t.map(&[0]), &u.map(&[0])).unwrap() {
                d.push((t.clone(), u.clone()));
            }
        }
    }
    let d = set(d);
    ensure!(d == expect(&[("?", "?"), ("x", "?")]), "inverse image {d:?}");
    ensure!(!in_lifting(&s, &at(0), &undef).unwrap(), "plain lifting relates x and ?");
    let found = stability_check(UNIT, &[0], &s).unwrap();
    ensure!(found == Some((at(0), undef.clone())), "stability counterexample {found:?}");
    let refl = s.reflexive_closure().unwrap();
    ensure!(stability_check(UNIT, &[0], &refl).unwrap().is_none(), "reflexive closure is not stable");
    Ok("four sets reproduced; counterexample (x, ?); reflexive closure stable".into())
}

fn criterion_6() -> Outcome {
    let corpus = mealy_corpus(MEALY_SEED, CORPUS);
    let start = Instant::now();
    let (mut pairs, mut fallbacks, mut compatible) = (0u64, 0u64, 0u64);
    for (k, m) in corpus.iter().enumerate() {
        let ub = uncertain_bisimilarity(m);
        for x in 0..m.state_count() {
            for y in 0..m.state_count() {
                let v = semantic_oracle_uncertain(m, x, y, ORACLE_BUDGET).unwrap();
                ensure!(v.compatible == ub.contains(x, y), "machine {k}: pair ({x}, {y}) oracle {v:?}");
                ensure!(
                    v.compatible == !product_apart(m, x, y),
                    "machine {k}: test-side oracle disagrees on ({x}, {y})"
                );
                pairs += 1;
                compatible += v.compatible as u64;
                fallbacks += (v.method == OracleMethod::ProductReachability) as u64;
            }
        }
    }
    let took = start.elapsed();
    ensure!(took <= ORACLE_TIME_LIMIT, "took {took:?}");
    Ok(format!(
        "{CORPUS} machines, {pairs} pairs ({compatible} compatible), {fallbacks} budget fallbacks, {:.1}s",
        took.as_secs_f64()
    ))
}

fn criterion_7() -> Outcome {
    let corpus = mealy_corpus(MEALY_SEED, CORPUS);
    let (mut joins, mut apart) = (0, 0);
    for (k, m) in corpus.iter().enumerate() {
        let ub = uncertain_bisimilarity(m);
        let mm = mealy(m);
        for x in 0..m.state_count() {
            for y in 0..m.state_count() {
                match joint_simulator(m, x, y).unwrap() {
                    JointOutcome::Apart(_) => {
                        ensure!(!ub.contains(x, y), "machine {k}: ({x}, {y}) compatible but no join");
                        apart += 1;
                    }
                    JointOutcome::Joint(j) => {
                        ensure!(ub.contains(x, y), "machine {k}: join for apart ({x}, {y})");
                        let mj = mealy(&j.machine);
                        for w in [&j.left, &j.right] {
                            for style in [SpanStyle::HughesJacobs, SpanStyle::OpenMap] {
                                ensure!(
                                    check_simulation(&w.relation, &mm, &mj, style).unwrap(),
                                    "machine {k}: ({x}, {y}) {style:?} check fails"
                                );
                            }
                            ensure!(w.verify(&mm, &mj).unwrap(), "machine {k}: HJ span fails");
                            let open = hj_to_openmap(w, &mm, &mj).unwrap();
                            ensure!(open.verify(&mm, &mj).unwrap(), "machine {k}: open-map span fails");
                            let (span, pi1, _) = open.span(&mm, &mj).unwrap();
                            let span = span.as_mealy().unwrap().clone();
                            ensure!(
                                check_morphism(&span, m, &pi1, MorphismKind::Strict).unwrap().is_ok(),
                                "machine {k}: first projection not strict"
                            );
                        }
                        joins += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{joins} joins verified, {apart} apart pairs refused"))
}

fn criterion_8() -> Outcome {
    let mut rng = rng(LAX_SEED);
    let corpus = mealy_corpus(LAX_SEED, CORPUS);
    for (k, m) in corpus.iter().enumerate() {
        let (t, h) = random_lax_morphism(&mut rng, m, 3, 2).unwrap();
        ensure!(is_lax(m, &t, h.mapping()), "generated map {k} is not lax");
        let ker = kernel(&h);
        ensure!(
            relation_is_uncertain_bisimulation(m, &ker).unwrap(),
            "kernel {k} is not an uncertain bisimulation"
        );
        ensure!(ker.is_subset(&uncertain_bisimilarity(m)), "kernel {k} not within uncertain bisimilarity");
        let pulled = uncertain_bisimilarity(&t).inverse_image(h.mapping()).unwrap();
        ensure!(relation_is_uncertain_bisimulation(m, &pulled).unwrap(), "pullback {k} fails");
    }
    let mut rng = common::rng(OPLAX_SEED);
    let corpus = mealy_corpus(OPLAX_SEED, CORPUS);
    for (k, m) in corpus.iter().enumerate() {
        let (c, d, h) = random_oplax_morphism(&mut rng, m).unwrap();
        ensure!(
            check_morphism(&c, &d, &h, MorphismKind::Oplax).unwrap().is_ok(),
            "generated map {k} is not oplax"
        );
        let (ub_c, ub_d) = (uncertain_bisimilarity(&c), uncertain_bisimilarity(&d));
        for (x, y) in ub_c.pairs() {
            ensure!(ub_d.contains(h.apply(x), h.apply(y)), "oplax {k}: image of ({x}, {y}) apart");
        }
        let r = restrict_along(&c, &d, &h).unwrap();
        ensure!(
            check_morphism(&r, &d, &h, MorphismKind::Strict).unwrap().is_ok(),
            "restriction {k} not strict"
        );
    }
    Ok(format!("{CORPUS} lax and {CORPUS} oplax morphisms"))
}

fn criterion_9() -> Outcome {
    for m in mealy_corpus(MEALY_SEED, CORPUS) {
        let ub = uncertain_bisimilarity(&m);
        ensure!(ub.is_reflexive() && ub.is_symmetric(), "uncertain bisimilarity not reflexive and symmetric");
        ensure!(bisimilarity(&m).is_subset(&ub), "bisimilarity not within uncertain bisimilarity");
    }
    for a in sa_corpus(SA_SEED, CORPUS, 6) {
        let c = ioco_compatibility(&a);
        ensure!(c.is_reflexive() && c.is_symmetric(), "ioco compatibility not reflexive and symmetric");
        ensure!(is_ioco_relation(&a, &c), "computed compatibility violates the clauses");
    }
    for a in sa_corpus(SA_SEED + 1, 200, 3) {
        ensure!(ioco_compatibility(&a) == brute_ioco(&a), "compatibility differs from the brute-force union");
    }
    let u = union_of_four();
    let ub = uncertain_bisimilarity(&u);
    let (p0, q0, s0) = (state(&u, "p.p0"), state(&u, "q.q0"), state(&u, "s.s0"));
    ensure!(ub.contains(p0, q0) && ub.contains(q0, s0) && !ub.contains(p0, s0), "triple p0, q0, s0");
    let k = fixtures::ioco_chain();
    let ck = ioco_compatibility(&k);
    let id = |s| k.state_index(s).unwrap();
    ensure!(
        ck.contains(id("x"), id("y")) && ck.contains(id("y"), id("z")) && !ck.contains(id("x"), id("z")),
        "ioco triple x, y, z"
    );

    let mut rng = common::rng(LAW_SEED);
    let mut checks = 0;
    let mut shapes = vec![Shape::Pow];
    for i in 1..=2 {
        for o in 1..=2 {
            shapes.push(Shape::Mealy { inputs: i, outputs: o });
            shapes.push(Shape::Sa { inputs: i, outputs: o });
        }
    }
    for &shape in &shapes {
        let tables: Vec<laws::Table> = (1..=3).map(|n| laws::Table::new(shape, n)).collect();
        for x in &tables {
            checks += laws::check_basic_laws(x)?;
            for y in &tables {
                checks += laws::check_inverse_images(x, y)?;
            }
            let work = x.all.len().pow(2) << (x.n * x.n);
            checks += if work > ENUM_EXHAUSTIVE_LIMIT {
                laws::check_direct_vs_enumerated(shape, x, Some((ENUM_SAMPLES, &mut rng)))?
            } else {
                laws::check_direct_vs_enumerated::<rand_chacha::ChaCha8Rng>(shape, x, None)?
            };
        }
    }
    Ok(format!("closure laws on {CORPUS}+{CORPUS} systems, both triples, {checks} lifting-law checks"))
}

fn criterion_10() -> Outcome {
    for (name, text) in fixtures::FILES {
        let doc = Document::parse(text).map_err(|e| format!("{name}: {e}"))?;
        let again = Document::parse(&doc.render()).map_err(|e| format!("{name} rendered: {e}"))?;
        ensure!(again == doc, "{name} does not round-trip");
        ensure!(again.render() == doc.render(), "{name} rendering not stable");
    }
    let fig = Document::parse(fixtures::FILES[0].1).unwrap();
    let transitions: usize = fig.machines().map(|m| m.as_mealy().unwrap().transition_count()).sum();
    ensure!(fig.machines().count() == 4 && transitions == 6, "four-machine file: {transitions} transitions");
    let golden = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let cases = std::fs::read_dir(&golden).map_err(|e| format!("{}: {e}", golden.display()))?;
    let mut n = 0;
    for case in cases {
        let path = case.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("out") {
            continue;
        }
        let expected = std::fs::read_to_string(&path).unwrap();
        let (cmd, body) = expected.split_once('\n').ok_or("empty golden file")?;
        let args: Vec<String> = cmd
            .trim_start_matches("$ ")
            .split_whitespace()
            .map(|a| match a.strip_prefix("fixtures/") {
                Some(f) => format!("{}/fixtures/{f}", env!("CARGO_MANIFEST_DIR")),
                None => a.to_string(),
            })
            .collect();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = apartness::cli::run(&args, &mut out, &mut err);
        let got = format!("{}exit {code}\n", String::from_utf8(out).unwrap());
        ensure!(got == body, "{} differs:\n{got}", path.display());
        n += 1;
    }
    ensure!(n >= 10, "only {n} golden files");
    Ok(format!("{} fixtures round-trip, {n} golden transcripts match", fixtures::FILES.len()))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = 0;
    for (k, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {k}: PASS ({secs:.2}s) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {k}: FAIL ({secs:.2}s) {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
