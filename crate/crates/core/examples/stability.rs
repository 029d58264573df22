//! Empirical stability of the uncertain lifting: for every map `f: X → Y`
//! and every reflexive relation `S` on `Y` (small sizes), compare
//! `F̂⊑((f × f)⁻¹ S)` with `(Ff × Ff)⁻¹ F̂⊑(S)`.
//!
//! ```text
//! cargo run --example stability
//! ```

use apartness::lifting::stability_check;
use apartness::systems::Shape;
use apartness::Relation;

fn maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    (0..m.pow(n as u32))
        .map(|mut c| {
            (0..n)
                .map(|_| {
                    let v = c % m;
                    c /= m;
                    v
                })
                .collect()
        })
        .collect()
}

fn reflexive_relations(m: usize) -> impl Iterator<Item = Relation> {
    (0u32..1 << (m * m)).filter_map(move |bits| {
        let r =
            Relation::from_pairs(m, m, (0..m * m).filter(|k| bits & (1 << k) != 0).map(|k| (k / m, k % m)))
                .unwrap();
        r.is_reflexive().then_some(r)
    })
}

fn main() {
    let mut shapes = Vec::new();
    for i in 1..=2 {
        for o in 1..=2 {
            shapes.push(Shape::Mealy { inputs: i, outputs: o });
            shapes.push(Shape::Sa { inputs: i, outputs: o });
        }
    }
    for shape in shapes {
        let (mut cases, mut failures) = (0, 0);
        let mut first = None;
        for n in 1..=3 {
            for m in 1..=3 {
                for f in maps(n, m) {
                    for s in reflexive_relations(m) {
                        cases += 1;
                        if let Some(pair) = stability_check(shape, &f, &s).unwrap() {
                            failures += 1;
                            first.get_or_insert((f.clone(), s.pairs().collect::<Vec<_>>(), pair));
                        }
                    }
                }
            }
        }
        println!("{shape:?}: {cases} (f, S) cases, {failures} unstable");
        if let Some((f, s, (t, u))) = first {
            println!("  first: f = {f:?}, S = {s:?}, pair {t:?} / {u:?}");
        }
    }
}
