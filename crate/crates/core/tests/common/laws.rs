//! Exhaustive checks of the relation-lifting laws over small carriers.

use std::collections::HashMap;

use apartness::lifting::{
    enumerate_structures, in_lifting, in_uncertain_lifting, in_uncertain_lifting_enumerated,
};
use apartness::systems::Shape;
use apartness::{Relation, Successor};
use rand::Rng;

pub fn relation_from_bits(n: usize, bits: u32) -> Relation {
    Relation::from_pairs(n, n, (0..n * n).filter(|k| bits & (1 << k) != 0).map(|k| (k / n, k % n))).unwrap()
}

fn converse_bits(n: usize, bits: u32) -> u32 {
    (0..n * n).filter(|k| bits & (1 << k) != 0).map(|k| 1 << ((k % n) * n + k / n)).sum()
}

/// `(f × f)⁻¹ S` for `S` on `m` elements, as bits over `f.len()` elements.
fn pullback_bits(f: &[usize], m: usize, bits: u32) -> u32 {
    let n = f.len();
    (0..n * n).filter(|k| bits & (1 << (f[k / n] * m + f[k % n])) != 0).map(|k| 1 << k).sum()
}

/// All structures over `n` elements together with their membership in the
/// plain and uncertain lifting of every relation: `plain[bits][t * len + s]`.
pub struct Table {
    pub n: usize,
    pub all: Vec<Successor>,
    plain: Vec<Vec<bool>>,
    uncertain: Vec<Vec<bool>>,
}

impl Table {
    pub fn new(shape: Shape, n: usize) -> Table {
        let all = enumerate_structures(shape, n).unwrap();
        let mut plain = Vec::new();
        let mut uncertain = Vec::new();
        for bits in 0u32..1 << (n * n) {
            let r = relation_from_bits(n, bits);
            let mut p = Vec::with_capacity(all.len() * all.len());
            let mut u = Vec::with_capacity(all.len() * all.len());
            for t in &all {
                for s in &all {
                    p.push(in_lifting(&r, t, s).unwrap());
                    u.push(in_uncertain_lifting(&r, t, s).unwrap());
                }
            }
            plain.push(p);
            uncertain.push(u);
        }
        Table { n, all, plain, uncertain }
    }

    fn len(&self) -> usize {
        self.all.len()
    }
}

/// Monotonicity, preservation of equality and of converse, for the plain
/// and the uncertain lifting, over every relation.
pub fn check_basic_laws(tab: &Table) -> Result<usize, String> {
    let (n, len, all) = (tab.n, tab.len(), &tab.all);
    let mut checks = 0;
    for (name, rows) in [("plain", &tab.plain), ("uncertain", &tab.uncertain)] {
        for bits in 0u32..1 << (n * n) {
            let row = &rows[bits as usize];
            for k in 0..n * n {
                let bigger = &rows[(bits | 1 << k) as usize];
                if let Some(p) = (0..len * len).find(|&p| row[p] && !bigger[p]) {
                    return Err(format!(
                        "{name} lifting not monotone at {:?}",
                        (&all[p / len], &all[p % len])
                    ));
                }
            }
            let op = &rows[converse_bits(n, bits) as usize];
            for t in 0..len {
                for s in 0..len {
                    if row[t * len + s] != op[s * len + t] {
                        return Err(format!(
                            "{name} lifting does not preserve converse at {:?}",
                            (&all[t], &all[s])
                        ));
                    }
                }
            }
            checks += len * len;
        }
        let eq = &rows[(0..n).map(|x| 1u32 << (x * n + x)).sum::<u32>() as usize];
        if let Some(t) = (0..len).find(|&t| !eq[t * len + t]) {
            return Err(format!("{name} lifting of equality misses {:?}", all[t]));
        }
    }
    Ok(checks)
}

/// `L((f × f)⁻¹ S) ⊆ (Ff × Ff)⁻¹ L(S)` for both liftings, with equality for
/// the plain one, over every `f: X → Y` and every `S` on `Y`.
pub fn check_inverse_images(x: &Table, y: &Table) -> Result<usize, String> {
    let (n, m) = (x.n, y.n);
    let index: HashMap<&Successor, usize> = y.all.iter().enumerate().map(|(k, s)| (s, k)).collect();
    let (lx, ly) = (x.len(), y.len());
    let mut checks = 0;
    for code in 0..m.pow(n as u32) {
        let mut c = code;
        let f: Vec<usize> = (0..n)
            .map(|_| {
                let v = c % m;
                c /= m;
                v
            })
            .collect();
        let image: Vec<usize> = x.all.iter().map(|t| index[&t.map(&f)]).collect();
        for bits in 0u32..1 << (m * m) {
            let pulled = pullback_bits(&f, m, bits) as usize;
            let (pl, ul) = (&x.plain[pulled], &x.uncertain[pulled]);
            let (pr, ur) = (&y.plain[bits as usize], &y.uncertain[bits as usize]);
            for a in 0..lx {
                for b in 0..lx {
                    let l = a * lx + b;
                    let r = image[a] * ly + image[b];
                    if pl[l] != pr[r] {
                        return Err(format!(
                            "plain lifting: inverse image differs at {:?} for f = {f:?}",
                            (&x.all[a], &x.all[b])
                        ));
                    }
                    if ul[l] && !ur[r] {
                        return Err(format!(
                            "uncertain lifting: inverse image not included at {:?} for f = {f:?}",
                            (&x.all[a], &x.all[b])
                        ));
                    }
                }
            }
            checks += lx * lx;
        }
    }
    Ok(checks)
}

/// The direct characterization of the uncertain lifting against the search
/// over completions, on every relation and every pair, or on `k` random
/// triples.
pub fn check_direct_vs_enumerated<R: Rng>(
    shape: Shape,
    tab: &Table,
    sample: Option<(usize, &mut R)>,
) -> Result<usize, String> {
    let (n, len, all) = (tab.n, tab.len(), &tab.all);
    let mut jobs: Vec<(u32, usize, usize)> = Vec::new();
    match sample {
        None => {
            for bits in 0u32..1 << (n * n) {
                for t in 0..len {
                    for s in 0..len {
                        jobs.push((bits, t, s));
                    }
                }
            }
        }
        Some((k, rng)) => {
            for _ in 0..k {
                jobs.push((rng.gen_range(0..1u32 << (n * n)), rng.gen_range(0..len), rng.gen_range(0..len)));
            }
        }
    }
    let mut checks = 0;
    for (bits, t, s) in jobs {
        let r = relation_from_bits(n, bits);
        let direct = tab.uncertain[bits as usize][t * len + s];
        let slow = in_uncertain_lifting_enumerated(shape, &r, &all[t], &all[s]).unwrap();
        if direct != slow {
            return Err(format!(
                "direct {direct} vs enumerated {slow} at {:?} with R = {:?}",
                (&all[t], &all[s]),
                r.pairs().collect::<Vec<_>>()
            ));
        }
        checks += 1;
    }
    Ok(checks)
}
