//! Membership tests for the canonical relation lifting `F̂(R)` and the
//! uncertain lifting `⊑ ∘ F̂(R) ∘ ⊒`, for the three fixed functors.
//!
//! The uncertain lifting has two independent implementations: a direct
//! characterization ([`in_uncertain_lifting`]) and a brute-force search over
//! all completions ([`in_uncertain_lifting_enumerated`]), which only works at
//! desk scale and exists to cross-check the first.

use crate::error::{contract, Error, Result};
use crate::relation::Relation;
use crate::systems::{Shape, Successor};

/// Size caps for the enumerative routines.
pub const MAX_ENUM_CARRIER: usize = 4;
pub const MAX_ENUM_ALPHABET: usize = 3;
pub const MAX_STABILITY_DOMAIN: usize = 3;
pub const MAX_STABILITY_ALPHABET: usize = 2;

fn check_carriers(r: &Relation, t: &Successor, s: &Successor) -> Result<()> {
    t.check_layout(s)?;
    if t.max_element().is_some_and(|x| x >= r.left_size())
        || s.max_element().is_some_and(|y| y >= r.right_size())
    {
        return Err(contract("successor structure refers outside the relation's carrier"));
    }
    Ok(())
}

/// Both defined and related, or both undefined.
fn same_domain_related(r: &Relation, a: &[Option<usize>], b: &[Option<usize>]) -> bool {
    a.iter().zip(b).all(|pair| match pair {
        (None, None) => true,
        (Some(x), Some(y)) => r.contains(*x, *y),
        _ => false,
    })
}

/// `(t, s) ∈ F̂(R)`.
///
/// For Mealy and suspension structures this means: defined on exactly the
/// same labels, equal outputs, related successors. For `Pow` it is the
/// Egli–Milner condition.
pub fn in_lifting(r: &Relation, t: &Successor, s: &Successor) -> Result<bool> {
    check_carriers(r, t, s)?;
    Ok(match (t, s) {
        (Successor::Mealy(a), Successor::Mealy(b)) => a.iter().zip(b).all(|e| match e {
            (None, None) => true,
            (Some((o, x)), Some((p, y))) => o == p && r.contains(*x, *y),
            _ => false,
        }),
        (Successor::Sa { inputs: ti, outputs: to }, Successor::Sa { inputs: si, outputs: so }) => {
            same_domain_related(r, ti, si) && same_domain_related(r, to, so)
        }
        (Successor::Pow(a), Successor::Pow(b)) => {
            a.iter().all(|&x| b.iter().any(|&y| r.contains(x, y)))
                && b.iter().all(|&y| a.iter().any(|&x| r.contains(x, y)))
        }
        _ => unreachable!("layout checked"),
    })
}

/// One side defined, the other not: the defined successor must have some
/// partner in `R`, because the completion may add the missing entry freely.
fn compatible_entry(r: &Relation, a: Option<usize>, b: Option<usize>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => r.contains(x, y),
        (Some(x), None) => r.has_successor(x),
        (None, Some(y)) => r.has_predecessor(y),
    }
}

/// `(t, s) ∈ ⊑ ∘ F̂(R) ∘ ⊒`, i.e. there are completions `t ⊑ t'`, `s ⊑ s'`
/// with `(t', s') ∈ F̂(R)`.
///
/// Decided without enumeration: commonly defined entries must agree up to
/// `R`, and an entry defined on one side only needs a partner in `R`. For
/// suspension structures outputs can only be removed, so some commonly
/// enabled output with related successors must survive.
pub fn in_uncertain_lifting(r: &Relation, t: &Successor, s: &Successor) -> Result<bool> {
    check_carriers(r, t, s)?;
    Ok(match (t, s) {
        (Successor::Mealy(a), Successor::Mealy(b)) => a.iter().zip(b).all(|e| match e {
            (Some((o, x)), Some((p, y))) => o == p && r.contains(*x, *y),
            (a, b) => compatible_entry(r, a.map(|e| e.1), b.map(|e| e.1)),
        }),
        (Successor::Sa { inputs: ti, outputs: to }, Successor::Sa { inputs: si, outputs: so }) => {
            ti.iter().zip(si).all(|(a, b)| compatible_entry(r, *a, *b))
                && to.iter().zip(so).any(|e| match e {
                    (Some(x), Some(y)) => r.contains(*x, *y),
                    _ => false,
                })
        }
        (Successor::Pow(a), Successor::Pow(b)) => {
            a.iter().all(|&x| r.has_successor(x)) && b.iter().all(|&y| r.has_predecessor(y))
        }
        _ => unreachable!("layout checked"),
    })
}

fn check_enum_shape(shape: Shape, carrier: usize, alphabet_cap: usize, carrier_cap: usize) -> Result<()> {
    let (i, o) = match shape {
        Shape::Mealy { inputs, outputs } | Shape::Sa { inputs, outputs } => (inputs, outputs),
        Shape::Pow => (0, 0),
    };
    if carrier > carrier_cap || i > alphabet_cap || o > alphabet_cap {
        return Err(Error::SizeLimit(format!(
            "enumeration supports carriers up to {carrier_cap} and alphabets up to \
             {alphabet_cap} (got carrier {carrier}, alphabets {i}/{o})"
        )));
    }
    Ok(())
}

fn partial_maps(domain: usize, codomain: usize) -> Vec<Vec<Option<usize>>> {
    let mut out = vec![Vec::with_capacity(domain)];
    for _ in 0..domain {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                std::iter::once(None).chain((0..codomain).map(Some)).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

/// Every element of `F X` for `X = {0..carrier}`, in a fixed order starting
/// with the least defined structures. Suspension structures always enable at
/// least one output.
pub fn enumerate_structures(shape: Shape, carrier: usize) -> Result<Vec<Successor>> {
    check_enum_shape(shape, carrier, MAX_ENUM_ALPHABET, MAX_ENUM_CARRIER)?;
    Ok(match shape {
        Shape::Mealy { inputs, outputs } => partial_maps(inputs, outputs * carrier)
            .into_iter()
            .map(|m| Successor::Mealy(m.into_iter().map(|e| e.map(|k| (k / carrier, k % carrier))).collect()))
            .collect(),
        Shape::Sa { inputs, outputs } => {
            let outs: Vec<_> = partial_maps(outputs, carrier)
                .into_iter()
                .filter(|m| m.iter().any(Option::is_some))
                .collect();
            partial_maps(inputs, carrier)
                .into_iter()
                .flat_map(|i| {
                    outs.iter().map(move |o| Successor::Sa { inputs: i.clone(), outputs: o.clone() })
                })
                .collect()
        }
        Shape::Pow => (0u32..1 << carrier)
            .map(|bits| Successor::Pow((0..carrier).filter(|&x| bits & (1 << x) != 0).collect()))
            .collect(),
    })
}

/// Every `t'` in `F X` with `t ⊑ t'`, for `X = {0..carrier}`: undefined
/// inputs are filled in all possible ways, suspension outputs are dropped in
/// all ways that leave at least one, and sets grow to every superset.
pub fn completions(t: &Successor, carrier: usize, outputs: usize) -> Vec<Successor> {
    fn fill<T: Clone>(entries: &[Option<T>], options: &[T]) -> Vec<Vec<Option<T>>> {
        let mut out = vec![Vec::with_capacity(entries.len())];
        for e in entries {
            let choices: Vec<Option<T>> = match e {
                Some(v) => vec![Some(v.clone())],
                None => std::iter::once(None).chain(options.iter().cloned().map(Some)).collect(),
            };
            out = out
                .into_iter()
                .flat_map(|p| {
                    choices.iter().map(move |c| {
                        let mut p = p.clone();
                        p.push(c.clone());
                        p
                    })
                })
                .collect();
        }
        out
    }
    match t {
        Successor::Mealy(m) => {
            let options: Vec<(usize, usize)> =
                (0..outputs).flat_map(|o| (0..carrier).map(move |x| (o, x))).collect();
            fill(m, &options).into_iter().map(Successor::Mealy).collect()
        }
        Successor::Sa { inputs, outputs: outs } => {
            let states: Vec<usize> = (0..carrier).collect();
            let defined: Vec<usize> = (0..outs.len()).filter(|&o| outs[o].is_some()).collect();
            let kept: Vec<Vec<Option<usize>>> = (1u32..1 << defined.len())
                .map(|bits| {
                    let mut v = vec![None; outs.len()];
                    for (k, &o) in defined.iter().enumerate() {
                        if bits & (1 << k) != 0 {
                            v[o] = outs[o];
                        }
                    }
                    v
                })
                .collect();
            fill(inputs, &states)
                .into_iter()
                .flat_map(|i| {
                    kept.iter().map(move |o| Successor::Sa { inputs: i.clone(), outputs: o.clone() })
                })
                .collect()
        }
        Successor::Pow(set) => {
            let rest: Vec<usize> = (0..carrier).filter(|x| !set.contains(x)).collect();
            (0u32..1 << rest.len())
                .map(|bits| {
                    let mut s = set.clone();
                    s.extend((0..rest.len()).filter(|k| bits & (1 << k) != 0).map(|k| rest[k]));
                    Successor::Pow(s)
                })
                .collect()
        }
    }
}

/// Brute-force variant of [`in_uncertain_lifting`]: searches all completions
/// `t ⊑ t'`, `s ⊑ s'` in `F X` for a pair in `F̂(R)`. `R` must be a relation
/// on a single carrier of at most [`MAX_ENUM_CARRIER`] elements.
pub fn in_uncertain_lifting_enumerated(
    shape: Shape,
    r: &Relation,
    t: &Successor,
    s: &Successor,
) -> Result<bool> {
    check_carriers(r, t, s)?;
    if r.left_size() != r.right_size() {
        return Err(contract("enumerated lifting needs a relation on one carrier"));
    }
    let n = r.left_size();
    check_enum_shape(shape, n, MAX_ENUM_ALPHABET, MAX_ENUM_CARRIER)?;
    let outputs = match shape {
        Shape::Mealy { outputs, .. } => outputs,
        _ => 0,
    };
    let (tc, sc) = (completions(t, n, outputs), completions(s, n, outputs));
    for a in &tc {
        for b in &sc {
            if in_lifting(r, a, b)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// All pairs of `F X × F X` in the (uncertain, if requested) lifting of `R`.
pub fn lifted_pairs(shape: Shape, r: &Relation, uncertain: bool) -> Result<Vec<(Successor, Successor)>> {
    if r.left_size() != r.right_size() {
        return Err(contract("lifting needs a relation on one carrier"));
    }
    let all = enumerate_structures(shape, r.left_size())?;
    let mut out = Vec::new();
    for t in &all {
        for s in &all {
            let member = if uncertain { in_uncertain_lifting(r, t, s)? } else { in_lifting(r, t, s)? };
            if member {
                out.push((t.clone(), s.clone()));
            }
        }
    }
    Ok(out)
}

/// Checks `F̂⊑((f × f)⁻¹(S)) = (Ff × Ff)⁻¹(F̂⊑(S))` for `f: X → Y` by
/// enumerating all pairs over `F X`.
///
/// Returns `None` when both sides agree, otherwise the first pair (in
/// enumeration order) on which they differ.
pub fn stability_check(shape: Shape, f: &[usize], s: &Relation) -> Result<Option<(Successor, Successor)>> {
    if s.left_size() != s.right_size() {
        return Err(contract("stability is checked for relations on one carrier"));
    }
    if f.iter().any(|&y| y >= s.left_size()) {
        return Err(contract("map lands outside the relation's carrier"));
    }
    check_enum_shape(shape, f.len(), MAX_STABILITY_ALPHABET, MAX_STABILITY_DOMAIN)?;
    check_enum_shape(shape, s.left_size(), MAX_STABILITY_ALPHABET, MAX_ENUM_CARRIER)?;
    let pulled = s.inverse_image(f)?;
    let all = enumerate_structures(shape, f.len())?;
    for t in &all {
        for u in &all {
            let lhs = in_uncertain_lifting(&pulled, t, u)?;
            let rhs = in_uncertain_lifting(s, &t.map(f), &u.map(f))?;
            if lhs != rhs {
                return Ok(Some((t.clone(), u.clone())));
            }
        }
    }
    Ok(None)
}
