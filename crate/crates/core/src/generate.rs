//! Random systems and morphisms for property tests and experiments.
//!
//! States are named `s0, s1, ..`, inputs `i0, ..` and outputs `o0, ..`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::morphisms::{lax_identify, Identification, StateMap};
use crate::systems::{Alphabet, PartialMealy, SuspensionAutomaton, TotalMealy, Transition};

fn names(prefix: &str, n: usize) -> Alphabet {
    Alphabet::new((0..n).map(|k| format!("{prefix}{k}"))).expect("generated names are unique")
}

/// A random partial Mealy machine in which each transition is defined with
/// probability `density`.
pub fn random_mealy<R: Rng + ?Sized>(
    rng: &mut R,
    states: usize,
    inputs: usize,
    outputs: usize,
    density: f64,
) -> PartialMealy {
    let mut m = PartialMealy::new("g", names("i", inputs), names("o", outputs), names("s", states));
    for q in 0..states {
        for i in 0..inputs {
            if rng.gen_bool(density) {
                let t = Transition { output: rng.gen_range(0..outputs), target: rng.gen_range(0..states) };
                m.set_transition(q, i, Some(t));
            }
        }
    }
    m
}

/// A random machine with sizes drawn from `1..=max_states`,
/// `1..=max_inputs`, `1..=max_outputs` and a random density.
pub fn random_small_mealy<R: Rng + ?Sized>(
    rng: &mut R,
    max_states: usize,
    max_inputs: usize,
    max_outputs: usize,
) -> PartialMealy {
    let n = rng.gen_range(1..=max_states);
    let i = rng.gen_range(1..=max_inputs);
    let o = rng.gen_range(1..=max_outputs);
    let density = rng.gen_range(0.2..0.95);
    random_mealy(rng, n, i, o, density)
}

pub fn random_total_mealy<R: Rng + ?Sized>(
    rng: &mut R,
    states: usize,
    inputs: usize,
    outputs: usize,
) -> TotalMealy {
    TotalMealy::try_from(random_mealy(rng, states, inputs, outputs, 1.0)).expect("density 1 is total")
}

/// A random suspension automaton; every state gets at least one output.
pub fn random_sa<R: Rng + ?Sized>(
    rng: &mut R,
    states: usize,
    inputs: usize,
    outputs: usize,
    density: f64,
) -> SuspensionAutomaton {
    let mut it = Vec::new();
    let mut ot = Vec::new();
    for q in 0..states {
        for a in 0..inputs {
            if rng.gen_bool(density) {
                it.push((q, a, rng.gen_range(0..states)));
            }
        }
        let forced = rng.gen_range(0..outputs);
        for o in 0..outputs {
            if o == forced || rng.gen_bool(density) {
                ot.push((q, o, rng.gen_range(0..states)));
            }
        }
    }
    SuspensionAutomaton::from_parts(
        "g",
        names("i", inputs),
        names("o", outputs),
        names("s", states),
        &it,
        &ot,
    )
    .expect("generated automata are non-blocking")
}

/// A lax morphism out of `m`, built by merging a few random pairs (each
/// merge is the quotient of [`lax_identify`], skipped on conflict) and then
/// extending the quotient with fresh states and transitions on undefined
/// entries.
pub fn random_lax_morphism<R: Rng + ?Sized>(
    rng: &mut R,
    m: &PartialMealy,
    merges: usize,
    extra_states: usize,
) -> Result<(PartialMealy, StateMap)> {
    let mut target = m.clone();
    let mut h = StateMap::identity(m);
    for _ in 0..merges {
        let n = target.state_count();
        let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if let Identification::Quotient { quotient, projection, .. } = lax_identify(&target, x, y)? {
            h = h.then(&projection)?;
            target = quotient;
        }
    }
    let mut extended = PartialMealy::new(
        "ext",
        target.inputs().clone(),
        target.outputs().clone(),
        Alphabet::new(
            target.states().iter().map(str::to_string).chain((0..extra_states).map(|k| format!("new{k}"))),
        )?,
    );
    let n = extended.state_count();
    for q in 0..n {
        for i in 0..extended.inputs().len() {
            let t = if q < target.state_count() { target.transition(q, i) } else { None };
            let t = t.or_else(|| {
                rng.gen_bool(0.5).then(|| Transition {
                    output: rng.gen_range(0..extended.outputs().len()),
                    target: rng.gen_range(0..n),
                })
            });
            extended.set_transition(q, i, t);
        }
    }
    let h = StateMap::new(m, &extended, h.mapping().to_vec())?;
    Ok((extended, h))
}

/// An oplax morphism `h: C → D`. `C` has one or two copies of each state
/// of `d`, with all transitions of `d` (targets sent to random copies) plus
/// random extra ones; the returned target is `d` with some transitions
/// deleted. Then `d'(h(x)) ⊑ d(h(x)) = Fh(c₀(x)) ⊑ Fh(c(x))`.
pub fn random_oplax_morphism<R: Rng + ?Sized>(
    rng: &mut R,
    d: &PartialMealy,
) -> Result<(PartialMealy, PartialMealy, StateMap)> {
    let mut copies: Vec<Vec<usize>> = Vec::new();
    let mut mapping = Vec::new();
    for y in 0..d.state_count() {
        let k = rng.gen_range(1..=2);
        copies.push((mapping.len()..mapping.len() + k).collect());
        mapping.extend(std::iter::repeat_n(y, k));
    }
    let n = mapping.len();
    let ni = d.inputs().len();
    let no = d.outputs().len();
    let mut c = PartialMealy::new("dup", d.inputs().clone(), d.outputs().clone(), names("c", n));
    for x in 0..n {
        for i in 0..ni {
            let t = match d.transition(mapping[x], i) {
                Some(t) => Some(Transition {
                    output: t.output,
                    target: *copies[t.target].choose(rng).expect("at least one copy"),
                }),
                None => rng
                    .gen_bool(0.3)
                    .then(|| Transition { output: rng.gen_range(0..no), target: rng.gen_range(0..n) }),
            };
            c.set_transition(x, i, t);
        }
    }
    let mut target = d.clone();
    for y in 0..d.state_count() {
        for i in 0..ni {
            if rng.gen_bool(0.25) {
                target.set_transition(y, i, None);
            }
        }
    }
    let h = StateMap::new(&c, &target, mapping)?;
    Ok((c, target, h))
}
