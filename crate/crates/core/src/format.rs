//! Line-based text format for machines, maps and relations.
//!
//! ```text
//! # comment
//! mealy <name>            | total-mealy <name>
//! inputs <tok>+
//! outputs <tok>+
//! states <tok>+
//! trans <src> <in> <out> <dst>
//!
//! sa <name>
//! inputs <tok>+
//! outputs <tok>+
//! states <tok>+
//! itrans <src> <in> <dst>
//! otrans <src> <out> <dst>
//!
//! map <name> from <m1> to <m2>
//! pair <src> <dst>
//!
//! rel <name> on <m1> [x <m2>]
//! pair <s> <t>
//! ```
//!
//! Absent transitions are undefined. Names are unique across a file.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::morphisms::StateMap;
use crate::relation::Relation;
use crate::systems::{Alphabet, Machine, PartialMealy, SuspensionAutomaton, TotalMealy};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapDecl {
    pub name: String,
    pub from: String,
    pub to: String,
    pub pairs: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelDecl {
    pub name: String,
    pub left: String,
    pub right: Option<String>,
    pub pairs: Vec<(String, String)>,
}

impl RelDecl {
    pub fn right_machine(&self) -> &str {
        self.right.as_deref().unwrap_or(&self.left)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Section {
    /// `total` is only ever set for Mealy machines.
    Machine {
        machine: Machine,
        total: bool,
    },
    Map(MapDecl),
    Rel(RelDecl),
}

impl Section {
    pub fn name(&self) -> &str {
        match self {
            Section::Machine { machine, .. } => machine.name(),
            Section::Map(m) => &m.name,
            Section::Rel(r) => &r.name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    pub sections: Vec<Section>,
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Attaches a line number to library errors.
fn at<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => perr(line, other.to_string()),
    })
}

struct Line<'a> {
    number: usize,
    tokens: Vec<&'a str>,
}

#[derive(Default)]
struct MachineBody<'a> {
    inputs: Option<(usize, Vec<&'a str>)>,
    outputs: Option<(usize, Vec<&'a str>)>,
    states: Option<(usize, Vec<&'a str>)>,
    trans: Vec<Line<'a>>,
}

impl<'a> MachineBody<'a> {
    fn alphabet(slot: &Option<(usize, Vec<&'a str>)>, what: &str, header: usize) -> Result<Alphabet> {
        let (line, toks) =
            slot.as_ref().ok_or_else(|| perr(header, format!("missing `{what}` declaration")))?;
        at(*line, Alphabet::new(toks.iter().copied()))
    }
}

const HEADERS: [&str; 5] = ["mealy", "total-mealy", "sa", "map", "rel"];

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        let mut lines = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if !tokens.is_empty() {
                lines.push(Line { number: k + 1, tokens });
            }
        }
        let mut doc = Document::default();
        let mut names = BTreeSet::new();
        let mut k = 0;
        while k < lines.len() {
            let header = &lines[k];
            if !HEADERS.contains(&header.tokens[0]) {
                return Err(perr(
                    header.number,
                    format!("expected a section header, found `{}`", header.tokens[0]),
                ));
            }
            let end =
                (k + 1..lines.len()).find(|&j| HEADERS.contains(&lines[j].tokens[0])).unwrap_or(lines.len());
            let section = parse_section(header, &lines[k + 1..end])?;
            if !names.insert(section.name().to_string()) {
                return Err(perr(header.number, format!("duplicate name `{}`", section.name())));
            }
            doc.sections.push(section);
            k = end;
        }
        doc.check_references(&lines)?;
        Ok(doc)
    }

    /// Validates maps and relations against the machines they mention.
    fn check_references(&self, lines: &[Line]) -> Result<()> {
        let header_line = |name: &str| {
            lines
                .iter()
                .find(|l| HEADERS.contains(&l.tokens[0]) && l.tokens.get(1) == Some(&name))
                .map_or(0, |l| l.number)
        };
        let pair_line = |section: &str, a: &str, b: &str| {
            let start = header_line(section);
            lines
                .iter()
                .filter(|l| l.number > start)
                .find(|l| l.tokens == ["pair", a, b])
                .map_or(start, |l| l.number)
        };
        for s in &self.sections {
            match s {
                Section::Map(m) => {
                    let line = header_line(&m.name);
                    let src = self
                        .machine(&m.from)
                        .ok_or_else(|| perr(line, format!("unknown machine `{}`", m.from)))?;
                    let dst = self
                        .machine(&m.to)
                        .ok_or_else(|| perr(line, format!("unknown machine `{}`", m.to)))?;
                    for (a, b) in &m.pairs {
                        let l = pair_line(&m.name, a, b);
                        at(l, src.state_index(a))?;
                        at(l, dst.state_index(b))?;
                    }
                    at(line, build_map(src, dst, &m.pairs))?;
                }
                Section::Rel(r) => {
                    let line = header_line(&r.name);
                    let left = self
                        .machine(&r.left)
                        .ok_or_else(|| perr(line, format!("unknown machine `{}`", r.left)))?;
                    let right = self
                        .machine(r.right_machine())
                        .ok_or_else(|| perr(line, format!("unknown machine `{}`", r.right_machine())))?;
                    for (a, b) in &r.pairs {
                        let l = pair_line(&r.name, a, b);
                        at(l, left.state_index(a))?;
                        at(l, right.state_index(b))?;
                    }
                }
                Section::Machine { .. } => {}
            }
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, s) in self.sections.iter().enumerate() {
            if k > 0 {
                out.push('\n');
            }
            out.push_str(&render_section(s));
        }
        out
    }

    pub fn machine(&self, name: &str) -> Option<&Machine> {
        self.sections.iter().find_map(|s| match s {
            Section::Machine { machine, .. } if machine.name() == name => Some(machine),
            _ => None,
        })
    }

    pub fn machines(&self) -> impl Iterator<Item = &Machine> {
        self.sections.iter().filter_map(|s| match s {
            Section::Machine { machine, .. } => Some(machine),
            _ => None,
        })
    }

    pub fn map(&self, name: &str) -> Option<&MapDecl> {
        self.sections.iter().find_map(|s| match s {
            Section::Map(m) if m.name == name => Some(m),
            _ => None,
        })
    }

    pub fn relation(&self, name: &str) -> Option<&RelDecl> {
        self.sections.iter().find_map(|s| match s {
            Section::Rel(r) if r.name == name => Some(r),
            _ => None,
        })
    }

    /// The source, target and index form of map `name`.
    pub fn resolve_map(&self, name: &str) -> Result<(&Machine, &Machine, StateMap)> {
        let m = self.map(name).ok_or_else(|| Error::Contract(format!("no map named `{name}`")))?;
        let src = self.machine(&m.from).ok_or_else(|| Error::UnknownState(m.from.clone()))?;
        let dst = self.machine(&m.to).ok_or_else(|| Error::UnknownState(m.to.clone()))?;
        Ok((src, dst, build_map(src, dst, &m.pairs)?))
    }

    /// The two machines and index form of relation `name`.
    pub fn resolve_relation(&self, name: &str) -> Result<(&Machine, &Machine, Relation)> {
        let r = self.relation(name).ok_or_else(|| Error::Contract(format!("no relation named `{name}`")))?;
        let left = self.machine(&r.left).ok_or_else(|| Error::UnknownState(r.left.clone()))?;
        let right = self
            .machine(r.right_machine())
            .ok_or_else(|| Error::UnknownState(r.right_machine().to_string()))?;
        let pairs = r
            .pairs
            .iter()
            .map(|(a, b)| Ok((left.state_index(a)?, right.state_index(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let rel = Relation::from_pairs(left.states().len(), right.states().len(), pairs)?;
        Ok((left, right, rel))
    }
}

fn build_map(src: &Machine, dst: &Machine, pairs: &[(String, String)]) -> Result<StateMap> {
    let pairs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    match (src, dst) {
        (Machine::Mealy(a), Machine::Mealy(b)) => StateMap::from_names(a, b, &pairs),
        (Machine::Sa(a), Machine::Sa(b)) => StateMap::from_names(a, b, &pairs),
        _ => Err(Error::Contract("map between machines of different kinds".into())),
    }
}

fn parse_section(header: &Line, body: &[Line]) -> Result<Section> {
    let h = &header.tokens;
    let n = header.number;
    match h[0] {
        "mealy" | "total-mealy" | "sa" => {
            if h.len() != 2 {
                return Err(perr(n, format!("expected `{} <name>`", h[0])));
            }
            let mut b = MachineBody::default();
            for l in body {
                let slot = match l.tokens[0] {
                    "inputs" => &mut b.inputs,
                    "outputs" => &mut b.outputs,
                    "states" => &mut b.states,
                    "trans" if h[0] != "sa" => {
                        b.trans.push(Line { number: l.number, tokens: l.tokens.clone() });
                        continue;
                    }
                    "itrans" | "otrans" if h[0] == "sa" => {
                        b.trans.push(Line { number: l.number, tokens: l.tokens.clone() });
                        continue;
                    }
                    other => {
                        return Err(perr(l.number, format!("unexpected `{other}` in `{}` section", h[0])))
                    }
                };
                if l.tokens.len() < 2 {
                    return Err(perr(l.number, format!("`{}` needs at least one name", l.tokens[0])));
                }
                if slot.replace((l.number, l.tokens[1..].to_vec())).is_some() {
                    return Err(perr(l.number, format!("`{}` declared twice", l.tokens[0])));
                }
            }
            let inputs = MachineBody::alphabet(&b.inputs, "inputs", n)?;
            let outputs = MachineBody::alphabet(&b.outputs, "outputs", n)?;
            let states = MachineBody::alphabet(&b.states, "states", n)?;
            if h[0] == "sa" {
                parse_sa(h[1], inputs, outputs, states, &b.trans, n)
            } else {
                parse_mealy(h[1], inputs, outputs, states, &b.trans, n, h[0] == "total-mealy")
            }
        }
        "map" => {
            if h.len() != 6 || h[2] != "from" || h[4] != "to" {
                return Err(perr(n, "expected `map <name> from <m1> to <m2>`"));
            }
            Ok(Section::Map(MapDecl {
                name: h[1].to_string(),
                from: h[3].to_string(),
                to: h[5].to_string(),
                pairs: parse_pairs(body)?,
            }))
        }
        "rel" => {
            let right = match h.len() {
                4 if h[2] == "on" => None,
                6 if h[2] == "on" && h[4] == "x" => Some(h[5].to_string()),
                _ => return Err(perr(n, "expected `rel <name> on <m1> [x <m2>]`")),
            };
            let pairs = parse_pairs(body)?;
            let mut seen = BTreeSet::new();
            for (l, p) in body.iter().zip(&pairs) {
                if !seen.insert(p) {
                    return Err(perr(l.number, "duplicate pair"));
                }
            }
            Ok(Section::Rel(RelDecl { name: h[1].to_string(), left: h[3].to_string(), right, pairs }))
        }
        _ => unreachable!("headers checked by the caller"),
    }
}

fn parse_pairs(body: &[Line]) -> Result<Vec<(String, String)>> {
    body.iter()
        .map(|l| match l.tokens.as_slice() {
            ["pair", a, b] => Ok((a.to_string(), b.to_string())),
            _ => Err(perr(l.number, "expected `pair <state> <state>`")),
        })
        .collect()
}

fn parse_mealy(
    name: &str,
    inputs: Alphabet,
    outputs: Alphabet,
    states: Alphabet,
    trans: &[Line],
    header: usize,
    total: bool,
) -> Result<Section> {
    let mut m = PartialMealy::new(name, inputs, outputs, states);
    for l in trans {
        let ["trans", src, i, o, dst] = l.tokens.as_slice() else {
            return Err(perr(l.number, "expected `trans <src> <in> <out> <dst>`"));
        };
        at(l.number, m.add_transition(src, i, o, dst))?;
    }
    if total {
        at(header, TotalMealy::try_from(m.clone()))?;
    }
    Ok(Section::Machine { machine: Machine::Mealy(m), total })
}

fn parse_sa(
    name: &str,
    inputs: Alphabet,
    outputs: Alphabet,
    states: Alphabet,
    trans: &[Line],
    header: usize,
) -> Result<Section> {
    let mut it = Vec::new();
    let mut ot = Vec::new();
    let mut seen = BTreeSet::new();
    for l in trans {
        let [kind, src, label, dst] = l.tokens.as_slice() else {
            return Err(perr(l.number, format!("expected `{} <src> <label> <dst>`", l.tokens[0])));
        };
        let (labels, list) = if *kind == "itrans" { (&inputs, &mut it) } else { (&outputs, &mut ot) };
        let st = |s: &str| states.index_of(s).ok_or_else(|| perr(l.number, format!("unknown state `{s}`")));
        let q = st(src)?;
        let a = labels.index_of(label).ok_or_else(|| perr(l.number, format!("unknown symbol `{label}`")))?;
        if !seen.insert((*kind, q, a)) {
            return Err(perr(l.number, format!("duplicate transition for `{src}` on `{label}`")));
        }
        list.push((q, a, st(dst)?));
    }
    let sa = at(header, SuspensionAutomaton::from_parts(name, inputs, outputs, states, &it, &ot))?;
    Ok(Section::Machine { machine: Machine::Sa(sa), total: false })
}

fn render_section(s: &Section) -> String {
    let mut out = String::new();
    match s {
        Section::Machine { machine: Machine::Mealy(m), total } => {
            let kind = if *total { "total-mealy" } else { "mealy" };
            out.push_str(&render_mealy_as(m, kind));
        }
        Section::Machine { machine: Machine::Sa(a), .. } => out.push_str(&render_sa(a)),
        Section::Map(m) => {
            let _ = writeln!(out, "map {} from {} to {}", m.name, m.from, m.to);
            for (a, b) in &m.pairs {
                let _ = writeln!(out, "pair {a} {b}");
            }
        }
        Section::Rel(r) => {
            match &r.right {
                Some(right) => {
                    let _ = writeln!(out, "rel {} on {} x {}", r.name, r.left, right);
                }
                None => {
                    let _ = writeln!(out, "rel {} on {}", r.name, r.left);
                }
            }
            for (a, b) in &r.pairs {
                let _ = writeln!(out, "pair {a} {b}");
            }
        }
    }
    out
}

fn header_lines(out: &mut String, inputs: &Alphabet, outputs: &Alphabet, states: &Alphabet) {
    let _ = writeln!(out, "inputs {}", inputs.names().join(" "));
    let _ = writeln!(out, "outputs {}", outputs.names().join(" "));
    let _ = writeln!(out, "states {}", states.names().join(" "));
}

fn render_mealy_as(m: &PartialMealy, kind: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{kind} {}", m.name());
    header_lines(&mut out, m.inputs(), m.outputs(), m.states());
    for (q, i, t) in m.transitions() {
        let _ = writeln!(
            out,
            "trans {} {} {} {}",
            m.states().name(q),
            m.inputs().name(i),
            m.outputs().name(t.output),
            m.states().name(t.target)
        );
    }
    out
}

/// A single `mealy` section.
pub fn render_mealy(m: &PartialMealy) -> String {
    render_mealy_as(m, "mealy")
}

/// A single `sa` section.
pub fn render_sa(a: &SuspensionAutomaton) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "sa {}", a.name());
    header_lines(&mut out, a.inputs(), a.outputs(), a.states());
    for (q, l, t) in a.input_transitions() {
        let _ = writeln!(out, "itrans {} {} {}", a.states().name(q), a.inputs().name(l), a.states().name(t));
    }
    for (q, l, t) in a.output_transitions() {
        let _ = writeln!(out, "otrans {} {} {}", a.states().name(q), a.outputs().name(l), a.states().name(t));
    }
    out
}

/// A `rel` section for `r`, named `name`, over machines with the given
/// state names.
pub fn render_relation(
    name: &str,
    left: (&str, &Alphabet),
    right: Option<(&str, &Alphabet)>,
    r: &Relation,
) -> String {
    let right_states = right.map_or(left.1, |(_, s)| s);
    let decl = RelDecl {
        name: name.to_string(),
        left: left.0.to_string(),
        right: right.map(|(n, _)| n.to_string()),
        pairs: r
            .pairs()
            .map(|(x, y)| (left.1.name(x).to_string(), right_states.name(y).to_string()))
            .collect(),
    };
    render_section(&Section::Rel(decl))
}

/// A `map` section for `h`.
pub fn render_map(name: &str, src: &Machine, dst: &Machine, h: &StateMap) -> String {
    let decl = MapDecl {
        name: name.to_string(),
        from: src.name().to_string(),
        to: dst.name().to_string(),
        pairs: h
            .mapping()
            .iter()
            .enumerate()
            .map(|(x, &y)| (src.states().name(x).to_string(), dst.states().name(y).to_string()))
            .collect(),
    };
    render_section(&Section::Map(decl))
}
