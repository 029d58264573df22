//! Command-line front end.
//!
//! Every command prints a line-oriented report whose first token is stable.
//! Exit codes: 0 when the relation holds or the check passes, 1 when it is
//! refuted (with a witness), 2 on usage, parse or input errors.
//!
//! States are addressed as `<machine>:<state>`. When two addresses name
//! different machines, their disjoint union is formed and its states are
//! called `<machine>.<state>`.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bisim::{apartness_witness, bisimilarity, ioco_compatibility, uncertain_bisimilarity};
use crate::error::{Error, Result};
use crate::format::{render_mealy, render_relation, render_sa, Document};
use crate::learning::{tree_apartness_frontier, ObservationTree, Teacher};
use crate::morphisms::{check_morphism, lax_identify, restrict_along, Identification, MorphismKind};
use crate::simulation::{
    check_simulation, joint_simulator, sa_joint_simulator, synthesize_simulation_structure, JointOutcome,
    SpanStyle,
};
use crate::systems::{
    disjoint_union_all, sa_disjoint_union_all, Machine, PartialMealy, SuspensionAutomaton, TotalMealy,
};

#[derive(Parser, Debug)]
#[command(
    name = "apartness",
    version,
    about = "Apartness, uncertain bisimilarity and lax morphisms for partial machines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CheckKind {
    Uncertain,
    Bisimilar,
    Ioco,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum KindArg {
    Strict,
    Lax,
    Oplax,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum StyleArg {
    Hj,
    Openmap,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a relation between two states.
    Check { relation: CheckKind, file: String, left: String, right: String },
    /// Print a shortest separating word, if any.
    Witness { file: String, left: String, right: String },
    /// Print the bisimilarity relation of a Mealy machine.
    Bisim { file: String, machine: String },
    /// Print the greatest ioco compatibility relation of a suspension automaton.
    IocoCompat { file: String, machine: String },
    /// Check a declared map.
    Morphism {
        file: String,
        map: String,
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Try to identify two states by a lax morphism.
    Identify { file: String, left: String, right: String },
    /// Emit a machine with a state simulating both states.
    Join { file: String, left: String, right: String },
    /// Restrict the source of an oplax map so that it becomes strict.
    Restrict { file: String, map: String },
    /// Check a declared relation as a simulation.
    Simulate {
        file: String,
        relation: String,
        #[arg(long, value_enum)]
        style: StyleArg,
    },
    /// Query a hidden machine and print the resulting observation tree.
    LearnDemo {
        /// `<file>:<machine>`
        #[arg(long)]
        hidden: String,
        /// Comma-separated words with `.` between symbols.
        #[arg(long)]
        queries: String,
        /// Initial state (default: the first declared state).
        #[arg(long)]
        initial: Option<String>,
    },
}

/// Runs the tool on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let mut report = Vec::new();
    match execute(cli.command, &mut report) {
        Ok(code) => {
            for line in report {
                let _ = writeln!(out, "{line}");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn load(path: &str) -> Result<Document> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Contract(format!("cannot read `{path}`: {e}")))?;
    Document::parse(&text)
}

fn split_address(addr: &str) -> Result<(&str, &str)> {
    addr.split_once(':').ok_or_else(|| Error::Contract(format!("expected `<machine>:<state>`, got `{addr}`")))
}

/// Two states living in one system (a union if they come from two).
enum Pair {
    Mealy(PartialMealy, usize, usize),
    Sa(SuspensionAutomaton, usize, usize),
}

fn resolve_pair(doc: &Document, left: &str, right: &str) -> Result<Pair> {
    let (ma, sa) = split_address(left)?;
    let (mb, sb) = split_address(right)?;
    let get =
        |name: &str| doc.machine(name).ok_or_else(|| Error::Contract(format!("no machine named `{name}`")));
    let (a, b) = (get(ma)?, get(mb)?);
    let (xa, xb) = (a.state_index(sa)?, b.state_index(sb)?);
    match (a, b) {
        (Machine::Mealy(m), Machine::Mealy(_)) if ma == mb => Ok(Pair::Mealy(m.clone(), xa, xb)),
        (Machine::Sa(m), Machine::Sa(_)) if ma == mb => Ok(Pair::Sa(m.clone(), xa, xb)),
        (Machine::Mealy(m), Machine::Mealy(n)) => {
            let (u, ren) = disjoint_union_all(&[m, n])?;
            Ok(Pair::Mealy(u, ren.renames[0][xa], ren.renames[1][xb]))
        }
        (Machine::Sa(m), Machine::Sa(n)) => {
            let (u, ren) = sa_disjoint_union_all(&[m, n])?;
            Ok(Pair::Sa(u, ren.renames[0][xa], ren.renames[1][xb]))
        }
        _ => Err(Error::Contract("the two states belong to systems of different kinds".into())),
    }
}

fn lines(text: &str) -> impl Iterator<Item = String> + '_ {
    text.lines().map(str::to_string)
}

fn apart_line(m: &PartialMealy, x: usize, y: usize) -> Result<Option<String>> {
    Ok(apartness_witness(m, x, y)?.map(|w| format!("APART {}", w.display(m))))
}

fn execute(cmd: Command, out: &mut Vec<String>) -> Result<i32> {
    match cmd {
        Command::Check { relation, file, left, right } => {
            let doc = load(&file)?;
            match (relation, resolve_pair(&doc, &left, &right)?) {
                (CheckKind::Uncertain, Pair::Mealy(m, x, y)) => match apart_line(&m, x, y)? {
                    Some(l) => {
                        out.push(l);
                        Ok(1)
                    }
                    None => {
                        out.push("UNCERTAIN-BISIMILAR".into());
                        Ok(0)
                    }
                },
                (CheckKind::Bisimilar, Pair::Mealy(m, x, y)) => {
                    let holds = bisimilarity(&m).contains(x, y);
                    out.push(if holds { "BISIMILAR" } else { "NOT-BISIMILAR" }.into());
                    Ok(if holds { 0 } else { 1 })
                }
                (CheckKind::Ioco, Pair::Sa(a, x, y)) => {
                    let holds = ioco_compatibility(&a).contains(x, y);
                    out.push(if holds { "IOCO-COMPATIBLE" } else { "NOT-IOCO-COMPATIBLE" }.into());
                    Ok(if holds { 0 } else { 1 })
                }
                (CheckKind::Ioco, _) => {
                    Err(Error::Contract("ioco compatibility needs suspension automata".into()))
                }
                _ => Err(Error::Contract("this relation needs Mealy machines".into())),
            }
        }
        Command::Witness { file, left, right } => {
            let doc = load(&file)?;
            let Pair::Mealy(m, x, y) = resolve_pair(&doc, &left, &right)? else {
                return Err(Error::Contract("witnesses need Mealy machines".into()));
            };
            match apart_line(&m, x, y)? {
                Some(l) => {
                    out.push(l);
                    Ok(1)
                }
                None => {
                    out.push("UNCERTAIN-BISIMILAR".into());
                    Ok(0)
                }
            }
        }
        Command::Bisim { file, machine } => {
            let doc = load(&file)?;
            let m = mealy_named(&doc, &machine)?;
            let r = bisimilarity(m);
            out.push("BISIMILARITY".into());
            out.extend(lines(&render_relation("bisimilarity", (m.name(), m.states()), None, &r)));
            Ok(0)
        }
        Command::IocoCompat { file, machine } => {
            let doc = load(&file)?;
            let a = doc
                .machine(&machine)
                .and_then(Machine::as_sa)
                .ok_or_else(|| Error::Contract(format!("no suspension automaton named `{machine}`")))?;
            let r = ioco_compatibility(a);
            out.push("IOCO-COMPATIBILITY".into());
            out.extend(lines(&render_relation("ioco_compat", (a.name(), a.states()), None, &r)));
            Ok(0)
        }
        Command::Morphism { file, map, kind } => {
            let doc = load(&file)?;
            let (src, dst, h) = doc.resolve_map(&map)?;
            let kind = match kind {
                KindArg::Strict => MorphismKind::Strict,
                KindArg::Lax => MorphismKind::Lax,
                KindArg::Oplax => MorphismKind::Oplax,
            };
            let (report, describe): (_, Box<dyn Fn(&crate::morphisms::Violation) -> String>) =
                match (src, dst) {
                    (Machine::Mealy(a), Machine::Mealy(b)) => {
                        (check_morphism(a, b, &h, kind)?, Box::new(move |v| v.describe(a)))
                    }
                    (Machine::Sa(a), Machine::Sa(b)) => {
                        (check_morphism(a, b, &h, kind)?, Box::new(move |v| v.describe(a)))
                    }
                    _ => return Err(Error::Contract("map between systems of different kinds".into())),
                };
            if report.is_ok() {
                out.push(format!("MORPHISM-OK {kind}"));
                Ok(0)
            } else {
                out.push(format!("NOT-MORPHISM {kind}"));
                out.extend(report.violations.iter().map(|v| format!("violation {}", describe(v))));
                Ok(1)
            }
        }
        Command::Identify { file, left, right } => {
            let doc = load(&file)?;
            let Pair::Mealy(m, x, y) = resolve_pair(&doc, &left, &right)? else {
                return Err(Error::Unsupported("identification is only available for Mealy machines".into()));
            };
            let res = lax_identify(&m, x, y)?;
            match &res {
                Identification::Conflict { .. } => {
                    out.push("CONFLICT".into());
                    out.extend(res.report_lines(&m));
                    Ok(1)
                }
                Identification::Quotient { quotient, .. } => {
                    out.push("QUOTIENT".into());
                    out.extend(res.report_lines(&m));
                    out.push(String::new());
                    out.extend(lines(&render_mealy(quotient)));
                    Ok(0)
                }
            }
        }
        Command::Join { file, left, right } => {
            let doc = load(&file)?;
            match resolve_pair(&doc, &left, &right)? {
                Pair::Mealy(m, x, y) => match joint_simulator(&m, x, y)? {
                    JointOutcome::Joint(j) => {
                        out.push(format!("JOIN {}", j.machine.states().name(j.start)));
                        out.push(String::new());
                        out.extend(lines(&render_mealy(&j.machine)));
                        Ok(0)
                    }
                    JointOutcome::Apart(w) => {
                        out.push(format!("APART {}", w.display(&m)));
                        Ok(1)
                    }
                },
                Pair::Sa(a, x, y) => match sa_joint_simulator(&a, x, y)? {
                    Some(j) => {
                        out.push(format!("JOIN {}", j.automaton.states().name(j.start)));
                        out.push(String::new());
                        out.extend(lines(&render_sa(&j.automaton)));
                        Ok(0)
                    }
                    None => {
                        out.push("NOT-IOCO-COMPATIBLE".into());
                        Ok(1)
                    }
                },
            }
        }
        Command::Restrict { file, map } => {
            let doc = load(&file)?;
            let (src, dst, h) = doc.resolve_map(&map)?;
            let (Machine::Mealy(a), Machine::Mealy(b)) = (src, dst) else {
                return Err(Error::Unsupported("restriction is only available for Mealy machines".into()));
            };
            let report = check_morphism(a, b, &h, MorphismKind::Oplax)?;
            if !report.is_ok() {
                out.push("NOT-OPLAX".into());
                out.extend(report.violations.iter().map(|v| format!("violation {}", v.describe(a))));
                return Ok(1);
            }
            let r = restrict_along(a, b, &h)?;
            out.push("RESTRICTED".into());
            out.push(String::new());
            out.extend(lines(&render_mealy(&r)));
            Ok(0)
        }
        Command::Simulate { file, relation, style } => {
            let doc = load(&file)?;
            let (src, dst, r) = doc.resolve_relation(&relation)?;
            let (style, name) = match style {
                StyleArg::Hj => (SpanStyle::HughesJacobs, "hj"),
                StyleArg::Openmap => (SpanStyle::OpenMap, "openmap"),
            };
            let holds = check_simulation(&r, src, dst, style)?;
            let verified = match synthesize_simulation_structure(&r, src, dst, style)? {
                Some(w) => w.verify(src, dst)?,
                None => false,
            };
            if holds != verified {
                return Err(Error::Contract("relational and span checks disagree".into()));
            }
            out.push(if holds { format!("SIMULATION {name}") } else { format!("NOT-SIMULATION {name}") });
            Ok(if holds { 0 } else { 1 })
        }
        Command::LearnDemo { hidden, queries, initial } => {
            let (path, name) = hidden
                .rsplit_once(':')
                .ok_or_else(|| Error::Contract("expected `--hidden <file>:<machine>`".into()))?;
            let doc = load(path)?;
            let m = mealy_named(&doc, name)?;
            let sink = m
                .outputs()
                .names()
                .first()
                .ok_or_else(|| Error::Contract("hidden machine has no outputs".into()))?;
            let total = TotalMealy::totalize(m, sink)?;
            let init = match initial {
                Some(s) => s,
                None => m
                    .states()
                    .names()
                    .first()
                    .cloned()
                    .ok_or_else(|| Error::Contract("hidden machine has no states".into()))?,
            };
            let mut teacher = Teacher::new(total, &init)?;
            let mut tree = ObservationTree::new("tree", m.inputs().clone(), m.outputs().clone());
            for q in queries.split(',').filter(|q| !q.is_empty()) {
                let symbols: Vec<&str> = q.split('.').collect();
                let word = m.word(&symbols)?;
                tree.query(&mut teacher, &word)?;
            }
            let frontier = tree_apartness_frontier(&tree);
            out.push(format!("LEARN queries={} states={}", teacher.query_count(), tree.state_count()));
            out.push(String::new());
            out.extend(lines(&render_mealy(tree.machine())));
            out.push(String::new());
            let t = tree.machine();
            out.extend(lines(&render_relation("frontier", (t.name(), t.states()), None, &frontier)));
            Ok(0)
        }
    }
}

fn mealy_named<'d>(doc: &'d Document, name: &str) -> Result<&'d PartialMealy> {
    doc.machine(name)
        .and_then(Machine::as_mealy)
        .ok_or_else(|| Error::Contract(format!("no Mealy machine named `{name}`")))
}

/// Pairs in the uncertain bisimilarity of `m`, rendered as a relation
/// section. Used by the examples.
pub fn render_uncertain_bisimilarity(m: &PartialMealy) -> String {
    render_relation("uncertain", (m.name(), m.states()), None, &uncertain_bisimilarity(m))
}
