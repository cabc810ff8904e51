//! The `latfix` command line.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::autonet::{
    converse_construction, depends_on_digraph, feedback_original, interaction_graph, robert_original,
};
use crate::boolalg::{precarious_analysis, transpose};
use crate::config::Config;
use crate::dependency::{violation_witness, DepKind};
use crate::dynamics::{
    canonical_witness, is_asymptotically_nilpotent, nilpotency_index, par_set, pyr_set, Side,
};
use crate::error::{Error, GraphViolation, Result};
use crate::gallery::{gallery, Item, Params};
use crate::io::{
    any_map, certificate_to_doc, digraph_from_doc, digraph_to_doc, from_value, map_on, map_to_doc,
    network_from_doc, network_to_doc, seq_on, to_value, MapDoc, SeqDoc,
};
use crate::latmap::{digraph_to_graph, ClosureKind, LatMap};
use crate::lattice::{Descriptor, Lattice};
use crate::robert::{
    feedback_bound, feedback_bound_cba, robert_cba, robert_certify, sequence_certificate, Certificate,
};

#[derive(Parser, Debug)]
#[command(name = "latfix", version, about = "Exact fixed-point analysis on finite lattices")]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true, env = "LATFIX_CONFIG")]
    config: Option<PathBuf>,
    /// Seed for sampled start states.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Refuse lattices with more elements than this.
    #[arg(long, global = true)]
    max_lattice_size: Option<usize>,
    /// Refuse exhaustive sweeps above this many checks.
    #[arg(long, global = true)]
    max_triple_checks: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Add wall-clock time to reports (makes output nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Lattice descriptors.
    #[command(subcommand)]
    Lat(LatCmd),
    /// Self-maps of a lattice.
    #[command(subcommand)]
    Map(MapCmd),
    /// Dependency relations.
    #[command(subcommand)]
    Dep(DepCmd),
    /// Fixed-point certificates.
    #[command(subcommand)]
    Robert(RobertCmd),
    /// Bounds on the number of fixed points.
    #[command(subcommand)]
    Feedback(FeedbackCmd),
    /// Automata networks.
    #[command(subcommand)]
    Net(NetCmd),
    /// Emit a named instance.
    Gallery {
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Whether a graph on a Boolean lattice admits a dependent map with
    /// several fixed points.
    Precarious(Input),
}

#[derive(Args, Debug)]
struct Input {
    /// JSON input file; stdin when absent or `-`.
    input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum LatCmd {
    Check(Input),
    Classify(Input),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ClosureArg {
    Reflexive,
    Transitive,
    ReflexiveTransitive,
}

#[derive(Subcommand, Debug)]
enum MapCmd {
    Analyze(Input),
    Residual(Input),
    Transpose(Input),
    Closure {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "reflexive-transitive")]
        kind: ClosureArg,
    },
}

#[derive(Subcommand, Debug)]
enum DepCmd {
    Check {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        kind: DepKind,
        /// The map depended on.
        #[arg(long)]
        rho: PathBuf,
    },
}

#[derive(Args, Debug)]
struct WitnessArgs {
    #[arg(long, default_value = "pre-meet")]
    kind: DepKind,
    /// Defaults to `φ⁺` when `φ` is a co-graph.
    #[arg(long)]
    rho: Option<PathBuf>,
    /// Sequence document; defaults to the canonical witness of `ρ`.
    #[arg(long)]
    seq: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum RobertCmd {
    Certify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        w: WitnessArgs,
    },
    Cba {
        #[command(flatten)]
        input: Input,
        /// Graph document `f`.
        #[arg(long)]
        graph: PathBuf,
    },
    Sequence {
        #[command(flatten)]
        input: Input,
        /// Comma-separated element ids `a_0, .., a_K`.
        #[arg(long, value_delimiter = ',', required = true)]
        steps: Vec<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum FeedbackCmd {
    Lattice {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        w: WitnessArgs,
    },
    Cba {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        graph: PathBuf,
        /// Fixed-point-free set `t` (element id).
        #[arg(long)]
        t: usize,
    },
    Network {
        #[command(flatten)]
        input: Input,
        /// Comma-separated feedback vertices.
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum NetCmd {
    Ig(Input),
    Depends {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        digraph: PathBuf,
    },
    Robert(Input),
    Converse(Input),
}

fn read_text(path: Option<&Path>) -> Result<String> {
    let mut s = String::new();
    match path {
        None => {
            std::io::stdin().read_to_string(&mut s)?;
        }
        Some(p) if p == Path::new("-") => {
            std::io::stdin().read_to_string(&mut s)?;
        }
        Some(p) => s = std::fs::read_to_string(p)?,
    }
    Ok(s)
}

fn read_value(path: Option<&Path>) -> Result<Value> {
    Ok(serde_json::from_str(&read_text(path)?)?)
}

fn load_config(cli: &Cli) -> Result<Config> {
    let mut cfg = match &cli.config {
        Some(p) => Config::from_toml(&std::fs::read_to_string(p)?)?,
        None => Config::default(),
    };
    if let Some(s) = cli.seed {
        cfg.rng_seed = s;
    }
    if let Some(m) = cli.max_lattice_size {
        cfg.max_lattice_size = m;
    }
    if let Some(m) = cli.max_triple_checks {
        cfg.max_triple_checks = m;
    }
    if cli.output.is_some() {
        cfg.output_path = cli.output.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Outcome of a command: the report and whether the checked property held.
struct Outcome {
    report: Value,
    holds: bool,
}

impl Outcome {
    fn ok(report: Value) -> Outcome {
        Outcome { report, holds: true }
    }
}

fn versioned(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("version".into(), Value::from(crate::config::FORMAT_VERSION));
    }
    v
}

fn map_arg(input: &Input, cfg: &Config) -> Result<LatMap> {
    any_map(read_value(input.input.as_deref())?, cfg)
}

fn map_file_on(path: &Path, lat: &Arc<Lattice>, cfg: &Config) -> Result<LatMap> {
    let v = read_value(Some(path))?;
    if v.as_object().is_some_and(|m| m.contains_key("alphabets")) {
        let g = any_map(v, cfg)?;
        if g.lattice() != lat {
            return Err(Error::LatticeMismatch);
        }
        return LatMap::new(lat, g.table().to_vec());
    }
    map_on(&from_value::<MapDoc>(v)?, lat, cfg)
}

/// A graph given as a map document or as a digraph document.
fn graph_arg(v: Value, cfg: &Config) -> Result<LatMap> {
    if v.as_object().is_some_and(|m| m.contains_key("arcs")) {
        digraph_to_graph(&digraph_from_doc(&from_value(v)?)?)
    } else {
        any_map(v, cfg)
    }
}

fn cert_report(c: &Certificate, lat: &Lattice) -> Result<Value> {
    to_value(&certificate_to_doc(c, lat))
}

/// `ρ` and `A` for the lattice-level commands.
fn witness_for(
    phi: &LatMap,
    w: &WitnessArgs,
    cfg: &Config,
) -> Result<(LatMap, crate::dynamics::ESeq)> {
    let lat = phi.lattice();
    let rho = match &w.rho {
        Some(p) => map_file_on(p, lat, cfg)?,
        None if phi.is_cograph() && w.kind == DepKind::PreMeet => phi.residuated(),
        None => {
            return Err(Error::InvalidInput(
                "--rho is required unless φ is a co-graph and the kind is pre-meet".into(),
            ))
        }
    };
    let a = match &w.seq {
        Some(p) => seq_on(&from_value::<SeqDoc>(read_value(Some(p))?)?, lat, cfg)?,
        None => canonical_witness(w.kind, &rho)?,
    };
    Ok((rho, a))
}

fn side_value(x: Option<usize>) -> Value {
    x.map_or(Value::Null, Value::from)
}

fn analyze(phi: &LatMap) -> Value {
    let l = phi.lattice();
    let graph = phi.graph_violation();
    let fpf = if graph.is_none() { phi.is_fixed_point_free().ok() } else { None };
    json!({
        "lattice": l.descriptor(),
        "monotone": phi.is_monotone(),
        "graph": graph.is_none(),
        "graph_witness": graph.map(|g| match g {
            GraphViolation::Bottom(v) => json!({"bottom_image": v}),
            GraphViolation::Pair(x, y) => json!({"pair": [x, y]}),
        }),
        "cograph": phi.is_cograph(),
        "fixed_points": phi.fixed_points().to_vec(),
        "par": par_set(phi).to_vec(),
        "pyr": pyr_set(phi).to_vec(),
        "fixed_point_free": fpf,
        "meet_nilpotency": side_value(nilpotency_index(phi, Side::Meet)),
        "join_nilpotency": side_value(nilpotency_index(phi, Side::Join)),
        "asymptotically_meet_nilpotent": is_asymptotically_nilpotent(phi, Side::Meet),
        "asymptotically_join_nilpotent": is_asymptotically_nilpotent(phi, Side::Join),
    })
}

fn execute(cli: &Cli, cfg: &Config) -> Result<Outcome> {
    Ok(match &cli.cmd {
        Cmd::Lat(LatCmd::Check(i)) | Cmd::Lat(LatCmd::Classify(i)) => {
            let d: Descriptor = from_value(read_value(i.input.as_deref())?)?;
            let l = Lattice::from_descriptor(&d, cfg.max_lattice_size)?;
            let mut r = json!({
                "valid": true,
                "size": l.size(),
                "bottom": l.bottom(),
                "top": l.top(),
            });
            if matches!(cli.cmd, Cmd::Lat(LatCmd::Classify(_))) {
                r["flags"] = serde_json::to_value(l.classify())?;
                r["acc"] = Value::Bool(true);
                r["dcc"] = Value::Bool(true);
            }
            Outcome::ok(versioned(r))
        }
        Cmd::Map(MapCmd::Analyze(i)) => Outcome::ok(versioned(analyze(&map_arg(i, cfg)?))),
        Cmd::Map(MapCmd::Residual(i)) => {
            let f = map_arg(i, cfg)?;
            f.require_graph()?;
            Outcome::ok(to_value(&map_to_doc(&f.residual()))?)
        }
        Cmd::Map(MapCmd::Transpose(i)) => {
            Outcome::ok(to_value(&map_to_doc(&transpose(&map_arg(i, cfg)?)?))?)
        }
        Cmd::Map(MapCmd::Closure { input, kind }) => {
            let k = match kind {
                ClosureArg::Reflexive => ClosureKind::Reflexive,
                ClosureArg::Transitive => ClosureKind::Transitive,
                ClosureArg::ReflexiveTransitive => ClosureKind::ReflexiveTransitive,
            };
            Outcome::ok(to_value(&map_to_doc(&map_arg(input, cfg)?.closure(k)?))?)
        }
        Cmd::Dep(DepCmd::Check { input, kind, rho }) => {
            let phi = map_arg(input, cfg)?;
            let rho = map_file_on(rho, phi.lattice(), cfg)?;
            let w = violation_witness(*kind, &phi, &rho, cfg)?;
            Outcome {
                report: versioned(json!({
                    "kind": kind.as_str(),
                    "depends": w.is_none(),
                    "witness": w.map(|(x, y, s)| json!({"x": x, "y": y, "s": s})),
                })),
                holds: w.is_none(),
            }
        }
        Cmd::Robert(RobertCmd::Certify { input, w }) => {
            let phi = map_arg(input, cfg)?;
            let (rho, a) = witness_for(&phi, w, cfg)?;
            let c = robert_certify(&phi, w.kind, &rho, &a, cfg)?;
            Outcome::ok(cert_report(&c, phi.lattice())?)
        }
        Cmd::Robert(RobertCmd::Cba { input, graph }) => {
            let phi = map_arg(input, cfg)?;
            let f = graph_arg(read_value(Some(graph))?, cfg)?;
            let c = robert_cba(&phi, &f, cfg)?;
            Outcome::ok(cert_report(&c, phi.lattice())?)
        }
        Cmd::Robert(RobertCmd::Sequence { input, steps }) => {
            let phi = map_arg(input, cfg)?;
            let c = sequence_certificate(&phi, steps, cfg)?;
            Outcome::ok(cert_report(&c, phi.lattice())?)
        }
        Cmd::Feedback(FeedbackCmd::Lattice { input, w }) => {
            let phi = map_arg(input, cfg)?;
            let (rho, a) = witness_for(&phi, w, cfg)?;
            let r = feedback_bound(&phi, w.kind, &rho, &a, cfg)?;
            Outcome::ok(versioned(json!({"bound": r.bound, "fixed": r.fixed, "seed": a.get(0)})))
        }
        Cmd::Feedback(FeedbackCmd::Cba { input, graph, t }) => {
            let phi = map_arg(input, cfg)?;
            let f = graph_arg(read_value(Some(graph))?, cfg)?;
            let r = feedback_bound_cba(&phi, &f, *t, cfg)?;
            Outcome::ok(versioned(json!({"bound": r.bound, "fixed": r.fixed})))
        }
        Cmd::Feedback(FeedbackCmd::Network { input, set }) => {
            let net = network_from_doc(&from_value(read_value(input.input.as_deref())?)?, cfg)?;
            if let Some(&v) = set.iter().find(|&&v| v >= net.n()) {
                return Err(Error::InvalidInput(format!("vertex {v} out of range")));
            }
            let mask = set.iter().fold(0usize, |m, &v| m | 1 << v);
            let r = feedback_original(&net, mask, cfg)?;
            let fixed: Vec<Vec<usize>> = r.fixed.iter().map(|&x| net.state(x)).collect();
            Outcome::ok(versioned(json!({"bound": r.bound, "fixed": fixed, "set": set})))
        }
        Cmd::Net(NetCmd::Ig(i)) => {
            let net = network_from_doc(&from_value(read_value(i.input.as_deref())?)?, cfg)?;
            Outcome::ok(to_value(&digraph_to_doc(&interaction_graph(&net, cfg)?))?)
        }
        Cmd::Net(NetCmd::Depends { input, digraph }) => {
            let net = network_from_doc(&from_value(read_value(input.input.as_deref())?)?, cfg)?;
            let d = digraph_from_doc(&from_value(read_value(Some(digraph))?)?)?;
            let ig = interaction_graph(&net, cfg)?;
            let holds = depends_on_digraph(&net, &d, cfg)?;
            let missing: Vec<(usize, usize)> =
                ig.arcs().iter().copied().filter(|&(u, v)| !d.has_arc(u, v)).collect();
            Outcome {
                report: versioned(json!({"depends": holds, "missing_arcs": missing})),
                holds,
            }
        }
        Cmd::Net(NetCmd::Robert(i)) => {
            let net = network_from_doc(&from_value(read_value(i.input.as_deref())?)?, cfg)?;
            let c = robert_original(&net, cfg)?;
            Outcome::ok(cert_report(&c, net.product())?)
        }
        Cmd::Net(NetCmd::Converse(i)) => {
            let v = read_value(i.input.as_deref())?;
            let raw = v.as_object().is_some_and(|m| {
                m.contains_key("table") && !m.contains_key("lattice")
            });
            let table: Vec<usize> = if raw {
                serde_json::from_value(v["table"].clone())?
            } else {
                any_map(v, cfg)?.table().to_vec()
            };
            let c = converse_construction(&table, cfg)?;
            Outcome::ok(versioned(json!({
                "order": c.order.seq(),
                "K": c.k,
                "e": c.e,
                "construction": c.construction,
                "lattice": c.lattice.descriptor(),
                "f": c.f.table(),
            })))
        }
        Cmd::Gallery { name, n, q, depth } => {
            let item = gallery(name, Params { n: *n, q: *q, depth: *depth }, cfg)?;
            Outcome::ok(match item {
                Item::Lattice(l) => to_value(&l.descriptor())?,
                Item::Digraph(d) => to_value(&digraph_to_doc(&d))?,
                Item::Network(net) => to_value(&network_to_doc(&net))?,
            })
        }
        Cmd::Precarious(i) => {
            let f = graph_arg(read_value(i.input.as_deref())?, cfg)?;
            let p = precarious_analysis(&f, cfg)?;
            Outcome {
                report: versioned(json!({
                    "precarious": !p.fpf,
                    "hypodox": p.hypodox.as_ref().map(|h| h.table().to_vec()),
                    "hypodox_fixed_points": p.hypodox.as_ref().map(|h| h.fixed_points().to_vec()),
                })),
                holds: p.fpf,
            }
        }
    })
}

/// Structured witness for errors that carry one.
fn error_report(e: &Error) -> Value {
    let witness = match e {
        Error::DependencyFails { witness: (x, y, s) } => json!({"x": x, "y": y, "s": s}),
        Error::NotAcyclic { cycle } | Error::NotAnFvs { cycle } => json!({"cycle": cycle}),
        Error::StepViolation { step, x, y } => json!({"step": step, "x": x, "y": y}),
        Error::TransposeNotNilpotent { hypodox, fixed } => {
            json!({"hypodox": hypodox, "fixed_points": fixed})
        }
        Error::NotFixedPointFree { witness } => json!({"fixed_point": witness}),
        Error::PeriodicTail { cycle } => json!({"cycle": cycle}),
        Error::NotFpfSet { t } => json!({"t": t}),
        Error::BoundaryViolation { found, expected } => json!({"found": found, "expected": expected}),
        Error::ChainViolation { index } => json!({"index": index}),
        Error::NotAGraph(GraphViolation::Bottom(v)) => json!({"bottom_image": v}),
        Error::NotAGraph(GraphViolation::Pair(x, y)) => json!({"pair": [x, y]}),
        Error::NotAPoset { u, v } => json!({"u": u, "v": v}),
        Error::NotALattice { a, b, .. } => json!({"pair": [a, b]}),
        _ => Value::Null,
    };
    versioned(json!({"error": e.to_string(), "exit_code": e.exit_code(), "witness": witness}))
}

fn write_out(cli: &Cli, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    match &cli.output {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let result = load_config(&cli).and_then(|cfg| execute(&cli, &cfg));
    let elapsed = start.elapsed();
    let (mut report, code) = match result {
        Ok(o) => (o.report, if o.holds { 0 } else { 1 }),
        Err(e) => {
            eprintln!("latfix: {e}");
            (error_report(&e), e.exit_code())
        }
    };
    if cli.timing {
        if let Value::Object(m) = &mut report {
            m.insert("timing_ms".into(), json!(elapsed.as_secs_f64() * 1e3));
        }
    }
    if let Err(e) = write_out(&cli, &report) {
        eprintln!("latfix: {e}");
        return e.exit_code();
    }
    code
}
