//! Command-line front end: build graphs, run single rendezvous or
//! treasure-hunt simulations, and drive the batch lower-bound experiments
//! with reproducible configs and machine-readable output.
//!
//! Exit codes: 0 success, 2 invalid input, 3 runtime violation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use rdv_core::advice::{
    decode_ports, rendezvous_oracle, treasure_oracle, AdviceString, BitString, RendezvousAdvice,
};
use rdv_core::behavior::{
    fast_rendezvous_behavior, greedy_gate_seeker, idle_behavior, replay_ports_behavior,
    scripted_ring_behavior,
};
use rdv_core::graph::{
    attach_path, build_clique_chain, build_oriented_ring, join_copies_at, shortest_path_ports,
    CliqueChainSpec, CliqueEdge, DesignatedNodes, GraphError, NodeId, PortGraph,
};
use rdv_core::lab::{
    base3_symbols, counting_bounds, enumerate_family, family_size, pigeonhole_buckets,
    ring_collision_experiment, verify_tau_injectivity, BucketReport, CountingBounds, LabError,
    RingCollisionReport, TauInjectivityReport,
};
use rdv_core::sim::{
    default_horizon, run_rendezvous, run_treasure_hunt, AgentConfig, Behavior, SimError, SimResult,
};
use rdv_core::Label;

#[derive(Debug)]
enum CliError {
    Invalid(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<rdv_core::advice::AdviceError> for CliError {
    fn from(e: rdv_core::advice::AdviceError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::ProtocolViolation { .. } => CliError::Runtime(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        match e {
            LabError::Sim(sim) => sim.into(),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "rdv", version, about = "Rendezvous-with-advice toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a graph and emit its JSON form.
    Build {
        #[command(subcommand)]
        what: BuildWhat,
    },
    /// Simulate two-agent rendezvous.
    Rendezvous(RendezvousArgs),
    /// Simulate a single-agent treasure hunt.
    Treasure(TreasureArgs),
    /// Exhaustive clique-chain experiments and counting bounds.
    Lowerbound(LowerboundArgs),
    /// Oriented-ring meta-behaviour collision experiment.
    RingExperiment(RingArgs),
}

#[derive(Subcommand)]
enum BuildWhat {
    /// Oriented ring: port 0 clockwise, port 1 counterclockwise.
    Ring {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chain of edge-colored cliques with subdividing gates.
    CliqueChain {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ell: usize,
        /// Subdivided edge per clique, e.g. "2-3,4-5"; defaults to 2-3 in
        /// every clique.
        #[arg(long)]
        edges: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Append a path of fresh nodes at a node of an existing graph.
    AttachPath {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        at: usize,
        #[arg(long)]
        extra: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two disjoint copies of a graph joined by an edge at a node (the
    /// second copy of node v gets id v + n).
    JoinCopies {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        at: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
struct RendezvousArgs {
    /// JSON config file; explicit flags override its fields.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Graph JSON file.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Oriented ring size.
    #[arg(long)]
    n: Option<usize>,
    /// Clique size of a clique chain (with --ell).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    /// Subdivided edges of the clique chain, e.g. "2-3,4-5".
    #[arg(long)]
    edges: Option<String>,
    /// Start nodes "u,v"; defaults to 0,n/2 on rings and start,treasure on
    /// chains.
    #[arg(long)]
    starts: Option<String>,
    /// Agent labels "l1,l2" (default 1,2).
    #[arg(long)]
    labels: Option<String>,
    /// Wake rounds "w1,w2" (default 0,0).
    #[arg(long)]
    wake: Option<String>,
    /// "oracle", "none", or an explicit advice bit string.
    #[arg(long)]
    advice: Option<String>,
    /// Behavior pair "b1,b2" from fast-rendezvous | replay | gate-seeker |
    /// idle (default fast-rendezvous,fast-rendezvous).
    #[arg(long)]
    behaviors: Option<String>,
    /// Round budget (default 10*(n+1)).
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
struct TreasureArgs {
    /// JSON config file; explicit flags override its fields.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    edges: Option<String>,
    /// Agent start node; defaults to 0 on rings, the chain start on chains.
    #[arg(long)]
    start: Option<usize>,
    /// Treasure node; defaults to n/2 on rings, the chain treasure on
    /// chains.
    #[arg(long)]
    treasure: Option<usize>,
    #[arg(long)]
    label: Option<Label>,
    /// "oracle", "none", or an explicit advice bit string.
    #[arg(long)]
    advice: Option<String>,
    /// replay (default) or gate-seeker.
    #[arg(long)]
    behavior: Option<String>,
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
struct LowerboundArgs {
    /// JSON config file; explicit flags override its fields.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    /// Advice bits per distance unit; the budget is 2*ell*z bits.
    #[arg(long)]
    z: Option<u32>,
    /// zero | spec-index | random.
    #[arg(long)]
    advice_mode: Option<String>,
    /// Number of randomized advice functions (advice-mode random).
    #[arg(long)]
    runs: Option<u32>,
    /// RNG seed; required for advice-mode random.
    #[arg(long)]
    seed: Option<u64>,
    /// Only evaluate the counting formulas for horizon T, no enumeration.
    #[arg(long)]
    counting_only: Option<bool>,
    /// Horizon T for the counting formulas (counting-only mode).
    #[arg(long)]
    horizon_t: Option<u64>,
    /// json (default) or csv.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
struct RingArgs {
    /// JSON config file; explicit flags override its fields.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Block size D'; the ring has 6*D' nodes.
    #[arg(long)]
    dprime: Option<usize>,
    /// Number of time segments d; the horizon is d*D' rounds.
    #[arg(long)]
    segments: Option<usize>,
    /// Label count L; labels 1..=L drive distinct scripted behaviors.
    #[arg(long)]
    labels: Option<u64>,
    /// Comma-separated advice bit strings (default one string "0").
    #[arg(long)]
    advice: Option<String>,
    /// json (default) or csv.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(e.code());
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Build { what } => cmd_build(what),
        Command::Rendezvous(args) => cmd_rendezvous(merge(args)?),
        Command::Treasure(args) => cmd_treasure(merge_treasure(args)?),
        Command::Lowerbound(args) => cmd_lowerbound(merge_lowerbound(args)?),
        Command::RingExperiment(args) => cmd_ring(merge_ring(args)?),
    }
}

// ---------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn load_config<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read_file(path)?)
        .map_err(|e| CliError::Invalid(format!("bad config {}: {e}", path.display())))
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        None => {
            println!("{content}");
            Ok(())
        }
        Some(path) => std::fs::write(path, format!("{content}\n"))
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))),
    }
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports always serialize")
}

fn parse_pair<T: std::str::FromStr>(s: &str, what: &str) -> Result<(T, T), CliError> {
    let err = || {
        CliError::Invalid(format!(
            "{what} must be two comma-separated values, got {s:?}"
        ))
    };
    let (a, b) = s.split_once(',').ok_or_else(err)?;
    Ok((
        a.trim().parse().map_err(|_| err())?,
        b.trim().parse().map_err(|_| err())?,
    ))
}

fn parse_edges(s: &str) -> Result<Vec<CliqueEdge>, CliError> {
    s.split(',')
        .map(|part| {
            let err = || {
                CliError::Invalid(format!(
                    "edge {part:?} must be two dash-separated indices like 2-3"
                ))
            };
            let (a, b) = part.trim().split_once('-').ok_or_else(err)?;
            Ok(CliqueEdge::new(
                a.trim().parse().map_err(|_| err())?,
                b.trim().parse().map_err(|_| err())?,
            ))
        })
        .collect()
}

fn chain_spec(k: usize, ell: usize, edges: Option<&str>) -> Result<CliqueChainSpec, CliError> {
    let edges = match edges {
        Some(s) => {
            let parsed = parse_edges(s)?;
            if parsed.len() != ell {
                return Err(CliError::Invalid(format!(
                    "expected {ell} edges, got {}",
                    parsed.len()
                )));
            }
            parsed
        }
        None => vec![CliqueEdge::new(2, 3); ell],
    };
    Ok(CliqueChainSpec::new(k, edges)?)
}

/// Where a simulation graph came from, with the nodes that source
/// designates by construction.
enum GraphSource {
    File,
    Ring { n: usize },
    Chain { designated: DesignatedNodes },
}

fn resolve_graph(
    graph: Option<&PathBuf>,
    n: Option<usize>,
    k: Option<usize>,
    ell: Option<usize>,
    edges: Option<&str>,
) -> Result<(PortGraph, GraphSource), CliError> {
    match (graph, n, k) {
        (Some(path), None, None) => {
            let g = PortGraph::from_json_str(&read_file(path)?)?;
            Ok((g, GraphSource::File))
        }
        (None, Some(n), None) => Ok((build_oriented_ring(n)?, GraphSource::Ring { n })),
        (None, None, Some(k)) => {
            let ell = ell.ok_or_else(|| {
                CliError::Invalid("a clique chain needs both --k and --ell".into())
            })?;
            let spec = chain_spec(k, ell, edges)?;
            let (g, designated) = build_clique_chain(&spec)?;
            Ok((g, GraphSource::Chain { designated }))
        }
        (None, None, None) => Err(CliError::Invalid(
            "no graph source: pass --graph, --n, or --k/--ell".into(),
        )),
        _ => Err(CliError::Invalid(
            "pass exactly one graph source: --graph, --n, or --k/--ell".into(),
        )),
    }
}

// ---------------------------------------------------------------------
// build
// ---------------------------------------------------------------------

fn cmd_build(what: BuildWhat) -> Result<(), CliError> {
    let (graph, out) = match what {
        BuildWhat::Ring { n, out } => (build_oriented_ring(n)?, out),
        BuildWhat::CliqueChain { k, ell, edges, out } => {
            let spec = chain_spec(k, ell, edges.as_deref())?;
            (build_clique_chain(&spec)?.0, out)
        }
        BuildWhat::AttachPath {
            graph,
            at,
            extra,
            out,
        } => {
            let g = PortGraph::from_json_str(&read_file(&graph)?)?;
            (attach_path(&g, NodeId(at), extra)?, out)
        }
        BuildWhat::JoinCopies { graph, at, out } => {
            let g = PortGraph::from_json_str(&read_file(&graph)?)?;
            (join_copies_at(&g, NodeId(at))?.0, out)
        }
    };
    emit(out.as_ref(), &graph.to_json_string())
}

// ---------------------------------------------------------------------
// rendezvous
// ---------------------------------------------------------------------

fn merge(args: RendezvousArgs) -> Result<RendezvousArgs, CliError> {
    let Some(path) = &args.config else {
        return Ok(args);
    };
    let file: RendezvousArgs = load_config(path)?;
    Ok(RendezvousArgs {
        config: None,
        graph: args.graph.or(file.graph),
        n: args.n.or(file.n),
        k: args.k.or(file.k),
        ell: args.ell.or(file.ell),
        edges: args.edges.or(file.edges),
        starts: args.starts.or(file.starts),
        labels: args.labels.or(file.labels),
        wake: args.wake.or(file.wake),
        advice: args.advice.or(file.advice),
        behaviors: args.behaviors.or(file.behaviors),
        horizon: args.horizon.or(file.horizon),
        out: args.out,
    })
}

/// Advice available to behavior construction.
enum AdviceMode {
    Oracle,
    None,
    Explicit(AdviceString),
}

fn parse_advice(s: Option<&str>) -> Result<AdviceMode, CliError> {
    match s.unwrap_or("oracle") {
        "oracle" => Ok(AdviceMode::Oracle),
        "none" => Ok(AdviceMode::None),
        bits => Ok(AdviceMode::Explicit(bits.parse()?)),
    }
}

fn make_behavior(name: &str, advice: Option<&AdviceString>) -> Result<Box<dyn Behavior>, CliError> {
    match name {
        "idle" => Ok(Box::new(idle_behavior())),
        "fast-rendezvous" => {
            let advice = advice.ok_or_else(|| {
                CliError::Invalid("behavior fast-rendezvous requires advice".into())
            })?;
            Ok(Box::new(fast_rendezvous_behavior(advice)?))
        }
        "replay" => {
            let advice = advice
                .ok_or_else(|| CliError::Invalid("behavior replay requires advice".into()))?;
            Ok(Box::new(replay_ports_behavior(advice)?))
        }
        "gate-seeker" => Ok(Box::new(greedy_gate_seeker(
            advice.map(|a| a.bits()).filter(|b| !b.is_empty()),
        ))),
        other => Err(CliError::Invalid(format!(
            "unknown behavior {other:?}; expected fast-rendezvous, replay, gate-seeker, or idle"
        ))),
    }
}

#[derive(Serialize)]
struct DecodedAdvice {
    diff_bit: u32,
    ports: Vec<usize>,
}

#[derive(Serialize)]
struct RendezvousOutput {
    distance: usize,
    advice: Option<AdviceString>,
    advice_bits: Option<usize>,
    decoded: Option<DecodedAdvice>,
    result: SimResult,
}

fn cmd_rendezvous(args: RendezvousArgs) -> Result<(), CliError> {
    let (g, source) = resolve_graph(
        args.graph.as_ref(),
        args.n,
        args.k,
        args.ell,
        args.edges.as_deref(),
    )?;
    let (u, v) = match (&args.starts, &source) {
        (Some(s), _) => {
            let (u, v) = parse_pair::<usize>(s, "--starts")?;
            (NodeId(u), NodeId(v))
        }
        (None, GraphSource::Ring { n }) => (NodeId(0), NodeId(n / 2)),
        (None, GraphSource::Chain { designated }) => (designated.agent_start, designated.treasure),
        (None, GraphSource::File) => {
            return Err(CliError::Invalid(
                "--starts is required for graphs loaded from a file".into(),
            ))
        }
    };
    let (l1, l2) = match &args.labels {
        Some(s) => parse_pair::<Label>(s, "--labels")?,
        None => (1, 2),
    };
    let (w1, w2) = match &args.wake {
        Some(s) => parse_pair::<u64>(s, "--wake")?,
        None => (0, 0),
    };
    if u == v {
        return Err(CliError::Invalid(
            "agents must start at different nodes".into(),
        ));
    }
    let distance = shortest_path_ports(&g, u, v)?.distance;
    let advice = match parse_advice(args.advice.as_deref())? {
        AdviceMode::Oracle => Some(rendezvous_oracle(&g, u, v, l1, l2)?.advice),
        AdviceMode::None => None,
        AdviceMode::Explicit(a) => Some(a),
    };
    let names = args
        .behaviors
        .as_deref()
        .unwrap_or("fast-rendezvous,fast-rendezvous");
    let (name1, name2) = names
        .split_once(',')
        .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
        .unwrap_or_else(|| (names.trim().to_string(), names.trim().to_string()));
    let mut b1 = make_behavior(&name1, advice.as_ref())?;
    let mut b2 = make_behavior(&name2, advice.as_ref())?;
    let horizon = args.horizon.unwrap_or_else(|| default_horizon(&g));
    let result = run_rendezvous(
        &g,
        &AgentConfig::new(l1, u).with_wake(w1),
        &mut b1,
        &AgentConfig::new(l2, v).with_wake(w2),
        &mut b2,
        horizon,
    )?;
    let decoded = advice.as_ref().and_then(|a| {
        RendezvousAdvice::decode(a).ok().map(|d| DecodedAdvice {
            diff_bit: d.diff_bit,
            ports: d.ports,
        })
    });
    let output = RendezvousOutput {
        distance,
        advice_bits: advice.as_ref().map(AdviceString::len),
        advice,
        decoded,
        result,
    };
    emit(args.out.as_ref(), &to_pretty_json(&output))
}

// ---------------------------------------------------------------------
// treasure
// ---------------------------------------------------------------------

fn merge_treasure(args: TreasureArgs) -> Result<TreasureArgs, CliError> {
    let Some(path) = &args.config else {
        return Ok(args);
    };
    let file: TreasureArgs = load_config(path)?;
    Ok(TreasureArgs {
        config: None,
        graph: args.graph.or(file.graph),
        n: args.n.or(file.n),
        k: args.k.or(file.k),
        ell: args.ell.or(file.ell),
        edges: args.edges.or(file.edges),
        start: args.start.or(file.start),
        treasure: args.treasure.or(file.treasure),
        label: args.label.or(file.label),
        advice: args.advice.or(file.advice),
        behavior: args.behavior.or(file.behavior),
        horizon: args.horizon.or(file.horizon),
        out: args.out,
    })
}

#[derive(Serialize)]
struct TreasureOutput {
    distance: usize,
    advice: Option<AdviceString>,
    advice_bits: Option<usize>,
    ports: Option<Vec<usize>>,
    result: SimResult,
}

fn cmd_treasure(args: TreasureArgs) -> Result<(), CliError> {
    let (g, source) = resolve_graph(
        args.graph.as_ref(),
        args.n,
        args.k,
        args.ell,
        args.edges.as_deref(),
    )?;
    let (default_start, default_treasure) = match &source {
        GraphSource::Ring { n } => (Some(NodeId(0)), Some(NodeId(n / 2))),
        GraphSource::Chain { designated } => {
            (Some(designated.agent_start), Some(designated.treasure))
        }
        GraphSource::File => (None, None),
    };
    let start = args
        .start
        .map(NodeId)
        .or(default_start)
        .ok_or_else(|| CliError::Invalid("--start is required for file graphs".into()))?;
    let treasure = args
        .treasure
        .map(NodeId)
        .or(default_treasure)
        .ok_or_else(|| CliError::Invalid("--treasure is required for file graphs".into()))?;
    if start == treasure {
        return Err(CliError::Invalid(
            "the agent must not start on the treasure".into(),
        ));
    }
    let distance = shortest_path_ports(&g, start, treasure)?.distance;
    let behavior_name = args.behavior.as_deref().unwrap_or("replay");
    let advice = match parse_advice(args.advice.as_deref())? {
        AdviceMode::Oracle => {
            if behavior_name != "replay" {
                return Err(CliError::Invalid(
                    "oracle treasure advice pairs with the replay behavior".into(),
                ));
            }
            Some(treasure_oracle(&g, start, treasure)?.advice)
        }
        AdviceMode::None => None,
        AdviceMode::Explicit(a) => Some(a),
    };
    let mut behavior = make_behavior(behavior_name, advice.as_ref())?;
    let horizon = args.horizon.unwrap_or_else(|| default_horizon(&g));
    let result = run_treasure_hunt(
        &g,
        &AgentConfig::new(args.label.unwrap_or(1), start),
        &mut behavior,
        treasure,
        horizon,
    )?;
    let ports = advice.as_ref().and_then(|a| decode_ports(a).ok());
    let output = TreasureOutput {
        distance,
        advice_bits: advice.as_ref().map(AdviceString::len),
        advice,
        ports,
        result,
    };
    emit(args.out.as_ref(), &to_pretty_json(&output))
}

// ---------------------------------------------------------------------
// lowerbound
// ---------------------------------------------------------------------

fn merge_lowerbound(args: LowerboundArgs) -> Result<LowerboundArgs, CliError> {
    let Some(path) = &args.config else {
        return Ok(args);
    };
    let file: LowerboundArgs = load_config(path)?;
    Ok(LowerboundArgs {
        config: None,
        k: args.k.or(file.k),
        ell: args.ell.or(file.ell),
        z: args.z.or(file.z),
        advice_mode: args.advice_mode.or(file.advice_mode),
        runs: args.runs.or(file.runs),
        seed: args.seed.or(file.seed),
        counting_only: args.counting_only.or(file.counting_only),
        horizon_t: args.horizon_t.or(file.horizon_t),
        format: args.format.or(file.format),
        out: args.out,
    })
}

#[derive(Serialize)]
struct LowerboundRun {
    run: u32,
    injectivity: TauInjectivityReport,
    buckets: BucketReport,
}

#[derive(Serialize)]
struct LowerboundOutput {
    k: usize,
    ell: usize,
    z: u32,
    advice_mode: String,
    seed: Option<u64>,
    family_size: String,
    runs: Vec<LowerboundRun>,
    /// Counting formulas evaluated at the worst observed traversal total.
    counting: CountingBounds,
}

/// Fixed-width big-endian bits of `value`.
fn index_bits(value: u64, width: usize) -> BitString {
    BitString::from_bits((0..width).rev().map(|b| (value >> b) & 1 == 1))
}

fn cmd_lowerbound(args: LowerboundArgs) -> Result<(), CliError> {
    let k = args
        .k
        .ok_or_else(|| CliError::Invalid("--k is required".into()))?;
    let ell = args
        .ell
        .ok_or_else(|| CliError::Invalid("--ell is required".into()))?;
    let z = args.z.unwrap_or(0);

    if args.counting_only.unwrap_or(false) {
        let t = args
            .horizon_t
            .ok_or_else(|| CliError::Invalid("counting-only mode needs --horizon-t".into()))?;
        let bounds = counting_bounds(k, ell, z, t)?;
        return emit(args.out.as_ref(), &to_pretty_json(&bounds));
    }

    let mode = args.advice_mode.as_deref().unwrap_or("zero").to_string();
    let budget = 2 * ell as u64 * z as u64;
    let runs = match mode.as_str() {
        "random" => args.runs.unwrap_or(1),
        _ => 1,
    };
    if mode == "random" && args.seed.is_none() {
        return Err(CliError::Invalid(
            "advice-mode random requires --seed for reproducibility".into(),
        ));
    }

    let specs: Vec<CliqueChainSpec> = enumerate_family(k, ell)?.collect();
    let spec_index: BTreeMap<CliqueChainSpec, u64> = specs
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i as u64))
        .collect();

    let mut run_reports = Vec::new();
    let mut worst_t = 0u64;
    for run in 0..runs {
        let advice_fn: Box<dyn Fn(&CliqueChainSpec) -> BitString> = match mode.as_str() {
            "zero" => Box::new(|_| BitString::new()),
            "spec-index" => {
                let width = (64 - (specs.len() as u64).leading_zeros()) as usize;
                if (width as u64) > budget {
                    return Err(CliError::Invalid(format!(
                        "spec-index advice needs {width} bits; raise --z so 2*ell*z covers it"
                    )));
                }
                let index = spec_index.clone();
                Box::new(move |s| index_bits(index[s], width))
            }
            "random" => {
                let seed = args.seed.expect("checked above");
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(run as u64));
                let table: BTreeMap<CliqueChainSpec, BitString> = specs
                    .iter()
                    .map(|s| {
                        (
                            s.clone(),
                            BitString::from_bits((0..budget).map(|_| rng.gen::<bool>())),
                        )
                    })
                    .collect();
                Box::new(move |s| table[s].clone())
            }
            other => {
                return Err(CliError::Invalid(format!(
                    "unknown advice mode {other:?}; expected zero, spec-index, or random"
                )))
            }
        };
        let injectivity =
            verify_tau_injectivity(k, ell, |h| greedy_gate_seeker(Some(h)), &advice_fn)?;
        let buckets = pigeonhole_buckets(k, ell, &advice_fn, z)?;
        worst_t = worst_t.max(injectivity.max_total_traversals);
        run_reports.push(LowerboundRun {
            run,
            injectivity,
            buckets,
        });
    }

    let counting = counting_bounds(k, ell, z, worst_t)?;
    let output = LowerboundOutput {
        k,
        ell,
        z,
        advice_mode: mode,
        seed: args.seed,
        family_size: family_size(k, ell).to_string(),
        runs: run_reports,
        counting,
    };

    match args.format.as_deref().unwrap_or("json") {
        "json" => emit(args.out.as_ref(), &to_pretty_json(&output)),
        "csv" => {
            let mut csv = String::new();
            let tau_cols: String = (1..=ell).map(|i| format!(",tau_{i}")).collect();
            let _ = writeln!(csv, "run,spec_id,advice,time{tau_cols}");
            for r in &output.runs {
                for row in &r.injectivity.rows {
                    let taus: String = row.tau.0.iter().map(|t| format!(",{t}")).collect();
                    let _ = writeln!(
                        csv,
                        "{},{},{},{}{taus}",
                        r.run, row.spec_index, row.advice, row.time
                    );
                }
            }
            emit(args.out.as_ref(), csv.trim_end())
        }
        other => Err(CliError::Invalid(format!(
            "unknown format {other:?}; expected json or csv"
        ))),
    }
}

// ---------------------------------------------------------------------
// ring-experiment
// ---------------------------------------------------------------------

fn merge_ring(args: RingArgs) -> Result<RingArgs, CliError> {
    let Some(path) = &args.config else {
        return Ok(args);
    };
    let file: RingArgs = load_config(path)?;
    Ok(RingArgs {
        config: None,
        dprime: args.dprime.or(file.dprime),
        segments: args.segments.or(file.segments),
        labels: args.labels.or(file.labels),
        advice: args.advice.or(file.advice),
        format: args.format.or(file.format),
        out: args.out,
    })
}

fn cmd_ring(args: RingArgs) -> Result<(), CliError> {
    let dprime = args
        .dprime
        .ok_or_else(|| CliError::Invalid("--dprime is required".into()))?;
    let segments = args
        .segments
        .ok_or_else(|| CliError::Invalid("--segments is required".into()))?;
    let labels = args
        .labels
        .ok_or_else(|| CliError::Invalid("--labels is required".into()))?;
    let advice: Vec<BitString> = match args.advice.as_deref() {
        None => vec!["0".parse().expect("literal bits")],
        Some(s) => s
            .split(',')
            .map(|part| part.trim().parse().map_err(CliError::from))
            .collect::<Result<_, _>>()?,
    };
    let horizon = dprime * segments;
    let report: RingCollisionReport = ring_collision_experiment(
        |label, _advice| scripted_ring_behavior(base3_symbols(label, horizon)),
        labels,
        &advice,
        dprime,
        segments,
    )?;
    match args.format.as_deref().unwrap_or("json") {
        "json" => emit(args.out.as_ref(), &to_pretty_json(&report)),
        "csv" => {
            let mut csv = String::from("label,advice_index,advice,behaviour,meta\n");
            for row in &report.rows {
                let join = |v: &[i8]| {
                    v.iter()
                        .map(|s| s.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{}",
                    row.label,
                    row.advice_index,
                    row.advice,
                    join(&row.behaviour.0),
                    join(&row.meta.0)
                );
            }
            emit(args.out.as_ref(), csv.trim_end())
        }
        other => Err(CliError::Invalid(format!(
            "unknown format {other:?}; expected json or csv"
        ))),
    }
}
