//! Executable lower-bound machinery: exhaustive enumeration of the
//! clique-chain family, traversal-count fingerprints of treasure-hunt
//! walks, pigeonhole bucketing of instances by advice string, the counting
//! bounds those experiments are checked against, and the oriented-ring
//! meta-behaviour experiment.

mod ring;

pub use ring::{
    base3_symbols, behaviour_vector, meta_behaviour_vector, ring_collision_experiment,
    BehaviourVector, CollisionWitness, MetaBehaviourVector, MetaRow, RingCollisionReport,
};

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::advice::BitString;
use crate::graph::{
    build_clique_chain, CliqueChainSpec, CliqueEdge, GraphError, NodeId, PortGraph,
};
use crate::sim::{default_horizon, run_treasure_hunt, AgentConfig, Behavior, SimError};

/// Upper limit on exhaustive family enumeration, keeping experiments at
/// desk scale. Formula evaluation in [`counting_bounds`] has no such limit.
pub const DEFAULT_FAMILY_CAP: u64 = 100_000;

#[derive(Debug, Error, PartialEq)]
pub enum LabError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("family size {size} exceeds enumeration cap {cap}")]
    CapExceeded { size: BigUint, cap: u64 },
    #[error("advice of {len} bits exceeds the {budget}-bit budget")]
    AdviceTooLong { len: usize, budget: u64 },
    #[error("invalid trace: {0}")]
    InvalidTrace(String),
    #[error("walk never reached the treasure")]
    TreasureNotReached,
    #[error("walk is not normal: {0}")]
    NonNormalWalk(String),
    #[error("graph is not a canonically built oriented ring")]
    NotOrientedRing,
    #[error("start node {start} is not the clockwise-first node of a block of size {dprime}")]
    MisalignedStart { start: usize, dprime: usize },
    #[error("trace length {len} is not divisible by the segment length {dprime}")]
    IndivisibleHorizon { len: usize, dprime: usize },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Number of candidate subdivision edges per clique: edges of `K_k` that
/// avoid the gate node.
fn candidates_per_clique(k: usize) -> u64 {
    ((k - 1) * (k - 2) / 2) as u64
}

/// Exact family size `((k-1)(k-2)/2)^ell`.
pub fn family_size(k: usize, ell: usize) -> BigUint {
    BigUint::from(candidates_per_clique(k)).pow(ell as u32)
}

fn check_family_params(k: usize, ell: usize) -> Result<(), LabError> {
    if k < 4 || !k.is_multiple_of(2) {
        return Err(LabError::InvalidParameter(format!(
            "clique size must be even and at least 4, got {k}"
        )));
    }
    if ell == 0 {
        return Err(LabError::InvalidParameter(
            "chain length must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Deterministic stream of every spec in the family, in odometer order with
/// the first clique's edge varying slowest.
#[derive(Debug)]
pub struct FamilyIter {
    k: usize,
    candidates: Vec<CliqueEdge>,
    counter: Vec<usize>,
    done: bool,
}

impl Iterator for FamilyIter {
    type Item = CliqueChainSpec;

    fn next(&mut self) -> Option<CliqueChainSpec> {
        if self.done {
            return None;
        }
        let spec = CliqueChainSpec {
            k: self.k,
            edges: self.counter.iter().map(|&i| self.candidates[i]).collect(),
        };
        // Odometer increment, last digit fastest.
        let mut pos = self.counter.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.counter[pos] += 1;
            if self.counter[pos] < self.candidates.len() {
                break;
            }
            self.counter[pos] = 0;
        }
        Some(spec)
    }
}

/// Enumerates the family under an explicit cap, refusing with the computed
/// size when the family is too large.
pub fn enumerate_family_capped(k: usize, ell: usize, cap: u64) -> Result<FamilyIter, LabError> {
    check_family_params(k, ell)?;
    let size = family_size(k, ell);
    if size > BigUint::from(cap) {
        return Err(LabError::CapExceeded { size, cap });
    }
    let candidates: Vec<CliqueEdge> = (2..=k)
        .flat_map(|a| ((a + 1)..=k).map(move |b| CliqueEdge::new(a, b)))
        .collect();
    Ok(FamilyIter {
        k,
        candidates,
        counter: vec![0; ell],
        done: false,
    })
}

/// Enumerates the family under [`DEFAULT_FAMILY_CAP`].
pub fn enumerate_family(k: usize, ell: usize) -> Result<FamilyIter, LabError> {
    enumerate_family_capped(k, ell, DEFAULT_FAMILY_CAP)
}

/// Per-clique edge-traversal counts of a treasure-hunt walk. Every term is
/// at least 2 and the terms sum to at most the walk's length.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct TauTuple(pub Vec<u64>);

impl TauTuple {
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl std::fmt::Display for TauTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

/// Walk bookkeeping shared by the normal-walk check and the traversal
/// counter.
struct WalkScan {
    /// Index into the trace of the first arrival at the treasure.
    treasure_at: Option<usize>,
    /// Arrival counts for the interior gates `g_2..g_ell`, within the
    /// prefix that ends at the treasure.
    gate_arrivals: Vec<u64>,
    /// First violation of the gate-exit rule, if any.
    bad_exit: Option<String>,
}

fn scan_walk(
    g: &PortGraph,
    gates: &[NodeId],
    k: usize,
    trace: &[NodeId],
) -> Result<WalkScan, LabError> {
    if trace.is_empty() {
        return Err(LabError::InvalidTrace("empty trace".into()));
    }
    let treasure = *gates.last().expect("gates are never empty");
    let interior = &gates[1..gates.len() - 1];
    let mut scan = WalkScan {
        treasure_at: (trace[0] == treasure).then_some(0),
        gate_arrivals: vec![0; interior.len()],
        bad_exit: None,
    };
    for (i, w) in trace.windows(2).enumerate() {
        if scan.treasure_at.is_some() {
            break;
        }
        let (from, to) = (w[0], w[1]);
        g.check_node(from)?;
        g.check_node(to)?;
        if from == to {
            continue;
        }
        let Some(port) = g.port_towards(from, to) else {
            return Err(LabError::InvalidTrace(format!(
                "no edge from {from} to {to} at step {i}"
            )));
        };
        if scan.bad_exit.is_none() {
            if let Some(gi) = interior.iter().position(|&x| x == from) {
                if port == k - 1 || port == k {
                    scan.bad_exit = Some(format!(
                        "gate g_{} exited by port {port} at step {i}",
                        gi + 2
                    ));
                }
            }
        }
        if let Some(gi) = interior.iter().position(|&x| x == to) {
            scan.gate_arrivals[gi] += 1;
        }
        if to == treasure {
            scan.treasure_at = Some(i + 1);
        }
    }
    Ok(scan)
}

/// True iff the trace is a normal walk on the graph of `spec`: up to the
/// first arrival at the treasure, every interior gate is entered exactly
/// once (at most once for walks that never arrive) and no interior gate is
/// exited by one of its two subdivision ports.
pub fn normal_walk_check(trace: &[NodeId], spec: &CliqueChainSpec) -> Result<bool, LabError> {
    spec.check()?;
    let (g, d) = build_clique_chain(spec)?;
    let scan = scan_walk(&g, &d.gates, spec.k, trace)?;
    if scan.bad_exit.is_some() {
        return Ok(false);
    }
    let ok = if scan.treasure_at.is_some() {
        scan.gate_arrivals.iter().all(|&c| c == 1)
    } else {
        scan.gate_arrivals.iter().all(|&c| c <= 1)
    };
    Ok(ok)
}

/// Traversal-count fingerprint of a normal treasure-hunt walk: term `i`
/// counts the edge traversals between the first arrivals at `g_i` and
/// `g_{i+1}`, with the traversal into a gate charged to the clique being
/// left. The trace must start at `g_1` and reach the treasure.
pub fn tau_of_trace(trace: &[NodeId], spec: &CliqueChainSpec) -> Result<TauTuple, LabError> {
    spec.check()?;
    let (g, d) = build_clique_chain(spec)?;
    if trace.first() != Some(&d.agent_start) {
        return Err(LabError::InvalidTrace(format!(
            "trace must start at the agent start {}",
            d.agent_start
        )));
    }
    let scan = scan_walk(&g, &d.gates, spec.k, trace)?;
    if let Some(reason) = scan.bad_exit {
        return Err(LabError::NonNormalWalk(reason));
    }
    if scan.gate_arrivals.iter().any(|&c| c != 1) {
        return Err(LabError::NonNormalWalk(
            "an interior gate was not entered exactly once".into(),
        ));
    }
    let Some(end) = scan.treasure_at else {
        return Err(LabError::TreasureNotReached);
    };

    let ell = spec.ell();
    let mut tau = vec![0u64; ell];
    let mut phase = 0usize;
    for w in trace[..=end].windows(2) {
        if w[0] == w[1] {
            continue;
        }
        tau[phase] += 1;
        if phase + 1 < d.gates.len() && w[1] == d.gates[phase + 1] {
            phase += 1;
        }
    }
    let tuple = TauTuple(tau);
    if tuple.0.iter().any(|&t| t < 2) {
        return Err(LabError::NonNormalWalk(format!(
            "impossible traversal counts {tuple}"
        )));
    }
    Ok(tuple)
}

/// One enumerated instance: its spec, the advice it was given, and the
/// fingerprint of the resulting walk.
#[derive(Debug, Clone, Serialize)]
pub struct TauRow {
    pub spec_index: u64,
    pub spec: CliqueChainSpec,
    pub advice: BitString,
    pub time: u64,
    pub tau: TauTuple,
}

/// Two instances in the same advice bucket with identical fingerprints.
#[derive(Debug, Clone, Serialize)]
pub struct TauCollision {
    pub advice: BitString,
    pub spec_a: u64,
    pub spec_b: u64,
    pub tau: TauTuple,
}

#[derive(Debug, Clone, Serialize)]
pub struct TauInjectivityReport {
    pub family_size: u64,
    pub bucket_count: usize,
    pub max_total_traversals: u64,
    pub rows: Vec<TauRow>,
    pub collisions: Vec<TauCollision>,
}

impl TauInjectivityReport {
    pub fn injective(&self) -> bool {
        self.collisions.is_empty()
    }

    /// Number of distinct fingerprints whose traversal total is at most `t`.
    pub fn distinct_tau_within(&self, t: u64) -> u64 {
        let mut seen: Vec<&TauTuple> = self
            .rows
            .iter()
            .map(|r| &r.tau)
            .filter(|tau| tau.total() <= t)
            .collect();
        seen.sort();
        seen.dedup();
        seen.len() as u64
    }
}

/// Runs `behavior` (constructed per advice string) on every graph of the
/// family and checks that the traversal fingerprint is injective within
/// each advice bucket. Fingerprint collisions are reported, not raised:
/// they would indicate a broken explorer or engine.
pub fn verify_tau_injectivity<B, F, A>(
    k: usize,
    ell: usize,
    mut behavior: F,
    advice_fn: A,
) -> Result<TauInjectivityReport, LabError>
where
    B: Behavior,
    F: FnMut(&BitString) -> B,
    A: Fn(&CliqueChainSpec) -> BitString,
{
    let mut rows = Vec::new();
    for (i, spec) in enumerate_family(k, ell)?.enumerate() {
        let advice = advice_fn(&spec);
        let (g, d) = build_clique_chain(&spec)?;
        let result = run_treasure_hunt(
            &g,
            &AgentConfig::new(1, d.agent_start),
            &mut behavior(&advice),
            d.treasure,
            default_horizon(&g),
        )?;
        let time = result.time.ok_or(LabError::TreasureNotReached)?;
        let tau = tau_of_trace(&result.traces[0], &spec)?;
        rows.push(TauRow {
            spec_index: i as u64,
            spec,
            advice,
            time,
            tau,
        });
    }

    let mut buckets: BTreeMap<String, BTreeMap<&TauTuple, u64>> = BTreeMap::new();
    let mut collisions = Vec::new();
    for row in &rows {
        let bucket = buckets.entry(row.advice.to_string()).or_default();
        if let Some(&first) = bucket.get(&row.tau) {
            collisions.push(TauCollision {
                advice: row.advice.clone(),
                spec_a: first,
                spec_b: row.spec_index,
                tau: row.tau.clone(),
            });
        } else {
            bucket.insert(&row.tau, row.spec_index);
        }
    }
    Ok(TauInjectivityReport {
        family_size: rows.len() as u64,
        bucket_count: buckets.len(),
        max_total_traversals: rows.iter().map(|r| r.tau.total()).max().unwrap_or(0),
        rows,
        collisions,
    })
}

/// Partition of the family by advice string.
#[derive(Debug, Clone, Serialize)]
pub struct BucketReport {
    pub family_size: u64,
    /// Total advice budget in bits: `z` per unit of distance `2*ell`.
    pub budget_bits: u64,
    /// `ceil(N / 2^budget)`: the pigeonhole floor on the largest bucket
    /// when at most `2^budget` distinct advice strings occur.
    pub guaranteed_min_largest: u64,
    pub largest_bucket_size: u64,
    pub largest_bucket_advice: BitString,
    pub distinct_advice_count: u64,
    /// Common advice length when every instance received equally many
    /// bits; the pigeonhole floor is unconditional in that case.
    pub uniform_advice_len: Option<usize>,
    /// Advice string -> enumeration indices of its instances.
    pub buckets: BTreeMap<String, Vec<u64>>,
    pub bound_holds: bool,
}

/// Buckets every instance of the family by its advice string. The advice
/// function may spend at most `z_bits` bits per unit of the distance
/// `2*ell`; longer outputs are a contract violation.
pub fn pigeonhole_buckets<A>(
    k: usize,
    ell: usize,
    advice_fn: A,
    z_bits: u32,
) -> Result<BucketReport, LabError>
where
    A: Fn(&CliqueChainSpec) -> BitString,
{
    let budget = 2 * ell as u64 * z_bits as u64;
    let mut buckets: BTreeMap<String, Vec<u64>> = BTreeMap::new();
    let mut lengths: Option<(usize, bool)> = None;
    let mut count = 0u64;
    for (i, spec) in enumerate_family(k, ell)?.enumerate() {
        let advice = advice_fn(&spec);
        if advice.len() as u64 > budget {
            return Err(LabError::AdviceTooLong {
                len: advice.len(),
                budget,
            });
        }
        lengths = Some(match lengths {
            None => (advice.len(), true),
            Some((l, uniform)) => (l, uniform && l == advice.len()),
        });
        buckets
            .entry(advice.to_string())
            .or_default()
            .push(i as u64);
        count += 1;
    }

    // ceil(N / 2^budget); once 2^budget reaches N the floor is 1, so the
    // power never needs materializing beyond N's width.
    let n = BigUint::from(count);
    let guaranteed = if budget >= n.bits() {
        1
    } else {
        let denom = BigUint::from(2u64).pow(budget as u32);
        ((&n + &denom - BigUint::one()) / &denom)
            .to_u64()
            .expect("family size is within the enumeration cap")
    };
    let (advice, size) = buckets
        .iter()
        .map(|(a, specs)| (a, specs.len() as u64))
        .max_by(|x, y| x.1.cmp(&y.1).then(y.0.cmp(x.0)))
        .expect("family is never empty");
    Ok(BucketReport {
        family_size: count,
        budget_bits: budget,
        guaranteed_min_largest: guaranteed,
        largest_bucket_size: size,
        largest_bucket_advice: advice.parse().expect("bucket keys are bit strings"),
        distinct_advice_count: buckets.len() as u64,
        uniform_advice_len: lengths.and_then(|(l, u)| u.then_some(l)),
        buckets,
        bound_holds: size >= guaranteed,
    })
}

/// The counting quantities behind the time lower bound, evaluated exactly
/// where they are integers and in 53-bit floating point where a real root
/// is involved.
#[derive(Debug, Clone, PartialEq)]
pub struct CountingBounds {
    pub clique_size: usize,
    pub chain_length: usize,
    pub advice_bits_per_unit: u32,
    pub horizon: u64,
    /// `N = ((k-1)(k-2)/2)^ell`.
    pub family_size: BigUint,
    /// `T^ell / ell!`: the simplex volume bounding the number of distinct
    /// traversal fingerprints achievable within `T` rounds.
    pub simplex_bound: BigRational,
    /// `(ell! * N / 2^(2*ell*z))^(1/ell)`: any algorithm needs this many
    /// rounds on some family member.
    pub time_lower_bound: f64,
}

fn ln_biguint(x: &BigUint) -> f64 {
    debug_assert!(!x.is_zero());
    let bits = x.bits();
    if bits <= 53 {
        (x.to_u64().expect("fits") as f64).ln()
    } else {
        let shift = bits - 53;
        let top = (x >> shift).to_u64().expect("53 bits fit") as f64;
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.numer().is_zero() {
        return 0.0;
    }
    let sign = if r.numer().is_negative() { -1.0 } else { 1.0 };
    let num = ln_biguint(r.numer().abs().to_biguint().as_ref().expect("abs"));
    let den = ln_biguint(r.denom().to_biguint().as_ref().expect("positive"));
    sign * (num - den).exp()
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64)
        .map(BigUint::from)
        .fold(BigUint::one(), |a, b| a * b)
}

/// Evaluates the counting formulas for arbitrary parameters, without
/// enumeration: the family size, the simplex bound for horizon `t`, and
/// the implied time lower bound for `z` advice bits per distance unit.
pub fn counting_bounds(k: usize, ell: usize, z: u32, t: u64) -> Result<CountingBounds, LabError> {
    if k < 2 {
        return Err(LabError::InvalidParameter(format!(
            "clique size must be at least 2, got {k}"
        )));
    }
    if ell == 0 {
        return Err(LabError::InvalidParameter(
            "chain length must be at least 1".into(),
        ));
    }
    let family = family_size(k, ell);
    let fact = factorial(ell);
    let simplex = BigRational::new(
        BigInt::from(BigUint::from(t).pow(ell as u32)),
        BigInt::from(fact.clone()),
    );
    let time_lower_bound = if family.is_zero() {
        0.0
    } else {
        let budget = 2.0 * ell as f64 * z as f64;
        let ln = (ln_biguint(&fact) + ln_biguint(&family) - budget * std::f64::consts::LN_2)
            / ell as f64;
        ln.exp()
    };
    Ok(CountingBounds {
        clique_size: k,
        chain_length: ell,
        advice_bits_per_unit: z,
        horizon: t,
        family_size: family,
        simplex_bound: simplex,
        time_lower_bound,
    })
}

impl CountingBounds {
    /// Exact integer comparison `count <= T^ell / ell!`.
    pub fn simplex_bound_admits(&self, count: u64) -> bool {
        BigRational::from_integer(BigInt::from(count)) <= self.simplex_bound
    }
}

impl Serialize for CountingBounds {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CountingBounds", 8)?;
        st.serialize_field("k", &self.clique_size)?;
        st.serialize_field("ell", &self.chain_length)?;
        st.serialize_field("z", &self.advice_bits_per_unit)?;
        st.serialize_field("horizon", &self.horizon)?;
        st.serialize_field("family_size", &self.family_size.to_string())?;
        st.serialize_field(
            "simplex_bound",
            &format!(
                "{}/{}",
                self.simplex_bound.numer(),
                self.simplex_bound.denom()
            ),
        )?;
        st.serialize_field("simplex_bound_approx", &ratio_to_f64(&self.simplex_bound))?;
        st.serialize_field("time_lower_bound", &self.time_lower_bound)?;
        st.end()
    }
}
