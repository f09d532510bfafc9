//! Oriented-ring behaviour and meta-behaviour analysis.
//!
//! On an oriented ring every node looks the same, so a deterministic
//! agent's moves depend only on its label and advice: the per-round
//! symbols form its behaviour vector. Coarsening time into segments of
//! `D'` rounds and space into blocks of `D'` nodes turns that vector into
//! a meta-behaviour vector over `{-1, 0, 1}`. Two agents whose meta
//! vectors agree under every advice string, placed three blocks apart,
//! stay in different blocks forever. The collision experiment finds such
//! pairs by enumeration and confirms the never-meet claim by simulation.

use num_bigint::BigUint;
use serde::Serialize;

use super::LabError;
use crate::advice::BitString;
use crate::graph::{build_oriented_ring, NodeId, PortGraph};
use crate::sim::{run_rendezvous, run_walk, AgentConfig, Behavior};
use crate::Label;

/// Per-round movement symbols on an oriented ring: -1 clockwise (port 0),
/// 0 idle, +1 counterclockwise (port 1).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct BehaviourVector(pub Vec<i8>);

/// Per-segment block displacement, counterclockwise positive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct MetaBehaviourVector(pub Vec<i8>);

fn is_canonical_ring(g: &PortGraph) -> bool {
    let n = g.node_count();
    n >= 3
        && (0..n)
            .all(|i| g.ports(NodeId(i)) == [(NodeId((i + 1) % n), 1), (NodeId((i + n - 1) % n), 0)])
}

/// Reads the movement symbols off a trace recorded on an oriented ring.
pub fn behaviour_vector(g: &PortGraph, trace: &[NodeId]) -> Result<BehaviourVector, LabError> {
    if !is_canonical_ring(g) {
        return Err(LabError::NotOrientedRing);
    }
    let n = g.node_count();
    let mut symbols = Vec::with_capacity(trace.len().saturating_sub(1));
    for (i, w) in trace.windows(2).enumerate() {
        let (from, to) = (w[0].0, w[1].0);
        if from >= n || to >= n {
            return Err(LabError::InvalidTrace(format!(
                "node out of range at step {i}"
            )));
        }
        let s = if to == from {
            0
        } else if to == (from + 1) % n {
            -1 // took port 0, clockwise
        } else if to == (from + n - 1) % n {
            1
        } else {
            return Err(LabError::InvalidTrace(format!(
                "v{from} -> v{to} is not a ring move at step {i}"
            )));
        };
        symbols.push(s);
    }
    Ok(BehaviourVector(symbols))
}

/// Coarsens a behaviour vector into per-segment block displacements.
///
/// Blocks of `dprime` nodes partition the ring starting at node 0, and the
/// agent must start on the clockwise-first node of a block. Within one
/// segment of `dprime` rounds the agent moves at most `dprime` nodes, so
/// each displacement is -1, 0, or +1.
pub fn meta_behaviour_vector(
    bv: &BehaviourVector,
    start: usize,
    dprime: usize,
    ring_size: usize,
) -> Result<MetaBehaviourVector, LabError> {
    if dprime == 0 || ring_size == 0 || !ring_size.is_multiple_of(dprime) {
        return Err(LabError::InvalidParameter(format!(
            "ring size {ring_size} must be a positive multiple of the block size {dprime}"
        )));
    }
    if !start.is_multiple_of(dprime) {
        return Err(LabError::MisalignedStart { start, dprime });
    }
    if !bv.0.len().is_multiple_of(dprime) {
        return Err(LabError::IndivisibleHorizon {
            len: bv.0.len(),
            dprime,
        });
    }
    if let Some(s) = bv.0.iter().find(|s| !(-1..=1).contains(*s)) {
        return Err(LabError::InvalidParameter(format!(
            "behaviour symbol {s} outside the alphabet {{-1, 0, 1}}"
        )));
    }
    let n = ring_size as i64;
    let r = ring_size / dprime;
    let block = |pos: i64| (pos / dprime as i64) as usize;
    let mut pos = start as i64;
    let mut meta = Vec::with_capacity(bv.0.len() / dprime);
    for segment in bv.0.chunks(dprime) {
        let before = block(pos);
        for &s in segment {
            pos = (pos - s as i64).rem_euclid(n);
        }
        // Counterclockwise-positive displacement, mod the block count.
        let diff = (before + r - block(pos)) % r;
        let z = match diff {
            0 => 0,
            1 => 1,
            d if d == r - 1 => -1,
            _ => unreachable!("a segment can shift the block by at most one"),
        };
        meta.push(z);
    }
    Ok(MetaBehaviourVector(meta))
}

/// Symbol script derived from a label: the base-3 digits of `label - 1`,
/// least significant first, shifted to `{-1, 0, 1}`. Distinct labels below
/// `3^len + 1` get distinct scripts.
pub fn base3_symbols(label: Label, len: usize) -> Vec<i8> {
    let mut x = label - 1;
    (0..len)
        .map(|_| {
            let digit = (x % 3) as i8;
            x /= 3;
            digit - 1
        })
        .collect()
}

/// One (label, advice) cell of the experiment table.
#[derive(Debug, Clone, Serialize)]
pub struct MetaRow {
    pub label: Label,
    pub advice_index: usize,
    pub advice: BitString,
    pub behaviour: BehaviourVector,
    pub meta: MetaBehaviourVector,
}

/// A pair of labels indistinguishable at the meta-behaviour level under
/// every advice string, and the simulation evidence that they never meet.
#[derive(Debug, Clone, Serialize)]
pub struct CollisionWitness {
    pub label_a: Label,
    pub label_b: Label,
    pub start_a: usize,
    pub start_b: usize,
    /// Meeting round per advice string within the horizon, expected all
    /// `None`.
    pub meetings: Vec<Option<u64>>,
    pub never_met: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RingCollisionReport {
    pub ring_size: usize,
    pub dprime: usize,
    pub segments: usize,
    pub label_count: u64,
    pub advice_count: usize,
    /// True when `3^(segments * advice_count) < label_count`: fewer
    /// meta-behaviour functions than labels force a collision.
    pub collision_guaranteed: bool,
    pub rows: Vec<MetaRow>,
    pub witness: Option<CollisionWitness>,
}

/// Runs every labeled behavior under every advice string on the ring of
/// size `6 * dprime` for `segments` time segments, computes the
/// meta-behaviour table, finds the first pair of labels with identical
/// meta vectors under every advice string, and verifies by simulation that
/// the pair, started three blocks apart, never shares a node within the
/// horizon.
pub fn ring_collision_experiment<F, B>(
    mut family: F,
    label_count: u64,
    advice_strings: &[BitString],
    dprime: usize,
    segments: usize,
) -> Result<RingCollisionReport, LabError>
where
    F: FnMut(Label, &BitString) -> B,
    B: Behavior,
{
    if dprime == 0 || segments == 0 {
        return Err(LabError::InvalidParameter(
            "segment count and block size must be positive".into(),
        ));
    }
    if label_count < 2 {
        return Err(LabError::InvalidParameter(
            "need at least two labels".into(),
        ));
    }
    if advice_strings.is_empty() {
        return Err(LabError::InvalidParameter(
            "need at least one advice string".into(),
        ));
    }
    let ring_size = 6 * dprime;
    let ring = build_oriented_ring(ring_size)?;
    let horizon = (segments * dprime) as u64;

    let mut rows = Vec::new();
    let mut signatures: Vec<Vec<MetaBehaviourVector>> = Vec::new();
    for label in 1..=label_count {
        let mut per_advice = Vec::with_capacity(advice_strings.len());
        for (advice_index, advice) in advice_strings.iter().enumerate() {
            let mut behavior = family(label, advice);
            let trace = run_walk(
                &ring,
                &AgentConfig::new(label, NodeId(0)),
                &mut behavior,
                horizon,
            )?;
            let behaviour = behaviour_vector(&ring, &trace)?;
            let meta = meta_behaviour_vector(&behaviour, 0, dprime, ring_size)?;
            per_advice.push(meta.clone());
            rows.push(MetaRow {
                label,
                advice_index,
                advice: advice.clone(),
                behaviour,
                meta,
            });
        }
        signatures.push(per_advice);
    }

    let mut witness = None;
    'outer: for i in 0..signatures.len() {
        for j in (i + 1)..signatures.len() {
            if signatures[i] == signatures[j] {
                let (label_a, label_b) = (i as Label + 1, j as Label + 1);
                let (start_a, start_b) = (0usize, 3 * dprime);
                let mut meetings = Vec::with_capacity(advice_strings.len());
                for advice in advice_strings {
                    let result = run_rendezvous(
                        &ring,
                        &AgentConfig::new(label_a, NodeId(start_a)),
                        &mut family(label_a, advice),
                        &AgentConfig::new(label_b, NodeId(start_b)),
                        &mut family(label_b, advice),
                        horizon,
                    )?;
                    meetings.push(result.meeting_round);
                }
                witness = Some(CollisionWitness {
                    label_a,
                    label_b,
                    start_a,
                    start_b,
                    never_met: meetings.iter().all(Option::is_none),
                    meetings,
                });
                break 'outer;
            }
        }
    }

    let function_space = BigUint::from(3u64).pow((segments * advice_strings.len()) as u32);
    Ok(RingCollisionReport {
        ring_size,
        dprime,
        segments,
        label_count,
        advice_count: advice_strings.len(),
        collision_guaranteed: function_space < BigUint::from(label_count),
        rows,
        witness,
    })
}
