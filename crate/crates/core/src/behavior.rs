//! Concrete agent behaviors: the advice-driven rendezvous walker, the
//! port-replay treasure hunter, and a deterministic clique-chain explorer
//! whose walks are normal (each gate entered once, never exited backward).

use crate::advice::{
    decode_ports, label_bit, AdviceError, AdviceString, BitString, RendezvousAdvice,
};
use crate::graph::clique_edge_color;
use crate::sim::{Action, Behavior, Observation};
use crate::Label;

/// Always idles. The inert half of a rendezvous pair.
pub fn idle_behavior() -> impl Behavior {
    |_: Label, _: &[Observation]| Action::Idle
}

/// The advice-driven rendezvous walker. Decodes `(A_0, ..., A_D)` once at
/// construction; at run time an agent whose label has a 0 at bit `x`
/// (the index encoded by `A_0`) idles forever, and an agent with a 1 there
/// takes the decoded ports in consecutive rounds, then stops.
pub struct FastRendezvous {
    advice: RendezvousAdvice,
}

impl Behavior for FastRendezvous {
    fn act(&mut self, label: Label, history: &[Observation]) -> Action {
        if label_bit(label, self.advice.diff_bit) == 0 {
            return Action::Idle;
        }
        let clock = history.last().expect("engine always observes first").clock;
        match self.advice.ports.get(clock as usize) {
            Some(&p) => Action::TakePort(p),
            None => Action::Idle,
        }
    }
}

pub fn fast_rendezvous_behavior(advice: &AdviceString) -> Result<FastRendezvous, AdviceError> {
    Ok(FastRendezvous {
        advice: RendezvousAdvice::decode(advice)?,
    })
}

/// Replays the decoded ports in order, then idles. Pairs with treasure-hunt
/// advice, where every substring is a port.
pub struct ReplayPorts {
    ports: Vec<usize>,
}

impl Behavior for ReplayPorts {
    fn act(&mut self, _label: Label, history: &[Observation]) -> Action {
        let clock = history.last().expect("engine always observes first").clock;
        match self.ports.get(clock as usize) {
            Some(&p) => Action::TakePort(p),
            None => Action::Idle,
        }
    }
}

pub fn replay_ports_behavior(advice: &AdviceString) -> Result<ReplayPorts, AdviceError> {
    let ports = decode_ports(advice)?;
    if ports.is_empty() {
        // Unreachable through the codec, which never decodes to an empty
        // list, but the movement contract is explicit about it.
        return Err(AdviceError::EmptyInput);
    }
    Ok(ReplayPorts { ports })
}

/// Follows a fixed symbol script on an oriented ring: -1 takes port 0
/// (clockwise), 0 idles, +1 takes port 1 (counterclockwise). Idles once the
/// script is exhausted.
pub struct ScriptedRing {
    symbols: Vec<i8>,
}

impl Behavior for ScriptedRing {
    fn act(&mut self, _label: Label, history: &[Observation]) -> Action {
        let clock = history.last().expect("engine always observes first").clock;
        match self.symbols.get(clock as usize) {
            Some(-1) => Action::TakePort(0),
            Some(1) => Action::TakePort(1),
            _ => Action::Idle,
        }
    }
}

pub fn scripted_ring_behavior(symbols: Vec<i8>) -> ScriptedRing {
    assert!(
        symbols.iter().all(|s| (-1..=1).contains(s)),
        "ring script symbols must be -1, 0, or 1"
    );
    ScriptedRing { symbols }
}

/// What the seeker's last move was aiming at.
#[derive(Debug, Clone, Copy)]
struct Aim {
    /// Abstract clique-node index (1-based) the move should land on if the
    /// traversed edge is not subdivided.
    target: usize,
    /// True when the move traverses the current candidate edge itself.
    probe: bool,
}

#[derive(Debug)]
enum SeekPhase {
    /// Waiting for the first observation to learn the clique size.
    Start,
    Walking {
        k: usize,
        candidates: Vec<(usize, usize)>,
        /// Abstract index of the current node within the current clique.
        at: usize,
        /// Next candidate edge to test.
        next: usize,
        aim: Option<Aim>,
    },
    Done,
}

/// Deterministic treasure-hunt explorer for clique chains.
///
/// The clique size is read off the start node's degree (`k - 1`). Inside a
/// clique the agent tests the non-gate edges as subdivision candidates in a
/// fixed order (ascending index pairs, rotated by the hint value), walking
/// to an endpoint and traversing the candidate. Degrees identify what a
/// traversal hit: `k - 1` is an ordinary clique node (candidate failed),
/// `k + 1` the next gate, 2 the treasure. Gates are entered and never
/// exited backward, so every walk is normal; the explorer stops on the
/// treasure.
pub struct GateSeeker {
    rotation: u64,
    phase: SeekPhase,
}

/// Builds a gate seeker. `hints` rotates the candidate order; `None` is the
/// plain ascending order.
pub fn greedy_gate_seeker(hints: Option<&BitString>) -> GateSeeker {
    GateSeeker {
        rotation: hints.map_or(0, |h| {
            if h.is_empty() {
                0
            } else {
                h.value_mod(u64::MAX)
            }
        }),
        phase: SeekPhase::Start,
    }
}

impl GateSeeker {
    fn candidates(k: usize, rotation: u64) -> Vec<(usize, usize)> {
        let mut c: Vec<(usize, usize)> = (2..=k)
            .flat_map(|a| ((a + 1)..=k).map(move |b| (a, b)))
            .collect();
        let len = c.len();
        c.rotate_left((rotation % len as u64) as usize);
        c
    }
}

impl Behavior for GateSeeker {
    fn act(&mut self, _label: Label, history: &[Observation]) -> Action {
        let obs = *history.last().expect("engine always observes first");
        let phase = std::mem::replace(&mut self.phase, SeekPhase::Done);
        let (phase, action) = self.advance(phase, obs);
        self.phase = phase;
        action
    }
}

impl GateSeeker {
    fn advance(&self, phase: SeekPhase, obs: Observation) -> (SeekPhase, Action) {
        if obs.degree == 2 {
            return (SeekPhase::Done, Action::Idle);
        }
        let (k, candidates, at, next) = match phase {
            SeekPhase::Done => return (SeekPhase::Done, Action::Idle),
            SeekPhase::Start => {
                let k = obs.degree + 1;
                (k, Self::candidates(k, self.rotation), 1, 0)
            }
            SeekPhase::Walking {
                k,
                candidates,
                at,
                next,
                aim,
            } => {
                let (mut at, mut next) = (at, next);
                if let Some(a) = aim {
                    if obs.degree == k + 1 {
                        // Entered the next gate: restart the scan from its
                        // clique, where the gate is node 1.
                        at = 1;
                        next = 0;
                    } else {
                        at = a.target;
                        if a.probe {
                            next += 1;
                        }
                    }
                }
                (k, candidates, at, next)
            }
        };
        let Some(&(a, b)) = candidates.get(next) else {
            // Every candidate failed: not a clique chain. Give up in place.
            return (SeekPhase::Done, Action::Idle);
        };
        let (target, probe) = if at == a {
            (b, true)
        } else if at == b {
            (a, true)
        } else {
            (a, false)
        };
        let port = clique_edge_color(k, at, target);
        (
            SeekPhase::Walking {
                k,
                candidates,
                at,
                next,
                aim: Some(Aim { target, probe }),
            },
            Action::TakePort(port),
        )
    }
}
