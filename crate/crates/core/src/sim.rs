//! Synchronous execution of agent walks: rounds, wake-up delays, per-round
//! observations, meeting detection at nodes only.
//!
//! Round `r` names the global state after `r` simultaneous transitions;
//! round 0 is the initial placement. During the transition into round
//! `r+1`, every agent whose wake round is at most `r` observes its current
//! node and acts; dormant agents sit at their start but are placed for
//! meeting detection from round 0 on. Agents crossing the same edge in
//! opposite directions do not notice each other; such events are only
//! tallied as a diagnostic.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, NodeId, Port, PortGraph};
use crate::Label;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimError {
    #[error("agents must carry distinct labels, both are {0}")]
    DuplicateLabels(Label),
    #[error("labels must be at least 1, got {0}")]
    InvalidLabel(Label),
    #[error(
        "protocol violation by agent {agent_index} (label {label}) in round {round}: \
         took port {port} at a node of degree {degree}"
    )]
    ProtocolViolation {
        agent_index: usize,
        label: Label,
        round: u64,
        port: Port,
        degree: usize,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Placement of one agent: its label, start node, and the global round in
/// which the adversary wakes it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentConfig {
    pub label: Label,
    pub start: NodeId,
    pub wake_round: u64,
}

impl AgentConfig {
    pub fn new(label: Label, start: NodeId) -> Self {
        AgentConfig {
            label,
            start,
            wake_round: 0,
        }
    }

    pub fn with_wake(mut self, wake_round: u64) -> Self {
        self.wake_round = wake_round;
        self
    }
}

/// What an agent perceives in one round: its local clock (rounds since its
/// wake-up), the degree of the current node, and the port by which it
/// entered the node in the previous round, if it moved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Observation {
    pub clock: u64,
    pub degree: usize,
    pub arrival_port: Option<Port>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Idle,
    TakePort(Port),
}

/// A deterministic agent algorithm. It sees only its own label and the
/// history of its observations, never node identities, so the same
/// behavior runs unchanged on any graph with the same local port structure.
///
/// `history` always ends with the current round's observation; the engine
/// queries each awake agent exactly once per round.
pub trait Behavior {
    fn act(&mut self, label: Label, history: &[Observation]) -> Action;
}

impl<F> Behavior for F
where
    F: FnMut(Label, &[Observation]) -> Action,
{
    fn act(&mut self, label: Label, history: &[Observation]) -> Action {
        self(label, history)
    }
}

impl Behavior for Box<dyn Behavior + '_> {
    fn act(&mut self, label: Label, history: &[Observation]) -> Action {
        (**self).act(label, history)
    }
}

/// Outcome of a simulation run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimResult {
    /// Global round of the first co-location, if any.
    pub meeting_round: Option<u64>,
    /// Rounds from the later agent's wake-up to the meeting, clamped at 0
    /// for meetings that happen before the later agent wakes.
    pub time: Option<u64>,
    /// Simultaneous opposite traversals of one edge. Diagnostic only; the
    /// agents involved never notice.
    pub edge_crossings: u64,
    /// Per-agent node positions for every simulated round, starting with
    /// round 0.
    pub traces: Vec<Vec<NodeId>>,
}

/// Default simulation horizon: generous for any O(distance) algorithm yet
/// finite for runaway behaviors.
pub fn default_horizon(g: &PortGraph) -> u64 {
    10 * (g.node_count() as u64 + 1)
}

struct AgentState<'a> {
    label: Label,
    wake: u64,
    pos: NodeId,
    arrival: Option<Port>,
    history: Vec<Observation>,
    behavior: Option<&'a mut dyn Behavior>,
}

fn run_engine(
    g: &PortGraph,
    mut agents: [AgentState<'_>; 2],
    max_rounds: u64,
) -> Result<SimResult, SimError> {
    let mut traces = vec![vec![agents[0].pos], vec![agents[1].pos]];
    let mut crossings = 0u64;
    let mut meeting_round = None;
    if agents[0].pos == agents[1].pos {
        meeting_round = Some(0);
    } else {
        for t in 0..max_rounds {
            let before = [agents[0].pos, agents[1].pos];
            let mut moved = [false, false];
            for (i, agent) in agents.iter_mut().enumerate() {
                let Some(behavior) = agent.behavior.as_mut() else {
                    continue; // stationary party, e.g. a treasure
                };
                if t < agent.wake {
                    continue;
                }
                let degree = g.degree(agent.pos);
                agent.history.push(Observation {
                    clock: t - agent.wake,
                    degree,
                    arrival_port: agent.arrival,
                });
                match behavior.act(agent.label, &agent.history) {
                    Action::Idle => agent.arrival = None,
                    Action::TakePort(p) => {
                        let (to, q) =
                            g.step(agent.pos, p)
                                .map_err(|_| SimError::ProtocolViolation {
                                    agent_index: i,
                                    label: agent.label,
                                    round: t + 1,
                                    port: p,
                                    degree,
                                })?;
                        agent.pos = to;
                        agent.arrival = Some(q);
                        moved[i] = true;
                    }
                }
            }
            // A swap of distinct positions in a simple graph can only
            // happen along the one shared edge.
            if moved[0] && moved[1] && agents[0].pos == before[1] && agents[1].pos == before[0] {
                crossings += 1;
            }
            traces[0].push(agents[0].pos);
            traces[1].push(agents[1].pos);
            if agents[0].pos == agents[1].pos {
                meeting_round = Some(t + 1);
                break;
            }
        }
    }
    let later_wake = agents[0].wake.max(agents[1].wake);
    Ok(SimResult {
        meeting_round,
        time: meeting_round.map(|m| m.saturating_sub(later_wake)),
        edge_crossings: crossings,
        traces,
    })
}

fn agent_state<'a>(
    g: &PortGraph,
    config: &AgentConfig,
    behavior: Option<&'a mut dyn Behavior>,
) -> Result<AgentState<'a>, SimError> {
    if config.label == 0 {
        return Err(SimError::InvalidLabel(0));
    }
    g.check_node(config.start)?;
    Ok(AgentState {
        label: config.label,
        wake: config.wake_round,
        pos: config.start,
        arrival: None,
        history: Vec::new(),
        behavior,
    })
}

/// Runs two agents until they share a node or `max_rounds` transitions have
/// elapsed. Starts may coincide, in which case the meeting round is 0.
pub fn run_rendezvous(
    g: &PortGraph,
    a1: &AgentConfig,
    b1: &mut dyn Behavior,
    a2: &AgentConfig,
    b2: &mut dyn Behavior,
    max_rounds: u64,
) -> Result<SimResult, SimError> {
    if a1.label == a2.label {
        return Err(SimError::DuplicateLabels(a1.label));
    }
    let agents = [agent_state(g, a1, Some(b1))?, agent_state(g, a2, Some(b2))?];
    run_engine(g, agents, max_rounds)
}

/// Runs one agent against a stationary treasure. The reported time counts
/// rounds from the agent's wake-up to its first arrival at the treasure.
pub fn run_treasure_hunt(
    g: &PortGraph,
    a: &AgentConfig,
    b: &mut dyn Behavior,
    treasure: NodeId,
    max_rounds: u64,
) -> Result<SimResult, SimError> {
    g.check_node(treasure)?;
    let agents = [
        agent_state(g, a, Some(b))?,
        AgentState {
            label: 0,
            wake: 0,
            pos: treasure,
            arrival: None,
            history: Vec::new(),
            behavior: None,
        },
    ];
    run_engine(g, agents, max_rounds)
}

/// Drives a single agent for exactly `rounds` transitions and returns its
/// trace (length `rounds + 1`). No meeting detection.
pub fn run_walk(
    g: &PortGraph,
    a: &AgentConfig,
    b: &mut dyn Behavior,
    rounds: u64,
) -> Result<Vec<NodeId>, SimError> {
    let mut agent = agent_state(g, a, Some(b))?;
    let mut trace = vec![agent.pos];
    for t in 0..rounds {
        if t >= agent.wake {
            let degree = g.degree(agent.pos);
            agent.history.push(Observation {
                clock: t - agent.wake,
                degree,
                arrival_port: agent.arrival,
            });
            let behavior = agent.behavior.as_mut().expect("walk agent has a behavior");
            match behavior.act(agent.label, &agent.history) {
                Action::Idle => agent.arrival = None,
                Action::TakePort(p) => {
                    let (to, q) =
                        g.step(agent.pos, p)
                            .map_err(|_| SimError::ProtocolViolation {
                                agent_index: 0,
                                label: agent.label,
                                round: t + 1,
                                port: p,
                                degree,
                            })?;
                    agent.pos = to;
                    agent.arrival = Some(q);
                }
            }
        }
        trace.push(agent.pos);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_oriented_ring, PortGraph};

    fn idle() -> impl Behavior {
        |_: Label, _: &[Observation]| Action::Idle
    }

    /// Takes the scripted ports in order, then idles.
    fn script(ports: Vec<Port>) -> impl Behavior {
        move |_: Label, h: &[Observation]| {
            let clock = h.last().unwrap().clock as usize;
            ports
                .get(clock)
                .map_or(Action::Idle, |&p| Action::TakePort(p))
        }
    }

    fn two_node() -> PortGraph {
        PortGraph::from_adjacency(vec![vec![(1, 0)], vec![(0, 0)]]).unwrap()
    }

    #[test]
    fn coincident_starts_meet_at_round_zero() {
        let g = build_oriented_ring(4).unwrap();
        let r = run_rendezvous(
            &g,
            &AgentConfig::new(1, NodeId(2)),
            &mut idle(),
            &AgentConfig::new(2, NodeId(2)),
            &mut idle(),
            10,
        )
        .unwrap();
        assert_eq!(r.meeting_round, Some(0));
        assert_eq!(r.time, Some(0));
        assert_eq!(r.traces[0].len(), 1);
    }

    #[test]
    fn perpetual_swap_never_meets_and_counts_crossings() {
        let g = two_node();
        let swap = |_: Label, _: &[Observation]| Action::TakePort(0);
        let r = run_rendezvous(
            &g,
            &AgentConfig::new(1, NodeId(0)),
            &mut { swap },
            &AgentConfig::new(2, NodeId(1)),
            &mut { swap },
            25,
        )
        .unwrap();
        assert_eq!(r.meeting_round, None);
        assert_eq!(r.time, None);
        assert_eq!(r.edge_crossings, 25);
    }

    #[test]
    fn scripted_walk_meets_idle_agent() {
        let g = build_oriented_ring(6).unwrap();
        let r = run_rendezvous(
            &g,
            &AgentConfig::new(1, NodeId(0)),
            &mut idle(),
            &AgentConfig::new(2, NodeId(3)),
            &mut script(vec![1, 1, 1]),
            60,
        )
        .unwrap();
        assert_eq!(r.meeting_round, Some(3));
        assert_eq!(r.time, Some(3));
        assert_eq!(
            r.traces[1],
            vec![NodeId(3), NodeId(2), NodeId(1), NodeId(0)]
        );
    }

    #[test]
    fn delayed_mover_time_counts_from_its_wake() {
        let g = build_oriented_ring(6).unwrap();
        let r = run_rendezvous(
            &g,
            &AgentConfig::new(1, NodeId(0)),
            &mut idle(),
            &AgentConfig::new(2, NodeId(3)).with_wake(5),
            &mut script(vec![1, 1, 1]),
            60,
        )
        .unwrap();
        assert_eq!(r.meeting_round, Some(8));
        assert_eq!(r.time, Some(3));
        // Dormant until round 5.
        assert_eq!(r.traces[1][..6], vec![NodeId(3); 6]);
    }

    #[test]
    fn meeting_before_later_wake_clamps_time_to_zero() {
        let g = build_oriented_ring(6).unwrap();
        let r = run_rendezvous(
            &g,
            &AgentConfig::new(1, NodeId(0)).with_wake(5),
            &mut idle(),
            &AgentConfig::new(2, NodeId(3)),
            &mut script(vec![1, 1, 1]),
            60,
        )
        .unwrap();
        assert_eq!(r.meeting_round, Some(3));
        assert_eq!(r.time, Some(0));
    }

    #[test]
    fn invalid_port_is_a_protocol_violation() {
        let g = build_oriented_ring(4).unwrap();
        let err = run_rendezvous(
            &g,
            &AgentConfig::new(7, NodeId(0)),
            &mut script(vec![5]),
            &AgentConfig::new(2, NodeId(2)),
            &mut idle(),
            10,
        )
        .unwrap_err();
        assert_eq!(
            err,
            SimError::ProtocolViolation {
                agent_index: 0,
                label: 7,
                round: 1,
                port: 5,
                degree: 2,
            }
        );
    }

    #[test]
    fn duplicate_labels_rejected() {
        let g = build_oriented_ring(4).unwrap();
        let err = run_rendezvous(
            &g,
            &AgentConfig::new(3, NodeId(0)),
            &mut idle(),
            &AgentConfig::new(3, NodeId(2)),
            &mut idle(),
            10,
        )
        .unwrap_err();
        assert_eq!(err, SimError::DuplicateLabels(3));
    }

    #[test]
    fn runs_are_deterministic() {
        let g = build_oriented_ring(8).unwrap();
        let run = || {
            run_rendezvous(
                &g,
                &AgentConfig::new(1, NodeId(1)),
                &mut script(vec![0, 0, 1]),
                &AgentConfig::new(2, NodeId(5)),
                &mut script(vec![1, 0, 1, 0]),
                40,
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn traces_only_use_existing_edges() {
        let g = build_oriented_ring(8).unwrap();
        let r = run_rendezvous(
            &g,
            &AgentConfig::new(1, NodeId(1)),
            &mut script(vec![0, 1, 0, 0]),
            &AgentConfig::new(2, NodeId(5)),
            &mut script(vec![1, 1]),
            40,
        )
        .unwrap();
        for trace in &r.traces {
            for w in trace.windows(2) {
                assert!(w[0] == w[1] || g.port_towards(w[0], w[1]).is_some());
            }
        }
    }

    #[test]
    fn same_behavior_sees_same_observations_anywhere_on_the_ring() {
        // The ring looks identical from every node, so a behavior replayed
        // from a different start must produce the same action sequence.
        let g = build_oriented_ring(6).unwrap();
        let walk = |start: usize| {
            run_walk(
                &g,
                &AgentConfig::new(1, NodeId(start)),
                &mut script(vec![0, 0, 1, 0]),
                6,
            )
            .unwrap()
        };
        let a = walk(0);
        let b = walk(2);
        let shift = |t: &[NodeId]| -> Vec<usize> {
            t.windows(2).map(|w| (w[1].0 + 6 - w[0].0) % 6).collect()
        };
        assert_eq!(shift(&a), shift(&b));
    }

    #[test]
    fn treasure_hunt_examples() {
        let g = build_oriented_ring(8).unwrap();
        // Starting on the treasure.
        let r = run_treasure_hunt(
            &g,
            &AgentConfig::new(1, NodeId(3)),
            &mut idle(),
            NodeId(3),
            10,
        )
        .unwrap();
        assert_eq!(r.time, Some(0));
        // Two scripted steps to the treasure.
        let r = run_treasure_hunt(
            &g,
            &AgentConfig::new(1, NodeId(0)),
            &mut script(vec![0, 0]),
            NodeId(2),
            80,
        )
        .unwrap();
        assert_eq!(r.meeting_round, Some(2));
        assert_eq!(r.time, Some(2));
    }

    #[test]
    fn horizon_exhaustion_reports_no_meeting() {
        let g = build_oriented_ring(8).unwrap();
        let r = run_rendezvous(
            &g,
            &AgentConfig::new(1, NodeId(0)),
            &mut idle(),
            &AgentConfig::new(2, NodeId(4)),
            &mut idle(),
            12,
        )
        .unwrap();
        assert_eq!(r.meeting_round, None);
        assert_eq!(r.traces[0].len(), 13);
    }

    #[test]
    fn sim_result_serializes_with_stable_shape() {
        let g = two_node();
        let r = run_rendezvous(
            &g,
            &AgentConfig::new(1, NodeId(0)),
            &mut script(vec![0]),
            &AgentConfig::new(2, NodeId(1)),
            &mut idle(),
            5,
        )
        .unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"meeting_round":1,"time":1,"edge_crossings":0,"traces":[[0,1],[1,1]]}"#
        );
    }
}
