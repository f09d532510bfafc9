//! Advice strings: the doubling codec, label bit arithmetic, and the
//! omniscient oracle that builds rendezvous and treasure-hunt advice from
//! full instance knowledge.
//!
//! A sequence of substrings is packed into one advice string by doubling
//! each digit and writing `01` between substrings, so `decode` is an exact
//! inverse: `decode(concat(s)) == s`. Substrings are minimal binary
//! representations (most significant bit first, `0` encoding the value 0).
//! Label bits, by contrast, are indexed least-significant-first starting
//! at 1, which avoids any padding convention for labels of different
//! lengths: bit `i` of label `l` is `(l >> (i-1)) & 1`.

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graph::{shortest_path_ports, GraphError, NodeId, Port, PortGraph};
use crate::Label;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AdviceError {
    #[error("substring list must be non-empty")]
    EmptyInput,
    #[error("substring {0} is empty; every substring must hold at least one bit")]
    EmptySubstring(usize),
    #[error("advice string has odd length {0}")]
    OddLength(usize),
    #[error("invalid digit pair 10 at position {0}")]
    StrayPair(usize),
    #[error("separator at position {0} closes an empty substring")]
    SeparatorAtEmpty(usize),
    #[error("character {ch:?} at position {pos} is not a bit")]
    InvalidBitChar { pos: usize, ch: char },
    #[error("substring value exceeds 64 bits")]
    ValueTooLarge,
    #[error("diff-bit index must be at least 1")]
    ZeroDiffBit,
    #[error("labels must be distinct, both are {0}")]
    EqualLabels(Label),
    #[error("labels must be at least 1")]
    ZeroLabel,
    #[error("agents must start at different nodes, both at node {0}")]
    SamePosition(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// An ordered bit sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new() -> Self {
        BitString(Vec::new())
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        BitString(bits.into_iter().collect())
    }

    /// Minimal binary representation, most significant bit first;
    /// `0` is represented by the single bit `0`.
    pub fn binary_repr(value: u64) -> Self {
        if value == 0 {
            return BitString(vec![false]);
        }
        let width = 64 - value.leading_zeros();
        BitString((0..width).rev().map(|i| (value >> i) & 1 == 1).collect())
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    /// Value of the bits read most-significant-first, if it fits in 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        let mut value: u64 = 0;
        for b in &self.0 {
            value = value.checked_mul(2)?.checked_add(*b as u64)?;
        }
        Some(value)
    }

    /// Value of the bits modulo `m`, defined for any length.
    pub fn value_mod(&self, m: u64) -> u64 {
        assert!(m > 0);
        self.0.iter().fold(0u64, |acc, &b| (acc * 2 + b as u64) % m)
    }
}

impl std::fmt::Display for BitString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BitString {
    type Err = AdviceError;

    fn from_str(s: &str) -> Result<Self, AdviceError> {
        s.chars()
            .enumerate()
            .map(|(pos, ch)| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(AdviceError::InvalidBitChar { pos, ch }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// A bit string produced by [`concat`]. Oracle-produced values are always
/// well-formed; hand-written ones are checked when decoded.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdviceString(pub BitString);

impl AdviceString {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &BitString {
        &self.0
    }
}

impl std::fmt::Display for AdviceString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl std::str::FromStr for AdviceString {
    type Err = AdviceError;

    fn from_str(s: &str) -> Result<Self, AdviceError> {
        s.parse().map(AdviceString)
    }
}

impl Serialize for AdviceString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AdviceString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        BitString::deserialize(deserializer).map(AdviceString)
    }
}

/// Packs non-empty substrings into one advice string by doubling each digit
/// and putting `01` between substrings. Output length is exactly
/// `2 * total_bits + 2 * (count - 1)`.
pub fn concat(substrings: &[BitString]) -> Result<AdviceString, AdviceError> {
    if substrings.is_empty() {
        return Err(AdviceError::EmptyInput);
    }
    let mut out = BitString::new();
    for (i, sub) in substrings.iter().enumerate() {
        if sub.is_empty() {
            return Err(AdviceError::EmptySubstring(i));
        }
        if i > 0 {
            out.push(false);
            out.push(true);
        }
        for b in sub.bits() {
            out.push(b);
            out.push(b);
        }
    }
    Ok(AdviceString(out))
}

/// Exact inverse of [`concat`]. Reads the string in two-bit groups: `00`
/// and `11` are doubled digits, `01` a separator, `10` malformed.
pub fn decode(advice: &AdviceString) -> Result<Vec<BitString>, AdviceError> {
    let bits: Vec<bool> = advice.0.bits().collect();
    if bits.is_empty() {
        return Err(AdviceError::EmptyInput);
    }
    if !bits.len().is_multiple_of(2) {
        return Err(AdviceError::OddLength(bits.len()));
    }
    let mut out = Vec::new();
    let mut current = BitString::new();
    for (i, pair) in bits.chunks(2).enumerate() {
        let pos = 2 * i;
        match (pair[0], pair[1]) {
            (false, false) => current.push(false),
            (true, true) => current.push(true),
            (false, true) => {
                if current.is_empty() {
                    return Err(AdviceError::SeparatorAtEmpty(pos));
                }
                out.push(std::mem::take(&mut current));
            }
            (true, false) => return Err(AdviceError::StrayPair(pos)),
        }
    }
    if current.is_empty() {
        return Err(AdviceError::SeparatorAtEmpty(bits.len()));
    }
    out.push(current);
    Ok(out)
}

/// Smallest index `x >= 1` at which the binary representations of two
/// distinct labels differ, counting from the least significant bit.
pub fn first_diff_bit(l1: Label, l2: Label) -> Result<u32, AdviceError> {
    if l1 == l2 {
        return Err(AdviceError::EqualLabels(l1));
    }
    Ok((l1 ^ l2).trailing_zeros() + 1)
}

/// Bit `x` (1-indexed, least significant first) of a label; 0 for indexes
/// beyond the label's width.
pub fn label_bit(label: Label, x: u32) -> u8 {
    debug_assert!(x >= 1);
    if x > 64 {
        0
    } else {
        ((label >> (x - 1)) & 1) as u8
    }
}

/// Decoded form of rendezvous advice: the distinguishing bit index and the
/// port sequence the moving agent replays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RendezvousAdvice {
    pub diff_bit: u32,
    pub ports: Vec<Port>,
}

impl RendezvousAdvice {
    pub fn encode(&self) -> AdviceString {
        let mut subs = vec![BitString::binary_repr(self.diff_bit as u64)];
        subs.extend(self.ports.iter().map(|&p| BitString::binary_repr(p as u64)));
        concat(&subs).expect("binary representations are never empty")
    }

    pub fn decode(advice: &AdviceString) -> Result<Self, AdviceError> {
        let subs = decode(advice)?;
        let x = subs[0].to_u64().ok_or(AdviceError::ValueTooLarge)?;
        if x == 0 {
            return Err(AdviceError::ZeroDiffBit);
        }
        let ports = subs[1..]
            .iter()
            .map(|s| {
                s.to_u64()
                    .and_then(|v| usize::try_from(v).ok())
                    .ok_or(AdviceError::ValueTooLarge)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RendezvousAdvice {
            diff_bit: u32::try_from(x).unwrap_or(u32::MAX),
            ports,
        })
    }
}

/// Decodes advice in which every substring is a port number, the form
/// produced by [`make_treasure_advice`].
pub fn decode_ports(advice: &AdviceString) -> Result<Vec<Port>, AdviceError> {
    decode(advice)?
        .iter()
        .map(|s| {
            s.to_u64()
                .and_then(|v| usize::try_from(v).ok())
                .ok_or(AdviceError::ValueTooLarge)
        })
        .collect()
}

/// Everything the rendezvous oracle computed for one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RendezvousOracle {
    pub advice: AdviceString,
    /// First label bit index at which the two labels differ.
    pub diff_bit: u32,
    /// The agent whose diff-bit is 1; it replays `ports` while the other
    /// stays inert.
    pub mover_label: Label,
    /// Initial distance between the agents.
    pub distance: usize,
    /// Port sequence from the mover's start to the inert agent's start.
    pub ports: Vec<Port>,
}

/// Computes rendezvous advice for the full instance: the graph, the two
/// distinct starts `u` (agent `l1`) and `v` (agent `l2`), and the two
/// distinct labels. The agent whose first differing label bit is 1 walks a
/// fixed shortest path to the other agent's start.
pub fn rendezvous_oracle(
    g: &PortGraph,
    u: NodeId,
    v: NodeId,
    l1: Label,
    l2: Label,
) -> Result<RendezvousOracle, AdviceError> {
    if l1 == 0 || l2 == 0 {
        return Err(AdviceError::ZeroLabel);
    }
    if u == v {
        return Err(AdviceError::SamePosition(u.0));
    }
    let diff_bit = first_diff_bit(l1, l2)?;
    let (mover_label, mover_start, inert_start) = if label_bit(l1, diff_bit) == 1 {
        (l1, u, v)
    } else {
        (l2, v, u)
    };
    let path = shortest_path_ports(g, mover_start, inert_start)?;
    let advice = RendezvousAdvice {
        diff_bit,
        ports: path.forward.clone(),
    }
    .encode();
    Ok(RendezvousOracle {
        advice,
        diff_bit,
        mover_label,
        distance: path.distance,
        ports: path.forward,
    })
}

/// Rendezvous advice string for the instance; see [`rendezvous_oracle`].
pub fn make_rendezvous_advice(
    g: &PortGraph,
    u: NodeId,
    v: NodeId,
    l1: Label,
    l2: Label,
) -> Result<AdviceString, AdviceError> {
    rendezvous_oracle(g, u, v, l1, l2).map(|o| o.advice)
}

/// What the treasure-hunt oracle computed for one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreasureOracle {
    pub advice: AdviceString,
    pub distance: usize,
    pub ports: Vec<Port>,
}

/// Treasure-hunt advice: the port sequence of a fixed shortest path from
/// the agent's start `u` to the treasure `w`, one substring per port. No
/// leading bit-index substring, since there is no symmetry to break.
pub fn treasure_oracle(g: &PortGraph, u: NodeId, w: NodeId) -> Result<TreasureOracle, AdviceError> {
    if u == w {
        return Err(AdviceError::SamePosition(u.0));
    }
    let path = shortest_path_ports(g, u, w)?;
    let subs: Vec<BitString> = path
        .forward
        .iter()
        .map(|&p| BitString::binary_repr(p as u64))
        .collect();
    Ok(TreasureOracle {
        advice: concat(&subs)?,
        distance: path.distance,
        ports: path.forward,
    })
}

/// Treasure advice string for the instance; see [`treasure_oracle`].
pub fn make_treasure_advice(
    g: &PortGraph,
    u: NodeId,
    w: NodeId,
) -> Result<AdviceString, AdviceError> {
    treasure_oracle(g, u, w).map(|o| o.advice)
}
