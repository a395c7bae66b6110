//! Party sets, monotone access structures and their witness verifiers.
//!
//! Parties are numbered `1..=n`. For the graph kinds (Hamiltonian cycle and
//! perfect matching) the parties are the edge slots of the complete graph on
//! `v` vertices in lexicographic order of `(a, b)`, `a < b`, so `(1,2)` is party
//! 1, `(1,3)` is party 2 and `(v-1,v)` is party `v(v-1)/2`. Vertices are also
//! numbered from 1.
//!
//! JSON form of a structure: `{"kind": K, "n": N, "payload": P}` where
//!
//! | kind               | payload                                             |
//! |--------------------|-----------------------------------------------------|
//! | `threshold`        | `{"k": 2}`                                          |
//! | `monotone-circuit` | `{"witness_bits": m, "nodes": [...]}`               |
//! | `hamiltonian`      | `{"vertices": v}`                                   |
//! | `matching`         | `{"vertices": v}`                                   |
//!
//! Circuit nodes are `{"party": i}`, `{"witness": j}`, `{"not_witness": j}`,
//! `{"const": b}`, `{"and": [a, b]}` and `{"or": [a, b]}`; `and`/`or` refer to
//! earlier nodes by index and the last node is the output. Party inputs are
//! never negated, so every circuit is monotone in the parties; the witness
//! inputs are the non-deterministic ones.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

/// Most parties a structure may have.
pub const MAX_PARTIES: usize = 1 << 16;
/// Largest `n` for exhaustive monotonicity checks.
pub const EXHAUSTIVE_CHECK_MAX_N: usize = 12;
/// Largest non-deterministic input count decided by enumeration.
pub const MAX_ENUMERATED_WITNESS_BITS: usize = 24;
/// Largest vertex count for Hamiltonian-cycle search.
pub const MAX_SEARCH_VERTICES: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("party set over {got} parties used with a structure over {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("party {party} outside 1..={n}")]
    PartyOutOfRange { party: usize, n: usize },
    #[error("deciding {0} structures needs exhaustive witness search; pass Effort::Exhaustive")]
    ExpensiveRequired(&'static str),
    #[error("exhaustive search infeasible: {0}")]
    Infeasible(String),
    #[error("invalid structure: {0}")]
    Invalid(String),
}

/// A subset of the parties `1..=n`, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PartySetDoc", into = "PartySetDoc")]
pub struct PartySet {
    n: usize,
    members: BTreeSet<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartySetDoc {
    n: usize,
    members: Vec<usize>,
}

impl TryFrom<PartySetDoc> for PartySet {
    type Error = StructureError;
    fn try_from(doc: PartySetDoc) -> Result<Self, Self::Error> {
        PartySet::new(doc.n, doc.members)
    }
}

impl From<PartySet> for PartySetDoc {
    fn from(set: PartySet) -> Self {
        PartySetDoc {
            n: set.n,
            members: set.members.into_iter().collect(),
        }
    }
}

impl PartySet {
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self, StructureError> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&p| p == 0 || p > n) {
            return Err(StructureError::PartyOutOfRange { party: bad, n });
        }
        Ok(Self { n, members })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            members: BTreeSet::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            n,
            members: (1..=n).collect(),
        }
    }

    /// Bit `i` of `mask` selects party `i + 1`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= 64);
        Self {
            n,
            members: (0..n).filter(|i| (mask >> i) & 1 == 1).map(|i| i + 1).collect(),
        }
    }

    pub fn from_characteristic(bits: &[bool]) -> Self {
        Self {
            n: bits.len(),
            members: bits
                .iter()
                .enumerate()
                .filter(|(_, b)| **b)
                .map(|(i, _)| i + 1)
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, party: usize) -> bool {
        self.members.contains(&party)
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn is_subset(&self, other: &PartySet) -> bool {
        self.n == other.n && self.members.is_subset(&other.members)
    }

    pub fn with(&self, party: usize) -> Self {
        let mut out = self.clone();
        out.members.insert(party);
        out
    }

    pub fn characteristic(&self) -> Vec<bool> {
        (1..=self.n).map(|i| self.contains(i)).collect()
    }

    pub fn to_mask(&self) -> u64 {
        assert!(self.n <= 64);
        self.members.iter().fold(0, |m, p| m | 1 << (p - 1))
    }
}

/// Number of edge slots of the complete graph on `v` vertices.
pub fn edge_count(v: usize) -> usize {
    v * v.saturating_sub(1) / 2
}

/// Party index of edge `{a, b}` in `K_v`, or `None` for a loop or an
/// out-of-range vertex.
pub fn edge_party(v: usize, a: usize, b: usize) -> Option<usize> {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    if a == 0 || a == b || b > v {
        return None;
    }
    // Slots before row a, then the offset inside it.
    Some((a - 1) * v - (a - 1) * a / 2 + (b - a))
}

/// Endpoints of edge slot `party` in `K_v`.
pub fn edge_endpoints(v: usize, party: usize) -> Option<(usize, usize)> {
    let mut idx = party;
    for a in 1..v {
        let row = v - a;
        if idx <= row {
            return (idx >= 1).then_some((a, a + idx));
        }
        idx -= row;
    }
    None
}

/// Builds the party set of a graph's edges in `K_v`.
pub fn edge_set(v: usize, edges: &[(usize, usize)]) -> Result<PartySet, StructureError> {
    let n = edge_count(v);
    let members = edges
        .iter()
        .map(|&(a, b)| {
            edge_party(v, a, b).ok_or(StructureError::Invalid(format!(
                "({a},{b}) is not an edge of K_{v}"
            )))
        })
        .collect::<Result<Vec<_>, _>>()?;
    PartySet::new(n, members)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Node {
    Party(usize),
    Witness(usize),
    NotWitness(usize),
    Const(bool),
    And(usize, usize),
    Or(usize, usize),
}

/// A monotone non-deterministic circuit: `M(X) = 1` iff some assignment of the
/// witness inputs makes the output node true.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonotoneCircuit {
    pub n: usize,
    pub witness_bits: usize,
    pub nodes: Vec<Node>,
}

impl MonotoneCircuit {
    fn validate(&self) -> Result<(), StructureError> {
        if self.nodes.is_empty() {
            return Err(StructureError::Invalid("circuit has no nodes".into()));
        }
        for (idx, node) in self.nodes.iter().enumerate() {
            let ok = match *node {
                Node::Party(p) => (1..=self.n).contains(&p),
                Node::Witness(j) | Node::NotWitness(j) => j < self.witness_bits,
                Node::Const(_) => true,
                Node::And(a, b) | Node::Or(a, b) => a < idx && b < idx,
            };
            if !ok {
                return Err(StructureError::Invalid(format!("node {idx} ({node:?}) is ill-formed")));
            }
        }
        Ok(())
    }

    /// Evaluates the circuit; `parties[i]` is party `i + 1`.
    pub fn eval(&self, parties: &[bool], witness: &[bool]) -> bool {
        let mut vals = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match *node {
                Node::Party(p) => parties[p - 1],
                Node::Witness(j) => witness[j],
                Node::NotWitness(j) => !witness[j],
                Node::Const(c) => c,
                Node::And(a, b) => vals[a] && vals[b],
                Node::Or(a, b) => vals[a] || vals[b],
            };
            vals.push(v);
        }
        *vals.last().expect("validated non-empty")
    }
}

/// A monotone access structure over `n` parties.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "StructureDoc", into = "StructureDoc")]
pub enum AccessStructure {
    /// Qualified iff at least `k` parties are present.
    Threshold { n: usize, k: usize },
    MonotoneCircuit(MonotoneCircuit),
    /// Qualified iff the edges present contain a Hamiltonian cycle of `K_v`.
    Hamiltonian { vertices: usize },
    /// Qualified iff the edges present contain a perfect matching of `K_v`.
    Matching { vertices: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureKind {
    Threshold,
    MonotoneCircuit,
    Hamiltonian,
    Matching,
}

impl StructureKind {
    pub fn name(self) -> &'static str {
        match self {
            StructureKind::Threshold => "threshold",
            StructureKind::MonotoneCircuit => "monotone-circuit",
            StructureKind::Hamiltonian => "hamiltonian",
            StructureKind::Matching => "matching",
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureDoc {
    kind: String,
    n: usize,
    payload: Value,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ThresholdPayload {
    k: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphPayload {
    vertices: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitPayload {
    witness_bits: usize,
    nodes: Vec<Node>,
}

impl TryFrom<StructureDoc> for AccessStructure {
    type Error = StructureError;

    fn try_from(doc: StructureDoc) -> Result<Self, Self::Error> {
        fn payload<T: serde::de::DeserializeOwned>(v: Value) -> Result<T, StructureError> {
            serde_json::from_value(v).map_err(|e| StructureError::Invalid(e.to_string()))
        }
        let s = match doc.kind.as_str() {
            "threshold" => {
                let p: ThresholdPayload = payload(doc.payload)?;
                AccessStructure::Threshold { n: doc.n, k: p.k }
            }
            "monotone-circuit" => {
                let p: CircuitPayload = payload(doc.payload)?;
                AccessStructure::MonotoneCircuit(MonotoneCircuit {
                    n: doc.n,
                    witness_bits: p.witness_bits,
                    nodes: p.nodes,
                })
            }
            "hamiltonian" => {
                let p: GraphPayload = payload(doc.payload)?;
                AccessStructure::Hamiltonian { vertices: p.vertices }
            }
            "matching" => {
                let p: GraphPayload = payload(doc.payload)?;
                AccessStructure::Matching { vertices: p.vertices }
            }
            other => return Err(StructureError::Invalid(format!("unknown kind {other:?}"))),
        };
        s.validate()?;
        if s.n() != doc.n {
            return Err(StructureError::Invalid(format!(
                "{} over {} vertices has n = {}, not {}",
                s.kind().name(),
                s.vertices().unwrap_or(0),
                s.n(),
                doc.n
            )));
        }
        Ok(s)
    }
}

impl From<AccessStructure> for StructureDoc {
    fn from(s: AccessStructure) -> Self {
        let n = s.n();
        let kind = s.kind().name().to_string();
        let payload = match s {
            AccessStructure::Threshold { k, .. } => serde_json::to_value(ThresholdPayload { k }),
            AccessStructure::MonotoneCircuit(c) => serde_json::to_value(CircuitPayload {
                witness_bits: c.witness_bits,
                nodes: c.nodes,
            }),
            AccessStructure::Hamiltonian { vertices } | AccessStructure::Matching { vertices } => {
                serde_json::to_value(GraphPayload { vertices })
            }
        }
        .expect("payloads serialize");
        StructureDoc { kind, n, payload }
    }
}

/// How much work [`AccessStructure::evaluate`] may do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Effort {
    /// Polynomial-time decision only.
    Cheap,
    /// Allow exhaustive witness search (exponential; desk scale only).
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Sampled { trials: usize },
}

/// The non-deterministic witness attesting that a set is qualified.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum InnerWitness {
    /// Threshold structures need no witness.
    Empty,
    /// Assignment to a monotone circuit's witness inputs.
    Bits(Vec<bool>),
    /// A permutation of the vertices; the cycle closes from last to first.
    Cycle(Vec<usize>),
    /// Edge list of a perfect matching.
    Matching(Vec<(usize, usize)>),
}

impl InnerWitness {
    /// Compact byte encoding: a tag byte, a little-endian `u16` count, then
    /// one byte per bit or `u16` per vertex.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let push16 = |out: &mut Vec<u8>, x: usize| out.extend_from_slice(&(x as u16).to_le_bytes());
        match self {
            InnerWitness::Empty => out.push(0),
            InnerWitness::Bits(bits) => {
                out.push(1);
                push16(&mut out, bits.len());
                out.extend(bits.iter().map(|&b| b as u8));
            }
            InnerWitness::Cycle(vs) => {
                out.push(2);
                push16(&mut out, vs.len());
                for &v in vs {
                    push16(&mut out, v);
                }
            }
            InnerWitness::Matching(es) => {
                out.push(3);
                push16(&mut out, es.len());
                for &(a, b) in es {
                    push16(&mut out, a);
                    push16(&mut out, b);
                }
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Option<Self> {
        let (&tag, rest) = bytes.split_first()?;
        if tag == 0 {
            return rest.is_empty().then_some(InnerWitness::Empty);
        }
        if rest.len() < 2 {
            return None;
        }
        let count = u16::from_le_bytes([rest[0], rest[1]]) as usize;
        let body = &rest[2..];
        let words = |len: usize| -> Option<Vec<usize>> {
            (body.len() == 2 * len).then(|| {
                body.chunks(2)
                    .map(|c| u16::from_le_bytes([c[0], c[1]]) as usize)
                    .collect()
            })
        };
        match tag {
            1 => {
                if body.len() != count || body.iter().any(|&b| b > 1) {
                    return None;
                }
                Some(InnerWitness::Bits(body.iter().map(|&b| b == 1).collect()))
            }
            2 => words(count).map(InnerWitness::Cycle),
            3 => words(2 * count)
                .map(|w| InnerWitness::Matching(w.chunks(2).map(|c| (c[0], c[1])).collect())),
            _ => None,
        }
    }
}

impl AccessStructure {
    pub fn threshold(n: usize, k: usize) -> Self {
        AccessStructure::Threshold { n, k }
    }

    pub fn hamiltonian(vertices: usize) -> Self {
        AccessStructure::Hamiltonian { vertices }
    }

    pub fn matching(vertices: usize) -> Self {
        AccessStructure::Matching { vertices }
    }

    pub fn n(&self) -> usize {
        match self {
            AccessStructure::Threshold { n, .. } => *n,
            AccessStructure::MonotoneCircuit(c) => c.n,
            AccessStructure::Hamiltonian { vertices } | AccessStructure::Matching { vertices } => {
                edge_count(*vertices)
            }
        }
    }

    pub fn kind(&self) -> StructureKind {
        match self {
            AccessStructure::Threshold { .. } => StructureKind::Threshold,
            AccessStructure::MonotoneCircuit(_) => StructureKind::MonotoneCircuit,
            AccessStructure::Hamiltonian { .. } => StructureKind::Hamiltonian,
            AccessStructure::Matching { .. } => StructureKind::Matching,
        }
    }

    pub fn vertices(&self) -> Option<usize> {
        match self {
            AccessStructure::Hamiltonian { vertices } | AccessStructure::Matching { vertices } => {
                Some(*vertices)
            }
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), StructureError> {
        let n = self.n();
        if n == 0 || n > MAX_PARTIES {
            return Err(StructureError::Invalid(format!("party count {n} outside 1..={MAX_PARTIES}")));
        }
        match self {
            AccessStructure::Threshold { k, .. } if *k == 0 => {
                Err(StructureError::Invalid("threshold k must be at least 1".into()))
            }
            AccessStructure::MonotoneCircuit(c) => c.validate(),
            AccessStructure::Hamiltonian { vertices } if *vertices < 3 => {
                Err(StructureError::Invalid("hamiltonian needs at least 3 vertices".into()))
            }
            AccessStructure::Matching { vertices } if *vertices < 2 => {
                Err(StructureError::Invalid("matching needs at least 2 vertices".into()))
            }
            _ => Ok(()),
        }
    }

    fn check_dims(&self, x: &PartySet) -> Result<(), StructureError> {
        if x.n() != self.n() {
            return Err(StructureError::DimensionMismatch {
                expected: self.n(),
                got: x.n(),
            });
        }
        Ok(())
    }

    /// Returns `M(X)`.
    pub fn evaluate(&self, x: &PartySet, effort: Effort) -> Result<bool, StructureError> {
        self.check_dims(x)?;
        match self {
            AccessStructure::Threshold { k, .. } => Ok(x.len() >= *k),
            AccessStructure::MonotoneCircuit(c) if c.witness_bits == 0 => {
                Ok(c.eval(&x.characteristic(), &[]))
            }
            _ if effort == Effort::Cheap => Err(StructureError::ExpensiveRequired(self.kind().name())),
            _ => Ok(self.find_witness(x)?.is_some()),
        }
    }

    /// Searches for a witness that `X` is qualified.
    pub fn find_witness(&self, x: &PartySet) -> Result<Option<InnerWitness>, StructureError> {
        self.check_dims(x)?;
        match self {
            AccessStructure::Threshold { k, .. } => Ok((x.len() >= *k).then_some(InnerWitness::Empty)),
            AccessStructure::MonotoneCircuit(c) => {
                if c.witness_bits > MAX_ENUMERATED_WITNESS_BITS {
                    return Err(StructureError::Infeasible(format!(
                        "{} witness bits exceeds {MAX_ENUMERATED_WITNESS_BITS}",
                        c.witness_bits
                    )));
                }
                let parties = x.characteristic();
                Ok((0u64..1 << c.witness_bits)
                    .map(|m| (0..c.witness_bits).map(|j| (m >> j) & 1 == 1).collect::<Vec<_>>())
                    .find(|w| c.eval(&parties, w))
                    .map(InnerWitness::Bits))
            }
            AccessStructure::Hamiltonian { vertices } => {
                if *vertices > MAX_SEARCH_VERTICES {
                    return Err(StructureError::Infeasible(format!(
                        "{vertices} vertices exceeds {MAX_SEARCH_VERTICES}"
                    )));
                }
                Ok(hamiltonian_search(*vertices, x).map(InnerWitness::Cycle))
            }
            AccessStructure::Matching { vertices } => {
                let mut covered = vec![false; *vertices + 1];
                let mut edges = Vec::new();
                Ok(matching_search(*vertices, x, &mut covered, &mut edges)
                    .then_some(InnerWitness::Matching(edges)))
            }
        }
    }

    /// `Ver_M(X, w)`: total, returns `false` on any malformed witness.
    pub fn verify(&self, x: &PartySet, w: &InnerWitness) -> bool {
        if x.n() != self.n() {
            return false;
        }
        match (self, w) {
            (AccessStructure::Threshold { k, .. }, InnerWitness::Empty) => x.len() >= *k,
            (AccessStructure::MonotoneCircuit(c), InnerWitness::Bits(bits)) => {
                bits.len() == c.witness_bits && c.eval(&x.characteristic(), bits)
            }
            (AccessStructure::Hamiltonian { vertices }, InnerWitness::Cycle(cycle)) => {
                verify_cycle(*vertices, x, cycle)
            }
            (AccessStructure::Matching { vertices }, InnerWitness::Matching(edges)) => {
                verify_matching(*vertices, x, edges)
            }
            _ => false,
        }
    }

    /// [`verify`](Self::verify) on a byte-encoded witness.
    pub fn verify_bytes(&self, x: &PartySet, bytes: &[u8]) -> bool {
        InnerWitness::from_bytes(bytes).is_some_and(|w| self.verify(x, &w))
    }

    /// SHA-256 of the canonical JSON description.
    pub fn digest(&self) -> [u8; 32] {
        crate::digest::sha256(&serde_json::to_vec(self).expect("structures serialize"))
    }
}

fn verify_cycle(v: usize, x: &PartySet, cycle: &[usize]) -> bool {
    if cycle.len() != v || v < 3 {
        return false;
    }
    let mut seen = vec![false; v + 1];
    for &u in cycle {
        if u == 0 || u > v || seen[u] {
            return false;
        }
        seen[u] = true;
    }
    (0..v).all(|i| {
        edge_party(v, cycle[i], cycle[(i + 1) % v]).is_some_and(|p| x.contains(p))
    })
}

fn verify_matching(v: usize, x: &PartySet, edges: &[(usize, usize)]) -> bool {
    if !v.is_multiple_of(2) || edges.len() != v / 2 {
        return false;
    }
    let mut covered = vec![false; v + 1];
    for &(a, b) in edges {
        let Some(p) = edge_party(v, a, b) else {
            return false;
        };
        if !x.contains(p) || covered[a] || covered[b] {
            return false;
        }
        covered[a] = true;
        covered[b] = true;
    }
    true
}

fn hamiltonian_search(v: usize, x: &PartySet) -> Option<Vec<usize>> {
    fn extend(v: usize, x: &PartySet, path: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let last = *path.last().unwrap();
        if path.len() == v {
            return edge_party(v, last, path[0]).is_some_and(|p| x.contains(p));
        }
        for next in 2..=v {
            if used[next] || !edge_party(v, last, next).is_some_and(|p| x.contains(p)) {
                continue;
            }
            used[next] = true;
            path.push(next);
            if extend(v, x, path, used) {
                return true;
            }
            path.pop();
            used[next] = false;
        }
        false
    }
    let mut path = vec![1];
    let mut used = vec![false; v + 1];
    used[1] = true;
    extend(v, x, &mut path, &mut used).then_some(path)
}

fn matching_search(
    v: usize,
    x: &PartySet,
    covered: &mut [bool],
    edges: &mut Vec<(usize, usize)>,
) -> bool {
    let Some(a) = (1..=v).find(|&u| !covered[u]) else {
        return true;
    };
    covered[a] = true;
    for b in a + 1..=v {
        if covered[b] || !edge_party(v, a, b).is_some_and(|p| x.contains(p)) {
            continue;
        }
        covered[b] = true;
        edges.push((a, b));
        if matching_search(v, x, covered, edges) {
            return true;
        }
        edges.pop();
        covered[b] = false;
    }
    covered[a] = false;
    false
}

/// Looks for a violating pair `X ⊆ Y` with `M(X) = 1`, `M(Y) = 0` of an
/// arbitrary predicate over `n` parties. Returns `true` if none is found.
pub fn check_monotone_by(
    n: usize,
    mode: CheckMode,
    rng_seed: u64,
    mut predicate: impl FnMut(&PartySet) -> Result<bool, StructureError>,
) -> Result<bool, StructureError> {
    match mode {
        CheckMode::Exhaustive => {
            if n > EXHAUSTIVE_CHECK_MAX_N {
                return Err(StructureError::Infeasible(format!(
                    "exhaustive check needs n <= {EXHAUSTIVE_CHECK_MAX_N}, got {n}"
                )));
            }
            let table = (0u64..1 << n)
                .map(|m| predicate(&PartySet::from_mask(n, m)))
                .collect::<Result<Vec<_>, _>>()?;
            // Single-element supersets suffice by transitivity.
            Ok((0u64..1 << n).all(|m| {
                !table[m as usize] || (0..n).all(|i| table[(m | 1 << i) as usize])
            }))
        }
        CheckMode::Sampled { trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            for _ in 0..trials {
                let x = PartySet::new(n, (1..=n).filter(|_| rng.gen_bool(0.5))).expect("in range");
                let extra: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.5)).collect();
                let y = PartySet::new(n, x.members().chain(extra)).expect("in range");
                if predicate(&x)? && !predicate(&y)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Monotonicity check of a structure; NP kinds are decided by exhaustive search.
pub fn check_monotone(
    structure: &AccessStructure,
    mode: CheckMode,
    rng_seed: u64,
) -> Result<bool, StructureError> {
    check_monotone_by(structure.n(), mode, rng_seed, |x| {
        structure.evaluate(x, Effort::Exhaustive)
    })
}
