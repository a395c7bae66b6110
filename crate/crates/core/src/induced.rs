//! The language `M'` induced by an access structure `M`.
//!
//! An instance is a vector of `n` commitments (plus the CRS and the structure
//! they are checked against). A witness is one opening-or-⊥ per position and
//! an inner witness for `M`. Position `i` counts as present iff its opening is
//! not ⊥ and opens `com_i` to the value `i`; the instance is accepted iff the
//! inner witness shows the present positions form a qualified set.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::commitments::{find_opening, verify_opening, CommitError, Commitment, Crs, Opening};
use crate::structures::{AccessStructure, InnerWitness, PartySet, StructureError};
use crate::we::Relation;

/// Largest seed length [`exhaustive_witness_search`] accepts.
pub const SEARCH_MAX_SEED_BITS: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InducedError {
    #[error("instance over {structure} parties has {commitments} commitments and a CRS for {crs}")]
    Shape {
        structure: usize,
        commitments: usize,
        crs: usize,
    },
    #[error("party {0} is in X but has no opening")]
    MissingOpening(usize),
    #[error("search infeasible: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Commit(#[from] CommitError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "InstanceDoc", into = "InstanceDoc")]
pub struct MPrimeInstance {
    crs: Crs,
    commitments: Vec<Commitment>,
    structure: AccessStructure,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    crs: Crs,
    commitments: Vec<String>,
    structure: AccessStructure,
}

impl TryFrom<InstanceDoc> for MPrimeInstance {
    type Error = InducedError;
    fn try_from(doc: InstanceDoc) -> Result<Self, Self::Error> {
        let commitments = doc
            .commitments
            .iter()
            .map(|h| Commitment::from_hex(h, &doc.crs))
            .collect::<Result<Vec<_>, _>>()?;
        MPrimeInstance::new(doc.crs, commitments, doc.structure)
    }
}

impl From<MPrimeInstance> for InstanceDoc {
    fn from(inst: MPrimeInstance) -> Self {
        InstanceDoc {
            commitments: inst.commitments.iter().map(Commitment::to_hex).collect(),
            crs: inst.crs,
            structure: inst.structure,
        }
    }
}

impl MPrimeInstance {
    pub fn new(crs: Crs, commitments: Vec<Commitment>, structure: AccessStructure) -> Result<Self, InducedError> {
        let n = structure.n();
        if commitments.len() != n || crs.n() != n {
            return Err(InducedError::Shape {
                structure: n,
                commitments: commitments.len(),
                crs: crs.n(),
            });
        }
        Ok(Self {
            crs,
            commitments,
            structure,
        })
    }

    /// `(Com(1, r_1), ..., Com(n, r_n))`.
    pub fn honest(crs: Crs, openings: &[Opening], structure: AccessStructure) -> Result<Self, InducedError> {
        let commitments = openings
            .iter()
            .enumerate()
            .map(|(i, op)| crate::commitments::commit(i + 1, op, &crs))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(crs, commitments, structure)
    }

    pub fn n(&self) -> usize {
        self.commitments.len()
    }

    pub fn crs(&self) -> &Crs {
        &self.crs
    }

    pub fn commitments(&self) -> &[Commitment] {
        &self.commitments
    }

    pub fn structure(&self) -> &AccessStructure {
        &self.structure
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MPrimeWitness {
    pub openings: Vec<Option<Opening>>,
    pub inner: InnerWitness,
}

/// `x_i = 1` iff `openings[i]` is present and opens `com_i` to `i`.
/// A present-but-invalid opening counts the same as ⊥.
pub fn derive_characteristic(inst: &MPrimeInstance, openings: &[Option<Opening>]) -> Vec<bool> {
    (0..inst.n())
        .map(|i| {
            let op = openings.get(i).and_then(Option::as_ref);
            verify_opening(i + 1, op, &inst.crs, &inst.commitments[i])
        })
        .collect()
}

/// The `M'` relation.
pub fn mprime_verify(inst: &MPrimeInstance, wit: &MPrimeWitness) -> bool {
    if wit.openings.len() != inst.n() {
        return false;
    }
    let x = PartySet::from_characteristic(&derive_characteristic(inst, &wit.openings));
    inst.structure.verify(&x, &wit.inner)
}

/// `r'_i = r_i` for `p_i ∈ X`, ⊥ otherwise. `openings` is indexed by party
/// (`openings[i]` belongs to party `i + 1`); only members of `X` are read.
pub fn assemble_witness(
    x: &PartySet,
    openings: &[Option<Opening>],
    inner: InnerWitness,
) -> Result<MPrimeWitness, InducedError> {
    let mut out = vec![None; x.n()];
    for p in x.members() {
        let op = openings
            .get(p - 1)
            .and_then(Option::as_ref)
            .ok_or(InducedError::MissingOpening(p))?;
        out[p - 1] = Some(op.clone());
    }
    Ok(MPrimeWitness { openings: out, inner })
}

/// Decides `M'` by enumeration: finds every position that opens to its own
/// index, then searches for an inner witness over that set. Returns a witness
/// iff one exists.
pub fn exhaustive_witness_search(inst: &MPrimeInstance) -> Result<Option<MPrimeWitness>, InducedError> {
    if inst.crs.k() > SEARCH_MAX_SEED_BITS {
        return Err(InducedError::Infeasible(format!(
            "k = {} exceeds {SEARCH_MAX_SEED_BITS}",
            inst.crs.k()
        )));
    }
    let openings = (0..inst.n())
        .map(|i| find_opening(i + 1, &inst.crs, &inst.commitments[i]))
        .collect::<Result<Vec<_>, _>>()?;
    let present = PartySet::from_characteristic(&openings.iter().map(Option::is_some).collect::<Vec<_>>());
    // M is monotone, so the largest openable set is the only one worth trying.
    let inner = match inst.structure.find_witness(&present) {
        Ok(w) => w,
        Err(StructureError::Infeasible(msg)) => return Err(InducedError::Infeasible(msg)),
        Err(e) => return Err(e.into()),
    };
    Ok(inner.map(|inner| MPrimeWitness { openings, inner }))
}

impl Relation for MPrimeInstance {
    type Witness = MPrimeWitness;

    fn encode(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("instances serialize")
    }

    fn decode(bytes: &[u8]) -> Option<Self> {
        serde_json::from_slice(bytes).ok()
    }

    fn holds(&self, witness: &MPrimeWitness) -> bool {
        mprime_verify(self, witness)
    }

    fn is_member(&self) -> Result<bool, String> {
        exhaustive_witness_search(self)
            .map(|w| w.is_some())
            .map_err(|e| e.to_string())
    }
}
