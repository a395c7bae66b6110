//! Secret sharing for monotone NP access structures.
//!
//! Dealing commits to each party's index under a fresh opening and
//! witness-encrypts the secret under the induced instance. Party `i` receives
//! its opening and the common ciphertext. A set `X` reconstructs by
//! supplying its openings (⊥ elsewhere) and an inner witness for `X`.

use rand::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::commitments::{commit, crs_gen, CommitError, Commitment, Crs, Opening};
use crate::compiler::{CnfRelation, CompileError};
use crate::induced::{assemble_witness, InducedError, MPrimeInstance};
use crate::prg::Expander;
use crate::structures::{AccessStructure, InnerWitness, PartySet, StructureError};
use crate::we::{decrypt, embedded_instance, encrypt, Backend, DecryptError, SecretMessage, WeCiphertext, WeError};

pub const SHARE_VERSION: &str = "npshare-share/1";
pub const DEALING_VERSION: &str = "npshare-dealing/1";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SchemeError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Commit(#[from] CommitError),
    #[error(transparent)]
    Induced(#[from] InducedError),
    #[error(transparent)]
    Encrypt(#[from] WeError),
    #[error(transparent)]
    Compile(#[from] CompileError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReconError {
    #[error("no shares supplied")]
    NoShares,
    #[error("shares come from different dealings")]
    MixedDealing,
    #[error("party {0} is in X but its share is missing")]
    MissingShare(usize),
    #[error("X is over {got} parties, the dealing over {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("corrupted dealing: {0}")]
    Corrupted(&'static str),
}

#[derive(Debug, Error)]
pub enum ShareParseError {
    #[error("empty input")]
    Empty,
    #[error("unsupported version {0:?}")]
    Version(String),
    #[error("malformed share: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Commit(#[from] CommitError),
    #[error("party {party} outside 1..={n}")]
    Party { party: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeParams {
    /// Seed length `k` of the commitment.
    pub seed_bits: usize,
    pub expander: Expander,
    pub lambda: usize,
    pub backend: Backend,
}

impl Default for SchemeParams {
    fn default() -> Self {
        Self {
            seed_bits: 8,
            expander: Expander::SplitMix64,
            lambda: 128,
            backend: Backend::Idealized,
        }
    }
}

/// Public data every share carries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShareHeader {
    pub n: usize,
    #[serde(with = "hex_digest")]
    pub structure_digest: [u8; 32],
    pub crs: Crs,
}

mod hex_digest {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &[u8; 32], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&hex::encode(d))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[u8; 32], D::Error> {
        let s = String::deserialize(d)?;
        hex::decode(&s)
            .map_err(D::Error::custom)?
            .try_into()
            .map_err(|_| D::Error::custom("digest must be 32 bytes"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Share {
    pub party: usize,
    pub opening: Opening,
    pub ciphertext: WeCiphertext,
    pub header: ShareHeader,
}

/// Byte sizes of a share's parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShareSize {
    pub opening: usize,
    pub ciphertext: usize,
    pub header: usize,
}

impl ShareSize {
    /// `|r_i| + |ct|`.
    pub fn share(&self) -> usize {
        self.opening + self.ciphertext
    }

    pub fn total(&self) -> usize {
        self.share() + self.header
    }
}

impl Share {
    pub fn size(&self) -> ShareSize {
        let crs = &self.header.crs;
        ShareSize {
            opening: (crs.value_bits() * crs.k()).div_ceil(8),
            ciphertext: self.ciphertext.byte_len(),
            header: 4 + 32 + crs.bits().len().div_ceil(8),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShareDoc {
    version: String,
    party: usize,
    opening: String,
    header: ShareHeader,
    ciphertext: WeCiphertext,
}

pub fn share_serialize(share: &Share) -> Vec<u8> {
    let doc = ShareDoc {
        version: SHARE_VERSION.into(),
        party: share.party,
        opening: share.opening.to_hex(share.header.crs.k()),
        header: share.header.clone(),
        ciphertext: share.ciphertext.clone(),
    };
    serde_json::to_vec_pretty(&doc).expect("shares serialize")
}

pub fn share_parse(bytes: &[u8]) -> Result<Share, ShareParseError> {
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Err(ShareParseError::Empty);
    }
    let value: serde_json::Value = serde_json::from_slice(bytes)?;
    match value.get("version").and_then(|v| v.as_str()) {
        Some(SHARE_VERSION) => {}
        Some(other) => return Err(ShareParseError::Version(other.into())),
        None => return Err(ShareParseError::Version(String::new())),
    }
    let doc: ShareDoc = serde_json::from_value(value)?;
    let n = doc.header.n;
    if doc.party == 0 || doc.party > n {
        return Err(ShareParseError::Party { party: doc.party, n });
    }
    Ok(Share {
        party: doc.party,
        opening: Opening::from_hex(&doc.opening, &doc.header.crs)?,
        ciphertext: doc.ciphertext,
        header: doc.header,
    })
}

/// The output of dealing: the public instance and ciphertext plus one share
/// per party.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dealing {
    pub header: ShareHeader,
    pub instance: MPrimeInstance,
    pub ciphertext: WeCiphertext,
    pub shares: Vec<Share>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PublicDealing {
    pub version: String,
    pub header: ShareHeader,
    pub instance: MPrimeInstance,
    pub ciphertext: WeCiphertext,
}

impl Dealing {
    pub fn public(&self) -> PublicDealing {
        PublicDealing {
            version: DEALING_VERSION.into(),
            header: self.header.clone(),
            instance: self.instance.clone(),
            ciphertext: self.ciphertext.clone(),
        }
    }

    pub fn share(&self, party: usize) -> Option<&Share> {
        self.shares.get(party.checked_sub(1)?)
    }

    /// The shares of the members of `x`.
    pub fn shares_of(&self, x: &PartySet) -> Vec<Share> {
        x.members().map(|p| self.shares[p - 1].clone()).collect()
    }
}

/// A structure together with a CRS and encryption settings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scheme {
    structure: AccessStructure,
    crs: Crs,
    lambda: usize,
    backend: Backend,
}

impl Scheme {
    /// Samples a CRS for `structure`. The CRS is drawn before anything else.
    pub fn new(structure: AccessStructure, params: &SchemeParams, rng: &mut dyn RngCore) -> Result<Self, SchemeError> {
        structure.validate()?;
        if params.backend == Backend::Cnf && params.expander != Expander::Toy {
            return Err(CompileError::Expander.into());
        }
        let crs = crs_gen(structure.n(), params.seed_bits, params.expander, rng)?;
        Self::with_crs(structure, crs, params.lambda, params.backend)
    }

    pub fn with_crs(structure: AccessStructure, crs: Crs, lambda: usize, backend: Backend) -> Result<Self, SchemeError> {
        structure.validate()?;
        if crs.n() != structure.n() {
            return Err(InducedError::Shape {
                structure: structure.n(),
                commitments: structure.n(),
                crs: crs.n(),
            }
            .into());
        }
        Ok(Self {
            structure,
            crs,
            lambda,
            backend,
        })
    }

    pub fn structure(&self) -> &AccessStructure {
        &self.structure
    }

    pub fn crs(&self) -> &Crs {
        &self.crs
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn n(&self) -> usize {
        self.structure.n()
    }

    pub fn header(&self) -> ShareHeader {
        ShareHeader {
            n: self.n(),
            structure_digest: self.structure.digest(),
            crs: self.crs.clone(),
        }
    }

    /// `n` fresh openings.
    pub fn sample_openings(&self, rng: &mut dyn RngCore) -> Vec<Opening> {
        (0..self.n()).map(|_| Opening::random(&self.crs, rng)).collect()
    }

    /// `Com(value, opening)` under this scheme's CRS.
    pub fn commit(&self, value: usize, opening: &Opening) -> Result<Commitment, SchemeError> {
        Ok(commit(value, opening, &self.crs)?)
    }

    /// Encrypts `secret` under the instance built from arbitrary commitments.
    pub fn seal(
        &self,
        commitments: Vec<Commitment>,
        secret: &SecretMessage,
        rng: &mut dyn RngCore,
    ) -> Result<(MPrimeInstance, WeCiphertext), SchemeError> {
        let instance = MPrimeInstance::new(self.crs.clone(), commitments, self.structure.clone())?;
        let ct = match self.backend {
            Backend::Cnf => encrypt(self.backend, self.lambda, &CnfRelation::compile(&instance)?, secret, rng)?,
            Backend::Idealized | Backend::Leaky => encrypt(self.backend, self.lambda, &instance, secret, rng)?,
        };
        Ok((instance, ct))
    }

    /// Hands out shares given the openings.
    pub fn deal_with(
        &self,
        openings: Vec<Opening>,
        secret: &SecretMessage,
        rng: &mut dyn RngCore,
    ) -> Result<Dealing, SchemeError> {
        let commitments = openings
            .iter()
            .enumerate()
            .map(|(i, op)| self.commit(i + 1, op))
            .collect::<Result<Vec<_>, _>>()?;
        let (instance, ciphertext) = self.seal(commitments, secret, rng)?;
        let header = self.header();
        let shares = openings
            .into_iter()
            .enumerate()
            .map(|(i, opening)| Share {
                party: i + 1,
                opening,
                ciphertext: ciphertext.clone(),
                header: header.clone(),
            })
            .collect();
        Ok(Dealing {
            header,
            instance,
            ciphertext,
            shares,
        })
    }

    /// SETUP with this scheme's CRS: fresh openings, then encryption.
    pub fn deal(&self, secret: &SecretMessage, rng: &mut dyn RngCore) -> Result<Dealing, SchemeError> {
        let openings = self.sample_openings(rng);
        self.deal_with(openings, secret, rng)
    }
}

/// SETUP: samples a CRS, then deals.
pub fn setup(
    structure: AccessStructure,
    secret: &SecretMessage,
    params: &SchemeParams,
    rng: &mut dyn RngCore,
) -> Result<Dealing, SchemeError> {
    Scheme::new(structure, params, rng)?.deal(secret, rng)
}

/// RECON: `Ok(None)` is ⊥.
pub fn recon(shares: &[Share], x: &PartySet, w: &InnerWitness) -> Result<Option<SecretMessage>, ReconError> {
    let first = shares.first().ok_or(ReconError::NoShares)?;
    let header = &first.header;
    let ct = &first.ciphertext;
    if shares.iter().any(|s| &s.header != header || &s.ciphertext != ct) {
        return Err(ReconError::MixedDealing);
    }
    if x.n() != header.n {
        return Err(ReconError::Dimension {
            expected: header.n,
            got: x.n(),
        });
    }
    let mut openings: Vec<Option<Opening>> = vec![None; header.n];
    for s in shares {
        if s.party == 0 || s.party > header.n {
            return Err(ReconError::Corrupted("share party out of range"));
        }
        match &openings[s.party - 1] {
            Some(prev) if prev != &s.opening => return Err(ReconError::MixedDealing),
            _ => openings[s.party - 1] = Some(s.opening.clone()),
        }
    }
    let wit = match assemble_witness(x, &openings, w.clone()) {
        Ok(wit) => wit,
        Err(InducedError::MissingOpening(p)) => return Err(ReconError::MissingShare(p)),
        Err(_) => return Err(ReconError::Corrupted("witness assembly")),
    };
    let outcome = match ct.backend() {
        Backend::Cnf => {
            let rel: CnfRelation = embedded_instance(ct).map_err(corrupted)?;
            check_header(header, rel.source())?;
            match rel.lift_witness(&wit) {
                Some(assignment) => decrypt::<CnfRelation>(ct, &assignment),
                None => Err(DecryptError::Rejected),
            }
        }
        Backend::Idealized | Backend::Leaky => {
            let inst: MPrimeInstance = embedded_instance(ct).map_err(corrupted)?;
            check_header(header, &inst)?;
            decrypt::<MPrimeInstance>(ct, &wit)
        }
    };
    match outcome {
        Ok(m) => Ok(Some(m)),
        Err(DecryptError::Rejected) => Ok(None),
        Err(e) => Err(corrupted(e)),
    }
}

fn corrupted(e: DecryptError) -> ReconError {
    match e {
        DecryptError::Corrupted(msg) => ReconError::Corrupted(msg),
        DecryptError::Rejected => ReconError::Corrupted("unexpected rejection"),
    }
}

fn check_header(header: &ShareHeader, inst: &MPrimeInstance) -> Result<(), ReconError> {
    if inst.structure().digest() != header.structure_digest || inst.crs() != &header.crs {
        return Err(ReconError::Corrupted("header does not match the encrypted instance"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn secret() -> SecretMessage {
        SecretMessage::new(b"attack at dawn".to_vec()).unwrap()
    }

    fn params(backend: Backend) -> SchemeParams {
        SchemeParams {
            seed_bits: 6,
            expander: Expander::Toy,
            lambda: 64,
            backend,
        }
    }

    #[test]
    fn threshold_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = setup(AccessStructure::threshold(4, 2), &secret(), &params(Backend::Idealized), &mut rng).unwrap();
        let x = PartySet::new(4, [2, 4]).unwrap();
        assert_eq!(recon(&d.shares_of(&x), &x, &InnerWitness::Empty).unwrap(), Some(secret()));
        let lone = PartySet::new(4, [3]).unwrap();
        assert_eq!(recon(&d.shares_of(&lone), &lone, &InnerWitness::Empty).unwrap(), None);
    }

    #[test]
    fn recon_errors_are_distinct_from_bottom() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = AccessStructure::threshold(3, 2);
        let d1 = setup(s.clone(), &secret(), &params(Backend::Idealized), &mut rng).unwrap();
        let d2 = setup(s, &secret(), &params(Backend::Idealized), &mut rng).unwrap();
        let x = PartySet::new(3, [1, 2]).unwrap();
        let mixed = vec![d1.shares[0].clone(), d2.shares[1].clone()];
        assert_eq!(recon(&mixed, &x, &InnerWitness::Empty), Err(ReconError::MixedDealing));
        assert_eq!(
            recon(&d1.shares[..1], &x, &InnerWitness::Empty),
            Err(ReconError::MissingShare(2))
        );
        assert_eq!(recon(&[], &x, &InnerWitness::Empty), Err(ReconError::NoShares));
    }

    #[test]
    fn cnf_backend_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = setup(AccessStructure::matching(4), &secret(), &params(Backend::Cnf), &mut rng).unwrap();
        let edges = [(1, 3), (2, 4)];
        let x = crate::structures::edge_set(4, &edges).unwrap();
        let w = InnerWitness::Matching(edges.to_vec());
        assert_eq!(recon(&d.shares_of(&x), &x, &w).unwrap(), Some(secret()));
        let bad = InnerWitness::Matching(vec![(1, 2), (3, 4)]);
        assert_eq!(recon(&d.shares_of(&x), &x, &bad).unwrap(), None);
    }

    #[test]
    fn cnf_backend_needs_toy_expander() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = SchemeParams {
            expander: Expander::SplitMix64,
            ..params(Backend::Cnf)
        };
        assert!(matches!(
            setup(AccessStructure::threshold(3, 2), &secret(), &p, &mut rng),
            Err(SchemeError::Compile(CompileError::Expander))
        ));
    }

    #[test]
    fn share_parse_rejects_bad_input() {
        assert!(matches!(share_parse(b""), Err(ShareParseError::Empty)));
        assert!(matches!(share_parse(b"{\"version\":\"other/9\"}"), Err(ShareParseError::Version(_))));
        assert!(matches!(share_parse(b"not json"), Err(ShareParseError::Json(_))));
    }

    #[test]
    fn ciphertext_size_does_not_depend_on_party() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let d = setup(AccessStructure::threshold(5, 3), &secret(), &params(Backend::Idealized), &mut rng).unwrap();
        let sizes: Vec<ShareSize> = d.shares.iter().map(Share::size).collect();
        assert!(sizes.windows(2).all(|w| w[0] == w[1]));
        assert_eq!(sizes[0].opening, (value_bits_for(5) * 6).div_ceil(8));
    }

    fn value_bits_for(n: usize) -> usize {
        crate::commitments::value_bits(n)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn share_round_trip(seed in any::<u64>(), party in 1usize..=4, leaky in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let backend = if leaky { Backend::Leaky } else { Backend::Idealized };
            let d = setup(AccessStructure::threshold(4, 3), &secret(), &params(backend), &mut rng).unwrap();
            let share = d.share(party).unwrap();
            prop_assert_eq!(&share_parse(&share_serialize(share)).unwrap(), share);
        }

        #[test]
        fn qualified_sets_reconstruct(seed in any::<u64>(), mask in 1u64..16) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = setup(AccessStructure::threshold(4, 2), &secret(), &params(Backend::Idealized), &mut rng).unwrap();
            let x = PartySet::from_mask(4, mask);
            let out = recon(&d.shares_of(&x), &x, &InnerWitness::Empty).unwrap();
            prop_assert_eq!(out.is_some(), x.len() >= 2);
        }
    }
}
