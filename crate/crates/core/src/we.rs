//! The witness-encryption contract, realized by experiment backends.
//!
//! **None of these backends is a secure witness encryption.** They model the
//! functionality so the scheme and the security harness can run end to end:
//!
//! * [`Backend::Idealized`] embeds the instance and a random key in the
//!   ciphertext and releases the message only after `R(x, w)` accepts.
//! * [`Backend::Leaky`] is the idealized backend plus a deliberate leak: when
//!   the instance is in the language (decided by exhaustive search at
//!   encryption time) the message is also stored in the clear. For instances
//!   outside the language it behaves exactly like the idealized backend.
//! * [`Backend::Cnf`] is the idealized mechanism over compiled CNF instances,
//!   where the witness is a satisfying assignment (see
//!   [`crate::compiler::CnfRelation`]).
//!
//! The symmetric layer XORs the message with a SplitMix64 keystream and
//! appends a 64-bit checksum of the plaintext.
//!
//! Payload layout:
//!
//! ```text
//! u32 instance_len | instance | u8 key_len | key | u64 checksum
//!   | u8 leak_flag | [message if leak_flag = 1] | masked message
//! ```
//!
//! All integers are little-endian. The JSON envelope is
//! `{"backend", "instance_digest": hex, "msg_len", "payload": hex}`.

use rand::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digest::sha256;
use crate::prg::{mix64, SplitMix64, GOLDEN_GAMMA};

/// Smallest accepted security parameter.
pub const MIN_LAMBDA: usize = 8;
/// Largest accepted security parameter (the key length is one byte).
pub const MAX_LAMBDA: usize = 255 * 8;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    #[default]
    Idealized,
    Leaky,
    Cnf,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Idealized => "idealized",
            Backend::Leaky => "leaky",
            Backend::Cnf => "cnf",
        }
    }
}

/// An NP relation usable as a witness-encryption instance.
pub trait Relation: Sized {
    type Witness: ?Sized;

    /// True for compiled CNF instances, which only the CNF backend accepts.
    const IS_CNF: bool = false;

    /// Canonical encoding embedded in ciphertexts.
    fn encode(&self) -> Vec<u8>;
    fn decode(bytes: &[u8]) -> Option<Self>;

    /// `R(x, w)`. Must be total.
    fn holds(&self, witness: &Self::Witness) -> bool;

    /// Whether some witness exists. Only the leaky backend calls this.
    fn is_member(&self) -> Result<bool, String>;
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeError {
    #[error("security parameter {0} outside {MIN_LAMBDA}..={MAX_LAMBDA}")]
    Lambda(usize),
    #[error("messages must be non-empty")]
    EmptyMessage,
    #[error("backend {0:?} does not accept this relation")]
    BackendMismatch(Backend),
    #[error("instance too large: {0} bytes")]
    Oversized(usize),
    #[error("leaky backend could not decide membership: {0}")]
    Undecidable(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecryptError {
    /// The witness does not satisfy the relation (the ⊥ outcome).
    #[error("witness rejected")]
    Rejected,
    #[error("corrupted ciphertext: {0}")]
    Corrupted(&'static str),
}

/// A non-empty secret.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SecretMessage(Vec<u8>);

impl SecretMessage {
    pub fn new(bytes: Vec<u8>) -> Result<Self, WeError> {
        if bytes.is_empty() {
            return Err(WeError::EmptyMessage);
        }
        Ok(Self(bytes))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CiphertextDoc", into = "CiphertextDoc")]
pub struct WeCiphertext {
    backend: Backend,
    instance_digest: [u8; 32],
    msg_len: usize,
    payload: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CiphertextDoc {
    backend: Backend,
    instance_digest: String,
    msg_len: usize,
    payload: String,
}

impl TryFrom<CiphertextDoc> for WeCiphertext {
    type Error = String;
    fn try_from(doc: CiphertextDoc) -> Result<Self, Self::Error> {
        let digest = hex::decode(&doc.instance_digest).map_err(|e| e.to_string())?;
        Ok(WeCiphertext {
            backend: doc.backend,
            instance_digest: digest
                .try_into()
                .map_err(|_| "instance_digest must be 32 bytes".to_string())?,
            msg_len: doc.msg_len,
            payload: hex::decode(&doc.payload).map_err(|e| e.to_string())?,
        })
    }
}

impl From<WeCiphertext> for CiphertextDoc {
    fn from(ct: WeCiphertext) -> Self {
        CiphertextDoc {
            backend: ct.backend,
            instance_digest: hex::encode(ct.instance_digest),
            msg_len: ct.msg_len,
            payload: hex::encode(ct.payload),
        }
    }
}

impl WeCiphertext {
    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn instance_digest(&self) -> &[u8; 32] {
        &self.instance_digest
    }

    pub fn msg_len(&self) -> usize {
        self.msg_len
    }

    pub fn payload(&self) -> &[u8] {
        &self.payload
    }

    /// Size of the serialized ciphertext in bytes (backend tag, digest,
    /// length and payload).
    pub fn byte_len(&self) -> usize {
        1 + 32 + 8 + self.payload.len()
    }

    #[cfg(test)]
    pub(crate) fn payload_mut(&mut self) -> &mut Vec<u8> {
        &mut self.payload
    }
}

fn keystream_seed(key: &[u8]) -> u64 {
    key.chunks(8).fold(GOLDEN_GAMMA, |s, chunk| {
        let mut buf = [0u8; 8];
        buf[..chunk.len()].copy_from_slice(chunk);
        mix64(s ^ u64::from_le_bytes(buf))
    })
}

fn apply_keystream(key: &[u8], data: &mut [u8]) {
    let mut stream = SplitMix64::new(keystream_seed(key));
    for chunk in data.chunks_mut(8) {
        let ks = stream.next_u64().to_le_bytes();
        for (b, k) in chunk.iter_mut().zip(ks) {
            *b ^= k;
        }
    }
}

/// 64-bit checksum of a message.
pub fn checksum(msg: &[u8]) -> u64 {
    let h = msg.chunks(8).fold(GOLDEN_GAMMA, |h, chunk| {
        let mut buf = [0u8; 8];
        buf[..chunk.len()].copy_from_slice(chunk);
        mix64(h ^ u64::from_le_bytes(buf))
    });
    mix64(h ^ msg.len() as u64)
}

fn check_backend<R: Relation>(backend: Backend) -> bool {
    R::IS_CNF == (backend == Backend::Cnf)
}

/// `Encrypt(1^λ, x, M)`.
pub fn encrypt<R: Relation>(
    backend: Backend,
    lambda: usize,
    instance: &R,
    msg: &SecretMessage,
    rng: &mut dyn RngCore,
) -> Result<WeCiphertext, WeError> {
    if !(MIN_LAMBDA..=MAX_LAMBDA).contains(&lambda) {
        return Err(WeError::Lambda(lambda));
    }
    if !check_backend::<R>(backend) {
        return Err(WeError::BackendMismatch(backend));
    }
    let encoded = instance.encode();
    let instance_len = u32::try_from(encoded.len()).map_err(|_| WeError::Oversized(encoded.len()))?;
    let leak = match backend {
        Backend::Leaky => instance.is_member().map_err(WeError::Undecidable)?,
        Backend::Idealized | Backend::Cnf => false,
    };

    let mut key = vec![0u8; lambda.div_ceil(8)];
    rng.fill_bytes(&mut key);
    let mut masked = msg.as_bytes().to_vec();
    apply_keystream(&key, &mut masked);

    let mut payload = Vec::with_capacity(encoded.len() + key.len() + 2 * msg.len() + 16);
    payload.extend_from_slice(&instance_len.to_le_bytes());
    payload.extend_from_slice(&encoded);
    payload.push(key.len() as u8);
    payload.extend_from_slice(&key);
    payload.extend_from_slice(&checksum(msg.as_bytes()).to_le_bytes());
    payload.push(leak as u8);
    if leak {
        payload.extend_from_slice(msg.as_bytes());
    }
    payload.extend_from_slice(&masked);

    Ok(WeCiphertext {
        backend,
        instance_digest: sha256(&encoded),
        msg_len: msg.len(),
        payload,
    })
}

struct Parsed<'a> {
    instance: &'a [u8],
    key: &'a [u8],
    checksum: u64,
    leak: Option<&'a [u8]>,
    masked: &'a [u8],
}

fn take<'a>(buf: &mut &'a [u8], n: usize) -> Result<&'a [u8], DecryptError> {
    if buf.len() < n {
        return Err(DecryptError::Corrupted("truncated payload"));
    }
    let (head, tail) = buf.split_at(n);
    *buf = tail;
    Ok(head)
}

fn parse(ct: &WeCiphertext) -> Result<Parsed<'_>, DecryptError> {
    let mut buf = ct.payload.as_slice();
    let len = u32::from_le_bytes(take(&mut buf, 4)?.try_into().unwrap()) as usize;
    let instance = take(&mut buf, len)?;
    if sha256(instance) != ct.instance_digest {
        return Err(DecryptError::Corrupted("instance digest mismatch"));
    }
    let key_len = take(&mut buf, 1)?[0] as usize;
    let key = take(&mut buf, key_len)?;
    let checksum = u64::from_le_bytes(take(&mut buf, 8)?.try_into().unwrap());
    let leak = match take(&mut buf, 1)?[0] {
        0 => None,
        1 => Some(take(&mut buf, ct.msg_len)?),
        _ => return Err(DecryptError::Corrupted("bad leak flag")),
    };
    let masked = take(&mut buf, ct.msg_len)?;
    if !buf.is_empty() {
        return Err(DecryptError::Corrupted("trailing bytes"));
    }
    if ct.msg_len == 0 {
        return Err(DecryptError::Corrupted("empty message"));
    }
    Ok(Parsed {
        instance,
        key,
        checksum,
        leak,
        masked,
    })
}

/// The instance bound into a ciphertext.
pub fn embedded_instance<R: Relation>(ct: &WeCiphertext) -> Result<R, DecryptError> {
    let parsed = parse(ct)?;
    R::decode(parsed.instance).ok_or(DecryptError::Corrupted("instance does not decode"))
}

/// `Decrypt(ct, w)`: the message if `R(x, w)` holds for the bound instance.
pub fn decrypt<R: Relation>(ct: &WeCiphertext, witness: &R::Witness) -> Result<SecretMessage, DecryptError> {
    if !check_backend::<R>(ct.backend) {
        return Err(DecryptError::Corrupted("backend tag does not match relation"));
    }
    let parsed = parse(ct)?;
    let instance = R::decode(parsed.instance).ok_or(DecryptError::Corrupted("instance does not decode"))?;
    if !instance.holds(witness) {
        return Err(DecryptError::Rejected);
    }
    let mut msg = parsed.masked.to_vec();
    apply_keystream(parsed.key, &mut msg);
    if checksum(&msg) != parsed.checksum {
        return Err(DecryptError::Corrupted("checksum mismatch"));
    }
    Ok(SecretMessage(msg))
}

/// What the leaky backend exposes without any witness.
pub fn leaked_message(ct: &WeCiphertext) -> Option<SecretMessage> {
    if ct.backend != Backend::Leaky {
        return None;
    }
    parse(ct).ok()?.leak.map(|m| SecretMessage(m.to_vec()))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Toy relation: knowledge of a preimage `w` with `w * w mod 65521 == x`.
    #[derive(Debug, Clone, PartialEq)]
    pub struct SquareRoot(pub u32);

    impl Relation for SquareRoot {
        type Witness = u32;
        fn encode(&self) -> Vec<u8> {
            self.0.to_le_bytes().to_vec()
        }
        fn decode(bytes: &[u8]) -> Option<Self> {
            Some(SquareRoot(u32::from_le_bytes(bytes.try_into().ok()?)))
        }
        fn holds(&self, w: &u32) -> bool {
            (*w as u64 * *w as u64) % 65521 == self.0 as u64
        }
        fn is_member(&self) -> Result<bool, String> {
            Ok((0u32..65521).any(|w| self.holds(&w)))
        }
    }

    fn msg(bytes: &[u8]) -> SecretMessage {
        SecretMessage::new(bytes.to_vec()).unwrap()
    }

    #[test]
    fn idealized_round_trip_and_rejection() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let inst = SquareRoot(49);
        let ct = encrypt(Backend::Idealized, 16, &inst, &msg(b"hello"), &mut rng).unwrap();
        assert_eq!(decrypt::<SquareRoot>(&ct, &7).unwrap(), msg(b"hello"));
        assert_eq!(decrypt::<SquareRoot>(&ct, &65514).unwrap(), msg(b"hello"));
        assert_eq!(decrypt::<SquareRoot>(&ct, &8), Err(DecryptError::Rejected));
        // a witness for another instance
        assert_eq!(decrypt::<SquareRoot>(&ct, &5), Err(DecryptError::Rejected));
        assert_eq!(leaked_message(&ct), None);
    }

    #[test]
    fn idealized_never_releases_on_invalid_witnesses() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let inst = SquareRoot(2);
        let ct = encrypt(Backend::Idealized, 16, &inst, &msg(b"s"), &mut rng).unwrap();
        for w in 0..=u16::MAX as u32 {
            let out = decrypt::<SquareRoot>(&ct, &w);
            assert_eq!(out.is_ok(), inst.holds(&w));
        }
    }

    #[test]
    fn leaky_leaks_only_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let member = encrypt(Backend::Leaky, 16, &SquareRoot(49), &msg(b"abc"), &mut rng).unwrap();
        assert_eq!(leaked_message(&member), Some(msg(b"abc")));
        assert_eq!(decrypt::<SquareRoot>(&member, &7).unwrap(), msg(b"abc"));
        // 17 is a quadratic non-residue mod 65521
        let outsider = encrypt(Backend::Leaky, 16, &SquareRoot(17), &msg(b"abc"), &mut rng).unwrap();
        assert_eq!(leaked_message(&outsider), None);
    }

    #[test]
    fn randomized_encryption_deterministic_decryption() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = encrypt(Backend::Idealized, 64, &SquareRoot(4), &msg(b"same"), &mut rng).unwrap();
        let b = encrypt(Backend::Idealized, 64, &SquareRoot(4), &msg(b"same"), &mut rng).unwrap();
        assert_ne!(a.payload(), b.payload());
        assert_eq!(decrypt::<SquareRoot>(&a, &2).unwrap(), decrypt::<SquareRoot>(&b, &2).unwrap());
    }

    #[test]
    fn length_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for len in 1..=64 {
            let m: Vec<u8> = (0..len as u8).collect();
            let ct = encrypt(Backend::Idealized, 16, &SquareRoot(1), &msg(&m), &mut rng).unwrap();
            assert_eq!(ct.msg_len(), len);
            assert_eq!(decrypt::<SquareRoot>(&ct, &1).unwrap().len(), len);
        }
    }

    #[test]
    fn corruption_is_diagnosed() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let ct = encrypt(Backend::Idealized, 16, &SquareRoot(1), &msg(b"xyz"), &mut rng).unwrap();

        let mut flipped = ct.clone();
        let last = flipped.payload_mut().len() - 1;
        flipped.payload_mut()[last] ^= 1;
        assert_eq!(
            decrypt::<SquareRoot>(&flipped, &1),
            Err(DecryptError::Corrupted("checksum mismatch"))
        );

        let mut truncated = ct.clone();
        truncated.payload_mut().pop();
        assert!(matches!(decrypt::<SquareRoot>(&truncated, &1), Err(DecryptError::Corrupted(_))));

        let mut swapped = ct.clone();
        swapped.payload_mut()[4] ^= 0xff;
        assert_eq!(
            decrypt::<SquareRoot>(&swapped, &1),
            Err(DecryptError::Corrupted("instance digest mismatch"))
        );
    }

    #[test]
    fn parameter_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(
            encrypt(Backend::Idealized, 4, &SquareRoot(1), &msg(b"a"), &mut rng),
            Err(WeError::Lambda(4))
        );
        assert_eq!(
            encrypt(Backend::Cnf, 16, &SquareRoot(1), &msg(b"a"), &mut rng),
            Err(WeError::BackendMismatch(Backend::Cnf))
        );
        assert_eq!(SecretMessage::new(vec![]), Err(WeError::EmptyMessage));
    }

    #[test]
    fn envelope_json() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let ct = encrypt(Backend::Leaky, 16, &SquareRoot(9), &msg(b"m"), &mut rng).unwrap();
        let v: serde_json::Value = serde_json::to_value(&ct).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|s| s.as_str()).collect();
        assert_eq!(keys, ["backend", "instance_digest", "msg_len", "payload"]);
        assert_eq!(v["backend"], "leaky");
        let back: WeCiphertext = serde_json::from_value(v).unwrap();
        assert_eq!(back, ct);
    }
}
