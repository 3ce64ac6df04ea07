//! Public-key cryptosystem contract and instantiations.
//!
//! A cryptosystem here is a pair of length-typed maps between k_b-bit
//! plaintexts and n_b-bit ciphertexts with dec(enc(m)) = m. The claimed
//! security level b is metadata carried from the literature for each
//! parameter set, never computed: this artifact asserts the mapping from
//! parameters to the published level, not cryptanalytic strength.

mod keyfile;
mod mceliece;

pub use keyfile::{read_private_key, read_public_key, write_private_key, write_public_key};
pub use mceliece::{mceliece_keygen, McElieceKeyPair, McElieceParams, McEliecePrivateKey, McEliecePublicKey};

use std::fmt;

use rand::RngCore;

use crate::bits::BitVec;
use crate::galois::GaloisError;

#[derive(Debug)]
pub enum CryptoError {
    /// Input bit-length does not match the scheme's k_b or n_b.
    LengthMismatch { expected: usize, got: usize },
    /// Ciphertext carries more than t errors (or is otherwise undecodable).
    DecodingFailure,
    /// Parameters admit no code (k_b = n_b - t d < 1, n_b > 2^d, ...).
    InvalidParameters(String),
    /// Keygen could not find a suitable Goppa polynomial within the retry
    /// bound.
    KeygenRetriesExceeded,
    /// Malformed key container.
    BadContainer(String),
    Io(std::io::Error),
    Galois(GaloisError),
}

impl fmt::Display for CryptoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CryptoError::LengthMismatch { expected, got } => {
                write!(f, "bit-length mismatch: expected {expected}, got {got}")
            }
            CryptoError::DecodingFailure => write!(f, "decoding failure: more than t errors"),
            CryptoError::InvalidParameters(msg) => write!(f, "invalid parameters: {msg}"),
            CryptoError::KeygenRetriesExceeded => write!(f, "key generation retry bound exceeded"),
            CryptoError::BadContainer(msg) => write!(f, "bad key container: {msg}"),
            CryptoError::Io(e) => write!(f, "io error: {e}"),
            CryptoError::Galois(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CryptoError {}

impl From<std::io::Error> for CryptoError {
    fn from(e: std::io::Error) -> Self {
        CryptoError::Io(e)
    }
}

impl From<GaloisError> for CryptoError {
    fn from(e: GaloisError) -> Self {
        CryptoError::Galois(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeId {
    Identity = 0,
    McEliece = 1,
}

impl SchemeId {
    pub fn from_u8(v: u8) -> Option<Self> {
        match v {
            0 => Some(SchemeId::Identity),
            1 => Some(SchemeId::McEliece),
            _ => None,
        }
    }
}

/// Published shape of a cryptosystem: plaintext and ciphertext lengths in
/// bits, the claimed security level, and the rate k_b / n_b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CryptosystemSpec {
    pub scheme: SchemeId,
    pub plaintext_bits: usize,
    pub ciphertext_bits: usize,
    pub security_bits: u32,
}

impl CryptosystemSpec {
    pub fn new(
        scheme: SchemeId,
        plaintext_bits: usize,
        ciphertext_bits: usize,
        security_bits: u32,
    ) -> Result<Self, CryptoError> {
        if plaintext_bits == 0 || plaintext_bits > ciphertext_bits {
            return Err(CryptoError::InvalidParameters(format!(
                "need 1 <= k_b <= n_b, got k_b={plaintext_bits}, n_b={ciphertext_bits}"
            )));
        }
        if security_bits as usize > plaintext_bits {
            return Err(CryptoError::InvalidParameters(format!(
                "security level {security_bits} exceeds plaintext length {plaintext_bits}"
            )));
        }
        Ok(CryptosystemSpec { scheme, plaintext_bits, ciphertext_bits, security_bits })
    }

    pub fn rate(&self) -> f64 {
        self.plaintext_bits as f64 / self.ciphertext_bits as f64
    }
}

/// Encryption half of the contract: k_b bits in, n_b bits out.
pub trait Encryptor {
    fn spec(&self) -> CryptosystemSpec;
    fn encrypt(&self, plaintext: &BitVec, rng: &mut dyn RngCore) -> Result<BitVec, CryptoError>;
}

/// Decryption half: n_b bits in, the unique matching k_b bits out.
pub trait Decryptor {
    fn spec(&self) -> CryptosystemSpec;
    fn decrypt(&self, ciphertext: &BitVec) -> Result<BitVec, CryptoError>;
}

/// Deliberately insecure pass-through cipher (b = 0, k_b = n_b) for
/// pipeline tests and leakage baselines.
#[derive(Debug, Clone)]
pub struct IdentityCipher {
    bits: usize,
}

impl IdentityCipher {
    pub fn new(bits: usize) -> Self {
        IdentityCipher { bits }
    }
}

impl Encryptor for IdentityCipher {
    fn spec(&self) -> CryptosystemSpec {
        CryptosystemSpec {
            scheme: SchemeId::Identity,
            plaintext_bits: self.bits,
            ciphertext_bits: self.bits,
            security_bits: 0,
        }
    }

    fn encrypt(&self, plaintext: &BitVec, _rng: &mut dyn RngCore) -> Result<BitVec, CryptoError> {
        if plaintext.len() != self.bits {
            return Err(CryptoError::LengthMismatch { expected: self.bits, got: plaintext.len() });
        }
        Ok(plaintext.clone())
    }
}

impl Decryptor for IdentityCipher {
    fn spec(&self) -> CryptosystemSpec {
        Encryptor::spec(self)
    }

    fn decrypt(&self, ciphertext: &BitVec) -> Result<BitVec, CryptoError> {
        if ciphertext.len() != self.bits {
            return Err(CryptoError::LengthMismatch { expected: self.bits, got: ciphertext.len() });
        }
        Ok(ciphertext.clone())
    }
}

/// McEliece encryption with the source error vector left empty. This is
/// the myopic-adversary mode of operation: the sender reserves the whole
/// t-error decoding budget for channel-injected corruption instead of
/// spending it on a random z.
#[derive(Debug, Clone, Copy)]
pub struct ChannelErrorMode<'a>(pub &'a McEliecePublicKey);

impl Encryptor for ChannelErrorMode<'_> {
    fn spec(&self) -> CryptosystemSpec {
        self.0.spec()
    }

    fn encrypt(&self, plaintext: &BitVec, _rng: &mut dyn RngCore) -> Result<BitVec, CryptoError> {
        self.0.encrypt_with_error(plaintext, &[])
    }
}

/// One row of the parameter-preset table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresetEntry {
    pub id: String,
    pub params: McElieceParams,
    /// Security level from the published attack estimates for this set.
    pub security_bits: u32,
}

/// Built-in parameter sets:
/// - toy16: [16, 8] at d=4, t=2 (testing only, no security claim)
/// - classic1024: the original [1024, 524] parameters, 58-bit
/// - pq2960: shortened [2960, 2288] at d=12, t=56, 128-bit
/// - pq6624: shortened [6624, 5129] at d=13, t=115, 256-bit
pub fn builtin_presets() -> Vec<PresetEntry> {
    vec![
        PresetEntry {
            id: "toy16".into(),
            params: McElieceParams { d: 4, n: 16, k: 8, t: 2 },
            security_bits: 0,
        },
        PresetEntry {
            id: "classic1024".into(),
            params: McElieceParams { d: 10, n: 1024, k: 524, t: 50 },
            security_bits: 58,
        },
        PresetEntry {
            id: "pq2960".into(),
            params: McElieceParams { d: 12, n: 2960, k: 2288, t: 56 },
            security_bits: 128,
        },
        PresetEntry {
            id: "pq6624".into(),
            params: McElieceParams { d: 13, n: 6624, k: 5129, t: 115 },
            security_bits: 256,
        },
    ]
}

pub fn find_builtin_preset(id: &str) -> Option<PresetEntry> {
    builtin_presets().into_iter().find(|p| p.id == id)
}

/// Parses an extended preset table: one `id = d,n,k,t,b` entry per line,
/// `#` comments and blank lines ignored.
pub fn parse_preset_table(text: &str) -> Result<Vec<PresetEntry>, CryptoError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| {
            CryptoError::BadContainer(format!("preset table line {}: {msg}", lineno + 1))
        };
        let (id, rest) = line.split_once('=').ok_or_else(|| bad("missing '='"))?;
        let fields: Vec<&str> = rest.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(bad("expected d,n,k,t,b"));
        }
        let nums: Result<Vec<u64>, _> = fields.iter().map(|s| s.parse::<u64>()).collect();
        let nums = nums.map_err(|_| bad("non-numeric field"))?;
        let params = McElieceParams {
            d: nums[0] as u32,
            n: nums[1] as usize,
            k: nums[2] as usize,
            t: nums[3] as usize,
        };
        params.validate().map_err(|e| bad(&e.to_string()))?;
        out.push(PresetEntry { id: id.trim().to_string(), params, security_bits: nums[4] as u32 });
    }
    Ok(out)
}
