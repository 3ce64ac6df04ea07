//! Hybrid universal network-coding cryptosystem (HUNCC).
//!
//! Messages destined for `l` parallel paths are premixed with an
//! individually-secure linear code over GF(p^m), after which `c` of the
//! `l` per-path payloads are encrypted with a public-key cryptosystem
//! (binary-Goppa McEliece here). An eavesdropper seeing any `w <= l - c`
//! paths learns nothing about each individual message, and one seeing
//! everything still faces the cryptosystem's security level on every
//! message.
//!
//! Module map:
//! - [`galois`]: GF(p^m) arithmetic, polynomials, and exact linear algebra
//! - [`bits`]: packed bit vectors and GF(2) matrices
//! - [`iscode`]: individually-secure linear codes (build, encode, verify)
//! - [`cryptosys`]: the public-key contract, McEliece over binary Goppa
//!   codes, and key containers
//! - [`hybrid`]: the end-to-end multipath pipeline and wire formats
//! - [`netsim`]: noiseless multipath network with eavesdropper models
//! - [`analysis`]: rate / security-level calculators and sweep tables
//!
//! ```
//! use huncc_core::cryptosys::{find_builtin_preset, mceliece_keygen, Encryptor};
//! use huncc_core::hybrid::{
//!     huncc_decode, huncc_encode, DecryptKeys, EncryptKeys, HunccConfig,
//! };
//!
//! let preset = find_builtin_preset("toy16").unwrap();
//! let keys = mceliece_keygen(preset.params, preset.security_bits, [7; 32]).unwrap();
//! let config = HunccConfig::standard(3, 3, 1, Encryptor::spec(&keys.public), [1; 32]).unwrap();
//! let sent = huncc_encode(
//!     &config,
//!     b"across three paths",
//!     &EncryptKeys::Shared(&keys.public),
//!     [2; 32],
//! )
//! .unwrap();
//! let back = huncc_decode(&config, &sent, &DecryptKeys::Shared(&keys.private)).unwrap();
//! assert_eq!(back, b"across three paths");
//! ```

pub mod analysis;
pub mod bits;
pub mod cryptosys;
pub mod galois;
pub mod hybrid;
pub mod iscode;
pub mod netsim;
