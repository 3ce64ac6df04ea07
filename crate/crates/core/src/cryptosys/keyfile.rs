//! Binary key containers.
//!
//! Layout (all integers little-endian):
//!   magic "HNCK" | version u8 = 1 | scheme u8 | half u8 | d u8 |
//!   n u32 | k u32 | t u32 | security_bits u16 | payload
//!
//! half = 0 (public): payload is G_pub, row-major packed bits, each row
//! padded to a byte boundary (k rows of ceil(n/8) bytes).
//!
//! half = 1 (private): payload is S (k rows of ceil(k/8) bytes), the
//! Goppa polynomial (t+1 coefficients of ceil(d/8) bytes each), the
//! support (n elements of ceil(d/8) bytes), and the permutation
//! (n entries of u32). The decoder precomputations are re-derived on
//! load, so the private container carries exactly (S, g, L, P).

use std::fs;
use std::path::Path;

use super::mceliece::{McElieceParams, McEliecePrivateKey, McEliecePublicKey};
use super::{CryptoError, SchemeId};
use crate::bits::BinMatrix;

const MAGIC: &[u8; 4] = b"HNCK";
const VERSION: u8 = 1;

fn header(params: McElieceParams, security_bits: u32, half: u8) -> Vec<u8> {
    let mut out = Vec::with_capacity(24);
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(SchemeId::McEliece as u8);
    out.push(half);
    out.push(params.d as u8);
    out.extend_from_slice(&(params.n as u32).to_le_bytes());
    out.extend_from_slice(&(params.k as u32).to_le_bytes());
    out.extend_from_slice(&(params.t as u32).to_le_bytes());
    out.extend_from_slice(&(security_bits as u16).to_le_bytes());
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], CryptoError> {
        if self.buf.len() < self.pos + n {
            return Err(CryptoError::BadContainer("truncated".into()));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8, CryptoError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, CryptoError> {
        let b = self.take(2)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    fn u32(&mut self) -> Result<u32, CryptoError> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }
}

fn parse_header(r: &mut Reader<'_>, expect_half: u8) -> Result<(McElieceParams, u32), CryptoError> {
    if r.take(4)? != MAGIC {
        return Err(CryptoError::BadContainer("bad magic".into()));
    }
    if r.u8()? != VERSION {
        return Err(CryptoError::BadContainer("unsupported version".into()));
    }
    let scheme = r.u8()?;
    if SchemeId::from_u8(scheme) != Some(SchemeId::McEliece) {
        return Err(CryptoError::BadContainer(format!("unsupported scheme id {scheme}")));
    }
    let half = r.u8()?;
    if half != expect_half {
        return Err(CryptoError::BadContainer(format!(
            "wrong key half: expected {expect_half}, found {half}"
        )));
    }
    let d = r.u8()? as u32;
    let n = r.u32()? as usize;
    let k = r.u32()? as usize;
    let t = r.u32()? as usize;
    let security_bits = r.u16()? as u32;
    let params = McElieceParams { d, n, k, t };
    params.validate()?;
    Ok((params, security_bits))
}

fn element_width(d: u32) -> usize {
    (d as usize).div_ceil(8)
}

pub fn write_public_key(path: &Path, key: &McEliecePublicKey) -> Result<(), CryptoError> {
    let mut out = header(key.params(), key.security_bits(), 0);
    out.extend_from_slice(&key.matrix().to_bytes());
    fs::write(path, out)?;
    Ok(())
}

pub fn read_public_key(path: &Path) -> Result<McEliecePublicKey, CryptoError> {
    let buf = fs::read(path)?;
    let mut r = Reader { buf: &buf, pos: 0 };
    let (params, security_bits) = parse_header(&mut r, 0)?;
    let body = r.take(params.k * params.n.div_ceil(8))?;
    if r.pos != buf.len() {
        return Err(CryptoError::BadContainer("trailing bytes".into()));
    }
    let g_pub = BinMatrix::from_bytes(params.k, params.n, body)
        .ok_or_else(|| CryptoError::BadContainer("bad public matrix".into()))?;
    McEliecePublicKey::from_parts(params, security_bits, g_pub)
}

pub fn write_private_key(path: &Path, key: &McEliecePrivateKey) -> Result<(), CryptoError> {
    let params = key.params();
    let mut out = header(params, key.security_bits(), 1);
    out.extend_from_slice(&key.scrambler().to_bytes());
    let w = element_width(params.d);
    for &c in key.goppa_poly().coeffs() {
        out.extend_from_slice(&c.to_le_bytes()[..w]);
    }
    for &a in key.support() {
        out.extend_from_slice(&a.to_le_bytes()[..w]);
    }
    for &p in key.permutation() {
        out.extend_from_slice(&(p as u32).to_le_bytes());
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_private_key(path: &Path) -> Result<McEliecePrivateKey, CryptoError> {
    let buf = fs::read(path)?;
    let mut r = Reader { buf: &buf, pos: 0 };
    let (params, security_bits) = parse_header(&mut r, 1)?;
    let s_bytes = r.take(params.k * params.k.div_ceil(8))?;
    let s = BinMatrix::from_bytes(params.k, params.k, s_bytes)
        .ok_or_else(|| CryptoError::BadContainer("bad scrambler matrix".into()))?;
    let w = element_width(params.d);
    let mut goppa = Vec::with_capacity(params.t + 1);
    for _ in 0..params.t + 1 {
        let b = r.take(w)?;
        let mut raw = [0u8; 8];
        raw[..w].copy_from_slice(b);
        goppa.push(u64::from_le_bytes(raw));
    }
    let mut support = Vec::with_capacity(params.n);
    for _ in 0..params.n {
        let b = r.take(w)?;
        let mut raw = [0u8; 8];
        raw[..w].copy_from_slice(b);
        support.push(u64::from_le_bytes(raw));
    }
    let mut perm = Vec::with_capacity(params.n);
    for _ in 0..params.n {
        perm.push(r.u32()? as usize);
    }
    if r.pos != buf.len() {
        return Err(CryptoError::BadContainer("trailing bytes".into()));
    }
    McEliecePrivateKey::from_parts(params, security_bits, s, &goppa, support, perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitVec;
    use crate::cryptosys::mceliece::mceliece_keygen;
    use crate::cryptosys::Decryptor;

    #[test]
    fn key_files_roundtrip() {
        let dir = std::env::temp_dir().join("huncc-keyfile-test");
        std::fs::create_dir_all(&dir).unwrap();
        let params = McElieceParams { d: 4, n: 16, k: 8, t: 2 };
        let kp = mceliece_keygen(params, 0, [21; 32]).unwrap();
        let pub_path = dir.join("k.pub");
        let key_path = dir.join("k.key");
        write_public_key(&pub_path, &kp.public).unwrap();
        write_private_key(&key_path, &kp.private).unwrap();

        let pk = read_public_key(&pub_path).unwrap();
        assert_eq!(pk.matrix(), kp.public.matrix());
        let sk = read_private_key(&key_path).unwrap();
        let m = BitVec::from_all_bytes(&[0x3c]);
        let c = kp.public.encrypt_with_error(&m, &[2, 11]).unwrap();
        assert_eq!(sk.decrypt(&c).unwrap(), m);

        // determinism: rewriting produces byte-identical files
        let pub2 = dir.join("k2.pub");
        write_public_key(&pub2, &kp.public).unwrap();
        assert_eq!(std::fs::read(&pub_path).unwrap(), std::fs::read(&pub2).unwrap());

        // wrong half rejected
        assert!(matches!(read_public_key(&key_path), Err(CryptoError::BadContainer(_))));
        std::fs::remove_dir_all(&dir).ok();
    }
}
