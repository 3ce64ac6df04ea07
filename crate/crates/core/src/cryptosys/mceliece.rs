//! McEliece over binary irreducible Goppa codes.
//!
//! Key generation picks a random monic irreducible g of degree t over
//! GF(2^d) and a random support L of n distinct field elements avoiding
//! roots of g. The t x n parity check over GF(2^d) has entries
//! a_j^i / g(a_j); expanding each entry into d bits gives the td x n
//! binary parity check whose null space is the Goppa code. Shortened
//! sets (n < 2^d) just use a smaller support. Key generation retries
//! with a fresh g until the binary parity check has full rank td, so the
//! code dimension is exactly k = n - td.
//!
//! Decryption is Patterson's algorithm: syndrome polynomial from
//! precomputed (x - a_j)^{-1} mod g, T = s^{-1} mod g, a square root of
//! T + x via the sqrt(x) mod g trick, then a degree-bounded extended
//! Euclid to split sigma = a^2 + x b^2, and a root scan over the support.
//! Any inconsistency (sigma not splitting, syndrome mismatch) is reported
//! as a decoding failure rather than silently miscorrected.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::{CryptoError, CryptosystemSpec, Decryptor, Encryptor, SchemeId};
use crate::bits::{BinMatrix, BitVec};
use crate::galois::{FieldSpec, Poly};

const KEYGEN_RETRY_BOUND: usize = 256;

/// Code geometry: length n = 2^d (or shorter), error weight t, dimension
/// k = n - t d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McElieceParams {
    pub d: u32,
    pub n: usize,
    pub k: usize,
    pub t: usize,
}

impl McElieceParams {
    pub fn validate(&self) -> Result<(), CryptoError> {
        if self.d == 0 || self.d > 20 {
            return Err(CryptoError::InvalidParameters(format!("extension degree d={} unsupported", self.d)));
        }
        if self.t == 0 {
            return Err(CryptoError::InvalidParameters("error weight t must be >= 1".into()));
        }
        if self.n > 1usize << self.d {
            return Err(CryptoError::InvalidParameters(format!(
                "length {} exceeds field size 2^{}",
                self.n, self.d
            )));
        }
        let td = self.t * self.d as usize;
        if self.n <= td {
            return Err(CryptoError::InvalidParameters(format!(
                "parameters admit no code: n={} <= t*d={td}",
                self.n
            )));
        }
        if self.k != self.n - td {
            return Err(CryptoError::InvalidParameters(format!(
                "dimension must be k = n - t*d = {}, got {}",
                self.n - td,
                self.k
            )));
        }
        Ok(())
    }
}

/// Public half: the scrambled permuted generator and the error weight.
#[derive(Debug, Clone)]
pub struct McEliecePublicKey {
    params: McElieceParams,
    security_bits: u32,
    g_pub: BinMatrix,
}

/// Private half: the scrambler S, the Goppa pair (g, L), the permutation,
/// and everything precomputed for Patterson decoding.
#[derive(Clone)]
pub struct McEliecePrivateKey {
    params: McElieceParams,
    security_bits: u32,
    field: FieldSpec,
    goppa: Poly,
    support: Vec<u64>,
    /// Column permutation: column i of S G lands at position perm[i].
    perm: Vec<usize>,
    s: BinMatrix,
    s_inv: BinMatrix,
    /// Systematic Goppa generator and the columns where it is identity.
    generator: BinMatrix,
    info_set: Vec<usize>,
    /// (x - a_j)^{-1} mod g per support position, flattened t coeffs each.
    inv_col_polys: Vec<u64>,
    sqrt_x: Poly,
}

impl std::fmt::Debug for McEliecePrivateKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "McEliecePrivateKey({:?})", self.params)
    }
}

#[derive(Debug, Clone)]
pub struct McElieceKeyPair {
    pub public: McEliecePublicKey,
    pub private: McEliecePrivateKey,
}

impl McEliecePublicKey {
    pub fn params(&self) -> McElieceParams {
        self.params
    }

    pub fn error_weight(&self) -> usize {
        self.params.t
    }

    pub fn matrix(&self) -> &BinMatrix {
        &self.g_pub
    }

    pub fn security_bits(&self) -> u32 {
        self.security_bits
    }

    pub(super) fn from_parts(params: McElieceParams, security_bits: u32, g_pub: BinMatrix) -> Result<Self, CryptoError> {
        params.validate()?;
        if g_pub.rows() != params.k || g_pub.cols() != params.n {
            return Err(CryptoError::BadContainer("public matrix shape mismatch".into()));
        }
        Ok(McEliecePublicKey { params, security_bits, g_pub })
    }

    /// Deterministic encryption with a caller-chosen error support;
    /// diagnostic hook for tests (z = 0 gives the bare codeword).
    pub fn encrypt_with_error(&self, plaintext: &BitVec, error_positions: &[usize]) -> Result<BitVec, CryptoError> {
        if plaintext.len() != self.params.k {
            return Err(CryptoError::LengthMismatch { expected: self.params.k, got: plaintext.len() });
        }
        let mut c = self.g_pub.mul_left(plaintext);
        for &p in error_positions {
            if p >= self.params.n {
                return Err(CryptoError::InvalidParameters(format!("error position {p} out of range")));
            }
            c.flip(p);
        }
        Ok(c)
    }
}

impl Encryptor for McEliecePublicKey {
    fn spec(&self) -> CryptosystemSpec {
        CryptosystemSpec {
            scheme: SchemeId::McEliece,
            plaintext_bits: self.params.k,
            ciphertext_bits: self.params.n,
            security_bits: self.security_bits,
        }
    }

    /// c = m G_pub + z with z uniformly drawn among weight-t vectors via
    /// a seeded partial Fisher-Yates over the n positions.
    fn encrypt(&self, plaintext: &BitVec, rng: &mut dyn RngCore) -> Result<BitVec, CryptoError> {
        let positions = sample_error_positions(self.params.n, self.params.t, rng);
        self.encrypt_with_error(plaintext, &positions)
    }
}

fn sample_error_positions(n: usize, t: usize, rng: &mut dyn RngCore) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..t {
        let j = (rng.next_u64() % (n - i) as u64) as usize + i;
        idx.swap(i, j);
    }
    idx.truncate(t);
    idx
}

impl McEliecePrivateKey {
    pub fn params(&self) -> McElieceParams {
        self.params
    }

    pub fn security_bits(&self) -> u32 {
        self.security_bits
    }

    pub fn scrambler(&self) -> &BinMatrix {
        &self.s
    }

    pub fn goppa_poly(&self) -> &Poly {
        &self.goppa
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Systematic generator of the underlying Goppa code.
    pub fn goppa_generator(&self) -> &BinMatrix {
        &self.generator
    }

    /// Rebuilds a private key from its stored parts (S, g, L, P),
    /// re-deriving the generator and the decoder precomputations.
    pub fn from_parts(
        params: McElieceParams,
        security_bits: u32,
        s: BinMatrix,
        goppa_coeffs: &[u64],
        support: Vec<u64>,
        perm: Vec<usize>,
    ) -> Result<Self, CryptoError> {
        params.validate()?;
        let field = FieldSpec::auto(2, params.d as usize)?;
        let goppa = Poly::new(&field, goppa_coeffs)?;
        if goppa.degree() != Some(params.t) {
            return Err(CryptoError::BadContainer("Goppa polynomial degree mismatch".into()));
        }
        if support.len() != params.n {
            return Err(CryptoError::BadContainer("support length mismatch".into()));
        }
        let mut seen = vec![false; field.order() as usize];
        for &a in &support {
            if a >= field.order() || seen[a as usize] {
                return Err(CryptoError::BadContainer("support not distinct".into()));
            }
            if goppa.eval_code(a) == 0 {
                return Err(CryptoError::BadContainer("support hits a Goppa root".into()));
            }
            seen[a as usize] = true;
        }
        if perm.len() != params.n {
            return Err(CryptoError::BadContainer("permutation length mismatch".into()));
        }
        let mut pseen = vec![false; params.n];
        for &p in &perm {
            if p >= params.n || pseen[p] {
                return Err(CryptoError::BadContainer("not a permutation".into()));
            }
            pseen[p] = true;
        }
        if s.rows() != params.k || s.cols() != params.k {
            return Err(CryptoError::BadContainer("scrambler shape mismatch".into()));
        }
        let s_inv = s.inverse().ok_or_else(|| CryptoError::BadContainer("scrambler singular".into()))?;
        let (generator, info_set) = derive_generator(&params, &field, &goppa, &support)
            .ok_or_else(|| CryptoError::BadContainer("parity check rank deficient".into()))?;
        let inv_col_polys = precompute_column_inverses(&field, &goppa, &support);
        let sqrt_x = precompute_sqrt_x(&field, &goppa, params.d as usize * params.t);
        Ok(McEliecePrivateKey {
            params,
            security_bits,
            field,
            goppa,
            support,
            perm,
            s,
            s_inv,
            generator,
            info_set,
            inv_col_polys,
            sqrt_x,
        })
    }

    /// Syndrome polynomial of a word in the unpermuted domain.
    fn syndrome(&self, word: &BitVec) -> Poly {
        let t = self.params.t;
        let mut acc = vec![0u64; t];
        for j in 0..self.params.n {
            if word.get(j) {
                let base = j * t;
                for (i, a) in acc.iter_mut().enumerate() {
                    *a ^= self.inv_col_polys[base + i];
                }
            }
        }
        Poly::from_codes(self.field.clone(), acc)
    }

    /// Patterson error locator for a syndrome. Returns the error vector
    /// in the unpermuted domain, or None when no weight <= t pattern
    /// matches.
    fn locate_errors(&self, syndrome: &Poly) -> Option<BitVec> {
        let t = self.params.t;
        let mut e = BitVec::zeros(self.params.n);
        if syndrome.is_zero() {
            return Some(e);
        }
        let t_poly = poly_inv_mod(syndrome, &self.goppa)?;
        let w = t_poly.add(&Poly::x(&self.field));
        let sigma = if w.is_zero() {
            Poly::x(&self.field)
        } else {
            let r = self.sqrt_mod_goppa(&w);
            let (a, b) = partial_eea(&self.goppa, &r, t / 2);
            let a2 = a.mul(&a);
            let b2 = b.mul(&b);
            a2.add(&b2.shifted(1))
        };
        let deg = sigma.degree()?;
        if deg == 0 || deg > t {
            return None;
        }
        let mut roots = 0usize;
        for (j, &alpha) in self.support.iter().enumerate() {
            if sigma.eval_code(alpha) == 0 {
                e.set(j, true);
                roots += 1;
            }
        }
        if roots != deg {
            return None;
        }
        Some(e)
    }

    /// sqrt(h) mod g via h = a(x)^2 + x b(x)^2 and the precomputed
    /// sqrt(x) mod g.
    fn sqrt_mod_goppa(&self, h: &Poly) -> Poly {
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for (i, &c) in h.coeffs().iter().enumerate() {
            let root = self.field.sqrt_code(c);
            if i % 2 == 0 {
                even.push(root);
            } else {
                odd.push(root);
            }
        }
        let a = Poly::from_codes(self.field.clone(), even);
        let b = Poly::from_codes(self.field.clone(), odd);
        a.add(&b.mul_mod(&self.sqrt_x, &self.goppa)).rem(&self.goppa)
    }
}

impl Decryptor for McEliecePrivateKey {
    fn spec(&self) -> CryptosystemSpec {
        CryptosystemSpec {
            scheme: SchemeId::McEliece,
            plaintext_bits: self.params.k,
            ciphertext_bits: self.params.n,
            security_bits: self.security_bits,
        }
    }

    fn decrypt(&self, ciphertext: &BitVec) -> Result<BitVec, CryptoError> {
        let n = self.params.n;
        if ciphertext.len() != n {
            return Err(CryptoError::LengthMismatch { expected: n, got: ciphertext.len() });
        }
        // c P^{-1}: undo the column permutation.
        let mut unpermuted = BitVec::zeros(n);
        for i in 0..n {
            unpermuted.set(i, ciphertext.get(self.perm[i]));
        }
        let syndrome = self.syndrome(&unpermuted);
        let error = self.locate_errors(&syndrome).ok_or(CryptoError::DecodingFailure)?;
        let mut codeword = unpermuted;
        codeword.xor_with(&error);
        // The corrected word must be an actual codeword; anything else is
        // a miscorrection and gets rejected.
        if !self.syndrome(&codeword).is_zero() {
            return Err(CryptoError::DecodingFailure);
        }
        let mut u = BitVec::zeros(self.params.k);
        for (bit, &col) in self.info_set.iter().enumerate() {
            u.set(bit, codeword.get(col));
        }
        Ok(self.s_inv.mul_left(&u))
    }
}

/// Seeded key generation. Deterministic: the same parameters and seed
/// produce byte-identical keys.
pub fn mceliece_keygen(
    params: McElieceParams,
    security_bits: u32,
    seed: [u8; 32],
) -> Result<McElieceKeyPair, CryptoError> {
    params.validate()?;
    let field = FieldSpec::auto(2, params.d as usize)?;
    let mut rng = ChaCha20Rng::from_seed(seed);
    for _ in 0..KEYGEN_RETRY_BOUND {
        let goppa = random_irreducible(&field, params.t, &mut rng);
        // Support: random n distinct elements with g(a) != 0. An
        // irreducible g of degree >= 2 has no roots in the field; only
        // t = 1 can exclude anything.
        let mut candidates: Vec<u64> =
            (0..field.order()).filter(|&a| goppa.eval_code(a) != 0).collect();
        if candidates.len() < params.n {
            continue;
        }
        for i in (1..candidates.len()).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            candidates.swap(i, j);
        }
        candidates.truncate(params.n);
        let support = candidates;
        let Some((generator, info_set)) = derive_generator(&params, &field, &goppa, &support) else {
            continue;
        };
        let s = random_scrambler(params.k, &mut rng);
        let s_inv = s.inverse().expect("LU-with-unit-diagonals times permutation is invertible");
        let mut perm: Vec<usize> = (0..params.n).collect();
        for i in (1..params.n).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            perm.swap(i, j);
        }
        let g_pub = s.mul(&generator).permute_cols(&perm);
        let inv_col_polys = precompute_column_inverses(&field, &goppa, &support);
        let sqrt_x = precompute_sqrt_x(&field, &goppa, params.d as usize * params.t);
        let public = McEliecePublicKey { params, security_bits, g_pub };
        let private = McEliecePrivateKey {
            params,
            security_bits,
            field,
            goppa,
            support,
            perm,
            s,
            s_inv,
            generator,
            info_set,
            inv_col_polys,
            sqrt_x,
        };
        return Ok(McElieceKeyPair { public, private });
    }
    Err(CryptoError::KeygenRetriesExceeded)
}

fn random_irreducible(field: &FieldSpec, t: usize, rng: &mut ChaCha20Rng) -> Poly {
    loop {
        let mut coeffs: Vec<u64> = (0..t).map(|_| rng.gen_range(0..field.order())).collect();
        coeffs.push(1);
        let cand = Poly::new(field, &coeffs).unwrap();
        if cand.is_irreducible() {
            return cand;
        }
    }
}

/// S = L U P with unit-diagonal random triangular factors and a random
/// column permutation; invertible by construction.
fn random_scrambler(k: usize, rng: &mut ChaCha20Rng) -> BinMatrix {
    let mut lower = BinMatrix::identity(k);
    let mut upper = BinMatrix::identity(k);
    for r in 0..k {
        for c in 0..r {
            if rng.gen::<bool>() {
                lower.set(r, c, true);
            }
            if rng.gen::<bool>() {
                upper.set(c, r, true);
            }
        }
    }
    let mut perm: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        perm.swap(i, j);
    }
    lower.mul(&upper).permute_cols(&perm)
}

/// Builds the td x n binary parity check from H[i][j] = a_j^i / g(a_j)
/// over GF(2^d) and returns the systematic generator of its null space
/// plus the identity column set, or None if the parity check is rank
/// deficient (so the dimension would exceed k).
fn derive_generator(
    params: &McElieceParams,
    field: &FieldSpec,
    goppa: &Poly,
    support: &[u64],
) -> Option<(BinMatrix, Vec<usize>)> {
    let d = params.d as usize;
    let t = params.t;
    let n = params.n;
    let mut h_bin = BinMatrix::zeros(t * d, n);
    for (j, &alpha) in support.iter().enumerate() {
        let ginv = field.inv_code(goppa.eval_code(alpha)).expect("support avoids Goppa roots");
        let mut entry = ginv;
        for i in 0..t {
            for bit in 0..d {
                if (entry >> bit) & 1 == 1 {
                    h_bin.set(i * d + bit, j, true);
                }
            }
            entry = field.mul_code(entry, alpha);
        }
    }
    if h_bin.rank() < t * d {
        return None;
    }
    let generator = h_bin.nullspace_basis();
    debug_assert_eq!(generator.rows(), params.k);
    // The null-space basis is systematic on the non-pivot columns of the
    // parity check; recover that column set from the basis itself.
    let info_set = systematic_columns(&generator)?;
    Some((generator, info_set))
}

/// Finds, per basis row, the column where it is the only row with a 1 and
/// the row's own coordinate is 1 (the systematic column of that row).
fn systematic_columns(generator: &BinMatrix) -> Option<Vec<usize>> {
    let k = generator.rows();
    let n = generator.cols();
    let mut count_per_col = vec![0usize; n];
    let mut row_for_col = vec![usize::MAX; n];
    for r in 0..k {
        for c in 0..n {
            if generator.get(r, c) {
                count_per_col[c] += 1;
                row_for_col[c] = r;
            }
        }
    }
    let mut cols = vec![usize::MAX; k];
    for c in 0..n {
        if count_per_col[c] == 1 && cols[row_for_col[c]] == usize::MAX {
            cols[row_for_col[c]] = c;
        }
    }
    if cols.contains(&usize::MAX) {
        return None;
    }
    Some(cols)
}

/// (x - a_j)^{-1} mod g for every support position, each as t little-
/// endian coefficients. In characteristic 2,
/// (x + a)^{-1} = ((g(x) + g(a)) / (x + a)) * g(a)^{-1}, and the quotient
/// comes from synthetic division.
fn precompute_column_inverses(field: &FieldSpec, goppa: &Poly, support: &[u64]) -> Vec<u64> {
    let t = goppa.degree().expect("Goppa polynomial is nonzero");
    let mut out = Vec::with_capacity(support.len() * t);
    for &alpha in support {
        let galpha_inv = field.inv_code(goppa.eval_code(alpha)).unwrap();
        // synthetic division of g(x) + g(a) by (x + a): quotient degree t-1
        let mut quotient = vec![0u64; t];
        let mut carry = 0u64;
        for i in (0..t).rev() {
            carry = field.add_code(goppa.coeff(i + 1), field.mul_code(carry, alpha));
            quotient[i] = carry;
        }
        for &q in &quotient {
            out.push(field.mul_code(q, galpha_inv));
        }
    }
    out
}

fn precompute_sqrt_x(field: &FieldSpec, goppa: &Poly, dt: usize) -> Poly {
    // sqrt(x) mod g = x^(2^(dt - 1)) mod g: dt - 1 squarings.
    let mut h = Poly::x(field);
    for _ in 0..dt.saturating_sub(1) {
        h = h.mul_mod(&h, goppa);
    }
    h
}

/// Extended Euclid inverse: self^{-1} mod modulus, when coprime.
fn poly_inv_mod(value: &Poly, modulus: &Poly) -> Option<Poly> {
    let field = value.field().clone();
    let mut r0 = modulus.clone();
    let mut r1 = value.rem(modulus);
    let mut t0 = Poly::zero(&field);
    let mut t1 = Poly::one(&field);
    while !r1.is_zero() {
        let (q, r) = r0.divmod(&r1);
        let tn = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = tn;
    }
    if r0.degree() != Some(0) {
        return None;
    }
    let scale = field.inv_code(r0.leading()).unwrap();
    Some(t0.scale(scale).rem(modulus))
}

/// Runs the Euclidean algorithm on (g, r) until the remainder degree
/// drops to `stop_degree` or lower, returning (remainder, cofactor) with
/// remainder = cofactor * r (mod g).
fn partial_eea(g: &Poly, r: &Poly, stop_degree: usize) -> (Poly, Poly) {
    let field = g.field().clone();
    let mut r0 = g.clone();
    let mut r1 = r.clone();
    let mut b0 = Poly::zero(&field);
    let mut b1 = Poly::one(&field);
    while r1.degree().is_some_and(|d| d > stop_degree) {
        let (q, rem) = r0.divmod(&r1);
        let bn = b0.sub(&q.mul(&b1));
        r0 = r1;
        r1 = rem;
        b0 = b1;
        b1 = bn;
    }
    (r1, b1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_params() -> McElieceParams {
        McElieceParams { d: 4, n: 16, k: 8, t: 2 }
    }

    #[test]
    fn keygen_shapes_and_determinism() {
        let kp = mceliece_keygen(toy_params(), 0, [1; 32]).unwrap();
        assert_eq!(kp.public.matrix().rows(), 8);
        assert_eq!(kp.public.matrix().cols(), 16);
        let again = mceliece_keygen(toy_params(), 0, [1; 32]).unwrap();
        assert_eq!(kp.public.matrix(), again.public.matrix());
        assert_eq!(kp.private.support(), again.private.support());
        let other = mceliece_keygen(toy_params(), 0, [2; 32]).unwrap();
        assert_ne!(kp.public.matrix(), other.public.matrix());
    }

    #[test]
    fn public_key_is_scrambled_permuted_generator() {
        // G_pub = S G P, verified directly at small parameters.
        for seed in 0..4u8 {
            let kp = mceliece_keygen(toy_params(), 0, [seed; 32]).unwrap();
            let pk = &kp.public;
            let sk = &kp.private;
            let sgp = sk.scrambler().mul(sk.goppa_generator()).permute_cols(sk.permutation());
            assert_eq!(&sgp, pk.matrix());
        }
        let d6 = McElieceParams { d: 6, n: 64, k: 46, t: 3 };
        let kp = mceliece_keygen(d6, 0, [40; 32]).unwrap();
        let sgp = kp
            .private
            .scrambler()
            .mul(kp.private.goppa_generator())
            .permute_cols(kp.private.permutation());
        assert_eq!(&sgp, kp.public.matrix());
        let m = BitVec::from_all_bytes(&[0xde, 0xad, 0xbe, 0xef, 0x99, 0x11]).slice(0, 46);
        let c = kp.public.encrypt_with_error(&m, &[3, 17, 60]).unwrap();
        assert_eq!(kp.private.decrypt(&c).unwrap(), m);
    }

    #[test]
    fn zero_error_ciphertext_is_codeword() {
        let kp = mceliece_keygen(toy_params(), 0, [3; 32]).unwrap();
        let m = BitVec::from_all_bytes(&[0b1011_0010]);
        let c = kp.public.encrypt_with_error(&m, &[]).unwrap();
        assert_eq!(c, kp.public.matrix().mul_left(&m));
        assert_eq!(kp.private.decrypt(&c).unwrap(), m);
    }

    #[test]
    fn zero_message_single_error_is_unit_vector() {
        let kp = mceliece_keygen(toy_params(), 0, [4; 32]).unwrap();
        let m = BitVec::zeros(8);
        let c = kp.public.encrypt_with_error(&m, &[1]).unwrap();
        let mut e1 = BitVec::zeros(16);
        e1.set(1, true);
        assert_eq!(c, e1);
    }

    #[test]
    fn error_weight_is_exactly_t() {
        use rand::SeedableRng;
        let kp = mceliece_keygen(toy_params(), 0, [5; 32]).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(42);
        let m = BitVec::from_all_bytes(&[0x5a]);
        let codeword = kp.public.matrix().mul_left(&m);
        for _ in 0..1000 {
            let c = kp.public.encrypt(&m, &mut rng).unwrap();
            let mut diff = c.clone();
            diff.xor_with(&codeword);
            assert_eq!(diff.weight(), 2);
        }
    }

    #[test]
    fn roundtrip_many_messages() {
        use rand::SeedableRng;
        let kp = mceliece_keygen(toy_params(), 0, [6; 32]).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for trial in 0..500u32 {
            let m = BitVec::from_all_bytes(&[(trial % 256) as u8]);
            let c = kp.public.encrypt(&m, &mut rng).unwrap();
            assert_eq!(kp.private.decrypt(&c).unwrap(), m, "trial {trial}");
        }
    }

    #[test]
    fn all_single_and_double_errors_correct() {
        let kp = mceliece_keygen(toy_params(), 0, [8; 32]).unwrap();
        let m = BitVec::from_all_bytes(&[0xc3]);
        for a in 0..16 {
            let c = kp.public.encrypt_with_error(&m, &[a]).unwrap();
            assert_eq!(kp.private.decrypt(&c).unwrap(), m);
            for b in a + 1..16 {
                let c = kp.public.encrypt_with_error(&m, &[a, b]).unwrap();
                assert_eq!(kp.private.decrypt(&c).unwrap(), m, "errors at {a},{b}");
            }
        }
    }

    #[test]
    fn syndrome_zero_for_all_codewords_t1() {
        // exhaustive at d=4, t=1: every codeword has zero Goppa syndrome.
        // A degree-1 Goppa polynomial always has one root in the field,
        // so the support can hold at most 15 of the 16 elements.
        let params = McElieceParams { d: 4, n: 15, k: 11, t: 1 };
        let kp = mceliece_keygen(params, 0, [9; 32]).unwrap();
        let sk = &kp.private;
        for u in 0..(1u32 << 11) {
            let mut m = BitVec::zeros(11);
            for bit in 0..11 {
                if (u >> bit) & 1 == 1 {
                    m.set(bit, true);
                }
            }
            let codeword = sk.goppa_generator().mul_left(&m);
            assert!(sk.syndrome(&codeword).is_zero());
        }
    }

    #[test]
    fn length_mismatch_reported_distinctly() {
        let kp = mceliece_keygen(toy_params(), 0, [10; 32]).unwrap();
        let too_short = BitVec::zeros(15);
        match kp.private.decrypt(&too_short) {
            Err(CryptoError::LengthMismatch { expected: 16, got: 15 }) => {}
            other => panic!("expected length mismatch, got {other:?}"),
        }
        let bad_m = BitVec::zeros(7);
        let mut rng = <ChaCha20Rng as SeedableRng>::seed_from_u64(0);
        assert!(matches!(
            kp.public.encrypt(&bad_m, &mut rng),
            Err(CryptoError::LengthMismatch { expected: 8, got: 7 })
        ));
    }

    #[test]
    fn rejects_invalid_parameters() {
        let bad = McElieceParams { d: 4, n: 16, k: 9, t: 2 };
        assert!(matches!(bad.validate(), Err(CryptoError::InvalidParameters(_))));
        let none = McElieceParams { d: 4, n: 16, k: 0, t: 4 };
        assert!(none.validate().is_err());
        let too_long = McElieceParams { d: 4, n: 17, k: 9, t: 2 };
        assert!(too_long.validate().is_err());
    }

    #[test]
    fn private_key_rebuilds_from_parts() {
        let kp = mceliece_keygen(toy_params(), 0, [11; 32]).unwrap();
        let sk = &kp.private;
        let rebuilt = McEliecePrivateKey::from_parts(
            sk.params(),
            0,
            sk.scrambler().clone(),
            sk.goppa_poly().coeffs(),
            sk.support().to_vec(),
            sk.permutation().to_vec(),
        )
        .unwrap();
        let m = BitVec::from_all_bytes(&[0x7e]);
        let c = kp.public.encrypt_with_error(&m, &[0, 9]).unwrap();
        assert_eq!(rebuilt.decrypt(&c).unwrap(), m);
    }
}
