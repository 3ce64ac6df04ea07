//! Individually-secure linear codes over GF(p^m).
//!
//! A code for `l` paths with secrecy parameter `w` is an l x l stacked
//! generator [G* ; G**]: the first c = l - w rows generate the null space
//! of an [l, w] code C, the remaining w rows generate C itself. The
//! receiver inverts with the parity-check matrix H (first c rows of the
//! recovered inverse) and the basis matrix G~ (remaining w rows), so that
//! H G*^T = I, G~ G**^T = I and G~ G*^T = 0.
//!
//! Secrecy is the rank criterion: for every column subset omega with
//! |omega| = w and every unit column e_j, appending e_j to the columns
//! indexed by omega must raise the rank. Under a uniform message prior
//! this is equivalent to exact flatness of the conditional distribution
//! of each message symbol given any w encoded symbols, which the
//! brute-force verifier checks by full enumeration.
//!
//! Built codes are Cauchy matrices: every square submatrix of a Cauchy
//! matrix is nonsingular, which implies the rank criterion for every
//! w <= l - 1. The construction needs 2l distinct field elements, hence
//! field order >= 2l.
//!
//! Code length always equals the path count (one symbol per path);
//! shorter codes spread over more paths than their length are not
//! implemented.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::galois::{FieldSpec, GaloisError, Matrix, OpCount};

/// Exhaustive rank-criterion checking is done up to this path count;
/// larger codes are spot-checked with at least `SAMPLED_CHECKS` pairs.
const EXHAUSTIVE_RANK_CHECK_MAX_L: usize = 12;
const SAMPLED_CHECKS: usize = 10_000;

/// Enumeration cap for the brute-force secrecy verifier: order^l states.
const BRUTE_FORCE_STATE_LIMIT: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsCodeError {
    /// Field order must be at least 2l for the Cauchy construction.
    FieldTooSmall { order: u64, needed: u64 },
    /// Secrecy parameter must satisfy 1 <= w <= l - 1.
    BadSecrecyParameter { l: usize, w: usize },
    /// User-supplied generator is singular.
    SingularGenerator,
    /// Rank criterion fails at the witnessing (omega, j).
    RankCriterionViolated { omega: Vec<usize>, j: usize },
    /// Block shape or field does not match the code.
    ShapeMismatch,
    /// order^l exceeds the exhaustive-enumeration budget.
    TooLargeForEnumeration { states: u64, limit: u64 },
    /// Observed-subset size exceeds the code's secrecy parameter.
    ObservedTooMany { w_obs: usize, w: usize },
    /// Reconstruction inputs are not produced by any message.
    InconsistentInput,
    /// Reconstruction subsystem is singular for these positions.
    SingularSubsystem,
    /// Malformed serialized code.
    BadEncoding,
    Galois(GaloisError),
}

impl fmt::Display for IsCodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsCodeError::FieldTooSmall { order, needed } => {
                write!(f, "field order {order} too small; need at least {needed}")
            }
            IsCodeError::BadSecrecyParameter { l, w } => {
                write!(f, "secrecy parameter w={w} out of range for l={l}")
            }
            IsCodeError::SingularGenerator => write!(f, "generator matrix is singular"),
            IsCodeError::RankCriterionViolated { omega, j } => {
                write!(f, "rank criterion violated at omega={omega:?}, j={j}")
            }
            IsCodeError::ShapeMismatch => write!(f, "block shape or field mismatch"),
            IsCodeError::TooLargeForEnumeration { states, limit } => {
                write!(f, "{states} states exceed enumeration limit {limit}")
            }
            IsCodeError::ObservedTooMany { w_obs, w } => {
                write!(f, "observed subset size {w_obs} exceeds secrecy parameter {w}")
            }
            IsCodeError::InconsistentInput => {
                write!(f, "inputs are not consistent with any message")
            }
            IsCodeError::SingularSubsystem => write!(f, "reconstruction subsystem is singular"),
            IsCodeError::BadEncoding => write!(f, "malformed serialized code"),
            IsCodeError::Galois(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for IsCodeError {}

impl From<GaloisError> for IsCodeError {
    fn from(e: GaloisError) -> Self {
        IsCodeError::Galois(e)
    }
}

/// Message block: l rows, one per path, each column an independent
/// message vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageBlock(pub Matrix);

/// Encoded block: same shape, column i is the premixed x = m G.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedBlock(pub Matrix);

/// Outcome of the brute-force secrecy check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecrecyReport {
    pub l: usize,
    pub w_obs: usize,
    pub messages_checked: u64,
    pub pass: bool,
    pub witness: Option<SecrecyViolation>,
}

/// A concrete leak: observing `observed` on the paths in `omega` skews
/// the conditional distribution of message symbol `j` (counts per value).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecrecyViolation {
    pub omega: Vec<usize>,
    pub j: usize,
    pub observed: Vec<u64>,
    pub counts: Vec<u64>,
}

/// Result of completing a partially known (message, codeword) pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    /// Encoded symbols at the given message positions.
    pub x_at_positions: Vec<u64>,
    /// Message symbols at the remaining positions.
    pub m_at_rest: Vec<u64>,
    /// Field operations spent by the Gaussian elimination.
    pub ops: OpCount,
}

/// An (l, w)-individually-secure code and its decoding matrices.
#[derive(Debug, Clone)]
pub struct IsCode {
    field: FieldSpec,
    l: usize,
    w: usize,
    c: usize,
    generator: Matrix,
    g_star: Matrix,
    g_star_star: Matrix,
    h: Matrix,
    g_tilde: Matrix,
}

impl IsCode {
    /// Builds an (l, w) code from a seeded Cauchy matrix. Verifies every
    /// invariant at build time: the decoder identities exactly, and the
    /// rank criterion exhaustively for l <= 12, sampled above.
    pub fn build(field: &FieldSpec, l: usize, w: usize, seed: [u8; 32]) -> Result<Self, IsCodeError> {
        if w == 0 || w >= l {
            return Err(IsCodeError::BadSecrecyParameter { l, w });
        }
        if field.order() < 2 * l as u64 {
            return Err(IsCodeError::FieldTooSmall { order: field.order(), needed: 2 * l as u64 });
        }
        let mut rng = ChaCha20Rng::from_seed(seed);
        let mut chosen = HashSet::new();
        let mut points = Vec::with_capacity(2 * l);
        while points.len() < 2 * l {
            let cand = rng.gen_range(0..field.order());
            if chosen.insert(cand) {
                points.push(cand);
            }
        }
        let (xs, ys) = points.split_at(l);
        let mut generator = Matrix::zeros(field, l, l);
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                let diff = field.sub_code(x, y);
                generator.set(i, j, field.inv_code(diff).map_err(IsCodeError::Galois)?);
            }
        }
        Self::from_generator(field, generator, w, Some(&mut rng))
    }

    /// Wraps a caller-supplied l x l generator, deriving H and G~ from the
    /// partitioned inverse and verifying the rank criterion (the witness
    /// is reported on failure).
    pub fn from_matrix(field: &FieldSpec, generator: Matrix, w: usize) -> Result<Self, IsCodeError> {
        let l = generator.rows();
        if generator.cols() != l || generator.field() != field {
            return Err(IsCodeError::ShapeMismatch);
        }
        if w == 0 || w >= l {
            return Err(IsCodeError::BadSecrecyParameter { l, w });
        }
        Self::from_generator(field, generator, w, None)
    }

    fn from_generator(
        field: &FieldSpec,
        generator: Matrix,
        w: usize,
        sample_rng: Option<&mut ChaCha20Rng>,
    ) -> Result<Self, IsCodeError> {
        let l = generator.rows();
        let c = l - w;
        let inverse = generator.inverse().map_err(|e| match e {
            GaloisError::Singular => IsCodeError::SingularGenerator,
            other => IsCodeError::Galois(other),
        })?;
        let inv_t = inverse.transpose();
        let g_star = generator.select_rows(&(0..c).collect::<Vec<_>>());
        let g_star_star = generator.select_rows(&(c..l).collect::<Vec<_>>());
        let h = inv_t.select_rows(&(0..c).collect::<Vec<_>>());
        let g_tilde = inv_t.select_rows(&(c..l).collect::<Vec<_>>());
        let code = IsCode { field: field.clone(), l, w, c, generator, g_star, g_star_star, h, g_tilde };
        code.check_decoder_identities()?;
        code.check_rank_criterion(sample_rng)?;
        Ok(code)
    }

    fn check_decoder_identities(&self) -> Result<(), IsCodeError> {
        let ident_c = Matrix::identity(&self.field, self.c);
        let ident_w = Matrix::identity(&self.field, self.w);
        let zero_wc = Matrix::zeros(&self.field, self.w, self.c);
        let zero_cw = Matrix::zeros(&self.field, self.c, self.w);
        if self.h.mul(&self.g_star.transpose())? != ident_c
            || self.g_tilde.mul(&self.g_star_star.transpose())? != ident_w
            || self.g_tilde.mul(&self.g_star.transpose())? != zero_wc
            || self.h.mul(&self.g_star_star.transpose())? != zero_cw
        {
            return Err(IsCodeError::SingularGenerator);
        }
        Ok(())
    }

    fn check_rank_criterion(&self, sample_rng: Option<&mut ChaCha20Rng>) -> Result<(), IsCodeError> {
        if self.l <= EXHAUSTIVE_RANK_CHECK_MAX_L {
            return rank_criterion_witness(&self.generator, self.w).map_or(Ok(()), |(omega, j)| {
                Err(IsCodeError::RankCriterionViolated { omega, j })
            });
        }
        let mut local;
        let rng = match sample_rng {
            Some(r) => r,
            None => {
                local = ChaCha20Rng::from_seed([0x15; 32]);
                &mut local
            }
        };
        for _ in 0..SAMPLED_CHECKS {
            let mut omega: Vec<usize> = (0..self.l).collect();
            for i in 0..self.w {
                let pick = rng.gen_range(i..self.l);
                omega.swap(i, pick);
            }
            omega.truncate(self.w);
            omega.sort_unstable();
            let j = rng.gen_range(0..self.l);
            if !rank_pair_ok(&self.generator, &omega, j) {
                return Err(IsCodeError::RankCriterionViolated { omega, j });
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn paths(&self) -> usize {
        self.l
    }

    pub fn secrecy_parameter(&self) -> usize {
        self.w
    }

    /// Number of coset symbols; equals the encrypted-path count in the
    /// hybrid scheme.
    pub fn coset_symbols(&self) -> usize {
        self.c
    }

    /// Stacked generator [G* ; G**].
    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn null_space_generator(&self) -> &Matrix {
        &self.g_star
    }

    pub fn code_generator(&self) -> &Matrix {
        &self.g_star_star
    }

    pub fn parity_check(&self) -> &Matrix {
        &self.h
    }

    pub fn basis_matrix(&self) -> &Matrix {
        &self.g_tilde
    }

    /// Column-wise premix: each message column m becomes x with
    /// `x_j = sum_i m_i G[i][j]` (the row-vector product m G, stored as
    /// a column).
    pub fn encode(&self, block: &MessageBlock) -> Result<EncodedBlock, IsCodeError> {
        if block.0.rows() != self.l || block.0.field() != &self.field {
            return Err(IsCodeError::ShapeMismatch);
        }
        let x = self.generator.transpose().mul(&block.0)?;
        Ok(EncodedBlock(x))
    }

    /// Exact inverse of [`IsCode::encode`]: the first c message rows come
    /// from H x, the remaining w from G~ x.
    pub fn decode(&self, block: &EncodedBlock) -> Result<MessageBlock, IsCodeError> {
        if block.0.rows() != self.l || block.0.field() != &self.field {
            return Err(IsCodeError::ShapeMismatch);
        }
        let top = self.h.mul(&block.0)?;
        let bottom = self.g_tilde.mul(&block.0)?;
        let mut m = Matrix::zeros(&self.field, self.l, block.0.cols());
        for col in 0..block.0.cols() {
            for r in 0..self.c {
                m.set(r, col, top.get(r, col));
            }
            for r in 0..self.w {
                m.set(self.c + r, col, bottom.get(r, col));
            }
        }
        Ok(MessageBlock(m))
    }

    /// Exhaustively verifies (l, w_obs)-individual secrecy under the
    /// uniform message prior: for every observation subset and value, the
    /// conditional count of each message symbol value must be flat.
    pub fn verify_individual_secrecy_bruteforce(&self, w_obs: usize) -> Result<SecrecyReport, IsCodeError> {
        if w_obs > self.w {
            return Err(IsCodeError::ObservedTooMany { w_obs, w: self.w });
        }
        verify_generator_secrecy_bruteforce(&self.generator, w_obs)
    }

    /// Completes a partially known pair: given the message symbols at
    /// `positions` (|positions| = c) and the encoded symbols everywhere
    /// else, solves the l x l linear system for the missing encoded and
    /// message symbols, reporting the elimination operation count.
    pub fn reconstruct_encoded(
        &self,
        positions: &[usize],
        m_given: &[u64],
        x_rest: &[u64],
    ) -> Result<Reconstruction, IsCodeError> {
        let l = self.l;
        if positions.len() != self.c || m_given.len() != self.c || x_rest.len() != l - self.c {
            return Err(IsCodeError::ShapeMismatch);
        }
        let mut in_s = vec![false; l];
        for &p in positions {
            if p >= l || in_s[p] {
                return Err(IsCodeError::ShapeMismatch);
            }
            in_s[p] = true;
        }
        let rest: Vec<usize> = (0..l).filter(|&i| !in_s[i]).collect();
        // Unknowns: m at `rest` (first l - c slots), then x at `positions`.
        let mut a = Matrix::zeros(&self.field, l, l);
        let mut b = Matrix::zeros(&self.field, l, 1);
        for (j, &given_here) in in_s.iter().enumerate() {
            for (u, &i) in rest.iter().enumerate() {
                a.set(j, u, self.generator.get(i, j));
            }
            let mut rhs = 0u64;
            if given_here {
                let slot = rest.len() + positions.iter().position(|&p| p == j).unwrap();
                a.set(j, slot, self.field.neg_code(1));
            } else {
                let k = rest.iter().position(|&p| p == j).unwrap();
                rhs = x_rest[k];
            }
            for (s, &i) in positions.iter().enumerate() {
                let term = self.field.mul_code(m_given[s], self.generator.get(i, j));
                rhs = self.field.sub_code(rhs, term);
            }
            b.set(j, 0, rhs);
        }
        let (solution, ops) = a.solve_with_count(&b).map_err(|e| match e {
            GaloisError::Inconsistent => IsCodeError::InconsistentInput,
            GaloisError::Singular => IsCodeError::SingularSubsystem,
            other => IsCodeError::Galois(other),
        })?;
        // An underdetermined but consistent system means the subsystem was
        // singular for these positions.
        if a.rank() < l {
            return Err(IsCodeError::SingularSubsystem);
        }
        let m_at_rest = (0..rest.len()).map(|u| solution.get(u, 0)).collect();
        let x_at_positions = (0..self.c).map(|s| solution.get(rest.len() + s, 0)).collect();
        Ok(Reconstruction { x_at_positions, m_at_rest, ops })
    }

    /// Serialized form: l (u16 LE), w (u16 LE), field spec, then the l*l
    /// stacked-generator entries row-major, each entry in
    /// ceil(element_bits / 8) little-endian bytes.
    pub fn write_to(&self, out: &mut Vec<u8>) -> Result<(), IsCodeError> {
        out.extend_from_slice(&(self.l as u16).to_le_bytes());
        out.extend_from_slice(&(self.w as u16).to_le_bytes());
        self.field.write_to(out)?;
        let eb = self.field.element_bytes();
        for r in 0..self.l {
            for c in 0..self.l {
                let code = self.generator.get(r, c);
                out.extend_from_slice(&code.to_le_bytes()[..eb]);
            }
        }
        Ok(())
    }

    pub fn read_from(buf: &[u8], pos: &mut usize) -> Result<Self, IsCodeError> {
        if buf.len() < *pos + 4 {
            return Err(IsCodeError::BadEncoding);
        }
        let l = u16::from_le_bytes([buf[*pos], buf[*pos + 1]]) as usize;
        let w = u16::from_le_bytes([buf[*pos + 2], buf[*pos + 3]]) as usize;
        *pos += 4;
        let field = FieldSpec::read_from(buf, pos)?;
        let eb = field.element_bytes();
        if buf.len() < *pos + l * l * eb {
            return Err(IsCodeError::BadEncoding);
        }
        let mut gen = Matrix::zeros(&field, l, l);
        for r in 0..l {
            for c in 0..l {
                let mut raw = [0u8; 8];
                raw[..eb].copy_from_slice(&buf[*pos..*pos + eb]);
                *pos += eb;
                let code = u64::from_le_bytes(raw);
                if code >= field.order() {
                    return Err(IsCodeError::BadEncoding);
                }
                gen.set(r, c, code);
            }
        }
        Self::from_matrix(&field, gen, w)
    }
}

/// The enumeration core behind [`IsCode::verify_individual_secrecy_bruteforce`],
/// callable on a bare generator so deliberately broken matrices (which
/// the constructors refuse to wrap) can still be checked.
pub fn verify_generator_secrecy_bruteforce(
    generator: &Matrix,
    w_obs: usize,
) -> Result<SecrecyReport, IsCodeError> {
    let field = generator.field().clone();
    let l = generator.rows();
    let order = field.order();
    let states = order.checked_pow(l as u32).filter(|&s| s <= BRUTE_FORCE_STATE_LIMIT);
    let Some(states) = states else {
        return Err(IsCodeError::TooLargeForEnumeration {
            states: order.saturating_pow(l as u32),
            limit: BRUTE_FORCE_STATE_LIMIT,
        });
    };
    if w_obs == 0 {
        return Ok(SecrecyReport { l, w_obs, messages_checked: states, pass: true, witness: None });
    }
    let mut omegas = Vec::new();
    for_each_combination(l, w_obs, &mut |omega| omegas.push(omega.to_vec()));
    let y_states = order.pow(w_obs as u32) as usize;
    let ord = order as usize;
    for omega in &omegas {
        // counts[j][y * order + v] over all messages
        let mut counts = vec![vec![0u64; y_states * ord]; l];
        let mut digits = vec![0u64; l];
        for msg in 0..states {
            let mut t = msg;
            for d in digits.iter_mut() {
                *d = t % order;
                t /= order;
            }
            let mut y_idx = 0usize;
            for (k, &col) in omega.iter().enumerate() {
                let mut xj = 0u64;
                for (i, &mi) in digits.iter().enumerate() {
                    xj = field.add_code(xj, field.mul_code(mi, generator.get(i, col)));
                }
                y_idx += (xj as usize) * ord.pow(k as u32);
            }
            for (j, &mj) in digits.iter().enumerate() {
                counts[j][y_idx * ord + mj as usize] += 1;
            }
        }
        for (j, cj) in counts.iter().enumerate() {
            for y in 0..y_states {
                let slice = &cj[y * ord..(y + 1) * ord];
                if slice.iter().any(|&c| c != slice[0]) {
                    let mut observed = Vec::with_capacity(w_obs);
                    let mut t = y;
                    for _ in 0..w_obs {
                        observed.push((t % ord) as u64);
                        t /= ord;
                    }
                    return Ok(SecrecyReport {
                        l,
                        w_obs,
                        messages_checked: states,
                        pass: false,
                        witness: Some(SecrecyViolation {
                            omega: omega.clone(),
                            j,
                            observed,
                            counts: slice.to_vec(),
                        }),
                    });
                }
            }
        }
    }
    Ok(SecrecyReport { l, w_obs, messages_checked: states, pass: true, witness: None })
}

/// First (omega, j) violating the rank criterion, or None if it holds
/// for every |omega| = w and every j.
pub fn rank_criterion_witness(generator: &Matrix, w: usize) -> Option<(Vec<usize>, usize)> {
    let l = generator.rows();
    let mut witness = None;
    for_each_combination(l, w, &mut |omega| {
        if witness.is_some() {
            return;
        }
        for j in 0..l {
            if !rank_pair_ok(generator, omega, j) {
                witness = Some((omega.to_vec(), j));
                return;
            }
        }
    });
    witness
}

fn rank_pair_ok(generator: &Matrix, omega: &[usize], j: usize) -> bool {
    let sub = generator.select_cols(omega);
    let base_rank = sub.rank();
    let mut ej = Matrix::zeros(generator.field(), generator.rows(), 1);
    ej.set(j, 0, 1);
    let appended = sub.augment(&ej).unwrap();
    appended.rank() == base_rank + 1
}

/// Visits every k-subset of {0, .., n-1} in lexicographic order.
pub fn for_each_combination(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for t in i + 1..k {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::FieldSpec;

    fn gf(p: u64, m: usize) -> FieldSpec {
        FieldSpec::auto(p, m).unwrap()
    }

    /// The two-path generator whose encoding map is
    /// x = (m1 + m2, m1 + 2 m2).
    pub(crate) fn demo_generator(field: &FieldSpec) -> Matrix {
        Matrix::from_rows(field, &[vec![1, 1], vec![1, 2]]).unwrap()
    }

    #[test]
    fn build_gf7_two_paths() {
        let f = gf(7, 1);
        let code = IsCode::build(&f, 2, 1, [7; 32]).unwrap();
        assert_eq!(code.coset_symbols(), 1);
        // Column-equivalent to the demo generator: both are nonsingular
        // 2x2 matrices, so demo^-1 * G is a nonsingular column transform.
        let q = demo_generator(&f).inverse().unwrap().mul(code.generator()).unwrap();
        assert_eq!(q.rank(), 2);
    }

    #[test]
    fn build_gf16_l3_w2_rank_pairs() {
        let f = gf(2, 4);
        let code = IsCode::build(&f, 3, 2, [3; 32]).unwrap();
        // all 9 (omega, j) pairs hold: 3 subsets x 3 unit columns
        assert!(rank_criterion_witness(code.generator(), 2).is_none());
    }

    #[test]
    fn build_rejects_small_field() {
        let f = gf(2, 1);
        assert!(matches!(
            IsCode::build(&f, 3, 2, [0; 32]),
            Err(IsCodeError::FieldTooSmall { order: 2, needed: 6 })
        ));
    }

    #[test]
    fn from_matrix_demo_valid() {
        let f = gf(7, 1);
        let code = IsCode::from_matrix(&f, demo_generator(&f), 1).unwrap();
        assert_eq!(code.paths(), 2);
        // decoder identities double-checked through an encode/decode pair below
        let f5 = gf(5, 1);
        let g5 = Matrix::from_rows(&f5, &[vec![1, 1], vec![2, 1]]).unwrap();
        assert!(IsCode::from_matrix(&f5, g5, 1).is_ok());
    }

    #[test]
    fn from_matrix_identity_rejected_with_witness() {
        let f = gf(7, 1);
        let ident = Matrix::identity(&f, 2);
        match IsCode::from_matrix(&f, ident, 1) {
            Err(IsCodeError::RankCriterionViolated { omega, j }) => {
                assert_eq!(omega, vec![0]);
                assert_eq!(j, 0);
            }
            other => panic!("expected rank violation, got {other:?}"),
        }
    }

    #[test]
    fn encode_matches_worked_example() {
        let f = gf(7, 1);
        let code = IsCode::from_matrix(&f, demo_generator(&f), 1).unwrap();
        let m = MessageBlock(Matrix::from_rows(&f, &[vec![3], vec![5]]).unwrap());
        let x = code.encode(&m).unwrap();
        // (3 + 5, 3 + 2*5) mod 7 = (1, 6)
        assert_eq!(x.0.get(0, 0), 1);
        assert_eq!(x.0.get(1, 0), 6);
        let back = code.decode(&x).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn decode_recovers_basis_vectors() {
        let f = gf(2, 4);
        let code = IsCode::build(&f, 4, 3, [9; 32]).unwrap();
        for j in 0..4 {
            let mut m = Matrix::zeros(&f, 4, 1);
            m.set(j, 0, 1);
            let x = code.encode(&MessageBlock(m.clone())).unwrap();
            // x is the j-th row of the generator, as a column
            for t in 0..4 {
                assert_eq!(x.0.get(t, 0), code.generator().get(j, t));
            }
            assert_eq!(code.decode(&x).unwrap().0, m);
        }
    }

    #[test]
    fn thousand_roundtrips_gf256() {
        use rand::{Rng, SeedableRng};
        let f = gf(2, 8);
        let code = IsCode::build(&f, 4, 3, [0x44; 32]).unwrap();
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(4483);
        for _ in 0..1000 {
            let data: Vec<u64> = (0..4).map(|_| rng.gen_range(0..f.order())).collect();
            let m = MessageBlock(Matrix::from_codes(&f, 4, 1, data).unwrap());
            let x = code.encode(&m).unwrap();
            assert_eq!(code.decode(&x).unwrap(), m);
        }
    }

    #[test]
    fn zero_block_encodes_to_zero() {
        let f = gf(7, 1);
        let code = IsCode::from_matrix(&f, demo_generator(&f), 1).unwrap();
        let m = MessageBlock(Matrix::zeros(&f, 2, 3));
        let x = code.encode(&m).unwrap();
        assert_eq!(x.0, Matrix::zeros(&f, 2, 3));
    }

    #[test]
    fn encode_agrees_with_plain_matrix_product() {
        let f = gf(7, 1);
        let code = IsCode::build(&f, 2, 1, [2; 32]).unwrap();
        let m = MessageBlock(Matrix::from_rows(&f, &[vec![4], vec![2]]).unwrap());
        let x = code.encode(&m).unwrap();
        let oracle = code.generator().transpose().mul(&m.0).unwrap();
        assert_eq!(x.0, oracle);
    }

    #[test]
    fn bruteforce_demo_passes() {
        let f = gf(7, 1);
        let code = IsCode::from_matrix(&f, demo_generator(&f), 1).unwrap();
        let report = code.verify_individual_secrecy_bruteforce(1).unwrap();
        assert!(report.pass);
        assert_eq!(report.messages_checked, 49);
    }

    #[test]
    fn bruteforce_flags_identity_when_skipping_build_checks() {
        // Construct the leaky code manually to exercise the verifier:
        // rank_criterion_witness is bypassed by calling the checker on a
        // generator directly.
        let f = gf(7, 1);
        let ident = Matrix::identity(&f, 2);
        assert_eq!(rank_criterion_witness(&ident, 1), Some((vec![0], 0)));
        // and the enumeration-based verdict agrees, with a concrete witness
        let report = verify_generator_secrecy_bruteforce(&ident, 1).unwrap();
        assert!(!report.pass);
        let witness = report.witness.unwrap();
        assert_eq!((witness.omega.clone(), witness.j), (vec![0], 0));
    }

    #[test]
    fn bruteforce_vacuous_at_zero_observations() {
        let f = gf(7, 1);
        let code = IsCode::from_matrix(&f, demo_generator(&f), 1).unwrap();
        let report = code.verify_individual_secrecy_bruteforce(0).unwrap();
        assert!(report.pass);
    }

    #[test]
    fn reconstruct_matches_encode_oracle() {
        let f = gf(7, 1);
        let code = IsCode::from_matrix(&f, demo_generator(&f), 1).unwrap();
        // Known pair: m = (3, 5), x = (1, 6). Give m_0 and x_1.
        let rec = code.reconstruct_encoded(&[0], &[3], &[6]).unwrap();
        assert_eq!(rec.x_at_positions, vec![1]);
        assert_eq!(rec.m_at_rest, vec![5]);
        assert!(rec.ops.total() > 0);
    }

    #[test]
    fn reconstruct_random_pairs_many_sizes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(55);
        for l in [2usize, 3, 4, 6] {
            let f = gf(2, 4);
            let w = l - 1;
            let code = IsCode::build(&f, l, w, [l as u8; 32]).unwrap();
            for _ in 0..125 {
                let m: Vec<u64> = (0..l).map(|_| rng.gen_range(0..f.order())).collect();
                let mcol = Matrix::from_codes(&f, l, 1, m.clone()).unwrap();
                let x = code.encode(&MessageBlock(mcol)).unwrap();
                let positions = [0usize];
                let x_rest: Vec<u64> = (1..l).map(|j| x.0.get(j, 0)).collect();
                let rec = code.reconstruct_encoded(&positions, &m[..1], &x_rest).unwrap();
                assert_eq!(rec.x_at_positions, vec![x.0.get(0, 0)]);
                assert_eq!(rec.m_at_rest, m[1..].to_vec());
            }
        }
    }

    #[test]
    fn reconstruct_rejects_inconsistent_inputs() {
        // For a totally nonsingular generator every (m_S, x_rest) pair is
        // consistent (the coset structure guarantees a completion), so the
        // failure paths need a generator with a singular complementary
        // submatrix: here G[2][2] = 0, yet the code is valid for w = 1.
        let f = gf(7, 1);
        let g = Matrix::from_rows(&f, &[vec![1, 1, 1], vec![2, 1, 3], vec![3, 2, 0]]).unwrap();
        let code = IsCode::from_matrix(&f, g, 1).unwrap();
        // With S = {0, 1}, the remaining equation reads
        // 0 * m_2 = x_2 - (m_0 + 3 m_1): inconsistent unless it balances.
        let bad = code.reconstruct_encoded(&[0, 1], &[5, 1], &[0]);
        assert!(matches!(bad, Err(IsCodeError::InconsistentInput)));
        // Balanced right-hand side: x_2 = 5 + 3 = 1 mod 7, but m_2 is
        // undetermined, which surfaces as a singular subsystem.
        let underdetermined = code.reconstruct_encoded(&[0, 1], &[5, 1], &[1]);
        assert!(matches!(underdetermined, Err(IsCodeError::SingularSubsystem)));
    }

    #[test]
    fn reconstruct_exhaustive_small_instances() {
        // every consistent input over GF(8), l in {2, 3}, all position
        // sets: the completion must match the is_encode ground truth
        let f = gf(2, 3);
        for l in [2usize, 3] {
            for w in 1..l {
                let c = l - w;
                let code = IsCode::build(&f, l, w, [l as u8 * 8 + w as u8; 32]).unwrap();
                let mut position_sets = Vec::new();
                for_each_combination(l, c, &mut |s| position_sets.push(s.to_vec()));
                for msg in 0..8u64.pow(l as u32) {
                    let digits: Vec<u64> = (0..l).map(|i| (msg >> (3 * i)) & 7).collect();
                    let mcol = Matrix::from_codes(&f, l, 1, digits.clone()).unwrap();
                    let x = code.encode(&MessageBlock(mcol)).unwrap();
                    for positions in &position_sets {
                        let m_given: Vec<u64> = positions.iter().map(|&i| digits[i]).collect();
                        let rest: Vec<usize> =
                            (0..l).filter(|i| !positions.contains(i)).collect();
                        let x_rest: Vec<u64> = rest.iter().map(|&j| x.0.get(j, 0)).collect();
                        let rec =
                            code.reconstruct_encoded(positions, &m_given, &x_rest).unwrap();
                        let expect_x: Vec<u64> =
                            positions.iter().map(|&j| x.0.get(j, 0)).collect();
                        let expect_m: Vec<u64> = rest.iter().map(|&i| digits[i]).collect();
                        assert_eq!(rec.x_at_positions, expect_x);
                        assert_eq!(rec.m_at_rest, expect_m);
                    }
                }
            }
        }
    }

    #[test]
    fn reconstruct_op_count_cubic_bound() {
        // count <= K l^3 for a fixed small K across l in 2..=12
        let f = gf(2, 8);
        for l in 2..=12usize {
            let code = IsCode::build(&f, l, l - 1, [l as u8; 32]).unwrap();
            let m: Vec<u64> = (0..l as u64).collect();
            let mcol = Matrix::from_codes(&f, l, 1, m.clone()).unwrap();
            let x = code.encode(&MessageBlock(mcol)).unwrap();
            let x_rest: Vec<u64> = (1..l).map(|j| x.0.get(j, 0)).collect();
            let rec = code.reconstruct_encoded(&[0], &m[..1], &x_rest).unwrap();
            let bound = 4 * (l as u64).pow(3);
            assert!(
                rec.ops.total() <= bound,
                "l={l}: {} > {bound}",
                rec.ops.total()
            );
        }
    }

    #[test]
    fn serialization_roundtrip() {
        let f = gf(2, 5);
        let code = IsCode::build(&f, 4, 2, [11; 32]).unwrap();
        let mut buf = Vec::new();
        code.write_to(&mut buf).unwrap();
        let mut pos = 0;
        let back = IsCode::read_from(&buf, &mut pos).unwrap();
        assert_eq!(pos, buf.len());
        assert_eq!(back.generator(), code.generator());
        assert_eq!(back.secrecy_parameter(), code.secrecy_parameter());
    }

    #[test]
    fn serialization_rejects_corruption() {
        let f = gf(2, 5);
        let code = IsCode::build(&f, 4, 2, [11; 32]).unwrap();
        let mut buf = Vec::new();
        code.write_to(&mut buf).unwrap();
        let mut pos = 0;
        assert!(matches!(
            IsCode::read_from(&buf[..buf.len() - 1], &mut pos),
            Err(IsCodeError::BadEncoding)
        ));
        // an in-range entry edit still has to survive the build checks;
        // zeroing a generator column breaks the rank criterion
        let mut tampered = buf.clone();
        let tail = tampered.len() - 16;
        for b in &mut tampered[tail..] {
            *b = 0;
        }
        let mut pos = 0;
        assert!(IsCode::read_from(&tampered, &mut pos).is_err());
    }

    #[test]
    fn rank_criterion_equals_bruteforce_on_random_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(99);
        for f in [gf(7, 1), gf(2, 3)] {
            for _ in 0..60 {
                let l = 2;
                let w = 1;
                let data: Vec<u64> = (0..l * l).map(|_| rng.gen_range(0..f.order())).collect();
                let g = Matrix::from_codes(&f, l, l, data).unwrap();
                if g.rank() < l {
                    continue;
                }
                let criterion = rank_criterion_witness(&g, w).is_none();
                let brute = verify_generator_secrecy_bruteforce(&g, w).unwrap().pass;
                assert_eq!(criterion, brute, "matrix {g:?}");
            }
        }
    }
}
