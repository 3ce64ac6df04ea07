//! Packed bit vectors and dense GF(2) matrices.
//!
//! Bit order is little-endian within a byte throughout: bit index i lives
//! in byte i / 8 at position i % 8. Serialized forms are exactly the
//! in-memory byte sequences.

/// Growable bit string with little-endian bit-within-byte packing.
#[derive(Clone, PartialEq, Eq)]
pub struct BitVec {
    len: usize,
    bytes: Vec<u8>,
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitVec[{}b;", self.len)?;
        for i in 0..self.len.min(64) {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        if self.len > 64 {
            write!(f, "..")?;
        }
        write!(f, "]")
    }
}

impl BitVec {
    pub fn new() -> Self {
        BitVec { len: 0, bytes: Vec::new() }
    }

    pub fn zeros(len: usize) -> Self {
        BitVec { len, bytes: vec![0; len.div_ceil(8)] }
    }

    /// Wraps `len` bits stored in `bytes`; any bits past `len` in the
    /// final byte must be zero.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Option<Self> {
        if bytes.len() != len.div_ceil(8) {
            return None;
        }
        if !len.is_multiple_of(8) {
            let last = bytes[bytes.len() - 1];
            if last >> (len % 8) != 0 {
                return None;
            }
        }
        Some(BitVec { len, bytes: bytes.to_vec() })
    }

    /// All bits of the byte slice, LSB first.
    pub fn from_all_bytes(bytes: &[u8]) -> Self {
        BitVec { len: bytes.len() * 8, bytes: bytes.to_vec() }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.bytes[i / 8] >> (i % 8)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        if v {
            self.bytes[i / 8] |= 1 << (i % 8);
        } else {
            self.bytes[i / 8] &= !(1 << (i % 8));
        }
    }

    pub fn flip(&mut self, i: usize) {
        let v = self.get(i);
        self.set(i, !v);
    }

    pub fn push(&mut self, v: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, v);
    }

    /// Appends the low `count` bits of `value`, LSB first.
    pub fn append_bits(&mut self, value: u64, count: usize) {
        debug_assert!(count <= 64);
        for i in 0..count {
            self.push((value >> i) & 1 == 1);
        }
    }

    pub fn append(&mut self, other: &BitVec) {
        for i in 0..other.len {
            self.push(other.get(i));
        }
    }

    /// Reads `count <= 64` bits starting at `pos`, LSB first.
    pub fn read_bits(&self, pos: usize, count: usize) -> u64 {
        debug_assert!(count <= 64 && pos + count <= self.len);
        let mut v = 0u64;
        for i in 0..count {
            if self.get(pos + i) {
                v |= 1 << i;
            }
        }
        v
    }

    pub fn slice(&self, start: usize, count: usize) -> BitVec {
        assert!(start + count <= self.len);
        let mut out = BitVec::zeros(count);
        for i in 0..count {
            out.set(i, self.get(start + i));
        }
        out
    }

    pub fn xor_with(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.bytes.iter_mut().zip(&other.bytes) {
            *a ^= b;
        }
    }

    pub fn weight(&self) -> usize {
        self.bytes.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Positions of set bits.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }
}

impl Default for BitVec {
    fn default() -> Self {
        Self::new()
    }
}

/// Dense GF(2) matrix, each row packed into u64 words.
#[derive(Clone, PartialEq, Eq)]
pub struct BinMatrix {
    rows: usize,
    cols: usize,
    wpr: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for BinMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BinMatrix {}x{}", self.rows, self.cols)
    }
}

impl BinMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let wpr = cols.div_ceil(64).max(1);
        BinMatrix { rows, cols, wpr, data: vec![0; rows * wpr] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.wpr + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = r * self.wpr + c / 64;
        if v {
            self.data[w] |= 1 << (c % 64);
        } else {
            self.data[w] &= !(1 << (c % 64));
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.wpr..(r + 1) * self.wpr]
    }

    /// `row[dst] ^= row[src]`
    pub fn xor_rows(&mut self, dst: usize, src: usize) {
        let (d, s) = (dst * self.wpr, src * self.wpr);
        for w in 0..self.wpr {
            let v = self.data[s + w];
            self.data[d + w] ^= v;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.wpr {
            self.data.swap(a * self.wpr + w, b * self.wpr + w);
        }
    }

    pub fn mul(&self, other: &BinMatrix) -> BinMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = BinMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for (wi, &word) in self.row_words(i).iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let k = wi * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let (d, s) = (i * out.wpr, k * other.wpr);
                    for w in 0..out.wpr {
                        out.data[d + w] ^= other.data[s + w];
                    }
                }
            }
        }
        out
    }

    /// Row vector times matrix: `out[j] = sum_i v[i] * self[i][j]`.
    pub fn mul_left(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.rows, "dimension mismatch");
        let mut acc = vec![0u64; self.wpr];
        for i in 0..self.rows {
            if v.get(i) {
                for (a, &w) in acc.iter_mut().zip(self.row_words(i)) {
                    *a ^= w;
                }
            }
        }
        let mut out = BitVec::zeros(self.cols);
        for j in 0..self.cols {
            if (acc[j / 64] >> (j % 64)) & 1 == 1 {
                out.set(j, true);
            }
        }
        out
    }

    pub fn transpose(&self) -> BinMatrix {
        let mut out = BinMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for (wi, &word) in self.row_words(r).iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let c = wi * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    out.set(c, r, true);
                }
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            self.swap_rows(rank, p);
            for r in 0..self.rows {
                if r != rank && self.get(r, col) {
                    self.xor_rows(r, rank);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right null space: a (cols - rank) x cols matrix whose
    /// rows v satisfy self * v^T = 0. The basis is systematic on the
    /// non-pivot columns.
    pub fn nullspace_basis(&self) -> BinMatrix {
        let mut work = self.clone();
        let pivots = work.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = BinMatrix::zeros(free.len(), self.cols);
        for (bi, &fc) in free.iter().enumerate() {
            basis.set(bi, fc, true);
            for (pr, &pc) in pivots.iter().enumerate() {
                if work.get(pr, fc) {
                    basis.set(bi, pc, true);
                }
            }
        }
        basis
    }

    /// Inverse of a square matrix, if nonsingular.
    pub fn inverse(&self) -> Option<BinMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = BinMatrix::identity(n);
        for col in 0..n {
            let p = (col..n).find(|&r| work.get(r, col))?;
            work.swap_rows(col, p);
            inv.swap_rows(col, p);
            for r in 0..n {
                if r != col && work.get(r, col) {
                    work.xor_rows(r, col);
                    inv.xor_rows(r, col);
                }
            }
        }
        Some(inv)
    }

    /// Right-multiplication by the permutation matrix P with
    /// `P[i][j] = [j == perm[i]]`: input column c lands in output
    /// column `perm[c]`.
    pub fn permute_cols(&self, perm: &[usize]) -> BinMatrix {
        assert_eq!(perm.len(), self.cols);
        let mut out = BinMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for (wi, &word) in self.row_words(r).iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let c = wi * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    out.set(r, perm[c], true);
                }
            }
        }
        out
    }

    /// Row-major packed serialization, each row padded to a byte boundary.
    pub fn to_bytes(&self) -> Vec<u8> {
        let bpr = self.cols.div_ceil(8);
        let mut out = Vec::with_capacity(self.rows * bpr);
        for r in 0..self.rows {
            let words = self.row_words(r);
            for b in 0..bpr {
                let word = words[b * 8 / 64];
                out.push(((word >> ((b * 8) % 64)) & 0xff) as u8);
            }
        }
        out
    }

    pub fn from_bytes(rows: usize, cols: usize, bytes: &[u8]) -> Option<BinMatrix> {
        let bpr = cols.div_ceil(8);
        if bytes.len() != rows * bpr {
            return None;
        }
        let mut out = BinMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                let byte = bytes[r * bpr + c / 8];
                if (byte >> (c % 8)) & 1 == 1 {
                    out.set(r, c, true);
                }
            }
        }
        // reject junk in row padding bits
        for r in 0..rows {
            for c in cols..bpr * 8 {
                let byte = bytes[r * bpr + c / 8];
                if (byte >> (c % 8)) & 1 == 1 {
                    return None;
                }
            }
        }
        Some(out)
    }
}
