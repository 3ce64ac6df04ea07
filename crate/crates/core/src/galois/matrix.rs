use super::field::{FieldElement, FieldSpec};
use super::GaloisError;

/// Field-operation tally from an instrumented elimination. Feeds the
/// security-level calculator's delta.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCount {
    pub adds: u64,
    pub muls: u64,
    pub invs: u64,
}

impl OpCount {
    pub fn total(&self) -> u64 {
        self.adds + self.muls + self.invs
    }
}

/// Dense matrix over a [`FieldSpec`], entries stored as element codes in
/// row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Row-major element codes; every code must be in range for the field.
    pub fn from_codes(field: &FieldSpec, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self, GaloisError> {
        if data.len() != rows * cols {
            return Err(GaloisError::DimensionMismatch { left: (rows, cols), right: (data.len(), 1) });
        }
        for &c in &data {
            if c >= field.order() {
                return Err(GaloisError::InvalidCode { code: c, order: field.order() });
            }
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    pub fn from_rows(field: &FieldSpec, rows: &[Vec<u64>]) -> Result<Self, GaloisError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(GaloisError::DimensionMismatch { left: (r, c), right: (1, row.len()) });
            }
            data.extend_from_slice(row);
        }
        Self::from_codes(field, r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, code: u64) {
        self.data[r * self.cols + c] = code;
    }

    pub fn elem(&self, r: usize, c: usize) -> FieldElement {
        self.field.element(self.get(r, c)).unwrap()
    }

    pub fn row_codes(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, GaloisError> {
        if self.field != other.field {
            return Err(GaloisError::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(GaloisError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b == 0 {
                        continue;
                    }
                    let cur = out.get(i, j);
                    out.set(i, j, self.field.add_code(cur, self.field.mul_code(a, b)));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, GaloisError> {
        if self.field != other.field {
            return Err(GaloisError::FieldMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(GaloisError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.add_code(a, b))
            .collect();
        Ok(Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(&self.field, rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for c in 0..self.cols {
                out.set(i, c, self.get(r, c));
            }
        }
        out
    }

    /// Horizontal concatenation [self | other].
    pub fn augment(&self, other: &Matrix) -> Result<Matrix, GaloisError> {
        if self.field != other.field || self.rows != other.rows {
            return Err(GaloisError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Matrix::zeros(&self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        Ok(out)
    }

    /// Row-echelon rank via Gaussian elimination on a working copy.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let mut rank = 0;
        for col in 0..work.cols {
            if rank == work.rows {
                break;
            }
            let pivot = (rank..work.rows).find(|&r| work.get(r, col) != 0);
            let Some(p) = pivot else { continue };
            work.swap_rows(rank, p);
            let inv = work.field.inv_code(work.get(rank, col)).unwrap();
            work.scale_row(rank, inv);
            for r in rank + 1..work.rows {
                let factor = work.get(r, col);
                if factor != 0 {
                    work.sub_scaled_row(r, rank, factor);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Inverse of a square matrix by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Matrix, GaloisError> {
        if self.rows != self.cols {
            return Err(GaloisError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (self.cols, self.rows),
            });
        }
        let n = self.rows;
        let mut work = self.augment(&Matrix::identity(&self.field, n))?;
        for col in 0..n {
            let pivot = (col..n).find(|&r| work.get(r, col) != 0).ok_or(GaloisError::Singular)?;
            work.swap_rows(col, pivot);
            let inv = work.field.inv_code(work.get(col, col)).unwrap();
            work.scale_row(col, inv);
            for r in 0..n {
                if r != col {
                    let factor = work.get(r, col);
                    if factor != 0 {
                        work.sub_scaled_row(r, col, factor);
                    }
                }
            }
        }
        let mut out = Matrix::zeros(&self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, work.get(r, n + c));
            }
        }
        Ok(out)
    }

    /// Solves `self * x = rhs` (rhs one column), returning one solution
    /// with free variables set to zero, or `Inconsistent`.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix, GaloisError> {
        self.solve_with_count(rhs).map(|(x, _)| x)
    }

    /// Instrumented Gaussian elimination: same semantics as [`Matrix::solve`]
    /// but also tallies every field operation performed. The elimination is
    /// run without zero-skipping so the count depends only on the system
    /// dimensions, not the entry values.
    pub fn solve_with_count(&self, rhs: &Matrix) -> Result<(Matrix, OpCount), GaloisError> {
        if self.field != rhs.field {
            return Err(GaloisError::FieldMismatch);
        }
        if rhs.rows != self.rows || rhs.cols != 1 {
            return Err(GaloisError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let mut count = OpCount::default();
        let mut work = self.augment(rhs)?;
        let n_cols = self.cols;
        let width = work.cols;
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut rank = 0usize;
        for col in 0..n_cols {
            if rank == work.rows {
                break;
            }
            let Some(p) = (rank..work.rows).find(|&r| work.get(r, col) != 0) else {
                continue;
            };
            work.swap_rows(rank, p);
            let inv = work.field.inv_code(work.get(rank, col)).unwrap();
            count.invs += 1;
            for c in col..width {
                let v = work.field.mul_code(work.get(rank, c), inv);
                count.muls += 1;
                work.set(rank, c, v);
            }
            for r in 0..work.rows {
                if r == rank {
                    continue;
                }
                let factor = work.get(r, col);
                for c in col..width {
                    let sub = work.field.mul_code(factor, work.get(rank, c));
                    let v = work.field.sub_code(work.get(r, c), sub);
                    count.muls += 1;
                    count.adds += 1;
                    work.set(r, c, v);
                }
            }
            pivots.push((rank, col));
            rank += 1;
        }
        for r in rank..work.rows {
            if work.get(r, n_cols) != 0 {
                return Err(GaloisError::Inconsistent);
            }
        }
        let mut x = Matrix::zeros(&self.field, n_cols, 1);
        for &(r, c) in &pivots {
            x.set(c, 0, work.get(r, n_cols));
        }
        Ok((x, count))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, factor: u64) {
        for c in 0..self.cols {
            let v = self.field.mul_code(self.get(r, c), factor);
            self.set(r, c, v);
        }
    }

    /// row[r] -= factor * row[src]
    fn sub_scaled_row(&mut self, r: usize, src: usize, factor: u64) {
        for c in 0..self.cols {
            let sub = self.field.mul_code(factor, self.get(src, c));
            let v = self.field.sub_code(self.get(r, c), sub);
            self.set(r, c, v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn gf(p: u64, m: usize) -> FieldSpec {
        FieldSpec::auto(p, m).unwrap()
    }

    #[test]
    fn inverse_of_demo_matrix_over_gf7() {
        let f = gf(7, 1);
        let a = Matrix::from_rows(&f, &[vec![1, 1], vec![2, 1]]).unwrap();
        let inv = a.inverse().unwrap();
        let expect = Matrix::from_rows(&f, &[vec![6, 1], vec![2, 6]]).unwrap();
        assert_eq!(inv, expect);
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(&f, 2));
    }

    #[test]
    fn identity_rank() {
        let f = gf(2, 4);
        for n in 1..=6 {
            assert_eq!(Matrix::identity(&f, n).rank(), n);
        }
    }

    #[test]
    fn solve_identity_system() {
        let f = gf(7, 1);
        let b = Matrix::from_rows(&f, &[vec![3], vec![5], vec![2]]).unwrap();
        let x = Matrix::identity(&f, 3).solve(&b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_reports_inconsistency() {
        let f = gf(7, 1);
        // rows are linearly dependent but rhs is not
        let a = Matrix::from_rows(&f, &[vec![1, 2], vec![2, 4]]).unwrap();
        let b = Matrix::from_rows(&f, &[vec![1], vec![3]]).unwrap();
        assert!(matches!(a.solve(&b), Err(GaloisError::Inconsistent)));
    }

    #[test]
    fn random_inverse_times_self_is_identity() {
        // random nonsingular matrices up to 16x16 over GF(2^8)
        let f = gf(2, 8);
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        for n in [2usize, 5, 9, 16] {
            let mut found = 0;
            while found < 4 {
                let data: Vec<u64> = (0..n * n).map(|_| rng.gen_range(0..f.order())).collect();
                let a = Matrix::from_codes(&f, n, n, data).unwrap();
                if a.rank() < n {
                    continue;
                }
                found += 1;
                let inv = a.inverse().unwrap();
                assert_eq!(inv.mul(&a).unwrap(), Matrix::identity(&f, n));
            }
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let f = gf(7, 1);
        let a = Matrix::from_rows(&f, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(matches!(a.inverse(), Err(GaloisError::Singular)));
    }

    #[test]
    fn op_count_depends_only_on_shape() {
        let f = gf(2, 8);
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let mut counts = Vec::new();
        for _ in 0..3 {
            let n = 6;
            loop {
                let data: Vec<u64> = (0..n * n).map(|_| rng.gen_range(0..f.order())).collect();
                let a = Matrix::from_codes(&f, n, n, data).unwrap();
                if a.rank() < n {
                    continue;
                }
                let b_data: Vec<u64> = (0..n).map(|_| rng.gen_range(0..f.order())).collect();
                let b = Matrix::from_codes(&f, n, 1, b_data).unwrap();
                let (_, count) = a.solve_with_count(&b).unwrap();
                counts.push(count.total());
                break;
            }
        }
        assert!(counts.windows(2).all(|w| w[0] == w[1]));
    }
}
