//! Dense matrices over a [`ScalarField`], row-major, entries as field codes.

use crate::ff::ScalarField;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn push_row(&mut self, row: &[u32]) {
        if self.rows == 0 && self.cols == 0 {
            self.cols = row.len();
        }
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    /// Column `j` of the result is column `perm[j]` of `self`.
    pub fn select_columns(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, perm.len());
        for i in 0..self.rows {
            for (j, &src) in perm.iter().enumerate() {
                out.set(i, j, self.get(i, src));
            }
        }
        out
    }

    pub fn map_entries(&self, f: impl Fn(u32) -> u32) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    /// In-place reduced row-echelon form with zero rows dropped. Returns the
    /// pivot columns.
    pub fn rref<F: ScalarField>(&mut self, f: &F) -> Vec<usize> {
        let pivots = rref_in_place(&mut self.data, self.rows, self.cols, f);
        self.rows = pivots.len();
        self.data.truncate(self.rows * self.cols);
        pivots
    }

    pub fn rank<F: ScalarField>(&self, f: &F) -> usize {
        self.clone().rref(f).len()
    }

    /// Basis of `{x : self * x = 0}`, one vector per row, in reduced
    /// row-echelon form.
    pub fn nullspace<F: ScalarField>(&self, f: &F) -> Matrix {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        let mut basis = Matrix::zeros(0, self.cols);
        for &fc in &free {
            let mut v = vec![0u32; self.cols];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.get(i, fc));
            }
            basis.push_row(&v);
        }
        basis.rref(f);
        basis
    }

    /// `self * v`.
    pub fn mul_vec<F: ScalarField>(&self, v: &[u32], f: &F) -> Vec<u32> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }
}

/// Gauss-Jordan on a row-major buffer. Nonzero rows end up first, in reduced
/// form; returns the pivot columns.
pub fn rref_in_place<F: ScalarField>(data: &mut [u32], rows: usize, cols: usize, f: &F) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                data.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(data[r * cols + c]).expect("pivot is nonzero");
        for j in c..cols {
            data[r * cols + j] = f.mul(data[r * cols + j], inv);
        }
        for i in 0..rows {
            let factor = data[i * cols + c];
            if i == r || factor == 0 {
                continue;
            }
            let nf = f.neg(factor);
            for j in c..cols {
                let v = data[r * cols + j];
                if v != 0 {
                    data[i * cols + j] = f.add(data[i * cols + j], f.mul(nf, v));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a row-major buffer, destroying it.
pub fn rank_in_place<F: ScalarField>(data: &mut [u32], rows: usize, cols: usize, f: &F) -> usize {
    rref_in_place(data, rows, cols, f).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::PrimeField;

    #[test]
    fn rank_and_nullspace_over_f3() {
        let f = PrimeField::new(3);
        let m = Matrix::from_rows(vec![vec![1, 2, 0, 1], vec![2, 1, 0, 2], vec![0, 0, 1, 1]]);
        assert_eq!(m.rank(&f), 2);
        let ns = m.nullspace(&f);
        assert_eq!(ns.rows(), 2);
        for i in 0..ns.rows() {
            assert!(m.mul_vec(ns.row(i), &f).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn rref_is_canonical() {
        let f = PrimeField::new(5);
        let mut a = Matrix::from_rows(vec![vec![1, 2, 3], vec![0, 1, 4]]);
        let mut b = Matrix::from_rows(vec![vec![2, 4, 1], vec![1, 3, 2]]);
        a.rref(&f);
        b.rref(&f);
        // same row space: (2,4,1) = 2(1,2,3) and (1,3,2) = (1,2,3) + (0,1,4)
        assert_eq!(a, b);
    }

    #[test]
    fn full_rank_identity_has_trivial_kernel() {
        let f = PrimeField::new(2);
        let m = Matrix::from_rows(vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(m.nullspace(&f).rows(), 0);
    }
}
