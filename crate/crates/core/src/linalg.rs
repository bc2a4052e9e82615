//! Dense Gaussian elimination over GF(q).

use crate::gf::{Fe, Field};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![Fe::ZERO; rows * cols],
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Fe>>) -> Matrix {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        Matrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul_vec(&self, field: &Field, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|r| field.dot(self.row(r), v)).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    /// Reduces in place to reduced row-echelon form, returning pivot columns.
    /// Pivots are taken column by column, first nonzero row at or below the
    /// current rank.
    pub fn rref(&mut self, field: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pr) = (rank..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(rank, pr);
            let inv = field.inv(self.get(rank, col)).unwrap();
            for c in col..self.cols {
                let v = field.mul(self.get(rank, c), inv);
                self.set(rank, c, v);
            }
            for r in 0..self.rows {
                if r == rank {
                    continue;
                }
                let factor = self.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in col..self.cols {
                    let v = field.sub(self.get(r, c), field.mul(factor, self.get(rank, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.clone().rref(field).len()
    }

    /// Basis of the right kernel: one vector per free column, that column set to 1.
    pub fn kernel_basis(&self, field: &Field) -> Vec<Vec<Fe>> {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Fe::ZERO; self.cols];
                v[free] = Fe::ONE;
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = field.neg(m.get(r, free));
                }
                v
            })
            .collect()
    }

    /// The kernel vector obtained from the first free column.
    pub fn kernel_vector(&self, field: &Field) -> Option<Vec<Fe>> {
        self.kernel_basis(field).into_iter().next()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = Field::new(5, 1).unwrap();
        let e = |x| f.from_int(x);
        let m = Matrix::from_rows(
            4,
            vec![
                vec![e(1), e(2), e(3), e(4)],
                vec![e(2), e(4), e(1), e(3)],
                vec![e(3), e(1), e(4), e(2)],
            ],
        );
        let basis = m.kernel_basis(&f);
        assert_eq!(basis.len(), 4 - m.rank(&f));
        for v in &basis {
            assert!(m.mul_vec(&f, v).iter().all(|x| x.is_zero()));
            assert!(v.iter().any(|x| !x.is_zero()));
        }
    }

    #[test]
    fn rank_over_extension_field() {
        let f = Field::new(2, 2).unwrap();
        let w = f.element(2);
        let w2 = f.mul(w, w);
        // second row is w times the first
        let m = Matrix::from_rows(2, vec![vec![Fe::ONE, w], vec![w, w2]]);
        assert_eq!(m.rank(&f), 1);
        let id = Matrix::from_rows(2, vec![vec![Fe::ONE, Fe::ZERO], vec![Fe::ZERO, Fe::ONE]]);
        assert_eq!(id.rank(&f), 2);
        assert!(id.kernel_vector(&f).is_none());
    }

    #[test]
    fn empty_system_has_full_kernel() {
        let f = Field::new(3, 1).unwrap();
        let m = Matrix::zeros(0, 3);
        assert_eq!(m.kernel_basis(&f).len(), 3);
        assert_eq!(m.kernel_vector(&f).unwrap(), vec![Fe::ONE, Fe::ZERO, Fe::ZERO]);
    }
}
