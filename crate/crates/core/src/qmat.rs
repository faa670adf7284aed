//! Dense matrices over Q with exact Gaussian elimination. Everything the
//! degreewise checks need reduces to rank and kernel computations here.

use num_traits::Zero;

use crate::ring::Coeff;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Coeff>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![Coeff::zero(); rows * cols] }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Coeff>]) -> Self {
        let mut m = QMat::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Coeff {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Coeff) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Coeff> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hcat(&self, other: &QMat) -> QMat {
        assert_eq!(self.rows, other.rows);
        let mut m = QMat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows);
        let mut m = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j).clone() + a.clone() * b.clone();
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Row-reduce in place; returns the pivot columns.
    fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let pivot_row = (row..self.rows).find(|&r| !self.get(r, col).is_zero());
            let pivot_row = match pivot_row {
                None => continue,
                Some(r) => r,
            };
            if pivot_row != row {
                for j in 0..self.cols {
                    self.data.swap(pivot_row * self.cols + j, row * self.cols + j);
                }
            }
            let inv = {
                let p = self.get(row, col).clone();
                Coeff::new(p.denom().clone(), p.numer().clone())
            };
            for j in col..self.cols {
                let v = self.get(row, j).clone() * inv.clone();
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col).clone();
                for j in col..self.cols {
                    let v = self.get(r, j).clone() - factor.clone() * self.get(row, j).clone();
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.reduce().len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Coeff>> {
        let mut m = self.clone();
        let pivots = m.reduce();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Coeff::zero(); self.cols];
            v[free] = Coeff::from_integer(1.into());
            for (r, &pc) in pivots.iter().enumerate() {
                if pc < free {
                    v[pc] = -m.get(r, free).clone();
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// rank([A | B]) - rank(B): the rank of A's image in the quotient by B's
/// column span. This is the induced-map rank used throughout the degreewise
/// homology computations.
pub fn rank_modulo(a: &QMat, b: &QMat) -> usize {
    if b.cols() == 0 {
        return a.rank();
    }
    a.hcat(b).rank() - b.rank()
}

/// A cochain complex of subquotient pieces: position p is the quotient of a
/// free Q-space of dimension `ambient[p]` by the column span of `rel[p]`,
/// and `map[p]` is a matrix ambient[p] -> ambient[p+1] that descends to the
/// quotients.
pub struct QuotientComplex {
    pub ambient: Vec<usize>,
    pub rel: Vec<QMat>,
    pub maps: Vec<QMat>,
}

impl QuotientComplex {
    pub fn len(&self) -> usize {
        self.ambient.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ambient.is_empty()
    }

    pub fn space_dim(&self, p: usize) -> usize {
        self.ambient[p] - self.rel[p].rank()
    }

    fn induced_rank(&self, p: usize) -> usize {
        if p + 1 >= self.ambient.len() {
            return 0;
        }
        rank_modulo(&self.maps[p], &self.rel[p + 1])
    }

    /// dim H^p = dim ker(map[p] on quotients) - rank(map[p-1] on quotients).
    pub fn cohomology_dim(&self, p: usize) -> usize {
        let dim = self.space_dim(p);
        let out_rank = self.induced_rank(p);
        let in_rank = if p == 0 { 0 } else { self.induced_rank(p - 1) };
        dim - out_rank - in_rank
    }

    /// Composite of consecutive induced maps vanishes on the quotients.
    pub fn check_dd_zero(&self) -> bool {
        for p in 0..self.maps.len().saturating_sub(1) {
            let comp = self.maps[p + 1].mul(&self.maps[p]);
            if comp.cols() == 0 {
                continue;
            }
            if rank_modulo(&comp, &self.rel[p + 2]) != 0 {
                return false;
            }
        }
        true
    }
}
