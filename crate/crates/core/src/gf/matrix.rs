use super::field::{FieldCtx, FieldElement};
use crate::error::{Error, Result};

/// Dense row-major matrix over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFq {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

impl MatrixFq {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixFq {
            rows,
            cols,
            entries: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatrixFq::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(MatrixFq {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.entries[i * self.cols + j] = v;
    }

    /// Reduces in place to row echelon form and returns the pivot columns.
    fn echelon(&mut self, ctx: &FieldCtx, pivot_limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..pivot_limit.min(self.cols) {
            if row == self.rows {
                break;
            }
            let Some(src) = (row..self.rows).find(|&i| !self.get(i, col).is_zero()) else {
                continue;
            };
            if src != row {
                for j in 0..self.cols {
                    self.entries.swap(src * self.cols + j, row * self.cols + j);
                }
            }
            let inv = ctx.inv(self.get(row, col)).expect("pivot is nonzero");
            for j in col..self.cols {
                let v = ctx.mul(self.get(row, j), inv);
                self.set(row, j, v);
            }
            for i in 0..self.rows {
                if i == row {
                    continue;
                }
                let f = self.get(i, col);
                if f.is_zero() {
                    continue;
                }
                for j in col..self.cols {
                    let v = ctx.sub(self.get(i, j), ctx.mul(f, self.get(row, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// Rank by Gauss-Jordan elimination.
    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        let mut m = self.clone();
        let cols = m.cols;
        m.echelon(ctx, cols).len()
    }

    /// Some solution of `self * x = rhs`, or `None` if the system is inconsistent.
    pub fn solve(&self, ctx: &FieldCtx, rhs: &[FieldElement]) -> Result<Option<Vec<FieldElement>>> {
        if rhs.len() != self.rows {
            return Err(Error::InvalidInput(format!(
                "right-hand side has {} entries, matrix has {} rows",
                rhs.len(),
                self.rows
            )));
        }
        let mut aug = MatrixFq::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, rhs[i]);
        }
        let pivots = aug.echelon(ctx, self.cols);
        if (pivots.len()..self.rows).any(|i| !aug.get(i, self.cols).is_zero()) {
            return Ok(None);
        }
        let mut x = vec![FieldElement::ZERO; self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = aug.get(row, self.cols);
        }
        Ok(Some(x))
    }
}

/// Rank of `m` over the field of `ctx`.
pub fn rank_fq(ctx: &FieldCtx, m: &MatrixFq) -> usize {
    m.rank(ctx)
}
