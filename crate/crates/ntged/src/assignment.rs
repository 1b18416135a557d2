//! Minimum-cost linear assignment on square rational cost matrices.
//!
//! Used both for the child-matching subproblems inside the tree distance
//! and for the top-level vertex assignment. Shortest-augmenting-path
//! formulation with dual potentials, cubic worst case; matrices at desk
//! scale stay small enough that this is never the bottleneck.

use num_traits::Zero;
use thiserror::Error;

use crate::cost::Cost;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LapError {
    #[error("cost matrix must be square: row {0} has length {1}, expected {2}")]
    NotSquare(usize, usize, usize),
    #[error("negative entry at ({0}, {1})")]
    NegativeEntry(usize, usize),
}

/// Dense square cost matrix. Rows and columns beyond `real_rows` /
/// `real_cols` are padding that encodes deletion or insertion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostMatrix {
    size: usize,
    entries: Vec<Cost>,
    real_rows: usize,
    real_cols: usize,
}

impl CostMatrix {
    /// Zero-filled `size x size` matrix with every row/column marked real.
    pub fn zeroed(size: usize) -> Self {
        CostMatrix {
            size,
            entries: vec![Cost::zero(); size * size],
            real_rows: size,
            real_cols: size,
        }
    }

    pub fn from_rows(rows: Vec<Vec<Cost>>) -> Result<Self, LapError> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != size {
                return Err(LapError::NotSquare(i, row.len(), size));
            }
            entries.extend(row);
        }
        let m = CostMatrix {
            size,
            entries,
            real_rows: size,
            real_cols: size,
        };
        m.check_entries()?;
        Ok(m)
    }

    fn check_entries(&self) -> Result<(), LapError> {
        for i in 0..self.size {
            for j in 0..self.size {
                if self.get(i, j) < &Cost::zero() {
                    return Err(LapError::NegativeEntry(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> &Cost {
        &self.entries[row * self.size + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Cost) {
        self.entries[row * self.size + col] = value;
    }

    pub fn set_real(&mut self, rows: usize, cols: usize) {
        self.real_rows = rows;
        self.real_cols = cols;
    }

    pub fn real_rows(&self) -> usize {
        self.real_rows
    }

    pub fn real_cols(&self) -> usize {
        self.real_cols
    }

    /// True if the column is a padding column (deletion target).
    pub fn is_padding_col(&self, col: usize) -> bool {
        col >= self.real_cols
    }
}

/// A minimum-cost bijection between rows and columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub row_to_col: Vec<usize>,
    pub total: Cost,
}

impl Assignment {
    pub fn col_to_row(&self) -> Vec<usize> {
        let mut inv = vec![usize::MAX; self.row_to_col.len()];
        for (r, &c) in self.row_to_col.iter().enumerate() {
            inv[c] = r;
        }
        inv
    }
}

/// Solves the assignment problem exactly.
///
/// Deterministic: among equal-cost augmenting columns the lowest index
/// wins, so identical inputs always produce the identical permutation.
pub fn solve_lap(matrix: &CostMatrix) -> Result<Assignment, LapError> {
    matrix.check_entries()?;
    let n = matrix.size();
    if n == 0 {
        return Ok(Assignment {
            row_to_col: Vec::new(),
            total: Cost::zero(),
        });
    }

    // 1-based internals; index 0 is the virtual start column.
    let mut u = vec![Cost::zero(); n + 1];
    let mut v = vec![Cost::zero(); n + 1];
    let mut row_of_col = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        row_of_col[0] = i;
        let mut j0 = 0usize;
        let mut minv: Vec<Option<Cost>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of_col[j0];
            let mut delta: Option<Cost> = None;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = matrix.get(i0 - 1, j - 1) - u[i0] - v[j];
                if minv[j].map_or(true, |m| cur < m) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                if delta.map_or(true, |d| minv[j].unwrap() < d) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            let delta = delta.expect("square matrix always has an unused column");
            for j in 0..=n {
                if used[j] {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else if let Some(m) = minv[j].as_mut() {
                    *m -= delta;
                }
            }
            j0 = j1;
            if row_of_col[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_to_col = vec![usize::MAX; n];
    for j in 1..=n {
        row_to_col[row_of_col[j] - 1] = j - 1;
    }
    let total = row_to_col
        .iter()
        .enumerate()
        .map(|(r, &c)| *matrix.get(r, c))
        .sum();
    Ok(Assignment { row_to_col, total })
}
