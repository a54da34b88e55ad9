//! Minimum-cost perfect matching on square integer cost matrices.
//!
//! Hungarian method with row/column potentials (the shortest augmenting
//! path formulation), O(k³). Rows are inserted in ascending order and
//! columns scanned in ascending order, so the returned optimum is the same
//! on every run. Callers should only rely on the total being minimal; which
//! optimal assignment comes back is an implementation detail.

use crate::error::{Error, Result};

pub const MAX_COST: u64 = 1 << 62;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostMatrix {
    size: usize,
    data: Vec<u64>,
}

impl CostMatrix {
    pub fn new(rows: Vec<Vec<u64>>) -> Result<Self> {
        let size = rows.len();
        let mut data = Vec::with_capacity(size * size);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != size {
                return Err(Error::size("cost matrix row", row.len(), size));
            }
            if let Some(j) = row.iter().position(|&c| c > MAX_COST) {
                return Err(Error::InvalidCost { row: i, col: j });
            }
            data.extend(row);
        }
        Ok(CostMatrix { size, data })
    }

    pub fn from_fn(size: usize, mut cost: impl FnMut(usize, usize) -> u64) -> Result<Self> {
        let mut data = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                let c = cost(i, j);
                if c > MAX_COST {
                    return Err(Error::InvalidCost { row: i, col: j });
                }
                data.push(c);
            }
        }
        Ok(CostMatrix { size, data })
    }

    pub(crate) fn from_flat(size: usize, data: Vec<u64>) -> Result<Self> {
        debug_assert_eq!(data.len(), size * size);
        if let Some(k) = data.iter().position(|&c| c > MAX_COST) {
            return Err(Error::InvalidCost {
                row: k / size,
                col: k % size,
            });
        }
        Ok(CostMatrix { size, data })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.size..(i + 1) * self.size]
    }

    /// Sum of `cost[i][assignment[i]]`, or `Overflow` past 63 bits.
    pub fn total_of(&self, assignment: &[usize]) -> Result<u64> {
        let mut total: u64 = 0;
        for (i, &j) in assignment.iter().enumerate() {
            total = total.checked_add(self.get(i, j)).ok_or(Error::Overflow)?;
        }
        if total > i64::MAX as u64 {
            return Err(Error::Overflow);
        }
        Ok(total)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    /// Row `i` is matched to column `assignment[i]`.
    pub assignment: Vec<usize>,
    pub total: u64,
}

pub fn min_cost_perfect_matching(cost: &CostMatrix) -> Result<Assignment> {
    let k = cost.size;
    if k == 0 {
        return Ok(Assignment {
            assignment: Vec::new(),
            total: 0,
        });
    }
    const INF: i128 = i128::MAX / 4;
    // 1-based rows and columns; column 0 and row 0 are the virtual root
    let mut u = vec![0i128; k + 1];
    let mut v = vec![0i128; k + 1];
    let mut row_of_col = vec![0usize; k + 1];
    let mut way = vec![0usize; k + 1];
    let mut minv = vec![INF; k + 1];
    let mut used = vec![false; k + 1];

    for i in 1..=k {
        row_of_col[0] = i;
        let mut j0 = 0usize;
        minv.fill(INF);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = row_of_col[j0];
            let row = cost.row(i0 - 1);
            let ui0 = u[i0];
            let mut delta = INF;
            let mut j1 = 0usize;
            for j in 1..=k {
                if used[j] {
                    continue;
                }
                let cur = row[j - 1] as i128 - ui0 - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=k {
                if used[j] {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
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

    let mut assignment = vec![0usize; k];
    for j in 1..=k {
        assignment[row_of_col[j] - 1] = j - 1;
    }
    let total = cost.total_of(&assignment)?;
    Ok(Assignment { assignment, total })
}
