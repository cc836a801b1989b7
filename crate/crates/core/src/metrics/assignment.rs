//! Optimal assignment (Hungarian algorithm with potentials, O(n^3)).
//!
//! Used by CEAF_e to find the one-to-one cluster alignment maximizing the
//! summed entity similarity. Rectangular matrices are padded with zeros;
//! real weights are supported directly.

/// Maximum-weight one-to-one matching of rows to columns.
///
/// Rows and columns may stay unmatched, so entries that only lose weight
/// (negative) are never forced into the solution. Returns the total weight
/// and, per row, the assigned column.
pub fn max_assignment(weights: &[Vec<f64>]) -> (f64, Vec<Option<usize>>) {
    let rows = weights.len();
    if rows == 0 {
        return (0.0, Vec::new());
    }
    let cols = weights[0].len();
    debug_assert!(weights.iter().all(|r| r.len() == cols));
    if cols == 0 {
        return (0.0, vec![None; rows]);
    }
    // Padding to (rows + cols) gives every row and column a zero-cost dummy
    // partner, turning the perfect matching into a free one.
    let n = rows + cols;

    // Minimization over negated weights.
    let cost = |i: usize, j: usize| -> f64 {
        if i < rows && j < cols {
            -weights[i][j]
        } else {
            0.0
        }
    };

    // Potentials method, 1-indexed. p[j] = row matched to column j.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_to_col = vec![None; rows];
    let mut total = 0.0;
    for j in 1..=n {
        let i = p[j];
        if i >= 1 && i - 1 < rows && j - 1 < cols && weights[i - 1][j - 1] != 0.0 {
            row_to_col[i - 1] = Some(j - 1);
            total += weights[i - 1][j - 1];
        }
    }
    (total, row_to_col)
}
