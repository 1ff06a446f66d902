//! Rectangular linear assignment with forbidden pairs.
//!
//! [`solve`] returns a matching that first maximizes the number of allowed
//! pairs and then minimizes their total cost. Internally the problem is
//! padded to a square matrix in which forbidden and dummy cells share one
//! large cost, so that dropping an allowed pair always costs more than any
//! achievable saving, and solved with the O(n^3) shortest augmenting path
//! form of the Hungarian method.

/// Optimal pairs `(row, col)`, sorted by row.
pub fn solve(costs: &[Vec<Option<f64>>]) -> Vec<(usize, usize)> {
    let rows = costs.len();
    let cols = costs.first().map_or(0, Vec::len);
    debug_assert!(costs.iter().all(|r| r.len() == cols), "ragged cost matrix");
    if rows == 0 || cols == 0 {
        return Vec::new();
    }

    let mut max_cost: f64 = 0.0;
    let mut any_allowed = false;
    for c in costs.iter().flatten().flatten() {
        debug_assert!(c.is_finite() && *c >= 0.0, "costs must be finite and non-negative");
        max_cost = max_cost.max(*c);
        any_allowed = true;
    }
    if !any_allowed {
        return Vec::new();
    }

    let n = rows.max(cols);
    let blocked = 1.0 + n as f64 * max_cost.max(1.0);
    let cell = |r: usize, c: usize| -> f64 {
        if r < rows && c < cols {
            costs[r][c].unwrap_or(blocked)
        } else {
            blocked
        }
    };

    let col_of_row = hungarian(n, cell);
    let mut pairs: Vec<(usize, usize)> = col_of_row
        .into_iter()
        .enumerate()
        .filter(|&(r, c)| r < rows && c < cols && costs[r][c].is_some())
        .collect();
    pairs.sort_unstable();
    pairs
}

/// Total cost of the allowed pairs in `pairs`, summed in row order.
pub fn total_cost(costs: &[Vec<Option<f64>>], pairs: &[(usize, usize)]) -> f64 {
    pairs.iter().filter_map(|&(r, c)| costs[r][c]).sum()
}

/// Square Hungarian method with row/column potentials. Returns the column
/// assigned to each row.
fn hungarian(n: usize, cost: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    // 1-based arrays; index 0 is the virtual root column
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut row_of_col = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for row in 1..=n {
        row_of_col[0] = row;
        let mut col0 = 0usize;
        let mut min_slack = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let r0 = row_of_col[col0];
            let mut delta = f64::INFINITY;
            let mut col1 = 0usize;
            for col in 1..=n {
                if used[col] {
                    continue;
                }
                let slack = cost(r0 - 1, col - 1) - u[r0] - v[col];
                if slack < min_slack[col] {
                    min_slack[col] = slack;
                    way[col] = col0;
                }
                if min_slack[col] < delta {
                    delta = min_slack[col];
                    col1 = col;
                }
            }
            for col in 0..=n {
                if used[col] {
                    u[row_of_col[col]] += delta;
                    v[col] -= delta;
                } else {
                    min_slack[col] -= delta;
                }
            }
            col0 = col1;
            if row_of_col[col0] == 0 {
                break;
            }
        }
        loop {
            let col1 = way[col0];
            row_of_col[col0] = row_of_col[col1];
            col0 = col1;
            if col0 == 0 {
                break;
            }
        }
    }

    let mut col_of_row = vec![0usize; n];
    for col in 1..=n {
        col_of_row[row_of_col[col] - 1] = col - 1;
    }
    col_of_row
}
