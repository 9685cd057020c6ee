// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense phase-one simplex for `A x = b, x >= 0` feasibility.

/// Returns a feasible `x` if one exists, with feasibility measured by the
/// phase-one objective (sum of artificial variables) against `threshold`.
pub(crate) fn feasible_point(a: &[Vec<f64>], b: &[f64], threshold: f64) -> Option<Vec<f64>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    // tableau columns: n structural, m artificial, 1 rhs
    let width = n + m + 1;
    let mut t: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
            let mut row = vec![0.0; width];
            for j in 0..n {
                row[j] = sign * a[i][j];
            }
            row[n + i] = 1.0;
            row[width - 1] = sign * b[i];
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();

    // reduced costs of phase one: minimize sum of artificials
    let mut cost = vec![0.0; width];
    for row in &t {
        for j in 0..width {
            if j < n || j == width - 1 {
                cost[j] -= row[j];
            }
        }
    }

    const PIVOT_EPS: f64 = 1e-12;
    for _ in 0..50_000 {
        // Bland: lowest-index entering column with negative reduced cost
        let Some(enter) = (0..n + m).find(|&j| cost[j] < -PIVOT_EPS) else {
            break;
        };
        let leave = (0..m)
            .filter(|&i| t[i][enter] > PIVOT_EPS)
            .min_by(|&i, &k| {
                let ri = t[i][width - 1] / t[i][enter];
                let rk = t[k][width - 1] / t[k][enter];
                ri.partial_cmp(&rk).unwrap().then(basis[i].cmp(&basis[k]))
            });
        let Some(leave) = leave else {
            // unbounded direction cannot occur in phase one
            break;
        };
        let p = t[leave][enter];
        for v in t[leave].iter_mut() {
            *v /= p;
        }
        let pivot_row = t[leave].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != leave && row[enter] != 0.0 {
                let f = row[enter];
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        let f = cost[enter];
        for (v, pv) in cost.iter_mut().zip(&pivot_row) {
            *v -= f * pv;
        }
        basis[leave] = enter;
    }

    let infeasibility = -cost[width - 1];
    if infeasibility > threshold {
        return None;
    }
    let mut x = vec![0.0; n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[i][width - 1];
        }
    }
    Some(x)
}
