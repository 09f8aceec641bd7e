use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-style Hermite form of an integer matrix: nonzero rows only, positive
/// pivots, entries above each pivot reduced modulo it.
pub fn hermite_rows(rows: &[Vec<i64>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&a| BigInt::from(a)).collect()).collect();
    let mut top = 0;
    for c in 0..cols {
        // Euclid down the column until one nonzero entry remains at or below `top`
        loop {
            let mut best: Option<usize> = None;
            for r in top..m.len() {
                if !m[r][c].is_zero() && best.is_none_or(|b| m[r][c].abs() < m[b][c].abs()) {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            m.swap(top, b);
            let mut done = true;
            for r in top + 1..m.len() {
                if m[r][c].is_zero() {
                    continue;
                }
                let q = m[r][c].div_floor(&m[top][c]);
                for j in c..cols {
                    let t = &q * &m[top][j];
                    m[r][j] -= t;
                }
                if !m[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if top < m.len() && !m[top][c].is_zero() {
            if m[top][c].is_negative() {
                for j in c..cols {
                    m[top][j] = -&m[top][j];
                }
            }
            for r in 0..top {
                let q = m[r][c].div_floor(&m[top][c]);
                for j in c..cols {
                    let t = &q * &m[top][j];
                    m[r][j] -= t;
                }
            }
            top += 1;
        }
    }
    m.truncate(top);
    m
}

/// Whether the rows generate all of `ℤ^cols`.
pub fn spans_full_lattice(rows: &[Vec<i64>], cols: usize) -> bool {
    let h = hermite_rows(rows, cols);
    h.len() == cols && (0..cols).all(|i| h[i][i].is_one())
}
