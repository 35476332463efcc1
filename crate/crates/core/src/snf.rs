//! Integer linear systems `A x = b` by unimodular diagonalisation.
//!
//! Row operations are applied to `b` as they are made, column operations are
//! accumulated in `V`, so `U A V = D` with `D` diagonal. A solution exists iff
//! every `(U b)_i` is divisible by `d_i` and vanishes past the rank; the
//! returned particular solution sets the free coordinates of `V⁻¹ x` to zero.

use crate::error::{Error, Result};

fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow)
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

/// `row_i ← row_i − q·row_p` on a dense row-major matrix and the right-hand side.
fn row_sub(a: &mut [Vec<i128>], b: &mut [i128], i: usize, p: usize, q: i128, from: usize) -> Result<()> {
    if q == 0 {
        return Ok(());
    }
    let (src, dst) = if i < p {
        let (lo, hi) = a.split_at_mut(p);
        (&hi[0], &mut lo[i])
    } else {
        let (lo, hi) = a.split_at_mut(i);
        (&lo[p], &mut hi[0])
    };
    for c in from..dst.len() {
        if src[c] != 0 {
            dst[c] = add(dst[c], -mul(q, src[c])?)?;
        }
    }
    b[i] = add(b[i], -mul(q, b[p])?)?;
    Ok(())
}

/// Solves `A x = b` over the integers. `Ok(None)` means no integer solution.
pub fn solve_integer(a: &[Vec<i64>], b: &[i64], cols: usize) -> Result<Option<Vec<i64>>> {
    assert_eq!(a.len(), b.len());
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut rhs: Vec<i128> = b.iter().map(|&x| x as i128).collect();
    let rows = m.len();
    // V starts as the identity and records column operations
    let mut v: Vec<Vec<i128>> = (0..cols).map(|i| (0..cols).map(|j| i128::from(i == j)).collect()).collect();
    let mut rank = 0;
    while rank < rows.min(cols) {
        // pivot: smallest nonzero magnitude in the trailing block
        let mut best: Option<(usize, usize, i128)> = None;
        for (i, row) in m.iter().enumerate().skip(rank) {
            for (j, &x) in row.iter().enumerate().skip(rank) {
                if x != 0 && best.is_none_or(|(_, _, y)| x.abs() < y) {
                    best = Some((i, j, x.abs()));
                    if x.abs() == 1 {
                        break;
                    }
                }
            }
            if best.is_some_and(|(_, _, y)| y == 1) {
                break;
            }
        }
        let Some((pi, pj, _)) = best else { break };
        m.swap(rank, pi);
        rhs.swap(rank, pi);
        if pj != rank {
            for row in m.iter_mut() {
                row.swap(rank, pj);
            }
            for row in v.iter_mut() {
                row.swap(rank, pj);
            }
        }
        loop {
            let p = m[rank][rank];
            let mut clean = true;
            for i in rank + 1..rows {
                if m[i][rank] != 0 {
                    let q = m[i][rank].div_euclid(p);
                    row_sub(&mut m, &mut rhs, i, rank, q, rank)?;
                    if m[i][rank] != 0 {
                        clean = false;
                    }
                }
            }
            for j in rank + 1..cols {
                if m[rank][j] != 0 {
                    let q = m[rank][j].div_euclid(p);
                    for row in m.iter_mut() {
                        if row[rank] != 0 {
                            row[j] = add(row[j], -mul(q, row[rank])?)?;
                        }
                    }
                    for row in v.iter_mut() {
                        if row[rank] != 0 {
                            row[j] = add(row[j], -mul(q, row[rank])?)?;
                        }
                    }
                    if m[rank][j] != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
            // move the smallest remaining entry of the pivot row/column onto the diagonal
            let mut best = (rank, rank, m[rank][rank].abs());
            for i in rank + 1..rows {
                if m[i][rank] != 0 && m[i][rank].abs() < best.2 {
                    best = (i, rank, m[i][rank].abs());
                }
            }
            for j in rank + 1..cols {
                if m[rank][j] != 0 && m[rank][j].abs() < best.2 {
                    best = (rank, j, m[rank][j].abs());
                }
            }
            if best.0 != rank {
                m.swap(rank, best.0);
                rhs.swap(rank, best.0);
            }
            if best.1 != rank {
                for row in m.iter_mut() {
                    row.swap(rank, best.1);
                }
                for row in v.iter_mut() {
                    row.swap(rank, best.1);
                }
            }
        }
        rank += 1;
    }
    let mut y = vec![0i128; cols];
    for i in 0..rows {
        if i < rank {
            let d = m[i][i];
            if rhs[i] % d != 0 {
                return Ok(None);
            }
            y[i] = rhs[i] / d;
        } else if rhs[i] != 0 {
            return Ok(None);
        }
    }
    let mut x = vec![0i64; cols];
    for (i, xi) in x.iter_mut().enumerate() {
        let mut acc = 0i128;
        for (j, &yj) in y.iter().enumerate() {
            if yj != 0 && v[i][j] != 0 {
                acc = add(acc, mul(v[i][j], yj)?)?;
            }
        }
        *xi = i64::try_from(acc).map_err(|_| Error::Overflow)?;
    }
    Ok(Some(x))
}
