use num::{BigInt, One, Zero};

use super::{LinAlgError, Matrix};

/// Runs fraction-free elimination in place. Returns the pivot count and the
/// parity of row swaps. Every intermediate entry is a minor of the input, so
/// each division by the previous pivot is exact.
fn eliminate(m: &mut Matrix<BigInt>) -> (usize, bool) {
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut odd_swaps = false;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.data.swap(p * cols + j, r * cols + j);
            }
            odd_swaps = !odd_swaps;
        }
        let pivot = m[(r, c)].clone();
        for i in r + 1..rows {
            let lead = std::mem::take(&mut m[(i, c)]);
            for j in c + 1..cols {
                let mut v = &pivot * &m[(i, j)];
                if !lead.is_zero() {
                    v -= &lead * &m[(r, j)];
                }
                m[(i, j)] = v / &prev;
            }
        }
        prev = pivot;
        r += 1;
    }
    (r, odd_swaps)
}

/// Exact rank of an integer matrix.
pub fn rank_int(mut m: Matrix<BigInt>) -> usize {
    if m.rows > m.cols {
        m = m.transpose();
    }
    eliminate(&mut m).0
}

/// Exact determinant of a square integer matrix.
pub fn determinant_int(mut m: Matrix<BigInt>) -> Result<BigInt, LinAlgError> {
    if m.rows != m.cols {
        return Err(LinAlgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let (r, odd) = eliminate(&mut m);
    if r < n {
        return Ok(BigInt::zero());
    }
    let det = m[(n - 1, n - 1)].clone();
    Ok(if odd { -det } else { det })
}
