use super::Matrix;

/// Numerical rank by Gaussian elimination with complete pivoting. A pivot
/// counts when its magnitude exceeds `tolerance` times the largest pivot.
pub fn rank_f64(m: &Matrix<f64>, tolerance: f64) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut first_pivot: Option<f64> = None;
    let mut r = 0;
    while r < rows.min(cols) {
        let mut best = (r, r, 0.0f64);
        for i in r..rows {
            for j in r..cols {
                let v = a[(i, j)].abs();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        let (pi, pj, mag) = best;
        let scale = *first_pivot.get_or_insert(mag);
        if mag == 0.0 || mag <= tolerance * scale {
            break;
        }
        if pi != r {
            for j in 0..cols {
                a.data.swap(pi * cols + j, r * cols + j);
            }
        }
        if pj != r {
            for i in 0..rows {
                a.data.swap(i * cols + pj, i * cols + r);
            }
        }
        let pivot = a[(r, r)];
        for i in r + 1..rows {
            let f = a[(i, r)] / pivot;
            if f == 0.0 {
                continue;
            }
            for j in r..cols {
                let v = a[(i, j)] - f * a[(r, j)];
                a[(i, j)] = v;
            }
        }
        r += 1;
    }
    r
}
