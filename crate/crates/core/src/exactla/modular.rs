use super::Matrix;

/// The Mersenne prime 2^61 - 1.
pub const MODULUS: u64 = (1 << 61) - 1;

#[inline]
fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, b);
        }
        b = mul(b, b);
        e >>= 1;
    }
    acc
}

#[inline]
fn reduce(x: i64) -> u64 {
    x.rem_euclid(MODULUS as i64) as u64
}

/// Rank of an integer matrix over GF(2^61 - 1).
///
/// Never exceeds the rank over the rationals, so reaching a target rank here
/// certifies that rank exactly.
pub fn rank_mod_p(m: &Matrix<i64>) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<u64> = m.data.iter().map(|&x| reduce(x)).collect();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = pow(a[r * cols + c], MODULUS - 2);
        for i in r + 1..rows {
            let lead = a[i * cols + c];
            if lead == 0 {
                continue;
            }
            let f = mul(lead, inv);
            for j in c..cols {
                let s = mul(f, a[r * cols + j]);
                let t = a[i * cols + j];
                a[i * cols + j] = if t >= s { t - s } else { t + MODULUS - s };
            }
        }
        r += 1;
    }
    r
}
