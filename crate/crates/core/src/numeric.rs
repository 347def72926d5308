//! Small numeric helpers shared across modules.

use num_bigint::BigUint;

/// Compensated summation.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// `log₂ n` for an arbitrarily large integer; `-∞` for zero.
pub fn log2_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 63 {
        let v = n.iter_u64_digits().next().unwrap_or(0);
        return (v as f64).log2();
    }
    let shift = bits - 63;
    let top: BigUint = n >> shift;
    let v = top.iter_u64_digits().next().unwrap_or(0);
    (v as f64).log2() + shift as f64
}

/// Least-squares coefficients for `y ≈ Σ_k c_k · column_k`.
///
/// Returns `None` when the normal equations are singular.
pub fn least_squares(columns: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let k = columns.len();
    let mut a = vec![vec![0.0; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = kahan_sum(columns[i].iter().zip(&columns[j]).map(|(x, z)| x * z));
        }
        a[i][k] = kahan_sum(columns[i].iter().zip(y).map(|(x, z)| x * z));
    }
    // Gaussian elimination with partial pivoting.
    for col in 0..k {
        let pivot = (col..k).max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        for row in 0..k {
            if row != col {
                let f = a[row][col] / a[col][col];
                let pivot_row = a[col].clone();
                for (x, p) in a[row][col..=k].iter_mut().zip(&pivot_row[col..=k]) {
                    *x -= f * p;
                }
            }
        }
    }
    Some((0..k).map(|i| a[i][k] / a[i][i]).collect())
}

/// Spectral radius and a right eigenvector normalised to sum 1.
///
/// Iterating `T + I` instead of `T` keeps periodic irreducible matrices convergent.
pub fn perron_pair(matrix: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let n = matrix.len();
    if n == 0 {
        return (0.0, Vec::new());
    }
    let mut v = vec![1.0 / n as f64; n];
    let mut lambda = 0.0;
    for _ in 0..200_000 {
        let mut w: Vec<f64> = (0..n)
            .map(|i| v[i] + kahan_sum((0..n).map(|j| matrix[i][j] * v[j])))
            .collect();
        let norm = kahan_sum(w.iter().copied());
        if norm == 0.0 {
            return (0.0, v);
        }
        for x in &mut w {
            *x /= norm;
        }
        let next = norm - 1.0;
        let delta = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = w;
        if (next - lambda).abs() < 1e-15 && delta < 1e-14 {
            return (next, v);
        }
        lambda = next;
    }
    (lambda, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log2_of_large_powers() {
        let n = BigUint::from(2u32).pow(1000);
        assert!((log2_biguint(&n) - 1000.0).abs() < 1e-9);
        let m = BigUint::from(13u32).pow(5);
        assert!((log2_biguint(&m) - 5.0 * 13f64.log2()).abs() < 1e-9);
        assert_eq!(log2_biguint(&BigUint::from(1u32)), 0.0);
    }

    #[test]
    fn least_squares_recovers_a_line() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v - 2.0).collect();
        let c = least_squares(&[x.clone(), vec![1.0; 10]], &y).unwrap();
        assert!((c[0] - 3.0).abs() < 1e-9 && (c[1] + 2.0).abs() < 1e-9);
    }

    #[test]
    fn perron_root_of_golden_mean() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let r = perron_pair(&[vec![1.0, 1.0], vec![1.0, 0.0]]).0;
        assert!((r - phi).abs() < 1e-12);
        // Periodic matrix: the shift by the identity keeps iteration convergent.
        assert!((perron_pair(&[vec![0.0, 1.0], vec![1.0, 0.0]]).0 - 1.0).abs() < 1e-12);
    }
}
