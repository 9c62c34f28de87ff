//! Small dense linear-algebra helpers. Problem sizes in this crate are tiny,
//! so plain `Vec`-backed matrices with Gauss-Jordan inversion are enough.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Multiply a row vector by a matrix: `v^T M`.
pub fn vec_mat(v: &[f64], m: &[Vec<f64>]) -> Vec<f64> {
    let cols = m.first().map_or(0, Vec::len);
    let mut out = vec![0.0; cols];
    for (vi, row) in v.iter().zip(m) {
        if *vi == 0.0 {
            continue;
        }
        for (o, a) in out.iter_mut().zip(row) {
            *o += vi * a;
        }
    }
    out
}

/// Invert a square matrix by Gauss-Jordan elimination with partial pivoting.
/// Returns `None` when the matrix is numerically singular.
pub fn invert(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            debug_assert_eq!(row.len(), n);
            let mut ext = row.clone();
            ext.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            ext
        })
        .collect();

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[pivot_row][col].abs() < 1e-11 {
            return None;
        }
        a.swap(col, pivot_row);
        let pivot = a[col][col];
        for x in a[col].iter_mut() {
            *x /= pivot;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = a[row][col];
            if factor == 0.0 {
                continue;
            }
            let (upper, lower) = a.split_at_mut(col.max(row));
            let (src, dst) = if row < col {
                (&lower[0], &mut upper[row])
            } else {
                (&upper[col], &mut lower[0])
            };
            for (d, s) in dst.iter_mut().zip(src.iter()) {
                *d -= factor * s;
            }
        }
    }

    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}
