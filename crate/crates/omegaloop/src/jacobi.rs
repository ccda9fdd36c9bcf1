//! Cyclic Jacobi eigensolver for 3x3 real symmetric matrices.
//!
//! Jacobi rotation is guaranteed to converge for symmetric input and needs
//! no external linear algebra. Each sweep zeroes the three off-diagonal
//! elements in turn; a handful of sweeps reaches machine precision for 3x3.

use crate::error::{Error, Result};

pub(crate) struct EigenDecomposition {
    pub values: [f64; 3],
    /// `vectors[k]` is the unit eigenvector belonging to `values[k]`.
    pub vectors: [[f64; 3]; 3],
}

pub(crate) fn symmetric_eigen_3x3(m: [[f64; 3]; 3]) -> Result<EigenDecomposition> {
    let mut a = m;
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let frobenius = a
        .iter()
        .flatten()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    if !frobenius.is_finite() {
        return Err(Error::domain("eigensolver input must be finite"));
    }
    let threshold = 1e-14 * frobenius.max(f64::MIN_POSITIVE);

    let decomposition = |a: &[[f64; 3]; 3], v: &[[f64; 3]; 3]| EigenDecomposition {
        values: [a[0][0], a[1][1], a[2][2]],
        vectors: [
            [v[0][0], v[1][0], v[2][0]],
            [v[0][1], v[1][1], v[2][1]],
            [v[0][2], v[1][2], v[2][2]],
        ],
    };
    let off_norm = |a: &[[f64; 3]; 3]| {
        (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]).sqrt()
    };

    for _ in 0..50 {
        if off_norm(&a) <= threshold {
            return Ok(decomposition(&a, &v));
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            if a[p][q].abs() <= threshold / 10.0 {
                continue;
            }
            // classic stable rotation: tan(2 phi) = 2 a_pq / (a_qq - a_pp)
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = if theta.abs() > 1e150 {
                1.0 / (2.0 * theta)
            } else {
                theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
            };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;

            // A <- G^T A G with G the (p, q) Givens rotation
            let mut g = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
            g[p][p] = c;
            g[q][q] = c;
            g[p][q] = s;
            g[q][p] = -s;
            a = mat_mul(&transpose(&g), &mat_mul(&a, &g));
            // symmetrize away rounding drift
            for i in 0..3 {
                for j in i + 1..3 {
                    let avg = 0.5 * (a[i][j] + a[j][i]);
                    a[i][j] = avg;
                    a[j][i] = avg;
                }
            }
            a[p][q] = 0.0;
            a[q][p] = 0.0;
            v = mat_mul(&v, &g);
        }
    }
    if off_norm(&a) <= threshold {
        return Ok(decomposition(&a, &v));
    }
    Err(Error::domain(
        "eigensolver failed to converge; input is likely not finite",
    ))
}

fn mat_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for (k, bk) in b.iter().enumerate() {
                out[i][j] += a[i][k] * bk[j];
            }
        }
    }
    out
}

fn transpose(a: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}
