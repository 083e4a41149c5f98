//! Fixed-size dense helpers for the 3x3 normal equations.

pub type Mat3 = [[f64; 3]; 3];
pub type Vec3 = [f64; 3];

/// Eigenvalues below this fraction of the largest one are treated as zero.
pub const PINV_RELATIVE_TOLERANCE: f64 = 1e-10;

pub fn mat_vec(m: &Mat3, v: &Vec3) -> Vec3 {
    let mut out = [0.0; 3];
    for (o, row) in out.iter_mut().zip(m) {
        *o = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
    }
    out
}

/// Eigen-decomposition of a symmetric 3x3 matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors stored as columns.
pub fn symmetric_eigen(m: &Mat3) -> (Vec3, Mat3) {
    let mut a = *m;
    let mut v: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _sweep in 0..64 {
        let off = a[0][1].abs() + a[0][2].abs() + a[1][2].abs();
        let scale = a[0][0].abs() + a[1][1].abs() + a[2][2].abs();
        if off == 0.0 || off <= f64::EPSILON * 1e-3 * scale {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            if a[p][q] == 0.0 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            // a <- J^T a J with the rotation acting on rows/cols p, q.
            for k in 0..3 {
                let akp = a[k][p];
                let akq = a[k][q];
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a[p][k];
                let aqk = a[q][k];
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            for row in v.iter_mut() {
                let vp = row[p];
                let vq = row[q];
                row[p] = c * vp - s * vq;
                row[q] = s * vp + c * vq;
            }
        }
    }
    ([a[0][0], a[1][1], a[2][2]], v)
}

/// Moore-Penrose pseudo-inverse of a symmetric positive semi-definite matrix.
///
/// Also reports the numerical rank after thresholding.
pub fn symmetric_pinv(m: &Mat3) -> (Mat3, usize) {
    let (vals, vecs) = symmetric_eigen(m);
    let max = vals.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let cutoff = max * PINV_RELATIVE_TOLERANCE;
    let mut out = [[0.0; 3]; 3];
    let mut rank = 0;
    for (k, &lambda) in vals.iter().enumerate() {
        if max == 0.0 || lambda.abs() <= cutoff {
            continue;
        }
        rank += 1;
        let inv = 1.0 / lambda;
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] += vecs[i][k] * inv * vecs[j][k];
            }
        }
    }
    (out, rank)
}
