//! Dense symmetric kernels: semidefinite pivoted Cholesky, smallest
//! eigenvalue via Householder tridiagonalization and Sturm bisection, and a
//! partial-pivoting determinant. Matrices are `n x n`, row-major.

use crate::scalar::Scalar;

/// Semidefinite test by complete-pivoting Cholesky.
///
/// Factorization stops once every remaining pivot is at most `threshold`;
/// the matrix is then PSD iff the remaining Schur complement is within
/// `threshold` of zero entrywise (a PSD matrix with tiny diagonal has tiny
/// off-diagonal entries, since `|a_ij| <= sqrt(a_ii a_jj)`).
pub(crate) fn pivoted_cholesky_psd<T: Scalar>(a: &[T], n: usize, threshold: T) -> bool {
    let mut s = a.to_vec();
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let (pos, &p) = active
            .iter()
            .enumerate()
            .max_by(|x, y| s[x.1 * n + x.1].partial_cmp(&s[y.1 * n + y.1]).unwrap())
            .unwrap();
        let pivot = s[p * n + p];
        if !(pivot > threshold) {
            return active.iter().all(|&i| {
                s[i * n + i] >= -threshold
                    && active
                        .iter()
                        .all(|&j| i == j || s[i * n + j].abs() <= threshold)
            });
        }
        active.swap_remove(pos);
        let col: Vec<T> = active.iter().map(|&i| s[i * n + p]).collect();
        for (x, &i) in active.iter().enumerate() {
            for (y, &j) in active.iter().enumerate() {
                s[i * n + j] -= col[x] * col[y] / pivot;
            }
        }
    }
    true
}

/// Reduces a symmetric matrix to tridiagonal form `(diagonal, off-diagonal)`
/// with Householder reflections `H = I - 2 v v^T`.
pub(crate) fn tridiagonalize<T: Scalar>(a: &[T], n: usize) -> (Vec<T>, Vec<T>) {
    let mut m = a.to_vec();
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n.saturating_sub(1) {
        let x: Vec<T> = (k + 1..n).map(|i| m[i * n + k]).collect();
        let norm = x.iter().fold(T::zero(), |acc, &v| acc.hypot(v));
        if norm == T::zero() || x.len() == 1 {
            off.push(x[0]);
            continue;
        }
        let alpha = if x[0] > T::zero() { -norm } else { norm };
        let mut v = x;
        v[0] -= alpha;
        let vn = v.iter().fold(T::zero(), |acc, &e| acc.hypot(e));
        v.iter_mut().for_each(|e| *e /= vn);
        let sub = k + 1;
        let len = n - sub;
        // p = A22 v, q = p - (v.p) v, A22 <- A22 - 2 v q^T - 2 q v^T.
        let p: Vec<T> = (0..len)
            .map(|r| (0..len).fold(T::zero(), |acc, c| acc + m[(sub + r) * n + sub + c] * v[c]))
            .collect();
        let vp = (0..len).fold(T::zero(), |acc, r| acc + v[r] * p[r]);
        let q: Vec<T> = (0..len).map(|r| p[r] - vp * v[r]).collect();
        let two = T::lit(2.0);
        for r in 0..len {
            for c in 0..len {
                m[(sub + r) * n + sub + c] -= two * (v[r] * q[c] + q[r] * v[c]);
            }
        }
        for i in sub..n {
            m[i * n + k] = T::zero();
            m[k * n + i] = T::zero();
        }
        m[sub * n + k] = alpha;
        m[k * n + sub] = alpha;
        off.push(alpha);
    }
    let diag = (0..n).map(|i| m[i * n + i]).collect();
    (diag, off)
}

/// Number of eigenvalues of the tridiagonal `(d, e)` strictly below `x`.
pub(crate) fn sturm_count<T: Scalar>(d: &[T], e: &[T], x: T) -> usize {
    let tiny = T::min_positive_value().sqrt();
    let mut count = 0;
    let mut q = T::one();
    for i in 0..d.len() {
        let coupling = if i == 0 { T::zero() } else { e[i - 1] * e[i - 1] / q };
        q = d[i] - x - coupling;
        if q == T::zero() {
            q = -tiny;
        }
        if q < T::zero() {
            count += 1;
        }
    }
    count
}

/// Smallest eigenvalue of a symmetric matrix, to roughly `eps * ||A||`.
pub(crate) fn min_eigenvalue<T: Scalar>(a: &[T], n: usize) -> T {
    if n == 0 {
        return T::zero();
    }
    let (d, e) = tridiagonalize(a, n);
    let radius = |i: usize| {
        let left = if i > 0 { e[i - 1].abs() } else { T::zero() };
        let right = if i + 1 < n { e[i].abs() } else { T::zero() };
        left + right
    };
    let mut lo = (0..n).fold(T::infinity(), |acc, i| acc.min(d[i] - radius(i)));
    let mut hi = (0..n).fold(T::neg_infinity(), |acc, i| acc.max(d[i] + radius(i)));
    let pad = T::epsilon() * T::one().max(lo.abs()).max(hi.abs());
    lo -= pad;
    hi += pad;
    for _ in 0..256 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(&d, &e, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo + hi) / T::lit(2.0)
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn determinant<T: Scalar>(a: &[T], n: usize) -> T {
    let mut m = a.to_vec();
    let mut det = T::one();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| m[x * n + k].abs().partial_cmp(&m[y * n + k].abs()).unwrap())
            .unwrap();
        if m[p * n + k] == T::zero() {
            return T::zero();
        }
        if p != k {
            for c in 0..n {
                m.swap(k * n + c, p * n + c);
            }
            det = -det;
        }
        let piv = m[k * n + k];
        det *= piv;
        for r in k + 1..n {
            let f = m[r * n + k] / piv;
            for c in k..n {
                let v = m[k * n + c];
                m[r * n + c] -= f * v;
            }
        }
    }
    det
}
