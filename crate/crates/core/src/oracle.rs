//! Brute-force cross-checks, written independently of the primary code paths.
//!
//! Singular values come from Givens reduction plus implicit-shift QR on a
//! bidiagonal (the primary path uses Sturm bisection), eigenvalues from
//! cyclic Jacobi rotations (the primary path uses pivoted Cholesky and
//! tridiagonal bisection), and lattice moments from the reverse staircase.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::lattice2d::{LatticePoint, WeightDiagram2D};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::measures::{measure_moment, Atom1D, AtomicMeasure1D, Measure1D};
use crate::positivity::{is_psd, MomentMatrix};
use crate::scalar::Scalar;
use crate::weights1d::{gamma, UnilateralShift};

/// `(W - lambda)` restricted to `span{e_0, ..., e_{N-1}}`: an `(N+1) x N`
/// lower bidiagonal matrix with `-lambda` on the diagonal and `alpha_n` below.
#[derive(Clone, Debug, PartialEq)]
pub struct RectangularSection<T> {
    pub lambda: Complex<T>,
    pub weights: Vec<T>,
}

impl<T: Scalar> RectangularSection<T> {
    pub fn new(shift: &UnilateralShift<T>, lambda: Complex<T>, n: usize) -> Result<Self> {
        if n < 2 {
            return invalid("section needs N >= 2");
        }
        Ok(Self {
            lambda,
            weights: shift.weights.weights(n),
        })
    }

    /// Number of columns `N`.
    pub fn cols(&self) -> usize {
        self.weights.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex<T> {
        if row == col {
            -self.lambda
        } else if row == col + 1 {
            Complex::new(self.weights[col], T::zero())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    }
}

/// Givens rotation `(c, s, r)` with `c f + s g = r`, `-s f + c g = 0`.
fn rotation<T: Scalar>(f: T, g: T) -> (T, T, T) {
    if g == T::zero() {
        return (T::one(), T::zero(), f);
    }
    let r = f.hypot(g);
    (f / r, g / r, r)
}

/// Reduces the section to an `N x N` upper bidiagonal `(d, e)` with the same
/// singular values.
///
/// Diagonal unitary scalings strip the phases, so the moduli `|lambda|` and
/// `alpha_n` suffice. A left rotation on rows `n, n+1` then clears each
/// subdiagonal entry and pushes `|lambda|` one column to the right.
pub fn upper_bidiagonal<T: Scalar>(section: &RectangularSection<T>) -> (Vec<T>, Vec<T>) {
    let n = section.cols();
    let lam = section.lambda.norm();
    let mut d = Vec::with_capacity(n);
    let mut e = Vec::with_capacity(n.saturating_sub(1));
    let mut carry = lam;
    for (i, &a) in section.weights.iter().enumerate() {
        let (c, s, r) = rotation(carry, a);
        d.push(r);
        if i + 1 < n {
            e.push(s * lam);
            carry = c * lam;
        }
    }
    (d, e)
}

fn sign<T: Scalar>(a: T, b: T) -> T {
    if b >= T::zero() {
        a.abs()
    } else {
        -a.abs()
    }
}

/// All singular values of an upper bidiagonal matrix by implicit-shift QR
/// (Golub-Reinsch, values only).
pub fn bidiagonal_singular_values<T: Scalar>(d: &[T], e: &[T]) -> Result<Vec<T>> {
    let n = d.len();
    let mut w = d.to_vec();
    // rv1[i] couples w[i-1] and w[i]; rv1[0] stays zero.
    let mut rv1 = vec![T::zero(); n];
    rv1[1..n].copy_from_slice(&e[..n.saturating_sub(1)]);
    let anorm = (0..n).fold(T::zero(), |acc, i| acc.max(w[i].abs() + rv1[i].abs()));
    let negligible = |x: T| x.abs() <= T::epsilon() * anorm;
    for k in (0..n).rev() {
        let mut its = 0;
        loop {
            its += 1;
            if its > 200 {
                return Err(Error::NonConvergence { iterations: its });
            }
            let mut l = k;
            let mut cancel = true;
            loop {
                if negligible(rv1[l]) {
                    cancel = false;
                    break;
                }
                if negligible(w[l - 1]) {
                    break;
                }
                l -= 1;
            }
            if cancel {
                // w[l-1] is negligible: chase rv1[l] out of the block.
                let (mut c, mut s) = (T::zero(), T::one());
                for i in l..=k {
                    let f = s * rv1[i];
                    rv1[i] = c * rv1[i];
                    if negligible(f) {
                        break;
                    }
                    let g = w[i];
                    let h = f.hypot(g);
                    w[i] = h;
                    c = g / h;
                    s = -f / h;
                }
            }
            let z = w[k];
            if l == k {
                w[k] = z.abs();
                break;
            }
            // Shift from the trailing 2x2 block.
            let mut x = w[l];
            let nm = k - 1;
            let mut y = w[nm];
            let mut g = rv1[nm];
            let mut h = rv1[k];
            let two = T::lit(2.0);
            let mut f = ((y - z) * (y + z) + (g - h) * (g + h)) / (two * h * y);
            g = f.hypot(T::one());
            f = ((x - z) * (x + z) + h * ((y / (f + sign(g, f))) - h)) / x;
            let (mut c, mut s) = (T::one(), T::one());
            for j in l..=nm {
                let i = j + 1;
                g = rv1[i];
                y = w[i];
                h = s * g;
                g = c * g;
                let mut zz = f.hypot(h);
                rv1[j] = zz;
                c = f / zz;
                s = h / zz;
                f = x * c + g * s;
                g = g * c - x * s;
                h = y * s;
                y = y * c;
                zz = f.hypot(h);
                w[j] = zz;
                if zz != T::zero() {
                    c = f / zz;
                    s = h / zz;
                }
                f = c * g + s * y;
                x = c * y - s * g;
            }
            rv1[l] = T::zero();
            rv1[k] = f;
            w[k] = x;
        }
    }
    Ok(w)
}

/// Smallest singular value of a rectangular section.
pub fn min_singular<T: Scalar>(section: &RectangularSection<T>) -> Result<T> {
    let (d, e) = upper_bidiagonal(section);
    let sv = bidiagonal_singular_values(&d, &e)?;
    Ok(sv.into_iter().fold(T::infinity(), T::min))
}

/// `gamma_m` along the reverse staircase: up column 0, then along row `m2`.
pub fn gamma_bruteforce<T: Scalar>(d: &WeightDiagram2D<T>, m: LatticePoint) -> T {
    let mut g = T::one();
    for j in 0..m.m2 {
        let b = d.beta(0, j);
        g *= b * b;
    }
    for i in 0..m.m1 {
        let a = d.alpha(i, m.m2);
        g *= a * a;
    }
    g
}

pub const JACOBI_SWEEPS: usize = 100;

/// Every eigenvalue of a symmetric matrix, ascending, by cyclic Jacobi
/// rotations; converged once the off-diagonal Frobenius norm drops below
/// `1e-12 * max(1, ||A||_F)`.
pub fn jacobi_eigenvalues<T: Scalar>(m: &MomentMatrix<T>) -> Result<Vec<T>> {
    let n = m.dim();
    let mut a = m.entries().to_vec();
    let frob = a.iter().fold(T::zero(), |acc, &x| acc.hypot(x));
    let target = T::lit(1e-12) * T::one().max(frob);
    let off = |a: &[T]| {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s = s.hypot(a[i * n + j]);
                }
            }
        }
        s
    };
    let mut sweeps = 0;
    while off(&a) > target {
        sweeps += 1;
        if sweeps > JACOBI_SWEEPS {
            return Err(Error::NonConvergence { iterations: JACOBI_SWEEPS });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (T::lit(2.0) * apq);
                let t = sign(T::one(), theta) / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<T> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eig)
}

/// Smallest eigenvalue by Jacobi rotations.
pub fn psd_bruteforce<T: Scalar>(m: &MomentMatrix<T>) -> Result<T> {
    Ok(jacobi_eigenvalues(m)?.first().copied().unwrap_or_else(T::zero))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentMatch {
    pub pass: bool,
    /// First `n` with `|gamma_n - moment_n| > tol * max(1, gamma_n)`.
    pub first_mismatch: Option<usize>,
    /// Largest scaled discrepancy seen.
    pub worst: f64,
}

/// Compares `gamma_n(shift)` against `∫ s^n dmu` for `n <= n_max`.
pub fn measure_moment_match<T: Scalar>(
    shift: &UnilateralShift<T>,
    mu: &Measure1D<T>,
    n_max: usize,
    tol: T,
) -> Result<MomentMatch> {
    let mut worst = T::zero();
    let mut first_mismatch = None;
    for n in 0..=n_max {
        let g = gamma(shift, n);
        let q = measure_moment(mu, n)?;
        let gap = (g - q).abs() / T::one().max(g.abs());
        worst = worst.max(gap);
        if gap > tol && first_mismatch.is_none() {
            first_mismatch = Some(n);
        }
    }
    Ok(MomentMatch {
        pass: first_mismatch.is_none(),
        first_mismatch,
        worst: worst.to_f64_lossy(),
    })
}

/// Classification by both PSD backends on one matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BackendAgreement {
    pub cholesky_psd: bool,
    pub jacobi_psd: bool,
    pub jacobi_lambda_min: f64,
    /// Same verdict, or a split inside the boundary band `|lambda_min| <= 1e-9`.
    pub agree: bool,
}

/// Width of the band where the two backends may legitimately split.
pub const AGREEMENT_BAND: f64 = 1e-9;

pub fn backend_agreement(m: &MomentMatrix<f64>, tol: f64) -> Result<BackendAgreement> {
    let primary = is_psd(m, tol)?;
    let lambda = psd_bruteforce(m)?;
    let jacobi_psd = lambda >= -tol * 1f64.max(m.trace());
    let agree = primary.psd == jacobi_psd || lambda.abs() <= AGREEMENT_BAND;
    Ok(BackendAgreement {
        cholesky_psd: primary.psd,
        jacobi_psd,
        jacobi_lambda_min: lambda,
        agree,
    })
}

/// Reproducible Hankel moment matrices of random atomic measures, each minus
/// a random multiple of the all-ones matrix so both verdicts occur.
pub fn perturbed_moment_matrices(seed: u64, count: usize) -> Result<Vec<MomentMatrix<f64>>> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let atoms = rng.gen_range(1..=3);
            let raw: Vec<(f64, f64)> = (0..atoms).map(|_| (rng.gen_range(0.2..2.0), rng.gen_range(0.1..1.0))).collect();
            let total: f64 = raw.iter().map(|a| a.1).sum();
            let mu = AtomicMeasure1D::new(raw.iter().map(|&(location, w)| Atom1D { location, mass: w / total }).collect())?;
            let k = rng.gen_range(1..=3usize);
            let m1 = rng.gen_range(0..=3usize);
            let rows: Vec<Vec<f64>> = (0..=k).map(|i| (0..=k).map(|j| mu.moment(m1 + i + j)).collect()).collect();
            let h = MomentMatrix::from_rows(&rows)?;
            let c = rng.gen_range(0.0..1.2) * mu.moment(m1);
            Ok(h.minus_all_ones(c))
        })
        .collect()
}
