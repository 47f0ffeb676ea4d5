//! One-variable weighted shifts.
//!
//! A unilateral weighted shift `W e_n = alpha_n e_{n+1}` is determined by its
//! positive weight sequence. Sequences are stored as a finite head followed by
//! a closed-form tail rule, so moments at large `n` stay exact to rounding and
//! nothing is ever truncated.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Number of materialized weights scanned when checking a declared supremum.
pub const NORM_SCAN: usize = 1000;

/// Closed-form rule producing `alpha_n` for every absolute index `n`.
///
/// The rule is evaluated at the absolute index, so a head of length `h`
/// simply overrides the rule for `n < h`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum TailRule<T> {
    /// `alpha_n = value`.
    Constant { value: T },
    /// `alpha_n = sqrt(ell - 1/(n+2))`, the Bergman-like shift `B_+^(ell)`.
    BergmanLike { ell: u32 },
    /// `alpha_n = sqrt((1 + kappa^(n+1)) / (1 + kappa^n))`, Berger measure `(delta_1 + delta_kappa)/2`.
    TwoAtom { kappa: T },
    /// `alpha_n = sqrt(gamma_{n+1} / gamma_n)` for the moments of a finitely atomic measure,
    /// atoms given as `(location, mass)`.
    AtomicRatio { atoms: Vec<(T, T)> },
    /// `alpha_n = sqrt((slope * n + intercept) / (n + pole))`.
    Rational { slope: T, intercept: T, pole: T },
    /// `alpha_n = cap * (1 - ratio^(n+1))`, increasing to `cap`.
    GeometricCap { cap: T, ratio: T },
}

impl<T: Scalar> TailRule<T> {
    pub fn weight(&self, n: usize) -> T {
        match self {
            TailRule::Constant { value } => *value,
            TailRule::BergmanLike { ell } => {
                let ell = T::from_u32(*ell).unwrap();
                (ell - T::one() / T::from_usize_lossy(n + 2)).sqrt()
            }
            TailRule::TwoAtom { kappa } => {
                // (1 + k^{n+1}) / (1 + k^n) rewritten with k^{-n} to stay finite for large n.
                let inv = kappa.powi(-(n.min(i32::MAX as usize) as i32));
                ((inv + *kappa) / (inv + T::one())).sqrt()
            }
            TailRule::AtomicRatio { atoms } => {
                let top = atoms
                    .iter()
                    .fold(T::zero(), |acc, &(s, _)| acc.max(s));
                let e = n.min(i32::MAX as usize - 1) as i32;
                let (mut num, mut den) = (T::zero(), T::zero());
                for &(s, w) in atoms {
                    let r = s / top;
                    num += w * r.powi(e + 1);
                    den += w * r.powi(e);
                }
                (top * num / den).sqrt()
            }
            TailRule::Rational {
                slope,
                intercept,
                pole,
            } => {
                let x = T::from_usize_lossy(n);
                ((*slope * x + *intercept) / (x + *pole)).sqrt()
            }
            TailRule::GeometricCap { cap, ratio } => {
                *cap * (T::one() - ratio.powi(n.min(i32::MAX as usize - 1) as i32 + 1))
            }
        }
    }

    /// Supremum of the rule over all indices (its limit, for the monotone rules).
    pub fn sup(&self) -> T {
        match self {
            TailRule::Constant { value } => *value,
            TailRule::BergmanLike { ell } => T::from_u32(*ell).unwrap().sqrt(),
            TailRule::TwoAtom { kappa } => kappa.sqrt(),
            TailRule::AtomicRatio { atoms } => atoms
                .iter()
                .fold(T::zero(), |acc, &(s, _)| acc.max(s))
                .sqrt(),
            TailRule::Rational {
                slope,
                intercept,
                pole,
            } => {
                if self.is_nondecreasing() {
                    slope.sqrt()
                } else {
                    (*intercept / *pole).sqrt()
                }
            }
            TailRule::GeometricCap { cap, .. } => *cap,
        }
    }

    /// Atomic moment ratios are nondecreasing by log-convexity of the moment
    /// sequence; a rational rule is monotone one way or the other.
    pub fn is_nondecreasing(&self) -> bool {
        match self {
            TailRule::Rational {
                slope,
                intercept,
                pole,
            } => *intercept <= *slope * *pole,
            _ => true,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            TailRule::Constant { value } if !(*value > T::zero()) => {
                invalid(format!("constant tail weight must be positive, got {value}"))
            }
            TailRule::BergmanLike { ell } if *ell < 1 => invalid("Bergman-like index must be >= 1"),
            TailRule::TwoAtom { kappa } if !(*kappa > T::one()) => {
                invalid(format!("two-atom parameter must exceed 1, got {kappa}"))
            }
            TailRule::AtomicRatio { atoms } => {
                if atoms.iter().any(|&(s, w)| s < T::zero() || !(w > T::zero())) {
                    return invalid("atomic tail needs nonnegative locations and positive masses");
                }
                if !atoms.iter().any(|&(s, _)| s > T::zero()) {
                    return invalid("atomic tail needs an atom off the origin");
                }
                Ok(())
            }
            TailRule::Rational {
                slope,
                intercept,
                pole,
            } if !(*slope > T::zero() && *intercept > T::zero() && *pole > T::zero()) => {
                invalid("rational tail needs positive slope, intercept and pole")
            }
            TailRule::GeometricCap { cap, ratio }
                if !(*cap > T::zero() && *ratio > T::zero() && *ratio < T::one()) =>
            {
                invalid("geometric cap needs cap > 0 and ratio in (0, 1)")
            }
            _ => Ok(()),
        }
    }
}

/// Positive weight sequence with a declared supremum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightSequence<T> {
    head: Vec<T>,
    tail: TailRule<T>,
    declared_sup: T,
}

pub(crate) fn sup_slack<T: Scalar>(sup: T) -> T {
    T::lit(1e-12).max(T::epsilon() * T::lit(8.0)) * T::one().max(sup)
}

impl<T: Scalar> WeightSequence<T> {
    /// Builds a sequence and checks positivity and the declared supremum on
    /// the head plus the first few hundred tail weights.
    pub fn new(head: Vec<T>, tail: TailRule<T>, declared_sup: T) -> Result<Self> {
        tail.validate()?;
        if !(declared_sup > T::zero()) {
            return invalid("declared supremum must be positive");
        }
        if let Some((i, w)) = head.iter().enumerate().find(|(_, w)| !(**w > T::zero())) {
            return invalid(format!("weight {i} must be positive, got {w}"));
        }
        let seq = Self {
            head,
            tail,
            declared_sup,
        };
        let slack = sup_slack(declared_sup);
        for n in 0..seq.head.len() + 256 {
            let w = seq.weight(n);
            if !(w > T::zero()) {
                return invalid(format!("tail weight {n} is not positive"));
            }
            if w > declared_sup + slack {
                return Err(Error::Integrity {
                    index: n,
                    value: w.to_f64_lossy(),
                    declared_sup: declared_sup.to_f64_lossy(),
                });
            }
        }
        Ok(seq)
    }

    /// Head plus tail with the supremum taken as `max(max head, sup tail)`.
    pub fn with_tail(head: Vec<T>, tail: TailRule<T>) -> Result<Self> {
        let sup = head.iter().fold(tail.sup(), |acc, &w| acc.max(w));
        Self::new(head, tail, sup)
    }

    pub fn weight(&self, n: usize) -> T {
        match self.head.get(n) {
            Some(w) => *w,
            None => self.tail.weight(n),
        }
    }

    pub fn weights(&self, count: usize) -> Vec<T> {
        (0..count).map(|n| self.weight(n)).collect()
    }

    pub fn head(&self) -> &[T] {
        &self.head
    }

    pub fn tail(&self) -> &TailRule<T> {
        &self.tail
    }

    pub fn declared_sup(&self) -> T {
        self.declared_sup
    }

    /// Re-runs the constructor checks, e.g. after deserializing.
    pub fn revalidated(self) -> Result<Self> {
        Self::new(self.head, self.tail, self.declared_sup)
    }
}

/// Family tag carried by a shift.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ShiftLabel<T> {
    Unilateral,
    BergmanLike { ell: u32 },
    TwoAtom { kappa: T },
    FromMeasure,
    Custom,
}

/// Unilateral weighted shift `W e_n = alpha_n e_{n+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnilateralShift<T> {
    pub weights: WeightSequence<T>,
    pub label: ShiftLabel<T>,
}

impl<T: Scalar> UnilateralShift<T> {
    pub fn new(weights: WeightSequence<T>, label: ShiftLabel<T>) -> Self {
        Self { weights, label }
    }

    /// The unweighted shift `U_+`.
    pub fn unilateral() -> Self {
        let weights = WeightSequence::new(
            Vec::new(),
            TailRule::Constant { value: T::one() },
            T::one(),
        )
        .expect("unit weights are valid");
        Self::new(weights, ShiftLabel::Unilateral)
    }

    /// `shift(head..., c, c, c, ...)`.
    pub fn with_constant_tail(head: Vec<T>, c: T) -> Result<Self> {
        let weights = WeightSequence::with_tail(head, TailRule::Constant { value: c })?;
        Ok(Self::new(weights, ShiftLabel::Custom))
    }

    pub fn weight(&self, n: usize) -> T {
        self.weights.weight(n)
    }

    pub fn declared_sup(&self) -> T {
        self.weights.declared_sup()
    }

    pub fn revalidated(self) -> Result<Self> {
        Ok(Self::new(self.weights.revalidated()?, self.label))
    }
}

/// `B_+^(ell) = shift(sqrt(ell - 1/(n+2)))`; `ell = 1` is the Bergman shift.
pub fn make_bergman_like<T: Scalar>(ell: i64) -> Result<UnilateralShift<T>> {
    if ell < 1 || ell > u32::MAX as i64 {
        return invalid(format!("Bergman-like index must be a positive integer, got {ell}"));
    }
    let ell = ell as u32;
    let tail = TailRule::BergmanLike { ell };
    let sup = tail.sup();
    let weights = WeightSequence::new(Vec::new(), tail, sup)?;
    Ok(UnilateralShift::new(weights, ShiftLabel::BergmanLike { ell }))
}

/// `W_kappa`, the shift whose Berger measure is `(delta_1 + delta_kappa)/2`.
pub fn make_two_atom_shift<T: Scalar>(kappa: T) -> Result<UnilateralShift<T>> {
    if !(kappa > T::one()) || !kappa.is_finite() {
        return invalid(format!("two-atom parameter must exceed 1, got {kappa}"));
    }
    let tail = TailRule::TwoAtom { kappa };
    let weights = WeightSequence::new(Vec::new(), tail, kappa.sqrt())?;
    Ok(UnilateralShift::new(weights, ShiftLabel::TwoAtom { kappa }))
}

/// Moments `gamma_n = alpha_0^2 ... alpha_{n-1}^2`, `gamma_0 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Moments1D<T> {
    gamma: Vec<T>,
}

impl<T: Scalar> Moments1D<T> {
    pub fn gamma(&self, n: usize) -> T {
        self.gamma[n]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.gamma
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }
}

/// `gamma_0 ..= gamma_{n_max}` by left-to-right products of squared weights.
pub fn moments<T: Scalar>(shift: &UnilateralShift<T>, n_max: usize) -> Moments1D<T> {
    let mut gamma = Vec::with_capacity(n_max + 1);
    let mut g = T::one();
    gamma.push(g);
    for n in 0..n_max {
        let w = shift.weight(n);
        g *= w * w;
        gamma.push(g);
    }
    Moments1D { gamma }
}

/// Single moment `gamma_n`.
pub fn gamma<T: Scalar>(shift: &UnilateralShift<T>, n: usize) -> T {
    (0..n).fold(T::one(), |g, i| {
        let w = shift.weight(i);
        g * w * w
    })
}

/// Operator norm: the declared supremum, after checking that none of the
/// first [`NORM_SCAN`] weights exceeds it.
pub fn norm<T: Scalar>(shift: &UnilateralShift<T>) -> Result<T> {
    let sup = shift.declared_sup();
    let slack = sup_slack(sup);
    for n in 0..NORM_SCAN.max(shift.weights.head().len() + 1) {
        let w = shift.weight(n);
        if w > sup + slack {
            return Err(Error::Integrity {
                index: n,
                value: w.to_f64_lossy(),
                declared_sup: sup.to_f64_lossy(),
            });
        }
    }
    Ok(sup)
}

/// Outcome of the monotone-weight hyponormality test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hyponormality1D {
    pub pass: bool,
    /// First `n` with `alpha_n > alpha_{n+1}`.
    pub witness: Option<usize>,
    /// Indices `n < checked` were compared against `n + 1`.
    pub checked: usize,
    pub tail_nondecreasing: bool,
}

/// A unilateral weighted shift is hyponormal iff its weights are nondecreasing.
///
/// Checks `n < max(n_max, head_len + 1)` so the head/tail junction is always
/// covered; the tail beyond that is certified by the rule itself.
pub fn is_hyponormal_1d<T: Scalar>(shift: &UnilateralShift<T>, n_max: usize) -> Hyponormality1D {
    let checked = n_max.max(shift.weights.head().len() + 1);
    let slack = T::lit(1e-12);
    let witness = (0..checked).find(|&n| {
        let (a, b) = (shift.weight(n), shift.weight(n + 1));
        a > b + slack * T::one().max(b)
    });
    let tail_nondecreasing = shift.weights.tail().is_nondecreasing();
    Hyponormality1D {
        pass: witness.is_none() && tail_nondecreasing,
        witness,
        checked,
        tail_nondecreasing,
    }
}

/// Smallest singular value of the `(N+1) x N` section of `W - lambda` on
/// `e_0, ..., e_{N-1}`.
///
/// The section is lower bidiagonal with `-lambda` on the diagonal and
/// `alpha_n` below it. Singular values depend only on the moduli of the
/// entries, and the Golub-Kahan matrix `[[0, A], [A^T, 0]]` is permutation
/// similar to a zero-diagonal tridiagonal with off-diagonals
/// `|lambda|, alpha_0, |lambda|, alpha_1, ...`. Its spectrum is
/// `{±sigma_i} ∪ {0}`, so `sigma_min` is the `(N+2)`-th smallest eigenvalue,
/// found by Sturm-count bisection with absolute accuracy near `eps * ||A||`.
pub fn section_sigma_min<T: Scalar>(
    shift: &UnilateralShift<T>,
    lambda: Complex<T>,
    n: usize,
) -> Result<T> {
    if n < 1 {
        return invalid("section size must be at least 1");
    }
    let modulus = lambda.norm();
    let mut offdiag = Vec::with_capacity(2 * n);
    let mut bound = T::zero();
    for i in 0..n {
        let a = shift.weight(i);
        offdiag.push(modulus);
        offdiag.push(a);
        bound = bound.max(modulus + a);
    }
    let target = n + 2;
    let (mut lo, mut hi) = (T::zero(), bound * T::lit(1.01) + T::epsilon());
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count_zero_diag(&offdiag, mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo + hi) / T::lit(2.0))
}

/// Number of eigenvalues strictly below `x` of the symmetric tridiagonal
/// matrix with zero diagonal and the given off-diagonal.
fn sturm_count_zero_diag<T: Scalar>(offdiag: &[T], x: T) -> usize {
    let tiny = T::min_positive_value().sqrt();
    let mut count = 0;
    let mut q = -x;
    if q == T::zero() {
        q = -tiny;
    }
    if q < T::zero() {
        count += 1;
    }
    for &e in offdiag {
        q = -x - e * e / q;
        if q == T::zero() {
            q = -tiny;
        }
        if q < T::zero() {
            count += 1;
        }
    }
    count
}

/// Norm of the canonical left inverse `[(W - lambda)^*(W - lambda)]^{-1/2}`
/// at resolution `N`, i.e. `1 / sigma_min` of the rectangular section.
///
/// Sections nest, so the value is nondecreasing in `N` and bounded by the
/// operator quantity.
pub fn canonical_left_inverse_norm<T: Scalar>(
    shift: &UnilateralShift<T>,
    lambda: Complex<T>,
    n: usize,
) -> Result<T> {
    if n < 2 {
        return invalid("resolution N must be at least 2");
    }
    let sigma = section_sigma_min(shift, lambda, n)?;
    if sigma < T::lit(1e-12) {
        return Err(Error::NearLeftSpectrum {
            resolution: n,
            sigma_min: sigma.to_f64_lossy(),
        });
    }
    Ok(T::one() / sigma)
}
