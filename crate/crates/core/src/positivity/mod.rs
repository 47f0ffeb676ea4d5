//! Moment matrices and positivity verdicts.
//!
//! A two-variable weighted shift is `k`-hyponormal iff every moment matrix
//! `M_m(k)` is positive semidefinite. Scans cover a finite region only; the
//! verdict says exactly what was scanned and whether a structural argument
//! covers the rest.

pub(crate) mod linalg;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::lattice2d::{make_thm_important, LatticePoint, Moments2D, WeightDiagram2D, Family};
use crate::measures::{shift_from_measure, Atom1D, Atom2D, AtomicMeasure1D, AtomicMeasure2D};
use crate::scalar::Scalar;
use crate::weights1d::{
    make_two_atom_shift, moments, ShiftLabel, TailRule, UnilateralShift, WeightSequence,
};

/// Default PSD slack, scaled by `max(1, trace)`.
pub const PSD_TOL: f64 = 1e-10;

/// Largest tolerated asymmetry, relative to the entry magnitude.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Where a moment matrix starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Origin {
    OneVar(usize),
    TwoVar(LatticePoint),
}

/// Row/column label of a moment matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum IndexLabel {
    Power(usize),
    Multi(LatticePoint),
}

/// Symmetric moment matrix with labeled rows.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentMatrix<T> {
    n: usize,
    entries: Vec<T>,
    pub labels: Vec<IndexLabel>,
    pub origin: Origin,
    pub order: usize,
}

impl<T: Scalar> MomentMatrix<T> {
    /// Wraps an arbitrary square matrix; symmetry is checked by [`is_psd`].
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return invalid("moment matrix must be square");
        }
        Ok(Self {
            n,
            entries: rows.concat(),
            labels: (0..n).map(IndexLabel::Power).collect(),
            origin: Origin::OneVar(0),
            order: n.saturating_sub(1),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.n.max(1)).map(<[T]>::to_vec).collect()
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self.get(i, i))
    }

    /// `M - c * 1 1^T`.
    pub fn minus_all_ones(&self, c: T) -> Self {
        let mut out = self.clone();
        out.entries.iter_mut().for_each(|e| *e -= c);
        out
    }
}

/// `(k+1) x (k+1)` Hankel matrix with entries `gamma_{m1+i+j}`.
pub fn hankel_matrix<T: Scalar>(shift: &UnilateralShift<T>, m1: usize, k: usize) -> MomentMatrix<T> {
    let g = moments(shift, m1 + 2 * k);
    let n = k + 1;
    let entries = (0..n * n).map(|x| g.gamma(m1 + x / n + x % n)).collect();
    MomentMatrix {
        n,
        entries,
        labels: (0..n).map(IndexLabel::Power).collect(),
        origin: Origin::OneVar(m1),
        order: k,
    }
}

/// Outcome of a semidefiniteness test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PsdReport<T> {
    pub psd: bool,
    pub lambda_min: T,
    /// The absolute slack actually applied: `tol * max(1, trace)`.
    pub threshold: T,
}

/// Pivoted-Cholesky PSD decision with slack `tol * max(1, trace)`, plus the
/// smallest eigenvalue for reporting.
pub fn is_psd<T: Scalar>(m: &MomentMatrix<T>, tol: T) -> Result<PsdReport<T>> {
    let n = m.dim();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (m.get(i, j), m.get(j, i));
            let gap = (a - b).abs();
            if gap > T::lit(SYMMETRY_TOL) * T::one().max(a.abs()).max(b.abs()) {
                return Err(Error::NotSymmetric {
                    row: i,
                    col: j,
                    gap: gap.to_f64_lossy(),
                });
            }
        }
    }
    let threshold = tol * T::one().max(m.trace().abs());
    Ok(PsdReport {
        psd: linalg::pivoted_cholesky_psd(m.entries(), n, threshold),
        lambda_min: linalg::min_eigenvalue(m.entries(), n),
        threshold,
    })
}

pub fn determinant<T: Scalar>(m: &MomentMatrix<T>) -> T {
    linalg::determinant(m.entries(), m.dim())
}

/// `is_psd(hankel(W_kappa, m1, k) - y0^2 * 1 1^T)`.
pub fn shifted_psd_test<T: Scalar>(kappa: T, y0: T, k: usize, m1: usize, tol: T) -> Result<PsdReport<T>> {
    if !(y0 > T::zero()) {
        return invalid("y0 must be positive");
    }
    let w = make_two_atom_shift(kappa)?;
    is_psd(&hankel_matrix(&w, m1, k).minus_all_ones(y0 * y0), tol)
}

/// Multi-indices `|p| <= k` in graded lexicographic order:
/// `(0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...`.
pub fn multi_indices(k: usize) -> Vec<LatticePoint> {
    (0..=k)
        .flat_map(|s| (0..=s).rev().map(move |p1| LatticePoint::new(p1, s - p1)))
        .collect()
}

fn moment_matrix_from<T: Scalar>(g: &Moments2D<T>, m: LatticePoint, k: usize) -> MomentMatrix<T> {
    let idx = multi_indices(k);
    let n = idx.len();
    let mut entries = Vec::with_capacity(n * n);
    for &p in &idx {
        for &q in &idx {
            entries.push(g.gamma(m + p + q));
        }
    }
    MomentMatrix {
        n,
        entries,
        labels: idx.into_iter().map(IndexLabel::Multi).collect(),
        origin: Origin::TwoVar(m),
        order: k,
    }
}

/// `M_m(k)`, entries `gamma_{m+p+q}` over multi-indices of degree at most `k`.
pub fn two_var_moment_matrix<T: Scalar>(d: &WeightDiagram2D<T>, m: LatticePoint, k: usize) -> MomentMatrix<T> {
    let g = Moments2D::new(d, m.m1 + 2 * k, m.m2 + 2 * k);
    moment_matrix_from(&g, m, k)
}

/// Inclusive scan rectangle `0 <= m1 <= m1_max`, `0 <= m2 <= m2_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Region {
    pub m1_max: usize,
    pub m2_max: usize,
}

impl Region {
    pub fn square(size: usize) -> Self {
        Self {
            m1_max: size,
            m2_max: size,
        }
    }

    /// Points in row-major order: `m2` outer, `m1` inner.
    pub fn points(&self) -> Vec<LatticePoint> {
        (0..=self.m2_max)
            .flat_map(|j| (0..=self.m1_max).map(move |i| LatticePoint::new(i, j)))
            .collect()
    }
}

impl Serialize for Region {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.m1_max, self.m2_max].serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS_ON_REGION")]
    PassOnRegion,
    #[serde(rename = "FAIL")]
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Witness<T> {
    #[serde(serialize_with = "point_pair")]
    pub m: LatticePoint,
    pub lambda_min: T,
}

fn point_pair<S: serde::Serializer>(m: &LatticePoint, s: S) -> std::result::Result<S::Ok, S::Error> {
    [m.m1, m.m2].serialize(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositivityVerdict<T> {
    pub status: Status,
    pub witness: Option<Witness<T>>,
    pub region: Region,
    pub tol: T,
    pub k: usize,
    /// Set when every `M_m(k)` beyond the region is PSD for structural reasons.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_certificate: Option<String>,
}

impl<T> PositivityVerdict<T> {
    pub fn passed(&self) -> bool {
        self.status == Status::PassOnRegion
    }
}

/// Rows from `j0` upward are `U_+` with unit `beta`: each `M_m(k)` with
/// `m2 >= j0` is then `gamma_m` times the all-ones matrix.
fn tensor_tail_row<T: Scalar>(d: &WeightDiagram2D<T>) -> Option<usize> {
    let rows = d.distinct_rows()?;
    let top = crate::lattice2d::horizontal_slice(d, rows - 1).ok()?;
    let unit_row = top.label == ShiftLabel::Unilateral
        || (top.weights.head().iter().all(|&w| w == T::one())
            && top.weights.tail() == &TailRule::Constant { value: T::one() });
    let col = d.column0();
    let unit_col = col.weights.tail() == &TailRule::Constant { value: T::one() };
    (unit_row && unit_col).then(|| (rows - 1).max(col.weights.head().len()))
}

/// Scans `M_m(k)` over `region`; the FAIL witness is the first failing point
/// in row-major order, independent of scheduling.
pub fn is_k_hyponormal<T: Scalar>(
    d: &WeightDiagram2D<T>,
    k: usize,
    region: Region,
    tol: T,
) -> Result<PositivityVerdict<T>> {
    if k < 1 {
        return invalid("order k must be at least 1");
    }
    let g = Moments2D::new(d, region.m1_max + 2 * k, region.m2_max + 2 * k);
    let points = region.points();
    let reports = points
        .par_iter()
        .map(|&m| is_psd(&moment_matrix_from(&g, m, k), tol).map(|r| (m, r)))
        .collect::<Result<Vec<_>>>()?;
    let witness = reports.iter().find(|(_, r)| !r.psd).map(|&(m, r)| Witness {
        m,
        lambda_min: r.lambda_min,
    });
    let tail_certificate = tensor_tail_row(d).map(|j0| {
        format!("rows m2 >= {j0} are unit shifts with unit columns, so M_m(k) is a positive multiple of the all-ones matrix there")
    });
    Ok(PositivityVerdict {
        status: if witness.is_some() { Status::Fail } else { Status::PassOnRegion },
        witness,
        region,
        tol,
        k,
        tail_certificate,
    })
}

/// Joint hyponormality is `1`-hyponormality.
pub fn is_hyponormal_pair<T: Scalar>(d: &WeightDiagram2D<T>, region: Region, tol: T) -> Result<PositivityVerdict<T>> {
    is_k_hyponormal(d, 1, region, tol)
}

/// Largest `y0` in `(0, 1]` (to `1e-6`) for which the shifted Hankel test at
/// order `k` passes for every `m1 <= m1_max`.
///
/// Shrinking `y0` adds a positive multiple of the all-ones matrix, so the
/// passing set is an interval and bisection applies.
pub fn find_max_y0<T: Scalar>(kappa: T, k: usize, m1_max: usize, tol: T) -> Result<T> {
    if k < 1 {
        return invalid("order k must be at least 1");
    }
    let w = make_two_atom_shift(kappa)?;
    let hankels: Vec<_> = (0..=m1_max).map(|m1| hankel_matrix(&w, m1, k)).collect();
    let passes = |y: T| -> Result<bool> {
        for h in &hankels {
            if !is_psd(&h.minus_all_ones(y * y), tol)?.psd {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if passes(T::one())? {
        return Ok(T::one());
    }
    let (mut lo, mut hi) = (T::zero(), T::one());
    while hi - lo > T::lit(1e-7) {
        let mid = (lo + hi) / T::lit(2.0);
        if passes(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Column family tried by [`search_thm_important_params`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "grid", rename_all = "snake_case")]
pub enum ColumnChoice {
    /// `beta_n = c (1 - r^(n+1))`.
    GeometricCap { c: f64, r: f64 },
    /// Berger measure with atoms `c^2 t^i`, `i = 0..=k`, masses in ratio
    /// `w_i / w_{i+1} = t^(k - i - 1/2)`.
    StaggeredAtoms { c: f64, t: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImportantCandidate<T> {
    pub ells: Vec<u32>,
    pub column: ColumnChoice,
    #[serde(skip)]
    pub col: UnilateralShift<T>,
    pub verdict: PositivityVerdict<T>,
}

pub const CAP_C: [f64; 3] = [0.5, 0.8, 1.0];
pub const CAP_R: [f64; 2] = [0.5, 0.9];
pub const ATOM_T: [f64; 6] = [0.5, 0.25, 0.1, 0.05, 0.02, 0.01];
pub const ATOM_C: [f64; 3] = [1.0, 0.8, 0.5];

/// Column built from [`ColumnChoice`].
pub fn column_shift<T: Scalar>(choice: ColumnChoice, k: usize) -> Result<UnilateralShift<T>> {
    match choice {
        ColumnChoice::GeometricCap { c, r } => {
            let tail = TailRule::GeometricCap {
                cap: T::lit(c),
                ratio: T::lit(r),
            };
            let w = WeightSequence::new(Vec::new(), tail, T::lit(c))?;
            Ok(UnilateralShift::new(w, ShiftLabel::Custom))
        }
        ColumnChoice::StaggeredAtoms { c, t } => {
            let mut log_w = vec![0.0f64; k + 1];
            for i in (0..k).rev() {
                log_w[i] = log_w[i + 1] + (k as f64 - i as f64 - 0.5) * t.ln();
            }
            let top = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let w: Vec<f64> = log_w.iter().map(|l| (l - top).exp()).collect();
            let total: f64 = w.iter().sum();
            let atoms = (0..=k)
                .map(|i| Atom1D {
                    location: T::lit(c * c * t.powi(i as i32)),
                    mass: T::lit(w[i] / total),
                })
                .collect();
            let mu = AtomicMeasure1D::new(atoms)?;
            shift_from_measure(&mu, 0)
        }
    }
}

/// Strictly decreasing `k`-subsets of `{top, ..., 1}`, in descending
/// lexicographic order.
fn decreasing_sequences(k: usize, top: u32) -> Vec<Vec<u32>> {
    fn rec(k: usize, below: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = (k - cur.len()) as u32;
        for v in (need..below).rev() {
            cur.push(v);
            rec(k, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, top + 1, &mut Vec::new(), &mut out);
    out
}

/// Searches Bergman-like row indices and increasing columns for a diagram that
/// passes the hyponormality scan on a `region_size` square.
///
/// First pass: `ell = (k, ..., 1)` against geometric-cap columns over
/// [`CAP_C`] x [`CAP_R`]. Second pass: every strictly decreasing `ell` from
/// `{2k+2, ..., 1}` (descending lexicographic), then [`ATOM_T`], then
/// [`ATOM_C`], against staggered-atom columns. Returns the first pass.
pub fn search_thm_important_params<T: Scalar>(
    k: usize,
    region_size: usize,
    tol: T,
) -> Result<Option<ImportantCandidate<T>>> {
    if k < 1 {
        return invalid("need at least one Bergman-like row");
    }
    let region = Region::square(region_size);
    let try_one = |ells: &[u32], choice: ColumnChoice| -> Result<Option<ImportantCandidate<T>>> {
        let col = column_shift::<T>(choice, k)?;
        let d = make_thm_important(ells, col.clone())?;
        let verdict = is_hyponormal_pair(&d, region, tol)?;
        Ok(verdict.passed().then(|| ImportantCandidate {
            ells: ells.to_vec(),
            column: choice,
            col,
            verdict,
        }))
    };
    let simple: Vec<u32> = (1..=k as u32).rev().collect();
    for c in CAP_C {
        for r in CAP_R {
            if let Some(hit) = try_one(&simple, ColumnChoice::GeometricCap { c, r })? {
                return Ok(Some(hit));
            }
        }
    }
    for ells in decreasing_sequences(k, 2 * k as u32 + 2) {
        for t in ATOM_T {
            for c in ATOM_C {
                if let Some(hit) = try_one(&ells, ColumnChoice::StaggeredAtoms { c, t })? {
                    return Ok(Some(hit));
                }
            }
        }
    }
    Ok(None)
}

/// `mu = y0^2 delta_(1,1) + (xi_kappa - y0^2 delta_1) x delta_0`, the Berger
/// measure of the `thm-khypo` diagram when `y0^2 <= 1/2`.
pub fn remark_measure_decomposition<T: Scalar>(kappa: T, y0: T) -> Result<AtomicMeasure2D<T>> {
    if !(kappa > T::one()) {
        return invalid(format!("kappa must exceed 1, got {kappa}"));
    }
    if !(y0 > T::zero()) {
        return invalid("y0 must be positive");
    }
    let y2 = y0 * y0;
    let half = T::lit(0.5);
    let rest = half - y2;
    // y0 = sqrt(1/2) squares to 1/2 only up to rounding.
    let slack = T::lit(1e-12);
    if rest < -slack {
        return Err(Error::NegativeMass {
            mass: rest.to_f64_lossy(),
        });
    }
    let mut atoms = vec![Atom2D { s: T::one(), t: T::one(), mass: y2.min(half) }];
    if rest > slack {
        atoms.push(Atom2D { s: T::one(), t: T::zero(), mass: rest });
    }
    atoms.push(Atom2D { s: kappa, t: T::zero(), mass: half });
    AtomicMeasure2D::new(atoms)
}

/// Whether a diagram carries closed-form family data for `thm-khypo`.
pub fn khypo_params<T: Scalar>(d: &WeightDiagram2D<T>) -> Option<(T, T)> {
    match d.family() {
        Family::ThmKhypo { kappa, y0 } => Some((*kappa, *y0)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice2d::{gamma2d, make_example_bergman, make_example_exof1atom, make_example_stair, make_thm_khypo};

    const TOL: f64 = PSD_TOL;

    fn mat(rows: &[&[f64]]) -> MomentMatrix<f64> {
        MomentMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn hankel_examples() {
        let w2 = make_two_atom_shift(2.0f64).unwrap();
        let h = hankel_matrix(&w2, 0, 1).rows();
        assert!(h[0][0] == 1.0 && (h[0][1] - 1.5).abs() < 1e-15 && (h[1][1] - 2.5).abs() < 1e-15);
        let h = hankel_matrix(&w2, 1, 1).rows();
        assert!((h[0][0] - 1.5).abs() < 1e-15 && (h[0][1] - 2.5).abs() < 1e-15 && (h[1][1] - 4.5).abs() < 1e-14);
        let u = hankel_matrix(&UnilateralShift::<f64>::unilateral(), 5, 2);
        assert!(u.entries().iter().all(|&e| e == 1.0) && u.dim() == 3);
    }

    #[test]
    fn psd_examples() {
        let r = is_psd(&mat(&[&[0.5, 1.0], &[1.0, 2.0]]), TOL).unwrap();
        assert!(r.psd && r.lambda_min.abs() < 1e-10);
        let m = mat(&[&[0.4, 0.9], &[0.9, 1.9]]);
        let r = is_psd(&m, TOL).unwrap();
        assert!(!r.psd && r.lambda_min < 0.0);
        assert!((determinant(&m) + 0.05).abs() < 1e-15);
        assert!(is_psd(&mat(&[&[1.0, 0.0], &[0.0, 1.0]]), TOL).unwrap().psd);
        assert!(matches!(
            is_psd(&mat(&[&[1.0, 0.5], &[0.4, 1.0]]), TOL),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn shifted_test_boundary() {
        assert!(shifted_psd_test(2.0, 0.5f64.sqrt(), 1, 0, TOL).unwrap().psd);
        assert!(!shifted_psd_test(2.0, 0.6f64.sqrt(), 1, 0, TOL).unwrap().psd);
        let w2 = make_two_atom_shift(2.0f64).unwrap();
        for y2 in [0.1, 0.3, 0.5, 0.6] {
            let det = determinant(&hankel_matrix(&w2, 0, 1).minus_all_ones(y2));
            assert!((det - (0.25 - 0.5 * y2)).abs() < 1e-12);
        }
        for k in 1..=4 {
            for m1 in 0..=12 {
                assert!(shifted_psd_test(2.0, 0.5f64.sqrt(), k, m1, TOL).unwrap().psd, "k={k} m1={m1}");
            }
        }
    }

    #[test]
    fn shifted_test_is_monotone_in_y0() {
        for k in 1..=3 {
            for m1 in [0, 3, 7] {
                let pass: Vec<bool> = (1..=40)
                    .map(|i| shifted_psd_test(3.0, i as f64 / 40.0, k, m1, TOL).unwrap().psd)
                    .collect();
                // Once a grid value fails, every larger one fails too.
                let first_fail = pass.iter().position(|p| !p).unwrap_or(pass.len());
                assert!(pass[..first_fail].iter().all(|&p| p));
                assert!(pass[first_fail..].iter().all(|&p| !p), "k={k} m1={m1}");
            }
        }
    }

    #[test]
    fn multi_index_order() {
        let idx: Vec<(usize, usize)> = multi_indices(2).iter().map(|p| (p.m1, p.m2)).collect();
        assert_eq!(idx, vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]);
        assert_eq!(multi_indices(4).len(), 15);
    }

    #[test]
    fn two_var_matrix_layout() {
        let d = make_thm_khypo(2.0f64, 0.7).unwrap();
        let m = LatticePoint::new(1, 2);
        let mm = two_var_moment_matrix(&d, m, 1);
        let g = |p: LatticePoint| gamma2d(&d, p);
        let e1 = LatticePoint::E1;
        let e2 = LatticePoint::E2;
        let expect = [
            [g(m), g(m + e1), g(m + e2)],
            [g(m + e1), g(m + e1 + e1), g(m + e1 + e2)],
            [g(m + e2), g(m + e1 + e2), g(m + e2 + e2)],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert!((mm.get(i, j) - expect[i][j]).abs() < 1e-12);
            }
        }
        let tail = two_var_moment_matrix(&d, LatticePoint::new(3, 1), 2);
        assert!(tail.entries().iter().all(|&e| (e - tail.get(0, 0)).abs() < 1e-12));
        let origin = two_var_moment_matrix(&make_thm_khypo(2.0, 0.5f64.sqrt()).unwrap(), LatticePoint::ORIGIN, 1);
        assert!(is_psd(&origin, TOL).unwrap().lambda_min >= -1e-10);
    }

    #[test]
    fn khypo_reduction_to_shifted_hankel() {
        for y0 in [0.3, 0.6, 0.7071, 0.72, 0.8] {
            let d = make_thm_khypo(2.0, y0).unwrap();
            for m1 in 0..=10 {
                let full = is_psd(&two_var_moment_matrix(&d, LatticePoint::new(m1, 0), 1), TOL).unwrap().psd;
                let reduced = shifted_psd_test(2.0, y0, 1, m1, TOL).unwrap().psd;
                assert_eq!(full, reduced, "y0={y0} m1={m1}");
            }
        }
    }

    #[test]
    fn family_verdicts() {
        let b = is_hyponormal_pair(&make_example_bergman::<f64>().unwrap(), Region::square(25), TOL).unwrap();
        assert!(b.passed() && b.witness.is_none());
        let e = is_hyponormal_pair(&make_example_exof1atom(0.5, 0.8).unwrap(), Region::square(10), TOL).unwrap();
        let w = e.witness.unwrap();
        assert_eq!(w.m, LatticePoint::ORIGIN);
        assert!(w.lambda_min < -1e-6);
        let s = is_hyponormal_pair(&make_example_stair(0.5).unwrap(), Region::square(10), TOL).unwrap();
        assert_eq!(s.status, Status::Fail);
        assert!(s.witness.unwrap().lambda_min < 0.0);
        let k = is_k_hyponormal(&make_thm_khypo(2.0, 0.707106).unwrap(), 3, Region::square(10), TOL).unwrap();
        assert!(k.passed());
        assert!(k.tail_certificate.is_some());
        assert!(b.tail_certificate.is_none());
    }

    #[test]
    fn verdict_json_shape() {
        let e = is_hyponormal_pair(&make_example_exof1atom(0.5, 0.8).unwrap(), Region::square(4), TOL).unwrap();
        let v = serde_json::to_value(&e).unwrap();
        assert_eq!(v["status"], "FAIL");
        assert_eq!(v["witness"]["m"], serde_json::json!([0, 0]));
        assert_eq!(v["region"], serde_json::json!([4, 4]));
        assert!(v["witness"]["lambda_min"].as_f64().unwrap() < 0.0);
    }

    #[test]
    fn max_y0_examples() {
        let y = find_max_y0(2.0, 1, 10, TOL).unwrap();
        assert!((y - 0.707107).abs() < 1e-4);
        let y4 = find_max_y0(2.0, 4, 10, TOL).unwrap();
        assert!(y4 > 0.5 && y4 <= 0.5f64.sqrt() + 1e-4);
    }

    #[test]
    fn near_degenerate_kappa_is_tolerance_limited() {
        // The Schur complement deciding the boundary is O((kappa - 1)^2), far
        // below the trace-scaled slack, so the default search overshoots.
        let loose = find_max_y0(1.0001, 1, 10, TOL).unwrap();
        assert!(loose > 0.5f64.sqrt() + 1e-3 && loose < 0.73);
        let tight = find_max_y0(1.0001, 1, 10, 1e-15).unwrap();
        assert!(tight <= 0.5f64.sqrt() + 1e-3, "{tight}");
    }

    #[test]
    fn decreasing_sequence_order() {
        assert_eq!(decreasing_sequences(1, 3), vec![vec![3], vec![2], vec![1]]);
        let two = decreasing_sequences(2, 4);
        assert_eq!(two[0], vec![4, 3]);
        assert_eq!(two.last().unwrap(), &vec![2, 1]);
        assert_eq!(two.len(), 6);
    }

    #[test]
    fn search_finds_k1_and_geometric_caps_never_pass() {
        let hit = search_thm_important_params::<f64>(1, 8, TOL).unwrap().unwrap();
        assert!(matches!(hit.column, ColumnChoice::StaggeredAtoms { .. }));
        assert!(hit.verdict.passed());
        for c in CAP_C {
            for r in CAP_R {
                let col = column_shift::<f64>(ColumnChoice::GeometricCap { c, r }, 1).unwrap();
                let d = make_thm_important(&[1], col).unwrap();
                assert!(!is_hyponormal_pair(&d, Region::square(8), TOL).unwrap().passed());
            }
        }
    }

    #[test]
    fn decreasing_column_is_rejected() {
        let col = UnilateralShift::with_constant_tail(vec![0.9, 0.8], 0.7).unwrap();
        assert!(matches!(make_thm_important(&[1], col), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn remark_measure() {
        let mu = remark_measure_decomposition(2.0, 0.5f64.sqrt()).unwrap();
        assert_eq!(mu.atoms().len(), 2);
        let d = make_thm_khypo(2.0, 0.5f64.sqrt()).unwrap();
        for i in 0..=6 {
            for j in 0..=6 {
                let m = LatticePoint::new(i, j);
                assert!((mu.moment(i, j) - gamma2d(&d, m)).abs() <= 1e-10 * gamma2d(&d, m).max(1.0));
            }
        }
        assert!(matches!(
            remark_measure_decomposition(2.0, 0.6f64.sqrt()),
            Err(Error::NegativeMass { .. })
        ));
        let mu = remark_measure_decomposition(3.0, 0.4).unwrap();
        assert_eq!(mu.atoms().len(), 3);
    }
}
