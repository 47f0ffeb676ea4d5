//! Spectral pictures of Reinhardt sets, drawn in the modulus plane
//! `(|z_1|, |z_2|)`.
//!
//! Every set is a finite union of products of radial sets (intervals, points,
//! and geometric families `{r0 q^k} ∪ {0}`), so membership and equality are
//! decidable. Radii are stored as `f64`.

pub mod geometry;
pub mod svg;

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::lattice2d::{horizontal_slice, vertical_slice, Family, WeightDiagram2D};
use crate::oracle::{min_singular, RectangularSection};
use crate::scalar::Scalar;
use crate::weights1d::{canonical_left_inverse_norm, is_hyponormal_1d, norm, TailRule, UnilateralShift, NORM_SCAN};

pub use geometry::{component_count, outer_boundary, ComponentCount};

/// Coordinates closer than this are treated as equal.
pub const GEOM_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RadialSet {
    Interval { lo: f64, hi: f64 },
    Point { r: f64 },
    /// `{r0 q^k : k >= 0} ∪ {0}`.
    Geometric { r0: f64, q: f64 },
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= GEOM_TOL * 1f64.max(a.abs()).max(b.abs())
}

impl RadialSet {
    pub fn interval(lo: f64, hi: f64) -> Self {
        RadialSet::Interval { lo, hi }.normalized()
    }

    pub fn point(r: f64) -> Self {
        RadialSet::Point { r }
    }

    pub fn geometric(r0: f64, q: f64) -> Self {
        RadialSet::Geometric { r0, q }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            RadialSet::Interval { lo, hi } => lo >= 0.0 && lo <= hi && hi.is_finite(),
            RadialSet::Point { r } => r >= 0.0 && r.is_finite(),
            RadialSet::Geometric { r0, q } => r0 > 0.0 && r0.is_finite() && q > 0.0 && q < 1.0,
        };
        if ok {
            Ok(())
        } else {
            invalid(format!("malformed radial set {self:?}"))
        }
    }

    /// Degenerate intervals become points.
    pub fn normalized(self) -> Self {
        match self {
            RadialSet::Interval { lo, hi } if near(lo, hi) => RadialSet::Point { r: lo },
            other => other,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match *self {
            RadialSet::Interval { lo, hi } => x >= lo - GEOM_TOL && x <= hi + GEOM_TOL,
            RadialSet::Point { r } => near(x, r),
            RadialSet::Geometric { r0, q } => {
                if near(x, 0.0) {
                    return true;
                }
                if x <= 0.0 || x > r0 * (1.0 + GEOM_TOL) {
                    return false;
                }
                let k = ((x / r0).ln() / q.ln()).round();
                k >= 0.0 && near(x, r0 * q.powf(k))
            }
        }
    }

    pub fn max(&self) -> f64 {
        match *self {
            RadialSet::Interval { hi, .. } => hi,
            RadialSet::Point { r } => r,
            RadialSet::Geometric { r0, .. } => r0,
        }
    }

    pub fn min(&self) -> f64 {
        match *self {
            RadialSet::Interval { lo, .. } => lo,
            RadialSet::Point { r } => r,
            RadialSet::Geometric { .. } => 0.0,
        }
    }

    /// Has positive length.
    pub fn is_thick(&self) -> bool {
        matches!(*self, RadialSet::Interval { lo, hi } if hi - lo > GEOM_TOL)
    }

    pub fn is_subset_of(&self, other: &RadialSet) -> bool {
        match (*self, *other) {
            (RadialSet::Point { r }, o) => o.contains(r),
            (RadialSet::Interval { lo, hi }, RadialSet::Interval { lo: l2, hi: h2 }) => {
                lo >= l2 - GEOM_TOL && hi <= h2 + GEOM_TOL
            }
            (RadialSet::Interval { .. }, _) => false,
            (RadialSet::Geometric { r0, .. }, RadialSet::Interval { lo, hi }) => lo <= GEOM_TOL && r0 <= hi + GEOM_TOL,
            (RadialSet::Geometric { r0, q }, RadialSet::Geometric { q: p, .. }) => {
                // Every r0 q^k lies in {s0 p^j} iff r0 does and q is a power of p.
                let m = (q.ln() / p.ln()).round();
                other.contains(r0) && m >= 1.0 && near(q, p.powf(m))
            }
            (RadialSet::Geometric { .. }, RadialSet::Point { .. }) => false,
        }
    }

    fn key(&self) -> (u8, f64, f64) {
        match *self {
            RadialSet::Interval { lo, hi } => (0, lo, hi),
            RadialSet::Point { r } => (1, r, 0.0),
            RadialSet::Geometric { r0, q } => (2, r0, q),
        }
    }

    fn approx_eq(&self, other: &RadialSet) -> bool {
        let (a, b) = (self.key(), other.key());
        a.0 == b.0 && near(a.1, b.1) && near(a.2, b.2)
    }
}

impl fmt::Display for RadialSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RadialSet::Interval { lo, hi } => write!(f, "[{lo:.6}, {hi:.6}]"),
            RadialSet::Point { r } => write!(f, "{{{r:.6}}}"),
            RadialSet::Geometric { r0, q } => write!(f, "{{{r0:.6} * {q:.6}^k}} ∪ {{0}}"),
        }
    }
}

/// `z1 x z2` in the modulus plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Primitive {
    pub z1: RadialSet,
    pub z2: RadialSet,
}

impl Primitive {
    pub fn new(z1: RadialSet, z2: RadialSet) -> Self {
        Self {
            z1: z1.normalized(),
            z2: z2.normalized(),
        }
    }

    pub fn contains(&self, r1: f64, r2: f64) -> bool {
        self.z1.contains(r1) && self.z2.contains(r2)
    }

    pub fn is_subset_of(&self, other: &Primitive) -> bool {
        self.z1.is_subset_of(&other.z1) && self.z2.is_subset_of(&other.z2)
    }

    pub fn has_area(&self) -> bool {
        self.z1.is_thick() && self.z2.is_thick()
    }

    pub fn has_geometric(&self) -> bool {
        matches!(self.z1, RadialSet::Geometric { .. }) || matches!(self.z2, RadialSet::Geometric { .. })
    }

    fn approx_eq(&self, o: &Primitive) -> bool {
        self.z1.approx_eq(&o.z1) && self.z2.approx_eq(&o.z2)
    }

    fn cmp_key(&self, o: &Primitive) -> Ordering {
        let (a1, a2) = (self.z1.key(), self.z2.key());
        let (b1, b2) = (o.z1.key(), o.z2.key());
        a1.0.cmp(&b1.0)
            .then(a1.1.total_cmp(&b1.1))
            .then(a1.2.total_cmp(&b1.2))
            .then(a2.0.cmp(&b2.0))
            .then(a2.1.total_cmp(&b2.1))
            .then(a2.2.total_cmp(&b2.2))
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} x {}", self.z1, self.z2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "sigma_T")]
    Taylor,
    #[serde(rename = "sigma_Te")]
    TaylorEssential,
    #[serde(rename = "sigma_l")]
    Left,
    #[serde(rename = "sigma_le")]
    LeftEssential,
    #[serde(rename = "sigma_r")]
    Right,
    #[serde(rename = "sigma_re")]
    RightEssential,
    #[serde(rename = "outer_boundary")]
    OuterBoundary,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Taylor => "sigma_T",
            Label::TaylorEssential => "sigma_Te",
            Label::Left => "sigma_l",
            Label::LeftEssential => "sigma_le",
            Label::Right => "sigma_r",
            Label::RightEssential => "sigma_re",
            Label::OuterBoundary => "outer_boundary",
        }
    }
}

/// Finite union of primitives, labeled by which spectrum it depicts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralPicture {
    pub label: Label,
    pub primitives: Vec<Primitive>,
}

impl SpectralPicture {
    pub fn new(label: Label, primitives: Vec<Primitive>) -> Result<Self> {
        for p in &primitives {
            p.z1.validate()?;
            p.z2.validate()?;
        }
        Ok(Self { label, primitives }.normal_form())
    }

    pub fn empty(label: Label) -> Self {
        Self {
            label,
            primitives: Vec::new(),
        }
    }

    /// Sorted, with duplicates and primitives contained in others removed.
    pub fn normal_form(&self) -> Self {
        let mut prims: Vec<Primitive> = self
            .primitives
            .iter()
            .map(|p| Primitive::new(p.z1, p.z2))
            .collect();
        prims.sort_by(Primitive::cmp_key);
        prims.dedup_by(|a, b| a.approx_eq(b));
        let kept: Vec<Primitive> = prims
            .iter()
            .enumerate()
            .filter(|(i, p)| {
                !prims
                    .iter()
                    .enumerate()
                    .any(|(j, q)| *i != j && p.is_subset_of(q) && !q.is_subset_of(p))
            })
            .map(|(_, p)| *p)
            .collect();
        Self {
            label: self.label,
            primitives: kept,
        }
    }

    pub fn contains(&self, r1: f64, r2: f64) -> bool {
        self.primitives.iter().any(|p| p.contains(r1, r2))
    }

    /// Equal primitive sets after normal form (labels ignored).
    pub fn same_set_as(&self, other: &SpectralPicture) -> bool {
        let (a, b) = (self.normal_form(), other.normal_form());
        a.primitives.len() == b.primitives.len()
            && a.primitives.iter().zip(&b.primitives).all(|(x, y)| x.approx_eq(y))
    }

    /// No primitive has positive area.
    pub fn has_empty_interior(&self) -> bool {
        !self.primitives.iter().any(Primitive::has_area)
    }

    pub fn relabeled(&self, label: Label) -> Self {
        Self {
            label,
            primitives: self.primitives.clone(),
        }
    }

    /// Largest radius in each coordinate.
    pub fn extent(&self) -> (f64, f64) {
        self.primitives
            .iter()
            .fold((0.0, 0.0), |(x, y), p| (x.max(p.z1.max()), y.max(p.z2.max())))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}:\n", self.label.as_str());
        for p in &self.primitives {
            s.push_str(&format!("  {p}\n"));
        }
        s
    }
}

/// Several labeled pictures of one operator tuple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PictureSet {
    pub pictures: Vec<SpectralPicture>,
}

impl PictureSet {
    pub fn get(&self, label: Label) -> Option<&SpectralPicture> {
        self.pictures.iter().find(|p| p.label == label)
    }

    pub fn taylor(&self) -> &SpectralPicture {
        self.get(Label::Taylor).expect("every picture set carries sigma_T")
    }

    pub fn essential(&self) -> &SpectralPicture {
        self.get(Label::TaylorEssential).expect("every picture set carries sigma_Te")
    }

    pub fn to_text(&self) -> String {
        self.pictures.iter().map(SpectralPicture::to_text).collect()
    }
}

/// Spectrum, essential spectrum and index of a hyponormal unilateral shift.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OneVarPicture {
    /// `||W|| * closed disk`.
    pub spectrum: RadialSet,
    /// `||W|| * circle`.
    pub essential: RadialSet,
    /// Fredholm index on the open disk.
    pub index: i32,
}

pub fn picture_1var<T: Scalar>(shift: &UnilateralShift<T>) -> Result<OneVarPicture> {
    let h = is_hyponormal_1d(shift, NORM_SCAN);
    if !h.pass {
        return Err(Error::HypothesisViolated(format!(
            "shift is not hyponormal (weights decrease at n = {:?})",
            h.witness
        )));
    }
    let r = norm(shift)?.to_f64_lossy();
    Ok(OneVarPicture {
        spectrum: RadialSet::interval(0.0, r),
        essential: RadialSet::point(r),
        index: -1,
    })
}

fn taylor_pair(sigma_t: Vec<Primitive>, sigma_te: Vec<Primitive>) -> Result<PictureSet> {
    Ok(PictureSet {
        pictures: vec![
            SpectralPicture::new(Label::Taylor, sigma_t)?,
            SpectralPicture::new(Label::TaylorEssential, sigma_te)?,
        ],
    })
}

/// Closed form for row 0 over identical rows `j >= 1`, norms `a0 > a1`, and
/// column norm `c`.
fn compactper_closed_form(a0: f64, a1: f64, c: f64) -> Result<PictureSet> {
    let i = RadialSet::interval;
    let p = RadialSet::point;
    taylor_pair(
        vec![Primitive::new(i(0.0, a1), i(0.0, c)), Primitive::new(i(0.0, a0), p(0.0))],
        vec![
            Primitive::new(i(0.0, a1), p(c)),
            Primitive::new(p(a1), i(0.0, c)),
            Primitive::new(p(a0), p(0.0)),
        ],
    )
}

/// Taylor and essential Taylor spectra when every row above row 0 is the same
/// shift, strictly smaller in norm than row 0.
pub fn picture_thm_compactper<T: Scalar>(d: &WeightDiagram2D<T>) -> Result<PictureSet> {
    match d.family() {
        Family::ThmCompactPer { .. } | Family::ExampleBergman | Family::ThmKhypo { .. } => {}
        other => {
            return Err(Error::WrongFamily {
                expected: "thm-compactper".into(),
                found: other.name().into(),
            })
        }
    }
    let rows = d.distinct_rows().unwrap_or(0);
    let a0 = norm(&horizontal_slice(d, 0)?)?;
    let a1 = norm(&horizontal_slice(d, 1)?)?;
    for j in 2..rows.max(2) + 1 {
        let aj = norm(&horizontal_slice(d, j)?)?;
        if (aj - a1).abs() > T::lit(1e-9) {
            return Err(Error::HypothesisViolated(format!("row {j} has norm {aj}, row 1 has {a1}")));
        }
    }
    if !(a1 < a0) {
        return Err(Error::HypothesisViolated(format!(
            "need ||row 1|| < ||row 0||, got {a1} and {a0}"
        )));
    }
    let c = norm(d.column0())?;
    compactper_closed_form(a0.to_f64_lossy(), a1.to_f64_lossy(), c.to_f64_lossy())
}

/// Bergman-like rows `ell_0 > ... ` over unit rows, column norm `c`.
pub fn picture_thm_important(ells: &[u32], c: f64) -> Result<PictureSet> {
    let Some(&first) = ells.first() else {
        return invalid("need at least one Bergman-like row");
    };
    if ells.iter().any(|&l| l < 1) {
        return invalid("Bergman-like indices must be >= 1");
    }
    if ells.iter().any(|&l| l > first) {
        return Err(Error::HypothesisViolated("ell_0 must be the largest index".into()));
    }
    if !(c > 0.0 && c.is_finite()) {
        return invalid("column norm must be positive");
    }
    let i = RadialSet::interval;
    let p = RadialSet::point;
    let mut te = vec![Primitive::new(i(0.0, 1.0), p(c)), Primitive::new(p(1.0), i(0.0, c))];
    te.extend(ells.iter().map(|&l| Primitive::new(p((l as f64).sqrt()), p(0.0))));
    taylor_pair(
        vec![
            Primitive::new(i(0.0, 1.0), i(0.0, c)),
            Primitive::new(i(0.0, (first as f64).sqrt()), p(0.0)),
        ],
        te,
    )
}

/// One-atom example: `sigma_T = sigma_r` is a cross of segments, every other
/// picture equals `sigma_Te`, a countable family of circles.
pub fn picture_example_exof1atom(alpha: f64, beta: f64) -> Result<PictureSet> {
    if !(0.0 < alpha && alpha < beta && beta <= 1.0) {
        return invalid(format!("need 0 < alpha < beta <= 1, got alpha={alpha}, beta={beta}"));
    }
    let i = RadialSet::interval;
    let p = RadialSet::point;
    let g = RadialSet::geometric;
    let t = SpectralPicture::new(
        Label::Taylor,
        vec![Primitive::new(i(0.0, 1.0), p(0.0)), Primitive::new(p(0.0), i(0.0, beta))],
    )?;
    let te = SpectralPicture::new(
        Label::TaylorEssential,
        vec![
            Primitive::new(p(0.0), p(0.0)),
            Primitive::new(g(1.0, alpha), p(0.0)),
            Primitive::new(p(0.0), g(beta, alpha)),
        ],
    )?;
    let mut pictures = vec![t.clone(), t.relabeled(Label::Right), te.clone()];
    for l in [Label::Left, Label::LeftEssential, Label::RightEssential] {
        pictures.push(te.relabeled(l));
    }
    Ok(PictureSet { pictures })
}

pub fn picture_thm_khypo(kappa: f64) -> Result<PictureSet> {
    if !(kappa > 1.0 && kappa.is_finite()) {
        return invalid(format!("kappa must exceed 1, got {kappa}"));
    }
    let mut set = compactper_closed_form(kappa.sqrt(), 1.0, 1.0)?;
    let re = set.essential().relabeled(Label::RightEssential);
    set.pictures.push(re);
    Ok(set)
}

/// Closed-form pictures for any diagram whose family has one.
pub fn picture_for_diagram<T: Scalar>(d: &WeightDiagram2D<T>) -> Result<PictureSet> {
    match d.family() {
        Family::ThmKhypo { kappa, .. } => picture_thm_khypo(kappa.to_f64_lossy()),
        Family::Exof1atom { alpha, beta } => picture_example_exof1atom(alpha.to_f64_lossy(), beta.to_f64_lossy()),
        Family::ThmImportant { ells, .. } => picture_thm_important(ells, norm(d.column0())?.to_f64_lossy()),
        Family::ThmCompactPer { .. } | Family::ExampleBergman => picture_thm_compactper(d),
        other => Err(Error::WrongFamily {
            expected: "a family with a closed-form picture".into(),
            found: other.name().into(),
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceNormVerdict {
    pub pass: bool,
    /// `||row j||` for `j = 0..=J`.
    pub horizontal: Vec<f64>,
    /// `||column i||` for `i = 0..=J`.
    pub vertical: Vec<f64>,
    /// First slice whose norm differs from slice 1, as `("horizontal" | "vertical", index)`.
    pub witness: Option<(String, usize)>,
}

/// Necessary condition for subnormality: all horizontal slices `j >= 1`
/// share one norm, and likewise all vertical slices `i >= 1`.
pub fn slice_norm_necessary_check<T: Scalar>(d: &WeightDiagram2D<T>, big_j: usize) -> Result<SliceNormVerdict> {
    if big_j < 2 {
        return invalid("need J >= 2");
    }
    let horizontal = (0..=big_j)
        .map(|j| norm(&horizontal_slice(d, j)?).map(|x| x.to_f64_lossy()))
        .collect::<Result<Vec<_>>>()?;
    let vertical = (0..=big_j)
        .map(|i| norm(&vertical_slice(d, i)?).map(|x| x.to_f64_lossy()))
        .collect::<Result<Vec<_>>>()?;
    let differs = |v: &[f64]| (2..v.len()).find(|&j| (v[j] - v[1]).abs() > 1e-9);
    let witness = differs(&horizontal)
        .map(|j| ("horizontal".to_string(), j))
        .or_else(|| differs(&vertical).map(|i| ("vertical".to_string(), i)));
    Ok(SliceNormVerdict {
        pass: witness.is_none(),
        horizontal,
        vertical,
        witness,
    })
}

/// Margin around 1 in the root tests.
pub const PROBE_DELTA: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Convergence {
    Converges,
    Diverges,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub outcome: Convergence,
    /// Root-test ratio of diagonal sums between `N/2` and `N`.
    pub diagonal_statistic: f64,
    /// Largest root-test ratio along a horizontal or vertical lattice ray.
    pub ray_statistic: f64,
}

fn log_sum_exp(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.collect();
    let top = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + v.iter().map(|x| (x - top).exp()).sum::<f64>().ln()
}

/// Root-test ratio from two log-terms `n` apart; `-inf` terms give 0.
fn root_ratio(log_hi: f64, log_lo: f64, gap: usize) -> f64 {
    if log_hi == f64::NEG_INFINITY {
        return 0.0;
    }
    if log_lo == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    ((log_hi - log_lo) / gap as f64).exp()
}

/// Root tests on `t_m = r1^(2 m1) r2^(2 m2) / gamma_m` over `m1 + m2 <= N`,
/// the terms of the diagonal kernel `k(z, z)`.
///
/// Converges when diagonal sums shrink geometrically (ratio below
/// `1 - delta`); diverges when some horizontal or vertical ray of terms grows
/// (ratio above `1 + delta`); otherwise undecided.
pub fn kernel_convergence_probe<T: Scalar>(d: &WeightDiagram2D<T>, r1: f64, r2: f64, n: usize) -> Result<ProbeReport> {
    if !(r1 >= 0.0 && r2 >= 0.0) {
        return invalid("radii must be nonnegative");
    }
    if n < 8 {
        return invalid("need at least 8 terms");
    }
    // log gamma over the triangle, by recurrence along rows then columns.
    let mut lg = vec![vec![0.0f64; n + 1]; n + 1];
    for i in 0..n {
        lg[0][i + 1] = lg[0][i] + 2.0 * d.alpha(i, 0).to_f64_lossy().ln();
    }
    for j in 0..n {
        let mut b = d.beta(0, j).to_f64_lossy();
        for i in 0..=(n - j - 1) {
            lg[j + 1][i] = lg[j][i] + 2.0 * b.ln();
            b = b * d.alpha(i, j + 1).to_f64_lossy() / d.alpha(i, j).to_f64_lossy();
        }
    }
    let lr = |r: f64, e: usize| if e == 0 { 0.0 } else { 2.0 * e as f64 * r.ln() };
    let term = |i: usize, j: usize| lr(r1, i) + lr(r2, j) - lg[j][i];
    let diag = |s: usize| log_sum_exp((0..=s).map(|i| term(i, s - i)));
    let half = n / 2;
    let diagonal_statistic = root_ratio(diag(n), diag(half), n - half);
    let mut ray_statistic = 0.0f64;
    for c in 0..=(n / 4).min(8) {
        let (far, mid) = (n - c, half);
        if far > mid {
            ray_statistic = ray_statistic
                .max(root_ratio(term(far, c), term(mid, c), far - mid))
                .max(root_ratio(term(c, far), term(c, mid), far - mid));
        }
    }
    let outcome = if diagonal_statistic < 1.0 - PROBE_DELTA {
        Convergence::Converges
    } else if ray_statistic > 1.0 + PROBE_DELTA {
        Convergence::Diverges
    } else {
        Convergence::Undecided
    };
    Ok(ProbeReport {
        outcome,
        diagonal_statistic,
        ray_statistic,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeftIdentity {
    /// `||(W - lambda)^(l)^{-1}||` at resolution `N`.
    pub lhs: f64,
    /// `1 / dist(lambda, unit circle)`.
    pub rhs: f64,
    pub equal: bool,
    /// Smallest singular value of the section by the independent QR path.
    pub oracle_sigma_min: f64,
    pub resolution: usize,
}

/// Compares the canonical left-inverse norm with `1 / dist(lambda, sigma_l)`
/// for a shift `(a, ..., a, 1, 1, ...)`, whose left spectrum is the unit
/// circle.
pub fn left_identity_check<T: Scalar>(shift: &UnilateralShift<T>, lambda: Complex<T>, n: usize) -> Result<LeftIdentity> {
    if shift.weights.tail() != &(TailRule::Constant { value: T::one() }) {
        return Err(Error::HypothesisViolated("shift must end in unit weights".into()));
    }
    if !is_hyponormal_1d(shift, NORM_SCAN).pass {
        return Err(Error::HypothesisViolated("shift must be hyponormal".into()));
    }
    let modulus = lambda.norm().to_f64_lossy();
    let dist = (modulus - 1.0).abs();
    if dist <= 1e-12 {
        return invalid("lambda lies on the unit circle");
    }
    let lhs = canonical_left_inverse_norm(shift, lambda, n)?.to_f64_lossy();
    let oracle_sigma_min = min_singular(&RectangularSection::new(shift, lambda, n)?)?.to_f64_lossy();
    let rhs = 1.0 / dist;
    Ok(LeftIdentity {
        lhs,
        rhs,
        equal: (lhs - rhs).abs() <= 1e-6 * rhs.max(1.0),
        oracle_sigma_min,
        resolution: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice2d::{make_example_bergman, make_example_stair, make_thm_compactper, make_thm_khypo, make_custom};
    use crate::weights1d::{make_bergman_like, make_two_atom_shift};

    fn i(lo: f64, hi: f64) -> RadialSet {
        RadialSet::interval(lo, hi)
    }
    fn p(r: f64) -> RadialSet {
        RadialSet::point(r)
    }

    #[test]
    fn radial_membership() {
        let g = RadialSet::geometric(0.8, 0.5);
        assert!(g.contains(0.8 * 0.125) && g.contains(0.0) && !g.contains(0.3) && !g.contains(1.6));
        assert!(i(0.0, 1.0).contains(1.0) && !i(0.0, 1.0).contains(1.01));
        assert_eq!(i(0.5, 0.5), p(0.5));
        assert!(g.is_subset_of(&i(0.0, 1.0)) && !g.is_subset_of(&i(0.1, 1.0)));
        assert!(RadialSet::geometric(0.4, 0.25).is_subset_of(&RadialSet::geometric(0.8, 0.5)));
    }

    #[test]
    fn normal_form_absorbs_and_sorts() {
        let pic = SpectralPicture::new(
            Label::Taylor,
            vec![
                Primitive::new(p(1.0), p(0.0)),
                Primitive::new(i(0.0, 2.0), p(0.0)),
                Primitive::new(i(0.0, 1.0), i(0.0, 1.0)),
                Primitive::new(i(0.0, 1.0), i(0.0, 1.0)),
            ],
        )
        .unwrap();
        assert_eq!(pic.primitives.len(), 2);
        let shuffled = SpectralPicture::new(Label::Taylor, pic.primitives.iter().rev().cloned().collect()).unwrap();
        assert_eq!(shuffled, pic);
    }

    #[test]
    fn one_variable_pictures() {
        let u = picture_1var(&UnilateralShift::<f64>::unilateral()).unwrap();
        assert_eq!((u.spectrum, u.essential, u.index), (i(0.0, 1.0), p(1.0), -1));
        let b2 = picture_1var(&make_bergman_like::<f64>(2).unwrap()).unwrap();
        assert!((b2.spectrum.max() - 2f64.sqrt()).abs() < 1e-15);
        let s = picture_1var(&UnilateralShift::with_constant_tail(vec![0.5], 1.0).unwrap()).unwrap();
        assert_eq!(s.spectrum, i(0.0, 1.0));
        let bad = UnilateralShift::with_constant_tail(vec![1.0], 0.5).unwrap();
        assert!(matches!(picture_1var(&bad), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn compactper_pictures() {
        let b = picture_thm_compactper(&make_example_bergman::<f64>().unwrap()).unwrap();
        let expect = SpectralPicture::new(
            Label::Taylor,
            vec![Primitive::new(i(0.0, 1.0), i(0.0, 1.0)), Primitive::new(i(0.0, 2f64.sqrt()), p(0.0))],
        )
        .unwrap();
        assert!(b.taylor().same_set_as(&expect));
        assert_eq!(component_count(b.essential()), ComponentCount::Finite(2));
        let row = make_bergman_like::<f64>(1).unwrap();
        let flat = make_thm_compactper(row.clone(), row, UnilateralShift::unilateral()).unwrap();
        assert!(matches!(picture_thm_compactper(&flat), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn khypo_agrees_with_compactper_instance() {
        let d = make_thm_khypo(2.0, 0.6).unwrap();
        let general = picture_thm_compactper(&d).unwrap();
        let closed = picture_thm_khypo(2.0).unwrap();
        assert!(general.taylor().same_set_as(closed.taylor()));
        assert!(general.essential().same_set_as(closed.essential()));
        let explicit = make_thm_compactper(
            make_two_atom_shift(2.0).unwrap(),
            UnilateralShift::unilateral(),
            UnilateralShift::with_constant_tail(vec![0.6], 1.0).unwrap(),
        )
        .unwrap();
        assert!(picture_thm_compactper(&explicit).unwrap().essential().same_set_as(closed.essential()));
    }

    #[test]
    fn khypo_limit_point_joins_square() {
        let near = picture_thm_khypo(1.0 + 1e-14).unwrap();
        assert_eq!(component_count(near.essential()), ComponentCount::Finite(1));
        assert_eq!(component_count(picture_thm_khypo(2.0).unwrap().essential()), ComponentCount::Finite(2));
    }

    #[test]
    fn important_pictures() {
        let four = picture_thm_important(&[4, 3, 2], 1.0).unwrap();
        assert_eq!(component_count(four.essential()), ComponentCount::Finite(4));
        let one = picture_thm_important(&[1], 1.0).unwrap();
        assert_eq!(component_count(one.essential()), ComponentCount::Finite(1));
        let ob = outer_boundary(four.taylor());
        assert!(!ob.same_set_as(four.essential()));
        assert!(picture_thm_important(&[2, 3], 1.0).is_err());
    }

    #[test]
    fn exof1atom_pictures() {
        let set = picture_example_exof1atom(0.5, 0.8).unwrap();
        let te = set.essential();
        for k in 0..6 {
            assert!(te.contains(0.5f64.powi(k), 0.0));
        }
        assert!(te.contains(0.0, 0.8 * 0.125));
        assert!(!te.contains(0.3, 0.0));
        assert!(set.taylor().has_empty_interior());
        assert_eq!(set.get(Label::Right).unwrap().primitives, set.taylor().primitives);
        for l in [Label::Left, Label::LeftEssential, Label::RightEssential] {
            assert!(set.get(l).unwrap().same_set_as(te));
        }
        assert_eq!(component_count(te), ComponentCount::CountablyInfinite);
        assert_eq!(component_count(set.taylor()), ComponentCount::Finite(1));
    }

    #[test]
    fn picture_json_shape() {
        let set = picture_thm_khypo(2.0).unwrap();
        let v = serde_json::to_value(set.essential()).unwrap();
        assert_eq!(v["label"], "sigma_Te");
        let prims = v["primitives"].as_array().unwrap();
        assert!(prims.iter().any(|q| q["z1"]["kind"] == "point" && q["z2"] == serde_json::json!({"kind": "point", "r": 0.0})));
        let back: SpectralPicture = serde_json::from_value(v).unwrap();
        assert_eq!(&back, set.essential());
    }

    #[test]
    fn slice_norms() {
        let k = slice_norm_necessary_check(&make_thm_khypo(2.0, 0.5).unwrap(), 4).unwrap();
        assert!(k.pass);
        let b = slice_norm_necessary_check(&make_example_bergman::<f64>().unwrap(), 5).unwrap();
        assert!(b.pass);
        assert!((b.horizontal[0] - 2f64.sqrt()).abs() < 1e-9);
        assert!(b.horizontal[1..].iter().all(|&x| (x - 1.0).abs() < 1e-9));
        let bad = make_custom(vec![vec![1.0], vec![1.0], vec![2.0]], vec![1.0]).unwrap();
        let v = slice_norm_necessary_check(&bad, 3).unwrap();
        assert!(!v.pass);
        assert_eq!(v.witness, Some(("horizontal".to_string(), 2)));
        // Only the first two distinct slices matter for eventually constant rows.
        let v5 = slice_norm_necessary_check(&bad, 6).unwrap();
        assert_eq!(v5.pass, v.pass);
    }

    #[test]
    fn kernel_probe_examples() {
        let d = make_example_bergman::<f64>().unwrap();
        assert_eq!(kernel_convergence_probe(&d, 1.2, 0.0, 200).unwrap().outcome, Convergence::Converges);
        assert_eq!(kernel_convergence_probe(&d, 1.2, 0.5, 200).unwrap().outcome, Convergence::Diverges);
        assert_eq!(kernel_convergence_probe(&d, 0.0, 0.0, 50).unwrap().outcome, Convergence::Converges);
        let s = make_example_stair(0.5).unwrap();
        assert_eq!(kernel_convergence_probe(&s, 0.0, 0.0, 20).unwrap().outcome, Convergence::Converges);
    }

    #[test]
    fn left_identity_examples() {
        let s = UnilateralShift::with_constant_tail(vec![0.5], 1.0).unwrap();
        let r = left_identity_check(&s, Complex::new(0.0, 0.0), 200).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-9 && r.rhs == 1.0 && !r.equal);
        assert!((r.oracle_sigma_min - 0.5).abs() < 1e-10);
        let u = left_identity_check(&UnilateralShift::<f64>::unilateral(), Complex::new(0.0, 0.0), 50).unwrap();
        assert!(u.equal && (u.lhs - 1.0).abs() < 1e-12);
        let s2 = UnilateralShift::with_constant_tail(vec![0.5, 0.5], 1.0).unwrap();
        let r2 = left_identity_check(&s2, Complex::new(0.0, 0.0), 64).unwrap();
        assert!((r2.lhs - 2.0).abs() < 1e-9 && !r2.equal);
        assert!(left_identity_check(&s, Complex::new(0.6, 0.8), 20).is_err());
        assert!(left_identity_check(&make_bergman_like::<f64>(1).unwrap(), Complex::new(0.0, 0.0), 20).is_err());
    }
}
