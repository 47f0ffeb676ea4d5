//! Two-variable weight diagrams on the lattice `Z_+^2`.
//!
//! A commuting pair `T_1 e_m = alpha_m e_{m+e1}`, `T_2 e_m = beta_m e_{m+e2}`
//! must satisfy `beta(m+e1) alpha(m) = alpha(m+e2) beta(m)`. Diagrams store the
//! rows of `alpha` and column 0 of `beta`; every other `beta` is derived from
//! that identity, so an inconsistent diagram cannot be built.

use std::fmt::Write as _;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;
use crate::weights1d::{
    make_bergman_like, make_two_atom_shift, ShiftLabel, TailRule, UnilateralShift, WeightSequence,
    NORM_SCAN,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub m1: usize,
    pub m2: usize,
}

impl LatticePoint {
    pub const ORIGIN: Self = Self { m1: 0, m2: 0 };
    pub const E1: Self = Self { m1: 1, m2: 0 };
    pub const E2: Self = Self { m1: 0, m2: 1 };

    pub const fn new(m1: usize, m2: usize) -> Self {
        Self { m1, m2 }
    }

    pub fn degree(self) -> usize {
        self.m1 + self.m2
    }
}

impl Add for LatticePoint {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.m1 + o.m1, self.m2 + o.m2)
    }
}

/// Family tag and parameters; this is also the diagram's JSON form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params")]
pub enum Family<T> {
    /// Row 0, a common row for every `j >= 1`, and column 0 of `beta`.
    #[serde(rename = "thm-compactper")]
    ThmCompactPer {
        row0: UnilateralShift<T>,
        row1: UnilateralShift<T>,
        col0: UnilateralShift<T>,
    },
    #[serde(rename = "example-bergman")]
    ExampleBergman,
    /// `alpha(i, j) = alpha^j`, `beta(i, j) = alpha^i beta`.
    #[serde(rename = "exof1atom")]
    Exof1atom { alpha: T, beta: T },
    /// Rows `B_+^(ell_j)` for `j < k`, then `U_+`; column 0 given.
    #[serde(rename = "thm-important")]
    ThmImportant {
        ells: Vec<u32>,
        col: UnilateralShift<T>,
    },
    /// `alpha(i, j) = a` below the diagonal staircase, 1 elsewhere.
    #[serde(rename = "stair")]
    Stair { a: T },
    /// Row 0 is `W_kappa`, later rows `U_+`, `beta(0, 0) = y0`.
    #[serde(rename = "thm-khypo")]
    ThmKhypo { kappa: T, y0: T },
    /// Explicit finite table: row `j` lists `alpha(0.., j)` and the last
    /// entry repeats forever; the last row repeats upward. `col0` likewise.
    #[serde(rename = "custom")]
    Custom { rows: Vec<Vec<T>>, col0: Vec<T> },
}

impl<T> Family<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Family::ThmCompactPer { .. } => "thm-compactper",
            Family::ExampleBergman => "example-bergman",
            Family::Exof1atom { .. } => "exof1atom",
            Family::ThmImportant { .. } => "thm-important",
            Family::Stair { .. } => "stair",
            Family::ThmKhypo { .. } => "thm-khypo",
            Family::Custom { .. } => "custom",
        }
    }
}

/// How rows of `alpha` are generated.
#[derive(Clone, Debug, PartialEq)]
enum Rows<T> {
    /// Row `j` is `rows[min(j, len - 1)]`.
    Listed(Vec<UnilateralShift<T>>),
    /// Row `j` is the constant shift with weight `ratio^j`.
    Geometric { ratio: T },
    /// Row `j` is `shift(a, ..., a, 1, 1, ...)` with `j` leading `a`s.
    Stair { a: T },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "Family<T>", try_from = "Family<T>")]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct WeightDiagram2D<T: Scalar> {
    family: Family<T>,
    rows: Rows<T>,
    col0: UnilateralShift<T>,
}

impl<T: Scalar> From<WeightDiagram2D<T>> for Family<T> {
    fn from(d: WeightDiagram2D<T>) -> Self {
        d.family
    }
}

impl<T: Scalar> TryFrom<Family<T>> for WeightDiagram2D<T> {
    type Error = Error;
    fn try_from(f: Family<T>) -> Result<Self> {
        WeightDiagram2D::from_family(f)
    }
}

/// First index where the column fails to increase: strictly on `n < strict`,
/// and up to rounding on the rest of the first [`NORM_SCAN`] weights, where
/// convergent tails flatten below machine precision.
fn increase_failure<T: Scalar>(s: &UnilateralShift<T>, strict: usize) -> Option<usize> {
    let slack = T::lit(1e-12);
    (0..NORM_SCAN).find(|&n| {
        let (a, b) = (s.weight(n), s.weight(n + 1));
        if n < strict {
            !(a < b)
        } else {
            a > b + slack * b
        }
    })
}

impl<T: Scalar> WeightDiagram2D<T> {
    /// Rebuilds a diagram from its family description, re-running every check.
    pub fn from_family(f: Family<T>) -> Result<Self> {
        match f {
            Family::ThmCompactPer { row0, row1, col0 } => {
                make_thm_compactper(row0.revalidated()?, row1.revalidated()?, col0.revalidated()?)
            }
            Family::ExampleBergman => make_example_bergman(),
            Family::Exof1atom { alpha, beta } => make_example_exof1atom(alpha, beta),
            Family::ThmImportant { ells, col } => make_thm_important(&ells, col.revalidated()?),
            Family::Stair { a } => make_example_stair(a),
            Family::ThmKhypo { kappa, y0 } => make_thm_khypo(kappa, y0),
            Family::Custom { rows, col0 } => make_custom(rows, col0),
        }
    }

    pub fn family(&self) -> &Family<T> {
        &self.family
    }

    /// Weight of `T_1` at `(i, j)`.
    pub fn alpha(&self, i: usize, j: usize) -> T {
        match &self.rows {
            Rows::Listed(rows) => rows[j.min(rows.len() - 1)].weight(i),
            Rows::Geometric { ratio } => ratio.powi(j as i32),
            Rows::Stair { a } => {
                if i < j {
                    *a
                } else {
                    T::one()
                }
            }
        }
    }

    /// Weight of `T_2` at `(i, j)`: `beta(0, j) * prod_{l<i} alpha(l, j+1) / alpha(l, j)`.
    pub fn beta(&self, i: usize, j: usize) -> T {
        let b0 = self.col0.weight(j);
        match &self.rows {
            Rows::Listed(rows) if j + 1 >= rows.len() => b0,
            Rows::Geometric { ratio } => b0 * ratio.powi(i as i32),
            _ => (0..i).fold(b0, |acc, l| acc * self.alpha(l, j + 1) / self.alpha(l, j)),
        }
    }

    pub fn alpha_at(&self, m: LatticePoint) -> T {
        self.alpha(m.m1, m.m2)
    }

    pub fn beta_at(&self, m: LatticePoint) -> T {
        self.beta(m.m1, m.m2)
    }

    /// Column 0 of `beta` as a shift, `W_beta`.
    pub fn column0(&self) -> &UnilateralShift<T> {
        &self.col0
    }

    /// Number of leading rows that may differ; every later row repeats the last.
    pub fn distinct_rows(&self) -> Option<usize> {
        match &self.rows {
            Rows::Listed(rows) => Some(rows.len()),
            _ => None,
        }
    }

    /// `(sup alpha, sup beta)`: declared for listed rows, scanned over the
    /// first [`NORM_SCAN`] columns for the derived part of `beta`.
    pub fn declared_norms(&self) -> (T, T) {
        match &self.rows {
            Rows::Listed(rows) => {
                let a = rows
                    .iter()
                    .fold(T::zero(), |acc, r| acc.max(r.declared_sup()));
                let mut b = self.col0.declared_sup();
                for j in 0..rows.len().saturating_sub(1) {
                    let mut beta = self.col0.weight(j);
                    for i in 0..NORM_SCAN {
                        beta = beta * self.alpha(i, j + 1) / self.alpha(i, j);
                        b = b.max(beta);
                    }
                }
                (a, b)
            }
            Rows::Geometric { .. } | Rows::Stair { .. } => (T::one(), self.col0.declared_sup()),
        }
    }
}

fn diagram<T: Scalar>(family: Family<T>, rows: Rows<T>, col0: UnilateralShift<T>) -> WeightDiagram2D<T> {
    let d = WeightDiagram2D { family, rows, col0 };
    debug_assert!(commutativity_defect(&d, 8, 8) <= T::lit(1e-12).max(T::epsilon() * T::lit(64.0)));
    d
}

/// Rows `j >= 1` repeat `row1`; `beta(i, 0)` is forced by commutativity.
pub fn make_thm_compactper<T: Scalar>(
    row0: UnilateralShift<T>,
    row1: UnilateralShift<T>,
    col0: UnilateralShift<T>,
) -> Result<WeightDiagram2D<T>> {
    let family = Family::ThmCompactPer {
        row0: row0.clone(),
        row1: row1.clone(),
        col0: col0.clone(),
    };
    Ok(diagram(family, Rows::Listed(vec![row0, row1]), col0))
}

fn example_bergman_row0<T: Scalar>() -> UnilateralShift<T> {
    // sqrt((2n + 1) / (n + 1)) increases to sqrt(2).
    let tail = TailRule::Rational {
        slope: T::lit(2.0),
        intercept: T::one(),
        pole: T::one(),
    };
    let w = WeightSequence::new(Vec::new(), tail, T::lit(2.0).sqrt()).expect("valid rational rule");
    UnilateralShift::new(w, ShiftLabel::Custom)
}

/// Row 0 `sqrt((2n+1)/(n+1))`, Bergman rows above, `beta(0, 0) = sqrt(1/2)`,
/// unit `beta` on every row `j >= 1`.
pub fn make_example_bergman<T: Scalar>() -> Result<WeightDiagram2D<T>> {
    let col0 = UnilateralShift::with_constant_tail(vec![T::lit(0.5).sqrt()], T::one())?;
    let rows = vec![example_bergman_row0(), make_bergman_like(1)?];
    Ok(diagram(Family::ExampleBergman, Rows::Listed(rows), col0))
}

pub fn make_example_exof1atom<T: Scalar>(alpha: T, beta: T) -> Result<WeightDiagram2D<T>> {
    if !(T::zero() < alpha && alpha < beta && beta <= T::one()) {
        return invalid(format!("need 0 < alpha < beta <= 1, got alpha={alpha}, beta={beta}"));
    }
    let col0 = UnilateralShift::with_constant_tail(Vec::new(), beta)?;
    Ok(diagram(
        Family::Exof1atom { alpha, beta },
        Rows::Geometric { ratio: alpha },
        col0,
    ))
}

/// Rows `B_+^(ell_0), ..., B_+^(ell_{k-1})`, then `U_+`, over a strictly
/// increasing column `col`.
pub fn make_thm_important<T: Scalar>(
    ells: &[u32],
    col: UnilateralShift<T>,
) -> Result<WeightDiagram2D<T>> {
    if ells.is_empty() {
        return invalid("need at least one Bergman-like row");
    }
    let strict = col.weights.head().len() + ells.len() + 4;
    if let Some(n) = increase_failure(&col, strict) {
        return Err(Error::HypothesisViolated(format!(
            "column weights must increase strictly; beta_{n} >= beta_{}",
            n + 1
        )));
    }
    let mut rows = ells
        .iter()
        .map(|&l| make_bergman_like(l as i64))
        .collect::<Result<Vec<_>>>()?;
    rows.push(UnilateralShift::unilateral());
    let family = Family::ThmImportant {
        ells: ells.to_vec(),
        col: col.clone(),
    };
    Ok(diagram(family, Rows::Listed(rows), col))
}

pub fn make_example_stair<T: Scalar>(a: T) -> Result<WeightDiagram2D<T>> {
    if !(T::zero() < a && a < T::one()) {
        return invalid(format!("stair parameter must lie in (0, 1), got {a}"));
    }
    Ok(diagram(
        Family::Stair { a },
        Rows::Stair { a },
        UnilateralShift::unilateral(),
    ))
}

pub fn make_thm_khypo<T: Scalar>(kappa: T, y0: T) -> Result<WeightDiagram2D<T>> {
    if !(T::zero() < y0 && y0 <= T::one()) {
        return invalid(format!("need 0 < y0 <= 1, got {y0}"));
    }
    let row0 = make_two_atom_shift(kappa)?;
    let col0 = UnilateralShift::with_constant_tail(vec![y0], T::one())?;
    let rows = vec![row0, UnilateralShift::unilateral()];
    Ok(diagram(Family::ThmKhypo { kappa, y0 }, Rows::Listed(rows), col0))
}

fn table_shift<T: Scalar>(entries: &[T], what: &str) -> Result<UnilateralShift<T>> {
    match entries.split_last() {
        Some((&last, head)) => UnilateralShift::with_constant_tail(head.to_vec(), last),
        None => invalid(format!("{what} must list at least one weight")),
    }
}

/// Diagram from an explicit table; see [`Family::Custom`].
pub fn make_custom<T: Scalar>(rows: Vec<Vec<T>>, col0: Vec<T>) -> Result<WeightDiagram2D<T>> {
    if rows.is_empty() {
        return invalid("custom diagram needs at least one row");
    }
    let shifts = rows
        .iter()
        .enumerate()
        .map(|(j, r)| table_shift(r, &format!("row {j}")))
        .collect::<Result<Vec<_>>>()?;
    let col = table_shift(&col0, "column 0")?;
    Ok(diagram(Family::Custom { rows, col0 }, Rows::Listed(shifts), col))
}

/// Largest relative defect of the commutativity identity over `m1 < n1`, `m2 < n2`.
pub fn commutativity_defect<T: Scalar>(d: &WeightDiagram2D<T>, n1: usize, n2: usize) -> T {
    let mut worst = T::zero();
    for j in 0..n2 {
        let mut b = d.beta(0, j);
        for i in 0..n1 {
            let b_next = d.beta(i + 1, j);
            let lhs = b_next * d.alpha(i, j);
            let rhs = d.alpha(i, j + 1) * b;
            let scale = T::one().max(lhs.abs()).max(rhs.abs());
            worst = worst.max((lhs - rhs).abs() / scale);
            b = b_next;
        }
    }
    worst
}

/// `j`-th horizontal slice: weights `alpha(., j)`.
pub fn horizontal_slice<T: Scalar>(d: &WeightDiagram2D<T>, j: usize) -> Result<UnilateralShift<T>> {
    match &d.rows {
        Rows::Listed(rows) => Ok(rows[j.min(rows.len() - 1)].clone()),
        Rows::Geometric { ratio } => UnilateralShift::with_constant_tail(Vec::new(), ratio.powi(j as i32)),
        Rows::Stair { a } => UnilateralShift::with_constant_tail(vec![*a; j], T::one()),
    }
}

/// `i`-th vertical slice: weights `beta(i, .)`.
pub fn vertical_slice<T: Scalar>(d: &WeightDiagram2D<T>, i: usize) -> Result<UnilateralShift<T>> {
    match &d.rows {
        Rows::Listed(rows) => {
            // beta(i, n) = beta(0, n) once rows n and n+1 coincide.
            let head_len = rows.len().max(d.col0.weights.head().len());
            let head = (0..head_len).map(|n| d.beta(i, n)).collect();
            let w = WeightSequence::with_tail(head, d.col0.weights.tail().clone())?;
            Ok(UnilateralShift::new(w, ShiftLabel::Custom))
        }
        Rows::Geometric { ratio } => {
            UnilateralShift::with_constant_tail(Vec::new(), d.col0.weight(0) * ratio.powi(i as i32))
        }
        Rows::Stair { a } => UnilateralShift::with_constant_tail(vec![*a; i], T::one()),
    }
}

/// `gamma_m` along the staircase path: all `e1` steps on row 0, then `e2` steps up column `m1`.
pub fn gamma2d<T: Scalar>(d: &WeightDiagram2D<T>, m: LatticePoint) -> T {
    let mut g = T::one();
    for i in 0..m.m1 {
        let a = d.alpha(i, 0);
        g *= a * a;
    }
    for j in 0..m.m2 {
        let b = d.beta(m.m1, j);
        g *= b * b;
    }
    debug_assert!({
        let other = gamma_reverse(d, m);
        (g - other).abs() <= T::lit(1e-10).max(T::epsilon() * T::lit(1e4)) * g.abs().max(other.abs()).max(T::min_positive_value())
    });
    g
}

fn gamma_reverse<T: Scalar>(d: &WeightDiagram2D<T>, m: LatticePoint) -> T {
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

/// `ln gamma_m`, immune to overflow for large lattice points.
pub fn log_gamma2d<T: Scalar>(d: &WeightDiagram2D<T>, m: LatticePoint) -> T {
    let two = T::lit(2.0);
    let row: T = (0..m.m1).fold(T::zero(), |acc, i| acc + two * d.alpha(i, 0).ln());
    (0..m.m2).fold(row, |acc, j| acc + two * d.beta(m.m1, j).ln())
}

/// Moments `gamma_m` for `m1 <= n1`, `m2 <= n2`, built by recurrence.
#[derive(Clone, Debug, PartialEq)]
pub struct Moments2D<T> {
    n1: usize,
    n2: usize,
    table: Vec<T>,
}

impl<T: Scalar> Moments2D<T> {
    pub fn new(d: &WeightDiagram2D<T>, n1: usize, n2: usize) -> Self {
        let w = n1 + 1;
        let mut table = vec![T::zero(); w * (n2 + 1)];
        let mut g = T::one();
        for i in 0..=n1 {
            table[i] = g;
            let a = d.alpha(i, 0);
            g *= a * a;
        }
        for j in 0..n2 {
            let mut b = d.beta(0, j);
            for i in 0..=n1 {
                table[(j + 1) * w + i] = table[j * w + i] * b * b;
                b = b * d.alpha(i, j + 1) / d.alpha(i, j);
            }
        }
        Self { n1, n2, table }
    }

    pub fn gamma(&self, m: LatticePoint) -> T {
        assert!(m.m1 <= self.n1 && m.m2 <= self.n2, "lattice point outside moment table");
        self.table[m.m2 * (self.n1 + 1) + m.m1]
    }

    pub fn extent(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }
}

/// Diagonal of the operator `B` whose compactness drives the picture of a
/// diagram with equal rows above row 0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompactnessWitness<T> {
    pub entries: Vec<T>,
    pub tol: T,
    /// The last entry is below `tol`.
    pub decays: bool,
}

/// First `n` entries of `beta_0 * prod_{l<i} alpha(l, 1) / alpha(l, 0)`.
pub fn compactness_witness<T: Scalar>(
    d: &WeightDiagram2D<T>,
    n: usize,
    tol: T,
) -> Result<CompactnessWitness<T>> {
    match d.family {
        Family::ThmCompactPer { .. } | Family::ExampleBergman | Family::ThmKhypo { .. } => {}
        _ => {
            return Err(Error::WrongFamily {
                expected: "thm-compactper".into(),
                found: d.family.name().into(),
            })
        }
    }
    let mut entries = Vec::with_capacity(n);
    let mut b = d.beta(0, 0);
    for i in 0..n {
        entries.push(b);
        b = b * d.alpha(i, 1) / d.alpha(i, 0);
    }
    let decays = entries.last().is_some_and(|&e| e < tol);
    Ok(CompactnessWitness { entries, tol, decays })
}

/// Weight table with rows printed top to bottom from `j = n2 - 1` down to 0.
///
/// Each row line lists `alpha(i, j)`; the line above it lists `beta(i, j)`,
/// the weights leading up to row `j + 1`.
pub fn weight_table_text<T: Scalar>(d: &WeightDiagram2D<T>, n1: usize, n2: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} ({} x {})", d.family.name(), n1, n2);
    for j in (0..n2).rev() {
        let betas: Vec<String> = (0..n1).map(|i| format!("{:>10.6}", d.beta(i, j).to_f64_lossy())).collect();
        let _ = writeln!(out, "  b j={:<3}| {}", j, betas.join(" "));
        let alphas: Vec<String> = (0..n1).map(|i| format!("{:>10.6}", d.alpha(i, j).to_f64_lossy())).collect();
        let _ = writeln!(out, "  a j={:<3}| {}", j, alphas.join(" "));
    }
    out
}

pub fn diagram_to_json<T: Scalar>(d: &WeightDiagram2D<T>) -> serde_json::Value {
    serde_json::to_value(d).expect("diagram serializes")
}

pub fn diagram_from_json<T: Scalar>(s: &str) -> Result<WeightDiagram2D<T>> {
    let f: Family<T> = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    WeightDiagram2D::from_family(f)
}
