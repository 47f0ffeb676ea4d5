//! Measures in the Berger-measure role: finitely atomic measures in one and
//! two variables, and the two registered Bergman densities.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature;
use crate::scalar::Scalar;
use crate::weights1d::{ShiftLabel, TailRule, UnilateralShift, WeightSequence};

/// Locations closer than this (relative to `max(1, |x|)`) are the same atom.
pub const MERGE_TOL: f64 = 1e-12;

/// Absolute error requested from density quadrature.
pub const DENSITY_TOL: f64 = 1e-10;

fn same_location<T: Scalar>(a: T, b: T) -> bool {
    (a - b).abs() <= T::lit(MERGE_TOL) * T::one().max(a.abs()).max(b.abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom1D<T> {
    #[serde(rename = "s")]
    pub location: T,
    pub mass: T,
}

/// Finitely atomic measure on `[0, inf)`, atoms sorted by location.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomicMeasure1D<T> {
    atoms: Vec<Atom1D<T>>,
}

impl<T: Scalar> AtomicMeasure1D<T> {
    /// Rejects negative locations, nonpositive masses, and repeated locations.
    pub fn new(atoms: Vec<Atom1D<T>>) -> Result<Self> {
        for a in &atoms {
            if !(a.location >= T::zero()) || !a.location.is_finite() {
                return invalid(format!("atom location must be >= 0, got {}", a.location));
            }
            if !(a.mass > T::zero()) || !a.mass.is_finite() {
                return invalid(format!("atom mass must be > 0, got {}", a.mass));
            }
        }
        let mut atoms = atoms;
        atoms.sort_by(|x, y| x.location.partial_cmp(&y.location).unwrap());
        if let Some(w) = atoms
            .windows(2)
            .find(|w| same_location(w[0].location, w[1].location))
        {
            return invalid(format!("repeated atom location {}", w[0].location));
        }
        Ok(Self { atoms })
    }

    /// Sums masses at coinciding locations and drops atoms whose mass vanishes.
    pub(crate) fn merged(pairs: impl IntoIterator<Item = (T, T)>) -> Self {
        let mut pairs: Vec<(T, T)> = pairs.into_iter().collect();
        pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let mut atoms: Vec<Atom1D<T>> = Vec::new();
        for (s, w) in pairs {
            match atoms.last_mut() {
                Some(last) if same_location(last.location, s) => last.mass += w,
                _ => atoms.push(Atom1D {
                    location: s,
                    mass: w,
                }),
            }
        }
        atoms.retain(|a| a.mass > T::zero());
        Self { atoms }
    }

    pub fn dirac(location: T) -> Result<Self> {
        Self::new(vec![Atom1D {
            location,
            mass: T::one(),
        }])
    }

    /// `(delta_1 + delta_kappa) / 2`, the Berger measure of `W_kappa`.
    pub fn two_atom(kappa: T) -> Result<Self> {
        let half = T::lit(0.5);
        Self::new(vec![
            Atom1D {
                location: T::one(),
                mass: half,
            },
            Atom1D {
                location: kappa,
                mass: half,
            },
        ])
    }

    pub fn atoms(&self) -> &[Atom1D<T>] {
        &self.atoms
    }

    pub fn total_mass(&self) -> T {
        self.atoms.iter().fold(T::zero(), |acc, a| acc + a.mass)
    }

    pub fn is_probability(&self) -> bool {
        (self.total_mass() - T::one()).abs() <= T::lit(1e-12).max(T::epsilon() * T::lit(16.0))
    }

    /// `sum mass * location^n`, with `0^0 = 1`.
    pub fn moment(&self, n: usize) -> T {
        self.atoms
            .iter()
            .fold(T::zero(), |acc, a| acc + a.mass * a.location.powi(n as i32))
    }

    pub fn support(&self) -> Vec<T> {
        self.atoms.iter().map(|a| a.location).collect()
    }

    pub fn max_location(&self) -> Option<T> {
        self.atoms.last().map(|a| a.location)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom2D<T> {
    pub s: T,
    pub t: T,
    pub mass: T,
}

/// Finitely atomic measure on the closed quadrant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomicMeasure2D<T> {
    atoms: Vec<Atom2D<T>>,
}

impl<T: Scalar> AtomicMeasure2D<T> {
    pub fn new(atoms: Vec<Atom2D<T>>) -> Result<Self> {
        for a in &atoms {
            if !(a.s >= T::zero() && a.t >= T::zero()) {
                return invalid("atom coordinates must be >= 0");
            }
            if !(a.mass > T::zero()) {
                return invalid(format!("atom mass must be > 0, got {}", a.mass));
            }
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[i + 1..]
                .iter()
                .any(|b| same_location(a.s, b.s) && same_location(a.t, b.t))
            {
                return invalid(format!("repeated atom ({}, {})", a.s, a.t));
            }
        }
        Ok(Self { atoms })
    }

    pub fn atoms(&self) -> &[Atom2D<T>] {
        &self.atoms
    }

    pub fn total_mass(&self) -> T {
        self.atoms.iter().fold(T::zero(), |acc, a| acc + a.mass)
    }

    /// `sum mass * s^m1 * t^m2`.
    pub fn moment(&self, m1: usize, m2: usize) -> T {
        self.atoms.iter().fold(T::zero(), |acc, a| {
            acc + a.mass * a.s.powi(m1 as i32) * a.t.powi(m2 as i32)
        })
    }
}

/// The two registered closed-form densities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityFamily {
    /// `ds` on `[0, 1]`: Berger measure of the Bergman shift.
    Bergman1,
    /// `s ds / (pi sqrt(2s - s^2))` on `[0, 2]`: Berger measure of `B_+^(2)`.
    Bergman2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadratureMethod {
    /// `s = 1 + sin(theta)` for `Bergman2`, which makes the integrand smooth.
    Substituted,
    /// Direct adaptive quadrature on the singular integrand; looser tolerance.
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityMeasure1D {
    pub family: DensityFamily,
}

impl DensityMeasure1D {
    pub fn new(family: DensityFamily) -> Self {
        Self { family }
    }

    pub fn support<T: Scalar>(&self) -> (T, T) {
        match self.family {
            DensityFamily::Bergman1 => (T::zero(), T::one()),
            DensityFamily::Bergman2 => (T::zero(), T::lit(2.0)),
        }
    }

    pub fn density<T: Scalar>(&self, s: T) -> T {
        let (lo, hi) = self.support::<T>();
        if s <= lo || s >= hi {
            return T::zero();
        }
        match self.family {
            DensityFamily::Bergman1 => T::one(),
            DensityFamily::Bergman2 => s / (T::PI() * (T::lit(2.0) * s - s * s).sqrt()),
        }
    }

    pub fn moment<T: Scalar>(&self, n: usize) -> Result<T> {
        self.moment_with(n, QuadratureMethod::Substituted)
    }

    pub fn moment_with<T: Scalar>(&self, n: usize, method: QuadratureMethod) -> Result<T> {
        let e = n as i32;
        let est = match (self.family, method) {
            (DensityFamily::Bergman1, _) => {
                quadrature::integrate(|s: T| s.powi(e), T::zero(), T::one(), T::lit(DENSITY_TOL), 64)?
            }
            (DensityFamily::Bergman2, QuadratureMethod::Substituted) => {
                let h = T::FRAC_PI_2();
                quadrature::integrate(
                    |th: T| (T::one() + th.sin()).powi(e + 1) / T::PI(),
                    -h,
                    h,
                    T::lit(DENSITY_TOL),
                    256,
                )?
            }
            (DensityFamily::Bergman2, QuadratureMethod::Plain) => {
                let dens = *self;
                quadrature::integrate(
                    move |s: T| s.powi(e) * dens.density(s),
                    T::zero(),
                    T::lit(2.0),
                    T::lit(1e-6),
                    20_000,
                )?
            }
        };
        Ok(est.value)
    }
}

/// A one-variable measure in either representation.
#[derive(Clone, Debug, PartialEq)]
pub enum Measure1D<T> {
    Atomic(AtomicMeasure1D<T>),
    Density(DensityMeasure1D),
}

impl<T: Scalar> From<AtomicMeasure1D<T>> for Measure1D<T> {
    fn from(m: AtomicMeasure1D<T>) -> Self {
        Measure1D::Atomic(m)
    }
}

impl<T: Scalar> From<DensityMeasure1D> for Measure1D<T> {
    fn from(m: DensityMeasure1D) -> Self {
        Measure1D::Density(m)
    }
}

/// `∫ s^n dmu`: exact sum for atomic measures, quadrature for densities.
pub fn measure_moment<T: Scalar>(mu: &Measure1D<T>, n: usize) -> Result<T> {
    match mu {
        Measure1D::Atomic(a) => Ok(a.moment(n)),
        Measure1D::Density(d) => d.moment(n),
    }
}

/// The shift whose moments are those of `mu`: `alpha_n = sqrt(gamma_{n+1} / gamma_n)`.
///
/// Weights `n < n_max` are materialized from raw moment ratios; beyond that
/// the closed-form atomic ratio rule (evaluated with the largest atom factored
/// out) takes over. Both agree to rounding.
pub fn shift_from_measure<T: Scalar>(
    mu: &AtomicMeasure1D<T>,
    n_max: usize,
) -> Result<UnilateralShift<T>> {
    if !mu.is_probability() {
        return Err(Error::NotProbability {
            total: mu.total_mass().to_f64_lossy(),
        });
    }
    let top = match mu.max_location() {
        Some(s) if s > T::zero() => s,
        _ => return invalid("measure must charge a point other than the origin"),
    };
    let atoms: Vec<(T, T)> = mu.atoms().iter().map(|a| (a.location, a.mass)).collect();
    let tail = TailRule::AtomicRatio { atoms };
    let mut head = Vec::with_capacity(n_max);
    for n in 0..n_max {
        let (g0, g1) = (mu.moment(n), mu.moment(n + 1));
        if !(g0 > T::zero() && g1 > T::zero() && g0.is_finite() && g1.is_finite()) {
            break;
        }
        head.push((g1 / g0).sqrt());
    }
    let weights = WeightSequence::new(head, tail, top.sqrt())?;
    Ok(UnilateralShift::new(weights, ShiftLabel::FromMeasure))
}

/// Push-forward of `mu` onto the first coordinate.
pub fn marginal_x<T: Scalar>(mu: &AtomicMeasure2D<T>) -> AtomicMeasure1D<T> {
    AtomicMeasure1D::merged(mu.atoms().iter().map(|a| (a.s, a.mass)))
}

/// Push-forward of `mu` onto the second coordinate.
pub fn marginal_y<T: Scalar>(mu: &AtomicMeasure2D<T>) -> AtomicMeasure1D<T> {
    AtomicMeasure1D::merged(mu.atoms().iter().map(|a| (a.t, a.mass)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Horizontal,
    Vertical,
}

/// Berger measure of the `index`-th slice of a subnormal pair with Berger measure `mu`.
///
/// Horizontal slice `j`: the `s`-marginal of `t^j dmu / gamma_{0j}`.
/// Vertical slice `i`: the `t`-marginal of `s^i dmu / gamma_{i0}`.
pub fn slice_measure<T: Scalar>(
    mu: &AtomicMeasure2D<T>,
    index: usize,
    axis: Axis,
) -> Result<AtomicMeasure1D<T>> {
    let e = index as i32;
    let weighted: Vec<(T, T)> = mu
        .atoms()
        .iter()
        .map(|a| match axis {
            Axis::Horizontal => (a.s, a.mass * a.t.powi(e)),
            Axis::Vertical => (a.t, a.mass * a.s.powi(e)),
        })
        .collect();
    let norm = weighted.iter().fold(T::zero(), |acc, p| acc + p.1);
    if !(norm > T::zero()) {
        return Err(Error::SliceUndefined { index });
    }
    Ok(AtomicMeasure1D::merged(
        weighted.into_iter().map(|(x, w)| (x, w / norm)),
    ))
}

/// Two atomic measures are mutually absolutely continuous iff they share their support.
pub fn mutually_abs_continuous<T: Scalar>(mu: &AtomicMeasure1D<T>, nu: &AtomicMeasure1D<T>) -> bool {
    let (a, b) = (mu.support(), nu.support());
    a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| same_location(*x, *y))
}

/// JSON form: `{"atoms":[{"s":..,"t":..,"mass":..}]}` or `{"density":"bergman2"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasureJson {
    Atoms { atoms: Vec<AtomJson> },
    Density { density: DensityFamily },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomJson {
    pub s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    pub mass: f64,
}

/// Either dimension, as parsed from JSON.
#[derive(Clone, Debug, PartialEq)]
pub enum ParsedMeasure {
    OneD(Measure1D<f64>),
    TwoD(AtomicMeasure2D<f64>),
}

impl MeasureJson {
    pub fn from_1d(mu: &AtomicMeasure1D<f64>) -> Self {
        MeasureJson::Atoms {
            atoms: mu
                .atoms()
                .iter()
                .map(|a| AtomJson {
                    s: a.location,
                    t: None,
                    mass: a.mass,
                })
                .collect(),
        }
    }

    pub fn from_2d(mu: &AtomicMeasure2D<f64>) -> Self {
        MeasureJson::Atoms {
            atoms: mu
                .atoms()
                .iter()
                .map(|a| AtomJson {
                    s: a.s,
                    t: Some(a.t),
                    mass: a.mass,
                })
                .collect(),
        }
    }

    /// Atoms all carrying `t` give a 2-D measure; none carrying `t` give 1-D.
    pub fn into_measure(self) -> Result<ParsedMeasure> {
        match self {
            MeasureJson::Density { density } => Ok(ParsedMeasure::OneD(Measure1D::Density(
                DensityMeasure1D::new(density),
            ))),
            MeasureJson::Atoms { atoms } => {
                let with_t: BTreeSet<bool> = atoms.iter().map(|a| a.t.is_some()).collect();
                if with_t.len() > 1 {
                    return Err(Error::Parse("atoms mix 1-D and 2-D coordinates".into()));
                }
                if with_t.contains(&true) {
                    let atoms = atoms
                        .into_iter()
                        .map(|a| Atom2D {
                            s: a.s,
                            t: a.t.unwrap_or_default(),
                            mass: a.mass,
                        })
                        .collect();
                    Ok(ParsedMeasure::TwoD(AtomicMeasure2D::new(atoms)?))
                } else {
                    let atoms = atoms
                        .into_iter()
                        .map(|a| Atom1D {
                            location: a.s,
                            mass: a.mass,
                        })
                        .collect();
                    Ok(ParsedMeasure::OneD(Measure1D::Atomic(AtomicMeasure1D::new(
                        atoms,
                    )?)))
                }
            }
        }
    }
}

pub fn parse_measure(json: &str) -> Result<ParsedMeasure> {
    let raw: MeasureJson = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    raw.into_measure()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights1d::{gamma, make_bergman_like};

    fn atom(s: f64, mass: f64) -> Atom1D<f64> {
        Atom1D { location: s, mass }
    }

    fn remark_measure(kappa: f64, y: f64) -> AtomicMeasure2D<f64> {
        // y δ_(1,1) + (ξ_κ - y δ_1) × δ_0
        AtomicMeasure2D::new(vec![
            Atom2D { s: 1.0, t: 1.0, mass: y },
            Atom2D { s: 1.0, t: 0.0, mass: 0.5 - y },
            Atom2D { s: kappa, t: 0.0, mass: 0.5 },
        ])
        .unwrap()
    }

    #[test]
    fn atomic_moments() {
        let m = AtomicMeasure1D::two_atom(2.0f64).unwrap();
        assert!((m.moment(3) - 4.5).abs() < 1e-15);
        let d = AtomicMeasure1D::dirac(1.0).unwrap();
        assert!((0..10).all(|n| d.moment(n) == 1.0));
        assert!(m.is_probability());
    }

    #[test]
    fn constructor_rejects_bad_atoms() {
        assert!(AtomicMeasure1D::new(vec![atom(1.0, 0.5), atom(1.0, 0.5)]).is_err());
        assert!(AtomicMeasure1D::new(vec![atom(-1.0, 1.0)]).is_err());
        assert!(AtomicMeasure1D::new(vec![atom(1.0, 0.0)]).is_err());
    }

    #[test]
    fn bergman2_density_moment_two() {
        let d = DensityMeasure1D::new(DensityFamily::Bergman2);
        let g: f64 = d.moment(2).unwrap();
        assert!((g - 2.5).abs() < 1e-10);
        let total: f64 = d.moment(0).unwrap();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bergman_densities_match_weight_products() {
        for (fam, ell) in [(DensityFamily::Bergman1, 1), (DensityFamily::Bergman2, 2)] {
            let d = DensityMeasure1D::new(fam);
            let b = make_bergman_like::<f64>(ell).unwrap();
            for n in 0..=10 {
                let q: f64 = d.moment(n).unwrap();
                assert!((q - gamma(&b, n)).abs() < 1e-8, "ell={ell} n={n}");
            }
        }
    }

    #[test]
    fn plain_quadrature_fallback_is_looser_but_close() {
        let d = DensityMeasure1D::new(DensityFamily::Bergman2);
        let q: f64 = d.moment_with(2, QuadratureMethod::Plain).unwrap();
        assert!((q - 2.5).abs() < 1e-4, "{q}");
    }

    #[test]
    fn shift_from_measure_examples() {
        let w = shift_from_measure(&AtomicMeasure1D::two_atom(2.0).unwrap(), 8).unwrap();
        assert!((w.weight(0) - 1.5f64.sqrt()).abs() < 1e-15);
        let u = shift_from_measure(&AtomicMeasure1D::dirac(1.0f64).unwrap(), 4).unwrap();
        assert!((0..20).all(|n| (u.weight(n) - 1.0).abs() < 1e-15));
        let m = AtomicMeasure1D::new(vec![atom(1.0, 0.5), atom(3.0, 0.5)]).unwrap();
        let s = shift_from_measure(&m, 0).unwrap();
        assert!((s.weight(1) - 2.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(s.declared_sup(), 3f64.sqrt());
        let bad = AtomicMeasure1D::new(vec![atom(1.0, 0.7)]).unwrap();
        assert!(matches!(
            shift_from_measure(&bad, 3),
            Err(Error::NotProbability { .. })
        ));
    }

    #[test]
    fn marginals() {
        let mu = remark_measure(3.0, 0.2);
        let mx = marginal_x(&mu);
        assert_eq!(mx, AtomicMeasure1D::two_atom(3.0).unwrap());
        let d = AtomicMeasure2D::new(vec![Atom2D { s: 0.3, t: 0.7, mass: 1.0 }]).unwrap();
        assert_eq!(marginal_x(&d), AtomicMeasure1D::dirac(0.3).unwrap());
        assert_eq!(marginal_y(&d), AtomicMeasure1D::dirac(0.7).unwrap());
        let flat = AtomicMeasure2D::new(vec![
            Atom2D { s: 1.0, t: 0.0, mass: 0.5 },
            Atom2D { s: 2.0, t: 0.0, mass: 0.5 },
        ])
        .unwrap();
        assert_eq!(
            marginal_x(&flat),
            AtomicMeasure1D::new(vec![atom(1.0, 0.5), atom(2.0, 0.5)]).unwrap()
        );
    }

    #[test]
    fn slices_of_the_remark_measure() {
        let mu = remark_measure(2.0, 0.3);
        let row1 = slice_measure(&mu, 1, Axis::Horizontal).unwrap();
        assert_eq!(row1, AtomicMeasure1D::dirac(1.0).unwrap());
        let row0 = slice_measure(&mu, 0, Axis::Horizontal).unwrap();
        assert_eq!(row0, AtomicMeasure1D::two_atom(2.0).unwrap());
        let single = AtomicMeasure2D::new(vec![Atom2D { s: 0.4, t: 2.0, mass: 0.25 }]).unwrap();
        for j in 0..5 {
            assert_eq!(
                slice_measure(&single, j, Axis::Horizontal).unwrap(),
                AtomicMeasure1D::dirac(0.4).unwrap()
            );
        }
        let flat = AtomicMeasure2D::new(vec![Atom2D { s: 1.0, t: 0.0, mass: 1.0 }]).unwrap();
        assert!(matches!(
            slice_measure(&flat, 1, Axis::Horizontal),
            Err(Error::SliceUndefined { index: 1 })
        ));
    }

    #[test]
    fn absolute_continuity() {
        let xi = AtomicMeasure1D::two_atom(3.0).unwrap();
        let d1 = AtomicMeasure1D::dirac(1.0).unwrap();
        assert!(!mutually_abs_continuous(&xi, &d1));
        let a = AtomicMeasure1D::new(vec![atom(1.0, 0.5), atom(2.0, 0.5)]).unwrap();
        let b = AtomicMeasure1D::new(vec![atom(1.0, 1.0 / 3.0), atom(2.0, 2.0 / 3.0)]).unwrap();
        assert!(mutually_abs_continuous(&a, &b));
        assert!(mutually_abs_continuous(&d1, &d1));
    }

    #[test]
    fn json_forms() {
        let p = parse_measure(r#"{"atoms":[{"s":1,"mass":0.5},{"s":2,"mass":0.5}]}"#).unwrap();
        assert!(matches!(p, ParsedMeasure::OneD(Measure1D::Atomic(_))));
        let p = parse_measure(r#"{"atoms":[{"s":1,"t":1,"mass":0.5},{"s":2,"t":0,"mass":0.5}]}"#)
            .unwrap();
        assert!(matches!(p, ParsedMeasure::TwoD(_)));
        let p = parse_measure(r#"{"density":"bergman2"}"#).unwrap();
        assert_eq!(
            p,
            ParsedMeasure::OneD(Measure1D::Density(DensityMeasure1D::new(
                DensityFamily::Bergman2
            )))
        );
        assert!(parse_measure(r#"{"atoms":[{"s":1,"t":1,"mass":0.5},{"s":2,"mass":0.5}]}"#).is_err());
    }
}
