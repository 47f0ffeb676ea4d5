//! Primary-versus-oracle comparison suites for `oracle compare`.

use num_complex::Complex;
use serde_json::{json, Value};
use wshift::lattice2d::{
    gamma2d, make_example_bergman, make_example_exof1atom, make_example_stair, make_thm_compactper,
    make_thm_important, make_thm_khypo, LatticePoint,
};
use wshift::measures::{AtomicMeasure1D, DensityFamily, DensityMeasure1D, Measure1D};
use wshift::oracle::{backend_agreement, gamma_bruteforce, measure_moment_match, min_singular, perturbed_moment_matrices, RectangularSection};
use wshift::positivity::{column_shift, ColumnChoice, PSD_TOL};
use wshift::weights1d::{make_bergman_like, make_two_atom_shift, section_sigma_min};
use wshift::{UnilateralShiftF64, WeightDiagram};

pub const SUITES: [&str; 5] = ["sections", "gamma", "psd", "moments", "all"];

/// Seed for the randomized PSD suite.
pub const PSD_SEED: u64 = 7;

type Cases = Result<Vec<Value>, String>;

fn err(e: wshift::Error) -> String {
    e.to_string()
}

fn sections() -> Cases {
    let shifts: Vec<(&str, UnilateralShiftF64)> = vec![
        ("unilateral", UnilateralShiftF64::unilateral()),
        ("bergman", make_bergman_like(1).map_err(err)?),
        ("two-atom-2", make_two_atom_shift(2.0).map_err(err)?),
        ("half-then-one", UnilateralShiftF64::with_constant_tail(vec![0.5], 1.0).map_err(err)?),
        ("halves-then-one", UnilateralShiftF64::with_constant_tail(vec![0.5, 0.5], 1.0).map_err(err)?),
    ];
    let lambdas = [Complex::new(0.0, 0.0), Complex::new(0.5, 0.0), Complex::new(0.3, 0.4), Complex::new(1.7, 0.0)];
    let mut cases = Vec::new();
    for (name, s) in &shifts {
        for lam in lambdas {
            for n in [8usize, 64] {
                let primary = section_sigma_min(s, lam, n).map_err(err)?;
                let oracle = min_singular(&RectangularSection::new(s, lam, n).map_err(err)?).map_err(err)?;
                let gap = (primary - oracle).abs();
                cases.push(json!({
                    "name": format!("sections/{name}/lambda={}{:+}i/N={n}", lam.re, lam.im),
                    "primary": primary,
                    "oracle": oracle,
                    "gap": gap,
                    "pass": gap <= 1e-10,
                }));
            }
        }
    }
    Ok(cases)
}

/// One diagram per family, with parameters matching the worked examples.
pub fn family_instances() -> Result<Vec<(&'static str, WeightDiagram)>, String> {
    let important_col = column_shift(ColumnChoice::StaggeredAtoms { c: 1.0, t: 0.01 }, 3).map_err(err)?;
    Ok(vec![
        (
            "thm-compactper",
            make_thm_compactper(
                make_bergman_like(2).map_err(err)?,
                make_bergman_like(1).map_err(err)?,
                UnilateralShiftF64::unilateral(),
            )
            .map_err(err)?,
        ),
        ("example-bergman", make_example_bergman().map_err(err)?),
        ("exof1atom", make_example_exof1atom(0.5, 0.8).map_err(err)?),
        ("thm-important", make_thm_important(&[8, 7, 2], important_col).map_err(err)?),
        ("stair", make_example_stair(0.5).map_err(err)?),
        ("thm-khypo", make_thm_khypo(2.0, 0.5f64.sqrt()).map_err(err)?),
    ])
}

fn gamma() -> Cases {
    let mut cases = Vec::new();
    for (name, d) in family_instances()? {
        let mut worst = 0.0f64;
        for m2 in 0..30 {
            for m1 in 0..30 {
                let m = LatticePoint::new(m1, m2);
                let (a, b) = (gamma2d(&d, m), gamma_bruteforce(&d, m));
                let scale = a.abs().max(b.abs());
                if scale > 0.0 {
                    worst = worst.max((a - b).abs() / scale);
                }
            }
        }
        cases.push(json!({
            "name": format!("gamma/{name}/30x30"),
            "worst_relative_gap": worst,
            "pass": worst <= 1e-12,
        }));
    }
    Ok(cases)
}

fn psd() -> Cases {
    let matrices = perturbed_moment_matrices(PSD_SEED, 200).map_err(err)?;
    matrices
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let v = backend_agreement(m, PSD_TOL).map_err(err)?;
            Ok(json!({
                "name": format!("psd/{i}"),
                "cholesky_psd": v.cholesky_psd,
                "jacobi_psd": v.jacobi_psd,
                "jacobi_lambda_min": v.jacobi_lambda_min,
                "pass": v.agree,
            }))
        })
        .collect()
}

fn moments() -> Cases {
    let two = make_two_atom_shift(2.0).map_err(err)?;
    let xi2: Measure1D<f64> = AtomicMeasure1D::two_atom(2.0).map_err(err)?.into();
    let b2 = make_bergman_like(2).map_err(err)?;
    let dens: Measure1D<f64> = DensityMeasure1D::new(DensityFamily::Bergman2).into();
    let unit = UnilateralShiftF64::unilateral();
    let delta2: Measure1D<f64> = AtomicMeasure1D::dirac(2.0).map_err(err)?.into();
    let runs = [
        ("moments/two-atom-2", &two, &xi2, 30usize, 1e-12, true),
        ("moments/bergman-like-2", &b2, &dens, 10, 1e-8, true),
        ("moments/unilateral-vs-dirac-2", &unit, &delta2, 5, 1e-12, false),
    ];
    runs.iter()
        .map(|&(name, s, mu, n, tol, expect)| {
            let r = measure_moment_match(s, mu, n, tol).map_err(err)?;
            Ok(json!({
                "name": name,
                "match": r.pass,
                "expected_match": expect,
                "first_mismatch": r.first_mismatch,
                "worst": r.worst,
                "pass": r.pass == expect,
            }))
        })
        .collect()
}

/// Runs a suite; the report passes iff every case does.
pub fn run(suite: &str) -> Result<Value, String> {
    let cases = match suite {
        "sections" => sections()?,
        "gamma" => gamma()?,
        "psd" => psd()?,
        "moments" => moments()?,
        "all" => {
            let mut v = sections()?;
            v.extend(gamma()?);
            v.extend(psd()?);
            v.extend(moments()?);
            v
        }
        other => return Err(format!("unknown suite {other}; choose one of {}", SUITES.join(", "))),
    };
    let pass = cases.iter().all(|c| c["pass"] == Value::Bool(true));
    Ok(json!({ "suite": suite, "pass": pass, "cases": cases }))
}
