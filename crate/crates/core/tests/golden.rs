//! Recorded reference values, each re-derived here before comparison.

use num_complex::Complex;
use serde_json::Value;
use wshift::lattice2d::make_thm_important;
use wshift::oracle::{min_singular, psd_bruteforce, RectangularSection};
use wshift::positivity::{column_shift, search_thm_important_params, two_var_moment_matrix, ColumnChoice, Region, PSD_TOL};
use wshift::spectra::left_identity_check;
use wshift::{UnilateralShiftF64, WeightDiagram};

fn golden(name: &str) -> Value {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn important_search_reproduces_recorded_candidate() {
    let g = golden("important_search_k2_r30.json");
    let k = g["k"].as_u64().unwrap() as usize;
    let size = g["region"].as_u64().unwrap() as usize;
    let hit = search_thm_important_params::<f64>(k, size, PSD_TOL).unwrap().expect("search finds a candidate");
    let ells: Vec<u32> = serde_json::from_value(g["ells"].clone()).unwrap();
    assert_eq!(hit.ells, ells);
    assert_eq!(serde_json::to_value(hit.column).unwrap(), g["column"]);
    assert!(hit.verdict.passed());

    // Independent check of the recorded diagram with the Jacobi backend.
    let choice = ColumnChoice::StaggeredAtoms {
        c: g["column"]["c"].as_f64().unwrap(),
        t: g["column"]["t"].as_f64().unwrap(),
    };
    let d: WeightDiagram = make_thm_important(&ells, column_shift(choice, k).unwrap()).unwrap();
    for m in Region::square(size).points() {
        let mm = two_var_moment_matrix(&d, m, 1);
        let lam = psd_bruteforce(&mm).unwrap();
        assert!(lam >= -PSD_TOL * mm.trace().max(1.0), "Jacobi finds {lam:e} at {m:?}");
    }
}

#[test]
fn search_fails_on_the_simple_grid_alone() {
    // The first pass alone, (k, ..., 1) over geometric-cap columns, never passes.
    let d: WeightDiagram = make_thm_important(&[2, 1], column_shift(ColumnChoice::GeometricCap { c: 1.0, r: 0.5 }, 2).unwrap()).unwrap();
    let v = wshift::positivity::is_hyponormal_pair(&d, Region::square(8), PSD_TOL).unwrap();
    assert!(!v.passed());
    assert!(v.witness.unwrap().m.degree() <= 16);
}

#[test]
fn left_inverse_of_two_halves() {
    let g = golden("left_inverse_halves.json");
    let head: Vec<f64> = serde_json::from_value(g["head"].clone()).unwrap();
    let s = UnilateralShiftF64::with_constant_tail(head, 1.0).unwrap();
    let zero = Complex::new(0.0, 0.0);
    for n in g["resolutions"].as_array().unwrap() {
        let n = n.as_u64().unwrap() as usize;
        let sigma = min_singular(&RectangularSection::new(&s, zero, n).unwrap()).unwrap();
        assert!((sigma - g["sigma_min"].as_f64().unwrap()).abs() < 1e-12, "N = {n}");
        let r = left_identity_check(&s, zero, n).unwrap();
        assert!((r.lhs - g["lhs"].as_f64().unwrap()).abs() < 1e-9);
        assert_eq!(r.rhs, g["rhs"].as_f64().unwrap());
        assert!(!r.equal);
    }
}
