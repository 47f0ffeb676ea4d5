//! `wshift`: build weight diagrams, run positivity checks, emit spectral
//! pictures, and compare primary computations with their oracles.
//!
//! Exit status: 0 on success or PASS, 1 on a mathematical FAIL, 2 on a usage
//! or input error.

mod config;
mod family;
mod json;
mod suites;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use wshift::lattice2d::{diagram_to_json, gamma2d, log_gamma2d, weight_table_text, LatticePoint};
use wshift::positivity::{is_hyponormal_pair, is_k_hyponormal, Region, PSD_TOL};
use wshift::spectra::svg::render_svg;
use wshift::spectra::{picture_example_exof1atom, picture_for_diagram, picture_thm_important, picture_thm_khypo, slice_norm_necessary_check, Label, PictureSet};

use family::{FamilyArgs, FAMILIES};

#[derive(Parser, Debug)]
#[command(name = "wshift", version, about = "Weighted shifts: diagrams, positivity checks, spectral pictures")]
struct Cli {
    /// JSON object of flag values; flags on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Known diagram families.
    Families {
        #[command(subcommand)]
        action: FamiliesAction,
    },
    /// Weight diagrams.
    Diagram {
        #[command(subcommand)]
        action: DiagramAction,
    },
    /// Positivity and subnormality checks on a finite region.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        #[command(flatten)]
        family: FamilyArgs,
        /// Scan `0..=M` in each lattice direction.
        #[arg(long, default_value_t = 10)]
        region: usize,
        /// Order of hyponormality for `khypo`.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = PSD_TOL)]
        tol: f64,
    },
    /// Closed-form spectral pictures.
    Spectrum {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
        /// Restrict JSON or text output to one picture, e.g. `sigma_Te`.
        #[arg(long)]
        picture: Option<String>,
    },
    /// Lattice moments `gamma_(m1, m2)`.
    Moments {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        m1: usize,
        #[arg(long)]
        m2: usize,
        /// `json` gives one moment, `csv` the whole table up to `(m1, m2)`.
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
    },
    /// Cross-checks against independent implementations.
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
    /// Writes the spectral-picture SVGs and weight tables of the worked examples.
    Figures {
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum FamiliesAction {
    List {
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
    },
}

#[derive(Subcommand, Debug)]
enum DiagramAction {
    Show {
        #[command(flatten)]
        family: FamilyArgs,
        /// Table extent in each direction.
        #[arg(long, default_value_t = 6)]
        region: usize,
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
    },
}

#[derive(Subcommand, Debug)]
enum OracleAction {
    Compare {
        /// One of sections, gamma, psd, moments, all.
        #[arg(long)]
        suite: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Hypo,
    Khypo,
    Subnec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Csv,
    Svg,
    Text,
}

enum Outcome {
    Pass,
    Fail,
}

fn unsupported(emit: Emit, cmd: &str) -> String {
    format!("--emit {emit:?} is not available for {cmd}").to_lowercase()
}

fn to_value<S: serde::Serialize>(x: &S) -> Result<Value, String> {
    serde_json::to_value(x).map_err(|e| e.to_string())
}

fn families(emit: Emit, out: &mut String) -> Result<Outcome, String> {
    match emit {
        Emit::Text => {
            for (name, params) in FAMILIES {
                out.push_str(&format!("{name:<16} {params}\n"));
            }
        }
        Emit::Json => {
            let v: Vec<Value> = FAMILIES.iter().map(|(n, p)| json!({"name": n, "params": p})).collect();
            out.push_str(&json::report(&Value::Array(v)));
            out.push('\n');
        }
        other => return Err(unsupported(other, "families list")),
    }
    Ok(Outcome::Pass)
}

fn check(kind: CheckKind, fam: &FamilyArgs, region: usize, k: Option<usize>, tol: f64, out: &mut String) -> Result<Outcome, String> {
    let d = fam.build()?;
    let (passed, mut v) = match kind {
        CheckKind::Hypo | CheckKind::Khypo => {
            let r = Region::square(region);
            let verdict = match (kind, k) {
                (CheckKind::Hypo, None) => is_hyponormal_pair(&d, r, tol),
                (CheckKind::Hypo, Some(_)) => return Err("--k applies to `check khypo` only".into()),
                (_, k) => is_k_hyponormal(&d, k.unwrap_or(2), r, tol),
            }
            .map_err(|e| e.to_string())?;
            (verdict.passed(), to_value(&verdict)?)
        }
        CheckKind::Subnec => {
            if k.is_some() {
                return Err("--k applies to `check khypo` only".into());
            }
            let verdict = slice_norm_necessary_check(&d, region).map_err(|e| e.to_string())?;
            (verdict.pass, to_value(&verdict)?)
        }
    };
    v["family"] = Value::String(d.family().name().into());
    out.push_str(&json::report(&v));
    out.push('\n');
    Ok(if passed { Outcome::Pass } else { Outcome::Fail })
}

fn pick(set: &PictureSet, label: Option<&str>) -> Result<Value, String> {
    match label {
        None => to_value(set),
        Some(l) => {
            let wanted: Label = serde_json::from_value(Value::String(l.into())).map_err(|_| format!("unknown picture {l}"))?;
            let p = set.get(wanted).ok_or_else(|| format!("no picture {l} for this family"))?;
            to_value(p)
        }
    }
}

fn spectrum(fam: &FamilyArgs, emit: Emit, picture: Option<&str>, out: &mut String) -> Result<Outcome, String> {
    let d = fam.build()?;
    let set = picture_for_diagram(&d).map_err(|e| e.to_string())?;
    match emit {
        Emit::Json => {
            out.push_str(&json::report(&pick(&set, picture)?));
            out.push('\n');
        }
        Emit::Text => match picture {
            None => out.push_str(&set.to_text()),
            Some(l) => {
                let v = pick(&set, Some(l))?;
                let p: wshift::spectra::SpectralPicture = serde_json::from_value(v).map_err(|e| e.to_string())?;
                out.push_str(&p.to_text());
            }
        },
        Emit::Svg => {
            if picture.is_some() {
                return Err("--picture applies to json and text output".into());
            }
            out.push_str(&render_svg(Some(set.taylor()), set.essential(), d.family().name()));
        }
        Emit::Csv => return Err(unsupported(emit, "spectrum")),
    }
    Ok(Outcome::Pass)
}

fn moments(fam: &FamilyArgs, m1: usize, m2: usize, emit: Emit, out: &mut String) -> Result<Outcome, String> {
    let d = fam.build()?;
    match emit {
        Emit::Json => {
            let m = LatticePoint::new(m1, m2);
            let v = json!({
                "family": d.family().name(),
                "m": [m1, m2],
                "gamma": gamma2d(&d, m),
                "log_gamma": log_gamma2d(&d, m),
            });
            out.push_str(&json::report(&v));
            out.push('\n');
        }
        Emit::Csv => {
            out.push_str("m1,m2,gamma\n");
            for j in 0..=m2 {
                for i in 0..=m1 {
                    out.push_str(&format!("{i},{j},{:.6e}\n", gamma2d(&d, LatticePoint::new(i, j))));
                }
            }
        }
        other => return Err(unsupported(other, "moments")),
    }
    Ok(Outcome::Pass)
}

fn diagram_show(fam: &FamilyArgs, region: usize, emit: Emit, out: &mut String) -> Result<Outcome, String> {
    let d = fam.build()?;
    match emit {
        Emit::Text => out.push_str(&weight_table_text(&d, region, region)),
        Emit::Json => {
            out.push_str(&json::lossless(&diagram_to_json(&d)));
            out.push('\n');
        }
        other => return Err(unsupported(other, "diagram show")),
    }
    Ok(Outcome::Pass)
}

fn write_file(dir: &Path, name: &str, body: &str, out: &mut String) -> Result<(), String> {
    let path = dir.join(name);
    std::fs::write(&path, body).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    out.push_str(&format!("{}\n", path.display()));
    Ok(())
}

fn figures(dir: &Path, out: &mut String) -> Result<Outcome, String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let e = |x: wshift::Error| x.to_string();
    let instances = suites::family_instances()?;
    let bergman = &instances.iter().find(|(n, _)| *n == "example-bergman").expect("bergman instance").1;
    let b = picture_for_diagram(bergman).map_err(e)?;
    let k = picture_thm_khypo(2.0).map_err(e)?;
    let imp = picture_thm_important(&[4, 3, 2], 1.0).map_err(e)?;
    let one = picture_example_exof1atom(0.5, 0.8).map_err(e)?;
    let svgs = [
        ("example-bergman.svg", &b, "example-bergman"),
        ("thm-khypo.svg", &k, "thm-khypo, kappa = 2"),
        ("thm-important.svg", &imp, "thm-important, ell = (4, 3, 2), c = 1"),
        ("exof1atom.svg", &one, "exof1atom, alpha = 0.5, beta = 0.8"),
    ];
    for (name, set, title) in svgs {
        write_file(dir, name, &render_svg(Some(set.taylor()), set.essential(), title), out)?;
    }
    let table = |names: &[&str]| -> String {
        instances
            .iter()
            .filter(|(n, _)| names.contains(n))
            .map(|(_, d)| weight_table_text(d, 6, 6) + "\n")
            .collect()
    };
    write_file(dir, "weights-figure1.txt", &table(&["thm-compactper", "example-bergman", "exof1atom"]), out)?;
    write_file(dir, "weights-figure2.txt", &table(&["stair", "thm-khypo"]), out)?;
    Ok(Outcome::Pass)
}

fn run(cli: Cli, out: &mut String) -> Result<Outcome, String> {
    match cli.command {
        Command::Families { action: FamiliesAction::List { emit } } => families(emit, out),
        Command::Diagram {
            action: DiagramAction::Show { family, region, emit },
        } => diagram_show(&family, region, emit, out),
        Command::Check { kind, family, region, k, tol } => check(kind, &family, region, k, tol, out),
        Command::Spectrum { family, emit, picture } => spectrum(&family, emit, picture.as_deref(), out),
        Command::Moments { family, m1, m2, emit } => moments(&family, m1, m2, emit, out),
        Command::Oracle {
            action: OracleAction::Compare { suite },
        } => {
            let report = suites::run(&suite)?;
            out.push_str(&json::report(&report));
            out.push('\n');
            Ok(if report["pass"] == Value::Bool(true) { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Figures { out: dir } => figures(&dir, out),
    }
}

fn main() -> ExitCode {
    let argv = match config::expand(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = String::new();
    let outcome = run(cli, &mut out);
    let _ = std::io::stdout().write_all(out.as_bytes());
    match outcome {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("run `wshift --help` for usage");
            ExitCode::from(2)
        }
    }
}
