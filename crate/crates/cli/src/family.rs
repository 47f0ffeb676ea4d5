//! Family flags shared by every command that builds a diagram.

use std::path::PathBuf;

use clap::Args;
use wshift::lattice2d::{
    diagram_from_json, make_example_bergman, make_example_exof1atom, make_example_stair, make_thm_important,
    make_thm_khypo,
};
use wshift::positivity::{column_shift, ColumnChoice};
use wshift::WeightDiagram;

pub const FAMILIES: [(&str, &str); 7] = [
    ("thm-compactper", "row 0, common row j >= 1, column 0 (load with --diagram)"),
    ("example-bergman", "no parameters"),
    ("exof1atom", "--alpha A --beta B, 0 < A < B <= 1"),
    ("thm-important", "--ells L0,L1,.. [--col-c C --col-t T | --col-c C --col-r R]"),
    ("stair", "--a A, 0 < A < 1"),
    ("thm-khypo", "--kappa K --y0 Y"),
    ("custom", "explicit weight table (load with --diagram)"),
];

#[derive(Args, Debug, Clone, Default)]
pub struct FamilyArgs {
    /// Diagram family name; see `families list`.
    #[arg(long)]
    pub family: Option<String>,
    /// Diagram JSON file, as written by `diagram show --emit json`.
    #[arg(long, conflicts_with = "family")]
    pub diagram: Option<PathBuf>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub y0: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    /// Bergman-like row indices, largest first.
    #[arg(long, value_delimiter = ',')]
    pub ells: Option<Vec<u32>>,
    /// Column norm for `thm-important`.
    #[arg(long)]
    pub col_c: Option<f64>,
    /// Atom ratio of a staggered-atom column.
    #[arg(long, conflicts_with = "col_r")]
    pub col_t: Option<f64>,
    /// Ratio of a geometric-cap column `c (1 - r^(n+1))`.
    #[arg(long)]
    pub col_r: Option<f64>,
}

impl FamilyArgs {
    fn supplied(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        let mut note = |set: bool, name: &'static str| {
            if set {
                v.push(name);
            }
        };
        note(self.kappa.is_some(), "kappa");
        note(self.y0.is_some(), "y0");
        note(self.alpha.is_some(), "alpha");
        note(self.beta.is_some(), "beta");
        note(self.a.is_some(), "a");
        note(self.ells.is_some(), "ells");
        note(self.col_c.is_some(), "col-c");
        note(self.col_t.is_some(), "col-t");
        note(self.col_r.is_some(), "col-r");
        v
    }

    fn only(&self, family: &str, allowed: &[&str]) -> Result<(), String> {
        match self.supplied().into_iter().find(|f| !allowed.contains(f)) {
            Some(f) => Err(format!("flag --{f} does not apply to family {family}")),
            None => Ok(()),
        }
    }

    pub fn build(&self) -> Result<WeightDiagram, String> {
        if let Some(path) = &self.diagram {
            self.only("loaded from --diagram", &[])?;
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            return diagram_from_json(&text).map_err(|e| e.to_string());
        }
        let Some(family) = self.family.as_deref() else {
            return Err("either --family or --diagram is required".into());
        };
        let built = match family {
            "example-bergman" => {
                self.only(family, &[])?;
                make_example_bergman()
            }
            "exof1atom" => {
                self.only(family, &["alpha", "beta"])?;
                make_example_exof1atom(self.alpha.unwrap_or(0.5), self.beta.unwrap_or(0.8))
            }
            "stair" => {
                self.only(family, &["a"])?;
                make_example_stair(self.a.unwrap_or(0.5))
            }
            "thm-khypo" => {
                self.only(family, &["kappa", "y0"])?;
                make_thm_khypo(self.kappa.unwrap_or(2.0), self.y0.unwrap_or(0.5f64.sqrt()))
            }
            "thm-important" => {
                self.only(family, &["ells", "col-c", "col-t", "col-r"])?;
                let ells = self.ells.clone().unwrap_or_else(|| vec![4, 3, 2]);
                let c = self.col_c.unwrap_or(1.0);
                let choice = match self.col_r {
                    Some(r) => ColumnChoice::GeometricCap { c, r },
                    None => ColumnChoice::StaggeredAtoms {
                        c,
                        t: self.col_t.unwrap_or(0.01),
                    },
                };
                column_shift(choice, ells.len()).and_then(|col| make_thm_important(&ells, col))
            }
            "thm-compactper" | "custom" => {
                return Err(format!("family {family} takes explicit weights; pass them with --diagram FILE"));
            }
            other => return Err(format!("unknown family {other}; see `families list`")),
        };
        built.map_err(|e| e.to_string())
    }
}
