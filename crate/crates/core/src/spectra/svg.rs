//! Deterministic SVG rendering of pictures in the modulus plane.
//!
//! Output depends only on the normal form of the pictures, so equal inputs
//! give byte-identical files.

use std::fmt::Write as _;

use super::{Primitive, RadialSet, SpectralPicture};

pub const WIDTH: f64 = 600.0;
pub const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 40.0;
/// Members drawn per geometric family before the accumulation marker.
pub const GEOMETRIC_TRUNCATION: usize = 12;

struct Frame {
    sx: f64,
    sy: f64,
}

impl Frame {
    fn new(pics: &[&SpectralPicture]) -> Self {
        let (w, h) = pics.iter().fold((0.0f64, 0.0f64), |(w, h), p| {
            let (a, b) = p.extent();
            (w.max(a), h.max(b))
        });
        let (w, h) = (1.15 * w.max(1e-3), 1.15 * h.max(1e-3));
        Self {
            sx: (WIDTH - 2.0 * MARGIN) / w,
            sy: (HEIGHT - 2.0 * MARGIN) / h,
        }
    }

    fn x(&self, r: f64) -> f64 {
        MARGIN + r * self.sx
    }

    fn y(&self, r: f64) -> f64 {
        HEIGHT - MARGIN - r * self.sy
    }
}

/// One radial factor as drawable pieces: closed ranges, plus the
/// accumulation point of a truncated family.
fn members(s: &RadialSet) -> (Vec<(f64, f64)>, Option<(f64, f64)>) {
    match *s {
        RadialSet::Interval { lo, hi } => (vec![(lo, hi)], None),
        RadialSet::Point { r } => (vec![(r, r)], None),
        RadialSet::Geometric { r0, q } => {
            let v: Vec<(f64, f64)> = (0..GEOMETRIC_TRUNCATION).map(|k| {
                let r = r0 * q.powi(k as i32);
                (r, r)
            }).collect();
            let last = v.last().map(|p| p.0).unwrap_or(r0);
            (v, Some((last, 0.0)))
        }
    }
}

fn glyph(out: &mut String, f: &Frame, x: (f64, f64), y: (f64, f64), color: &str, class: &str, fill_area: bool) {
    let thick_x = x.1 > x.0;
    let thick_y = y.1 > y.0;
    if thick_x && thick_y {
        let fill = if fill_area { "#d3d3d3" } else { "none" };
        let _ = writeln!(
            out,
            r#"  <rect class="{class}" x="{:.6}" y="{:.6}" width="{:.6}" height="{:.6}" fill="{fill}" stroke="none"/>"#,
            f.x(x.0),
            f.y(y.1),
            f.x(x.1) - f.x(x.0),
            f.y(y.0) - f.y(y.1)
        );
    } else if thick_x || thick_y {
        let _ = writeln!(
            out,
            r#"  <line class="{class}" x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke="{color}" stroke-width="2"/>"#,
            f.x(x.0),
            f.y(y.0),
            f.x(x.1),
            f.y(y.1)
        );
    } else {
        let _ = writeln!(
            out,
            r#"  <circle class="{class}" cx="{:.6}" cy="{:.6}" r="2" fill="{color}"/>"#,
            f.x(x.0),
            f.y(y.0)
        );
    }
}

fn primitive(out: &mut String, f: &Frame, p: &Primitive, color: &str, layer: &str, fill_area: bool) {
    let (xs, xacc) = members(&p.z1);
    let (ys, yacc) = members(&p.z2);
    let family = xacc.is_some() || yacc.is_some();
    let class = if family { format!("{layer} family-member") } else { layer.to_string() };
    for &x in &xs {
        for &y in &ys {
            glyph(out, f, x, y, color, &class, fill_area);
        }
    }
    // Dotted ray from the last drawn member toward the accumulation point.
    let mut marker = |from: (f64, f64), to: (f64, f64)| {
        let _ = writeln!(
            out,
            r#"  <line class="{layer} accumulation" x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke="{color}" stroke-width="1" stroke-dasharray="2,3"/>"#,
            f.x(from.0),
            f.y(from.1),
            f.x(to.0),
            f.y(to.1)
        );
    };
    if let Some((last, acc)) = xacc {
        for &(y, _) in &ys {
            marker((last, y), (acc, y));
        }
    }
    if let Some((last, acc)) = yacc {
        for &(x, _) in &xs {
            marker((x, last), (x, acc));
        }
    }
}

/// Draws `base` in gray (areas filled) under `overlay` in black.
pub fn render_svg(base: Option<&SpectralPicture>, overlay: &SpectralPicture, title: &str) -> String {
    let base = base.map(SpectralPicture::normal_form);
    let overlay = overlay.normal_form();
    let mut pics = vec![&overlay];
    if let Some(b) = &base {
        pics.push(b);
    }
    let f = Frame::new(&pics);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, "  <title>{}</title>", escape(title));
    let _ = writeln!(
        out,
        r##"  <line class="axis" x1="{m:.6}" y1="{b:.6}" x2="{r:.6}" y2="{b:.6}" stroke="#888888" stroke-width="1"/>"##,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN / 2.0
    );
    let _ = writeln!(
        out,
        r##"  <line class="axis" x1="{m:.6}" y1="{b:.6}" x2="{m:.6}" y2="{t:.6}" stroke="#888888" stroke-width="1"/>"##,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        t = MARGIN / 2.0
    );
    let _ = writeln!(
        out,
        r#"  <text x="{:.6}" y="{:.6}" font-size="12">|z1|</text>"#,
        WIDTH - MARGIN / 2.0 - 24.0,
        HEIGHT - MARGIN + 16.0
    );
    let _ = writeln!(out, r#"  <text x="4" y="{:.6}" font-size="12">|z2|</text>"#, MARGIN / 2.0);
    if let Some(b) = &base {
        for p in &b.primitives {
            primitive(&mut out, &f, p, "#a0a0a0", b.label.as_str(), true);
        }
    }
    for p in &overlay.primitives {
        primitive(&mut out, &f, p, "#000000", overlay.label.as_str(), false);
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
