//! Planar geometry of pictures: outer boundary by a cell arrangement,
//! connected components, and a pixel raster used as an independent check.
//!
//! Everything lives in the closed quadrant `r1, r2 >= 0`. The outer boundary
//! is the boundary, relative to that quadrant, of the unbounded component of
//! the complement; points on the axes are interior when the set surrounds
//! them inside the quadrant.
//!
//! A geometric family enters the arrangement through its largest member and
//! its accumulation point 0.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::{Label, Primitive, RadialSet, SpectralPicture, GEOM_TOL};

/// Closed rectangle `[x0, x1] x [y0, y1]`, possibly degenerate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    fn intersects(&self, o: &Rect) -> bool {
        self.x0 <= o.x1 + GEOM_TOL && o.x0 <= self.x1 + GEOM_TOL && self.y0 <= o.y1 + GEOM_TOL && o.y0 <= self.y1 + GEOM_TOL
    }
}

fn pieces(s: &RadialSet) -> Vec<(f64, f64)> {
    match *s {
        RadialSet::Interval { lo, hi } => vec![(lo, hi)],
        RadialSet::Point { r } => vec![(r, r)],
        RadialSet::Geometric { r0, .. } => vec![(r0, r0), (0.0, 0.0)],
    }
}

pub(crate) fn rects(p: &Primitive) -> Vec<Rect> {
    let mut out = Vec::new();
    for &(x0, x1) in &pieces(&p.z1) {
        for &(y0, y1) in &pieces(&p.z2) {
            out.push(Rect { x0, x1, y0, y1 });
        }
    }
    out
}

/// Sorted distinct coordinates, always including 0.
fn coordinates(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.chain(std::iter::once(0.0)).collect();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= GEOM_TOL * 1f64.max(a.abs()));
    v
}

fn index_of(coords: &[f64], x: f64) -> usize {
    coords
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - x).abs().total_cmp(&(b.1 - x).abs()))
        .map(|(i, _)| i)
        .expect("coordinate list is never empty")
}

/// One-dimensional cells over `a` coordinates: cell `2i + 1` is the vertex
/// `X_i`, cell `2i` is the open gap just below it, and cell `2a` is the
/// unbounded gap above the last vertex. Cell 0 (negative radii) is outside
/// the quadrant.
struct Arrangement {
    xs: Vec<f64>,
    ys: Vec<f64>,
    filled: Vec<bool>,
    exterior: Vec<bool>,
}

/// `lo`, `hi` are vertex indices; the 1D cell `c` lies in `[X_lo, X_hi]`.
fn cell_within(c: usize, lo: usize, hi: usize) -> bool {
    if c % 2 == 1 {
        let v = c / 2;
        lo <= v && v <= hi
    } else {
        // Open gap (X_{c/2 - 1}, X_{c/2}).
        c >= 2 && lo < c / 2 && c / 2 <= hi
    }
}

/// `a` lies in the closure of `b`.
fn in_closure(a: (usize, usize), b: (usize, usize)) -> bool {
    let axis = |x: usize, y: usize| x == y || (x % 2 == 1 && x.abs_diff(y) == 1);
    axis(a.0, b.0) && axis(a.1, b.1)
}

impl Arrangement {
    fn new(p: &SpectralPicture) -> Self {
        let rs: Vec<Rect> = p.primitives.iter().flat_map(rects).collect();
        let xs = coordinates(rs.iter().flat_map(|r| [r.x0, r.x1]));
        let ys = coordinates(rs.iter().flat_map(|r| [r.y0, r.y1]));
        let (w, h) = (2 * xs.len() + 1, 2 * ys.len() + 1);
        let mut filled = vec![false; w * h];
        for r in &rs {
            let (i0, i1) = (index_of(&xs, r.x0), index_of(&xs, r.x1));
            let (j0, j1) = (index_of(&ys, r.y0), index_of(&ys, r.y1));
            for cy in 1..h {
                if !cell_within(cy, j0, j1) {
                    continue;
                }
                for cx in 1..w {
                    if cell_within(cx, i0, i1) {
                        filled[cy * w + cx] = true;
                    }
                }
            }
        }
        let mut a = Self {
            xs,
            ys,
            filled,
            exterior: vec![false; w * h],
        };
        a.flood_exterior();
        a
    }

    fn width(&self) -> usize {
        2 * self.xs.len() + 1
    }

    fn height(&self) -> usize {
        2 * self.ys.len() + 1
    }

    fn neighbors(&self, c: (usize, usize)) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (w, h) = (self.width(), self.height());
        (-1i64..=1)
            .flat_map(move |dy| (-1i64..=1).map(move |dx| (dx, dy)))
            .filter(|&(dx, dy)| dx != 0 || dy != 0)
            .filter_map(move |(dx, dy)| {
                let x = c.0 as i64 + dx;
                let y = c.1 as i64 + dy;
                (x >= 1 && y >= 1 && (x as usize) < w && (y as usize) < h).then_some((x as usize, y as usize))
            })
            .filter(move |&n| in_closure(n, c) || in_closure(c, n))
    }

    fn flood_exterior(&mut self) {
        let w = self.width();
        let start = (w - 1, self.height() - 1);
        let mut queue = VecDeque::from([start]);
        self.exterior[start.1 * w + start.0] = true;
        while let Some(c) = queue.pop_front() {
            let next: Vec<_> = self.neighbors(c).collect();
            for n in next {
                let k = n.1 * w + n.0;
                if !self.filled[k] && !self.exterior[k] {
                    self.exterior[k] = true;
                    queue.push_back(n);
                }
            }
        }
    }

    /// Closure of a cell as a rectangle.
    fn closure(&self, c: (usize, usize)) -> Rect {
        let span = |cell: usize, v: &[f64]| {
            if cell % 2 == 1 {
                (v[cell / 2], v[cell / 2])
            } else {
                (v[cell / 2 - 1], v[cell / 2])
            }
        };
        let (x0, x1) = span(c.0, &self.xs);
        let (y0, y1) = span(c.1, &self.ys);
        Rect { x0, x1, y0, y1 }
    }

    fn boundary_cells(&self) -> Vec<(usize, usize)> {
        let w = self.width();
        let mut out = Vec::new();
        for cy in 1..self.height() {
            for cx in 1..w {
                let c = (cx, cy);
                if self.filled[cy * w + cx] && self.neighbors(c).any(|n| self.exterior[n.1 * w + n.0] && in_closure(c, n)) {
                    out.push(c);
                }
            }
        }
        out
    }
}

fn merge_runs(mut runs: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    runs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in runs {
        match out.last_mut() {
            Some(last) if lo <= last.1 + GEOM_TOL => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

fn key(x: f64) -> i64 {
    (x / GEOM_TOL).round() as i64
}

/// Outer boundary, with collinear pieces merged into maximal segments.
pub fn outer_boundary(p: &SpectralPicture) -> SpectralPicture {
    let arr = Arrangement::new(p);
    let cells: Vec<Rect> = arr.boundary_cells().into_iter().map(|c| arr.closure(c)).collect();
    let mut horizontal: BTreeMap<i64, (f64, Vec<(f64, f64)>)> = BTreeMap::new();
    let mut vertical: BTreeMap<i64, (f64, Vec<(f64, f64)>)> = BTreeMap::new();
    let mut points = Vec::new();
    for r in &cells {
        if r.x1 > r.x0 {
            horizontal.entry(key(r.y0)).or_insert((r.y0, Vec::new())).1.push((r.x0, r.x1));
        } else if r.y1 > r.y0 {
            vertical.entry(key(r.x0)).or_insert((r.x0, Vec::new())).1.push((r.y0, r.y1));
        } else {
            points.push((r.x0, r.y0));
        }
    }
    let mut prims = Vec::new();
    for (y, runs) in horizontal.into_values() {
        prims.extend(merge_runs(runs).into_iter().map(|(a, b)| Primitive::new(RadialSet::interval(a, b), RadialSet::point(y))));
    }
    for (x, runs) in vertical.into_values() {
        prims.extend(merge_runs(runs).into_iter().map(|(a, b)| Primitive::new(RadialSet::point(x), RadialSet::interval(a, b))));
    }
    prims.extend(points.into_iter().map(|(x, y)| Primitive::new(RadialSet::point(x), RadialSet::point(y))));
    SpectralPicture {
        label: Label::OuterBoundary,
        primitives: prims,
    }
    .normal_form()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ComponentCount {
    Finite(usize),
    CountablyInfinite,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Connected components. A geometric family contributes infinitely many
/// components unless some other primitive swallows it whole.
pub fn component_count(p: &SpectralPicture) -> ComponentCount {
    let plain: Vec<&Primitive> = p.primitives.iter().filter(|q| !q.has_geometric()).collect();
    let swallowed = p
        .primitives
        .iter()
        .filter(|q| q.has_geometric())
        .all(|g| plain.iter().any(|q| g.is_subset_of(q)));
    if !swallowed {
        return ComponentCount::CountablyInfinite;
    }
    let boxes: Vec<Vec<Rect>> = plain.iter().map(|q| rects(q)).collect();
    let mut parent: Vec<usize> = (0..boxes.len()).collect();
    for a in 0..boxes.len() {
        for b in a + 1..boxes.len() {
            if boxes[a].iter().any(|r| boxes[b].iter().any(|s| r.intersects(s))) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let roots = (0..boxes.len()).filter(|&i| find(&mut parent, i) == i).count();
    ComponentCount::Finite(roots)
}

/// Default raster resolution per axis.
pub const RASTER_SIZE: usize = 2000;

/// Pixel grid over `[0, width] x [0, height]`; pixel `(i, j)` covers
/// `[i dx, (i + 1) dx) x [j dy, (j + 1) dy)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Raster {
    pub size: usize,
    pub width: f64,
    pub height: f64,
    pub cells: Vec<bool>,
}

impl Raster {
    /// Blank grid covering both pictures with a 15% margin.
    pub fn covering(pictures: &[&SpectralPicture], size: usize) -> Self {
        let (w, h) = pictures.iter().fold((0.0f64, 0.0f64), |(w, h), p| {
            let (a, b) = p.extent();
            (w.max(a), h.max(b))
        });
        Self {
            size,
            width: 1.15 * w.max(1e-3),
            height: 1.15 * h.max(1e-3),
            cells: vec![false; size * size],
        }
    }

    fn blank(&self) -> Self {
        Self {
            cells: vec![false; self.size * self.size],
            ..self.clone()
        }
    }

    fn pixel(&self, v: f64, extent: f64) -> usize {
        (((v / extent) * self.size as f64).floor().max(0.0) as usize).min(self.size - 1)
    }

    fn paint(&mut self, r: &Rect) {
        let (i0, i1) = (self.pixel(r.x0, self.width), self.pixel(r.x1, self.width));
        let (j0, j1) = (self.pixel(r.y0, self.height), self.pixel(r.y1, self.height));
        for j in j0..=j1 {
            for i in i0..=i1 {
                self.cells[j * self.size + i] = true;
            }
        }
    }

    /// Pixels meeting the picture; geometric families are expanded member by
    /// member down to pixel scale.
    pub fn rasterize(&self, p: &SpectralPicture) -> Self {
        let mut out = self.blank();
        let floor = self.width.min(self.height) / self.size as f64;
        let expand = |s: &RadialSet| -> Vec<(f64, f64)> {
            match *s {
                RadialSet::Geometric { r0, q } => {
                    let mut v = vec![(0.0, 0.0)];
                    let mut r = r0;
                    while r > floor {
                        v.push((r, r));
                        r *= q;
                    }
                    v
                }
                other => pieces(&other),
            }
        };
        for q in &p.primitives {
            for &(x0, x1) in &expand(&q.z1) {
                for &(y0, y1) in &expand(&q.z2) {
                    out.paint(&Rect { x0, x1, y0, y1 });
                }
            }
        }
        out
    }

    /// Filled pixels 4-adjacent to the unbounded unfilled region.
    pub fn outer_boundary(&self) -> Self {
        let n = self.size;
        let mut ext = vec![false; n * n];
        let mut queue = VecDeque::new();
        let start = n * n - 1;
        if !self.cells[start] {
            ext[start] = true;
            queue.push_back(start);
        }
        let nbrs = |k: usize| {
            let (i, j) = (k % n, k / n);
            let mut v = Vec::with_capacity(4);
            if i > 0 {
                v.push(k - 1);
            }
            if i + 1 < n {
                v.push(k + 1);
            }
            if j > 0 {
                v.push(k - n);
            }
            if j + 1 < n {
                v.push(k + n);
            }
            v
        };
        while let Some(k) = queue.pop_front() {
            for m in nbrs(k) {
                if !self.cells[m] && !ext[m] {
                    ext[m] = true;
                    queue.push_back(m);
                }
            }
        }
        let mut out = self.blank();
        for k in 0..n * n {
            out.cells[k] = self.cells[k] && nbrs(k).into_iter().any(|m| ext[m]);
        }
        out
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// Every set pixel of each mask lies within `radius` pixels (Chebyshev)
    /// of a set pixel of the other.
    pub fn matches_within(&self, other: &Raster, radius: usize) -> bool {
        self.covered_by(other, radius) && other.covered_by(self, radius)
    }

    fn covered_by(&self, other: &Raster, radius: usize) -> bool {
        let n = self.size;
        (0..n * n).filter(|&k| self.cells[k]).all(|k| {
            let (i, j) = (k % n, k / n);
            (j.saturating_sub(radius)..=(j + radius).min(n - 1))
                .any(|y| (i.saturating_sub(radius)..=(i + radius).min(n - 1)).any(|x| other.cells[y * n + x]))
        })
    }
}
