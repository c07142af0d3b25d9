use std::io::Write;

use crate::algebra::BivarPoly;
use crate::dynamics::map::{CPoint, PlanarMap};
use crate::dynamics::orbit::{classify_orbit, VerdictKind};
use crate::error::Result;
use crate::exec::{map_indices, ExecMode};
use crate::parabolic::NormalForm;
use crate::util::is_finite_c;

/// A 2-real-dimensional affine slice of C^2: `base + s e1 + t e2` with real
/// parameters `(s, t)`.
#[derive(Debug, Clone)]
pub struct SliceSpec {
    pub base: CPoint,
    pub e1: CPoint,
    pub e2: CPoint,
    pub s_range: (f64, f64),
    pub t_range: (f64, f64),
}

impl SliceSpec {
    pub fn point(&self, s: f64, t: f64) -> CPoint {
        (
            self.base.0 + self.e1.0 * s + self.e2.0 * t,
            self.base.1 + self.e1.1 * s + self.e2.1 * t,
        )
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GridParams {
    pub nx: usize,
    pub ny: usize,
    pub budget: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    Converges,
    Escapes,
    Undecided,
    /// Evaluation overflowed; the cell is marked and the run continues.
    Failed,
}

#[derive(Debug, Clone, Copy)]
pub struct CellOutcome {
    pub kind: CellKind,
    pub steps: usize,
    pub petal: Option<u8>,
}

/// Classified grid over a slice. Cells are stored row-major with the top
/// image row at the largest `t` value; every cell is classified, and
/// undecided cells carry the exhausted budget in `steps`.
#[derive(Debug, Clone)]
pub struct BasinGrid {
    pub slice: SliceSpec,
    pub params: GridParams,
    pub cells: Vec<CellOutcome>,
}

/// Classify every cell of the grid against the zero set of `target`.
///
/// With a petal context, converging cells also record the first attracting
/// sector their orbit enters (in the context's local coordinates).
pub fn classify_grid(
    map: &PlanarMap,
    slice: &SliceSpec,
    params: &GridParams,
    target: &BivarPoly,
    petal_ctx: Option<&NormalForm>,
    mode: ExecMode,
) -> BasinGrid {
    let (nx, ny) = (params.nx, params.ny);
    let cells = map_indices(mode, nx * ny, |idx| {
        let ix = idx % nx;
        let iy = idx / nx;
        let s = slice.s_range.0
            + (ix as f64 + 0.5) * (slice.s_range.1 - slice.s_range.0) / nx as f64;
        let t = slice.t_range.1
            - (iy as f64 + 0.5) * (slice.t_range.1 - slice.t_range.0) / ny as f64;
        classify_cell(map, slice.point(s, t), params, target, petal_ctx)
    });
    BasinGrid {
        slice: slice.clone(),
        params: *params,
        cells,
    }
}

fn classify_cell(
    map: &PlanarMap,
    seed: CPoint,
    params: &GridParams,
    target: &BivarPoly,
    petal_ctx: Option<&NormalForm>,
) -> CellOutcome {
    let verdict = match classify_orbit(map, seed, target, params.budget, params.tol) {
        Ok(v) => v,
        Err(_) => {
            return CellOutcome {
                kind: CellKind::Failed,
                steps: 0,
                petal: None,
            }
        }
    };
    let kind = match verdict.kind {
        VerdictKind::ConvergesToTarget => CellKind::Converges,
        VerdictKind::Escapes => CellKind::Escapes,
        VerdictKind::Undecided => CellKind::Undecided,
    };
    let petal = if kind == CellKind::Converges {
        petal_ctx.and_then(|ctx| first_sector_entered(map, seed, ctx, params.budget))
    } else {
        None
    };
    CellOutcome {
        kind,
        steps: verdict.steps_used,
        petal,
    }
}

/// Index `m` of the first attracting sector the orbit enters, if any.
fn first_sector_entered(
    map: &PlanarMap,
    seed: CPoint,
    ctx: &NormalForm,
    budget: usize,
) -> Option<u8> {
    let mut p = seed;
    for _ in 0..=budget {
        let local = ctx.chart.to_local(p);
        for spec in &ctx.petals {
            if spec.contains(local) {
                return Some(spec.m as u8);
            }
        }
        p = map.apply(p);
        if !(is_finite_c(p.0) && is_finite_c(p.1)) {
            return None;
        }
    }
    None
}

impl BasinGrid {
    pub fn failed_fraction(&self) -> f64 {
        let failed = self
            .cells
            .iter()
            .filter(|c| c.kind == CellKind::Failed)
            .count();
        failed as f64 / self.cells.len().max(1) as f64
    }

    /// Binary NetPBM image: escapes white, undecided black, converging cells
    /// colored by petal index (petal-less convergence gets the base hue).
    pub fn write_ppm<W: Write>(&self, mut out: W, config_hash: &str) -> std::io::Result<()> {
        writeln!(out, "P6")?;
        writeln!(out, "# config_hash={config_hash}")?;
        writeln!(out, "{} {}", self.params.nx, self.params.ny)?;
        writeln!(out, "255")?;
        let mut buf = Vec::with_capacity(self.cells.len() * 3);
        for cell in &self.cells {
            let rgb = cell_color(cell);
            buf.extend_from_slice(&rgb);
        }
        out.write_all(&buf)
    }
}

fn cell_color(cell: &CellOutcome) -> [u8; 3] {
    match cell.kind {
        CellKind::Escapes => [255, 255, 255],
        CellKind::Undecided => [0, 0, 0],
        CellKind::Failed => [255, 0, 255],
        CellKind::Converges => match cell.petal {
            None => [40, 200, 90],
            Some(m) => petal_hue(m),
        },
    }
}

/// Evenly spaced hues for petal indices m = 1, 2, ...
fn petal_hue(m: u8) -> [u8; 3] {
    // Golden-angle spacing keeps adjacent indices visually distinct.
    let h = ((m as f64 - 1.0) * 0.381966) % 1.0;
    hsv_to_rgb(h, 0.85, 0.95)
}

fn hsv_to_rgb(h: f64, s: f64, v: f64) -> [u8; 3] {
    let i = (h * 6.0).floor();
    let f = h * 6.0 - i;
    let p = v * (1.0 - s);
    let q = v * (1.0 - f * s);
    let t = v * (1.0 - (1.0 - f) * s);
    let (r, g, b) = match (i as i64).rem_euclid(6) {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    [(r * 255.0) as u8, (g * 255.0) as u8, (b * 255.0) as u8]
}

/// Convenience: run a grid and error out if more than `max_failed_fraction`
/// of the cells overflowed.
pub fn classify_grid_checked(
    map: &PlanarMap,
    slice: &SliceSpec,
    params: &GridParams,
    target: &BivarPoly,
    petal_ctx: Option<&NormalForm>,
    mode: ExecMode,
    max_failed_fraction: f64,
) -> Result<BasinGrid> {
    let grid = classify_grid(map, slice, params, target, petal_ctx, mode);
    if grid.failed_fraction() > max_failed_fraction {
        return Err(crate::error::Error::NonFinite(format!(
            "{:.1}% of grid cells overflowed",
            grid.failed_fraction() * 100.0
        )));
    }
    Ok(grid)
}
