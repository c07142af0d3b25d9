use std::collections::VecDeque;
use std::io::Write;

use crate::algebra::{BivarPoly, ProjPoint};
use crate::dynamics::map::{CPoint, PlanarMap};
use crate::error::{Error, Result};
use crate::util::is_finite_c;

/// Default escape radius for `|z| + |w|`.
pub const ESCAPE_RADIUS: f64 = 1e6;
/// Steps that must sit inside tolerance before an orbit counts as converged.
pub const CONV_WINDOW: usize = 10;
/// Window and threshold for deciding that the normalized displacement
/// direction has stabilized.
pub const TANGENT_WINDOW: usize = 100;
pub const TANGENT_TOL: f64 = 1e-4;

/// A finite forward orbit.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub seed: CPoint,
    pub points: Vec<CPoint>,
    /// Set when iteration stopped early because `|z| + |w|` crossed the
    /// escape radius (the crossing point is recorded).
    pub escaped: bool,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// CSV dump with header `n,z_re,z_im,w_re,w_im`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,z_re,z_im,w_re,w_im")?;
        for (n, (z, w)) in self.points.iter().enumerate() {
            writeln!(out, "{n},{},{},{},{}", z.re, z.im, w.re, w.im)?;
        }
        Ok(())
    }
}

/// Iterate `map` for `n` steps from `seed`; the orbit has `n + 1` points
/// unless the escape radius cuts it short.
pub fn iterate(map: &PlanarMap, seed: CPoint, n: usize) -> Result<Orbit> {
    let mut points = Vec::with_capacity(n + 1);
    points.push(seed);
    let mut current = seed;
    let mut escaped = false;
    for _ in 0..n {
        current = map.apply(current);
        if !(is_finite_c(current.0) && is_finite_c(current.1)) {
            return Err(Error::NonFinite("orbit evaluation overflowed".into()));
        }
        points.push(current);
        if current.0.norm() + current.1.norm() > ESCAPE_RADIUS {
            escaped = true;
            break;
        }
    }
    Ok(Orbit {
        seed,
        points,
        escaped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    ConvergesToTarget,
    Escapes,
    Undecided,
}

/// Outcome of a finite-orbit classification run.
#[derive(Debug, Clone)]
pub struct OrbitVerdict {
    pub kind: VerdictKind,
    pub steps_used: usize,
    /// Last observed normalized residual `|target| / (1 + |point|^deg)`.
    pub final_distance: f64,
    /// Stabilized projective direction of `point_n - point_final`, present
    /// only for converging orbits whose displacement direction settled.
    pub tangent_direction: Option<ProjPoint>,
}

/// Normalized residual of `target` at a point: zero exactly on the zero set,
/// bounded along escaping orbits.
#[inline]
pub fn target_residual(target: &BivarPoly, deg: u32, p: CPoint) -> f64 {
    let v = target.eval(p.0, p.1).norm();
    let n = (p.0.norm_sqr() + p.1.norm_sqr()).sqrt();
    v / (1.0 + n.powi(deg as i32))
}

/// Classify the orbit of `seed` against the zero set of `target`.
///
/// Converges when the normalized residual stays within `tol` for
/// `CONV_WINDOW` consecutive steps; escapes at the escape radius; otherwise
/// undecided at the budget. First trigger wins, so the verdict is monotone
/// in the budget.
pub fn classify_orbit(
    map: &PlanarMap,
    seed: CPoint,
    target: &BivarPoly,
    budget: usize,
    tol: f64,
) -> Result<OrbitVerdict> {
    if budget < 1 {
        return Ok(OrbitVerdict {
            kind: VerdictKind::Undecided,
            steps_used: 0,
            final_distance: target_residual(target, target.degree().unwrap_or(0), seed),
            tangent_direction: None,
        });
    }
    let deg = target.degree().unwrap_or(0);
    let mut current = seed;
    let mut in_tol = if target_residual(target, deg, current) <= tol {
        1
    } else {
        0
    };
    // Ring of recent points for the tangential-direction estimate.
    let ring_cap = TANGENT_WINDOW + 2 * CONV_WINDOW + 2;
    let mut ring: VecDeque<CPoint> = VecDeque::with_capacity(ring_cap);
    ring.push_back(current);
    let mut res = target_residual(target, deg, current);
    for step in 1..=budget {
        current = map.apply(current);
        if !(is_finite_c(current.0) && is_finite_c(current.1)) {
            return Err(Error::NonFinite("orbit evaluation overflowed".into()));
        }
        if ring.len() == ring_cap {
            ring.pop_front();
        }
        ring.push_back(current);
        if current.0.norm() + current.1.norm() > ESCAPE_RADIUS {
            return Ok(OrbitVerdict {
                kind: VerdictKind::Escapes,
                steps_used: step,
                final_distance: target_residual(target, deg, current),
                tangent_direction: None,
            });
        }
        res = target_residual(target, deg, current);
        if res <= tol {
            in_tol += 1;
            if in_tol >= CONV_WINDOW {
                return Ok(OrbitVerdict {
                    kind: VerdictKind::ConvergesToTarget,
                    steps_used: step,
                    final_distance: res,
                    tangent_direction: tangent_direction(&ring),
                });
            }
        } else {
            in_tol = 0;
        }
    }
    Ok(OrbitVerdict {
        kind: VerdictKind::Undecided,
        steps_used: budget,
        final_distance: res,
        tangent_direction: None,
    })
}

/// Direction of `p_n - p_final` over the trailing window, if it stabilized
/// (successive projective distance below `TANGENT_TOL`).
fn tangent_direction(ring: &VecDeque<CPoint>) -> Option<ProjPoint> {
    if ring.len() < TANGENT_WINDOW + CONV_WINDOW + 2 {
        return None;
    }
    let last = *ring.back().unwrap();
    // Skip the CONV_WINDOW points closest to the endpoint: differences there
    // are dominated by rounding in the endpoint estimate.
    let end = ring.len() - CONV_WINDOW;
    let start = end - TANGENT_WINDOW;
    let mut prev: Option<ProjPoint> = None;
    for idx in start..end {
        let p = ring[idx];
        let d = (p.0 - last.0, p.1 - last.1);
        let proj = ProjPoint::new(d.0, d.1)?;
        if let Some(q) = prev {
            if q.dist(&proj) >= TANGENT_TOL {
                return None;
            }
        }
        prev = Some(proj);
    }
    prev
}
