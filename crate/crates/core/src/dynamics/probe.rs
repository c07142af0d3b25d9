use num_complex::Complex64;

use crate::dynamics::map::{MapFamily, PlanarMap};
use crate::error::{Error, Result};
use crate::util::is_finite_c;

/// Separation threshold that flags sensitive dependence near the invariant
/// circle in the `z = 0` plane.
pub const SENSITIVITY_SEP: f64 = 1e-2;

/// Contrast between the fiber orbit of `(0, w0)` and the perturbed orbit of
/// `(delta, w0)` for a skew product.
#[derive(Debug, Clone)]
pub struct JuliaProbeReport {
    pub w0: Complex64,
    pub delta: Complex64,
    pub budget: usize,
    /// Max deviation of the fiber orbit from the circle `|w| = |w0|`.
    pub fiber_circle_dev_max: f64,
    /// Fiber orbit stayed within `2 |w0|` of that circle.
    pub fiber_bounded: bool,
    pub separation_max: f64,
    /// First step where the separation crossed `SENSITIVITY_SEP`.
    pub separation_first_exceed: Option<usize>,
    pub sensitive: bool,
    /// Modulus range of the perturbed orbit's w-coordinate.
    pub perturbed_w_mod_range: (f64, f64),
}

/// Contrast the invariant-fiber orbit of `(0, w0)` against the orbit of
/// `(delta, w0)`.
///
/// Callers should pick `|w0|` inside the numerically certified rotation
/// radius of `w -> lambda^{-1} w + w^3` (see `siegel::build_linearizer` with
/// rotation number `-theta`).
pub fn julia_probe_siegel_circle(
    map: &PlanarMap,
    w0: Complex64,
    delta: Complex64,
    budget: usize,
) -> Result<JuliaProbeReport> {
    if !matches!(map.family, MapFamily::SkewSiegel { .. }) {
        return Err(Error::Precondition(
            "julia_probe_siegel_circle requires a skew-siegel map".into(),
        ));
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut fiber = (zero, w0);
    let mut pert = (delta, w0);
    let r0 = w0.norm();
    let mut circle_dev: f64 = 0.0;
    let mut sep_max: f64 = 0.0;
    let mut first_exceed = None;
    let mut wmod_min = r0;
    let mut wmod_max = r0;
    for step in 1..=budget {
        fiber = map.apply(fiber);
        pert = map.apply(pert);
        if !(is_finite_c(fiber.1) && is_finite_c(pert.0) && is_finite_c(pert.1)) {
            return Err(Error::NonFinite(format!("probe overflowed at step {step}")));
        }
        debug_assert_eq!(fiber.0, zero, "z = 0 fiber must be exactly invariant");
        circle_dev = circle_dev.max((fiber.1.norm() - r0).abs());
        let sep = ((pert.0 - fiber.0).norm_sqr() + (pert.1 - fiber.1).norm_sqr()).sqrt();
        if sep > sep_max {
            sep_max = sep;
        }
        if first_exceed.is_none() && sep > SENSITIVITY_SEP {
            first_exceed = Some(step);
        }
        let wm = pert.1.norm();
        wmod_min = wmod_min.min(wm);
        wmod_max = wmod_max.max(wm);
    }
    Ok(JuliaProbeReport {
        w0,
        delta,
        budget,
        fiber_circle_dev_max: circle_dev,
        fiber_bounded: circle_dev <= 2.0 * r0,
        separation_max: sep_max,
        separation_first_exceed: first_exceed,
        sensitive: first_exceed.is_some(),
        perturbed_w_mod_range: (wmod_min, wmod_max),
    })
}

impl JuliaProbeReport {
    pub fn to_key_values(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("w0={},{}\n", self.w0.re, self.w0.im));
        s.push_str(&format!("delta={},{}\n", self.delta.re, self.delta.im));
        s.push_str(&format!("budget={}\n", self.budget));
        s.push_str(&format!(
            "fiber_circle_dev_max={}\n",
            self.fiber_circle_dev_max
        ));
        s.push_str(&format!("fiber_bounded={}\n", self.fiber_bounded));
        s.push_str(&format!("separation_max={}\n", self.separation_max));
        s.push_str(&format!(
            "separation_first_exceed={}\n",
            self.separation_first_exceed
                .map(|n| n.to_string())
                .unwrap_or_else(|| "none".into())
        ));
        s.push_str(&format!("sensitive={}\n", self.sensitive));
        s.push_str(&format!(
            "perturbed_w_mod_range={},{}\n",
            self.perturbed_w_mod_range.0, self.perturbed_w_mod_range.1
        ));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GOLDEN_MEAN;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fiber_orbit_stays_in_plane_and_bounded() {
        let f = PlanarMap::skew_siegel(GOLDEN_MEAN);
        let r = julia_probe_siegel_circle(&f, c(0.1, 0.0), c(0.0, 0.0), 20_000).unwrap();
        assert!(r.fiber_bounded);
        // Rotation-like: the fiber orbit hugs its invariant curve.
        assert!(r.fiber_circle_dev_max < 0.05, "{}", r.fiber_circle_dev_max);
    }

    #[test]
    fn zero_perturbation_zero_separation() {
        let f = PlanarMap::skew_siegel(GOLDEN_MEAN);
        let r = julia_probe_siegel_circle(&f, c(0.1, 0.0), c(0.0, 0.0), 5_000).unwrap();
        assert_eq!(r.separation_max, 0.0);
        assert!(!r.sensitive);
    }

    #[test]
    fn small_perturbation_amplifies() {
        let f = PlanarMap::skew_siegel(GOLDEN_MEAN);
        let delta = c(1e-6, 0.0);
        let short = julia_probe_siegel_circle(&f, c(0.1, 0.0), delta, 1_000).unwrap();
        let long = julia_probe_siegel_circle(&f, c(0.1, 0.0), delta, 100_000).unwrap();
        // The separation grows roughly linearly with the budget: the
        // perturbed reciprocal coordinate drifts coherently by ~|delta| per
        // step while the fiber orbit does not.
        assert!(long.separation_max > 20.0 * short.separation_max);
        assert!(long.separation_max > 1e3 * delta.norm());
    }

    #[test]
    fn sensitivity_flag_trips_at_large_budget() {
        // The perturbed reciprocal coordinate drifts by ~|delta| per step, so
        // the separation threshold 1e-2 is crossed near 1e-2 |u|^2 / |delta|
        // steps (~9e5 here).
        let f = PlanarMap::skew_siegel(GOLDEN_MEAN);
        let r = julia_probe_siegel_circle(&f, c(0.1, 0.0), c(1e-6, 0.0), 2_000_000).unwrap();
        assert!(r.sensitive, "separation max {}", r.separation_max);
        let first = r.separation_first_exceed.unwrap();
        assert!(
            (200_000..1_900_000).contains(&first),
            "threshold crossing at {first}"
        );
    }

    #[test]
    fn rejects_non_skew_maps() {
        let f = PlanarMap::cusp(2, 3, 2).unwrap();
        assert!(julia_probe_siegel_circle(&f, c(0.1, 0.0), c(0.0, 0.0), 10).is_err());
    }
}
