use num_complex::Complex64;

use crate::dynamics::{CPoint, PlanarMap};
use crate::error::{Error, Result};
use crate::exec::{map_indices, ExecMode};
use crate::parabolic::chart::LocalChart;
use crate::util::{circ_dist, is_finite_c, wrap_angle, TAU};

/// Allowed relative error of the rate-fit exponent against 1/(k-1).
pub const RATE_FIT_TOL: f64 = 0.2;

/// One attracting sector at a regular point of the curve: the region
/// `0 < |x| < eps, |u| < 2 eps, |arg(x) - theta_u(m)| < pi / (2k - 2)`
/// in chart coordinates.
#[derive(Debug, Clone)]
pub struct PetalSpec {
    pub base: CPoint,
    pub k: u32,
    /// Sector index in `1..=k-1`.
    pub m: u32,
    pub epsilon: f64,
    /// Coefficients of `psi(u) = 1 + u phi(u)`, ascending powers.
    pub psi: Vec<Complex64>,
}

impl PetalSpec {
    pub fn eval_psi(&self, u: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.psi.iter().rev() {
            acc = acc * u + c;
        }
        acc
    }

    /// The attracting direction `theta_u(m) = (2 m pi - arg psi(u)) / (k-1)`.
    pub fn theta(&self, u: Complex64) -> f64 {
        wrap_angle((TAU * self.m as f64 - self.eval_psi(u).arg()) / (self.k as f64 - 1.0))
    }

    pub fn half_width(&self) -> f64 {
        std::f64::consts::PI / (2.0 * (self.k as f64 - 1.0))
    }

    /// Exact evaluation of the three defining inequalities (all strict).
    pub fn contains(&self, local: (Complex64, Complex64)) -> bool {
        let (x, u) = local;
        let r = x.norm();
        if !(r > 0.0 && r < self.epsilon) {
            return false;
        }
        if u.norm() >= 2.0 * self.epsilon {
            return false;
        }
        circ_dist(x.arg(), self.theta(u)) < self.half_width()
    }

    /// Membership in the box `U_eps = {|x| < eps, |u| < 2 eps}`.
    pub fn in_box(&self, local: (Complex64, Complex64)) -> bool {
        local.0.norm() < self.epsilon && local.1.norm() < 2.0 * self.epsilon
    }
}

/// Outcome of one convergence seed.
#[derive(Debug, Clone)]
pub struct SeedRun {
    pub seed_local: (Complex64, Complex64),
    pub converged: bool,
    /// Least-squares slope of `ln |x_n|` against `ln n` over the final
    /// decade, negated (so the parabolic rate is ~ 1/(k-1)).
    pub rate_exponent: f64,
    /// Max relative deviation of `|x_n|` from `((k-1) n)^(-1/(k-1))` over the
    /// final decade.
    pub amplitude_rel_err: f64,
    pub final_x_norm: f64,
    pub max_u_norm: f64,
}

#[derive(Debug, Clone)]
pub struct PetalReport {
    pub m: u32,
    pub k: u32,
    pub epsilon: f64,
    pub theta0: f64,
    pub budget: usize,
    pub seeds: Vec<SeedRun>,
}

impl PetalReport {
    pub fn converged_count(&self) -> usize {
        self.seeds.iter().filter(|s| s.converged).count()
    }

    /// The parabolic rate exponent `1 / (k - 1)`.
    pub fn rate_target(&self) -> f64 {
        1.0 / (self.k as f64 - 1.0)
    }

    pub fn all_rates_within(&self, tol: f64) -> bool {
        let want = self.rate_target();
        self.seeds
            .iter()
            .all(|s| (s.rate_exponent - want).abs() <= tol * want)
    }
}

/// Deterministic seed grid inside the sector: radii and angular offsets from
/// low-discrepancy sequences, a small cycle of u-values.
fn sector_seeds(spec: &PetalSpec, n_seeds: usize, radial: (f64, f64)) -> Vec<(Complex64, Complex64)> {
    let mut seeds = Vec::with_capacity(n_seeds);
    let eps = spec.epsilon;
    for i in 0..n_seeds {
        let fi = i as f64;
        let r_frac = radial.0 + (radial.1 - radial.0) * ((fi * 0.6180339887498949) % 1.0);
        let ang_frac = -0.7 + 1.4 * ((fi * 0.3819660112501051) % 1.0);
        let u = match i % 4 {
            0 => Complex64::new(0.0, 0.0),
            1 => Complex64::from_polar(0.4 * eps, 0.9 * fi),
            2 => Complex64::from_polar(0.8 * eps, 2.3 * fi),
            _ => Complex64::from_polar(1.3 * eps, 4.1 * fi),
        };
        let theta = spec.theta(u);
        let x = Complex64::from_polar(r_frac * eps, theta + ang_frac * spec.half_width());
        seeds.push((x, u));
    }
    seeds
}

/// Track seeds through the sector: every orbit must stay in `U_eps` and its
/// `|x_n|` must decay at the parabolic rate.
///
/// Fails with `CalibrationFailed` if any seed escapes the box, which signals
/// that the calibrated radius was still too large.
pub fn petal_convergence_test(
    map: &PlanarMap,
    chart: &LocalChart,
    spec: &PetalSpec,
    n_seeds: usize,
    budget: usize,
    mode: ExecMode,
) -> Result<PetalReport> {
    let seeds = sector_seeds(spec, n_seeds, (0.4, 0.9));
    let runs = map_indices(mode, seeds.len(), |i| {
        run_convergence_seed(map, chart, spec, seeds[i], budget)
    });
    let mut out = Vec::with_capacity(runs.len());
    for r in runs {
        out.push(r?);
    }
    Ok(PetalReport {
        m: spec.m,
        k: spec.k,
        epsilon: spec.epsilon,
        theta0: spec.theta(Complex64::new(0.0, 0.0)),
        budget,
        seeds: out,
    })
}

fn run_convergence_seed(
    map: &PlanarMap,
    chart: &LocalChart,
    spec: &PetalSpec,
    seed_local: (Complex64, Complex64),
    budget: usize,
) -> Result<SeedRun> {
    let mut p = chart.to_ambient(seed_local);
    let mut max_u: f64 = seed_local.1.norm();
    // Log-spaced sample points across the final decade for the rate fit.
    let fit_lo = (budget / 10).max(1);
    let n_samples = 48usize;
    let mut samples: Vec<(f64, f64)> = Vec::with_capacity(n_samples);
    let mut next_sample = 0usize;
    let sample_at = |j: usize| -> usize {
        let t = j as f64 / (n_samples - 1) as f64;
        ((fit_lo as f64) * ((budget as f64) / (fit_lo as f64)).powf(t)).round() as usize
    };
    let mut final_x = seed_local.0.norm();
    for n in 1..=budget {
        p = map.apply(p);
        if !(is_finite_c(p.0) && is_finite_c(p.1)) {
            return Err(Error::NonFinite("petal orbit overflowed".into()));
        }
        let local = chart.to_local(p);
        if !spec.in_box(local) {
            return Err(Error::CalibrationFailed(format!(
                "seed ({}, {}) escaped the box at step {n}",
                seed_local.0, seed_local.1
            )));
        }
        max_u = max_u.max(local.1.norm());
        final_x = local.0.norm();
        while next_sample < n_samples && sample_at(next_sample) == n {
            samples.push((n as f64, local.0.norm()));
            next_sample += 1;
        }
        // Skip duplicate sample indices.
        while next_sample < n_samples && sample_at(next_sample) < n {
            next_sample += 1;
        }
    }
    let (rate, amp_err) = fit_rate(&samples, spec.k);
    Ok(SeedRun {
        seed_local,
        converged: final_x < 0.5 * seed_local.0.norm(),
        rate_exponent: rate,
        amplitude_rel_err: amp_err,
        final_x_norm: final_x,
        max_u_norm: max_u,
    })
}

/// Least-squares slope of ln|x| vs ln n (negated) and the max relative
/// deviation from `((k-1) n)^(-1/(k-1))`.
fn fit_rate(samples: &[(f64, f64)], k: u32) -> (f64, f64) {
    if samples.len() < 2 {
        return (f64::NAN, f64::NAN);
    }
    let n = samples.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    let mut amp_err: f64 = 0.0;
    let km1 = (k - 1) as f64;
    for &(step, x) in samples {
        let lx = step.ln();
        let ly = x.max(1e-300).ln();
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        let model = (km1 * step).powf(-1.0 / km1);
        amp_err = amp_err.max((x - model).abs() / model);
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    (-slope, amp_err)
}

/// Outcome of the repelling-sector experiment.
#[derive(Debug, Clone)]
pub struct ExitReport {
    pub m: u32,
    pub epsilon: f64,
    pub budget: usize,
    pub exited: usize,
    pub total: usize,
    pub max_exit_step: usize,
    /// Seeds that left through the `|x| >= eps` face.
    pub exited_x_face: usize,
    /// Seeds that left through the `|u| >= 2 eps` face first.
    pub exited_u_face: usize,
}

/// Seeds placed around the repelling direction `theta_u(m) + pi/(k-1)` must
/// leave the box `U_eps` within the budget.
pub fn petal_exit_test(
    map: &PlanarMap,
    chart: &LocalChart,
    spec: &PetalSpec,
    n_seeds: usize,
    budget: usize,
    mode: ExecMode,
) -> Result<ExitReport> {
    let shift = std::f64::consts::PI / (spec.k as f64 - 1.0);
    let eps = spec.epsilon;
    let mut seeds = Vec::with_capacity(n_seeds);
    for i in 0..n_seeds {
        let fi = i as f64;
        let r_frac = 0.75 + 0.2 * ((fi * 0.6180339887498949) % 1.0);
        let ang_frac = -0.25 + 0.5 * ((fi * 0.3819660112501051) % 1.0);
        let u = match i % 3 {
            0 => Complex64::new(0.0, 0.0),
            1 => Complex64::from_polar(0.6 * eps, 1.7 * fi),
            _ => Complex64::from_polar(1.2 * eps, 3.3 * fi),
        };
        let theta = spec.theta(u) + shift;
        let x = Complex64::from_polar(r_frac * eps, theta + ang_frac * spec.half_width());
        seeds.push((x, u));
    }
    let results = map_indices(mode, seeds.len(), |i| {
        let mut p = chart.to_ambient(seeds[i]);
        for n in 1..=budget {
            p = map.apply(p);
            if !(is_finite_c(p.0) && is_finite_c(p.1)) {
                return Some((n, true));
            }
            let local = chart.to_local(p);
            if local.0.norm() >= spec.epsilon {
                return Some((n, true));
            }
            if local.1.norm() >= 2.0 * spec.epsilon {
                return Some((n, false));
            }
        }
        None
    });
    let exited = results.iter().filter(|r| r.is_some()).count();
    let max_exit_step = results.iter().flatten().map(|&(n, _)| n).max().unwrap_or(0);
    let exited_x_face = results
        .iter()
        .flatten()
        .filter(|&&(_, x_face)| x_face)
        .count();
    Ok(ExitReport {
        m: spec.m,
        epsilon: spec.epsilon,
        budget,
        exited,
        total: n_seeds,
        max_exit_step,
        exited_x_face,
        exited_u_face: exited - exited_x_face,
    })
}

/// Mirror experiment for the inverse branch: seeds in the repelling sector
/// converge under the local inverse, seeds in the attracting sector leave
/// the box under it. Swapping the angle by pi/(k-1) swaps the verdicts.
pub fn inverse_duality_check(
    map: &PlanarMap,
    chart: &LocalChart,
    spec: &PetalSpec,
    n_seeds: usize,
    budget: usize,
) -> Result<(usize, usize)> {
    let shift = std::f64::consts::PI / (spec.k as f64 - 1.0);
    // Repelling-sector seeds should contract under F^{-1}.
    let mut contracted = 0usize;
    for i in 0..n_seeds {
        let fi = i as f64;
        let r_frac = 0.5 + 0.3 * ((fi * 0.6180339887498949) % 1.0);
        let theta = spec.theta(Complex64::new(0.0, 0.0)) + shift;
        let x = Complex64::from_polar(
            r_frac * spec.epsilon,
            theta + (-0.2 + 0.4 * ((fi * 0.3819660112501051) % 1.0)) * spec.half_width(),
        );
        let mut p = chart.to_ambient((x, Complex64::new(0.0, 0.0)));
        let mut ok = true;
        for _ in 0..budget {
            p = map.local_inverse_step(p)?;
            if !spec.in_box(chart.to_local(p)) {
                ok = false;
                break;
            }
        }
        let fx = chart.to_local(p).0.norm();
        if ok && fx < 0.7 * x.norm() {
            contracted += 1;
        }
    }
    // Attracting-sector seeds should leave the box under F^{-1}.
    let mut escaped = 0usize;
    for i in 0..n_seeds {
        let fi = i as f64;
        let r_frac = 0.6 + 0.3 * ((fi * 0.6180339887498949) % 1.0);
        let theta = spec.theta(Complex64::new(0.0, 0.0));
        let x = Complex64::from_polar(
            r_frac * spec.epsilon,
            theta + (-0.2 + 0.4 * ((fi * 0.3819660112501051) % 1.0)) * spec.half_width(),
        );
        let mut p = chart.to_ambient((x, Complex64::new(0.0, 0.0)));
        for _ in 0..budget {
            p = map.local_inverse_step(p)?;
            if !spec.in_box(chart.to_local(p)) {
                escaped += 1;
                break;
            }
        }
    }
    Ok((contracted, escaped))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_fit_recovers_one_dimensional_model() {
        // Brute-force iteration of x -> x - x^k decays like
        // ((k-1) n)^(-1/(k-1)); the fitted exponent over the final decade
        // must land on 1/(k-1) and the amplitude deviation must be small.
        for k in [2u32, 3, 4] {
            let budget = 200_000usize;
            let fit_lo = budget / 10;
            let mut x = 0.2f64;
            let mut samples = Vec::new();
            for n in 1..=budget {
                x -= x.powi(k as i32);
                if n >= fit_lo && (n % (budget / 64).max(1) == 0 || n == budget) {
                    samples.push((n as f64, x));
                }
            }
            let (rate, amp) = fit_rate(&samples, k);
            let want = 1.0 / (k as f64 - 1.0);
            assert!(
                (rate - want).abs() < 0.02 * want,
                "k = {k}: fitted exponent {rate}, want {want}"
            );
            assert!(amp < 0.05, "k = {k}: amplitude deviation {amp}");
        }
    }

    #[test]
    fn sector_half_width_and_theta_spacing() {
        let spec = PetalSpec {
            base: (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
            k: 5,
            m: 1,
            epsilon: 0.01,
            psi: vec![Complex64::new(1.0, 0.0)],
        };
        assert!((spec.half_width() - std::f64::consts::PI / 8.0).abs() < 1e-15);
        // Adjacent attracting directions are 2 pi / (k - 1) apart.
        let mut spec2 = spec.clone();
        spec2.m = 2;
        let gap = crate::util::circ_dist(
            spec.theta(Complex64::new(0.0, 0.0)),
            spec2.theta(Complex64::new(0.0, 0.0)),
        );
        assert!((gap - std::f64::consts::TAU / 4.0).abs() < 1e-12);
    }
}
