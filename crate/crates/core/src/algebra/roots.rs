//! Projective roots of binary forms.
//!
//! Strategy: dehomogenize with respect to the larger-coefficient end, read
//! off exact axis roots from exact-zero end coefficients, find the affine
//! roots as companion-matrix eigenvalues (complex Hessenberg QR with
//! Wilkinson shifts), polish with Newton, and cluster multiplicities.

use num_complex::Complex64;

use crate::algebra::form::BinaryForm;
use crate::algebra::proj::ProjPoint;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const QR_EPS: f64 = 1e-14;
const MAX_QR_SWEEPS_PER_EIG: usize = 64;
const NEWTON_STEPS: usize = 8;
/// Relative clustering distance for multiple roots.
const CLUSTER_REL: f64 = 1e-7;
/// Residual gate for merging clusters that stem from one multiple root.
const MERGE_RESIDUAL: f64 = 1e-11;
const MERGE_MAX_DIST: f64 = 5e-2;

/// All projective roots of `f` with multiplicities summing to `degree(f)`.
pub fn binary_form_roots(f: &BinaryForm) -> Result<Vec<(ProjPoint, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroForm("binary_form_roots"));
    }
    let d = f.degree();
    if d == 0 {
        return Ok(Vec::new());
    }
    let f = f.normalized();
    let c = f.coeffs();
    // coeffs[i] multiplies z^(d-i) w^i. Chart A treats f(1, t) with t = w/z;
    // chart B treats f(s, 1) with s = z/w. Pick the chart whose affine
    // polynomial has the larger leading coefficient.
    let chart_a = c[d as usize].norm() >= c[0].norm();
    let affine: Vec<Complex64> = if chart_a {
        c.to_vec()
    } else {
        c.iter().rev().copied().collect()
    };

    let mut out: Vec<(ProjPoint, u32)> = Vec::new();
    // Exact zero leading coefficients are roots of the opposite axis
    // direction; exact zero trailing coefficients are roots at t = 0.
    let deg_eff = (0..affine.len()).rev().find(|&i| affine[i] != ZERO).unwrap();
    let ord_zero = (0..=deg_eff).find(|&i| affine[i] != ZERO).unwrap();
    let inf_mult = d as usize - deg_eff;
    if inf_mult > 0 {
        let p = if chart_a {
            ProjPoint::w_axis()
        } else {
            ProjPoint::z_axis()
        };
        out.push((p, inf_mult as u32));
    }
    if ord_zero > 0 {
        let p = if chart_a {
            ProjPoint::z_axis()
        } else {
            ProjPoint::w_axis()
        };
        out.push((p, ord_zero as u32));
    }

    let reduced: Vec<Complex64> = affine[ord_zero..=deg_eff].to_vec();
    if reduced.len() > 1 {
        let affine_roots = affine_poly_roots(&reduced);
        let clusters = cluster_roots(affine_roots, &reduced);
        for (t, mult) in clusters {
            let p = if chart_a {
                ProjPoint::new(Complex64::new(1.0, 0.0), t)
            } else {
                ProjPoint::new(t, Complex64::new(1.0, 0.0))
            }
            .ok_or_else(|| Error::NonFinite("projective root".into()))?;
            out.push((p, mult));
        }
    }
    debug_assert_eq!(out.iter().map(|&(_, m)| m).sum::<u32>(), d);
    Ok(out)
}

/// Roots of `sum coeffs[i] t^i` (constant and leading coefficients nonzero),
/// as polished companion-matrix eigenvalues.
fn affine_poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs[..n].iter().map(|&c| c / lead).collect();
    // Companion matrix: ones on the subdiagonal, -a_i in the last column.
    let mut h = vec![vec![ZERO; n]; n];
    for i in 0..n {
        h[i][n - 1] = -monic[i];
        if i + 1 < n {
            h[i + 1][i] = Complex64::new(1.0, 0.0);
        }
    }
    let mut eigs = hessenberg_eigenvalues(h);
    for e in eigs.iter_mut() {
        *e = newton_polish(coeffs, *e);
    }
    // Deterministic ordering for downstream clustering and reports.
    eigs.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    eigs
}

fn horner(coeffs: &[Complex64], t: Complex64) -> Complex64 {
    let mut acc = ZERO;
    for &c in coeffs.iter().rev() {
        acc = acc * t + c;
    }
    acc
}

fn horner_deriv(coeffs: &[Complex64], t: Complex64) -> Complex64 {
    let mut acc = ZERO;
    for i in (1..coeffs.len()).rev() {
        acc = acc * t + coeffs[i] * (i as f64);
    }
    acc
}

fn newton_polish(coeffs: &[Complex64], mut t: Complex64) -> Complex64 {
    let mut best = t;
    let mut best_val = horner(coeffs, t).norm();
    for _ in 0..NEWTON_STEPS {
        let p = horner(coeffs, t);
        let dp = horner_deriv(coeffs, t);
        if dp.norm() < 1e-300 {
            break;
        }
        t -= p / dp;
        let v = horner(coeffs, t).norm();
        if v < best_val {
            best_val = v;
            best = t;
        }
    }
    best
}

/// Cluster affine roots into (centroid, multiplicity) groups.
///
/// Single-linkage at relative distance 1e-7 catches double roots; a second
/// residual-guarded pass merges the wider eigenvalue scatter of higher
/// multiplicities without joining genuinely distinct roots.
fn cluster_roots(roots: Vec<Complex64>, coeffs: &[Complex64]) -> Vec<(Complex64, u32)> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = roots[i].norm().max(roots[j].norm()).max(1.0);
            if (roots[i] - roots[j]).norm() <= CLUSTER_REL * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut clusters: Vec<(Complex64, u32)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        if r == i {
            let members: Vec<Complex64> = (0..n)
                .filter(|&j| find(&mut parent, j) == i)
                .map(|j| roots[j])
                .collect();
            let centroid =
                members.iter().sum::<Complex64>() / Complex64::new(members.len() as f64, 0.0);
            clusters.push((centroid, members.len() as u32));
        }
    }
    // Merge clusters whose midpoint still evaluates to ~zero: eigenvalue
    // scatter of an m-fold root is ~eps^(1/m), far past the 1e-7 gate.
    let scale_q: f64 = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut merged = true;
    while merged {
        merged = false;
        'outer: for i in 0..clusters.len() {
            for j in (i + 1)..clusters.len() {
                let (ci, mi) = clusters[i];
                let (cj, mj) = clusters[j];
                let dist = (ci - cj).norm();
                let span = ci.norm().max(cj.norm()).max(1.0);
                if dist > MERGE_MAX_DIST * span {
                    continue;
                }
                let mid = (ci * Complex64::new(mi as f64, 0.0)
                    + cj * Complex64::new(mj as f64, 0.0))
                    / Complex64::new((mi + mj) as f64, 0.0);
                let denom = scale_q * (1.0 + mid.norm()).powi(coeffs.len() as i32 - 1);
                if horner(coeffs, mid).norm() <= MERGE_RESIDUAL * denom {
                    clusters[i] = (mid, mi + mj);
                    clusters.remove(j);
                    merged = true;
                    break 'outer;
                }
            }
        }
    }
    clusters
}

/// Eigenvalues of a complex upper Hessenberg matrix via shifted QR.
fn hessenberg_eigenvalues(mut h: Vec<Vec<Complex64>>) -> Vec<Complex64> {
    let n = h.len();
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n;
    let mut sweeps_since_deflation = 0usize;
    while hi > 0 {
        if hi == 1 {
            eigs.push(h[0][0]);
            hi = 0;
            continue;
        }
        // Find the start of the trailing irreducible block.
        let mut lo = hi - 1;
        while lo > 0 {
            let s = h[lo - 1][lo - 1].norm() + h[lo][lo].norm();
            let s = if s == 0.0 { 1.0 } else { s };
            if h[lo][lo - 1].norm() <= QR_EPS * s {
                h[lo][lo - 1] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eigs.push(h[hi - 1][hi - 1]);
            hi -= 1;
            sweeps_since_deflation = 0;
            continue;
        }
        if lo + 2 == hi {
            let (e1, e2) = eig2(h[lo][lo], h[lo][lo + 1], h[lo + 1][lo], h[lo + 1][lo + 1]);
            eigs.push(e1);
            eigs.push(e2);
            hi -= 2;
            sweeps_since_deflation = 0;
            continue;
        }
        // Wilkinson shift from the trailing 2x2; a deterministic exceptional
        // shift breaks rare stagnation.
        let mut mu = {
            let (e1, e2) = eig2(
                h[hi - 2][hi - 2],
                h[hi - 2][hi - 1],
                h[hi - 1][hi - 2],
                h[hi - 1][hi - 1],
            );
            let d = h[hi - 1][hi - 1];
            if (e1 - d).norm() <= (e2 - d).norm() {
                e1
            } else {
                e2
            }
        };
        sweeps_since_deflation += 1;
        if sweeps_since_deflation % 24 == 0 {
            mu += Complex64::new(h[hi - 1][hi - 2].norm(), 0.0);
        }
        if sweeps_since_deflation > MAX_QR_SWEEPS_PER_EIG * hi {
            // Give up on further shifts; return the diagonal of what's left.
            for i in 0..hi {
                eigs.push(h[i][i]);
            }
            break;
        }
        qr_step(&mut h, lo, hi, mu);
    }
    eigs
}

/// Eigenvalues of [[a, b], [c, d]].
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let tr = (a + d) * Complex64::new(0.5, 0.0);
    let det = a * d - b * c;
    let disc = (tr * tr - det).sqrt();
    (tr + disc, tr - disc)
}

/// One implicit-shift QR sweep on the active block `lo..hi`.
fn qr_step(h: &mut [Vec<Complex64>], lo: usize, hi: usize, mu: Complex64) {
    let n = h.len();
    let mut rotations: Vec<(f64, Complex64)> = Vec::with_capacity(hi - lo - 1);
    for i in lo..hi {
        h[i][i] -= mu;
    }
    // Left Givens sweep: eliminate the subdiagonal.
    for i in lo..hi - 1 {
        let a = h[i][i];
        let b = h[i + 1][i];
        let (c, s) = givens(a, b);
        rotations.push((c, s));
        for col in i..n {
            let x = h[i][col];
            let y = h[i + 1][col];
            h[i][col] = Complex64::new(c, 0.0) * x + s * y;
            h[i + 1][col] = -s.conj() * x + Complex64::new(c, 0.0) * y;
        }
    }
    // Right multiply by the adjoints, restoring Hessenberg form.
    for (idx, &(c, s)) in rotations.iter().enumerate() {
        let i = lo + idx;
        let top = (i + 2).min(hi);
        for row in 0..top {
            let x = h[row][i];
            let y = h[row][i + 1];
            h[row][i] = Complex64::new(c, 0.0) * x + s.conj() * y;
            h[row][i + 1] = -s * x + Complex64::new(c, 0.0) * y;
        }
    }
    for i in lo..hi {
        h[i][i] += mu;
    }
}

/// Unitary Givens rotation with real `c`: [[c, s], [-conj(s), c]] maps
/// `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, ZERO);
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    let c = na / r;
    let s = (a / na) * b.conj() / r;
    (c, s)
}
