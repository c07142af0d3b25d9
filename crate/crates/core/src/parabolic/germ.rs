use num_complex::Complex64;

use crate::algebra::{binary_form_roots, homogeneous_part, BinaryForm, BivarPoly, ProjPoint};
use crate::dynamics::{CPoint, PlanarMap};
use crate::error::{Error, Result};

/// Relative threshold below which a characteristic eigenvalue counts as
/// degenerate.
pub const DEGENERATE_REL_TOL: f64 = 1e-10;
/// Residual allowed for "the sample lies on the curve".
pub const ON_CURVE_TOL: f64 = 1e-8;
/// Relative threshold for treating a gradient as vanishing. Evaluated
/// partials carry ~1e-15 relative error, so anything above the rounding
/// floor of the coefficient scale counts as nonzero.
pub const SINGULAR_REL_TOL: f64 = 1e-13;
/// Relative coefficient threshold when detecting the germ order.
const GERM_TRIM: f64 = 1e-9;

/// Leading data of a germ tangent to the identity: after translating `base`
/// to the origin, the map is `Id + F_k + (higher order)`.
#[derive(Debug, Clone)]
pub struct GermData {
    pub base: CPoint,
    pub k: u32,
    pub fk: (BinaryForm, BinaryForm),
}

/// A characteristic direction `[v]` with `F_k(v) = lambda v`.
#[derive(Debug, Clone)]
pub struct CharDirection {
    pub v: ProjPoint,
    pub lambda_char: Complex64,
    pub degenerate: bool,
    pub multiplicity: u32,
}

/// Result of solving for characteristic directions: either the dicritical
/// case (every direction is characteristic) or the finite list.
#[derive(Debug, Clone)]
pub enum CharDirections {
    Dicritical,
    Directions(Vec<CharDirection>),
}

/// Translate `base` to the origin and extract the leading homogeneous data
/// of `F - Id`.
///
/// Maps with recorded `(g, P, Q, k)` data take a structured path: at a
/// regular point of the curve the leading part is `(dg . v)^k (P, Q)(base)`,
/// computed without expanding the full displacement (whose high-degree
/// coefficients would otherwise drown the tiny leading ones).
pub fn germ_at(map: &PlanarMap, base: CPoint) -> Result<GermData> {
    if let Some((g, p_fun, q_fun, k)) = map.tangent_data() {
        let shift_z = &BivarPoly::constant(base.0) + &BivarPoly::var_z();
        let shift_w = &BivarPoly::constant(base.1) + &BivarPoly::var_w();
        let g_local = g.substitute(&shift_z, &shift_w);
        let on_curve = g_local.coeff(0, 0).norm()
            <= ON_CURVE_TOL * g.max_coeff() * (1.0 + base.0.norm() + base.1.norm());
        let lin = homogeneous_part(&g_local, 1);
        let pv = p_fun.eval(base.0, base.1);
        let qv = q_fun.eval(base.0, base.1);
        let disp_scale = pv.norm().max(qv.norm());
        if on_curve && !lin.is_zero() && disp_scale > 0.0 {
            let mut lin_pow = lin.clone();
            for _ in 1..k {
                lin_pow = lin_pow.mul(&lin);
            }
            return Ok(GermData {
                base,
                k,
                fk: (lin_pow.scale(pv), lin_pow.scale(qv)),
            });
        }
        // Singular base, (P, Q) vanishing, or base off the curve: fall
        // through to the generic expansion.
    }
    let shift_z = &BivarPoly::constant(base.0) + &BivarPoly::var_z();
    let shift_w = &BivarPoly::constant(base.1) + &BivarPoly::var_w();
    let dz = &map.pz.substitute(&shift_z, &shift_w) - &BivarPoly::constant(base.0);
    let dw = &map.pw.substitute(&shift_z, &shift_w) - &BivarPoly::constant(base.1);
    let disp_z = (&dz - &BivarPoly::var_z()).trim_relative(GERM_TRIM);
    let disp_w = (&dw - &BivarPoly::var_w()).trim_relative(GERM_TRIM);
    if disp_z.is_zero() && disp_w.is_zero() {
        return Err(Error::Precondition(
            "map is the identity to working precision near base".into(),
        ));
    }
    let k = disp_z
        .terms()
        .chain(disp_w.terms())
        .map(|(&(i, j), _)| i + j)
        .min()
        .unwrap();
    if k < 2 {
        return Err(Error::Precondition(format!(
            "germ at base is not tangent to the identity (order {k})"
        )));
    }
    Ok(GermData {
        base,
        k,
        fk: (
            homogeneous_part(&disp_z, k),
            homogeneous_part(&disp_w, k),
        ),
    })
}

/// Characteristic directions of a leading pair `F_k = (F_k1, F_k2)`: the
/// projective roots of `W(v) = v1 F_k2(v) - v2 F_k1(v)`, a form of degree
/// k + 1. `W == 0` identically is the dicritical case.
pub fn char_directions(fk: &(BinaryForm, BinaryForm)) -> Result<CharDirections> {
    if fk.0.is_zero() && fk.1.is_zero() {
        return Err(Error::ZeroForm("char_directions"));
    }
    let scale = fk.0.max_coeff().max(fk.1.max_coeff());
    let w_form = BinaryForm::var_z()
        .mul(&fk.1)
        .sub(&BinaryForm::var_w().mul(&fk.0));
    // Coefficients of W below rounding scale mean W vanishes identically.
    if w_form.max_coeff() <= 1e-12 * scale {
        return Ok(CharDirections::Dicritical);
    }
    let roots = binary_form_roots(&w_form)?;
    let mut dirs = Vec::with_capacity(roots.len());
    for (v, multiplicity) in roots {
        let (v1, v2) = v.as_pair();
        let lambda_char = if v1.norm() >= v2.norm() {
            fk.0.eval(v1, v2) / v1
        } else {
            fk.1.eval(v1, v2) / v2
        };
        dirs.push(CharDirection {
            v,
            lambda_char,
            degenerate: lambda_char.norm() <= DEGENERATE_REL_TOL * scale,
            multiplicity,
        });
    }
    Ok(CharDirections::Directions(dirs))
}

/// The transversality functional `g_z P + g_w Q` at a sample point of the
/// regular part of `{g = 0}`. Nonzero value means the translated germ has a
/// non-degenerate characteristic direction there.
pub fn condition_check(
    g: &BivarPoly,
    p_fun: &BivarPoly,
    q_fun: &BivarPoly,
    sample: CPoint,
) -> Result<Complex64> {
    let (z, w) = sample;
    let scale = g.max_coeff();
    let gv = g.eval(z, w);
    let point_norm = (z.norm_sqr() + w.norm_sqr()).sqrt();
    let denom = scale * (1.0 + point_norm.powi(g.degree().unwrap_or(0) as i32));
    if gv.norm() > ON_CURVE_TOL * denom {
        return Err(Error::Precondition(format!(
            "sample is not on the curve: |g| = {:.3e}",
            gv.norm()
        )));
    }
    let gz = g.derivative_z().eval(z, w);
    let gw = g.derivative_w().eval(z, w);
    let grad_scale = scale * (1.0 + point_norm).powi(g.degree().unwrap_or(1).saturating_sub(1) as i32);
    if gz.norm() <= SINGULAR_REL_TOL * grad_scale && gw.norm() <= SINGULAR_REL_TOL * grad_scale {
        return Err(Error::SingularSample);
    }
    Ok(gz * p_fun.eval(z, w) + gw * q_fun.eval(z, w))
}
