use num_complex::Complex64;

use crate::algebra::{
    binary_resultant, homogeneous_part, BivarPoly, RESULTANT_REL_TOL,
};
use crate::error::{Error, Result};
use crate::util::{cpow, TAU};

pub type CPoint = (Complex64, Complex64);

/// One step of the 1-D factor `z -> lambda z + z^3`.
///
/// Shared by the planar skew product and the 1-D reference orbits so the two
/// evaluation paths agree bit-for-bit.
#[inline]
pub fn siegel_factor_step(lambda: Complex64, z: Complex64) -> Complex64 {
    lambda * z + cpow(z, 3)
}

/// Structured origin of a map, carrying its constructor parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum MapFamily {
    /// `f(z, w) = (lambda z + z^3, lambda^{-1}(w + z w^2) + w^3)`.
    SkewSiegel { theta: f64, lambda: Complex64 },
    /// `F = Id + g^k (P, Q)`, tangent to the identity on `{g = 0}`.
    TangentIdentity {
        g: BivarPoly,
        p_fun: BivarPoly,
        q_fun: BivarPoly,
        k: u32,
    },
    /// `F = Id + (z^p - w^q)^k (z, -w)`.
    Cusp { p: u32, q: u32, k: u32 },
    /// An arbitrary polynomial pair.
    Generic,
}

/// A polynomial endomorphism of C^2.
#[derive(Debug, Clone)]
pub struct PlanarMap {
    pub pz: BivarPoly,
    pub pw: BivarPoly,
    pub family: MapFamily,
}

impl PlanarMap {
    /// The skew product with rotation number `theta`.
    pub fn skew_siegel(theta: f64) -> Self {
        let lambda = Complex64::from_polar(1.0, TAU * theta);
        let lambda_inv = lambda.conj();
        let one = Complex64::new(1.0, 0.0);
        let mut pz = BivarPoly::zero();
        pz.add_term(1, 0, lambda);
        pz.add_term(3, 0, one);
        let mut pw = BivarPoly::zero();
        pw.add_term(0, 1, lambda_inv);
        pw.add_term(1, 2, lambda_inv);
        pw.add_term(0, 3, one);
        PlanarMap {
            pz,
            pw,
            family: MapFamily::SkewSiegel { theta, lambda },
        }
    }

    /// `F = Id + g^k (P, Q)`; requires `k >= 2`.
    pub fn tangent_identity(g: BivarPoly, p_fun: BivarPoly, q_fun: BivarPoly, k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::BadOrder(k));
        }
        let gk = g.pow(k);
        let pz = &BivarPoly::var_z() + &(&gk * &p_fun);
        let pw = &BivarPoly::var_w() + &(&gk * &q_fun);
        Ok(PlanarMap {
            pz,
            pw,
            family: MapFamily::TangentIdentity { g, p_fun, q_fun, k },
        })
    }

    /// The cusp family `F = Id + (z^p - w^q)^k (z, -w)` with coprime `p, q`.
    pub fn cusp(p: u32, q: u32, k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::BadOrder(k));
        }
        if p == 0 || q == 0 || gcd(p, q) != 1 {
            return Err(Error::Precondition(format!(
                "cusp family needs coprime p, q >= 1, got ({p}, {q})"
            )));
        }
        let one = Complex64::new(1.0, 0.0);
        let g = {
            let mut g = BivarPoly::monomial(p, 0, one);
            g.add_term(0, q, -one);
            g
        };
        let gk = g.pow(k);
        let pz = &BivarPoly::var_z() + &(&gk * &BivarPoly::var_z());
        let pw = &BivarPoly::var_w() - &(&gk * &BivarPoly::var_w());
        Ok(PlanarMap {
            pz,
            pw,
            family: MapFamily::Cusp { p, q, k },
        })
    }

    /// An arbitrary polynomial pair.
    pub fn generic(pz: BivarPoly, pw: BivarPoly) -> Self {
        PlanarMap {
            pz,
            pw,
            family: MapFamily::Generic,
        }
    }

    /// The defining function, order, and displacement pair for maps of the
    /// form `Id + g^k (P, Q)`.
    pub fn tangent_data(&self) -> Option<(BivarPoly, BivarPoly, BivarPoly, u32)> {
        match &self.family {
            MapFamily::TangentIdentity { g, p_fun, q_fun, k } => {
                Some((g.clone(), p_fun.clone(), q_fun.clone(), *k))
            }
            MapFamily::Cusp { p, q, k } => {
                let one = Complex64::new(1.0, 0.0);
                let mut g = BivarPoly::monomial(*p, 0, one);
                g.add_term(0, *q, -one);
                Some((
                    g,
                    BivarPoly::var_z(),
                    BivarPoly::var_w().scale(-one),
                    *k,
                ))
            }
            _ => None,
        }
    }

    /// Evaluate the map at a point.
    ///
    /// Structured families use the factored evaluation (`g` first, then its
    /// power): on the curve `{g = 0}` the displacement then vanishes to
    /// rounding instead of suffering expanded-form cancellation.
    #[inline]
    pub fn apply(&self, p: CPoint) -> CPoint {
        let (z, w) = p;
        match &self.family {
            MapFamily::SkewSiegel { lambda, .. } => {
                let lambda_inv = lambda.conj();
                let zn = siegel_factor_step(*lambda, z);
                let wn = lambda_inv * (w + z * w * w) + cpow(w, 3);
                (zn, wn)
            }
            MapFamily::Cusp { p, q, k } => {
                let g = cpow(z, *p) - cpow(w, *q);
                let gk = cpow(g, *k);
                (z + gk * z, w - gk * w)
            }
            MapFamily::TangentIdentity { g, p_fun, q_fun, k } => {
                let gv = g.eval(z, w);
                let gk = cpow(gv, *k);
                (z + gk * p_fun.eval(z, w), w + gk * q_fun.eval(z, w))
            }
            MapFamily::Generic => (self.pz.eval(z, w), self.pw.eval(z, w)),
        }
    }

    /// Jacobian matrix [[dpz/dz, dpz/dw], [dpw/dz, dpw/dw]] at a point.
    pub fn jacobian(&self, p: CPoint) -> [[Complex64; 2]; 2] {
        let (z, w) = p;
        [
            [
                self.pz.derivative_z().eval(z, w),
                self.pz.derivative_w().eval(z, w),
            ],
            [
                self.pw.derivative_z().eval(z, w),
                self.pw.derivative_w().eval(z, w),
            ],
        ]
    }

    /// One step of the local inverse near `target`, solved by Newton
    /// iteration on `F(x) = target`. Valid where the map is a local
    /// biholomorphism (e.g. near the curve of a tangent-to-identity map).
    pub fn local_inverse_step(&self, target: CPoint) -> Result<CPoint> {
        let mut x = target;
        for _ in 0..32 {
            let fx = self.apply(x);
            let rz = fx.0 - target.0;
            let rw = fx.1 - target.1;
            let res = rz.norm() + rw.norm();
            if res < 1e-14 * (1.0 + target.0.norm() + target.1.norm()) {
                return Ok(x);
            }
            let j = self.jacobian(x);
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det.norm() < 1e-300 {
                return Err(Error::Precondition(
                    "singular Jacobian in local inverse".into(),
                ));
            }
            let dz = (rz * j[1][1] - rw * j[0][1]) / det;
            let dw = (rw * j[0][0] - rz * j[1][0]) / det;
            x = (x.0 - dz, x.1 - dw);
        }
        Ok(x)
    }

    /// Whether the homogenization to degree `d = max(deg pz, deg pw)` defines
    /// an endomorphism of the projective plane: the degree-`d` parts of the
    /// two components must share no projective root.
    pub fn extends_to_projective_plane(&self) -> bool {
        let dz = self.pz.degree().unwrap_or(0);
        let dw = self.pw.degree().unwrap_or(0);
        let d = dz.max(dw);
        if d == 0 {
            return false;
        }
        let top_z = homogeneous_part(&self.pz, d);
        let top_w = homogeneous_part(&self.pw, d);
        if top_z.is_zero() || top_w.is_zero() {
            return false;
        }
        match binary_resultant(&top_z.normalized(), &top_w.normalized()) {
            Ok(r) => r.norm() > RESULTANT_REL_TOL,
            Err(_) => false,
        }
    }
}

pub(crate) fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
