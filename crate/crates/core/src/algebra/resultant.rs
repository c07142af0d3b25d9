//! Sylvester resultant of two binary forms.

use num_complex::Complex64;

use crate::algebra::form::BinaryForm;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Tolerance for the shared-root decision, relative to unit-normalized
/// coefficient scale.
pub const RESULTANT_REL_TOL: f64 = 1e-10;

/// Resultant of `f` (degree m) and `g` (degree n) as the determinant of the
/// (m+n) x (m+n) Sylvester matrix of their full coefficient vectors. Using
/// the formal degrees makes it vanish exactly when the forms share a
/// projective root, including roots "at infinity" of the dehomogenized pair.
pub fn binary_resultant(f: &BinaryForm, g: &BinaryForm) -> Result<Complex64> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroForm("binary_resultant"));
    }
    let m = f.degree() as usize;
    let n = g.degree() as usize;
    if m == 0 && n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let size = m + n;
    let mut mat = vec![vec![ZERO; size]; size];
    for row in 0..n {
        for (k, &c) in f.coeffs().iter().enumerate() {
            mat[row][row + k] = c;
        }
    }
    for row in 0..m {
        for (k, &c) in g.coeffs().iter().enumerate() {
            mat[n + row][row + k] = c;
        }
    }
    Ok(det(mat))
}

/// True when `f` and `g` share a projective root, tested as
/// `|Res(f_hat, g_hat)| <= 1e-10` on unit-max-coefficient normalizations.
pub fn shares_projective_root(f: &BinaryForm, g: &BinaryForm) -> Result<bool> {
    let r = binary_resultant(&f.normalized(), &g.normalized())?;
    Ok(r.norm() <= RESULTANT_REL_TOL)
}

/// Determinant by LU with partial pivoting.
fn det(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    let mut result = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| {
                m[a][col]
                    .norm()
                    .partial_cmp(&m[b][col].norm())
                    .unwrap()
            })
            .unwrap();
        if m[pivot][col].norm() == 0.0 {
            return ZERO;
        }
        if pivot != col {
            m.swap(pivot, col);
            result = -result;
        }
        let p = m[col][col];
        result *= p;
        for row in (col + 1)..n {
            let factor = m[row][col] / p;
            if factor == ZERO {
                continue;
            }
            for k in col..n {
                let sub = factor * m[col][k];
                m[row][k] -= sub;
            }
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn disjoint_linear_forms() {
        let r = binary_resultant(&BinaryForm::var_z(), &BinaryForm::var_w()).unwrap();
        assert!((r - c(1.0, 0.0)).norm() < 1e-14);
        assert!(!shares_projective_root(&BinaryForm::var_z(), &BinaryForm::var_w()).unwrap());
    }

    #[test]
    fn equal_linear_forms() {
        let r = binary_resultant(&BinaryForm::var_z(), &BinaryForm::var_z()).unwrap();
        assert!(r.norm() < 1e-14);
        assert!(shares_projective_root(&BinaryForm::var_z(), &BinaryForm::var_z()).unwrap());
    }

    #[test]
    fn cubic_top_parts_disjoint() {
        // f = z^3 and g = a z w^2 + w^3 share no projective zero: z = 0
        // forces w = 0.
        let lambda_inv = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * 0.618);
        let f = BinaryForm::new(3, vec![c(1.0, 0.0), ZERO, ZERO, ZERO]);
        let g = BinaryForm::new(3, vec![ZERO, ZERO, lambda_inv, c(1.0, 0.0)]);
        let r = binary_resultant(&f, &g).unwrap();
        assert!(r.norm() > 1e-6);
        assert!(!shares_projective_root(&f, &g).unwrap());
    }

    #[test]
    fn shared_root_at_infinity_detected() {
        // f = z w, g = z^2: both vanish at [0:1].
        let f = BinaryForm::new(2, vec![ZERO, c(1.0, 0.0), ZERO]);
        let g = BinaryForm::new(2, vec![c(1.0, 0.0), ZERO, ZERO]);
        assert!(shares_projective_root(&f, &g).unwrap());
    }
}
