use num_complex::Complex64;

use crate::algebra::poly::BivarPoly;
use crate::util::cpow;

/// A binary form: homogeneous polynomial of fixed degree `d` in `(z, w)`.
///
/// `coeffs[i]` is the coefficient of `z^(d-i) * w^i`, so the slots run
/// `z^d, z^(d-1) w, ..., w^d`. Leading or trailing slots may be zero; the
/// zero form of degree `d` keeps its `d + 1` slots.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryForm {
    degree: u32,
    coeffs: Vec<Complex64>,
}

impl BinaryForm {
    pub fn new(degree: u32, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(
            coeffs.len(),
            degree as usize + 1,
            "binary form of degree {degree} needs {} coefficients",
            degree + 1
        );
        BinaryForm { degree, coeffs }
    }

    pub fn zero(degree: u32) -> Self {
        BinaryForm {
            degree,
            coeffs: vec![Complex64::new(0.0, 0.0); degree as usize + 1],
        }
    }

    /// Linear form `z`.
    pub fn var_z() -> Self {
        BinaryForm::new(1, vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
    }

    /// Linear form `w`.
    pub fn var_w() -> Self {
        BinaryForm::new(1, vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Coefficient of `z^(d-i) w^i`.
    pub fn coeff(&self, i: u32) -> Complex64 {
        self.coeffs[i as usize]
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        let d = self.degree;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &c) in self.coeffs.iter().enumerate() {
            let i = i as u32;
            acc += c * cpow(z, d - i) * cpow(w, i);
        }
        acc
    }

    pub fn scale(&self, s: Complex64) -> Self {
        BinaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Normalize so the largest coefficient has modulus 1; zero form unchanged.
    pub fn normalized(&self) -> Self {
        let m = self.max_coeff();
        if m == 0.0 {
            self.clone()
        } else {
            self.scale(Complex64::new(1.0 / m, 0.0))
        }
    }

    pub fn mul(&self, rhs: &BinaryForm) -> BinaryForm {
        let d = self.degree + rhs.degree;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); d as usize + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        BinaryForm { degree: d, coeffs }
    }

    pub fn sub(&self, rhs: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree, rhs.degree, "degree mismatch in form subtraction");
        BinaryForm {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn to_poly(&self) -> BivarPoly {
        let d = self.degree;
        let mut p = BivarPoly::zero();
        for (i, &c) in self.coeffs.iter().enumerate() {
            let i = i as u32;
            p.add_term(d - i, i, c);
        }
        p
    }
}

/// The degree-`j` graded piece of `p`; the zero form if absent.
pub fn homogeneous_part(p: &BivarPoly, j: u32) -> BinaryForm {
    let mut form = BinaryForm::zero(j);
    for (&(i, k), &c) in p.terms() {
        if i + k == j {
            form.coeffs[k as usize] = c;
        }
    }
    form
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;

    #[test]
    fn grading_examples() {
        // p = z^3 + z w: degree-2 piece is z w, degree-3 piece is z^3.
        let p = parse_poly("z^3 + z*w").unwrap();
        let f2 = homogeneous_part(&p, 2);
        assert_eq!(f2.degree(), 2);
        assert_eq!(f2.coeff(1), Complex64::new(1.0, 0.0));
        assert_eq!(f2.coeff(0), Complex64::new(0.0, 0.0));
        assert_eq!(f2.coeff(2), Complex64::new(0.0, 0.0));

        let f3 = homogeneous_part(&p, 3);
        assert_eq!(f3.coeff(0), Complex64::new(1.0, 0.0));
        assert!(homogeneous_part(&p, 5).is_zero());
    }

    #[test]
    fn linear_part_of_siegel_factor() {
        // p = lambda z + z^3 has degree-1 piece lambda z.
        let lambda = Complex64::from_polar(1.0, 2.4);
        let mut p = BivarPoly::monomial(1, 0, lambda);
        p.add_term(3, 0, Complex64::new(1.0, 0.0));
        let f1 = homogeneous_part(&p, 1);
        assert_eq!(f1.coeff(0), lambda);
    }

    #[test]
    fn reconstruction_from_parts() {
        let p = parse_poly("(0.5+0.25i)*z^2*w + w^2 + 3").unwrap();
        let d = p.degree().unwrap();
        let mut sum = BivarPoly::zero();
        for j in 0..=d {
            sum = &sum + &homogeneous_part(&p, j).to_poly();
        }
        assert_eq!(sum, p);
    }
}
