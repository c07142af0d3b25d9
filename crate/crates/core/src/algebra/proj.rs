use num_complex::Complex64;

/// A point of the complex projective line, stored as a canonical
/// representative.
///
/// Normalization: scale so the larger-modulus coordinate has modulus 1 and
/// argument 0 (ties anchor on the first coordinate). Two equal projective
/// points then have equal representatives up to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjPoint {
    pub v1: Complex64,
    pub v2: Complex64,
}

impl ProjPoint {
    /// Canonical representative of `[v1 : v2]`; `None` for `(0, 0)`.
    pub fn new(v1: Complex64, v2: Complex64) -> Option<Self> {
        let (n1, n2) = (v1.norm(), v2.norm());
        if !(n1.is_finite() && n2.is_finite()) || (n1 == 0.0 && n2 == 0.0) {
            return None;
        }
        // Dividing by the larger-modulus coordinate makes it exactly 1 (so its
        // argument is 0) and bounds the other coordinate by 1.
        let anchor = if n1 >= n2 { v1 } else { v2 };
        Some(ProjPoint {
            v1: v1 / anchor,
            v2: v2 / anchor,
        })
    }

    /// The direction of the z-axis, `[1 : 0]`.
    pub fn z_axis() -> Self {
        ProjPoint {
            v1: Complex64::new(1.0, 0.0),
            v2: Complex64::new(0.0, 0.0),
        }
    }

    /// The direction of the w-axis, `[0 : 1]`.
    pub fn w_axis() -> Self {
        ProjPoint {
            v1: Complex64::new(0.0, 0.0),
            v2: Complex64::new(1.0, 0.0),
        }
    }

    /// Sine-of-angle distance on P^1: |v1 w2 - v2 w1| / (|v| |w|); zero iff
    /// equal as projective points.
    pub fn dist(&self, other: &ProjPoint) -> f64 {
        let cross = self.v1 * other.v2 - self.v2 * other.v1;
        let na = (self.v1.norm_sqr() + self.v2.norm_sqr()).sqrt();
        let nb = (other.v1.norm_sqr() + other.v2.norm_sqr()).sqrt();
        cross.norm() / (na * nb)
    }

    pub fn as_pair(&self) -> (Complex64, Complex64) {
        (self.v1, self.v2)
    }
}
