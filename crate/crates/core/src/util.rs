use num_complex::Complex64;

pub const TAU: f64 = std::f64::consts::TAU;

/// Integer power by repeated multiplication, `cpow(z, 1) == z` bitwise.
///
/// Orbit determinism tests compare evaluation paths bit-for-bit, so every
/// power in the crate goes through this one routine.
#[inline]
pub fn cpow(z: Complex64, n: u32) -> Complex64 {
    match n {
        0 => Complex64::new(1.0, 0.0),
        _ => {
            let mut acc = z;
            for _ in 1..n {
                acc *= z;
            }
            acc
        }
    }
}

/// Circular distance between two angles, in [0, pi].
#[inline]
pub fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Normalize an angle into [0, tau).
#[inline]
pub fn wrap_angle(a: f64) -> f64 {
    a.rem_euclid(TAU)
}

#[inline]
pub fn is_finite_c(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn coprime(a: u32, b: u32) -> bool {
    gcd(a, b) == 1
}
