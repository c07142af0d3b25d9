//! Property tests for the polynomial layer.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fatoulab::algebra::{
    binary_form_roots, binary_resultant, format_poly, homogeneous_part, parse_poly, BinaryForm,
    BivarPoly, ProjPoint,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Coefficients on a dyadic grid keep arithmetic exact where possible.
fn coeff_strategy() -> impl Strategy<Value = Complex64> {
    (-16i32..=16, -16i32..=16).prop_map(|(a, b)| c(a as f64 / 8.0, b as f64 / 8.0))
}

fn poly_strategy() -> impl Strategy<Value = BivarPoly> {
    proptest::collection::vec(((0u32..=4, 0u32..=4), coeff_strategy()), 0..6)
        .prop_map(|terms| BivarPoly::from_terms(terms).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn homogeneous_parts_reconstruct(p in poly_strategy()) {
        let mut sum = BivarPoly::zero();
        if let Some(d) = p.degree() {
            for j in 0..=d {
                sum = &sum + &homogeneous_part(&p, j).to_poly();
            }
        }
        prop_assert_eq!(sum, p);
    }

    #[test]
    fn print_parse_round_trip(p in poly_strategy()) {
        let text = format_poly(&p);
        let q = parse_poly(&text).unwrap();
        prop_assert_eq!(p, q);
    }

    #[test]
    fn roots_count_and_residual(coeffs in proptest::collection::vec(coeff_strategy(), 2..8)) {
        let degree = coeffs.len() as u32 - 1;
        let f = BinaryForm::new(degree, coeffs);
        prop_assume!(!f.is_zero());
        let roots = binary_form_roots(&f).unwrap();
        let total: u32 = roots.iter().map(|&(_, m)| m).sum();
        prop_assert_eq!(total, degree);
        let fn_norm = f.normalized();
        for (p, _) in &roots {
            let r = fn_norm.eval(p.v1, p.v2).norm();
            prop_assert!(r <= 1e-9, "residual {} at {:?}", r, p);
        }
    }
}

/// Resultant vanishes (within relative tolerance) exactly when the root
/// lists intersect: 100 random degree <= 4 pairs, half with a planted
/// common factor.
#[test]
fn resultant_iff_shared_root() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let rand_form = |deg: u32, rng: &mut ChaCha8Rng| {
        let coeffs: Vec<Complex64> = (0..=deg)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        BinaryForm::new(deg, coeffs)
    };
    let mut checked_shared = 0;
    let mut checked_disjoint = 0;
    for case in 0..100 {
        let plant_shared = case % 2 == 0;
        let (f, g) = if plant_shared {
            let common = rand_form(1, &mut rng);
            let f = common.mul(&rand_form(rng.random_range(1..=3), &mut rng));
            let g = common.mul(&rand_form(rng.random_range(1..=3), &mut rng));
            (f, g)
        } else {
            (
                rand_form(rng.random_range(1..=4), &mut rng),
                rand_form(rng.random_range(1..=4), &mut rng),
            )
        };
        if f.is_zero() || g.is_zero() {
            continue;
        }
        let res = binary_resultant(&f.normalized(), &g.normalized())
            .unwrap()
            .norm();
        // Independent oracle: do the root lists intersect?
        let fr = binary_form_roots(&f).unwrap();
        let gr = binary_form_roots(&g).unwrap();
        let intersect = fr
            .iter()
            .any(|(p, _)| gr.iter().any(|(q, _)| p.dist(q) < 1e-6));
        if intersect {
            checked_shared += 1;
            assert!(res <= 1e-10, "case {case}: shared root but |res| = {res:e}");
        } else {
            checked_disjoint += 1;
            assert!(res > 1e-10, "case {case}: no shared root but |res| = {res:e}");
        }
    }
    assert!(checked_shared >= 40, "too few shared cases: {checked_shared}");
    assert!(
        checked_disjoint >= 40,
        "too few disjoint cases: {checked_disjoint}"
    );
}

/// The characteristic-direction scan oracle at small scale: random
/// non-dicritical leading pairs, every scan minimum sits near a root.
#[test]
fn char_direction_scan_oracle_small() {
    use fatoulab::parabolic::{char_directions, CharDirections};
    let mut rng = ChaCha8Rng::seed_from_u64(0xabcd_0001);
    for k in [2u32, 3] {
        for _ in 0..4 {
            let fk1 = BinaryForm::new(
                k,
                (0..=k)
                    .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect(),
            );
            let fk2 = BinaryForm::new(
                k,
                (0..=k)
                    .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect(),
            );
            let dirs = match char_directions(&(fk1.clone(), fk2.clone())).unwrap() {
                CharDirections::Directions(d) => d,
                CharDirections::Dicritical => continue,
            };
            let scale = fk1.max_coeff().max(fk2.max_coeff());
            // 100 x 100 grid of unit representatives (cos a, sin a e^{ib}).
            for ia in 0..100 {
                let a = std::f64::consts::FRAC_PI_2 * ia as f64 / 99.0;
                for ib in 0..100 {
                    let b = std::f64::consts::TAU * ib as f64 / 100.0;
                    let v1 = c(a.cos(), 0.0);
                    let v2 = Complex64::from_polar(a.sin(), b);
                    let w = (v1 * fk2.eval(v1, v2) - v2 * fk1.eval(v1, v2)).norm();
                    if w < 1e-6 * scale {
                        let p = ProjPoint::new(v1, v2).unwrap();
                        let near = dirs.iter().any(|d| d.v.dist(&p) < 1e-4);
                        assert!(near, "scan minimum at ({ia},{ib}) far from all roots");
                    }
                }
            }
        }
    }
}
