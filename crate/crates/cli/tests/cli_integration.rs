//! End-to-end runs of the binary: file formats, exit codes, and the
//! cross-checks named in the command examples.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fatoulab"))
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fatoulab_test_{tag}_{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

#[test]
fn orbit_skew_axis_csv() {
    let dir = tmpdir("orbit_skew");
    let st = bin()
        .args(["--out"])
        .arg(&dir)
        .args(["orbit", "--family", "skew-siegel", "--seed", "0.05,0", "--n", "1000"])
        .status()
        .unwrap();
    assert!(st.success());
    let csv = read(&dir.join("orbit.csv"));
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# config_hash="));
    assert_eq!(lines.next().unwrap(), "n,z_re,z_im,w_re,w_im");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 1001);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[3].parse::<f64>().unwrap(), 0.0);
        assert_eq!(cols[4].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn orbit_on_curve_is_constant() {
    let dir = tmpdir("orbit_curve");
    let st = bin()
        .args(["--out"])
        .arg(&dir)
        .args([
            "orbit",
            "--family",
            "cusp",
            "--p",
            "2",
            "--q",
            "3",
            "--k",
            "2",
            "--seed-on-curve",
            "t=0.3",
            "--n",
            "10",
        ])
        .status()
        .unwrap();
    assert!(st.success());
    let csv = read(&dir.join("orbit.csv"));
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .skip(2)
        .map(|r| r.split(',').skip(1).map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 11);
    for row in &rows {
        for (a, b) in row.iter().zip(&rows[0]) {
            assert!((a - b).abs() < 1e-13);
        }
    }
    let summary = read(&dir.join("orbit_summary.txt"));
    assert!(summary.contains("verdict=converges_to_target"));
}

#[test]
fn orbit_far_seed_escapes() {
    let dir = tmpdir("orbit_escape");
    let st = bin()
        .args(["--out"])
        .arg(&dir)
        .args(["orbit", "--family", "skew-siegel", "--seed", "10,0,10,0", "--n", "100"])
        .status()
        .unwrap();
    assert!(st.success());
    let summary = read(&dir.join("orbit_summary.txt"));
    assert!(summary.contains("verdict=escapes"), "{summary}");
}

#[test]
fn chardirs_cusp_and_dicritical() {
    let dir = tmpdir("chardirs");
    let st = bin()
        .args(["--out"])
        .arg(&dir)
        .args([
            "chardirs", "--family", "cusp", "--p", "2", "--q", "3", "--k", "2", "--t", "t=0.3",
        ])
        .status()
        .unwrap();
    assert!(st.success());
    let body = read(&dir.join("chardirs.txt"));
    // The curve direction [t^q : -t^p] normalizes to [-t : 1] = [-0.3 : 1].
    assert!(body.contains("dicritical=false"));
    let has_curve_dir = body.lines().any(|l| {
        l.starts_with("dir")
            && l.contains("degenerate=false")
            && l.split("v=").nth(1).map_or(false, |rest| {
                let vals: Vec<f64> = rest
                    .split_whitespace()
                    .next()
                    .unwrap()
                    .split(',')
                    .map(|v| v.parse().unwrap())
                    .collect();
                (vals[0] + 0.3).abs() < 1e-6 && (vals[2] - 1.0).abs() < 1e-9
            })
    });
    assert!(has_curve_dir, "missing curve direction in:\n{body}");

    let st = bin()
        .args(["--out"])
        .arg(&dir)
        .args(["chardirs", "--fk1", "z^2", "--fk2", "z*w"])
        .status()
        .unwrap();
    assert!(st.success());
    assert!(read(&dir.join("chardirs.txt")).contains("dicritical=true"));

    let st = bin()
        .args(["--out"])
        .arg(&dir)
        .args(["chardirs", "--fk1", "z^2", "--fk2", "w^2"])
        .status()
        .unwrap();
    assert!(st.success());
    assert!(read(&dir.join("chardirs.txt")).contains("count=3"));
}

#[test]
fn basin_zero_budget_all_black() {
    let dir = tmpdir("basin_black");
    let st = bin()
        .args(["--out"])
        .arg(&dir)
        .args(["basin", "--res", "8,8", "--budget", "0"])
        .status()
        .unwrap();
    assert!(st.success());
    let ppm = std::fs::read(dir.join("basin.ppm")).unwrap();
    let idx = ppm.windows(4).position(|w| w == b"255\n").unwrap() + 4;
    assert_eq!(ppm.len() - idx, 8 * 8 * 3);
    assert!(ppm[idx..].iter().all(|&b| b == 0), "image must be black");
}

#[test]
fn basin_halfplane_cells_converge() {
    // Cells of the {z = 0.05} fiber slice whose reciprocal lies in the
    // calibrated half-plane must classify as converging.
    let dir = tmpdir("basin_halfplane");
    let st = bin()
        .args(["--out"])
        .arg(&dir)
        .args(["basin", "--res", "64,64", "--budget", "2000"])
        .status()
        .unwrap();
    assert!(st.success());

    use fatoulab::dynamics::PlanarMap;
    use fatoulab::siegel::calibrate_halfplane;
    use num_complex::Complex64;
    let map = PlanarMap::skew_siegel(fatoulab::GOLDEN_MEAN);
    let z0 = Complex64::new(0.05, 0.0);
    let spec = calibrate_halfplane(&map, z0).unwrap();

    let ppm = std::fs::read(dir.join("basin.ppm")).unwrap();
    let idx = ppm.windows(4).position(|w| w == b"255\n").unwrap() + 4;
    let pix = &ppm[idx..];
    // Default window: s in [-3e-4, 1e-4], t in [-2e-4, 2e-4]; w = s + i t.
    let (nx, ny) = (64usize, 64usize);
    let (s0, s1, t0, t1) = (-3e-4, 1e-4, -2e-4, 2e-4);
    let mut checked = 0;
    for iy in 0..ny {
        for ix in 0..nx {
            let s = s0 + (ix as f64 + 0.5) * (s1 - s0) / nx as f64;
            let t = t1 - (iy as f64 + 0.5) * (t1 - t0) / ny as f64;
            let w = Complex64::new(s, t);
            if w.norm() == 0.0 {
                continue;
            }
            // Deep membership to stay clear of the boundary cells.
            if spec.contains(2.0 / w) {
                let off = (iy * nx + ix) * 3;
                let rgb = (pix[off], pix[off + 1], pix[off + 2]);
                assert_eq!(
                    rgb,
                    (40, 200, 90),
                    "cell ({ix},{iy}) in the half-plane did not converge"
                );
                checked += 1;
            }
        }
    }
    assert!(checked > 100, "too few half-plane cells checked: {checked}");
}

#[test]
fn basin_cusp_sectors_visible() {
    // A slice through a regular curve point of the k = 3 cusp shows both
    // attracting sectors, and seed-sector membership matches the color.
    let dir = tmpdir("basin_cusp");
    let st = bin()
        .args(["--out"])
        .arg(&dir)
        .args([
            "basin",
            "--family",
            "cusp",
            "--p",
            "2",
            "--q",
            "3",
            "--k",
            "3",
            "--petal-at",
            "t=0.75",
            "--slice-base",
            "0.421875,0,0.5625,0",
            "--slice-e1",
            "0,0.502,0,-0.67",
            "--slice-e2",
            "-0.502,0,0.67,0",
            "--extent=-0.004,0.004,-0.004,0.004",
            "--res",
            "16,16",
            "--budget",
            "60000",
            "--tol",
            "5e-3",
        ])
        .status()
        .unwrap();
    assert!(st.success());

    let ppm = std::fs::read(dir.join("basin.ppm")).unwrap();
    let idx = ppm.windows(4).position(|w| w == b"255\n").unwrap() + 4;
    let pix = &ppm[idx..];
    let mut colors = std::collections::BTreeSet::new();
    for c in pix.chunks(3) {
        colors.insert((c[0], c[1], c[2]));
    }
    // White (escape) and black (undecided) are not petal colors.
    colors.remove(&(255, 255, 255));
    colors.remove(&(0, 0, 0));
    colors.remove(&(40, 200, 90));
    assert!(
        colors.len() >= 2,
        "expected at least two sector hues, got {colors:?}"
    );

    // Cross-check: cells whose seed already lies in a sector carry that
    // sector's hue.
    use fatoulab::dynamics::PlanarMap;
    use fatoulab::monodromy::CuspParams;
    use fatoulab::parabolic::local_normal_form;
    use num_complex::Complex64;
    let map = PlanarMap::cusp(2, 3, 3).unwrap();
    let base = CuspParams::new(2, 3, 3)
        .unwrap()
        .curve_point(Complex64::new(0.75, 0.0));
    let nf = local_normal_form(&map, base).unwrap();
    let slice_base = (Complex64::new(0.421875, 0.0), Complex64::new(0.5625, 0.0));
    let e1 = (Complex64::new(0.0, 0.502), Complex64::new(0.0, -0.67));
    let e2 = (Complex64::new(-0.502, 0.0), Complex64::new(0.67, 0.0));
    let (nx, ny) = (16usize, 16usize);
    let (s0, s1, t0, t1) = (-0.004, 0.004, -0.004, 0.004);
    let mut cross_checked = 0;
    for iy in 0..ny {
        for ix in 0..nx {
            let s = s0 + (ix as f64 + 0.5) * (s1 - s0) / nx as f64;
            let t = t1 - (iy as f64 + 0.5) * (t1 - t0) / ny as f64;
            let p = (
                slice_base.0 + e1.0 * s + e2.0 * t,
                slice_base.1 + e1.1 * s + e2.1 * t,
            );
            let local = nf.chart.to_local(p);
            for spec in &nf.petals {
                if spec.contains(local) {
                    let off = (iy * nx + ix) * 3;
                    let rgb = [pix[off], pix[off + 1], pix[off + 2]];
                    let expected = expected_hue(spec.m);
                    assert_eq!(
                        rgb, expected,
                        "cell ({ix},{iy}) sits in sector {} but is colored {rgb:?}",
                        spec.m
                    );
                    cross_checked += 1;
                }
            }
        }
    }
    assert!(cross_checked > 20, "only {cross_checked} cells cross-checked");
}

/// Mirror of the renderer's petal palette.
fn expected_hue(m: u32) -> [u8; 3] {
    let h = ((m as f64 - 1.0) * 0.381966) % 1.0;
    let i = (h * 6.0).floor();
    let f = h * 6.0 - i;
    let v = 0.95;
    let s = 0.85;
    let p = v * (1.0 - s);
    let q = v * (1.0 - f * s);
    let t = v * (1.0 - (1.0 - f) * s);
    let (r, g, b) = match (i as i64).rem_euclid(6) {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    [(r * 255.0) as u8, (g * 255.0) as u8, (b * 255.0) as u8]
}

#[test]
fn petals_on_general_family() {
    // The straight-line family g = z, P = -1, Q = 0 is already in normal
    // form; its single petal at the origin converges at the parabolic rate.
    let dir = tmpdir("petals_line");
    let st = bin()
        .args(["--out"])
        .arg(&dir)
        .args([
            "petals",
            "--family",
            "tangent-id",
            "--g-poly",
            "z",
            "--p-poly",
            "(-1)",
            "--q-poly",
            "0",
            "--k",
            "2",
            "--base",
            "0,0,0,0",
            "--seeds",
            "8",
            "--budget",
            "40000",
            "--exit-budget",
            "40000",
        ])
        .status()
        .unwrap();
    assert!(st.success());
    let body = read(&dir.join("petals.txt"));
    assert!(body.contains("converged=8/8"), "{body}");
    assert!(body.contains("exited=8/8"), "{body}");
    let rate_ok = body.lines().any(|l| {
        l.strip_prefix("rate_exponent_min=")
            .and_then(|v| v.parse::<f64>().ok())
            .map_or(false, |v| (0.8..1.2).contains(&v))
    });
    assert!(rate_ok, "rate fit missing or out of band:\n{body}");
}

#[test]
fn monodromy_report_lines() {
    let dir = tmpdir("monodromy");
    let st = bin()
        .args(["--out"])
        .arg(&dir)
        .args(["monodromy", "--p-max", "2", "--q-max", "4", "--k-min", "3", "--k-max", "3"])
        .status()
        .unwrap();
    assert!(st.success());
    let body = read(&dir.join("monodromy.csv"));
    assert!(body.contains("p,q,k,shift_predicted,shift_observed,cycles,match"));
    // pq = 6 divisible by k-1 = 2: identity, two cycles.
    assert!(body.contains("2,3,3,0,0,2,true"), "{body}");
    // Non-coprime pairs are skipped with a note.
    assert!(body.contains("# skip p=2 q=4: not coprime"));
}

#[test]
fn config_file_and_flag_override() {
    let dir = tmpdir("config");
    let cfg = dir.join("run.cfg");
    std::fs::write(
        &cfg,
        "[map]\nfamily=cusp\np=2\nq=3\nk=2\n[orbit]\nn=5\nseed-on-curve=t=0.3\n",
    )
    .unwrap();
    let st = bin()
        .args(["--out"])
        .arg(&dir)
        .args(["--config"])
        .arg(&cfg)
        .args(["orbit", "--n", "7"])
        .status()
        .unwrap();
    assert!(st.success());
    let csv = read(&dir.join("orbit.csv"));
    // Flag n=7 overrides the file's n=5; the file supplies the rest.
    assert_eq!(csv.lines().count(), 2 + 8);
    let meta = read(&dir.join("orbit.meta"));
    assert!(meta.contains("n=7"));
    assert!(meta.contains("family=cusp"));
}

#[test]
fn petals_m_filter_and_bad_inputs() {
    let dir = tmpdir("petals_filter");
    // --m restricts the report to one sector.
    let st = bin()
        .args(["--out"])
        .arg(&dir)
        .args([
            "petals", "--family", "cusp", "--p", "2", "--q", "3", "--k", "3", "--t", "t=0.75",
            "--seeds", "4", "--budget", "50000", "--exit-budget", "20000", "--m", "2",
        ])
        .status()
        .unwrap();
    assert!(st.success());
    let body = read(&dir.join("petals.txt"));
    assert!(body.contains("m=2"));
    assert!(!body.contains("m=1"), "{body}");
    // petals on a non-tangent family is a config error.
    let st = bin()
        .args(["--out"])
        .arg(&dir)
        .args(["petals", "--family", "skew-siegel"])
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(2));
    // basin --petal-at needs the cusp family.
    let st = bin()
        .args(["--out"])
        .arg(&dir)
        .args(["basin", "--family", "skew-siegel", "--petal-at", "t=0.5"])
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(2));
}

#[test]
fn exit_codes() {
    // Unknown family: config error, code 2.
    let dir = tmpdir("codes");
    let st = bin()
        .args(["--out"])
        .arg(&dir)
        .args(["orbit", "--family", "nonsense"])
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(2));
    // Rational rotation number: small divisor, code 4.
    let st = bin()
        .args(["--out"])
        .arg(&dir)
        .args(["siegel", "--theta", "0.2", "--order", "20"])
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(4));
    // Bad order k = 1: config error, code 2.
    let st = bin()
        .args(["--out"])
        .arg(&dir)
        .args(["orbit", "--family", "cusp", "--k", "1"])
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(2));
}
