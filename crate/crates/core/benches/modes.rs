//! Parallel vs sequential execution of the data-parallel workloads: basin
//! grid classification, petal seed batches, and monodromy sweeps.

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

use fatoulab::algebra::parse_poly;
use fatoulab::dynamics::{classify_grid, GridParams, PlanarMap, SliceSpec};
use fatoulab::exec::ExecMode;
use fatoulab::monodromy::{continue_loop, CuspParams};
use fatoulab::parabolic::{local_normal_form, petal_convergence_test};
use fatoulab::GOLDEN_MEAN;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn bench_basin(crit: &mut Criterion) {
    let map = PlanarMap::skew_siegel(GOLDEN_MEAN);
    let target = parse_poly("w").unwrap();
    let slice = SliceSpec {
        base: (c(0.05, 0.0), c(0.0, 0.0)),
        e1: (c(0.0, 0.0), c(1.0, 0.0)),
        e2: (c(0.0, 0.0), c(0.0, 1.0)),
        s_range: (-0.01, 0.01),
        t_range: (-0.01, 0.01),
    };
    let params = GridParams {
        nx: 48,
        ny: 48,
        budget: 400,
        tol: 1e-3,
    };
    let mut group = crit.benchmark_group("basin_grid_48x48");
    for (name, mode) in [
        ("sequential", ExecMode::Sequential),
        ("parallel", ExecMode::Parallel),
    ] {
        group.bench_function(name, |b| {
            b.iter(|| classify_grid(&map, &slice, &params, &target, None, mode));
        });
    }
    group.finish();
}

fn bench_petal_batch(crit: &mut Criterion) {
    let map = PlanarMap::cusp(2, 3, 2).unwrap();
    let params = CuspParams::new(2, 3, 2).unwrap();
    let base = params.curve_point(c(0.6, 0.0));
    let nf = local_normal_form(&map, base).unwrap();
    let spec = &nf.petals[0];
    let mut group = crit.benchmark_group("petal_seeds_16x2e4");
    for (name, mode) in [
        ("sequential", ExecMode::Sequential),
        ("parallel", ExecMode::Parallel),
    ] {
        group.bench_function(name, |b| {
            b.iter(|| petal_convergence_test(&map, &nf.chart, spec, 16, 20_000, mode).unwrap());
        });
    }
    group.finish();
}

fn bench_monodromy_sweep(crit: &mut Criterion) {
    let cases: Vec<CuspParams> = {
        let mut v = Vec::new();
        for p in 1..=5u32 {
            for q in (p + 1)..=6u32 {
                if fatoulab::util::coprime(p, q) {
                    for k in 2..=4u32 {
                        v.push(CuspParams::new(p, q, k).unwrap());
                    }
                }
            }
        }
        v
    };
    let mut group = crit.benchmark_group("monodromy_sweep");
    for (name, mode) in [
        ("sequential", ExecMode::Sequential),
        ("parallel", ExecMode::Parallel),
    ] {
        group.bench_function(name, |b| {
            b.iter(|| {
                fatoulab::exec::map_indices(mode, cases.len(), |i| {
                    let params = cases[i];
                    let steps = (8 * params.k * params.p * params.q) as usize;
                    continue_loop(&params, c(1.0, 0.0), steps).unwrap().cycle_count
                })
            });
        });
    }
    group.finish();
}

fn config() -> Criterion {
    Criterion::default()
        .sample_size(10)
        .measurement_time(std::time::Duration::from_secs(4))
        .warm_up_time(std::time::Duration::from_secs(1))
}

criterion_group! {
    name = benches;
    config = config();
    targets = bench_basin, bench_petal_batch, bench_monodromy_sweep
}
criterion_main!(benches);
