use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use irlab::exec;
use irlab::fock::{DirectionSet, GridSpec};
use irlab::nrqed::{scan_row, ChargeProfile, CouplingVariant, NelsonFiberParams};
use irlab::spectral::LanczosOptions;

fn electron() -> NelsonFiberParams {
    NelsonFiberParams {
        mass: 1.0,
        coupling: 0.025,
        profile: ChargeProfile::Electron { rho0: 1.0, cutoff: 1.0 },
        variant: CouplingVariant::Scalar,
        grid: GridSpec {
            dimension: 3,
            ir_cutoff: 0.01,
            uv_cutoff: 1.0,
            points_per_decade: 1,
            directions: DirectionSet::Axes6,
            polarized: false,
        },
        max_total: 3,
        max_per_mode: 3,
    }
}

fn lambdas(n: usize) -> Vec<f64> {
    (0..n).map(|i| 10f64.powf(-1.0 - i as f64 / n as f64)).collect()
}

fn ir_scan(c: &mut Criterion) {
    let params = electron();
    let p = [0.0, 0.0, 0.3];
    let opts = LanczosOptions::default();
    let row = |lambda: f64| scan_row(&params, &p, lambda, &opts).map(|r| r.mean_photon_number);

    let mut group = c.benchmark_group("ir_scan");
    group.sample_size(10);
    for n in [4, 8] {
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
            b.iter(|| black_box(exec::execute_sequential(lambdas(n), row)))
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, &n| {
            b.iter(|| black_box(exec::execute_parallel(lambdas(n), 0, row)))
        });
    }
    group.finish();
}

criterion_group!(benches, ir_scan);
criterion_main!(benches);
