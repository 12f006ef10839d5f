use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sdi_selftest::fidelity::{sweep_inequalities, InequalityKind, S_OPT};
use sdi_selftest::scenario::{classical_optimum, Strategy, Witness};
use sdi_selftest::seesaw::{region_sweep, seesaw, SeesawOptions, SweepOptions};
use sdi_selftest::Exec;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn seesaw_restarts(c: &mut Criterion) {
    let w = Witness::rac(3).unwrap();
    let mut g = c.benchmark_group("seesaw_rac3_64_restarts");
    for (name, exec) in MODES {
        let opts = SeesawOptions {
            restarts: 64,
            exec,
            ..Default::default()
        };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| seesaw(&w, 2, &opts).unwrap())
        });
    }
    g.finish();
}

fn classical_enumeration(c: &mut Criterion) {
    let w = Witness::rac(2).unwrap();
    let mut g = c.benchmark_group("classical_rac2_d3");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| classical_optimum(&w, 3, exec).unwrap())
        });
    }
    g.finish();
}

fn region(c: &mut Criterion) {
    let w = Witness::rac(2).unwrap();
    let ideal = Strategy::rac2_ideal();
    let mut g = c.benchmark_group("region_sweep_200");
    g.sample_size(10);
    for (name, exec) in MODES {
        let opts = SweepOptions {
            samples: 200,
            exec,
            ..Default::default()
        };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| region_sweep(&w, &ideal, &opts).unwrap())
        });
    }
    g.finish();
}

fn inequalities(c: &mut Criterion) {
    let mut g = c.benchmark_group("prep_inequalities_721");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sweep_inequalities(InequalityKind::Preparations, S_OPT, 721, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(
    benches,
    seesaw_restarts,
    classical_enumeration,
    region,
    inequalities
);
criterion_main!(benches);
