use aps_bench::{demo_config, demo_table, square_config, unit_spectrum};
use aps_core::engine::{run_aps, run_grover_baseline};
use aps_core::scan::{scan_lambda, SweepConfig};
use aps_core::state::{PhaseTable, RegisterLayout, StateVector};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn bench_primitives(c: &mut Criterion) {
    let mut group = c.benchmark_group("primitives");
    for total in [12u32, 16, 20] {
        let n = total / 2;
        let layout = RegisterLayout::new(n, n).unwrap();
        let table =
            PhaseTable::new((0..layout.work_dim()).map(|x| 0.1 * x as f64).collect()).unwrap();

        group.bench_with_input(
            BenchmarkId::new("global_diffusion", total),
            &layout,
            |b, &l| {
                let mut state = StateVector::uniform(l);
                b.iter(|| {
                    state.apply_global_diffusion();
                    black_box(state.amplitudes()[0])
                });
            },
        );
        group.bench_with_input(
            BenchmarkId::new("local_diffusion", total),
            &layout,
            |b, &l| {
                let mut state = StateVector::uniform(l);
                b.iter(|| {
                    state.apply_local_diffusion().unwrap();
                    black_box(state.amplitudes()[0])
                });
            },
        );
        group.bench_with_input(BenchmarkId::new("phase_oracle", total), &layout, |b, &l| {
            let mut state = StateVector::uniform(l);
            b.iter(|| {
                state.apply_phase_oracle(&table).unwrap();
                black_box(state.amplitudes()[0])
            });
        });
    }
    group.finish();
}

fn bench_full_runs(c: &mut Criterion) {
    let mut group = c.benchmark_group("runs");
    let table = demo_table();
    let config = demo_config();
    group.bench_function("aps_subset_sum_4q", |b| {
        b.iter(|| black_box(run_aps(&config, &table).unwrap().distribution))
    });
    group.bench_function("grover_baseline_10q", |b| {
        b.iter(|| black_box(run_grover_baseline(10, &[37], 25).unwrap()))
    });
    group.finish();
}

fn bench_scan(c: &mut Criterion) {
    let h = unit_spectrum(4);
    let sweep = SweepConfig::new(0.5, 4.5, 0.1, square_config(4));
    c.bench_function("eigen_scan_4q_41pts", |b| {
        b.iter(|| black_box(scan_lambda(&h, &sweep).unwrap().records.len()))
    });
}

criterion_group!(benches, bench_primitives, bench_full_runs, bench_scan);
criterion_main!(benches);
