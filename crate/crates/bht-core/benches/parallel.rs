//! Parallel vs sequential throughput on the data-parallel inner loops:
//! an x-grid sweep of one single-scale piece and a symbol-row scan.

use bht_core::grid::XGrid;
use bht_core::kernels::{make_freq_cutoff, make_rho, SamplingSpec};
use bht_core::oscsym;
use bht_core::polyalg::parse_polynomial;
use bht_core::pvquad::{self, PvOpts};
use bht_core::testfuncs::TestFunction;
use criterion::{criterion_group, criterion_main, Criterion};

fn bench_tj_grid(c: &mut Criterion) {
    let kernel = make_rho();
    let p = parse_polynomial("t").unwrap();
    let q = parse_polynomial("t^2").unwrap();
    let f = TestFunction::atom(1.0, 0.0, 2.0);
    let g = TestFunction::atom(1.0, 0.5, 0.0);
    let xs = XGrid::new(-4.0, 4.0, 129);
    let opts = PvOpts::default();

    let mut group = c.benchmark_group("tj_grid_129pts");
    group.sample_size(10);
    group.bench_function("backend", |bch| {
        bch.iter(|| pvquad::tj(&kernel, &p, &q, &f, &g, 2, &xs, &opts).unwrap())
    });
    group.bench_function("forced_sequential", |bch| {
        bch.iter(|| {
            let points = xs.points();
            let vals = bht_core::par::map_seq(&points, |&x| {
                let one = XGrid::new(x, x, 1);
                pvquad::tj(&kernel, &p, &q, &f, &g, 2, &one, &opts)
                    .unwrap()
                    .values
                    .values[0]
            });
            vals
        })
    });
    group.finish();
}

fn bench_symbol_row(c: &mut Criterion) {
    let kernel = make_rho();
    let cutoff = make_freq_cutoff(SamplingSpec::default()).unwrap();
    let p = parse_polynomial("t").unwrap();
    let q = parse_polynomial("t^2").unwrap();
    let cells: Vec<(i32, i32)> = (0..6).map(|k| (k, k)).collect();

    let mut group = c.benchmark_group("symbol_diag_row");
    group.sample_size(10);
    group.bench_function("backend", |bch| {
        bch.iter(|| oscsym::symbol_decay_scan(&kernel, &cutoff, &p, &q, 2, &cells, 8).unwrap())
    });
    group.bench_function("forced_sequential", |bch| {
        bch.iter(|| {
            cells
                .iter()
                .map(|&cell| {
                    oscsym::symbol_decay_scan(&kernel, &cutoff, &p, &q, 2, &[cell], 8).unwrap()
                })
                .count()
        })
    });
    group.finish();
}

criterion_group!(benches, bench_tj_grid, bench_symbol_row);
criterion_main!(benches);
