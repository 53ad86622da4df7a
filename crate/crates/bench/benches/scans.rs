use std::f64::consts::TAU;

use cleanflex::osculation::group_points;
use cleanflex::{
    clean_flex_census, hermite_interpolate, minimal_function, sextactic_scan, Catalog, GridProfile, HermiteData,
    PeriodicFunction, SpaceDescriptor, SupportCurve, TrigPoly,
};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn hermite(c: &mut Criterion) {
    let mut g = c.benchmark_group("hermite");
    for order in [3usize, 5, 9] {
        let coeffs: Vec<f64> = (0..order).map(|i| ((i * 7 + 3) % 11) as f64 / 11.0 - 0.5).collect();
        let space = SpaceDescriptor::new(order).unwrap();
        let p = TrigPoly::new(space, coeffs).unwrap();
        // confluent pattern: one triple node, the rest simple
        let mut nodes = vec![(0.3, 3.min(order))];
        let rest = order - nodes[0].1;
        nodes.extend((0..rest).map(|i| (1.0 + i as f64 * 5.0 / rest.max(1) as f64, 1)));
        let data = HermiteData::sample(&p, nodes).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(order), &data, |b, data| {
            b.iter(|| hermite_interpolate(space, black_box(data)).unwrap())
        });
    }
    g.finish();
}

fn sharp_census(c: &mut Criterion) {
    let grid = GridProfile::default();
    let mut g = c.benchmark_group("sharp_census");
    g.sample_size(10);
    for n in 1..=4 {
        let u = PeriodicFunction::catalog(Catalog::Sharp { n }).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &u, |b, u| {
            b.iter(|| clean_flex_census(black_box(u), n, &grid).unwrap())
        });
    }
    g.finish();
}

fn minimal(c: &mut Criterion) {
    let grid = GridProfile::default();
    let u = PeriodicFunction::fourier(vec![0.1, 0.3, -0.2, 0.5, 0.4, -0.3, 0.2, 0.1, -0.15]).unwrap();
    let points = group_points(&[0.4, 0.4 + TAU / 3.0]);
    c.bench_function("minimal_function", |b| {
        b.iter(|| minimal_function(black_box(&u), &points, 2, &grid).unwrap())
    });
}

fn sextactic(c: &mut Criterion) {
    let grid = GridProfile::default();
    let h = PeriodicFunction::fourier(vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.05, 0.0]).unwrap();
    let curve = SupportCurve::new(h).unwrap();
    let mut g = c.benchmark_group("sextactic_scan");
    g.sample_size(10);
    g.bench_function("trefoil", |b| b.iter(|| sextactic_scan(black_box(&curve), &grid).unwrap()));
    g.finish();
}

criterion_group!(benches, hermite, sharp_census, minimal, sextactic);
criterion_main!(benches);
