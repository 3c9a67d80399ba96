use criterion::{black_box, criterion_group, criterion_main, Criterion};
use harvest_core::detector::{matrix_elements, DetectorParams, Geometry};
use harvest_core::qubit::{build_rho, hermitian_eigenvalues, SpectrumMode};
use harvest_core::special::faddeeva_w;
use harvest_core::sweep::{run_sweep, Axis, GeometryKind, Route, SweepConfig};
use harvest_core::tangle::{equilateral_closed, pi_scalene_closed, pi_tangle_general};
use num_complex::Complex64;

fn special(c: &mut Criterion) {
    let mut g = c.benchmark_group("faddeeva_w");
    for (name, z) in [
        ("sums", Complex64::new(2.0, 0.5)),
        ("continued_fraction", Complex64::new(10.0, 3.0)),
        ("near_axis", Complex64::new(5.0, 1e-3)),
    ] {
        g.bench_function(name, |b| b.iter(|| faddeeva_w(black_box(z)).unwrap()));
    }
    g.finish();
}

fn linear_algebra(c: &mut Criterion) {
    let me = matrix_elements(&DetectorParams::new(0.1, 1.0).unwrap(), &Geometry::scalene(7.0, 2.0).unwrap()).unwrap();
    let rho = build_rho(&me);
    let entries = rho.entries();
    c.bench_function("jacobi_8x8", |b| b.iter(|| hermitian_eigenvalues(black_box(&entries), 8).unwrap()));
    c.bench_function("pi_tangle_general", |b| {
        b.iter(|| pi_tangle_general(black_box(&rho), SpectrumMode::LeadingOrder).unwrap())
    });
}

fn closed_forms(c: &mut Criterion) {
    let params = DetectorParams::new(0.1, 2.0).unwrap();
    let geom = Geometry::scalene(7.0, 2.0).unwrap();
    c.bench_function("matrix_elements", |b| b.iter(|| matrix_elements(black_box(&params), &geom).unwrap()));
    let me = matrix_elements(&params, &geom).unwrap();
    c.bench_function("pi_scalene_closed", |b| b.iter(|| pi_scalene_closed(black_box(&me)).unwrap()));
    c.bench_function("equilateral_closed", |b| {
        b.iter(|| equilateral_closed(black_box(me.p), me.c_ab, me.x_ab.norm()))
    });
}

fn sweeps(c: &mut Criterion) {
    let mut g = c.benchmark_group("sweep_20x20");
    g.sample_size(20);
    for route in [Route::ClosedForm, Route::Both] {
        let cfg = SweepConfig {
            geometry: GeometryKind::Scalene,
            gap: Axis::new(-1.0, 4.0, 20),
            length: Axis::new(-10.0, 10.0, 20),
            route,
            ..SweepConfig::default()
        };
        g.bench_function(route.to_string(), |b| b.iter(|| run_sweep(black_box(&cfg)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, special, linear_algebra, closed_forms, sweeps);
criterion_main!(benches);
