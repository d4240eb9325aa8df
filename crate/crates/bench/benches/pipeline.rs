use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use poisson_avg::action::average;
use poisson_avg::moser::{flow, z_field, NumericEvaluator};
use poisson_avg::pipeline::{average_coupling, check_compatibility, gauge_from_momentum};
use poisson_avg::tensor::jacobiator;
use poisson_avg::{fixtures, GeometricData, Model, Tensor};

fn verified(m: &Model) -> GeometricData {
    m.data.clone().unwrap().verified().unwrap()
}

fn exact(c: &mut Criterion) {
    let e4 = fixtures::e4();
    let gd = verified(&e4);
    let action = e4.action().unwrap().clone();
    let pi = e4.poisson().unwrap();
    c.bench_function("jacobiator e4", |b| b.iter(|| jacobiator(black_box(&pi))));
    let sigma = Tensor::Form(gd.sigma.clone());
    c.bench_function("average sigma e4", |b| b.iter(|| average(&action, black_box(&sigma)).unwrap()));

    let mut slow = c.benchmark_group("pipeline");
    slow.sample_size(10);
    let pts = e4.sample_box(None).unwrap().points(12, e4.seed);
    let cert = check_compatibility(&action, &gd.p, e4.mu.clone(), e4.mode, e4.j.clone()).unwrap();
    slow.bench_function("average_coupling e4", |b| b.iter(|| average_coupling(&gd, &cert, &pts).unwrap()));
    let leaf = fixtures::leaf();
    let lgd = verified(&leaf);
    let lpts = leaf.sample_box(None).unwrap().points(10, leaf.seed);
    slow.bench_function("gauge_from_momentum leaf", |b| {
        b.iter(|| gauge_from_momentum(&lgd, leaf.action().unwrap(), &leaf.mu, &lpts).unwrap())
    });
    slow.finish();
}

fn numeric(c: &mut Criterion) {
    let leaf = fixtures::leaf();
    let gd = verified(&leaf);
    let bx = leaf.sample_box(None).unwrap().clone();
    let run = gauge_from_momentum(&gd, leaf.action().unwrap(), &leaf.mu, &bx.points(10, leaf.seed)).unwrap();
    let ev = NumericEvaluator::new(&run.pi, &run.theta.theta0, &run.gauged.pi_bar, bx).unwrap();
    let p: Vec<f64> = vec![0.05, -0.03, 0.04, 0.02, -0.06];
    c.bench_function("z_field leaf", |b| b.iter(|| z_field(&ev, 0.5, black_box(&p)).unwrap()));
    c.bench_function("flow leaf 1000 steps", |b| b.iter(|| flow(&ev, black_box(&p), 1000).unwrap()));
}

criterion_group!(benches, exact, numeric);
criterion_main!(benches);
