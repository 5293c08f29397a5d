use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use shehu_bench::{sample_expressions, SAMPLE_FUNCTIONS};
use shehu_core::expr::Expression;
use shehu_core::inverse::{invert_rational_numeric, invert_symbolic, InversionConfig, InversionMethod};
use shehu_core::numerics::QuadratureConfig;
use shehu_core::opcalc::{table_transform, FractionalOrder};
use shehu_core::solvers::solve_pme_hpm;
use shehu_core::transform::{forward_numeric, TransformVars};

fn forward(c: &mut Criterion) {
    let quad = QuadratureConfig::default();
    let vars = TransformVars::new(2.0, 1.0).unwrap();
    let mut g = c.benchmark_group("forward");
    for (name, v) in SAMPLE_FUNCTIONS.iter().zip(sample_expressions()) {
        g.bench_function(format!("table/{name}"), |b| {
            b.iter(|| table_transform(black_box(&v)).unwrap())
        });
        g.bench_function(format!("quadrature/{name}"), |b| {
            b.iter(|| forward_numeric(black_box(&v), &vars, &quad).unwrap())
        });
    }
    g.finish();
}

fn inverse(c: &mut Criterion) {
    let images: Vec<_> = sample_expressions()
        .iter()
        .map(|v| table_transform(v).unwrap())
        .collect();
    let mut g = c.benchmark_group("inverse");
    for (name, image) in SAMPLE_FUNCTIONS.iter().zip(&images) {
        g.bench_function(format!("symbolic/{name}"), |b| {
            b.iter(|| invert_symbolic(black_box(image)).unwrap())
        });
        for (label, method, nodes) in [
            ("dehoog", InversionMethod::DeHoog, 30),
            ("talbot", InversionMethod::Talbot, 32),
            ("stehfest", InversionMethod::Stehfest, 14),
        ] {
            let cfg = InversionConfig {
                method,
                nodes,
                ..InversionConfig::for_image(image)
            };
            g.bench_function(format!("{label}/{name}"), |b| {
                b.iter(|| invert_rational_numeric(black_box(image), 1.5, &cfg).unwrap())
            });
        }
    }
    g.finish();
}

fn series(c: &mut Criterion) {
    let alpha = FractionalOrder::new(0.5).unwrap();
    let initial = shehu_core::expr::parse("x^2 + x").unwrap();
    c.bench_function("pme_hpm/x/8 terms", |b| {
        b.iter(|| solve_pme_hpm(alpha, black_box(&Expression::x()), 8).unwrap())
    });
    c.bench_function("pme_hpm/x^2+x/4 terms", |b| {
        b.iter(|| solve_pme_hpm(alpha, black_box(&initial), 4).unwrap())
    });
}

criterion_group!(benches, forward, inverse, series);
criterion_main!(benches);
