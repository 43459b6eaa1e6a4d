use c2g_bench::scene;
use c2g_core::lowrank::plane_to_matrix;
use c2g_core::{
    c2g_ssim, decolor_adaptive, decolor_fixed, ntsc_gray, srgb_to_lab, svd_decompose,
    DecolorConfig, MetricConfig, RankPolicy,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn colorspace(c: &mut Criterion) {
    let img = scene(256, 256);
    c.bench_function("srgb_to_lab 256x256", |b| {
        b.iter(|| srgb_to_lab(black_box(&img)))
    });
}

fn svd(c: &mut Criterion) {
    let mut group = c.benchmark_group("svd_decompose");
    for side in [64, 128, 256] {
        let lab = srgb_to_lab(&scene(side, side));
        let plane = plane_to_matrix(side, side, lab.a());
        group.bench_with_input(BenchmarkId::from_parameter(side), &plane, |b, p| {
            b.iter(|| svd_decompose(black_box(p)).unwrap())
        });
    }
    group.finish();
}

fn metric(c: &mut Criterion) {
    let img = scene(256, 256);
    let gray = ntsc_gray(&img);
    let cfg = MetricConfig::default();
    c.bench_function("c2g_ssim 256x256", |b| {
        b.iter(|| c2g_ssim(black_box(&img), black_box(&gray), &cfg).unwrap())
    });
}

fn decolor(c: &mut Criterion) {
    let img = scene(256, 256);
    let mut group = c.benchmark_group("decolor 256x256");
    group.sample_size(10);
    group.bench_function("fixed", |b| {
        b.iter(|| decolor_fixed(black_box(&img), 0.25, &RankPolicy::default()).unwrap())
    });
    let cfg = DecolorConfig::default();
    group.bench_function("adaptive", |b| {
        b.iter(|| decolor_adaptive(black_box(&img), &cfg).unwrap())
    });
    group.finish();
}

criterion_group!(benches, colorspace, svd, metric, decolor);
criterion_main!(benches);
