use criterion::{criterion_group, criterion_main, Criterion};

use cmeis_bench::preset;
use cmeis_core::heckel::{l_direct, l_eisenstein, DEFAULT_TRUNCATION};
use cmeis_core::lattice::period_lattice;
use cmeis_core::{damerell, weierstrass_fg, LSpec, RayClassGroup};

fn l_values(c: &mut Criterion) {
    let pre = preset("qi");
    let spec = LSpec::at_zero(3, 0, pre.f());
    let omega = period_lattice(&pre, 256).unwrap().basis().0.clone();
    let mut g = c.benchmark_group("l_value");
    g.sample_size(10);
    g.bench_function("direct (3,0)", |b| b.iter(|| l_direct(&spec, &pre.psi, DEFAULT_TRUNCATION, 256).unwrap()));
    g.bench_function("eisenstein (3,0)", |b| b.iter(|| l_eisenstein(&spec, &pre.psi, &omega).unwrap()));
    g.bench_function("damerell (4,1)", |b| b.iter(|| damerell(4, 1, &pre, DEFAULT_TRUNCATION, 256).unwrap()));
    g.finish();
}

fn ray_classes(c: &mut Criterion) {
    let pre = preset("q7");
    let m = pre.f() * pre.field.elem(3, -2);
    c.bench_function("ray class group mod f·pi (q7)", |b| b.iter(|| RayClassGroup::new(&m).unwrap()));
}

fn formal_groups(c: &mut Criterion) {
    let pre = preset("qi");
    let mut g = c.benchmark_group("formal_group");
    g.sample_size(10);
    for d in [15usize, 30] {
        g.bench_function(format!("weierstrass d = {d}"), |b| {
            b.iter(|| weierstrass_fg(&pre.curve.a4, &pre.curve.a6, d).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, l_values, ray_classes, formal_groups);
criterion_main!(benches);
