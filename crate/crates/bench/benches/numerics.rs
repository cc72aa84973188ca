use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use cmeis_bench::{cell_point, lattice, preset};
use cmeis_core::eisenstein::eis_alpha_all;
use cmeis_core::thetaunits::ThetaAlpha;
use cmeis_core::APComplex;

fn ball(c: &mut Criterion) {
    let mut g = c.benchmark_group("ball");
    for prec in [256u32, 1024] {
        let a = APComplex::from_f64_pair(0.75, -1.25, prec);
        let b = APComplex::from_f64_pair(-2.5, 0.125, prec);
        g.bench_with_input(BenchmarkId::new("mul", prec), &prec, |bch, _| bch.iter(|| black_box(&a) * black_box(&b)));
        g.bench_with_input(BenchmarkId::new("div", prec), &prec, |bch, _| bch.iter(|| black_box(&a) / black_box(&b)));
        g.bench_with_input(BenchmarkId::new("exp", prec), &prec, |bch, _| bch.iter(|| black_box(&a).exp()));
    }
    g.finish();
}

fn lattice_functions(c: &mut Criterion) {
    let mut g = c.benchmark_group("lattice");
    for prec in [256u32, 512] {
        let lat = lattice("qi", prec);
        let z = cell_point(&lat, prec);
        g.bench_with_input(BenchmarkId::new("wp", prec), &prec, |b, _| b.iter(|| lat.wp(black_box(&z), 0).unwrap()));
        let pre = preset("qi");
        let th = ThetaAlpha::new(&lat, &pre.alpha).unwrap();
        g.bench_with_input(BenchmarkId::new("theta_alpha", prec), &prec, |b, _| {
            b.iter(|| th.eval(black_box(&z)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("eis_alpha_k5", prec), &prec, |b, _| {
            b.iter(|| eis_alpha_all(black_box(&z), &lat, &pre.alpha, 5).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, ball, lattice_functions);
criterion_main!(benches);
