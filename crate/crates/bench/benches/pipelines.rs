use criterion::{black_box, criterion_group, criterion_main, Criterion};
use hankeldet::barnes::{residue_expand_phi1, residue_expand_phi2};
use hankeldet::determinants::{build_r_matrices, cauchy_binet_expansion, det_from_r};
use hankeldet::equilibrium::{equilibrium_density, PotentialOnInterval};
use hankeldet::orthopoly::{build_ladder, MomentWeight};
use hankeldet::symbols::{sinh_kernel_symbol, wiener_hopf_factorize, GammaQuotientParams};
use std::f64::consts::PI;

fn factorization(c: &mut Criterion) {
    let sym = sinh_kernel_symbol(PI * PI).unwrap();
    let mut g = c.benchmark_group("factorization");
    g.sample_size(10);
    g.bench_function("sinh kernel gamma=pi^2", |b| {
        b.iter(|| wiener_hopf_factorize(black_box(&sym), None, 1e-8).unwrap())
    });
    g.finish();
}

fn expansions(c: &mut Criterion) {
    let p = GammaQuotientParams::sinh_kernel(PI * PI);
    c.bench_function("residue expansion, 160 terms", |b| {
        b.iter(|| residue_expand_phi1(black_box(&p), 160).unwrap())
    });
    let e1 = residue_expand_phi1(&p, 160).unwrap();
    let e2 = residue_expand_phi2(&p, 160).unwrap();
    c.bench_function("R-matrix determinant, 80 terms", |b| {
        b.iter(|| det_from_r(&build_r_matrices(black_box(&e1), &e2, 0.0, 80).unwrap()).unwrap())
    });
    let pair = build_r_matrices(&e1, &e2, 0.0, 8).unwrap();
    c.bench_function("Cauchy-Binet, 8 terms, order 4", |b| {
        b.iter(|| cauchy_binet_expansion(black_box(&pair), 4).unwrap())
    });
}

fn ladder(c: &mut Criterion) {
    let w = MomentWeight::jacobi(0.5, 0.0).unwrap();
    c.bench_function("Jacobi ladder, n=8", |b| b.iter(|| build_ladder(black_box(&w), 8).unwrap()));
}

fn equilibrium(c: &mut Criterion) {
    let pot = PotentialOnInterval::new(-1.0, 1.0, |x| 2.0 * x * x + 0.3 * x.powi(3)).unwrap();
    c.bench_function("equilibrium density, 64 coefficients", |b| {
        b.iter(|| equilibrium_density(black_box(&pot), 64).unwrap())
    });
}

criterion_group!(benches, factorization, expansions, ladder, equilibrium);
criterion_main!(benches);
