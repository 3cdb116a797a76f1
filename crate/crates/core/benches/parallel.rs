use std::sync::Arc;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use supercartan::cartan::{build_family, Family};
use supercartan::coeffalg::{build_coeff_algebra, Presentation};
use supercartan::mapalg::{tensor_algebra, MapSuperAlgebra};
use supercartan::par;
use supercartan::repsuper::{induce_kac, law_violations, SuperModule};
use supercartan::verify::{run_suite, SuiteConfig};

fn map_algebra(f: Family, n: usize, coeff: &str) -> MapSuperAlgebra {
    let b = build_coeff_algebra(&coeff.parse::<Presentation>().unwrap()).unwrap();
    tensor_algebra(build_family(f, n).unwrap(), Arc::new(b)).unwrap()
}

fn modes() -> [(&'static str, bool); 2] {
    [("parallel", true), ("sequential", false)]
}

fn jacobi(c: &mut Criterion) {
    let g = build_family(Family::W, 4).unwrap();
    let mut group = c.benchmark_group("jacobi W(4)");
    group.sample_size(10);
    for (name, on) in modes() {
        par::set_enabled(on);
        group.bench_function(name, |b| b.iter(|| g.jacobi_violations()));
    }
    group.finish();
}

fn kac(c: &mut Criterion) {
    let ga = map_algebra(Family::S, 3, "trunc:2");
    let (ga0, _) = ga.degree_zero().unwrap();
    let v = SuperModule::trivial(ga0.flat().clone());
    let k = induce_kac(&ga, &v).unwrap();
    let mut group = c.benchmark_group("kac S(3)xtrunc:2");
    group.sample_size(10);
    for (name, on) in modes() {
        par::set_enabled(on);
        group.bench_with_input(BenchmarkId::new("induce", name), &v, |b, v| b.iter(|| induce_kac(&ga, v).unwrap()));
        group.bench_with_input(BenchmarkId::new("law", name), &k, |b, k| {
            b.iter(|| law_violations(ga.flat(), k.module.action()))
        });
    }
    group.finish();
}

fn suite(c: &mut Criterion) {
    let cfg = SuiteConfig::new("map-bracket");
    let mut group = c.benchmark_group("suite map-bracket");
    group.sample_size(10).measurement_time(Duration::from_secs(20));
    for (name, on) in modes() {
        par::set_enabled(on);
        group.bench_function(name, |b| b.iter(|| run_suite(&cfg).unwrap()));
    }
    group.finish();
    par::set_enabled(true);
}

criterion_group!(benches, jacobi, kac, suite);
criterion_main!(benches);
