use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use geodom::io::solve;
use geodom::{ssr, InstanceFile, Kind};
use geodom_bench::instance;

fn ssr_scaling(c: &mut Criterion) {
    let mut g = c.benchmark_group("ssr");
    g.sample_size(10);
    for n in [1_000, 10_000, 50_000] {
        let InstanceFile::Ssr(inst) = instance(Kind::Ssr, n, 1) else { unreachable!() };
        let norm = ssr::normalize(&inst).unwrap();
        g.bench_with_input(BenchmarkId::new("fast", n), &norm, |b, i| b.iter(|| ssr::solve_fast(i).unwrap()));
    }
    for n in [100, 400] {
        let InstanceFile::Ssr(inst) = instance(Kind::Ssr, n, 1) else { unreachable!() };
        let norm = ssr::normalize(&inst).unwrap();
        g.bench_with_input(BenchmarkId::new("reference", n), &norm, |b, i| b.iter(|| ssr::solve(i, false).unwrap()));
    }
    g.finish();
}

fn lp_based(c: &mut Criterion) {
    let mut g = c.benchmark_group("lp_based");
    g.sample_size(10);
    for kind in [Kind::Srs, Kind::StabbedL, Kind::OrthoPsd, Kind::UnitBk] {
        for n in [10, 30] {
            let inst = instance(kind, n, 2);
            g.bench_with_input(BenchmarkId::new(kind.name(), n), &inst, |b, i| b.iter(|| solve(i, false).unwrap()));
        }
    }
    g.finish();
}

criterion_group!(benches, ssr_scaling, lp_based);
criterion_main!(benches);
