//! Pipeline stages on the default rayon pool against a single-thread pool.
//! Build without the `parallel` feature for the plain sequential code path.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qzec::graph::{clique_number, product};
use qzec::random::{random_channel, seeded};
use qzec::search::{search_optimum, SearchStrategy, StrategyKind};
use qzec::{characteristic_graph, pentagon, Graph, InputEnsemble, Measurement};
use rayon::ThreadPool;

fn pools() -> Vec<(&'static str, ThreadPool)> {
    let build = |n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
    };
    vec![("sequential", build(1)), ("parallel", build(0))]
}

fn clique(c: &mut Criterion) {
    let g = product(&Graph::cycle(5), 3).unwrap().graph;
    let mut group = c.benchmark_group("clique_c5_cubed");
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| clique_number(&g).size))
        });
    }
    group.finish();
}

fn products(c: &mut Criterion) {
    let g = Graph::cycle(7);
    let mut group = c.benchmark_group("product_c7_cubed");
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| product(&g, 3).unwrap().graph.edge_count()))
        });
    }
    group.finish();
}

fn characteristic(c: &mut Criterion) {
    let mut rng = seeded(7);
    let ch = random_channel(&mut rng, 6, 2).tensor(&pentagon(0.35, 0.35).unwrap());
    let d = ch.dim();
    let ens = InputEnsemble::computational_basis(d);
    let meas = Measurement::computational(d);
    let mut group = c.benchmark_group("characteristic_graph_d30");
    group.sample_size(20);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                pool.install(|| {
                    characteristic_graph(&ch, &ens, &meas, 1e-7)
                        .unwrap()
                        .edge_count()
                })
            })
        });
    }
    group.finish();
}

fn search(c: &mut Criterion) {
    let ch = pentagon(0.35, 0.35).unwrap();
    let strategy = SearchStrategy {
        kinds: vec![
            StrategyKind::Canonical,
            StrategyKind::RandomBasis,
            StrategyKind::Refine,
        ],
        trials: 4,
        seed: 1,
        ..SearchStrategy::default()
    };
    let mut group = c.benchmark_group("search_pentagon");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| search_optimum(&ch, &strategy).unwrap().report.best_rate))
        });
    }
    group.finish();
}

criterion_group!(benches, clique, products, characteristic, search);
criterion_main!(benches);
