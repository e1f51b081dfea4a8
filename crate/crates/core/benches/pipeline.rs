//! Event pipeline throughput: rayon workers against the sequential path.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use ecalsim::analysis::{select_ds_pi, Cuts};
use ecalsim::detector::{reconstruct_event, ScenarioSet};
use ecalsim::evtgen::{chains, generate_signal_event, GeneratorConfig};
use ecalsim::parallel::{map_indexed, map_indexed_sequential, with_threads};
use ecalsim::rng::{stream, Stage};

const EVENTS: u64 = 2_000;

fn pipeline(c: &mut Criterion) {
    let gen = GeneratorConfig::builtin();
    let scenario = ScenarioSet::builtin().get("ultra-granular").unwrap().clone();
    let cuts = Cuts::builtin();
    let chain = chains::bs_ds_pi();
    let one = |i: u64| {
        let ev = generate_signal_event(&gen, 1, i, &chain).unwrap();
        let reco = reconstruct_event(&ev, &scenario, &mut stream(ev.seed, Stage::Detector));
        select_ds_pi(&reco, &scenario, &cuts).len()
    };

    let mut group = c.benchmark_group("ds_pi_pipeline");
    group.throughput(Throughput::Elements(EVENTS));
    group.sample_size(10);
    group.bench_function("sequential", |b| b.iter(|| map_indexed_sequential(EVENTS, one)));
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    for threads in [1, cores.max(2)] {
        group.bench_with_input(BenchmarkId::new("map_indexed", threads), &threads, |b, &t| {
            b.iter(|| with_threads(Some(t), || map_indexed(EVENTS, one)))
        });
    }
    group.finish();
}

criterion_group!(benches, pipeline);
criterion_main!(benches);
