use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cardzkp::engine::run;
use cardzkp::spanning::SpanningProtocol;
use cardzkp::{par, Graph, SeededSource};

fn seeded_runs(c: &mut Criterion) {
    let g = Graph::cycle(6);
    let proto = SpanningProtocol::new(&g);
    let script = proto.honest_script(Graph::path(6).edges()).unwrap();
    let once = |seed: u64| run(&proto.program, &script, &mut SeededSource::new(seed)).unwrap().transcript.len();
    let mut group = c.benchmark_group("seeded_runs_c6");
    for runs in [16u64, 128] {
        group.bench_with_input(BenchmarkId::new("parallel", runs), &runs, |b, &n| {
            b.iter(|| par::map((0..n).collect(), once))
        });
        group.bench_with_input(BenchmarkId::new("sequential", runs), &runs, |b, &n| {
            b.iter(|| par::map_sequential((0..n).collect(), once))
        });
    }
    group.finish();
}

criterion_group!(benches, seeded_runs);
criterion_main!(benches);
