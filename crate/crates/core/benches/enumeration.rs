use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use morse_core::corpus::{random_permutation, seeded_rng};
use morse_core::iso::find_set_isomorphism;
use morse_core::morse::enumerate_facets;
use morse_core::verify::{complex_reconstruction, CorpusConfig};
use morse_core::{Budget, HasseDiagram, MorseComplex, Parallelism, SimplicialComplex};

const MODES: [(&str, Parallelism); 2] = [("sequential", Parallelism::Sequential), ("parallel", Parallelism::Parallel)];

fn facets(c: &mut Criterion) {
    let mut group = c.benchmark_group("facet_enumeration");
    group.sample_size(10);
    let inputs = [
        ("tetrahedron", SimplicialComplex::simplex(3)),
        ("complete_graph_6", SimplicialComplex::simplex(5).skeleton(1)),
        ("octahedron", SimplicialComplex::closure([
            ["a", "b", "c"], ["a", "b", "d"], ["a", "e", "c"], ["a", "e", "d"],
            ["f", "b", "c"], ["f", "b", "d"], ["f", "e", "c"], ["f", "e", "d"],
        ]).unwrap()),
    ];
    for (name, k) in &inputs {
        let d = HasseDiagram::of_complex(k);
        for (mode, p) in MODES {
            let budget = Budget::default().with_parallelism(p).with_max_facets(usize::MAX);
            group.bench_with_input(BenchmarkId::new(mode, name), &d, |b, d| b.iter(|| enumerate_facets(d, &budget).unwrap().len()));
        }
    }
    group.finish();
}

fn isomorphism(c: &mut Criterion) {
    let mut group = c.benchmark_group("morse_isomorphism");
    group.sample_size(10);
    for (name, k) in [("simplex_4", SimplicialComplex::simplex(4)), ("boundary_4", SimplicialComplex::boundary_of_simplex(4))] {
        let h = random_permutation(k.num_vertices(), &mut seeded_rng(1));
        let a = MorseComplex::of_complex(&k).non_face_system();
        let b = MorseComplex::of_complex(&k.permuted(h.forward())).non_face_system();
        for (mode, p) in MODES {
            group.bench_function(BenchmarkId::new(mode, name), |bench| bench.iter(|| find_set_isomorphism(&a, &b, p).is_some()));
        }
    }
    group.finish();
}

fn corpus_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("corpus_sweep");
    group.sample_size(10).measurement_time(Duration::from_secs(20));
    for (mode, p) in MODES {
        let cfg = CorpusConfig { budget: Budget::default().with_parallelism(p), max_vertices: 4, ..CorpusConfig::default() };
        group.bench_function(BenchmarkId::new(mode, "complexes_on_4_vertices"), |b| b.iter(|| assert!(complex_reconstruction(&cfg).passed)));
    }
    group.finish();
}

criterion_group!(benches, facets, isomorphism, corpus_sweep);
criterion_main!(benches);
