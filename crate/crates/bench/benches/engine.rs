use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use transporter_bench::gl32_building;
use transporter_core::gmodule::rational_irreducibles;
use transporter_core::gposet::p_subgroup_poset;
use transporter_core::group::fixtures;
use transporter_core::homology::{build_complex, homology, lowest_homology};
use transporter_core::inductions::steinberg;
use transporter_core::PSubgroupVariant;

fn complex(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_complex");
    for m in ["trivial", "natural", "regular"] {
        let f = gl32_building(m);
        group.bench_with_input(BenchmarkId::from_parameter(m), &f, |b, f| b.iter(|| build_complex(f).unwrap()));
    }
    group.finish();
}

fn homology_bench(c: &mut Criterion) {
    let natural = build_complex(&gl32_building("natural")).unwrap();
    c.bench_function("homology/gl32_natural", |b| b.iter(|| homology(&natural).unwrap()));
    let regular = build_complex(&gl32_building("regular")).unwrap();
    let mut group = c.benchmark_group("lowest_homology");
    group.sample_size(10);
    group.bench_function("gl32_regular", |b| b.iter(|| lowest_homology(&regular).unwrap()));
    group.finish();
}

fn characters(c: &mut Criterion) {
    let gl = fixtures::gl32().unwrap();
    let bp = p_subgroup_poset(&gl, 2, PSubgroupVariant::Bp).unwrap();
    c.bench_function("steinberg/gl32", |b| b.iter(|| steinberg(&bp).unwrap()));
    let s5 = fixtures::symmetric(5).unwrap();
    c.bench_function("rational_irreducibles/s5", |b| b.iter(|| rational_irreducibles(&s5).unwrap()));
}

criterion_group!(benches, complex, homology_bench, characters);
criterion_main!(benches);
