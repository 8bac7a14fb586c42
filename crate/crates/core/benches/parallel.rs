use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sailkit::families::family_instance;
use sailkit::field::{make_field, FieldDescriptor};
use sailkit::indecomp::{iota_bruteforce, BruteForceOptions};
use sailkit::par;

fn bruteforce(c: &mut Criterion) {
    let mut g = c.benchmark_group("iota_bruteforce");
    g.sample_size(10);
    let fields = [
        ("Q(sqrt 5, sqrt 3)", family_instance(0).unwrap().field),
        ("Q(sqrt 31)", make_field(FieldDescriptor::Quadratic { d: 31 }).unwrap()),
        ("shanks a=2", make_field(FieldDescriptor::SimplestCubic { a: 2 }).unwrap()),
    ];
    for (name, k) in &fields {
        for (mode, seq) in [("parallel", false), ("sequential", true)] {
            g.bench_with_input(BenchmarkId::new(mode, name), k, |b, k| {
                par::set_sequential(seq);
                b.iter(|| iota_bruteforce(k, &BruteForceOptions::default()).unwrap().count());
                par::set_sequential(false);
            });
        }
    }
    g.finish();
}

fn family_checks(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_family");
    g.sample_size(10);
    let inst = family_instance(0).unwrap();
    for (mode, seq) in [("parallel", false), ("sequential", true)] {
        g.bench_function(BenchmarkId::new(mode, "n=0"), |b| {
            par::set_sequential(seq);
            b.iter(|| sailkit::families::verify_instance(&inst).pass);
            par::set_sequential(false);
        });
    }
    g.finish();
}

criterion_group!(benches, bruteforce, family_checks);
criterion_main!(benches);
