use amenable_core::apery::{apery_limit_at, canonical_ab};
use amenable_core::arith::q;
use amenable_core::corpus;
use amenable_core::periods::{constant_terms, PeriodSequence};
use amenable_core::picard_fuchs::{annihilator, DiffOperator, GuessBounds};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn periods(c: &mut Criterion) {
    let p = corpus::entry("lg_1_3_gr25").unwrap().laurent().unwrap().unwrap();
    c.bench_function("constant_terms (1,3) N=30", |b| b.iter(|| constant_terms(black_box(&p), 30)));
}

fn guess(c: &mut Criterion) {
    let p = corpus::entry("beukers_peters").unwrap().laurent().unwrap().unwrap();
    let seq = PeriodSequence::new(constant_terms(&p, 30).values, "bp");
    c.bench_function("annihilator order 3", |b| b.iter(|| annihilator(black_box(&seq), GuessBounds::default()).unwrap()));
}

fn limits(c: &mut Criterion) {
    let rec = DiffOperator::parse("D^3 - t (34 D^3 + 51 D^2 + 27 D + 5) + t^2 (D + 1)^3").unwrap().to_recurrence(1).unwrap();
    let pair = canonical_ab(&rec, &[q(1), q(5)], &[q(0), q(6)], 300).unwrap();
    c.bench_function("apery limit N=300", |b| b.iter(|| apery_limit_at(black_box(&pair.a), &pair.b, 300, 100).unwrap()));
}

fn polytopes(c: &mut Criterion) {
    let p = corpus::entry("lg_1_3_gr25").unwrap().laurent().unwrap().unwrap();
    let newton = p.newton_polytope();
    c.bench_function("dual of a reflexive 4-polytope", |b| b.iter(|| black_box(&newton).dual().unwrap()));
}

criterion_group! {
    name = kernels;
    config = Criterion::default().sample_size(10);
    targets = periods, guess, limits, polytopes
}
criterion_main!(kernels);
