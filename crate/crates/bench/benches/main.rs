use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use plk_core::abss::{generate_random_abss, AbssParams};
use plk_core::random::{self, Shape};
use plk_core::transform::eliminate_contraction;
use plk_core::{decide, prove_cutfree, Sequent};

fn sequents(n: usize, provable: bool) -> Vec<Sequent> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let shape = Shape {
        max_comp: 8,
        max_side: 3,
        ..Shape::default()
    };
    (0..n)
        .map(|_| {
            if provable {
                random::provable_sequent(&mut rng, &shape)
            } else {
                random::sequent(&mut rng, &shape)
            }
        })
        .collect()
}

fn bench_decide(c: &mut Criterion) {
    let xs = sequents(200, false);
    c.bench_function("decide/200 random", |b| {
        b.iter(|| xs.iter().filter(|s| decide(black_box(s)).unwrap()).count())
    });
}

fn bench_prove(c: &mut Criterion) {
    let xs = sequents(200, true);
    c.bench_function("prove_cutfree/200 provable", |b| {
        b.iter(|| {
            xs.iter()
                .map(|s| prove_cutfree(black_box(s)).unwrap().size())
                .sum::<usize>()
        })
    });
}

fn bench_contraction(c: &mut Criterion) {
    let proofs: Vec<_> = sequents(50, true)
        .iter()
        .map(|s| prove_cutfree(s).unwrap())
        .collect();
    c.bench_function("eliminate_contraction/50 proofs", |b| {
        b.iter(|| {
            proofs
                .iter()
                .map(|p| eliminate_contraction(black_box(p)).unwrap().size())
                .sum::<usize>()
        })
    });
}

fn bench_closure(c: &mut Criterion) {
    let params = AbssParams {
        tokens: 200,
        rules: 12,
        instances_per_rule: 40,
        max_premises: 3,
        ..AbssParams::default()
    };
    c.bench_function("abss_closure/200 tokens", |b| {
        b.iter_batched(
            || generate_random_abss(5, &params),
            |a| a.closure(None).unwrap().len(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(
    benches,
    bench_decide,
    bench_prove,
    bench_contraction,
    bench_closure
);
criterion_main!(benches);
