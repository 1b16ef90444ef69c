use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nilpotent::{
    centralizer, eval_free, extgcd_bounded, full_form, quotient_by_elements, CoordinateMatrix,
    Coords, ExpWord, FreeNilpotentGroup, MalcevGroup, QuotientPresentation,
};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn extgcd(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut group = c.benchmark_group("extgcd_bounded");
    for n in [4usize, 16, 32] {
        let a: Vec<BigInt> = (0..n)
            .map(|_| BigInt::from(rng.gen_range(-500..=500)))
            .collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| extgcd_bounded(black_box(a)))
        });
    }
    group.finish();
}

fn binary_exponents(c: &mut Criterion) {
    let mut group = c.benchmark_group("eval_free");
    for (cl, r) in [(2usize, 2usize), (3, 2), (4, 3)] {
        let free = FreeNilpotentGroup::new(cl, r).unwrap();
        let n: BigInt = BigInt::from(1) << 60;
        let w = ExpWord::from_factors((0..r).flat_map(|i| [(i, n.clone()), ((i + 1) % r, -&n)]));
        group.bench_with_input(
            BenchmarkId::new("2^60", format!("c{cl}_r{r}")),
            &w,
            |b, w| b.iter(|| eval_free(&free, black_box(w)).unwrap()),
        );
    }
    group.finish();
}

fn random_rows(rng: &mut ChaCha8Rng, m: usize, count: usize) -> Vec<Coords> {
    (0..count)
        .map(|_| {
            Coords::new(
                (0..m)
                    .map(|_| BigInt::from(rng.gen_range(-20..=20)))
                    .collect(),
            )
        })
        .collect()
}

fn reduction(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut group = c.benchmark_group("full_form");
    for (cl, r) in [(2usize, 2usize), (3, 2), (3, 3)] {
        let p = QuotientPresentation::free_group(cl, r).unwrap();
        let gens = random_rows(&mut rng, p.m(), 4);
        group.bench_with_input(
            BenchmarkId::new("free", format!("c{cl}_r{r}")),
            &gens,
            |b, g| b.iter(|| full_form(&p, &CoordinateMatrix::new(g.clone()), false).unwrap()),
        );
        let free = FreeNilpotentGroup::new(cl, r).unwrap();
        let mut rel = Coords::identity(free.m());
        rel[0] = BigInt::from(6);
        let q = quotient_by_elements(&free, &[rel]).unwrap();
        group.bench_with_input(
            BenchmarkId::new("torsion", format!("c{cl}_r{r}")),
            &gens,
            |b, g| {
                let g: Vec<Coords> = g.iter().map(|x| q.reduce(x)).collect();
                b.iter(|| full_form(&q, &CoordinateMatrix::new(g.clone()), false).unwrap())
            },
        );
    }
    group.finish();
}

fn centralizers(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = QuotientPresentation::free_group(3, 2).unwrap();
    let g = random_rows(&mut rng, p.m(), 1).remove(0);
    c.bench_function("centralizer/c3_r2", |b| {
        b.iter(|| centralizer(&p, black_box(&g)).unwrap())
    });
}

criterion_group!(benches, extgcd, binary_exponents, reduction, centralizers);
criterion_main!(benches);
