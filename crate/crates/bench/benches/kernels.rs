use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qrtmodal_core::corpus;
use qrtmodal_core::generate::{generate_family, random_relabeling, GeneratorConfig};
use qrtmodal_core::harness::{run_theorems, HarnessOptions, Injected};
use qrtmodal_core::kripke::models_isomorphic;
use qrtmodal_core::linalg::random::{random_channel, random_density};
use qrtmodal_core::linalg::{apply, is_cptp, trace_distance};
use qrtmodal_core::qrt::{complete_composition, qrt_isomorphic};
use qrtmodal_core::smc::{build_smc, verify_smc_laws, DEFAULT_OBJECT_CAP, DEFAULT_TRIPLE_BUDGET};
use qrtmodal_core::translate::functor_f_star;
use qrtmodal_core::Tolerances;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn linalg(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let tol = Tolerances::default();
    let ch = random_channel(3, 3, 4, &mut rng);
    let (x, y) = (random_density(3, 3, &mut rng), random_density(3, 2, &mut rng));
    c.bench_function("is_cptp 3x3 rank 4", |b| b.iter(|| is_cptp(black_box(&ch), &tol).unwrap()));
    c.bench_function("apply 3x3", |b| b.iter(|| apply(black_box(&ch), &x, &tol).unwrap()));
    c.bench_function("trace_distance qutrit", |b| b.iter(|| trace_distance(black_box(&x), &y).unwrap()));
}

fn qrt_kernels(c: &mut Criterion) {
    let e = corpus::entanglement();
    c.bench_function("complete_composition entanglement", |b| b.iter(|| complete_composition(black_box(&e)).unwrap()));
    c.bench_function("functor_f_star entanglement", |b| b.iter(|| functor_f_star(black_box(&e)).unwrap()));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let r = random_relabeling(&e, &mut rng).unwrap();
    c.bench_function("qrt_isomorphic relabeled entanglement", |b| b.iter(|| qrt_isomorphic(black_box(&e), &r).unwrap()));
    let (fe, fr) = (functor_f_star(&e).unwrap(), functor_f_star(&r).unwrap());
    c.bench_function("models_isomorphic relabeled entanglement", |b| {
        b.iter(|| models_isomorphic(black_box(&fe.model), &fr.model, u64::MAX).unwrap())
    });
    let smc = build_smc(&fe.starred().unwrap(), DEFAULT_OBJECT_CAP).unwrap();
    c.bench_function("smc laws entanglement", |b| b.iter(|| verify_smc_laws(black_box(&smc), DEFAULT_TRIPLE_BUDGET)));
}

fn harness(c: &mut Criterion) {
    let config = GeneratorConfig { count: 5, max_total_states: Some(8), ..Default::default() };
    let mut group = c.benchmark_group("harness");
    group.sample_size(10);
    group.bench_function("generate 5", |b| b.iter(|| generate_family(black_box(&config), Tolerances::default()).unwrap()));
    let family: Vec<_> = generate_family(&config, Tolerances::default())
        .unwrap()
        .into_iter()
        .enumerate()
        .map(|(i, q)| (format!("q{i}"), q))
        .collect();
    group.bench_function("run_theorems 5", |b| {
        b.iter(|| run_theorems(black_box(&family), &Injected::default(), &HarnessOptions::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, linalg, qrt_kernels, harness);
criterion_main!(benches);
