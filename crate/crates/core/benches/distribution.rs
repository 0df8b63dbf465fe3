use bosim::linalg::haar_sample;
use bosim::reconstruction::{
    reconstruct_best_with, synthesize_data, NoiseModel, ReconstructionOptions,
};
use bosim::sampler::{full_distribution_with, Restriction, SamplerOptions};
use bosim::{Execution, FockState};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

const STRATEGIES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn distribution(c: &mut Criterion) {
    let u = haar_sample(8, 1).unwrap();
    let input: FockState = "11110000".parse().unwrap();
    let mut group = c.benchmark_group("full_distribution_m8_n4");
    for (name, exec) in STRATEGIES {
        let opts = SamplerOptions {
            exec,
            ..Default::default()
        };
        group.bench_function(name, |b| {
            b.iter(|| {
                full_distribution_with(black_box(&u), &input, Restriction::All, &opts).unwrap()
            })
        });
    }
    group.finish();
}

fn reconstruction(c: &mut Criterion) {
    let u = haar_sample(6, 2).unwrap();
    let data = synthesize_data(&u, 0.95, NoiseModel::Poisson { shots: 100_000 }, 3).unwrap();
    let mut group = c.benchmark_group("reconstruct_m6");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        let opts = ReconstructionOptions {
            reference: Some(u.clone()),
            exec,
            ..Default::default()
        };
        group.bench_function(name, |b| {
            b.iter(|| reconstruct_best_with(black_box(&data), &opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, distribution, reconstruction);
criterion_main!(benches);
